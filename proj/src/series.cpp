#include "ptlz/series.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "ptlz/detail/format.hpp"

namespace ptlz {

const char* var_name(Var v) { return v == Var::t ? "t" : "z"; }

namespace {
void require_same_var(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.var() != b.var())
    throw std::invalid_argument(std::string("series variable mismatch: ") +
                                var_name(a.var()) + " vs " + var_name(b.var()));
}
}  // namespace

TruncatedSeries::TruncatedSeries(Var v, int order) : var_(v) {
  if (order < 0) throw std::invalid_argument("series order must be >= 0");
  c_ = Eigen::VectorXcd::Zero(order + 1);
}

TruncatedSeries::TruncatedSeries(Var v, Eigen::VectorXcd coeffs)
    : var_(v), c_(std::move(coeffs)) {
  if (c_.size() == 0) throw std::invalid_argument("empty coefficient vector");
}

TruncatedSeries TruncatedSeries::monomial(Var v, cplx c, int power, int order) {
  if (power < 0 || power > order)
    throw std::invalid_argument("monomial power out of range");
  TruncatedSeries s(v, order);
  s.c_[power] = c;
  return s;
}

TruncatedSeries TruncatedSeries::constant(Var v, cplx c, int order) {
  return monomial(v, c, 0, order);
}

cplx TruncatedSeries::coeff(int k) const {
  if (k < 0) throw std::out_of_range("negative coefficient index");
  if (k >= c_.size()) return {0.0, 0.0};
  return c_[k];
}

void TruncatedSeries::set_coeff(int k, cplx v) {
  if (k < 0 || k >= c_.size())
    throw std::out_of_range("coefficient index out of range");
  c_[k] = v;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
  require_same_var(*this, o);
  const int n = std::min(order(), o.order());
  Eigen::VectorXcd r = c_.head(n + 1);
  r += o.c_.head(n + 1);
  c_ = std::move(r);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
  require_same_var(*this, o);
  const int n = std::min(order(), o.order());
  Eigen::VectorXcd r = c_.head(n + 1);
  r -= o.c_.head(n + 1);
  c_ = std::move(r);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(cplx s) {
  c_ *= s;
  return *this;
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  TruncatedSeries r = a;
  r += b;
  return r;
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
  TruncatedSeries r = a;
  r -= b;
  return r;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_var(a, b);
  const int n = std::min(a.order(), b.order());
  TruncatedSeries r(a.var(), n);
  for (int k = 0; k <= n; ++k) {
    cplx s{0.0, 0.0};
    for (int j = 0; j <= k; ++j) s += a.coeff(j) * b.coeff(k - j);
    r.set_coeff(k, s);
  }
  return r;
}

TruncatedSeries operator*(cplx s, const TruncatedSeries& a) {
  TruncatedSeries r = a;
  r *= s;
  return r;
}

TruncatedSeries operator*(const TruncatedSeries& a, cplx s) { return s * a; }

TruncatedSeries TruncatedSeries::differentiate() const {
  if (order() == 0) return TruncatedSeries(var_, 0);
  TruncatedSeries r(var_, order() - 1);
  for (int k = 1; k <= order(); ++k)
    r.c_[k - 1] = c_[k] * static_cast<double>(k);
  return r;
}

TruncatedSeries TruncatedSeries::integrate() const {
  TruncatedSeries r(var_, order() + 1);
  for (int k = 0; k <= order(); ++k) r.c_[k + 1] = c_[k] / (k + 1.0);
  return r;
}

SeriesEval TruncatedSeries::evaluate(cplx point, double radius) const {
  cplx acc{0.0, 0.0};
  for (int k = order(); k >= 0; --k) acc = acc * point + c_[k];
  double tail = std::abs(c_[order()]) * std::pow(std::abs(point), order());
  return {acc, tail, std::abs(point) <= radius};
}

SeriesEval TruncatedSeries::evaluate(cplx point) const {
  SeriesEval ev =
      evaluate(point, std::numeric_limits<double>::infinity());
  return ev;
}

TruncatedSeries TruncatedSeries::truncated(int new_order) const {
  TruncatedSeries r(var_, new_order);
  const int n = std::min(new_order, order());
  r.c_.head(n + 1) = c_.head(n + 1);
  return r;
}

void TruncatedSeries::dump(std::ostream& os) const {
  for (int k = 0; k <= order(); ++k)
    os << k << ' ' << detail::fmt17(c_[k].real()) << ' '
       << detail::fmt17(c_[k].imag()) << '\n';
}

double TruncatedSeries::max_abs_coeff() const {
  return c_.cwiseAbs().maxCoeff();
}

}  // namespace ptlz
