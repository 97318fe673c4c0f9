#include "ptlz/heun_integrals.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace ptlz {

// --------------------------------------------------------------------------
// Rational / RationalPoly

namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Reduce in 128-bit and narrow; products of two reduced 64-bit rationals
// always fit the wide intermediates, so overflow can only appear in a result
// that genuinely needs more than 64 bits, and then it is reported loudly.
Rational reduce128(i128 n, i128 d) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  constexpr i128 lo = std::numeric_limits<long long>::min();
  constexpr i128 hi = std::numeric_limits<long long>::max();
  if (n < lo || n > hi || d > hi)
    throw std::overflow_error("rational arithmetic exceeds 64-bit range");
  Rational r;
  r.num = static_cast<long long>(n);
  r.den = static_cast<long long>(d);
  return r;
}

}  // namespace

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::operator+(Rational o) const {
  return reduce128(i128(num) * o.den + i128(o.num) * den, i128(den) * o.den);
}
Rational Rational::operator-(Rational o) const {
  return reduce128(i128(num) * o.den - i128(o.num) * den, i128(den) * o.den);
}
Rational Rational::operator*(Rational o) const {
  return reduce128(i128(num) * o.num, i128(den) * o.den);
}
Rational Rational::operator/(Rational o) const {
  if (o.num == 0) throw std::invalid_argument("rational division by zero");
  return reduce128(i128(num) * o.den, i128(den) * o.num);
}

RationalPoly RationalPoly::monomial(Rational c, int power) {
  if (power < 0) throw std::invalid_argument("negative monomial power");
  RationalPoly p;
  p.c_.assign(power + 1, Rational{});
  p.c_[power] = c;
  return p;
}

Rational RationalPoly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return Rational{};
  return c_[k];
}

void RationalPoly::set_coeff(int k, Rational v) {
  if (k < 0) throw std::out_of_range("negative coefficient index");
  if (k >= static_cast<int>(c_.size())) c_.resize(k + 1);
  c_[k] = v;
}

RationalPoly& RationalPoly::operator+=(const RationalPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] = c_[k] + o.c_[k];
  return *this;
}

RationalPoly RationalPoly::operator*(Rational s) const {
  RationalPoly r = *this;
  for (auto& c : r.c_) c = c * s;
  return r;
}

RationalPoly RationalPoly::derivative() const {
  RationalPoly r;
  if (c_.size() <= 1) return r;
  r.c_.resize(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k)
    r.c_[k - 1] = c_[k] * Rational{static_cast<long long>(k), 1};
  return r;
}

RationalPoly RationalPoly::times_var() const {
  RationalPoly r;
  if (c_.empty()) return r;
  r.c_.resize(c_.size() + 1);
  for (size_t k = 0; k < c_.size(); ++k) r.c_[k + 1] = c_[k];
  return r;
}

bool RationalPoly::operator==(const RationalPoly& o) const {
  const int d = std::max(degree(), o.degree());
  for (int k = 0; k <= d; ++k)
    if (!(coeff(k) == o.coeff(k))) return false;
  return true;
}

TruncatedSeries RationalPoly::to_series(Var v, int order) const {
  TruncatedSeries s(v, order);
  const int top = std::min(degree(), order);
  for (int k = 0; k <= top; ++k) s.set_coeff(k, cplx{coeff(k).value(), 0.0});
  return s;
}

// --------------------------------------------------------------------------

namespace {

// R''' + 4 V R' + 2 V' R = 2 t^n termwise:
//   (k+1)(k+2)(k+3) r_{k+3} + sum_j A_j (4k+4-2j) r_{k+1-j} = 2 delta_{kn}
// with r_0 = r_1 = r_2 = 0 (the particular solution vanishing to third
// order at the origin).
TruncatedSeries series_R(const QuarticCoeffs& V, int n, int order) {
  if (n < 0) throw std::invalid_argument("negative moment index");
  TruncatedSeries R(Var::t, order);
  for (int k = 0; k + 3 <= order; ++k) {
    cplx rhs = (k == n) ? cplx{2.0, 0.0} : cplx{0.0, 0.0};
    for (int j = 0; j <= 4; ++j) {
      const int idx = k + 1 - j;
      if (idx < 0) continue;
      rhs -= V.a[j] * (4.0 * k + 4.0 - 2.0 * j) * R.coeff(idx);
    }
    const double fac = (k + 1.0) * (k + 2.0) * (k + 3.0);
    R.set_coeff(k + 3, rhs / fac);
  }
  return R;
}

// Q = -R', P = R''/2 + V R. R arrives two orders high so the triple is
// uniformly truncated at `order`.
IntegralCoeffTriple make_triple(const TruncatedSeries& R_hi,
                                const QuarticCoeffs& V, int n, int order,
                                Regime regime) {
  IntegralCoeffTriple tr;
  tr.n = n;
  tr.regime = regime;
  tr.potential = V;
  const Var var = R_hi.var();
  const TruncatedSeries dR = R_hi.differentiate();
  tr.R = R_hi.truncated(order);
  tr.Q = (dR * cplx{-1.0, 0.0}).truncated(order);
  tr.P = dR.differentiate().truncated(order) * cplx{0.5, 0.0} +
         V.to_series(var, order) * tr.R;
  return tr;
}

}  // namespace

IntegralCoeffTriple rn_series(const QuarticCoeffs& V, int n, int order) {
  return make_triple(series_R(V, n, order + 2), V, n, order,
                     Regime::generic_series);
}

IntegralCoeffTriple rn_airy(int n, int order) {
  if (n < 0) throw std::invalid_argument("negative moment index");
  if (order < 0) order = n + 2;
  // R_n = -z^n/(2n+1) + n(n-1)(n-2)/(2(2n+1)) R_{n-3}
  std::vector<RationalPoly> R(n + 1);
  for (int m = 0; m <= n; ++m) {
    R[m] = RationalPoly::monomial(Rational{-1, 2 * m + 1}, m);
    if (m >= 3)
      R[m] += R[m - 3] * Rational{static_cast<long long>(m) * (m - 1) * (m - 2),
                                  2 * (2 * m + 1)};
  }
  IntegralCoeffTriple tr;
  tr.n = n;
  tr.regime = Regime::airy;
  tr.potential = airy_potential();
  tr.R = R[n].to_series(Var::z, order);
  RationalPoly Q = R[n].derivative() * Rational{-1, 1};
  tr.Q = Q.to_series(Var::z, order);
  RationalPoly P = R[n].derivative().derivative() * Rational{1, 2};
  P += R[n].times_var() * Rational{-1, 1};
  tr.P = P.to_series(Var::z, order);
  return tr;
}

IntegralCoeffTriple rn_airy_closed(int n, int order) {
  if (n < 0) throw std::invalid_argument("negative moment index");
  if (order < 0) order = n + 2;
  // Unrolling the ladder: R_n = -sum_j c_j z^{n-3j} with c_0 = 1/(2n+1) and
  //   c_j = c_{j-1} (n-3j+1)(n-3j+2)(n-3j+3) / (2 (2n+1-6j)),
  // the denominator being the gamma-ratio product Gamma(x-j)/Gamma(x) at
  // x = (2n+1)/6 scaled out one factor per step.
  RationalPoly R;
  Rational c{1, 2 * n + 1};
  for (int j = 0;; ++j) {
    const int pow = n - 3 * j;
    if (pow < 0) break;
    if (j > 0) {
      const long long a = pow + 1, b = pow + 2, d = pow + 3;
      c = c * Rational{a * b * d, 2 * (2 * n + 1 - 6 * j)};
      if (c.num == 0) break;
    }
    R.set_coeff(pow, Rational{-1, 1} * c);
  }
  IntegralCoeffTriple tr;
  tr.n = n;
  tr.regime = Regime::airy;
  tr.potential = airy_potential();
  tr.R = R.to_series(Var::z, order);
  tr.Q = (R.derivative() * Rational{-1, 1}).to_series(Var::z, order);
  RationalPoly P = R.derivative().derivative() * Rational{1, 2};
  P += R.times_var() * Rational{-1, 1};
  tr.P = P.to_series(Var::z, order);
  return tr;
}

IntegralCoeffTriple rn_airy_numeric(int n, int order) {
  if (n < 0) throw std::invalid_argument("negative moment index");
  if (order < 0) order = n + 2;
  const int hi = order + 2;
  // Same ladder as rn_airy, carried in floating point.  Each rung only adds a
  // constant multiple of the rung three below, so truncating powers above
  // `hi` never contaminates the retained coefficients.
  std::vector<TruncatedSeries> R;
  R.reserve(n + 1);
  for (int m = 0; m <= n; ++m) {
    TruncatedSeries rm(Var::z, hi);
    if (m <= hi) rm.set_coeff(m, cplx{-1.0 / (2.0 * m + 1.0), 0.0});
    if (m >= 3)
      rm += R[m - 3] *
            cplx{m * (m - 1.0) * (m - 2.0) / (2.0 * (2.0 * m + 1.0)), 0.0};
    R.push_back(rm);
  }
  return make_triple(R[n], airy_potential(), n, order, Regime::airy);
}

IntegralCoeffTriple rn_bessel(double beta, int n, int order) {
  if (n < 0) throw std::invalid_argument("negative moment index");
  if (beta == 0.0) throw std::invalid_argument("bessel family needs beta != 0");
  const QuarticCoeffs V = pure_quartic(beta);
  const double b2 = beta * beta;
  const int hi = order + 2;
  TruncatedSeries R(Var::t, hi);
  if (n % 6 <= 2) {
    // Sextic-stride series r_p, p = n+3 mod 6, seeded by the particular
    // solution; identical to the vanishing-seed path for these residues.
    double r = 2.0 / ((n + 1.0) * (n + 2.0) * (n + 3.0));
    for (int p = n + 3; p <= hi; p += 6) {
      if (p > n + 3) r *= -4.0 * b2 * (p - 4.0) / ((p - 2.0) * (p - 1.0) * p);
      R.set_coeff(p, cplx{r, 0.0});
    }
  } else {
    // Polynomial ladder from the closed seeds
    //   R_3 = 1/(4 b^2), R_4 = t/(6 b^2), R_5 = t^2/(8 b^2),
    //   R_{m+6} = t^{m+3}/(2 b^2 (m+5)) - (m+3)(m+2)(m+1)/(4 b^2 (m+5)) R_m.
    const int res = n % 6;  // 3, 4 or 5
    R.set_coeff(res - 3, cplx{1.0 / ((2.0 * res - 2.0) * b2), 0.0});
    for (int m = res; m + 6 <= n; m += 6) {
      TruncatedSeries next(Var::t, hi);
      if (m + 3 <= hi)
        next.set_coeff(m + 3, cplx{1.0 / (2.0 * b2 * (m + 5.0)), 0.0});
      next += R * cplx{-(m + 3.0) * (m + 2.0) * (m + 1.0) / (4.0 * b2 * (m + 5.0)),
                       0.0};
      R = next;
    }
  }
  return make_triple(R, V, n, order, Regime::quartic_bessel);
}

IntegralCoeffTriple rn_general_recursive(const QuarticCoeffs& V, int n,
                                         int order) {
  if (n < 0) throw std::invalid_argument("negative moment index");
  if (V.a[4] == cplx{0.0, 0.0})
    throw std::invalid_argument("solved-form recursion needs a quartic term");
  const int hi = order + 2;
  std::vector<TruncatedSeries> R;
  for (int m = 0; m <= std::min(n, 2); ++m) R.push_back(series_R(V, m, hi));
  for (int m = 3; m <= n; ++m) {
    const int nn = m - 3;
    const cplx span = 2.0 * (2.0 * nn + 4.0) * V.a[4];
    TruncatedSeries next =
        TruncatedSeries::monomial(Var::t, 2.0 / span, nn, hi);
    if (nn >= 3)
      next += R[nn - 3] *
              (-static_cast<double>(nn) * (nn - 1.0) * (nn - 2.0) / span);
    for (int k = -1; k <= 2; ++k) {
      const int idx = nn + k;
      if (idx < 0) continue;
      const cplx w =
          ((2.0 * nn + k + 1.0) / (2.0 * nn + 4.0)) * (V.a[k + 1] / V.a[4]);
      next += R[idx] * (-w);
    }
    R.push_back(next);
  }
  return make_triple(R[n], V, n, order, Regime::generic_series);
}

LmnTriple lmn(const std::vector<IntegralCoeffTriple>& family,
              const QuarticCoeffs& V, int n, int order) {
  if (n < 0) throw std::invalid_argument("negative moment index");
  if (static_cast<int>(family.size()) < n + 5)
    throw std::invalid_argument("family too short for requested moment");
  const Var var = family[n].R.var();
  LmnTriple out{TruncatedSeries(var, order), TruncatedSeries(var, order),
                TruncatedSeries(var, order)};
  for (int k = 0; k <= 4; ++k) {
    const cplx A = V.a[k];
    if (A == cplx{0.0, 0.0}) continue;
    out.L += family[n + k].P.truncated(order) * A;
    out.M += family[n + k].Q.truncated(order) * A;
    out.N += family[n + k].R.truncated(order) * A;
  }
  if (n >= 2) {
    const cplx h{n * (n - 1.0) / 2.0, 0.0};
    out.L += family[n - 2].P.truncated(order) * h;
    out.M += family[n - 2].Q.truncated(order) * h;
    out.N += family[n - 2].R.truncated(order) * h;
  }
  if (n >= 1)
    out.L -= TruncatedSeries::monomial(var, cplx{n / 2.0, 0.0}, n - 1, order);
  out.M += TruncatedSeries::monomial(var, cplx{1.0, 0.0}, n, order);
  return out;
}

LmnTriple lmn(const QuarticCoeffs& V, int n, int order) {
  std::vector<IntegralCoeffTriple> family;
  family.reserve(n + 5);
  for (int m = 0; m <= n + 4; ++m) family.push_back(rn_series(V, m, order));
  return lmn(family, V, n, order);
}

TruncatedSeries triple_apply(const IntegralCoeffTriple& tr,
                             const TruncatedSeries& y1,
                             const TruncatedSeries& dy1,
                             const TruncatedSeries& y2,
                             const TruncatedSeries& dy2) {
  return tr.P * y1 * y2 + tr.Q * cplx{0.5, 0.0} * (y1 * dy2 + y2 * dy1) +
         tr.R * dy1 * dy2;
}

TruncatedSeries integral_y1_dy2(int n, cplx wronskian,
                                const IntegralCoeffTriple& lower,
                                const TruncatedSeries& y1,
                                const TruncatedSeries& dy1,
                                const TruncatedSeries& y2,
                                const TruncatedSeries& dy2) {
  if (n < 1) throw std::invalid_argument("use the momentless overload for n=0");
  if (lower.n != n - 1)
    throw std::invalid_argument("lower triple must carry moment n-1");
  TruncatedSeries prod = y1 * y2;
  const Var var = prod.var();
  const int ord = prod.order();
  TruncatedSeries out =
      TruncatedSeries::monomial(var, cplx{1.0, 0.0}, n, ord) * prod;
  if (n + 1 <= ord)
    out += TruncatedSeries::monomial(var, wronskian / (n + 1.0), n + 1, ord);
  out -= triple_apply(lower, y1, dy1, y2, dy2) * cplx{double(n), 0.0};
  out *= cplx{0.5, 0.0};
  return out;
}

TruncatedSeries integral_y1_dy2(cplx wronskian, const TruncatedSeries& y1,
                                const TruncatedSeries& y2) {
  TruncatedSeries out = y1 * y2;
  if (out.order() >= 1)
    out += TruncatedSeries::monomial(out.var(), wronskian, 1, out.order());
  out *= cplx{0.5, 0.0};
  return out;
}

bool compatible(const IntegralCoeffTriple& tr, const FundamentalPair& pair) {
  return tr.potential.close_to(pair.potential);
}

}  // namespace ptlz
