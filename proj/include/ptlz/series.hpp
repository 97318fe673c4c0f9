#pragma once

#include <complex>
#include <iosfwd>
#include <Eigen/Dense>

namespace ptlz {

using cplx = std::complex<double>;

/// Formal variable tag. Series in different variables never mix: the sweep
/// machinery lives in t, the linearized turning-point machinery in z.
enum class Var { t, z };

const char* var_name(Var v);

/// Default truncation order for the series-valued machinery. Generous enough
/// that sextic-stride hypergeometric tails are negligible for |t| <= 2.
inline constexpr int kDefaultOrder = 60;

struct SeriesEval {
  cplx value;
  double tail;         // |c_N p^N|, crude truncation indicator
  bool within_radius;  // false when a declared validity radius was exceeded
};

/// Dense truncated power series  sum_{k=0}^{N} c_k x^k.
///
/// Binary operations require matching variable tags and truncate the result
/// to the smaller operand order, so a chain of operations never pretends to
/// more accuracy than its weakest input. Coefficients are complex doubles.
class TruncatedSeries {
 public:
  TruncatedSeries() : TruncatedSeries(Var::t, kDefaultOrder) {}
  TruncatedSeries(Var v, int order);
  TruncatedSeries(Var v, Eigen::VectorXcd coeffs);

  static TruncatedSeries monomial(Var v, cplx c, int power,
                                  int order = kDefaultOrder);
  static TruncatedSeries constant(Var v, cplx c, int order = kDefaultOrder);

  Var var() const { return var_; }
  int order() const { return static_cast<int>(c_.size()) - 1; }

  /// c_k; zero for k beyond the truncation order.
  cplx coeff(int k) const;
  void set_coeff(int k, cplx v);
  const Eigen::VectorXcd& coeffs() const { return c_; }

  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries& operator-=(const TruncatedSeries& o);
  TruncatedSeries& operator*=(cplx s);

  TruncatedSeries differentiate() const;
  /// Antiderivative with zero constant term; order grows by one so that
  /// integrate().differentiate() restores the input.
  TruncatedSeries integrate() const;

  /// Horner evaluation. `radius` is the caller-declared validity radius;
  /// exceeding it only sets a flag, the value is still computed.
  SeriesEval evaluate(cplx point, double radius) const;
  SeriesEval evaluate(cplx point) const;

  /// Re-truncate (pad with zeros or drop high coefficients).
  TruncatedSeries truncated(int order) const;

  /// One coefficient per line: "k re im".
  void dump(std::ostream& os) const;

  double max_abs_coeff() const;

 private:
  Var var_;
  Eigen::VectorXcd c_;
};

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator*(cplx s, const TruncatedSeries& a);
TruncatedSeries operator*(const TruncatedSeries& a, cplx s);

}  // namespace ptlz
