#pragma once

#include <vector>

#include "ptlz/quartic.hpp"
#include "ptlz/specfun.hpp"

namespace ptlz {

// ---------------------------------------------------------------------------
// Exact rational scraps for the turning-point table, where every entry is a
// polynomial with small rational coefficients.

struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);
  Rational operator+(Rational o) const;
  Rational operator-(Rational o) const;
  Rational operator*(Rational o) const;
  Rational operator/(Rational o) const;
  bool operator==(const Rational& o) const = default;
  double value() const { return double(num) / double(den); }
};

class RationalPoly {
 public:
  RationalPoly() = default;
  static RationalPoly monomial(Rational c, int power);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Rational coeff(int k) const;
  void set_coeff(int k, Rational v);

  RationalPoly& operator+=(const RationalPoly& o);
  RationalPoly operator*(Rational s) const;
  RationalPoly derivative() const;
  RationalPoly times_var() const;  // multiply by the variable
  bool operator==(const RationalPoly& o) const;

  TruncatedSeries to_series(Var v, int order) const;

 private:
  std::vector<Rational> c_;
};

// ---------------------------------------------------------------------------
// Coefficient triples (P_n, Q_n, R_n) representing
//   int t^n y1 y2 dt = P_n y1 y2 + (Q_n/2)(y1 y2' + y2 y1') + R_n y1' y2'
// for any two solutions of y'' + V(t) y = 0. R_n solves
//   R''' + 4 V R' + 2 V' R = 2 t^n,  then  Q_n = -R_n', P_n = R_n''/2 + V R_n.
// Different construction paths may differ by solutions of the homogeneous
// third-order equation; comparisons should go through the derivative of the
// assembled combination, which is path-independent.

struct IntegralCoeffTriple {
  TruncatedSeries P, Q, R;
  int n = 0;
  Regime regime = Regime::generic_series;
  QuarticCoeffs potential;
};

// Power-series solution with R(0) = R'(0) = R''(0) = 0.
IntegralCoeffTriple rn_series(const QuarticCoeffs& V, int n, int order);

// Linearized turning-point (V = -z) table: exact polynomials from
//   R_n = -z^n/(2n+1) + n(n-1)(n-2)/(2(2n+1)) R_{n-3}.
IntegralCoeffTriple rn_airy(int n, int order = -1);

// Same polynomials assembled termwise; the prefactor telescopes into a
// reciprocal gamma-ratio product, evaluated here in exact rationals.
IntegralCoeffTriple rn_airy_closed(int n, int order = -1);

// Floating-point ladder for deep entries: coefficients grow factorially and
// exceed 64-bit rationals near n ~ 20, so bulk consumers (operator tables)
// take this path. Agrees with rn_airy to roundoff where both exist.
IntegralCoeffTriple rn_airy_numeric(int n, int order = -1);

// Pure quartic V = beta^2 t^4. Residues 3,4,5 mod 6 follow the polynomial
// ladder seeded by R_3 = 1/(4 beta^2); residues 0,1,2 are sextic-stride
// series (generalized hypergeometric in -beta^2 t^6 / 9).
IntegralCoeffTriple rn_bessel(double beta, int n, int order);

// Solved-form recursion: the highest coefficient of
//   sum_j (2n+j) A_j R_{n+j-1} = t^n - n(n-1)(n-2)/2 R_{n-3}
// is isolated to step from (R_{n-1},...,R_{n+2}) to R_{n+3}. Needs A4 != 0;
// seeds are the power-series triples.
IntegralCoeffTriple rn_general_recursive(const QuarticCoeffs& V, int n,
                                         int order);

// ---------------------------------------------------------------------------

struct LmnTriple {
  TruncatedSeries L, M, N;
};

// L_n = sum_k A_k P_{n+k} + n(n-1)/2 P_{n-2} - (n/2) t^{n-1}
// M_n = sum_k A_k Q_{n+k} + n(n-1)/2 Q_{n-2} + t^n
// N_n = sum_k A_k R_{n+k} + n(n-1)/2 R_{n-2}
// over a family of triples indexed by n (which must reach n+4). The
// convenience overload builds the power-series family itself.
LmnTriple lmn(const std::vector<IntegralCoeffTriple>& family,
              const QuarticCoeffs& V, int n, int order);
LmnTriple lmn(const QuarticCoeffs& V, int n, int order);

// P y1 y2 + (Q/2)(y1 dy2 + y2 dy1) + R dy1 dy2 as a series.
TruncatedSeries triple_apply(const IntegralCoeffTriple& tr,
                             const TruncatedSeries& y1,
                             const TruncatedSeries& dy1,
                             const TruncatedSeries& y2,
                             const TruncatedSeries& dy2);

// int t^n y1 y2' dt = (t^n y1 y2 + W t^{n+1}/(n+1) - n int t^{n-1} y1 y2)/2
// where W is the wronskian y1 y2' - y2 y1'. `lower` carries the t^{n-1}
// triple; the n = 0 overload needs no triple at all.
TruncatedSeries integral_y1_dy2(int n, cplx wronskian,
                                const IntegralCoeffTriple& lower,
                                const TruncatedSeries& y1,
                                const TruncatedSeries& dy1,
                                const TruncatedSeries& y2,
                                const TruncatedSeries& dy2);
TruncatedSeries integral_y1_dy2(cplx wronskian, const TruncatedSeries& y1,
                                const TruncatedSeries& y2);

// Triples only pair with solution sets of the same potential.
bool compatible(const IntegralCoeffTriple& tr, const FundamentalPair& pair);

}  // namespace ptlz
