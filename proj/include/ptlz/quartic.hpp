#pragma once

#include <array>
#include <cmath>

#include "ptlz/series.hpp"

namespace ptlz {

/// Coefficients of a quartic polynomial potential Q(x) = sum_k a[k] x^k.
/// This is the common currency between the model reduction (which produces
/// one from a parabolic sweep), the product-integral machinery and the
/// oracle integrators. Nothing here assumes a[4] != 0, so linearized and
/// pure-quartic potentials ride in the same container.
struct QuarticCoeffs {
  std::array<cplx, 5> a{};

  cplx operator()(cplx x) const {
    return ((((a[4] * x) + a[3]) * x + a[2]) * x + a[1]) * x + a[0];
  }
  cplx derivative(cplx x) const {
    return ((4.0 * a[4] * x + 3.0 * a[3]) * x + 2.0 * a[2]) * x + a[1];
  }

  TruncatedSeries to_series(Var v, int order = kDefaultOrder) const {
    TruncatedSeries s(v, order);
    for (int k = 0; k < 5 && k <= order; ++k) s.set_coeff(k, a[k]);
    return s;
  }

  bool operator==(const QuarticCoeffs& o) const { return a == o.a; }

  bool close_to(const QuarticCoeffs& o, double tol = 1e-12) const {
    for (int k = 0; k < 5; ++k)
      if (std::abs(a[k] - o.a[k]) > tol) return false;
    return true;
  }
};

inline QuarticCoeffs pure_quartic(double beta) {
  return {{cplx{0, 0}, cplx{0, 0}, cplx{0, 0}, cplx{0, 0}, cplx{beta * beta, 0}}};
}

/// Potential of the Airy normal form y'' = z y, i.e. Q(z) = -z.
inline QuarticCoeffs airy_potential() {
  return {{cplx{0, 0}, cplx{-1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{0, 0}}};
}

}  // namespace ptlz
