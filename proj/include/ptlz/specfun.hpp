#pragma once

#include <functional>
#include <utility>

#include "ptlz/quartic.hpp"
#include "ptlz/series.hpp"

namespace ptlz {

/// Value of a generalized hypergeometric sum plus convergence bookkeeping.
struct HypResult {
  cplx value;
  bool converged;  // false when the term cutoff was never reached
  int terms;
};

/// 1F2(a; b1, b2; x) by direct summation. Terminates when the running term
/// drops below 1e-16 of the accumulated sum, or after 500 terms (in which
/// case `converged` is false). Non-positive-integer lower parameters are
/// rejected with std::domain_error.
HypResult hyp1f2(cplx a, cplx b1, cplx b2, cplx x);

/// 2F3(a1, a2; b1, b2, b3; x), same contract as hyp1f2.
HypResult hyp2f3(cplx a1, cplx a2, cplx b1, cplx b2, cplx b3, cplx x);

/// Gamma function, Lanczos approximation (g = 7, 9 terms). Relative error
/// comfortably below 1e-13 on the arguments used here (positive reals of
/// moderate size plus reflection for the rest).
double gamma_fn(double x);

struct AiryValues {
  cplx Ai, Bi, Aip, Bip;
  /// Raised when the asymptotic branch could not certify ~1e-11 accuracy
  /// (large |z| near an anti-Stokes direction).
  bool degraded = false;
};

/// Complex Airy functions with first derivatives. Maclaurin series with
/// compensated (double-double) accumulation for |z| <= 9, Poincare-type
/// asymptotics with sector-managed connection formulas beyond.
AiryValues airy_pair(cplx z);

namespace detail {
// Both branches exposed for the overlap test; callers use airy_pair.
AiryValues airy_series(cplx z);
AiryValues airy_asymptotic(cplx z);
}  // namespace detail

enum class Regime { airy, quartic_bessel, generic_series };
const char* regime_name(Regime r);

/// A fundamental system {y1, y2} of  y'' + Q(x) y = 0  with its Wronskian
/// y1 y2' - y2 y1' (constant in x) and the potential it solves. Handles
/// return (value, derivative) at a complex argument.
struct FundamentalPair {
  Regime regime;
  cplx wronskian;
  QuarticCoeffs potential;
  std::function<std::pair<cplx, cplx>(cplx)> y1;
  std::function<std::pair<cplx, cplx>(cplx)> y2;
};

/// Pair for the pure quartic potential Q = beta^2 t^4 normalized to
/// y1(0) = 0, y1'(0) = 1, y2(0) = 1, y2'(0) = 0; Wronskian -1.
FundamentalPair quartic_pair(double beta);

/// (Ai, Bi) as a pair for Q(z) = -z; Wronskian 1/pi.
FundamentalPair airy_as_pair();

// Series forms of the quartic pair members and their derivatives, sextic
// stride in t. Used to assemble product-series identities.
TruncatedSeries quartic_y1_series(double beta, int order = kDefaultOrder);
TruncatedSeries quartic_y2_series(double beta, int order = kDefaultOrder);
TruncatedSeries quartic_dy1_series(double beta, int order = kDefaultOrder);
TruncatedSeries quartic_dy2_series(double beta, int order = kDefaultOrder);

}  // namespace ptlz
