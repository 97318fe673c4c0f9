#pragma once

/// Coupling-strength expansion of the matched-linewidth pair system
///
///   c1'' + Q(t) c1 =  2 kappa c2',
///   c2'' + Q(t) c2 = -2 kappa c1',
///
/// carried as polynomial coefficient tables over the four generators
/// {c1^(0), c2^(0), c1^(0)', c2^(0)'} of the zeroth-order solution space.
/// Each order n contributes
///
///   c1^(n) = sum_k (alpha_k c1^(0) + beta_k c2^(0)
///                   + gamma_k c1^(0)' + delta_k c2^(0)') x^k
///
/// (and c2^(n) with lambda/mu/nu/xi), where x is the canonical variable of
/// the working regime: x = t for the quartic and generic regimes, and the
/// stretched x = g (t + shift) for the linear-potential regime.  Orders are
/// advanced by moment-integral tables built from the antiderivative triples
/// in heun_integrals.hpp; no quadrature is performed.

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ptlz/heun_integrals.hpp"
#include "ptlz/specfun.hpp"

namespace ptlz {

/// Expansion order N and power cap L used when nothing else is requested.
inline constexpr int kDefaultExpansionOrder = 4;
inline constexpr int kDefaultPowerCap = 40;

/// Weights of the zeroth-order solution in the fundamental system:
/// c1^(0) = d1 y1 + d2 y2,  c2^(0) = e1 y1 + e2 y2.
struct InitialCombination {
  cplx d1{1.0, 0.0};
  cplx d2{0.0, 0.0};
  cplx e1{0.0, 0.0};
  cplx e2{1.0, 0.0};
};

/// Zeroth-order values at one canonical point: components and their
/// derivatives with respect to the canonical variable.
struct ZeroOrderState {
  cplx c1{0.0, 0.0};
  cplx c2{0.0, 0.0};
  cplx dc1{0.0, 0.0};
  cplx dc2{0.0, 0.0};
};

/// Closed first-order correction (x c2^(0), -x c1^(0)) at canonical x.
std::pair<cplx, cplx> first_order(const ZeroOrderState& s, cplx x);

/// Closed second-order correction
///   ((Q0 - x^2)/2) c^(0) + R0 c^(0)'
/// applied componentwise; `triple0` must carry moment n = 0 for the working
/// potential (throws std::invalid_argument otherwise).
std::pair<cplx, cplx> second_order(const ZeroOrderState& s,
                                   const IntegralCoeffTriple& triple0, cplx x);

/// Reduction of a full sweep potential to the potential a regime actually
/// integrates: the linear-potential regime keeps (a0, a1), the quartic
/// regime keeps a4, the generic regime keeps everything.
QuarticCoeffs regime_potential(Regime regime, const QuarticCoeffs& full);

/// The four (L+1) x (L+1) moment-operator matrices.  Row n holds the power
/// coefficients of the operator function attached to moment n:
///   E row n:  x^{n+1}/(n+1) - (n/2) Q_{n-1}
///   F row n:  -n R_{n-1}
///   G row n:  M_n            (from the derivative-product triples)
///   H row n:  2 N_n
/// so that, against a fundamental pair T with Wronskian W,
///   T1 int x^n T2' u - T2 int x^n T1' u = (W/2)(E_n u + F_n u')   (u = T_k)
/// and the same with (G, H) when u is a derivative T_k'.
struct OperatorTables {
  Regime regime = Regime::generic_series;
  QuarticCoeffs potential;  // canonical-variable potential the rows solve
  Var var = Var::t;
  int L = kDefaultPowerCap;
  Eigen::MatrixXcd E, F, G, H;
};

/// Build the tables from an explicit triple family (entries 0 .. L+4, all
/// sharing `V` and one canonical variable).
OperatorTables operator_tables(const std::vector<IntegralCoeffTriple>& family,
                               const QuarticCoeffs& V, int L);

/// Build the tables for a regime from a (possibly full) sweep potential;
/// the regime reduction is applied internally.  Families used: the ladder
/// polynomials in z for Regime::airy, the quartic closed family for
/// Regime::quartic_bessel, the generic series family otherwise.
OperatorTables operator_tables(Regime regime, const QuarticCoeffs& full,
                               int L = kDefaultPowerCap);

/// Polynomial coefficients of one expansion order over the four generators.
/// Vectors have length L+1; entry k is the coefficient of x^k.
struct CoefficientTable {
  int order = 0;
  int L = 0;
  bool truncated = false;  // significant weight reached the top power band
  Eigen::VectorXcd alpha, beta, gamma, delta;  // c1^(n) row
  Eigen::VectorXcd lambda, mu, nu, xi;         // c2^(n) row
};

/// Order zero: alpha_0 = mu_0 = 1, all else zero.
CoefficientTable zeroth_table(int L);

/// One step of the eight coupled recursions
///   alpha' = E^T lambda + G^T nu,   lambda' = -(E^T alpha + G^T gamma), ...
/// Throws std::invalid_argument on an L mismatch between table and operators.
CoefficientTable advance_order(const CoefficientTable& cur,
                               const OperatorTables& ops);

/// Swap symmetry (c1, c2) -> (c2, -c1) acting on a coefficient table; it
/// commutes with advance_order.
CoefficientTable swap_components(const CoefficientTable& t);

/// JSON round-trip for golden tests (compact object; coefficients stored as
/// [re, im] pairs).
std::string to_json(const CoefficientTable& t);
CoefficientTable coefficient_table_from_json(const std::string& text);

/// Orders 0..N over one operator-table set.
class PerturbationExpansion {
 public:
  PerturbationExpansion(OperatorTables tables,
                        int N = kDefaultExpansionOrder);

  int max_order() const { return static_cast<int>(orders_.size()) - 1; }
  const CoefficientTable& order(int n) const;
  const OperatorTables& tables() const { return ops_; }

 private:
  OperatorTables ops_;
  std::vector<CoefficientTable> orders_;
};

/// Assembled values at one time, in physical variables (derivatives are
/// with respect to t).
struct AssembledState {
  cplx c1{0.0, 0.0};
  cplx c2{0.0, 0.0};
  cplx dc1{0.0, 0.0};
  cplx dc2{0.0, 0.0};
  bool converged = true;
  std::vector<double> order_magnitudes;  // |kappa^n c^(n)| per order
};

/// Binds an expansion to a concrete potential, fundamental pair, zeroth-order
/// combination and coupling kappa, and evaluates the partial sum.
///
/// For the linear-potential regime the canonical variable is
/// x = g (t + a0/a1) with g^3 = -a1 (g = e^{i pi/3} a1^{1/3}); rewriting the
/// order chain in x divides each source by g (the second derivative brings
/// g^2, the source derivative only g), so canonical order n recombines with
/// weight (kappa/g)^n and physical derivatives carry one factor of g.  The
/// untransformed regimes have g = 1.
class AssembledSolution {
 public:
  /// Airy / quartic regimes: the fundamental pair is implied (Ai/Bi, or the
  /// closed quartic pair).  `physical` is the potential in t; it must reduce
  /// to the table potential.  Throws for the generic regime.
  AssembledSolution(const PerturbationExpansion& expansion,
                    const QuarticCoeffs& physical,
                    const InitialCombination& init, double kappa);

  /// Explicit-pair variant (required for the generic regime); the pair must
  /// solve the table potential.
  AssembledSolution(const PerturbationExpansion& expansion,
                    const QuarticCoeffs& physical, FundamentalPair pair,
                    const InitialCombination& init, double kappa);

  int max_order() const { return static_cast<int>(orders_.size()) - 1; }

  /// Partial sum through max_order() at time t, with per-order magnitudes
  /// and the convergence heuristic (last order under 1e-3 of the sum).
  AssembledState evaluate(double t) const;

  /// Single order n including its kappa^n weight, in physical variables.
  /// The chain then reads  T_n'' + Q_phys T_n = 2 kappa T'_{2,n-1}  (and the
  /// companion with the opposite sign), which is what finite-difference
  /// residual checks probe.
  AssembledState order_term(int n, double t) const;

 private:
  struct OrderEval {
    cplx c1, c2, dc1, dc2;  // canonical values / canonical derivatives
  };
  OrderEval eval_order(const CoefficientTable& tb, cplx x,
                       const ZeroOrderState& zb) const;

  std::vector<CoefficientTable> orders_;
  Regime regime_;
  QuarticCoeffs canonical_;
  FundamentalPair pair_;
  InitialCombination init_;
  double kappa_;
  cplx g_{1.0, 0.0};
  cplx shift_{0.0, 0.0};
  cplx s_{0.0, 0.0};  // per-order weight kappa / g
};

}  // namespace ptlz
