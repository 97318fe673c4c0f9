#pragma once

#include <Eigen/Dense>
#include <complex>

#include "ptlz/quartic.hpp"

namespace ptlz {

// Two level pairs (frequencies omega2, omega1), each split into a broad and a
// narrow member (widths gamma0, gamma). kappa couples within a pair, eta
// across pairs. The Hamiltonian is complex symmetric, not Hermitian.
struct ModelParams {
  double omega1 = 0, omega2 = 0;
  double gamma0 = 0, gamma = 0;
  double kappa = 0;
  double eta = 0;
};

// Parabolic separation sweep: the pair splitting follows alpha + beta t^2
// around a fixed mean frequency. beta must be nonzero.
struct SweepParams {
  double alpha = 0;
  double beta = 1;
};

struct DerivedCouplings {
  double delta_omega;  // omega1 - omega2
  double delta_gamma;  // gamma - gamma0
  double omega_bar;    // (omega1 + omega2)/2
  double gamma_bar;    // (gamma + gamma0)/2
  cplx Omega;          // (delta_omega + i delta_gamma)/2
  double gamma_plus;   // delta_gamma + kappa
  double gamma_minus;  // delta_gamma - kappa
};

DerivedCouplings derived(const ModelParams& p);

// alpha + beta t^2
double separation(const SweepParams& s, double t);

// Instantaneous pair frequencies omega_bar +/- separation(t).
std::pair<double, double> swept_frequencies(const ModelParams& p,
                                            const SweepParams& s, double t);

Eigen::Matrix4cd build_hamiltonian(const ModelParams& p);
Eigen::Matrix4cd build_hamiltonian(const ModelParams& p, double omega1,
                                   double omega2);
Eigen::Matrix4cd build_hamiltonian(const ModelParams& p, const SweepParams& s,
                                   double t);

// ---------------------------------------------------------------------------
// Basis chain. b strips the mean rotation and mean decay from a; c pairs the
// b components into circular combinations that decouple at eta = 0.

enum class Basis { a, b, c };

struct StateVector {
  Basis basis = Basis::a;
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
};

// exp((gamma_bar + i omega_bar) t); b_i = b_scale * a_i
cplx b_scale(const ModelParams& p, double t);

// c1 = b1 + i b2, c2 = b1 - i b2, c3 = b3 + i b4, c4 = b3 - i b4
Eigen::Matrix4cd c_from_b_matrix();
Eigen::Matrix4cd b_from_c_matrix();

StateVector convert(const StateVector& s, Basis target, const ModelParams& p,
                    double t);

// i db/dt = (H(t) + (i gamma_bar - omega_bar) I) b
Eigen::Matrix4cd b_frame_matrix(const ModelParams& p, const SweepParams& s,
                                double t);

// First-order equations in the c basis, valid for any linewidth mismatch:
//   i dc1 = -S c1 + i(dG/2 + kappa) c2 + i eta c4
//   i dc2 = -S c2 + i(dG/2 - kappa) c1 - i eta c3
//   i dc3 = +S c3 + i(dG/2 + kappa) c4 + i eta c2
//   i dc4 = +S c4 + i(dG/2 - kappa) c3 - i eta c1
// with S = separation(s, t) and dG = gamma - gamma0.
Eigen::Vector4cd c_full_rhs(const ModelParams& p, const SweepParams& s,
                            double t, const Eigen::Vector4cd& c);

// ---------------------------------------------------------------------------
// Matched-linewidth reduction: eliminating c3, c4 leaves the coupled pair
//   c1'' + Q(t) c1 = 2 kappa c2',   c2'' + Q(t) c2 = -2 kappa c1',
//   Q(t) = beta^2 t^4 + 2 alpha beta t^2 - 2 i beta t + (alpha^2+eta^2-kappa^2)

// Throws unless gamma == gamma0 and beta != 0.
QuarticCoeffs quartic_coeffs(const ModelParams& p, const SweepParams& s);

struct PairState {
  cplx c1, dc1, c2, dc2;
};

// (dc1, c1'', dc2, c2'') under the reduced pair system
PairState pair_rhs(const QuarticCoeffs& q, double kappa, double t,
                   const PairState& s);

// dc1*c2 - dc2*c1 - kappa*(c1^2 + c2^2); constant along pair_rhs flow
cplx pair_invariant(const PairState& s, double kappa);

// Rebuild (c1,c2,c3,c4) from the reduced state via the elimination formulas.
// Requires eta != 0 and gamma == gamma0.
Eigen::Vector4cd complete_pair(const ModelParams& p, const SweepParams& s,
                               double t, const PairState& st);

// ---------------------------------------------------------------------------

struct SpectrumResult {
  Eigen::Vector4cd eigenvalues;   // sorted by (re, im)
  Eigen::Matrix4cd eigenvectors;  // columns, unit norm, in matching order
  double max_residual = 0;        // max_i |H v_i - lambda_i v_i|
  bool near_defective = false;    // eigenvector basis nearly rank-deficient
};

SpectrumResult spectrum(const Eigen::Matrix4cd& H);

}  // namespace ptlz
