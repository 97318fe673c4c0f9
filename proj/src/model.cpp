#include "ptlz/model.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace ptlz {

namespace {
const cplx I{0.0, 1.0};
}

DerivedCouplings derived(const ModelParams& p) {
  DerivedCouplings d;
  d.delta_omega = p.omega1 - p.omega2;
  d.delta_gamma = p.gamma - p.gamma0;
  d.omega_bar = 0.5 * (p.omega1 + p.omega2);
  d.gamma_bar = 0.5 * (p.gamma + p.gamma0);
  d.Omega = 0.5 * cplx{d.delta_omega, d.delta_gamma};
  d.gamma_plus = d.delta_gamma + p.kappa;
  d.gamma_minus = d.delta_gamma - p.kappa;
  return d;
}

double separation(const SweepParams& s, double t) {
  return s.alpha + s.beta * t * t;
}

std::pair<double, double> swept_frequencies(const ModelParams& p,
                                            const SweepParams& s, double t) {
  if (s.beta == 0.0) throw std::invalid_argument("sweep rate beta must be nonzero");
  double wbar = 0.5 * (p.omega1 + p.omega2);
  double sep = separation(s, t);
  return {wbar + sep, wbar - sep};
}

Eigen::Matrix4cd build_hamiltonian(const ModelParams& p, double omega1,
                                   double omega2) {
  Eigen::Matrix4cd H = Eigen::Matrix4cd::Zero();
  H(0, 0) = omega2 - I * p.gamma0;
  H(1, 1) = omega2 - I * p.gamma;
  H(2, 2) = omega1 - I * p.gamma0;
  H(3, 3) = omega1 - I * p.gamma;
  H(0, 1) = H(1, 0) = H(2, 3) = H(3, 2) = p.kappa;
  H(0, 3) = H(3, 0) = H(1, 2) = H(2, 1) = p.eta;
  return H;
}

Eigen::Matrix4cd build_hamiltonian(const ModelParams& p) {
  return build_hamiltonian(p, p.omega1, p.omega2);
}

Eigen::Matrix4cd build_hamiltonian(const ModelParams& p, const SweepParams& s,
                                   double t) {
  auto [w1, w2] = swept_frequencies(p, s, t);
  return build_hamiltonian(p, w1, w2);
}

// ---------------------------------------------------------------------------

cplx b_scale(const ModelParams& p, double t) {
  DerivedCouplings d = derived(p);
  return std::exp((d.gamma_bar + I * d.omega_bar) * t);
}

Eigen::Matrix4cd c_from_b_matrix() {
  Eigen::Matrix4cd T = Eigen::Matrix4cd::Zero();
  T(0, 0) = 1;
  T(0, 1) = I;
  T(1, 0) = 1;
  T(1, 1) = -I;
  T(2, 2) = 1;
  T(2, 3) = I;
  T(3, 2) = 1;
  T(3, 3) = -I;
  return T;
}

Eigen::Matrix4cd b_from_c_matrix() {
  Eigen::Matrix4cd T = Eigen::Matrix4cd::Zero();
  T(0, 0) = 0.5;
  T(0, 1) = 0.5;
  T(1, 0) = -0.5 * I;
  T(1, 1) = 0.5 * I;
  T(2, 2) = 0.5;
  T(2, 3) = 0.5;
  T(3, 2) = -0.5 * I;
  T(3, 3) = 0.5 * I;
  return T;
}

StateVector convert(const StateVector& s, Basis target, const ModelParams& p,
                    double t) {
  auto to_b = [&](const StateVector& x) -> Eigen::Vector4cd {
    switch (x.basis) {
      case Basis::a:
        return b_scale(p, t) * x.v;
      case Basis::b:
        return x.v;
      case Basis::c:
        return b_from_c_matrix() * x.v;
    }
    throw std::logic_error("bad basis tag");
  };
  Eigen::Vector4cd b = to_b(s);
  StateVector out;
  out.basis = target;
  switch (target) {
    case Basis::a:
      out.v = b / b_scale(p, t);
      break;
    case Basis::b:
      out.v = b;
      break;
    case Basis::c:
      out.v = c_from_b_matrix() * b;
      break;
  }
  return out;
}

Eigen::Matrix4cd b_frame_matrix(const ModelParams& p, const SweepParams& s,
                                double t) {
  DerivedCouplings d = derived(p);
  return build_hamiltonian(p, s, t) +
         (I * d.gamma_bar - d.omega_bar) * Eigen::Matrix4cd::Identity();
}

Eigen::Vector4cd c_full_rhs(const ModelParams& p, const SweepParams& s,
                            double t, const Eigen::Vector4cd& c) {
  double S = separation(s, t);
  double hg = 0.5 * (p.gamma - p.gamma0);
  double k = p.kappa, e = p.eta;
  Eigen::Vector4cd dc;
  // divide the stated equations by i
  dc(0) = I * S * c(0) + (hg + k) * c(1) + e * c(3);
  dc(1) = I * S * c(1) + (hg - k) * c(0) - e * c(2);
  dc(2) = -I * S * c(2) + (hg + k) * c(3) + e * c(1);
  dc(3) = -I * S * c(3) + (hg - k) * c(2) - e * c(0);
  return dc;
}

// ---------------------------------------------------------------------------

QuarticCoeffs quartic_coeffs(const ModelParams& p, const SweepParams& s) {
  if (p.gamma != p.gamma0)
    throw std::invalid_argument(
        "pair reduction requires matched linewidths (gamma == gamma0)");
  if (s.beta == 0.0) throw std::invalid_argument("sweep rate beta must be nonzero");
  QuarticCoeffs q;
  q.a[0] = s.alpha * s.alpha + p.eta * p.eta - p.kappa * p.kappa;
  q.a[1] = -2.0 * I * s.beta;
  q.a[2] = 2.0 * s.alpha * s.beta;
  q.a[3] = 0.0;
  q.a[4] = s.beta * s.beta;
  return q;
}

PairState pair_rhs(const QuarticCoeffs& q, double kappa, double t,
                   const PairState& s) {
  cplx Q = q(t);
  return {s.dc1, -Q * s.c1 + 2.0 * kappa * s.dc2, s.dc2,
          -Q * s.c2 - 2.0 * kappa * s.dc1};
}

cplx pair_invariant(const PairState& s, double kappa) {
  return s.dc1 * s.c2 - s.dc2 * s.c1 - kappa * (s.c1 * s.c1 + s.c2 * s.c2);
}

Eigen::Vector4cd complete_pair(const ModelParams& p, const SweepParams& s,
                               double t, const PairState& st) {
  if (p.eta == 0.0)
    throw std::invalid_argument("elimination recovery requires eta != 0");
  if (p.gamma != p.gamma0)
    throw std::invalid_argument(
        "pair reduction requires matched linewidths (gamma == gamma0)");
  double S = separation(s, t);
  double k = p.kappa;
  Eigen::Vector4cd c;
  c(0) = st.c1;
  c(1) = st.c2;
  c(2) = -(st.dc2 - I * S * st.c2 + k * st.c1) / p.eta;
  c(3) = (st.dc1 - I * S * st.c1 - k * st.c2) / p.eta;
  return c;
}

// ---------------------------------------------------------------------------

SpectrumResult spectrum(const Eigen::Matrix4cd& H) {
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(H);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed to converge");

  std::array<int, 4> idx{0, 1, 2, 3};
  Eigen::Vector4cd ev = es.eigenvalues();
  std::sort(idx.begin(), idx.end(), [&](int i, int j) {
    if (ev(i).real() != ev(j).real()) return ev(i).real() < ev(j).real();
    return ev(i).imag() < ev(j).imag();
  });

  SpectrumResult r;
  for (int i = 0; i < 4; ++i) {
    r.eigenvalues(i) = ev(idx[i]);
    r.eigenvectors.col(i) = es.eigenvectors().col(idx[i]).normalized();
    double res =
        (H * r.eigenvectors.col(i) - r.eigenvalues(i) * r.eigenvectors.col(i))
            .norm();
    r.max_residual = std::max(r.max_residual, res);
  }

  // a defective pair perturbs at sqrt(eps), so the computed basis collapses
  // to ~1e-8 conditioning; flag well above that
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(r.eigenvectors);
  double smin = svd.singularValues()(3), smax = svd.singularValues()(0);
  r.near_defective = smin <= 1e-6 * smax;
  return r;
}

}  // namespace ptlz
