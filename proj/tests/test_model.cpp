#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <complex>
#include <random>

#include "ptlz/model.hpp"

using namespace ptlz;
using Eigen::Matrix4cd;
using Eigen::Vector4cd;

namespace {

const cplx I{0.0, 1.0};

std::mt19937 rng(20260823);
double dist(double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}
cplx rc() { return {dist(-1, 1), dist(-1, 1)}; }

ModelParams random_params() {
  ModelParams p;
  p.omega1 = dist(-2, 2);
  p.omega2 = dist(-2, 2);
  p.gamma0 = dist(0, 1);
  p.gamma = dist(0, 1);
  p.kappa = dist(-1, 1);
  p.eta = dist(-1, 1);
  return p;
}

// test-local spectrum oracle: characteristic polynomial by Faddeev-LeVerrier,
// roots by Durand-Kerner
std::array<cplx, 4> char_poly_roots(const Matrix4cd& H) {
  std::array<cplx, 5> c;  // lambda^4 + c1 l^3 + c2 l^2 + c3 l + c4
  c[0] = 1.0;
  Matrix4cd M = Matrix4cd::Zero();
  for (int k = 1; k <= 4; ++k) {
    M = H * (M + c[k - 1] * Matrix4cd::Identity());
    c[k] = -M.trace() / double(k);
  }
  std::array<cplx, 4> r;
  cplx seed{0.4, 0.9};
  for (int j = 0; j < 4; ++j) r[j] = std::pow(seed, j + 1);
  auto eval = [&](cplx x) {
    cplx v = c[0];
    for (int k = 1; k <= 4; ++k) v = v * x + c[k];
    return v;
  };
  for (int it = 0; it < 500; ++it) {
    double moved = 0;
    for (int j = 0; j < 4; ++j) {
      cplx den = 1.0;
      for (int k = 0; k < 4; ++k)
        if (k != j) den *= r[j] - r[k];
      cplx step = eval(r[j]) / den;
      r[j] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-14) break;
  }
  std::sort(r.begin(), r.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return r;
}

}  // namespace

TEST_CASE("hamiltonian layout") {
  ModelParams p;
  p.omega1 = 1.7;
  p.omega2 = -0.4;
  p.gamma0 = 0.3;
  p.gamma = 0.9;
  p.kappa = 0.25;
  p.eta = 0.11;
  Matrix4cd H = build_hamiltonian(p);
  CHECK(H(0, 0) == cplx{-0.4, -0.3});
  CHECK(H(1, 1) == cplx{-0.4, -0.9});
  CHECK(H(2, 2) == cplx{1.7, -0.3});
  CHECK(H(3, 3) == cplx{1.7, -0.9});
  CHECK(H(0, 1) == cplx{0.25, 0});
  CHECK(H(2, 3) == cplx{0.25, 0});
  CHECK(H(0, 3) == cplx{0.11, 0});
  CHECK(H(1, 2) == cplx{0.11, 0});
  CHECK(H(0, 2) == cplx{0, 0});
  CHECK(H(1, 3) == cplx{0, 0});
  // complex symmetric, not Hermitian
  CHECK((H - H.transpose()).norm() == 0.0);
  CHECK((H - H.adjoint()).norm() > 0.1);
}

TEST_CASE("derived couplings") {
  ModelParams p;
  p.omega1 = 2.0;
  p.omega2 = 0.5;
  p.gamma0 = 0.2;
  p.gamma = 0.8;
  p.kappa = 0.3;
  p.eta = 0.15;
  DerivedCouplings d = derived(p);
  CHECK(d.delta_omega == doctest::Approx(1.5));
  CHECK(d.delta_gamma == doctest::Approx(0.6));
  CHECK(d.omega_bar == doctest::Approx(1.25));
  CHECK(d.gamma_bar == doctest::Approx(0.5));
  CHECK(std::abs(d.Omega - cplx{0.75, 0.3}) < 1e-15);
  CHECK(d.gamma_plus == doctest::Approx(0.9));
  CHECK(d.gamma_minus == doctest::Approx(0.3));
  for (int i = 0; i < 10; ++i) {
    ModelParams q = random_params();
    DerivedCouplings dq = derived(q);
    CHECK(dq.gamma_plus - dq.gamma_minus == doctest::Approx(2 * q.kappa));
  }
}

TEST_CASE("swept hamiltonian keeps the mean frequency fixed") {
  ModelParams p = random_params();
  SweepParams s{0.4, 1.3};
  for (double t : {-1.5, 0.0, 0.7}) {
    auto [w1, w2] = swept_frequencies(p, s, t);
    CHECK(0.5 * (w1 + w2) ==
          doctest::Approx(0.5 * (p.omega1 + p.omega2)).epsilon(1e-14));
    CHECK(w1 - w2 == doctest::Approx(2 * (s.alpha + s.beta * t * t)));
    Matrix4cd H = build_hamiltonian(p, s, t);
    CHECK(H(2, 2) == cplx(w1, -p.gamma0));
    CHECK(H(0, 0) == cplx(w2, -p.gamma0));
  }
  SweepParams bad{0.4, 0.0};
  CHECK_THROWS_AS(swept_frequencies(p, bad, 0.0), std::invalid_argument);
}

TEST_CASE("block decoupling at eta = 0 and closed-form block eigenvalues") {
  ModelParams p;
  p.omega1 = 1.3;
  p.omega2 = -0.6;
  p.gamma0 = 0.1;
  p.gamma = 0.7;
  p.eta = 0.0;

  auto block_pair = [&](double omega) {
    double dg = p.gamma - p.gamma0;
    cplx root = std::sqrt(cplx{p.kappa * p.kappa - 0.25 * dg * dg, 0});
    cplx mean = omega - 0.5 * I * (p.gamma0 + p.gamma);
    return std::array<cplx, 2>{mean - root, mean + root};
  };

  // splitting real when kappa dominates, imaginary when decay mismatch does
  for (double kappa : {0.8, 0.1}) {
    p.kappa = kappa;
    Matrix4cd H = build_hamiltonian(p);
    CHECK(H(0, 2) == cplx{0, 0});
    CHECK(H(1, 2) == cplx{0, 0});
    SpectrumResult sr = spectrum(H);
    std::array<cplx, 4> want;
    auto lo = block_pair(p.omega2), hi = block_pair(p.omega1);
    want = {lo[0], lo[1], hi[0], hi[1]};
    std::sort(want.begin(), want.end(), [](cplx a, cplx b) {
      if (a.real() != b.real()) return a.real() < b.real();
      return a.imag() < b.imag();
    });
    for (int i = 0; i < 4; ++i)
      CHECK(std::abs(sr.eigenvalues(i) - want[i]) < 1e-12);
  }
}

TEST_CASE("spectrum agrees with characteristic-polynomial roots") {
  for (int trial = 0; trial < 25; ++trial) {
    ModelParams p = random_params();
    Matrix4cd H = build_hamiltonian(p);
    SpectrumResult sr = spectrum(H);
    CHECK(sr.max_residual < 1e-10);
    // nearest-neighbor matching: the two sorts can disagree on real-part ties
    auto roots = char_poly_roots(H);
    std::array<bool, 4> used{};
    for (int i = 0; i < 4; ++i) {
      int best = -1;
      double bd = 1e300;
      for (int j = 0; j < 4; ++j) {
        if (used[j]) continue;
        double dd = std::abs(sr.eigenvalues(i) - roots[j]);
        if (dd < bd) bd = dd, best = j;
      }
      used[best] = true;
      CHECK(bd < 1e-9);
    }
  }
}

TEST_CASE("near-defective flag at an exceptional point") {
  // eta = 0, kappa = dg/2 collapses a block pair
  ModelParams p;
  p.omega1 = 1.0;
  p.omega2 = -1.0;
  p.gamma0 = 0.0;
  p.gamma = 1.0;
  p.eta = 0.0;
  p.kappa = 0.5;
  SpectrumResult sr = spectrum(build_hamiltonian(p));
  CHECK(sr.near_defective);
  p.kappa = 0.9;
  CHECK_FALSE(spectrum(build_hamiltonian(p)).near_defective);
}

TEST_CASE("basis round trips") {
  ModelParams p = random_params();
  for (double t : {-0.8, 0.0, 1.1}) {
    StateVector a;
    a.basis = Basis::a;
    for (int i = 0; i < 4; ++i) a.v(i) = rc();
    StateVector b = convert(a, Basis::b, p, t);
    StateVector c = convert(b, Basis::c, p, t);
    StateVector back = convert(c, Basis::a, p, t);
    CHECK((back.v - a.v).norm() < 1e-13 * a.v.norm());
    if (t == 0.0) CHECK((b.v - a.v).norm() < 1e-15);
    // mean-decay stripping scales norms by exp(gamma_bar t)
    double ratio = b.v.norm() / a.v.norm();
    CHECK(ratio ==
          doctest::Approx(std::exp(derived(p).gamma_bar * t)).epsilon(1e-12));
  }
  CHECK((c_from_b_matrix() * b_from_c_matrix() - Matrix4cd::Identity())
            .norm() < 1e-15);
}

TEST_CASE("b frame equations match the product rule") {
  ModelParams p = random_params();
  SweepParams s{-0.3, 0.9};
  for (int trial = 0; trial < 10; ++trial) {
    double t = dist(-1, 1);
    Vector4cd a;
    for (int i = 0; i < 4; ++i) a(i) = rc();
    Vector4cd adot = -I * (build_hamiltonian(p, s, t) * a);
    cplx sc = b_scale(p, t);
    DerivedCouplings d = derived(p);
    Vector4cd bdot_direct = (d.gamma_bar + I * d.omega_bar) * sc * a + sc * adot;
    Vector4cd bdot_frame = -I * (b_frame_matrix(p, s, t) * (sc * a));
    CHECK((bdot_direct - bdot_frame).norm() < 1e-12 * bdot_direct.norm());
  }
}

TEST_CASE("c equations match the similarity transform") {
  ModelParams p = random_params();
  SweepParams s{0.2, 1.4};
  Matrix4cd T = c_from_b_matrix();
  for (int trial = 0; trial < 10; ++trial) {
    double t = dist(-1, 1);
    Vector4cd b;
    for (int i = 0; i < 4; ++i) b(i) = rc();
    Vector4cd bdot = -I * (b_frame_matrix(p, s, t) * b);
    Vector4cd cdot_transform = T * bdot;
    Vector4cd cdot_direct = c_full_rhs(p, s, t, T * b);
    CHECK((cdot_transform - cdot_direct).norm() <
          1e-12 * (cdot_transform.norm() + 1));
  }
}

TEST_CASE("quartic coefficients") {
  ModelParams p;
  p.gamma0 = p.gamma = 0.4;
  p.kappa = 0.3;
  p.eta = 0.5;
  SweepParams s{0.7, 1.2};
  QuarticCoeffs q = quartic_coeffs(p, s);
  CHECK(std::abs(q.a[0] - cplx{0.49 + 0.25 - 0.09, 0}) < 1e-15);
  CHECK(std::abs(q.a[1] - cplx{0, -2.4}) < 1e-15);
  CHECK(std::abs(q.a[2] - cplx{1.68, 0}) < 1e-15);
  CHECK(q.a[3] == cplx{0, 0});
  CHECK(std::abs(q.a[4] - cplx{1.44, 0}) < 1e-15);

  ModelParams mismatched = p;
  mismatched.gamma = 0.5;
  CHECK_THROWS_AS(quartic_coeffs(mismatched, s), std::invalid_argument);
  CHECK_THROWS_AS(quartic_coeffs(p, SweepParams{0.7, 0.0}),
                  std::invalid_argument);

  // eta = +/-kappa, alpha = 0 kills everything but the sweep terms
  ModelParams pq;
  pq.kappa = 0.35;
  pq.eta = -0.35;
  QuarticCoeffs got = quartic_coeffs(pq, SweepParams{0.0, 0.9});
  CHECK(std::abs(got.a[0]) < 1e-15);
  CHECK(std::abs(got.a[1] - cplx{0, -1.8}) < 1e-15);
  CHECK(std::abs(got.a[2]) < 1e-15);
  CHECK(got.a[3] == cplx{0, 0});
  CHECK(std::abs(got.a[4] - cplx{0.81, 0}) < 1e-15);
}

TEST_CASE("pair invariant is conserved along the flow") {
  QuarticCoeffs q;
  q.a = {cplx{0.3, 0}, cplx{0, -1.8}, cplx{0.5, 0}, cplx{0, 0}, cplx{0.81, 0}};
  double kappa = 0.27;
  for (int trial = 0; trial < 10; ++trial) {
    PairState st{rc(), rc(), rc(), rc()};
    double t = dist(-1.5, 1.5);
    PairState d = pair_rhs(q, kappa, t, st);
    // d/dt of the invariant, expanded with the equations of motion
    cplx idot = d.dc1 * st.c2 + st.dc1 * st.dc2 - d.dc2 * st.c1 -
                st.dc2 * st.dc1 -
                2.0 * kappa * (st.c1 * st.dc1 + st.c2 * st.dc2);
    CHECK(std::abs(idot) < 1e-13);
  }
}

TEST_CASE("elimination closes the pair system") {
  ModelParams p;
  p.omega1 = p.omega2 = 0.6;  // mean only; split comes from the sweep
  p.gamma0 = p.gamma = 0.25;
  p.kappa = 0.3;
  p.eta = 0.45;
  SweepParams s{0.15, 1.1};
  QuarticCoeffs q = quartic_coeffs(p, s);

  for (int trial = 0; trial < 10; ++trial) {
    double t = dist(-1, 1);
    PairState st{rc(), rc(), rc(), rc()};
    Vector4cd c = complete_pair(p, s, t, st);
    Vector4cd cdot = c_full_rhs(p, s, t, c);
    // recovered components reproduce the stated first derivatives
    CHECK(std::abs(cdot(0) - st.dc1) < 1e-13);
    CHECK(std::abs(cdot(1) - st.dc2) < 1e-13);
    // second derivatives from the full system match the reduced pair system
    double S = separation(s, t);
    double Sdot = 2.0 * s.beta * t;
    cplx ddc1 = I * Sdot * st.c1 + I * S * cdot(0) + p.kappa * cdot(1) +
                p.eta * cdot(3);
    cplx ddc2 = I * Sdot * st.c2 + I * S * cdot(1) - p.kappa * cdot(0) -
                p.eta * cdot(2);
    PairState want = pair_rhs(q, p.kappa, t, st);
    CHECK(std::abs(ddc1 - want.dc1) < 1e-12);
    CHECK(std::abs(ddc2 - want.dc2) < 1e-12);
  }

  ModelParams no_eta = p;
  no_eta.eta = 0.0;
  CHECK_THROWS_AS(complete_pair(no_eta, s, 0.0, PairState{1, 0, 0, 0}),
                  std::invalid_argument);
}
