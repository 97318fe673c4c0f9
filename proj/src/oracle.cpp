#include "ptlz/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace ptlz {

namespace {

const cplx I{0.0, 1.0};

// Dormand-Prince tableau
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b5th - b4th
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600;
constexpr double e3 = 500.0 / 1113 - 7571.0 / 16695;
constexpr double e4 = 125.0 / 192 - 393.0 / 640;
constexpr double e5 = -2187.0 / 6784 + 92097.0 / 339200;
constexpr double e6 = 11.0 / 84 - 187.0 / 2100;
constexpr double e7 = -1.0 / 40;

}  // namespace

Eigen::VectorXcd Trajectory::eval(double tt) const {
  if (t.empty()) throw std::out_of_range("empty trajectory");
  const bool fwd = t.back() >= t.front();
  double lo = fwd ? t.front() : t.back();
  double hi = fwd ? t.back() : t.front();
  if (tt < lo - 1e-12 || tt > hi + 1e-12)
    throw std::out_of_range("time outside the integrated span");
  tt = std::clamp(tt, lo, hi);

  std::size_t k;
  if (fwd) {
    k = std::upper_bound(t.begin(), t.end(), tt) - t.begin();
  } else {
    k = std::upper_bound(t.begin(), t.end(), tt, std::greater<double>()) -
        t.begin();
  }
  if (k == 0) k = 1;
  if (k >= t.size()) k = t.size() - 1;
  const double h = t[k] - t[k - 1];
  if (h == 0.0) return y[k];
  const double th = (tt - t[k - 1]) / h;
  const double th2 = th * th, th3 = th2 * th;
  const double h00 = 2 * th3 - 3 * th2 + 1, h10 = th3 - 2 * th2 + th;
  const double h01 = -2 * th3 + 3 * th2, h11 = th3 - th2;
  return h00 * y[k - 1] + (h10 * h) * f[k - 1] + h01 * y[k] + (h11 * h) * f[k];
}

Trajectory integrate(const RhsFn& rhs, double t0, double t1,
                     const Eigen::VectorXcd& y0, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  Trajectory tr;
  Eigen::VectorXcd y = y0;
  Eigen::VectorXcd k1 = rhs(t0, y);
  tr.t.push_back(t0);
  tr.y.push_back(y);
  tr.f.push_back(k1);
  if (t0 == t1) return tr;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  const double hmin = 1e-12 * span;
  double h = dir * 1e-3 * span;
  double t = t0;
  Eigen::VectorXcd k2, k3, k4, k5, k6, k7, ynew, err;

  for (long step = 0; dir * (t1 - t) > 0; ++step) {
    if (step > 2000000) throw std::runtime_error("step budget exhausted");
    if (dir * (t + h - t1) > 0) h = t1 - t;

    k2 = rhs(t + c2 * h, y + h * (a21 * k1));
    k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = rhs(t + c5 * h,
             y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = rhs(t + h,
             y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = rhs(t + h, ynew);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    // An overflowed stage makes err/ynew non-finite; NaN compares false
    // against everything, so without the explicit check such a step would
    // masquerade as r = 0 and be accepted.
    double r = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double ae = std::abs(err(i));
      const double ay = std::max(std::abs(y(i)), std::abs(ynew(i)));
      if (!std::isfinite(ae) || !std::isfinite(ay)) {
        r = std::numeric_limits<double>::infinity();
        break;
      }
      r = std::max(r, ae / (tol * (1.0 + ay)));
    }

    const double ah = std::abs(h);
    if (r <= ah || ah <= hmin) {
      if (!std::isfinite(r))
        throw std::runtime_error(
            "solution stopped being finite at the minimum step size");
      t += h;
      y.swap(ynew);
      k1.swap(k7);
      tr.t.push_back(t);
      tr.y.push_back(y);
      tr.f.push_back(k1);
    }
    double fac = 0.9 * std::pow(ah / std::max(r, 1e-300), 0.25);
    fac = std::clamp(fac, 0.2, 5.0);
    h *= fac;
    if (std::abs(h) < hmin) h = dir * hmin;
  }
  return tr;
}

// ---------------------------------------------------------------------------

Trajectory integrate_four_level(const ModelParams& p, double t0, double t1,
                                const Eigen::Vector4cd& a0, double tol) {
  Eigen::Matrix4cd H = build_hamiltonian(p);
  RhsFn rhs = [H](double, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    return -I * (H * y);
  };
  return integrate(rhs, t0, t1, a0, tol);
}

Trajectory integrate_four_level(const ModelParams& p, const SweepParams& s,
                                double t0, double t1,
                                const Eigen::Vector4cd& a0, double tol) {
  RhsFn rhs = [p, s](double t, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    return -I * (build_hamiltonian(p, s, t) * y);
  };
  return integrate(rhs, t0, t1, a0, tol);
}

Trajectory integrate_c_system(const ModelParams& p, const SweepParams& s,
                              double t0, double t1, const Eigen::Vector4cd& c0,
                              double tol) {
  RhsFn rhs = [p, s](double t, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    return c_full_rhs(p, s, t, y);
  };
  return integrate(rhs, t0, t1, c0, tol);
}

Trajectory integrate_pair(const QuarticCoeffs& q, double kappa, double t0,
                          double t1, const PairState& s0, double tol) {
  RhsFn rhs = [q, kappa](double t,
                         const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    PairState st{y(0), y(1), y(2), y(3)};
    PairState d = pair_rhs(q, kappa, t, st);
    Eigen::VectorXcd out(4);
    out << d.c1, d.dc1, d.c2, d.dc2;
    return out;
  };
  Eigen::VectorXcd y0(4);
  y0 << s0.c1, s0.dc1, s0.c2, s0.dc2;
  return integrate(rhs, t0, t1, y0, tol);
}

FundamentalPair integrate_fundamental_pair(const QuarticCoeffs& q,
                                           double t_min, double t_max,
                                           double tol) {
  if (t_min > t_max) std::swap(t_min, t_max);
  RhsFn rhs = [q](double t, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    cplx Q = q(t);
    Eigen::VectorXcd d(4);
    d << y(1), -Q * y(0), y(3), -Q * y(2);
    return d;
  };
  Eigen::VectorXcd y0(4);
  y0 << cplx{0, 0}, cplx{1, 0}, cplx{1, 0}, cplx{0, 0};

  auto fwd = std::make_shared<Trajectory>(
      integrate(rhs, 0.0, std::max(t_max, 0.0), y0, tol));
  auto bwd = std::make_shared<Trajectory>(
      integrate(rhs, 0.0, std::min(t_min, 0.0), y0, tol));

  auto sample = [fwd, bwd](cplx t) -> Eigen::VectorXcd {
    if (std::abs(t.imag()) > 1e-9)
      throw std::invalid_argument("mesh-backed pair takes real arguments");
    double x = t.real();
    return x >= 0.0 ? fwd->eval(x) : bwd->eval(x);
  };

  FundamentalPair p;
  p.regime = Regime::generic_series;
  p.wronskian = -1.0;
  p.potential = q;
  p.y1 = [sample](cplx t) -> std::pair<cplx, cplx> {
    Eigen::VectorXcd v = sample(t);
    return {v(0), v(1)};
  };
  p.y2 = [sample](cplx t) -> std::pair<cplx, cplx> {
    Eigen::VectorXcd v = sample(t);
    return {v(2), v(3)};
  };
  return p;
}

// ---------------------------------------------------------------------------

namespace {

// QUADPACK 7-15 nodes and weights
const double xgk[8] = {0.991455371120812639206854697526329,
                       0.949107912342758524526189684047851,
                       0.864864423359769072789712788640926,
                       0.741531185599394439863864773280788,
                       0.586087235467691130294144838258730,
                       0.405845151377397166906606412076961,
                       0.207784955007898467600689403773245,
                       0.0};
const double wgk[8] = {0.022935322010529224963732008058970,
                       0.063092092629978553290700663189204,
                       0.104790010322250183839876322541518,
                       0.140653259715525918745189590510238,
                       0.169004726639267902826583426598550,
                       0.190350578064785409913256402421014,
                       0.204432940075298892414161999234649,
                       0.209482141084727828012999174891714};
const double wg[4] = {0.129484966168869693270611432679082,
                      0.279705391489276667901467771423780,
                      0.381830050505118944950369775488975,
                      0.417959183673469387755102040816327};

struct Panel {
  cplx k15;
  double err;
};

Panel gk15(const std::function<cplx(double)>& fn, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx fc = fn(c);
  cplx k15 = wgk[7] * fc;
  cplx g7 = wg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    cplx s = fn(c - h * xgk[i]) + fn(c + h * xgk[i]);
    k15 += wgk[i] * s;
    if (i % 2 == 1) g7 += wg[i / 2] * s;
  }
  k15 *= h;
  g7 *= h;
  return {k15, std::abs(k15 - g7)};
}

void gk_adaptive(const std::function<cplx(double)>& fn, double a, double b,
                 double tol, int depth, QuadResult& out) {
  Panel p = gk15(fn, a, b);
  if (p.err <= tol || depth <= 0) {
    out.value += p.k15;
    out.error += p.err;
    ++out.intervals;
    return;
  }
  double m = 0.5 * (a + b);
  gk_adaptive(fn, a, m, 0.5 * tol, depth - 1, out);
  gk_adaptive(fn, m, b, 0.5 * tol, depth - 1, out);
}

}  // namespace

QuadResult gauss_kronrod(const std::function<cplx(double)>& fn, double a,
                         double b, double tol, int max_depth) {
  QuadResult out;
  if (a == b) return out;
  gk_adaptive(fn, a, b, tol, max_depth, out);
  return out;
}

}  // namespace ptlz
