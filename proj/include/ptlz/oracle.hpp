#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "ptlz/model.hpp"
#include "ptlz/specfun.hpp"

namespace ptlz {

using RhsFn = std::function<Eigen::VectorXcd(double, const Eigen::VectorXcd&)>;

// Dense solution mesh: (t, y, y') at accepted steps, cubic Hermite between.
struct Trajectory {
  std::vector<double> t;
  std::vector<Eigen::VectorXcd> y;
  std::vector<Eigen::VectorXcd> f;

  Eigen::VectorXcd eval(double tt) const;
  std::size_t steps() const { return t.empty() ? 0 : t.size() - 1; }
  double t_front() const { return t.front(); }
  double t_back() const { return t.back(); }
  const Eigen::VectorXcd& y_back() const { return y.back(); }
};

// Dormand-Prince 5(4) with FSAL. The error budget is per unit step, so the
// accumulated drift over a span stays near tol * span * (1 + |y|).
Trajectory integrate(const RhsFn& rhs, double t0, double t1,
                     const Eigen::VectorXcd& y0, double tol);

// i da/dt = H a with the static Hamiltonian
Trajectory integrate_four_level(const ModelParams& p, double t0, double t1,
                                const Eigen::Vector4cd& a0, double tol);

// swept frequencies
Trajectory integrate_four_level(const ModelParams& p, const SweepParams& s,
                                double t0, double t1,
                                const Eigen::Vector4cd& a0, double tol);

// first-order equations in the c basis
Trajectory integrate_c_system(const ModelParams& p, const SweepParams& s,
                              double t0, double t1, const Eigen::Vector4cd& c0,
                              double tol);

// reduced pair system; state layout (c1, c1', c2, c2')
Trajectory integrate_pair(const QuarticCoeffs& q, double kappa, double t0,
                          double t1, const PairState& s0, double tol);

// y'' + Q(t) y = 0 seeded at t = 0 with y1(0)=0, y1'(0)=1, y2(0)=1, y2'(0)=0,
// wronskian y1 y2' - y2 y1' = -1. Mesh covers [min(t_min,0), max(t_max,0)];
// the returned handles only take real arguments.
FundamentalPair integrate_fundamental_pair(const QuarticCoeffs& q,
                                           double t_min, double t_max,
                                           double tol);

// ---------------------------------------------------------------------------

struct QuadResult {
  cplx value;
  double error = 0;     // accumulated Kronrod-Gauss discrepancy
  int intervals = 0;
};

// adaptive 7-15 Gauss-Kronrod by interval bisection
QuadResult gauss_kronrod(const std::function<cplx(double)>& fn, double a,
                         double b, double tol, int max_depth = 30);

}  // namespace ptlz
