#include "ptlz/perturbation.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace ptlz {

std::pair<cplx, cplx> first_order(const ZeroOrderState& s, cplx x) {
  return {x * s.c2, -x * s.c1};
}

std::pair<cplx, cplx> second_order(const ZeroOrderState& s,
                                   const IntegralCoeffTriple& triple0,
                                   cplx x) {
  if (triple0.n != 0)
    throw std::invalid_argument("second_order needs the moment-0 triple");
  const cplx Q0 = triple0.Q.evaluate(x).value;
  const cplx R0 = triple0.R.evaluate(x).value;
  const cplx scale = 0.5 * (Q0 - x * x);
  return {scale * s.c1 + R0 * s.dc1, scale * s.c2 + R0 * s.dc2};
}

QuarticCoeffs regime_potential(Regime regime, const QuarticCoeffs& full) {
  switch (regime) {
    case Regime::airy:
      return {{full.a[0], full.a[1], cplx{0, 0}, cplx{0, 0}, cplx{0, 0}}};
    case Regime::quartic_bessel:
      return {{cplx{0, 0}, cplx{0, 0}, cplx{0, 0}, cplx{0, 0}, full.a[4]}};
    case Regime::generic_series:
      return full;
  }
  throw std::logic_error("unknown regime");
}

OperatorTables operator_tables(const std::vector<IntegralCoeffTriple>& family,
                               const QuarticCoeffs& V, int L) {
  if (L < 0) throw std::invalid_argument("negative power cap");
  if (static_cast<int>(family.size()) < L + 5)
    throw std::invalid_argument("family must cover moments 0 .. L+4");
  const Var var = family[0].R.var();
  for (int m = 0; m < L + 5; ++m) {
    if (family[m].n != m)
      throw std::invalid_argument("family must be indexed by moment");
    if (family[m].R.var() != var)
      throw std::invalid_argument("family mixes canonical variables");
  }

  OperatorTables T;
  T.regime = family[0].regime;
  T.potential = V;
  T.var = var;
  T.L = L;
  T.E = Eigen::MatrixXcd::Zero(L + 1, L + 1);
  T.F = Eigen::MatrixXcd::Zero(L + 1, L + 1);
  T.G = Eigen::MatrixXcd::Zero(L + 1, L + 1);
  T.H = Eigen::MatrixXcd::Zero(L + 1, L + 1);

  for (int n = 0; n <= L; ++n) {
    TruncatedSeries En(var, L);
    if (n + 1 <= L)
      En += TruncatedSeries::monomial(var, cplx{1.0 / (n + 1.0), 0.0}, n + 1,
                                      L);
    if (n >= 1) En -= family[n - 1].Q.truncated(L) * cplx{n / 2.0, 0.0};

    TruncatedSeries Fn(var, L);
    if (n >= 1) Fn += family[n - 1].R.truncated(L) * cplx{-double(n), 0.0};

    const LmnTriple l = lmn(family, V, n, L);
    for (int k = 0; k <= L; ++k) {
      T.E(n, k) = En.coeff(k);
      T.F(n, k) = Fn.coeff(k);
      T.G(n, k) = l.M.coeff(k);
      T.H(n, k) = 2.0 * l.N.coeff(k);
    }
  }
  return T;
}

OperatorTables operator_tables(Regime regime, const QuarticCoeffs& full,
                               int L) {
  if (L < 0) throw std::invalid_argument("negative power cap");
  const QuarticCoeffs red = regime_potential(regime, full);
  std::vector<IntegralCoeffTriple> family;
  family.reserve(L + 5);
  switch (regime) {
    case Regime::airy: {
      // Canonical tables in z are independent of (a0, a1); the physical
      // potential only enters later through the variable map.
      for (int m = 0; m <= L + 4; ++m)
        family.push_back(rn_airy_numeric(m, L));
      return operator_tables(family, airy_potential(), L);
    }
    case Regime::quartic_bessel: {
      const cplx a4 = red.a[4];
      if (!(a4.real() > 0.0) ||
          std::abs(a4.imag()) > 1e-12 * std::abs(a4.real()))
        throw std::invalid_argument(
            "quartic regime needs a positive real quartic coefficient");
      const double beta = std::sqrt(a4.real());
      for (int m = 0; m <= L + 4; ++m)
        family.push_back(rn_bessel(beta, m, L));
      return operator_tables(family, red, L);
    }
    case Regime::generic_series: {
      for (int m = 0; m <= L + 4; ++m) family.push_back(rn_series(red, m, L));
      return operator_tables(family, red, L);
    }
  }
  throw std::logic_error("unknown regime");
}

CoefficientTable zeroth_table(int L) {
  if (L < 0) throw std::invalid_argument("negative power cap");
  CoefficientTable t;
  t.order = 0;
  t.L = L;
  t.alpha = Eigen::VectorXcd::Zero(L + 1);
  t.beta = Eigen::VectorXcd::Zero(L + 1);
  t.gamma = Eigen::VectorXcd::Zero(L + 1);
  t.delta = Eigen::VectorXcd::Zero(L + 1);
  t.lambda = Eigen::VectorXcd::Zero(L + 1);
  t.mu = Eigen::VectorXcd::Zero(L + 1);
  t.nu = Eigen::VectorXcd::Zero(L + 1);
  t.xi = Eigen::VectorXcd::Zero(L + 1);
  t.alpha(0) = cplx{1.0, 0.0};
  t.mu(0) = cplx{1.0, 0.0};
  return t;
}

namespace {

// Significant coefficient weight in the top power band means later orders
// would need powers beyond L: the advanced table is flagged as truncated.
// The 1e-9 floor ignores the benign tails of rapidly decaying series whose
// dropped weight is far below any evaluation tolerance used here.
bool top_band_loaded(const CoefficientTable& t) {
  double all = 0.0, band = 0.0;
  const int lo = std::max(0, t.L - 2);
  for (const auto* v :
       {&t.alpha, &t.beta, &t.gamma, &t.delta, &t.lambda, &t.mu, &t.nu,
        &t.xi}) {
    for (int k = 0; k <= t.L; ++k) {
      const double a = std::abs((*v)(k));
      all = std::max(all, a);
      if (k >= lo) band = std::max(band, a);
    }
  }
  return all > 0.0 && band > 1e-9 * all;
}

}  // namespace

CoefficientTable advance_order(const CoefficientTable& cur,
                               const OperatorTables& ops) {
  if (cur.L != ops.L)
    throw std::invalid_argument(
        "power cap mismatch between coefficient table and operator tables");
  const auto Et = ops.E.transpose();
  const auto Ft = ops.F.transpose();
  const auto Gt = ops.G.transpose();
  const auto Ht = ops.H.transpose();

  CoefficientTable nx;
  nx.order = cur.order + 1;
  nx.L = cur.L;
  nx.alpha = Et * cur.lambda + Gt * cur.nu;
  nx.beta = Et * cur.mu + Gt * cur.xi;
  nx.gamma = Ft * cur.lambda + Ht * cur.nu;
  nx.delta = Ft * cur.mu + Ht * cur.xi;
  nx.lambda = -(Et * cur.alpha + Gt * cur.gamma);
  nx.mu = -(Et * cur.beta + Gt * cur.delta);
  nx.nu = -(Ft * cur.alpha + Ht * cur.gamma);
  nx.xi = -(Ft * cur.beta + Ht * cur.delta);
  nx.truncated = cur.truncated || top_band_loaded(nx);
  return nx;
}

CoefficientTable swap_components(const CoefficientTable& t) {
  CoefficientTable s;
  s.order = t.order;
  s.L = t.L;
  s.truncated = t.truncated;
  s.alpha = -t.lambda;
  s.beta = -t.mu;
  s.gamma = -t.nu;
  s.delta = -t.xi;
  s.lambda = t.alpha;
  s.mu = t.beta;
  s.nu = t.gamma;
  s.xi = t.delta;
  return s;
}

namespace {

nlohmann::json vec_to_json(const Eigen::VectorXcd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (int k = 0; k < v.size(); ++k)
    a.push_back({v(k).real(), v(k).imag()});
  return a;
}

Eigen::VectorXcd vec_from_json(const nlohmann::json& a, int expect) {
  if (!a.is_array() || static_cast<int>(a.size()) != expect)
    throw std::invalid_argument("coefficient array has the wrong length");
  Eigen::VectorXcd v(expect);
  for (int k = 0; k < expect; ++k) {
    const auto& e = a.at(k);
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("coefficient entries must be [re, im]");
    v(k) = cplx{e.at(0).get<double>(), e.at(1).get<double>()};
  }
  return v;
}

}  // namespace

std::string to_json(const CoefficientTable& t) {
  nlohmann::json j;
  j["order"] = t.order;
  j["L"] = t.L;
  j["truncated"] = t.truncated;
  j["alpha"] = vec_to_json(t.alpha);
  j["beta"] = vec_to_json(t.beta);
  j["gamma"] = vec_to_json(t.gamma);
  j["delta"] = vec_to_json(t.delta);
  j["lambda"] = vec_to_json(t.lambda);
  j["mu"] = vec_to_json(t.mu);
  j["nu"] = vec_to_json(t.nu);
  j["xi"] = vec_to_json(t.xi);
  return j.dump();
}

CoefficientTable coefficient_table_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  CoefficientTable t;
  t.order = j.at("order").get<int>();
  t.L = j.at("L").get<int>();
  t.truncated = j.at("truncated").get<bool>();
  if (t.L < 0) throw std::invalid_argument("negative power cap");
  const int n = t.L + 1;
  t.alpha = vec_from_json(j.at("alpha"), n);
  t.beta = vec_from_json(j.at("beta"), n);
  t.gamma = vec_from_json(j.at("gamma"), n);
  t.delta = vec_from_json(j.at("delta"), n);
  t.lambda = vec_from_json(j.at("lambda"), n);
  t.mu = vec_from_json(j.at("mu"), n);
  t.nu = vec_from_json(j.at("nu"), n);
  t.xi = vec_from_json(j.at("xi"), n);
  return t;
}

PerturbationExpansion::PerturbationExpansion(OperatorTables tables, int N)
    : ops_(std::move(tables)) {
  if (N < 0) throw std::invalid_argument("negative expansion order");
  orders_.push_back(zeroth_table(ops_.L));
  for (int n = 0; n < N; ++n)
    orders_.push_back(advance_order(orders_.back(), ops_));
}

const CoefficientTable& PerturbationExpansion::order(int n) const {
  if (n < 0 || n > max_order())
    throw std::out_of_range("expansion order out of range");
  return orders_[n];
}

namespace {

FundamentalPair implied_pair(Regime regime, const QuarticCoeffs& reduced) {
  switch (regime) {
    case Regime::airy:
      return airy_as_pair();
    case Regime::quartic_bessel: {
      const cplx a4 = reduced.a[4];
      if (!(a4.real() > 0.0) ||
          std::abs(a4.imag()) > 1e-12 * std::abs(a4.real()))
        throw std::invalid_argument(
            "quartic regime needs a positive real quartic coefficient");
      return quartic_pair(std::sqrt(a4.real()));
    }
    case Regime::generic_series:
      throw std::invalid_argument(
          "generic regime needs an explicit fundamental pair");
  }
  throw std::logic_error("unknown regime");
}

}  // namespace

AssembledSolution::AssembledSolution(const PerturbationExpansion& expansion,
                                     const QuarticCoeffs& physical,
                                     const InitialCombination& init,
                                     double kappa)
    : AssembledSolution(
          expansion, physical,
          implied_pair(expansion.tables().regime,
                       regime_potential(expansion.tables().regime, physical)),
          init, kappa) {}

AssembledSolution::AssembledSolution(const PerturbationExpansion& expansion,
                                     const QuarticCoeffs& physical,
                                     FundamentalPair pair,
                                     const InitialCombination& init,
                                     double kappa)
    : regime_(expansion.tables().regime),
      canonical_(expansion.tables().potential),
      pair_(std::move(pair)),
      init_(init),
      kappa_(kappa) {
  orders_.reserve(expansion.max_order() + 1);
  for (int n = 0; n <= expansion.max_order(); ++n)
    orders_.push_back(expansion.order(n));

  const QuarticCoeffs red = regime_potential(regime_, physical);
  switch (regime_) {
    case Regime::airy: {
      if (red.a[1] == cplx{0.0, 0.0})
        throw std::invalid_argument(
            "linear-potential regime needs a nonzero slope");
      if (!canonical_.close_to(airy_potential()))
        throw std::invalid_argument(
            "linear-potential tables must use the normal form Q(z) = -z");
      g_ = std::exp(cplx{0.0, M_PI / 3.0}) * std::pow(red.a[1], 1.0 / 3.0);
      shift_ = red.a[0] / red.a[1];
      break;
    }
    case Regime::quartic_bessel:
    case Regime::generic_series: {
      if (!canonical_.close_to(red))
        throw std::invalid_argument(
            "potential does not reduce to the table potential");
      g_ = cplx{1.0, 0.0};
      shift_ = cplx{0.0, 0.0};
      break;
    }
  }
  if (!pair_.potential.close_to(canonical_))
    throw std::invalid_argument(
        "fundamental pair solves a different potential");
  s_ = kappa_ / g_;
}

AssembledSolution::OrderEval AssembledSolution::eval_order(
    const CoefficientTable& tb, cplx x, const ZeroOrderState& zb) const {
  const auto horner = [&x](const Eigen::VectorXcd& c, cplx& p, cplx& dp) {
    p = cplx{0.0, 0.0};
    dp = cplx{0.0, 0.0};
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
      dp = dp * x + p;
      p = p * x + c(k);
    }
  };
  cplx A, dA, B, dB, C, dC, D, dD;
  cplx Lm, dLm, Mu, dMu, Nu, dNu, Xi, dXi;
  horner(tb.alpha, A, dA);
  horner(tb.beta, B, dB);
  horner(tb.gamma, C, dC);
  horner(tb.delta, D, dD);
  horner(tb.lambda, Lm, dLm);
  horner(tb.mu, Mu, dMu);
  horner(tb.nu, Nu, dNu);
  horner(tb.xi, Xi, dXi);

  // Generator derivatives close through the zeroth-order equation
  // u'' = -Q u, so no second derivatives of the pair are needed.
  const cplx Qx = canonical_(x);
  OrderEval o;
  o.c1 = A * zb.c1 + B * zb.c2 + C * zb.dc1 + D * zb.dc2;
  o.c2 = Lm * zb.c1 + Mu * zb.c2 + Nu * zb.dc1 + Xi * zb.dc2;
  o.dc1 = dA * zb.c1 + dB * zb.c2 + dC * zb.dc1 + dD * zb.dc2 + A * zb.dc1 +
          B * zb.dc2 - (C * zb.c1 + D * zb.c2) * Qx;
  o.dc2 = dLm * zb.c1 + dMu * zb.c2 + dNu * zb.dc1 + dXi * zb.dc2 +
          Lm * zb.dc1 + Mu * zb.dc2 - (Nu * zb.c1 + Xi * zb.c2) * Qx;
  return o;
}

namespace {

ZeroOrderState zero_basis(const FundamentalPair& pair,
                          const InitialCombination& init, cplx x) {
  const auto [y1, dy1] = pair.y1(x);
  const auto [y2, dy2] = pair.y2(x);
  ZeroOrderState zb;
  zb.c1 = init.d1 * y1 + init.d2 * y2;
  zb.dc1 = init.d1 * dy1 + init.d2 * dy2;
  zb.c2 = init.e1 * y1 + init.e2 * y2;
  zb.dc2 = init.e1 * dy1 + init.e2 * dy2;
  return zb;
}

}  // namespace

AssembledState AssembledSolution::evaluate(double t) const {
  const cplx x = g_ * (cplx{t, 0.0} + shift_);
  const ZeroOrderState zb = zero_basis(pair_, init_, x);

  AssembledState st;
  st.order_magnitudes.reserve(orders_.size());
  cplx c1{0.0, 0.0}, c2{0.0, 0.0}, d1{0.0, 0.0}, d2{0.0, 0.0};
  cplx w{1.0, 0.0};
  for (std::size_t n = 0; n < orders_.size(); ++n) {
    if (n > 0) w *= s_;
    const OrderEval o = eval_order(orders_[n], x, zb);
    c1 += w * o.c1;
    c2 += w * o.c2;
    d1 += w * o.dc1;
    d2 += w * o.dc2;
    st.order_magnitudes.push_back(std::abs(w) *
                                  std::max(std::abs(o.c1), std::abs(o.c2)));
  }
  st.c1 = c1;
  st.c2 = c2;
  st.dc1 = g_ * d1;
  st.dc2 = g_ * d2;
  const double den = std::max(std::abs(c1), std::abs(c2));
  const double last = st.order_magnitudes.back();
  st.converged = (den > 0.0) ? (last <= 1e-3 * den) : (last == 0.0);
  return st;
}

AssembledState AssembledSolution::order_term(int n, double t) const {
  if (n < 0 || n > max_order())
    throw std::out_of_range("expansion order out of range");
  const cplx x = g_ * (cplx{t, 0.0} + shift_);
  const ZeroOrderState zb = zero_basis(pair_, init_, x);
  const OrderEval o = eval_order(orders_[n], x, zb);
  cplx w{1.0, 0.0};
  for (int i = 0; i < n; ++i) w *= s_;

  AssembledState st;
  st.c1 = w * o.c1;
  st.c2 = w * o.c2;
  st.dc1 = w * g_ * o.dc1;
  st.dc2 = w * g_ * o.dc2;
  st.order_magnitudes = {std::abs(w) *
                         std::max(std::abs(o.c1), std::abs(o.c2))};
  st.converged = true;
  return st;
}

}  // namespace ptlz
