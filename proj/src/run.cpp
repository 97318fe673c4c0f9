#include "ptlz/run.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ptlz/model.hpp"
#include "ptlz/oracle.hpp"
#include "ptlz/perturbation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ptlz {

namespace {

std::string f17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = a + (b - a) * i / (n - 1);
  return t;
}

json version_block() {
  return {{"ptlz", kVersionString},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"compiler", __VERSION__}};
}

std::string trajectory_csv(const Trajectory& traj,
                           const std::vector<double>& grid) {
  std::ostringstream out;
  out << "# four-level amplitudes along the sweep; all columns dimensionless "
         "(natural sweep units)\n";
  out << "t,component,re,im,abs\n";
  for (double t : grid) {
    const Eigen::VectorXcd a = traj.eval(t);
    for (int i = 0; i < 4; ++i)
      out << f17(t) << ",a" << (i + 1) << "," << f17(a[i].real()) << ","
          << f17(a[i].imag()) << "," << f17(std::abs(a[i])) << "\n";
  }
  return out.str();
}

std::string spectrum_csv(const RunConfig& cfg,
                         const std::vector<double>& grid) {
  std::ostringstream out;
  out << "# instantaneous eigenvalue branches of the sweep Hamiltonian; "
         "re = frequency, im = growth/decay rate; dimensionless\n";
  out << "t,branch,re,im\n";
  for (double t : grid) {
    const SpectrumResult sr =
        spectrum(build_hamiltonian(cfg.model, cfg.sweep, t));
    for (int i = 0; i < 4; ++i)
      out << f17(t) << "," << (i + 1) << "," << f17(sr.eigenvalues[i].real())
          << "," << f17(sr.eigenvalues[i].imag()) << "\n";
  }
  return out.str();
}

struct WindowSpec {
  Regime regime;
  double lo, hi;
};

// Validity windows of the two local approximations: the linearized
// turning-point form near t = 0 and the far quartic form.
std::vector<WindowSpec> comparison_windows(RegimeSelection sel) {
  std::vector<WindowSpec> w;
  if (sel == RegimeSelection::airy || sel == RegimeSelection::all)
    w.push_back({Regime::airy, -0.3, 0.3});
  if (sel == RegimeSelection::quartic_bessel || sel == RegimeSelection::all)
    w.push_back({Regime::quartic_bessel, 1.2, 1.6});
  return w;
}

std::string comparison_csv(const RunConfig& cfg) {
  const QuarticCoeffs full = quartic_coeffs(cfg.model, cfg.sweep);
  std::ostringstream out;
  out << "# expansion vs pair-oracle deviation by truncation order inside "
         "each validity window; amplitudes dimensionless\n";
  out << "regime,t,order,err_c1,err_c2\n";

  for (const WindowSpec& w : comparison_windows(cfg.regime)) {
    const OperatorTables tables =
        operator_tables(w.regime, full, cfg.power_cap);
    const PerturbationExpansion expansion(tables, cfg.order);
    const AssembledSolution sol(expansion, full, InitialCombination{},
                                cfg.model.kappa);

    const AssembledState s0 = sol.evaluate(w.lo);
    const PairState c0{s0.c1, s0.dc1, s0.c2, s0.dc2};
    const Trajectory oracle =
        integrate_pair(regime_potential(w.regime, full), cfg.model.kappa,
                       w.lo, w.hi, c0, cfg.tol);

    for (double t : linspace(w.lo, w.hi, 21)) {
      const Eigen::VectorXcd ref = oracle.eval(t);
      cplx sum1 = 0, sum2 = 0;
      for (int n = 0; n <= cfg.order; ++n) {
        const AssembledState term = sol.order_term(n, t);
        sum1 += term.c1;
        sum2 += term.c2;
        out << regime_name(w.regime) << "," << f17(t) << "," << n << ","
            << f17(std::abs(sum1 - ref[0])) << ","
            << f17(std::abs(sum2 - ref[2])) << "\n";
      }
    }
  }
  return out.str();
}

// Conserved bilinear of the matched-linewidth pair reduction, evaluated along
// the mapped four-level trajectory; its drift bounds the end-to-end
// integration and basis-mapping error.
json drift_block(const RunConfig& cfg, const Trajectory& traj,
                 const std::vector<double>& grid) {
  if (cfg.model.gamma != cfg.model.gamma0 || cfg.model.eta == 0)
    return {{"note",
             "pair invariant needs matched linewidths and nonzero eta"}};

  cplx j0 = 0;
  double max_dev = 0;
  double term_scale = 0;  // size of the bilinears that cancel inside J
  bool first = true;
  for (double t : grid) {
    StateVector sv{Basis::a, traj.eval(t).head<4>()};
    const StateVector c = convert(sv, Basis::c, cfg.model, t);
    const Eigen::Vector4cd dc = c_full_rhs(cfg.model, cfg.sweep, t, c.v);
    const PairState ps{c.v[0], dc[0], c.v[1], dc[1]};
    const cplx j = pair_invariant(ps, cfg.model.kappa);
    term_scale = std::max(
        term_scale, std::abs(ps.dc1) * std::abs(ps.c2) +
                        std::abs(ps.dc2) * std::abs(ps.c1) +
                        std::abs(cfg.model.kappa) *
                            (std::norm(ps.c1) + std::norm(ps.c2)));
    if (first) {
      j0 = j;
      first = false;
    } else {
      max_dev = std::max(max_dev, std::abs(j - j0));
    }
  }
  return {{"pair_invariant_drift", max_dev},
          {"pair_invariant_drift_rel",
           max_dev / std::max(term_scale, 1e-300)},
          {"term_scale", term_scale},
          {"reference_magnitude", std::abs(j0)}};
}

}  // namespace

RunResult run_point(const RunConfig& cfg) {
  const fs::path dir = cfg.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir))
    return {kExitConfigError,
            {},
            "output directory '" + dir.string() +
                "' is not usable: " + ec.message()};

  RunResult res;
  json manifest;
  manifest["tool"] = "ptlz";
  manifest["versions"] = version_block();
  manifest["generated_utc"] = utc_now();
  manifest["config"] = json::parse(config_to_json(cfg));
  manifest["initial_state"] = "a = (1,0,0,0) at time.start";

  try {
    const std::vector<double> grid =
        linspace(cfg.t_start, cfg.t_stop, cfg.samples);

    const Eigen::Vector4cd a0{1.0, 0.0, 0.0, 0.0};
    const Trajectory traj = integrate_four_level(
        cfg.model, cfg.sweep, cfg.t_start, cfg.t_stop, a0, cfg.tol);

    write_file(dir / "trajectory.csv", trajectory_csv(traj, grid));
    res.artifacts.push_back("trajectory.csv");

    write_file(dir / "spectrum.csv", spectrum_csv(cfg, grid));
    res.artifacts.push_back("spectrum.csv");

    if (cfg.regime != RegimeSelection::oracle) {
      write_file(dir / "comparison.csv", comparison_csv(cfg));
      res.artifacts.push_back("comparison.csv");
    }

    manifest["status"] = "ok";
    manifest["artifacts"] = res.artifacts;
    manifest["drift"] = drift_block(cfg, traj, grid);
    manifest["oracle"] = {{"trajectory_steps", traj.steps()}};
  } catch (const std::exception& e) {
    res.exit_code = kExitNumericFailure;
    res.message = e.what();
    manifest["status"] = "error";
    manifest["message"] = res.message;
    manifest["artifacts"] = res.artifacts;
  }

  try {
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    res.artifacts.push_back("manifest.json");
  } catch (const std::exception& e) {
    if (res.exit_code == kExitOk) {
      res.exit_code = kExitNumericFailure;
      res.message = e.what();
    }
  }
  return res;
}

RunResult run(const RunConfig& cfg) {
  if (!cfg.has_grid()) return run_point(cfg);

  const std::vector<RunConfig> points = cfg.sweep_points();
  std::vector<RunResult> results(points.size());

  const int workers = static_cast<int>(
      std::min<std::size_t>(std::max(cfg.jobs, 1), points.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < points.size();)
        results[i] = run_point(points[i]);
    });
  for (auto& th : pool) th.join();

  RunResult total;
  json index;
  index["tool"] = "ptlz";
  index["versions"] = version_block();
  index["generated_utc"] = utc_now();
  index["config"] = json::parse(config_to_json(cfg));
  json jpoints = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const fs::path rel = fs::path(points[i].out_dir).filename();
    jpoints.push_back({{"dir", rel.string()},
                       {"alpha", points[i].sweep.alpha},
                       {"beta", points[i].sweep.beta},
                       {"kappa", points[i].model.kappa},
                       {"eta", points[i].model.eta},
                       {"exit_code", results[i].exit_code},
                       {"status", results[i].exit_code == 0 ? "ok" : "error"}});
    for (const std::string& a : results[i].artifacts)
      total.artifacts.push_back(rel.string() + "/" + a);
    if (results[i].exit_code > total.exit_code) {
      total.exit_code = results[i].exit_code;
      total.message = points[i].out_dir + ": " + results[i].message;
    }
  }
  index["points"] = jpoints;
  index["status"] = total.exit_code == 0 ? "ok" : "error";

  try {
    fs::create_directories(cfg.out_dir);
    write_file(fs::path(cfg.out_dir) / "manifest.json",
               index.dump(2) + "\n");
    total.artifacts.push_back("manifest.json");
  } catch (const std::exception& e) {
    if (total.exit_code == kExitOk) {
      total.exit_code = kExitConfigError;
      total.message = e.what();
    }
  }
  return total;
}

}  // namespace ptlz
