#include "ptlz/runconfig.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ptlz {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct LineContext {
  const std::string& file;
  int line;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(file + ":" + std::to_string(line) + ": " + msg);
  }
};

double parse_double(const LineContext& ctx, const std::string& key,
                    const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    ctx.fail("value '" + text + "' for key '" + key + "' is not a number");
  return v;
}

int parse_int(const LineContext& ctx, const std::string& key,
              const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0')
    ctx.fail("value '" + text + "' for key '" + key + "' is not an integer");
  return static_cast<int>(v);
}

std::vector<double> parse_list(const LineContext& ctx, const std::string& key,
                               const std::string& text) {
  std::vector<double> values;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) values.push_back(parse_double(ctx, key, tok));
  if (values.empty()) ctx.fail("empty value list for grid key '" + key + "'");
  return values;
}

[[noreturn]] void fail_check(const std::string& what) {
  throw ConfigError(what);
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) fail_check(std::string(what) + " must be finite");
}

}  // namespace

const char* to_string(RegimeSelection r) {
  switch (r) {
    case RegimeSelection::oracle: return "oracle";
    case RegimeSelection::airy: return "airy";
    case RegimeSelection::quartic_bessel: return "quartic-bessel";
    case RegimeSelection::all: return "all";
  }
  return "?";
}

RegimeSelection parse_regime_selection(const std::string& s) {
  if (s == "oracle") return RegimeSelection::oracle;
  if (s == "airy") return RegimeSelection::airy;
  if (s == "quartic-bessel") return RegimeSelection::quartic_bessel;
  if (s == "all") return RegimeSelection::all;
  throw ConfigError("unknown regime '" + s +
                    "' (expected oracle, airy, quartic-bessel, or all)");
}

RunConfig parse_config(std::istream& in, const std::string& filename) {
  RunConfig cfg;
  std::string section;
  std::string raw;
  int lineno = 0;

  while (std::getline(in, raw)) {
    ++lineno;
    LineContext ctx{filename, lineno};

    const auto cut = raw.find_first_of("#;");
    std::string line = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') ctx.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "model" && section != "sweep" && section != "time" &&
          section != "series" && section != "run" && section != "grid")
        ctx.fail("unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      ctx.fail("expected 'key = value' or '[section]'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) ctx.fail("missing key before '='");
    if (value.empty()) ctx.fail("missing value for key '" + key + "'");
    if (section.empty()) ctx.fail("key '" + key + "' outside any section");

    if (section == "model") {
      if (key == "omega1") cfg.model.omega1 = parse_double(ctx, key, value);
      else if (key == "omega2") cfg.model.omega2 = parse_double(ctx, key, value);
      else if (key == "gamma0") cfg.model.gamma0 = parse_double(ctx, key, value);
      else if (key == "gamma") cfg.model.gamma = parse_double(ctx, key, value);
      else if (key == "kappa") cfg.model.kappa = parse_double(ctx, key, value);
      else if (key == "eta") cfg.model.eta = parse_double(ctx, key, value);
      else ctx.fail("unknown key '" + key + "' in section [model]");
    } else if (section == "sweep") {
      if (key == "alpha") cfg.sweep.alpha = parse_double(ctx, key, value);
      else if (key == "beta") cfg.sweep.beta = parse_double(ctx, key, value);
      else ctx.fail("unknown key '" + key + "' in section [sweep]");
    } else if (section == "time") {
      if (key == "start") cfg.t_start = parse_double(ctx, key, value);
      else if (key == "stop") cfg.t_stop = parse_double(ctx, key, value);
      else if (key == "samples") cfg.samples = parse_int(ctx, key, value);
      else ctx.fail("unknown key '" + key + "' in section [time]");
    } else if (section == "series") {
      if (key == "order") cfg.order = parse_int(ctx, key, value);
      else if (key == "power_cap") cfg.power_cap = parse_int(ctx, key, value);
      else ctx.fail("unknown key '" + key + "' in section [series]");
    } else if (section == "run") {
      if (key == "regime") {
        try {
          cfg.regime = parse_regime_selection(value);
        } catch (const ConfigError& e) {
          ctx.fail(e.what());
        }
      } else if (key == "tol") {
        cfg.tol = parse_double(ctx, key, value);
      } else if (key == "out") {
        cfg.out_dir = value;
      } else if (key == "jobs") {
        cfg.jobs = parse_int(ctx, key, value);
      } else {
        ctx.fail("unknown key '" + key + "' in section [run]");
      }
    } else {  // grid
      if (key == "alpha") cfg.grid_alpha = parse_list(ctx, key, value);
      else if (key == "beta") cfg.grid_beta = parse_list(ctx, key, value);
      else if (key == "kappa") cfg.grid_kappa = parse_list(ctx, key, value);
      else if (key == "eta") cfg.grid_eta = parse_list(ctx, key, value);
      else ctx.fail("unknown key '" + key + "' in section [grid]");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  return parse_config(in, path);
}

void RunConfig::validate() const {
  require_finite(model.omega1, "model.omega1");
  require_finite(model.omega2, "model.omega2");
  require_finite(model.gamma0, "model.gamma0");
  require_finite(model.gamma, "model.gamma");
  require_finite(model.kappa, "model.kappa");
  require_finite(model.eta, "model.eta");
  require_finite(sweep.alpha, "sweep.alpha");
  require_finite(sweep.beta, "sweep.beta");
  require_finite(t_start, "time.start");
  require_finite(t_stop, "time.stop");
  require_finite(tol, "run.tol");

  if (!(t_start < t_stop))
    fail_check("time.start must be below time.stop");
  if (samples < 2) fail_check("time.samples must be at least 2 (got " +
                              std::to_string(samples) + ")");
  if (tol < 1e-13 || tol > 1e-3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", tol);
    fail_check(std::string("run.tol ") + buf +
               " outside the integrator's accepted range [1e-13, 1e-3]");
  }
  if (order < 0 || order > 16)
    fail_check("series.order must lie in [0, 16] (got " +
               std::to_string(order) + ")");
  if (power_cap < order + 8 || power_cap > 200)
    fail_check("series.power_cap must lie in [order + 8, 200] (got " +
               std::to_string(power_cap) + ")");
  if (jobs < 1) fail_check("run.jobs must be at least 1 (got " +
                           std::to_string(jobs) + ")");
  if (out_dir.empty()) fail_check("run.out must not be empty");

  for (const auto* g : {&grid_alpha, &grid_beta, &grid_kappa, &grid_eta})
    for (double v : *g) require_finite(v, "grid value");

  if (regime != RegimeSelection::oracle) {
    if (model.gamma != model.gamma0)
      fail_check(
          "regime comparisons need matched linewidths "
          "(model.gamma == model.gamma0); use regime = oracle otherwise");
    const bool beta_zero =
        sweep.beta == 0 ||
        (!grid_beta.empty() &&
         std::any_of(grid_beta.begin(), grid_beta.end(),
                     [](double b) { return b == 0; }));
    if (beta_zero)
      fail_check("regime comparisons need a nonzero sweep curvature beta");
  }
}

bool RunConfig::has_grid() const {
  return !grid_alpha.empty() || !grid_beta.empty() || !grid_kappa.empty() ||
         !grid_eta.empty();
}

std::vector<RunConfig> RunConfig::sweep_points() const {
  if (!has_grid()) return {*this};

  const std::vector<double> as =
      grid_alpha.empty() ? std::vector<double>{sweep.alpha} : grid_alpha;
  const std::vector<double> bs =
      grid_beta.empty() ? std::vector<double>{sweep.beta} : grid_beta;
  const std::vector<double> ks =
      grid_kappa.empty() ? std::vector<double>{model.kappa} : grid_kappa;
  const std::vector<double> es =
      grid_eta.empty() ? std::vector<double>{model.eta} : grid_eta;

  std::vector<RunConfig> points;
  points.reserve(as.size() * bs.size() * ks.size() * es.size());
  for (double a : as)
    for (double b : bs)
      for (double k : ks)
        for (double e : es) {
          RunConfig p = *this;
          p.sweep.alpha = a;
          p.sweep.beta = b;
          p.model.kappa = k;
          p.model.eta = e;
          p.grid_alpha.clear();
          p.grid_beta.clear();
          p.grid_kappa.clear();
          p.grid_eta.clear();
          char name[32];
          std::snprintf(name, sizeof name, "point_%03zu", points.size());
          p.out_dir = out_dir + "/" + name;
          points.push_back(std::move(p));
        }
  return points;
}

void apply_overrides(RunConfig& cfg, const FlagOverrides& flags) {
  if (flags.out_dir) cfg.out_dir = *flags.out_dir;
  if (flags.regime) cfg.regime = parse_regime_selection(*flags.regime);
  if (flags.order) cfg.order = *flags.order;
  if (flags.tol) cfg.tol = *flags.tol;
  if (flags.jobs) cfg.jobs = *flags.jobs;
}

std::string config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["model"] = {{"omega1", cfg.model.omega1}, {"omega2", cfg.model.omega2},
                {"gamma0", cfg.model.gamma0}, {"gamma", cfg.model.gamma},
                {"kappa", cfg.model.kappa},   {"eta", cfg.model.eta}};
  j["sweep"] = {{"alpha", cfg.sweep.alpha}, {"beta", cfg.sweep.beta}};
  j["time"] = {{"start", cfg.t_start},
               {"stop", cfg.t_stop},
               {"samples", cfg.samples}};
  j["series"] = {{"order", cfg.order}, {"power_cap", cfg.power_cap}};
  j["run"] = {{"regime", to_string(cfg.regime)},
              {"tol", cfg.tol},
              {"out", cfg.out_dir},
              {"jobs", cfg.jobs}};
  nlohmann::json grid = nlohmann::json::object();
  if (!cfg.grid_alpha.empty()) grid["alpha"] = cfg.grid_alpha;
  if (!cfg.grid_beta.empty()) grid["beta"] = cfg.grid_beta;
  if (!cfg.grid_kappa.empty()) grid["kappa"] = cfg.grid_kappa;
  if (!cfg.grid_eta.empty()) grid["eta"] = cfg.grid_eta;
  j["grid"] = grid;
  return j.dump(2);
}

}  // namespace ptlz
