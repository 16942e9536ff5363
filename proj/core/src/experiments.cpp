#include "rovib/experiments.hpp"

#include <zlib.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>

#include "rovib/classical.hpp"
#include "rovib/csv.hpp"
#include "rovib/errors.hpp"
#include "rovib/evolution.hpp"
#include "rovib/interaction.hpp"
#include "rovib/matrix_elements.hpp"
#include "rovib/observables.hpp"
#include "rovib/svg.hpp"

namespace rovib::experiments {

namespace {

using nlohmann::json;

constexpr const char* kCodeVersion = "0.1.0";
constexpr double kBoundaryWarnLevel = 1e-3;

const char* kPalette[] = {"#1f6fb2", "#d9541e", "#2e8b57", "#8b2e8b", "#b8860b", "#3b3b3b"};

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Strict JSON helpers
// ---------------------------------------------------------------------------

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* key : allowed) ok = ok || item.key() == key;
    if (!ok) throw ConfigError(where + ": unknown key \"" + item.key() + "\"");
  }
}

double get_double(const json& j, const char* key, double fallback, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) throw ConfigError(where + ": \"" + key + "\" must be a number");
  return it->get<double>();
}

int get_int(const json& j, const char* key, int fallback, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer()) throw ConfigError(where + ": \"" + key + "\" must be an integer");
  return it->get<int>();
}

bool get_bool(const json& j, const char* key, bool fallback, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) throw ConfigError(where + ": \"" + key + "\" must be a boolean");
  return it->get<bool>();
}

std::vector<double> get_double_array(const json& j, const char* key,
                                     std::vector<double> fallback, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_array()) throw ConfigError(where + ": \"" + key + "\" must be an array");
  std::vector<double> out;
  for (const auto& v : *it) {
    if (!v.is_number()) throw ConfigError(where + ": \"" + key + "\" must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

StateIndex state_from_json(const json& j, const std::string& where) {
  check_keys(j, {"n", "l", "m"}, where);
  StateIndex s;
  s.n = get_int(j, "n", 0, where);
  s.l = get_int(j, "l", 0, where);
  s.m = get_int(j, "m", 0, where);
  return s;
}

json state_to_json(const StateIndex& s) { return json{{"n", s.n}, {"l", s.l}, {"m", s.m}}; }

InitialStateSpec initial_from_json(const json& j, const std::string& where) {
  check_keys(j, {"type", "n", "l", "m"}, where);
  auto it = j.find("type");
  if (it == j.end() || !it->is_string())
    throw ConfigError(where + ": \"type\" must be \"state\" or \"poisson-like\"");
  InitialStateSpec spec;
  const std::string type = it->get<std::string>();
  if (type == "poisson-like") {
    spec.kind = InitialStateSpec::Kind::PoissonLike;
  } else if (type == "state") {
    spec.kind = InitialStateSpec::Kind::SingleState;
    spec.state.n = get_int(j, "n", 0, where);
    spec.state.l = get_int(j, "l", 0, where);
    spec.state.m = get_int(j, "m", 0, where);
  } else {
    throw ConfigError(where + ": unknown initial state type \"" + type + "\"");
  }
  return spec;
}

json initial_to_json(const InitialStateSpec& spec) {
  if (spec.kind == InitialStateSpec::Kind::PoissonLike) return json{{"type", "poisson-like"}};
  json j = state_to_json(spec.state);
  j["type"] = "state";
  return j;
}

// ---------------------------------------------------------------------------
// Settings <-> JSON
// ---------------------------------------------------------------------------

PoincareSettings poincare_from_json(const json& j) {
  const std::string where = "settings(classical-poincare)";
  check_keys(j,
             {"n0_grid", "psi0", "p0", "theta0", "n_crossings", "rel_tol", "abs_tol", "tau_max"},
             where);
  PoincareSettings s;
  s.n0_grid = get_double_array(j, "n0_grid", s.n0_grid, where);
  s.psi0 = get_double(j, "psi0", s.psi0, where);
  s.p0 = get_double(j, "p0", s.p0, where);
  s.theta0 = get_double(j, "theta0", s.theta0, where);
  s.n_crossings = get_int(j, "n_crossings", s.n_crossings, where);
  s.rel_tol = get_double(j, "rel_tol", s.rel_tol, where);
  s.abs_tol = get_double(j, "abs_tol", s.abs_tol, where);
  s.tau_max = get_double(j, "tau_max", s.tau_max, where);
  return s;
}

json poincare_to_json(const PoincareSettings& s) {
  return json{{"n0_grid", s.n0_grid}, {"psi0", s.psi0},       {"p0", s.p0},
              {"theta0", s.theta0},   {"n_crossings", s.n_crossings},
              {"rel_tol", s.rel_tol}, {"abs_tol", s.abs_tol}, {"tau_max", s.tau_max}};
}

CriticalPointSettings critical_from_json(const json& j) {
  const std::string where = "settings(classical-critical)";
  check_keys(j, {"branch_zero", "branch_pi"}, where);
  CriticalPointSettings s;
  s.branch_zero = get_bool(j, "branch_zero", s.branch_zero, where);
  s.branch_pi = get_bool(j, "branch_pi", s.branch_pi, where);
  return s;
}

json critical_to_json(const CriticalPointSettings& s) {
  return json{{"branch_zero", s.branch_zero}, {"branch_pi", s.branch_pi}};
}

ChaosScanSettings chaos_from_json(const json& j) {
  const std::string where = "settings(chaos-scan)";
  check_keys(j,
             {"W_grid", "n0_grid", "psi0", "p0", "theta0", "tau_end", "renorm_interval",
              "rel_tol", "abs_tol"},
             where);
  ChaosScanSettings s;
  s.W_grid = get_double_array(j, "W_grid", s.W_grid, where);
  s.n0_grid = get_double_array(j, "n0_grid", s.n0_grid, where);
  s.psi0 = get_double(j, "psi0", s.psi0, where);
  s.p0 = get_double(j, "p0", s.p0, where);
  s.theta0 = get_double(j, "theta0", s.theta0, where);
  s.tau_end = get_double(j, "tau_end", s.tau_end, where);
  s.renorm_interval = get_double(j, "renorm_interval", s.renorm_interval, where);
  s.rel_tol = get_double(j, "rel_tol", s.rel_tol, where);
  s.abs_tol = get_double(j, "abs_tol", s.abs_tol, where);
  return s;
}

json chaos_to_json(const ChaosScanSettings& s) {
  return json{{"W_grid", s.W_grid},
              {"n0_grid", s.n0_grid},
              {"psi0", s.psi0},
              {"p0", s.p0},
              {"theta0", s.theta0},
              {"tau_end", s.tau_end},
              {"renorm_interval", s.renorm_interval},
              {"rel_tol", s.rel_tol},
              {"abs_tol", s.abs_tol}};
}

std::vector<StateIndex> tracked_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": \"tracked\" must be an array");
  std::vector<StateIndex> out;
  for (const auto& v : j) out.push_back(state_from_json(v, where + ".tracked"));
  return out;
}

QuantumEvolveSettings evolve_from_json(const json& j) {
  const std::string where = "settings(quantum-evolve)";
  check_keys(j,
             {"n_max", "l_max", "initial", "W_values", "tau_end", "rel_tol", "abs_tol",
              "sample_dt", "tracked", "dump_spectrum", "dump_matrix_tau"},
             where);
  QuantumEvolveSettings s;
  s.n_max = get_int(j, "n_max", s.n_max, where);
  s.l_max = get_int(j, "l_max", s.l_max, where);
  if (auto it = j.find("initial"); it != j.end()) s.initial = initial_from_json(*it, where);
  s.W_values = get_double_array(j, "W_values", s.W_values, where);
  s.tau_end = get_double(j, "tau_end", s.tau_end, where);
  s.rel_tol = get_double(j, "rel_tol", s.rel_tol, where);
  s.abs_tol = get_double(j, "abs_tol", s.abs_tol, where);
  s.sample_dt = get_double(j, "sample_dt", s.sample_dt, where);
  if (auto it = j.find("tracked"); it != j.end()) s.tracked = tracked_from_json(*it, where);
  s.dump_spectrum = get_bool(j, "dump_spectrum", s.dump_spectrum, where);
  if (auto it = j.find("dump_matrix_tau"); it != j.end()) {
    if (!it->is_number()) throw ConfigError(where + ": \"dump_matrix_tau\" must be a number");
    s.dump_matrix_tau = it->get<double>();
  }
  return s;
}

json evolve_to_json(const QuantumEvolveSettings& s) {
  json tracked = json::array();
  for (const auto& t : s.tracked) tracked.push_back(state_to_json(t));
  json j{{"n_max", s.n_max},       {"l_max", s.l_max},
         {"initial", initial_to_json(s.initial)},
         {"W_values", s.W_values}, {"tau_end", s.tau_end},
         {"rel_tol", s.rel_tol},   {"abs_tol", s.abs_tol},
         {"sample_dt", s.sample_dt},
         {"tracked", tracked},     {"dump_spectrum", s.dump_spectrum}};
  if (s.dump_matrix_tau) j["dump_matrix_tau"] = *s.dump_matrix_tau;
  return j;
}

QuantumObservablesSettings observables_from_json(const json& j) {
  const std::string where = "settings(quantum-observables)";
  check_keys(j,
             {"n_max", "l_max", "initial", "tau_end", "rel_tol", "abs_tol", "sample_dt",
              "xy_plot", "number_phase_plot"},
             where);
  QuantumObservablesSettings s;
  s.n_max = get_int(j, "n_max", s.n_max, where);
  s.l_max = get_int(j, "l_max", s.l_max, where);
  if (auto it = j.find("initial"); it != j.end()) s.initial = initial_from_json(*it, where);
  s.tau_end = get_double(j, "tau_end", s.tau_end, where);
  s.rel_tol = get_double(j, "rel_tol", s.rel_tol, where);
  s.abs_tol = get_double(j, "abs_tol", s.abs_tol, where);
  s.sample_dt = get_double(j, "sample_dt", s.sample_dt, where);
  s.xy_plot = get_bool(j, "xy_plot", s.xy_plot, where);
  s.number_phase_plot = get_bool(j, "number_phase_plot", s.number_phase_plot, where);
  return s;
}

json observables_to_json(const QuantumObservablesSettings& s) {
  return json{{"n_max", s.n_max},
              {"l_max", s.l_max},
              {"initial", initial_to_json(s.initial)},
              {"tau_end", s.tau_end},
              {"rel_tol", s.rel_tol},
              {"abs_tol", s.abs_tol},
              {"sample_dt", s.sample_dt},
              {"xy_plot", s.xy_plot},
              {"number_phase_plot", s.number_phase_plot}};
}

TwoLevelSettings two_level_from_json(const json& j) {
  const std::string where = "settings(two-level-oracle)";
  check_keys(j, {"initial", "final", "tau_end", "sample_dt", "rel_tol", "abs_tol"}, where);
  TwoLevelSettings s;
  if (auto it = j.find("initial"); it != j.end()) s.initial = state_from_json(*it, where);
  if (auto it = j.find("final"); it != j.end()) s.final_state = state_from_json(*it, where);
  s.tau_end = get_double(j, "tau_end", s.tau_end, where);
  s.sample_dt = get_double(j, "sample_dt", s.sample_dt, where);
  s.rel_tol = get_double(j, "rel_tol", s.rel_tol, where);
  s.abs_tol = get_double(j, "abs_tol", s.abs_tol, where);
  return s;
}

json two_level_to_json(const TwoLevelSettings& s) {
  return json{{"initial", state_to_json(s.initial)}, {"final", state_to_json(s.final_state)},
              {"tau_end", s.tau_end},                {"sample_dt", s.sample_dt},
              {"rel_tol", s.rel_tol},                {"abs_tol", s.abs_tol}};
}

json settings_to_json(const ExperimentSettings& settings) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PoincareSettings>) return poincare_to_json(s);
        if constexpr (std::is_same_v<T, CriticalPointSettings>) return critical_to_json(s);
        if constexpr (std::is_same_v<T, ChaosScanSettings>) return chaos_to_json(s);
        if constexpr (std::is_same_v<T, QuantumEvolveSettings>) return evolve_to_json(s);
        if constexpr (std::is_same_v<T, QuantumObservablesSettings>) return observables_to_json(s);
        if constexpr (std::is_same_v<T, TwoLevelSettings>) return two_level_to_json(s);
      },
      settings);
}

// ---------------------------------------------------------------------------
// Output bookkeeping
// ---------------------------------------------------------------------------

std::string crc32_of_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot reopen " + file.string() + " for checksumming");
  uLong crc = crc32(0L, Z_NULL, 0);
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
    crc = crc32(crc, reinterpret_cast<const Bytef*>(buf), static_cast<uInt>(in.gcount()));
  char hex[16];
  std::snprintf(hex, sizeof(hex), "%08lx", static_cast<unsigned long>(crc));
  return hex;
}

// Collects relative output names and warnings while an experiment runs.
struct RunContext {
  std::filesystem::path dir;
  std::vector<std::string> files;
  std::vector<std::string> warnings;

  std::filesystem::path path(const std::string& name) {
    files.push_back(name);
    return dir / name;
  }
  void warn(const std::string& message) { warnings.push_back(message); }
};

std::vector<std::complex<double>> build_initial(const InitialStateSpec& spec,
                                                const quantum::Basis& basis) {
  if (spec.kind == InitialStateSpec::Kind::PoissonLike)
    return quantum::poisson_like_initial_state(basis);
  const auto pos = basis.find(spec.state);
  if (!pos)
    throw ConfigError("initial state (" + std::to_string(spec.state.n) + "," +
                      std::to_string(spec.state.l) + "," + std::to_string(spec.state.m) +
                      ") is not inside the basis");
  std::vector<std::complex<double>> d(basis.size(), {0.0, 0.0});
  d[*pos] = 1.0;
  return d;
}

std::string state_label(const StateIndex& s) {
  return std::to_string(s.n) + "_" + std::to_string(s.l) + "_" + std::to_string(s.m);
}

// ---------------------------------------------------------------------------
// Experiment bodies
// ---------------------------------------------------------------------------

void run_poincare(const ModelParameters& params, const PoincareSettings& s, RunContext& ctx) {
  if (s.n0_grid.empty()) throw ConfigError("classical-poincare: n0_grid must be nonempty");
  if (s.n_crossings <= 0) throw ConfigError("classical-poincare: n_crossings must be positive");
  if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0))
    throw ConfigError("classical-poincare: tolerances must be positive");

  classical::SectionOptions options;
  options.n_crossings = s.n_crossings;
  options.tol = {s.rel_tol, s.abs_tol};
  options.tau_max = s.tau_max;

  std::vector<std::string> aborts;
  std::vector<io::Series> scatter;
  const std::vector<std::string> cols{"tau", "psi_mod", "n"};
  for (std::size_t i = 0; i < s.n0_grid.size(); ++i) {
    classical::State init{s.n0_grid[i], s.psi0, s.p0, s.theta0};
    const auto result = classical::poincare_section(init, params, options);

    io::CsvWriter csv(ctx.path("sections_" + std::to_string(i) + ".csv"));
    csv.header(cols);
    io::Series series;
    series.label = "n0=" + fmt_g(s.n0_grid[i]);
    series.color = kPalette[i % std::size(kPalette)];
    series.line = false;
    for (const auto& pt : result.points) {
      csv.row(std::array{pt.tau, pt.psi_mod, pt.n});
      series.points.emplace_back(pt.psi_mod, pt.n);
    }
    scatter.push_back(std::move(series));
    if (result.abort_reason)
      aborts.push_back("n0=" + fmt_g(s.n0_grid[i]) + ": " + *result.abort_reason);
  }

  io::PlotSpec spec;
  spec.title = "Section theta = pi/2 (upward), W = " + fmt_g(params.W) + " cm^-1";
  spec.x_label = "psi mod 2*pi";
  spec.y_label = "n";
  io::write_svg_plot(ctx.path("poincare.svg"), spec, scatter);

  if (!aborts.empty()) {
    std::string msg = "classical-poincare aborted:";
    for (const auto& a : aborts) msg += "\n  " + a;
    throw std::runtime_error(msg);
  }
}

void run_critical(const ModelParameters& params, const CriticalPointSettings& s, RunContext& ctx) {
  if (!s.branch_zero && !s.branch_pi)
    throw ConfigError("classical-critical: at least one branch must be enabled");

  io::CsvWriter csv(ctx.path("critical_points.csv"));
  csv.header(std::vector<std::string>{"psi_branch", "n_root"});

  const double drive_free =
      (params.beta != params.hbar_xe_omega_e)
          ? -(params.hbar_detuning + 2.0 * params.beta * params.k) /
                    (2.0 * params.beta - 2.0 * params.hbar_xe_omega_e) -
                0.5
          : std::numeric_limits<double>::quiet_NaN();

  auto emit = [&](classical::PsiBranch branch, double psi_value) {
    const auto roots = classical::critical_points(params, branch);
    for (double n : roots) csv.row(std::array{psi_value, n});
    for (double n : roots)
      ctx.warn("fixed-point audit: psi=" + fmt_g(psi_value) + " root n=" + fmt_g(n) +
               " (drive-free balance n=" + fmt_g(drive_free) +
               "); the commonly quoted n1~2 for these molecular constants is not reproduced"
               " and is reported only, never fitted");
    return roots.size();
  };

  std::size_t total = 0;
  if (s.branch_zero) total += emit(classical::PsiBranch::Zero, 0.0);
  if (s.branch_pi) total += emit(classical::PsiBranch::Pi, std::numbers::pi);
  if (total == 0) ctx.warn("fixed-point audit: no real fixed point for these parameters");
}

void run_chaos_scan(const ModelParameters& params, const ChaosScanSettings& s, RunContext& ctx) {
  if (s.W_grid.empty() || s.n0_grid.empty())
    throw ConfigError("chaos-scan: W_grid and n0_grid must be nonempty");

  std::vector<classical::State> initials;
  for (double n0 : s.n0_grid) initials.push_back({n0, s.psi0, s.p0, s.theta0});

  classical::LyapunovOptions options;
  options.tau_end = s.tau_end;
  options.renorm_interval = s.renorm_interval;
  options.tol = {s.rel_tol, s.abs_tol};

  const auto scan = classical::chaos_scan(params, s.W_grid, initials, options);

  io::CsvWriter csv(ctx.path("chaos_scan.csv"));
  csv.header(std::vector<std::string>{"W", "max_lyapunov", "onset_flag"});
  for (const auto& cell : scan.cells) {
    const double onset =
        (scan.onset_W && cell.W == *scan.onset_W) ? 1.0 : 0.0;
    csv.row(std::array{cell.W, cell.max_lyapunov, onset});
    for (const auto& err : cell.errors) ctx.warn("chaos-scan cell W=" + fmt_g(cell.W) + ": " + err);
  }

  ctx.warn("chaos-scan calibration: integrable baseline |lambda|=" + fmt_g(scan.baseline) +
           ", threshold lambda_c=" + fmt_g(scan.lambda_c) +
           (scan.onset_W ? ", onset W=" + fmt_g(*scan.onset_W) : ", no onset inside the grid"));

  io::Series series;
  series.label = "max lyapunov";
  series.line = true;
  for (const auto& cell : scan.cells)
    if (std::isfinite(cell.max_lyapunov)) series.points.emplace_back(cell.W, cell.max_lyapunov);
  io::PlotSpec spec;
  spec.title = "Largest Lyapunov exponent vs drive strength";
  spec.x_label = "W (cm^-1)";
  spec.y_label = "max lambda (1/tau)";
  io::write_svg_plot(ctx.path("chaos_scan.svg"), spec, std::array{series});
}

void write_spectrum_csv(const std::filesystem::path& file, int n_max, int l_max,
                        const ModelParameters& params) {
  io::CsvWriter csv(file);
  csv.header(std::vector<std::string>{"n", "l", "E_nl_cm1"});
  for (int n = 0; n <= n_max; ++n)
    for (int l = 0; l <= l_max; ++l)
      csv.row(std::array{static_cast<double>(n), static_cast<double>(l),
                         quantum::energy(n, l, params)});
}

void run_quantum_evolve(const ModelParameters& params, const QuantumEvolveSettings& s,
                        RunContext& ctx) {
  if (!(s.sample_dt > 0.0) || !(s.tau_end > 0.0) || !(s.rel_tol > 0.0) || !(s.abs_tol > 0.0))
    throw ConfigError("quantum-evolve: times and tolerances must be positive");
  const auto basis = quantum::Basis::build(s.n_max, s.l_max, params);
  for (const auto& t : s.tracked)
    if (!basis.find(t))
      throw ConfigError("quantum-evolve: tracked state (" + state_label(t) +
                        ") is outside the basis");

  std::vector<double> W_values = s.W_values;
  const bool single = W_values.empty();
  if (single) W_values.push_back(params.W);

  if (s.dump_spectrum) write_spectrum_csv(ctx.path("spectrum.csv"), s.n_max, s.l_max, params);

  for (double W : W_values) {
    ModelParameters p = validate([&] {
      ModelParameters q = params;
      q.W = W;
      return q;
    }());

    const auto d0 = build_initial(s.initial, basis);
    quantum::EvolveOptions options{s.rel_tol, s.abs_tol, s.sample_dt};
    const auto series = quantum::evolve(basis, d0, p, s.tau_end, options);

    const std::string suffix = single ? "" : "_W" + fmt_g(W);

    if (s.dump_matrix_tau) {
      std::ofstream mat(ctx.path("interaction_matrix" + suffix + ".txt"));
      quantum::write_matrix_coordinate_list(
          quantum::interaction_matrix(basis, p, *s.dump_matrix_tau), mat);
    }

    std::vector<std::string> cols{"tau", "total_norm"};
    for (const auto& t : s.tracked) cols.push_back("P_" + state_label(t));
    cols.push_back("boundary_population");

    io::CsvWriter csv(ctx.path("populations" + suffix + ".csv"));
    csv.header(cols);

    std::vector<io::Series> curves(s.tracked.size());
    for (std::size_t t = 0; t < s.tracked.size(); ++t) {
      curves[t].label = "P_" + state_label(s.tracked[t]);
      curves[t].color = kPalette[t % std::size(kPalette)];
    }

    double max_boundary = 0.0;
    std::vector<double> row;
    for (std::size_t i = 0; i < series.taus.size(); ++i) {
      const auto& d = series.coefficients[i];
      row.clear();
      row.push_back(series.taus[i]);
      row.push_back(quantum::total_population(d));
      for (std::size_t t = 0; t < s.tracked.size(); ++t) {
        const double pop = std::norm(d[*basis.find(s.tracked[t])]);
        row.push_back(pop);
        curves[t].points.emplace_back(series.taus[i], pop);
      }
      const double boundary = quantum::boundary_population(basis, d);
      max_boundary = std::max(max_boundary, boundary);
      row.push_back(boundary);
      csv.row(row);
    }

    if (max_boundary > kBoundaryWarnLevel)
      ctx.warn("truncation audit: boundary-shell population reached " + fmt_g(max_boundary) +
               " at W=" + fmt_g(W) + "; results depend on the n_max/l_max caps");

    io::PlotSpec spec;
    spec.title = "Populations, W = " + fmt_g(W) + " cm^-1";
    spec.x_label = "tau";
    spec.y_label = "probability";
    io::write_svg_plot(ctx.path("populations" + suffix + ".svg"), spec, curves);
  }
}

void run_quantum_observables(const ModelParameters& params, const QuantumObservablesSettings& s,
                             RunContext& ctx) {
  if (!(s.sample_dt > 0.0) || !(s.tau_end > 0.0) || !(s.rel_tol > 0.0) || !(s.abs_tol > 0.0))
    throw ConfigError("quantum-observables: times and tolerances must be positive");
  ModelParameters p = validate(params);
  const auto basis = quantum::Basis::build(s.n_max, s.l_max, p);
  const auto d0 = build_initial(s.initial, basis);

  quantum::EvolveOptions options{s.rel_tol, s.abs_tol, s.sample_dt};
  const auto series = quantum::evolve(basis, d0, p, s.tau_end, options);

  io::CsvWriter csv(ctx.path("observables.csv"));
  csv.header(std::vector<std::string>{"tau", "total_norm", "n_mean", "x_mean", "p_mean",
                                      "re_phase", "im_phase", "arg_phase", "phase_valid",
                                      "k_mean"});

  std::vector<quantum::ObservableSample> samples;
  samples.reserve(series.taus.size());
  double max_boundary = 0.0;
  for (std::size_t i = 0; i < series.taus.size(); ++i) {
    const auto sample = quantum::observe(basis, series.coefficients[i], series.taus[i]);
    csv.row(std::array{sample.tau, sample.total_norm, sample.n_mean, sample.x_mean, sample.p_mean,
                       sample.phase.value.real(), sample.phase.value.imag(), sample.phase.arg,
                       sample.phase.valid ? 1.0 : 0.0, sample.k_mean});
    max_boundary = std::max(max_boundary, sample.boundary_population);
    samples.push_back(sample);
  }

  if (max_boundary > kBoundaryWarnLevel)
    ctx.warn("truncation audit: boundary-shell population reached " + fmt_g(max_boundary) +
             "; results depend on the n_max/l_max caps");
  if (!samples.empty()) {
    const double drift = std::abs(samples.back().k_mean - samples.front().k_mean);
    if (drift > 1e-10)
      ctx.warn("conservation audit: k_mean drifted by " + fmt_g(drift) + " over the run");
  }

  if (s.xy_plot) {
    io::Series xy;
    xy.label = "(x_mean, p_mean)";
    for (const auto& sample : samples) xy.points.emplace_back(sample.x_mean, sample.p_mean);
    io::PlotSpec spec;
    spec.title = "Quadrature phase portrait, W = " + fmt_g(p.W) + " cm^-1";
    spec.x_label = "<X>";
    spec.y_label = "<P>";
    io::write_svg_plot(ctx.path("phase_xy.svg"), spec, std::array{xy});
  }

  if (s.number_phase_plot) {
    // Break the curve wherever the phase argument is undefined.
    std::vector<io::Series> segments;
    io::Series current;
    current.label = "(n_mean, arg)";
    auto flush = [&] {
      if (current.points.size() > 1) segments.push_back(current);
      current.points.clear();
    };
    for (const auto& sample : samples) {
      if (!sample.phase.valid) {
        flush();
        continue;
      }
      current.points.emplace_back(sample.n_mean * std::cos(sample.phase.arg),
                                  sample.n_mean * std::sin(sample.phase.arg));
    }
    flush();
    io::PlotSpec spec;
    spec.title = "Number/phase portrait (radius <n>, angle arg), W = " + fmt_g(p.W) + " cm^-1";
    spec.x_label = "<n> cos(arg)";
    spec.y_label = "<n> sin(arg)";
    io::write_svg_plot(ctx.path("number_phase.svg"), spec, segments);

    io::Series nm;
    nm.label = "n_mean";
    for (const auto& sample : samples) nm.points.emplace_back(sample.tau, sample.n_mean);
    io::PlotSpec nspec;
    nspec.title = "Vibrational number expectation";
    nspec.x_label = "tau";
    nspec.y_label = "<n>";
    io::write_svg_plot(ctx.path("n_mean.svg"), nspec, std::array{nm});
  }
}

void run_two_level(const ModelParameters& params, const TwoLevelSettings& s, RunContext& ctx) {
  if (!(s.sample_dt > 0.0) || !(s.tau_end > 0.0) || !(s.rel_tol > 0.0) || !(s.abs_tol > 0.0))
    throw ConfigError("two-level-oracle: times and tolerances must be positive");
  ModelParameters p = validate(params);
  const auto tl = quantum::two_level_parameters(s.initial, s.final_state, p);

  const auto basis = quantum::Basis::from_states({s.initial, s.final_state});
  std::vector<std::complex<double>> d0{{1.0, 0.0}, {0.0, 0.0}};
  quantum::EvolveOptions options{s.rel_tol, s.abs_tol, s.sample_dt};
  const auto series = quantum::evolve(basis, d0, p, s.tau_end, options);

  io::CsvWriter csv(ctx.path("two_level.csv"));
  csv.header(std::vector<std::string>{"tau", "p_initial_evolve", "p_final_evolve",
                                      "p_initial_oracle", "p_final_oracle"});
  io::Series ev, orc;
  ev.label = "evolved";
  orc.label = "closed form";
  orc.color = kPalette[1];
  for (std::size_t i = 0; i < series.taus.size(); ++i) {
    const double tau = series.taus[i];
    const auto [o0, of] = quantum::rabi_solution(tl, tau);
    const double pe0 = std::norm(series.coefficients[i][0]);
    const double pef = std::norm(series.coefficients[i][1]);
    csv.row(std::array{tau, pe0, pef, std::norm(o0), std::norm(of)});
    ev.points.emplace_back(tau, pef);
    orc.points.emplace_back(tau, std::norm(of));
  }

  ctx.warn("two-level audit: detuning=" + fmt_g(tl.detuning) +
           " cm^-1 computed from the level energies; the commonly quoted 0.82 cm^-1 for this"
           " transition is not reproduced and the computed value is used");
  ctx.warn("two-level audit: effective coupling alpha/W=" + fmt_g(tl.alpha / p.W) +
           " taken from the drive matrix entry; the reduced-formula value is half of this for"
           " the (1,0,0)->(2,1,1) pair and is not used");
  ctx.warn("two-level audit: peak transfer alpha^2/rabi^2=" + fmt_g(tl.peak_transfer()));

  io::PlotSpec spec;
  spec.title = "Two-level transfer probability, W = " + fmt_g(p.W) + " cm^-1";
  spec.x_label = "tau";
  spec.y_label = "P_final";
  io::write_svg_plot(ctx.path("two_level.svg"), spec, std::array{ev, orc});
}

}  // namespace

std::string experiment_name(const ExperimentSettings& settings) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PoincareSettings>) return "classical-poincare";
        if constexpr (std::is_same_v<T, CriticalPointSettings>) return "classical-critical";
        if constexpr (std::is_same_v<T, ChaosScanSettings>) return "chaos-scan";
        if constexpr (std::is_same_v<T, QuantumEvolveSettings>) return "quantum-evolve";
        if constexpr (std::is_same_v<T, QuantumObservablesSettings>) return "quantum-observables";
        if constexpr (std::is_same_v<T, TwoLevelSettings>) return "two-level-oracle";
      },
      settings);
}

std::string code_version() { return kCodeVersion; }

std::vector<PresetInfo> list_presets() {
  return {
      {"fig1a", "classical-poincare", "sections over the n0 grid at W=0.048 cm^-1 (regular)"},
      {"fig1b", "classical-poincare", "sections over the n0 grid at W=0.68 cm^-1 (mixed)"},
      {"fig1c", "classical-poincare", "sections over the n0 grid at W=1.03 cm^-1 (chaotic)"},
      {"fig2a", "quantum-evolve", "populations of |100> and |211> at W=0.048/0.19/0.68 cm^-1"},
      {"fig2b", "quantum-evolve", "populations of |100> and |211> at W=1.03 cm^-1"},
      {"fig3", "quantum-observables", "quadrature phase portrait <X>,<P> at W=1.03 cm^-1"},
      {"fig4", "quantum-observables", "number/phase portrait <n>, arg at W=1.03 cm^-1"},
      {"critical-points", "classical-critical", "fixed points on the section at W=0.05 cm^-1"},
      {"chaos-scan-default", "chaos-scan", "Lyapunov scan over W={0.048,0.177,0.68,1.03} cm^-1"},
      {"two-level", "two-level-oracle", "restricted pair vs closed form at W=0.048 cm^-1"},
  };
}

RunConfig preset_config(const std::string& name) {
  RunConfig cfg;
  cfg.params = geo_preset();
  cfg.output_dir = "runs/" + name;

  if (name == "fig1a" || name == "fig1b" || name == "fig1c") {
    cfg.params.W = (name == "fig1a") ? 0.048 : (name == "fig1b") ? 0.68 : 1.03;
    cfg.settings = PoincareSettings{};
  } else if (name == "fig2a") {
    QuantumEvolveSettings s;
    s.W_values = {0.048, 0.19, 0.68};
    cfg.params.W = s.W_values.front();
    cfg.settings = s;
  } else if (name == "fig2b") {
    cfg.params.W = 1.03;
    cfg.settings = QuantumEvolveSettings{};
  } else if (name == "fig3") {
    cfg.params.W = 1.03;
    QuantumObservablesSettings s;
    s.number_phase_plot = false;
    cfg.settings = s;
  } else if (name == "fig4") {
    cfg.params.W = 1.03;
    QuantumObservablesSettings s;
    s.xy_plot = false;
    cfg.settings = s;
  } else if (name == "critical-points") {
    cfg.params.W = 0.05;
    cfg.settings = CriticalPointSettings{};
  } else if (name == "chaos-scan-default") {
    cfg.params.W = 0.048;  // per-cell drives come from the grid
    cfg.settings = ChaosScanSettings{};
  } else if (name == "two-level") {
    cfg.params.W = 0.048;
    cfg.settings = TwoLevelSettings{};
  } else {
    throw ConfigError("unknown preset \"" + name + "\"");
  }
  return cfg;
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config: JSON parse error: ") + err.what());
  }
  check_keys(j, {"experiment", "params", "settings", "output_dir"}, "config");

  auto exp_it = j.find("experiment");
  if (exp_it == j.end() || !exp_it->is_string())
    throw ConfigError("config: \"experiment\" must name an experiment");
  const std::string experiment = exp_it->get<std::string>();

  auto params_it = j.find("params");
  if (params_it == j.end()) throw ConfigError("config: missing \"params\"");

  RunConfig cfg;
  cfg.params = params_from_json(params_it->dump());

  const json settings = j.value("settings", json::object());
  if (experiment == "classical-poincare")
    cfg.settings = poincare_from_json(settings);
  else if (experiment == "classical-critical")
    cfg.settings = critical_from_json(settings);
  else if (experiment == "chaos-scan")
    cfg.settings = chaos_from_json(settings);
  else if (experiment == "quantum-evolve")
    cfg.settings = evolve_from_json(settings);
  else if (experiment == "quantum-observables")
    cfg.settings = observables_from_json(settings);
  else if (experiment == "two-level-oracle")
    cfg.settings = two_level_from_json(settings);
  else
    throw ConfigError("config: unknown experiment \"" + experiment + "\"");

  auto out_it = j.find("output_dir");
  if (out_it == j.end() || !out_it->is_string())
    throw ConfigError("config: \"output_dir\" must be a string");
  cfg.output_dir = out_it->get<std::string>();
  return cfg;
}

RunConfig config_from_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("config: cannot open " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

std::string config_to_json(const RunConfig& config) {
  json j;
  j["experiment"] = experiment_name(config.settings);
  j["params"] = json::parse(params_to_json(config.params));
  j["settings"] = settings_to_json(config.settings);
  j["output_dir"] = config.output_dir.string();
  return j.dump(2);
}

RunManifest run(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();

  // Everything that can be rejected must be rejected before outputs appear.
  validate(config.params);
  if (config.output_dir.empty()) throw ConfigError("config: output_dir must not be empty");
  const std::string config_echo = config_to_json(config);

  std::filesystem::create_directories(config.output_dir);

  RunContext ctx;
  ctx.dir = config.output_dir;

  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PoincareSettings>) run_poincare(config.params, s, ctx);
        if constexpr (std::is_same_v<T, CriticalPointSettings>)
          run_critical(config.params, s, ctx);
        if constexpr (std::is_same_v<T, ChaosScanSettings>) run_chaos_scan(config.params, s, ctx);
        if constexpr (std::is_same_v<T, QuantumEvolveSettings>)
          run_quantum_evolve(config.params, s, ctx);
        if constexpr (std::is_same_v<T, QuantumObservablesSettings>)
          run_quantum_observables(config.params, s, ctx);
        if constexpr (std::is_same_v<T, TwoLevelSettings>) run_two_level(config.params, s, ctx);
      },
      config.settings);

  RunManifest manifest;
  manifest.experiment = experiment_name(config.settings);
  manifest.code_version = kCodeVersion;
  manifest.warnings = ctx.warnings;
  for (const auto& file : ctx.files)
    manifest.outputs.push_back({file, crc32_of_file(config.output_dir / file)});
  manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json j;
  j["experiment"] = manifest.experiment;
  j["code_version"] = manifest.code_version;
  j["completed"] = true;
  j["wall_clock_seconds"] = manifest.wall_clock_seconds;
  j["config"] = json::parse(config_echo);
  json outputs = json::array();
  for (const auto& rec : manifest.outputs)
    outputs.push_back(json{{"file", rec.file}, {"crc32", rec.crc32}});
  j["outputs"] = outputs;
  j["warnings"] = manifest.warnings;

  // The manifest is written last; its presence marks a completed run.
  std::ofstream out(config.output_dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest.json");
  out << j.dump(2) << "\n";
  return manifest;
}

}  // namespace rovib::experiments
