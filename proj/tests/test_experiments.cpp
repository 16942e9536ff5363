#include <doctest.h>
#include <zlib.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "rovib/csv.hpp"
#include "rovib/errors.hpp"
#include "rovib/experiments.hpp"
#include "rovib/svg.hpp"

using namespace rovib;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("rovib_test_" + tag);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("float formatting survives a round trip") {
  for (double v : {0.1 + 0.2, 1.0 / 3.0, 985.8, -7.16e-12, 0.0}) {
    const double back = std::stod(io::format_double(v));
    CHECK(back == v);
  }
}

TEST_CASE("preset table") {
  const auto presets = experiments::list_presets();
  std::set<std::string> names;
  for (const auto& p : presets) names.insert(p.name);
  CHECK(names.size() == presets.size());  // unique
  for (const char* required : {"fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig3", "fig4",
                               "critical-points", "chaos-scan-default"})
    CHECK(names.count(required) == 1);
  for (const auto& p : presets) {
    const auto cfg = experiments::preset_config(p.name);
    CHECK(experiments::experiment_name(cfg.settings) == p.experiment);
    CHECK_NOTHROW(validate(cfg.params));
  }
  CHECK_THROWS_AS(experiments::preset_config("fig9"), ConfigError);
}

TEST_CASE("preset drive strengths") {
  CHECK(experiments::preset_config("fig1a").params.W == 0.048);
  CHECK(experiments::preset_config("fig1b").params.W == 0.68);
  CHECK(experiments::preset_config("fig1c").params.W == 1.03);
  CHECK(experiments::preset_config("fig2b").params.W == 1.03);
  CHECK(experiments::preset_config("critical-points").params.W == 0.05);
}

TEST_CASE("config json round trip and strictness") {
  const auto cfg = experiments::preset_config("two-level");
  const std::string text = experiments::config_to_json(cfg);
  const auto parsed = experiments::config_from_json(text);
  CHECK(experiments::experiment_name(parsed.settings) == "two-level-oracle");
  CHECK(parsed.params.W == cfg.params.W);
  CHECK(parsed.output_dir == cfg.output_dir);

  CHECK_THROWS_AS(experiments::config_from_json("{\"experiment\":\"nope\",\"params\":{},"
                                                "\"output_dir\":\"x\"}"),
                  ConfigError);
  std::string with_extra = text;
  with_extra.insert(with_extra.rfind('}'), ",\"zzz\": 3");
  CHECK_THROWS_AS(experiments::config_from_json(with_extra), ConfigError);

  // Unknown settings keys are rejected too.
  const std::string bad_settings =
      "{\"experiment\":\"two-level-oracle\",\"params\":" + params_to_json(geo_preset()) +
      ",\"settings\":{\"bogus\":1},\"output_dir\":\"x\"}";
  CHECK_THROWS_AS(experiments::config_from_json(bad_settings), ConfigError);
}

TEST_CASE("a config error leaves nothing behind") {
  auto cfg = experiments::preset_config("critical-points");
  cfg.params.W = -2.0;
  cfg.output_dir = fresh_dir("reject");
  CHECK_THROWS_AS(experiments::run(cfg), ConfigError);
  CHECK(!fs::exists(cfg.output_dir));
}

TEST_CASE("critical-points run: outputs, manifest, checksums, determinism") {
  auto cfg = experiments::preset_config("critical-points");
  cfg.output_dir = fresh_dir("critical_a");
  const auto manifest = experiments::run(cfg);

  CHECK(manifest.experiment == "classical-critical");
  REQUIRE(fs::exists(cfg.output_dir / "manifest.json"));
  REQUIRE(fs::exists(cfg.output_dir / "critical_points.csv"));
  CHECK(!manifest.warnings.empty());

  const std::string csv = slurp(cfg.output_dir / "critical_points.csv");
  CHECK(csv.rfind("psi_branch,n_root\n", 0) == 0);
  CHECK(csv.find("3.86") != std::string::npos);

  // Checksums in the manifest match the files on disk, recomputed here.
  const std::string mtext = slurp(cfg.output_dir / "manifest.json");
  for (const auto& rec : manifest.outputs) {
    CHECK(mtext.find(rec.crc32) != std::string::npos);
    const std::string bytes = slurp(cfg.output_dir / rec.file);
    const uLong crc =
        crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(bytes.data()),
              static_cast<uInt>(bytes.size()));
    char hex[16];
    std::snprintf(hex, sizeof(hex), "%08lx", static_cast<unsigned long>(crc));
    CHECK(rec.crc32 == hex);
  }

  auto cfg2 = cfg;
  cfg2.output_dir = fresh_dir("critical_b");
  experiments::run(cfg2);
  CHECK(slurp(cfg2.output_dir / "critical_points.csv") == csv);

  fs::remove_all(cfg.output_dir);
  fs::remove_all(cfg2.output_dir);
}

TEST_CASE("two-level run produces matched oracle and evolution columns") {
  auto cfg = experiments::preset_config("two-level");
  std::get<experiments::TwoLevelSettings>(cfg.settings).tau_end = 50.0;
  cfg.output_dir = fresh_dir("twolevel");
  const auto manifest = experiments::run(cfg);

  const std::string csv = slurp(cfg.output_dir / "two_level.csv");
  CHECK(csv.rfind("tau,p_initial_evolve,p_final_evolve,p_initial_oracle,p_final_oracle\n", 0) ==
        0);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    double tau, pe0, pef, po0, pof;
    char comma;
    std::istringstream row(line);
    row >> tau >> comma >> pe0 >> comma >> pef >> comma >> po0 >> comma >> pof;
    CHECK(std::abs(pef - pof) < 1e-8);
    CHECK(std::abs(pe0 + pef - 1.0) < 1e-9);
    ++rows;
  }
  CHECK(rows >= 500);

  bool saw_detuning_flag = false;
  for (const auto& w : manifest.warnings)
    saw_detuning_flag = saw_detuning_flag || w.find("0.82") != std::string::npos;
  CHECK(saw_detuning_flag);

  fs::remove_all(cfg.output_dir);
}

TEST_CASE("quantum evolve run writes populations with the boundary column") {
  auto cfg = experiments::preset_config("fig2b");
  auto& settings = std::get<experiments::QuantumEvolveSettings>(cfg.settings);
  settings.tau_end = 20.0;
  settings.sample_dt = 1.0;
  settings.dump_spectrum = true;
  settings.dump_matrix_tau = 0.0;
  cfg.output_dir = fresh_dir("evolve");
  experiments::run(cfg);

  const std::string csv = slurp(cfg.output_dir / "populations.csv");
  CHECK(csv.rfind("tau,total_norm,P_1_0_0,P_2_1_1,boundary_population\n", 0) == 0);
  CHECK(fs::exists(cfg.output_dir / "spectrum.csv"));
  CHECK(fs::exists(cfg.output_dir / "interaction_matrix.txt"));
  const std::string spectrum = slurp(cfg.output_dir / "spectrum.csv");
  CHECK(spectrum.rfind("n,l,E_nl_cm1\n", 0) == 0);
  // Ground level, printed at 17 significant digits.
  std::istringstream spec_in(spectrum);
  std::string line;
  std::getline(spec_in, line);
  std::getline(spec_in, line);
  CHECK(std::stod(line.substr(line.rfind(',') + 1)) == doctest::Approx(492.35).epsilon(1e-14));

  fs::remove_all(cfg.output_dir);
}

TEST_CASE("observables run emits the fixed column set and plots") {
  auto cfg = experiments::preset_config("fig4");
  auto& settings = std::get<experiments::QuantumObservablesSettings>(cfg.settings);
  settings.tau_end = 10.0;
  settings.sample_dt = 0.5;
  cfg.output_dir = fresh_dir("obs");
  experiments::run(cfg);

  const std::string csv = slurp(cfg.output_dir / "observables.csv");
  CHECK(csv.rfind("tau,total_norm,n_mean,x_mean,p_mean,re_phase,im_phase,arg_phase,"
                  "phase_valid,k_mean\n",
                  0) == 0);
  CHECK(fs::exists(cfg.output_dir / "number_phase.svg"));
  CHECK(fs::exists(cfg.output_dir / "n_mean.svg"));
  CHECK(!fs::exists(cfg.output_dir / "phase_xy.svg"));  // fig4 turns the xy view off
  const std::string svg = slurp(cfg.output_dir / "number_phase.svg");
  CHECK(svg.rfind("<svg", 0) == 0);

  fs::remove_all(cfg.output_dir);
}

TEST_CASE("the regular-regime section preset collects its full crossing quota") {
  auto cfg = experiments::preset_config("fig1a");
  auto& settings = std::get<experiments::PoincareSettings>(cfg.settings);
  settings.n0_grid = {1.0};  // one representative trajectory keeps this quick
  cfg.output_dir = fresh_dir("fig1a_quota");
  experiments::run(cfg);
  std::istringstream in(slurp(cfg.output_dir / "sections_0.csv"));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2001);  // header plus one line per requested crossing
  fs::remove_all(cfg.output_dir);
}

TEST_CASE("a singular-bound experiment leaves partial outputs and no manifest") {
  auto cfg = experiments::preset_config("fig1a");
  auto& settings = std::get<experiments::PoincareSettings>(cfg.settings);
  settings.n0_grid = {1.0};
  settings.n_crossings = 100000;  // unreachable inside the budget
  settings.tau_max = 20.0;
  cfg.output_dir = fresh_dir("abort");
  CHECK_THROWS_AS(experiments::run(cfg), std::runtime_error);
  CHECK(fs::exists(cfg.output_dir / "sections_0.csv"));
  CHECK(!fs::exists(cfg.output_dir / "manifest.json"));
  fs::remove_all(cfg.output_dir);
}
