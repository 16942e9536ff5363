#pragma once

#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rovib/basis.hpp"
#include "rovib/params.hpp"

namespace rovib::experiments {

using quantum::StateIndex;

struct PoincareSettings {
  std::vector<double> n0_grid{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  double psi0 = std::numbers::pi;  // start at the stable drive phase
  double p0 = 0.0;
  double theta0 = 1.0;
  int n_crossings = 2000;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double tau_max = 1e6;
};

struct CriticalPointSettings {
  bool branch_zero = true;
  bool branch_pi = true;
};

struct ChaosScanSettings {
  std::vector<double> W_grid{0.048, 0.177, 0.68, 1.03};
  std::vector<double> n0_grid{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  double psi0 = std::numbers::pi;
  double p0 = 0.0;
  double theta0 = 1.0;
  double tau_end = 1e4;
  double renorm_interval = 1.0;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
};

struct InitialStateSpec {
  enum class Kind { SingleState, PoissonLike };
  Kind kind = Kind::SingleState;
  StateIndex state{1, 0, 0};
};

struct QuantumEvolveSettings {
  int n_max = 3;
  int l_max = 3;
  InitialStateSpec initial{};
  std::vector<double> W_values;  // empty: use params.W as-is
  double tau_end = 2000.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double sample_dt = 0.25;
  std::vector<StateIndex> tracked{{1, 0, 0}, {2, 1, 1}};
  bool dump_spectrum = false;
  std::optional<double> dump_matrix_tau;
};

struct QuantumObservablesSettings {
  int n_max = 3;
  int l_max = 3;
  InitialStateSpec initial{InitialStateSpec::Kind::PoissonLike, {1, 0, 0}};
  double tau_end = 2000.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double sample_dt = 0.25;
  bool xy_plot = true;
  bool number_phase_plot = true;
};

struct TwoLevelSettings {
  StateIndex initial{1, 0, 0};
  StateIndex final_state{2, 1, 1};
  double tau_end = 500.0;
  double sample_dt = 0.1;
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
};

using ExperimentSettings =
    std::variant<PoincareSettings, CriticalPointSettings, ChaosScanSettings,
                 QuantumEvolveSettings, QuantumObservablesSettings, TwoLevelSettings>;

// Canonical experiment names: classical-poincare, classical-critical,
// chaos-scan, quantum-evolve, quantum-observables, two-level-oracle.
std::string experiment_name(const ExperimentSettings& settings);

struct RunConfig {
  ModelParameters params;
  ExperimentSettings settings;
  std::filesystem::path output_dir;
};

struct OutputRecord {
  std::string file;   // path relative to output_dir
  std::string crc32;  // lowercase hex
};

struct RunManifest {
  std::string experiment;
  std::string code_version;
  double wall_clock_seconds = 0.0;
  std::vector<OutputRecord> outputs;
  std::vector<std::string> warnings;
};

struct PresetInfo {
  std::string name;
  std::string experiment;
  std::string description;
};

// Built-in experiment presets mirroring the standard runs.
std::vector<PresetInfo> list_presets();
RunConfig preset_config(const std::string& name);  // ConfigError for unknown names

// Strict JSON config: object with keys experiment, params, settings,
// output_dir; unknown keys are rejected at every level, missing settings
// keys take the defaults above.
RunConfig config_from_json(const std::string& text);
RunConfig config_from_json_file(const std::filesystem::path& file);
std::string config_to_json(const RunConfig& config);

// Executes the experiment, writes its CSV/SVG outputs and finally
// out/manifest.json. Configuration problems throw ConfigError before
// anything is written; runtime failures leave partial outputs and no
// manifest. Reruns with the same config produce byte-identical CSVs.
RunManifest run(const RunConfig& config);

std::string code_version();

}  // namespace rovib::experiments
