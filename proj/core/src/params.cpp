#include "rovib/params.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "rovib/errors.hpp"

namespace rovib {

ModelParameters geo_preset() {
  ModelParameters p;
  p.hbar_omega_e = 985.8;
  p.hbar_detuning = 15.0;
  p.hbar_xe_omega_e = 2.2;
  p.beta = 0.48;
  p.W = 0.0;
  p.d0 = 3.28;
  p.r0 = 1.62;
  p.mu = 13.1;
  p.k = 0;
  return p;
}

ModelParameters validate(const ModelParameters& params) {
  if (!(params.hbar_omega_e > 0.0)) throw ConfigError("invariant violated: hbar_omega_e > 0");
  if (!(params.beta > 0.0)) throw ConfigError("invariant violated: beta > 0");
  if (!(params.hbar_xe_omega_e > 0.0)) throw ConfigError("invariant violated: hbar_xe_omega_e > 0");
  if (!(params.W >= 0.0)) throw ConfigError("invariant violated: W >= 0");
  if (!(params.hbar_xe_omega_e < params.hbar_omega_e))
    throw ConfigError("invariant violated: hbar_xe_omega_e < hbar_omega_e");
  return params;
}

namespace {

using nlohmann::json;

constexpr const char* kDoubleKeys[] = {"hbar_omega_e", "hbar_detuning", "hbar_xe_omega_e",
                                       "beta",         "W",             "d0",
                                       "r0",           "mu"};

json params_to_json_value(const ModelParameters& p) {
  json j;
  j["hbar_omega_e"] = p.hbar_omega_e;
  j["hbar_detuning"] = p.hbar_detuning;
  j["hbar_xe_omega_e"] = p.hbar_xe_omega_e;
  j["beta"] = p.beta;
  j["W"] = p.W;
  j["d0"] = p.d0;
  j["r0"] = p.r0;
  j["mu"] = p.mu;
  j["k"] = p.k;
  return j;
}

ModelParameters params_from_json_value(const json& j) {
  if (!j.is_object()) throw ConfigError("params: expected a JSON object");
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    bool known = key == "k";
    for (const char* dk : kDoubleKeys) known = known || key == dk;
    if (!known) throw ConfigError("params: unknown key \"" + key + "\"");
  }
  ModelParameters p;
  auto need = [&](const char* key) -> const json& {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(std::string("params: missing key \"") + key + "\"");
    return *it;
  };
  auto need_number = [&](const char* key) {
    const json& v = need(key);
    if (!v.is_number()) throw ConfigError(std::string("params: \"") + key + "\" must be a number");
    return v.get<double>();
  };
  p.hbar_omega_e = need_number("hbar_omega_e");
  p.hbar_detuning = need_number("hbar_detuning");
  p.hbar_xe_omega_e = need_number("hbar_xe_omega_e");
  p.beta = need_number("beta");
  p.W = need_number("W");
  p.d0 = need_number("d0");
  p.r0 = need_number("r0");
  p.mu = need_number("mu");
  const json& kv = need("k");
  if (!kv.is_number_integer()) throw ConfigError("params: \"k\" must be an integer");
  p.k = kv.get<int>();
  return p;
}

}  // namespace

std::string params_to_json(const ModelParameters& params) {
  return params_to_json_value(params).dump(2);
}

ModelParameters params_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("params: JSON parse error: ") + err.what());
  }
  return params_from_json_value(j);
}

ModelParameters params_from_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("params: cannot open " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return params_from_json(buf.str());
}

void params_to_json_file(const ModelParameters& params, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw ConfigError("params: cannot write " + file.string());
  out << params_to_json(params) << "\n";
}

}  // namespace rovib
