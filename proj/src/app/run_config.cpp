#include "spintorsion/app/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace spintorsion::app {

#define SPINTORSION_CONFIG_FIELDS(X)                                                         \
  X(scenario) X(output_dir) X(tier) X(D_hz) X(g_factor) X(phi_rad) X(field_T)                \
  X(theta_min_rad) X(theta_max_rad) X(theta_points) X(field_min_T) X(field_max_T)            \
  X(field_points) X(map_theta_points) X(long_semi_axis_m) X(short_semi_axis_m)               \
  X(density_kg_m3) X(omega_theta_hz) X(lmg_N_list) X(lmg_ratio_min) X(lmg_ratio_max)         \
  X(lmg_ratio_points) X(omega_relaxed_hz) X(gN_hz) X(theta0_rad) X(cat_ratio_fast)           \
  X(cat_n_cut_fast) X(cat_n_cut_full) X(cat_trace_points) X(fringe_times_s) X(fringe_m_max)  \
  X(fringe_grid) X(fringe_spacing_time_s) X(fringe_window_min_deg) X(fringe_window_max_deg)  \
  X(fringe_smoothing_deg)

namespace {

template <typename T>
T parse_scalar(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (!in || !(in >> std::ws).eof())
    throw ConfigError("cannot parse value '" + text + "' for " + key);
  return value;
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  if constexpr (std::is_same_v<T, std::string>) {
    return text;
  } else if constexpr (std::is_same_v<T, std::vector<int>> ||
                       std::is_same_v<T, std::vector<double>>) {
    T out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
      out.push_back(parse_scalar<typename T::value_type>(key, item));
    return out;
  } else {
    return parse_scalar<T>(key, text);
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid config: " + what);
}

}  // namespace

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json::object();
#define X(name) j[#name] = c.name;
  SPINTORSION_CONFIG_FIELDS(X)
#undef X
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  const auto keys = config_keys();
  for (const auto& item : j.items())
    if (std::find(keys.begin(), keys.end(), item.key()) == keys.end())
      throw ConfigError("unknown config key '" + item.key() + "'");
  try {
#define X(name) \
  if (j.contains(#name)) j.at(#name).get_to(c.name);
    SPINTORSION_CONFIG_FIELDS(X)
#undef X
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config value has the wrong type: ") + e.what());
  }
}

std::vector<std::string> config_keys() {
  return {
#define X(name) #name,
      SPINTORSION_CONFIG_FIELDS(X)
#undef X
  };
}

RunConfig resolve_config(const std::string& config_path,
                         const std::map<std::string, std::string>& overrides) {
  RunConfig c;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file " + config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
    }
    from_json(j, c);
  }
  for (const auto& [key, text] : overrides) {
    bool known = false;
#define X(name)                                                   \
  if (key == #name) {                                             \
    c.name = parse_value<decltype(RunConfig::name)>(key, text);   \
    known = true;                                                 \
  }
    SPINTORSION_CONFIG_FIELDS(X)
#undef X
    if (!known) throw ConfigError("unknown option '" + key + "'");
  }
  c.validate();
  return c;
}

void RunConfig::validate() const {
  require(tier == "fast" || tier == "full", "tier must be fast or full");
  require(!output_dir.empty(), "output_dir is empty");
  require(D_hz > 0.0 && g_factor > 0.0, "D_hz and g_factor must be positive");
  require(field_T >= 0.0 && field_min_T >= 0.0 && field_max_T >= field_min_T, "field values");
  require(theta_points >= 1 && field_points >= 1 && map_theta_points >= 1, "grid sizes");
  require(theta_min_rad >= 0.0 && theta_max_rad <= constants::pi && theta_min_rad <= theta_max_rad,
          "theta range must lie in [0, pi]");
  require(long_semi_axis_m >= short_semi_axis_m && short_semi_axis_m > 0.0 && density_kg_m3 > 0.0,
          "geometry");
  require(omega_theta_hz > 0.0 && omega_relaxed_hz > 0.0, "trap frequencies must be positive");
  require(!lmg_N_list.empty() &&
              std::all_of(lmg_N_list.begin(), lmg_N_list.end(), [](int n) { return n >= 1; }),
          "lmg_N_list entries must be >= 1");
  require(lmg_ratio_points >= 1 && lmg_ratio_min >= 0.0 && lmg_ratio_max >= lmg_ratio_min,
          "lmg ratio grid");
  require(cat_ratio_fast > 0.0 && cat_n_cut_fast >= 2 && cat_n_cut_full >= 2 &&
              cat_trace_points >= 2,
          "cat settings");
  require(!fringe_times_s.empty() &&
              std::all_of(fringe_times_s.begin(), fringe_times_s.end(),
                          [](double t) { return t >= 0.0; }),
          "fringe times must be >= 0");
  require(fringe_m_max >= 1 && fringe_grid >= 0 && fringe_spacing_time_s >= 0.0, "fringe grid");
  require(fringe_window_min_deg < fringe_window_max_deg, "fringe window");
  require(fringe_smoothing_deg >= 0.0, "fringe smoothing");
  require(std::isfinite(gN_hz) && std::isfinite(theta0_rad) && std::isfinite(phi_rad),
          "non-finite values");
}

}  // namespace spintorsion::app
