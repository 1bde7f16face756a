#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spintorsion/constants.hpp"
#include "spintorsion/scenario.hpp"

namespace spintorsion::app {

/// Every tunable of every command. Frequencies in Hz (2 pi x Hz convention),
/// everything else SI. Key names are shared by the JSON file and the flags.
struct RunConfig {
  std::string scenario = "default";
  std::string output_dir = "out";
  std::string tier = "fast";  // fast | full

  // NV center
  double D_hz = scenario::zero_field_splitting_hz;
  double g_factor = 2.0;
  double phi_rad = 0.0;
  double field_T = scenario::field_tesla;

  // levels
  double theta_min_rad = 0.0;
  double theta_max_rad = constants::pi;
  int theta_points = 181;

  // coupling map
  double field_min_T = 0.0;
  double field_max_T = 0.08;
  int field_points = 17;
  int map_theta_points = 91;
  double long_semi_axis_m = scenario::long_semi_axis_m;
  double short_semi_axis_m = scenario::short_semi_axis_m;
  double density_kg_m3 = scenario::density_kg_m3;
  double omega_theta_hz = scenario::torsion_hz;

  // LMG phase diagram
  std::vector<int> lmg_N_list{18};
  double lmg_ratio_min = 0.0;
  double lmg_ratio_max = 1.2;
  int lmg_ratio_points = 241;

  // cat state and fringes
  double omega_relaxed_hz = scenario::relaxed_torsion_hz;
  double gN_hz = scenario::cat_coupling_hz;
  double theta0_rad = scenario::theta0;
  double cat_ratio_fast = 2.0;
  int cat_n_cut_fast = 64;
  int cat_n_cut_full = 120;
  int cat_trace_points = 41;

  std::vector<double> fringe_times_s{0.0, 0.0005, 0.001, 0.0025, 0.003};
  int fringe_m_max = 3000;
  int fringe_grid = 0;  // 0 -> automatic
  double fringe_spacing_time_s = 0.003;
  double fringe_window_min_deg = 60.0;
  double fringe_window_max_deg = 190.0;
  double fringe_smoothing_deg = 1.0;

  void validate() const;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Defaults, overlaid by the optional JSON file, overlaid by flag values
/// (key -> raw string). Unknown keys in either layer throw ConfigError.
RunConfig resolve_config(const std::string& config_path,
                         const std::map<std::string, std::string>& overrides);

/// Key names in declaration order.
std::vector<std::string> config_keys();

}  // namespace spintorsion::app
