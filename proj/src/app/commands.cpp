#include "spintorsion/app/commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>

#include <Eigen/Core>
#include <fmt/format.h>

#include "spintorsion/lmg_model.hpp"
#include "spintorsion/nv_model.hpp"
#include "spintorsion/rotor.hpp"
#include "spintorsion/spin_boson.hpp"
#include "spintorsion/validation.hpp"

namespace spintorsion::app {

namespace fs = std::filesystem;
using nlohmann::json;
using constants::angular;
using constants::hertz;

namespace {

constexpr const char* kVersion = "1.0.0";

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      out_ << (first ? "" : ",") << format_number(v);
      first = false;
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

CommandResult begin(const RunConfig& cfg, const std::string& command) {
  CommandResult r;
  r.directory = fs::path(cfg.output_dir) / command;
  fs::create_directories(r.directory);
  json config = cfg;
  config["command"] = command;
  write_json(r.directory / "config.json", config);
  write_json(r.directory / "versions.json",
             json{{"spintorsion", kVersion},
                  {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION,
                                        EIGEN_MINOR_VERSION)},
                  {"fmt", FMT_VERSION},
                  {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR,
                                                NLOHMANN_JSON_VERSION_MINOR,
                                                NLOHMANN_JSON_VERSION_PATCH)},
                  {"validation_suite", validation::suite_names()}});
  r.files = {"config.json", "versions.json"};
  return r;
}

nv::NVSystem nv_system(const RunConfig& cfg) {
  nv::NVSystem sys;
  sys.zero_field_splitting = angular(cfg.D_hz);
  sys.g_factor = cfg.g_factor;
  sys.field = cfg.field_T;
  sys.phi = cfg.phi_rad;
  return sys;
}

double moment(const RunConfig& cfg) {
  return nv::moment_of_inertia(
             nv::SpheroidGeometry{cfg.long_semi_axis_m, cfg.short_semi_axis_m, cfg.density_kg_m3})
      .moment;
}

// E_-1 - E_0 at theta0, the spin splitting entering the cat-state phases.
double spin_gap_at_theta0(const RunConfig& cfg) {
  nv::NVSystem sys = nv_system(cfg);
  sys.theta = cfg.theta0_rad;
  return nv::nv_levels(sys).gap();
}

json cat_point(const spin_boson::CatConfig& cat, double t) {
  const auto v = spin_boson::validate_cat_against_ode(cat, t);
  return json{{"t_s", t},
              {"fidelity", v.fidelity},
              {"infidelity", 1.0 - v.fidelity},
              {"phase_residual_rad", v.phase_residual},
              {"top_fock_population", v.top_population},
              {"norm_drift", v.norm_drift},
              {"beta_abs", std::abs(spin_boson::cat_displacement(cat, t))}};
}

}  // namespace

std::string format_number(double value) { return fmt::format("{:.12g}", value); }

CommandResult cmd_levels(const RunConfig& cfg) {
  CommandResult r = begin(cfg, "levels");
  const nv::NVSystem sys = nv_system(cfg);
  const nv::SweepRange range{cfg.theta_min_rad, cfg.theta_max_rad, cfg.theta_points};
  range.validate("theta");
  std::vector<double> thetas;
  for (int i = 0; i < range.points; ++i) thetas.push_back(range.at(i));
  const auto levels = nv::nv_level_sweep(sys, thetas);

  const double d = sys.zero_field_splitting;
  const double delta = sys.zeeman();
  double worst = 0.0;
  Csv csv(r.directory / "levels.csv",
          {"theta_rad", "E_plus1", "E_0", "E_minus1", "E_gap", "vieta_residual"});
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const auto& l = levels[i];
    const double s = std::sin(thetas[i]);
    const double e1 = l.e_plus1, e2 = l.e_0, e3 = l.e_minus1;
    const double residual = std::max(
        {std::abs(e1 + e2 + e3 - 2.0 * d) / d,
         std::abs(e1 * e2 + e1 * e3 + e2 * e3 - (d * d - delta * delta)) / (d * d),
         std::abs(e1 * e2 * e3 + d * delta * delta * s * s) / (d * d * d)});
    worst = std::max(worst, residual);
    csv.row({thetas[i], hertz(e1), hertz(e2), hertz(e3), hertz(l.gap()), residual});
  }
  r.files.push_back("levels.csv");
  r.summary = fmt::format("levels: {} angles at B = {} T, max Vieta residual {:.3g}",
                          thetas.size(), cfg.field_T, worst);
  return r;
}

CommandResult cmd_coupling_map(const RunConfig& cfg) {
  CommandResult r = begin(cfg, "coupling-map");
  const nv::TorsionalMode mode{angular(cfg.omega_theta_hz), moment(cfg)};
  const auto map = nv::coupling_map(nv_system(cfg), mode,
                                    {cfg.field_min_T, cfg.field_max_T, cfg.field_points},
                                    {0.0, constants::pi, cfg.map_theta_points});
  {
    Csv csv(r.directory / "coupling_map.csv", {"field_T", "theta_rad", "gN_hz"});
    for (std::size_t i = 0; i < map.fields.size(); ++i)
      for (std::size_t j = 0; j < map.thetas.size(); ++j)
        csv.row({map.fields[i], map.thetas[j], hertz(map.at(i, j))});
  }
  {
    Csv csv(r.directory / "coupling_argmax.csv", {"field_T", "theta_rad", "gN_hz"});
    for (const auto& a : map.argmax) csv.row({a.field, a.theta, hertz(a.coupling)});
  }
  r.files.push_back("coupling_map.csv");
  r.files.push_back("coupling_argmax.csv");
  r.summary = fmt::format("coupling-map: {} x {} grid, peak g_N/2pi = {:.6g} Hz at B = {} T",
                          map.fields.size(), map.thetas.size(),
                          hertz(map.argmax.back().coupling), map.argmax.back().field);
  return r;
}

CommandResult cmd_lmg_phase(const RunConfig& cfg) {
  CommandResult r = begin(cfg, "lmg-phase");
  const nv::SweepRange ratios{cfg.lmg_ratio_min, cfg.lmg_ratio_max, cfg.lmg_ratio_points};
  ratios.validate("h/lambda");
  json jumps = json::object();
  {
    Csv csv(r.directory / "lmg_phase.csv",
            {"N", "h_over_lambda", "m_z_exact", "m_xy_exact", "m_z_analytic", "m_xy_analytic",
             "m_z_thermo", "m_xy_thermo"});
    for (int n : cfg.lmg_N_list) {
      for (int k = 0; k < ratios.points; ++k) {
        const double ratio = ratios.at(k);
        const lmg::LMGParams p{-1.0, -ratio, n, lmg::Convention::collective_spin};
        const auto exact = lmg::order_params_exact(p);
        const auto analytic = lmg::order_params_analytic(p);
        const auto thermo = lmg::thermodynamic_limit(ratio);
        csv.row({static_cast<double>(n), ratio, exact.m_z, exact.m_xy, analytic.m_z,
                 analytic.m_xy, thermo.m_z, thermo.m_xy});
      }
      jumps[std::to_string(n)] = lmg::jump_positions(n);
    }
  }
  lmg::DriveParams drive;
  drive.g = scenario::lmg_g_mhz;
  drive.omega_torsion = scenario::lmg_torsion_mhz;
  drive.omega_frame = scenario::lmg_frame_mhz;
  const auto mapped = lmg::lmg_from_physical(drive);
  const auto collective = mapped.params.in_collective_spin();
  write_json(r.directory / "lmg_summary.json",
             json{{"jump_positions", jumps},
                  {"parameter_map",
                   {{"inputs_2pi_MHz", {{"g", drive.g},
                                        {"omega_theta", drive.omega_torsion},
                                        {"Omega0", drive.omega_frame}}},
                    {"lambda_pauli_sum", mapped.params.lambda},
                    {"h_pauli_sum", mapped.params.h},
                    {"lambda_collective_spin", collective.lambda},
                    {"h_collective_spin", collective.h},
                    {"validity_ratio", mapped.validity_ratio},
                    {"warnings", mapped.warnings}}}});
  r.files.push_back("lmg_phase.csv");
  r.files.push_back("lmg_summary.json");
  r.summary = fmt::format("lmg-phase: N in {} over {} values of h/lambda; lambda = {:.6g}",
                          json(cfg.lmg_N_list).dump(), ratios.points, mapped.params.lambda);
  return r;
}

CommandResult cmd_cat(const RunConfig& cfg) {
  CommandResult r = begin(cfg, "cat");
  const bool full = cfg.tier == "full";
  spin_boson::CatConfig cat;
  cat.omega = angular(cfg.omega_relaxed_hz);
  cat.coupling = full ? angular(cfg.gN_hz) : cfg.cat_ratio_fast * cat.omega;
  cat.n_cut = full ? cfg.cat_n_cut_full : cfg.cat_n_cut_fast;
  cat.spin_gap = spin_gap_at_theta0(cfg);
  const double w = cat.omega;

  json points = json::array();
  for (double t : {0.0, constants::pi / (2.0 * w), constants::pi / w, constants::two_pi / w})
    points.push_back(cat_point(cat, t));

  // Branch overlap <-beta|beta> = exp(-2|beta|^2) against the embedded vectors.
  const auto analytic = spin_boson::analytic_cat_state(cat, constants::pi / w);
  const auto embedded = spin_boson::embed(analytic, cat);
  const auto upper = embedded.amplitudes.head(cat.n_cut);
  const auto lower = embedded.amplitudes.tail(cat.n_cut);
  const double vector_overlap =
      std::abs(lower.dot(upper)) / (upper.norm() * lower.norm());
  const double beta_pi = std::abs(analytic.beta);

  {
    Csv csv(r.directory / "cat_beta_trace.csv", {"t_s", "beta_re", "beta_im", "beta_abs"});
    for (int k = 0; k < cfg.cat_trace_points; ++k) {
      const double t = constants::two_pi / w * k / (cfg.cat_trace_points - 1);
      const auto beta = spin_boson::cat_displacement(cat, t);
      csv.row({t, beta.real(), beta.imag(), std::abs(beta)});
    }
  }

  double worst_infidelity = 0.0, worst_phase = 0.0;
  for (const auto& p : points) {
    worst_infidelity = std::max(worst_infidelity, p["infidelity"].get<double>());
    worst_phase = std::max(worst_phase, std::abs(p["phase_residual_rad"].get<double>()));
  }
  write_json(r.directory / "cat_report.json",
             json{{"tier", cfg.tier},
                  {"coupling_over_omega", cat.coupling / w},
                  {"n_cut", cat.n_cut},
                  {"coupling_hz", hertz(cat.coupling)},
                  {"omega_relaxed_hz", hertz(w)},
                  {"spin_gap_hz", hertz(cat.spin_gap)},
                  {"beta_abs_at_pi_over_omega", beta_pi},
                  {"branch_overlap_closed_form", std::exp(-2.0 * beta_pi * beta_pi)},
                  {"branch_overlap_vectors", vector_overlap},
                  {"max_infidelity", worst_infidelity},
                  {"max_phase_residual_rad", worst_phase},
                  {"points", points}});
  r.files.push_back("cat_report.json");
  r.files.push_back("cat_beta_trace.csv");
  r.summary = fmt::format("cat ({} tier): |beta| = {:.6g}, max infidelity {:.3g}, max phase {:.3g} rad",
                          cfg.tier, beta_pi, worst_infidelity, worst_phase);
  return r;
}

CommandResult cmd_fringes(const RunConfig& cfg) {
  CommandResult r = begin(cfg, "fringes");
  const double inertia = moment(cfg);
  const nv::TorsionalMode relaxed{angular(cfg.omega_relaxed_hz), inertia};
  const auto peaks = rotor::gaussian_peak_params(relaxed, angular(cfg.gN_hz), cfg.theta0_rad);
  const auto initial = rotor::fourier_coeffs(peaks, cfg.fringe_m_max);

  json per_time = json::array();
  for (double t : cfg.fringe_times_s) {
    const auto profile = rotor::fringe_profile(rotor::evolve_free(initial, t), cfg.fringe_grid);
    const std::string name = fmt::format("fringes_t{:.6f}s.csv", t);
    Csv csv(r.directory / name, {"theta_rad", "theta_deg", "P"});
    for (std::size_t k = 0; k < profile.theta.size(); ++k)
      csv.row({profile.theta[k], constants::degrees(profile.theta[k]), profile.density[k]});
    r.files.push_back(name);
    per_time.push_back(json{{"t_s", t},
                            {"file", name},
                            {"grid_size", profile.theta.size()},
                            {"normalization", profile.integral()},
                            {"mirror_asymmetry", rotor::mirror_asymmetry(profile, cfg.theta0_rad)}});
  }

  const auto start = rotor::fringe_profile(initial, cfg.fringe_grid);
  const auto [left, right] = rotor::peak_centers_deg(start, cfg.theta0_rad);

  json spacing;
  const auto late = rotor::fringe_profile(rotor::evolve_free(initial, cfg.fringe_spacing_time_s),
                                          cfg.fringe_grid);
  rotor::FringeSpacingOptions opts;
  opts.window_min_deg = cfg.fringe_window_min_deg;
  opts.window_max_deg = cfg.fringe_window_max_deg;
  opts.smoothing_deg = cfg.fringe_smoothing_deg;
  const double far_field = constants::degrees(constants::two_pi * constants::hbar *
                                              cfg.fringe_spacing_time_s /
                                              (inertia * 2.0 * peaks.half_separation));
  spacing = json{{"t_s", cfg.fringe_spacing_time_s},
                 {"window_deg", {opts.window_min_deg, opts.window_max_deg}},
                 {"smoothing_deg", opts.smoothing_deg},
                 {"far_field_estimate_deg", far_field}};
  try {
    const auto s = rotor::fringe_spacing(late, opts);
    spacing["spacing_deg"] = s.spacing_deg;
    spacing["peaks_deg"] = s.peaks_deg;
  } catch (const std::domain_error& e) {
    spacing["error"] = e.what();
  }

  write_json(r.directory / "fringe_metrics.json",
             json{{"q", peaks.q},
                  {"inertia_kg_m2", inertia},
                  {"half_separation_deg", constants::degrees(peaks.half_separation)},
                  {"width_deg", constants::degrees(peaks.width())},
                  {"truncation_bound", rotor::truncation_bound(peaks.q)},
                  {"m_max", cfg.fringe_m_max},
                  {"coefficient_norm", initial.norm_squared()},
                  {"peak_centers_deg_closed_form",
                   {constants::degrees(peaks.center_minus()), constants::degrees(peaks.center_plus())}},
                  {"peak_centers_deg_profile", {left, right}},
                  {"profiles", per_time},
                  {"fringe_spacing", spacing}});
  r.files.push_back("fringe_metrics.json");
  r.summary = fmt::format("fringes: {} profiles, centers {:.4f} / {:.4f} deg, spacing {}",
                          per_time.size(), left, right,
                          spacing.contains("spacing_deg")
                              ? fmt::format("{:.3f} deg", spacing["spacing_deg"].get<double>())
                              : std::string("unavailable"));
  return r;
}

CommandResult cmd_validate(const RunConfig& cfg) {
  CommandResult r = begin(cfg, "validate");
  validation::SuiteOptions options;
  options.zero_field_splitting = angular(cfg.D_hz);
  const auto report = validation::run_suite(options);
  json checks = json::array();
  int failed = 0;
  for (const auto& c : report.checks) {
    checks.push_back(json{{"name", c.name},
                          {"passed", c.passed},
                          {"value", c.value},
                          {"threshold", c.threshold},
                          {"detail", c.detail}});
    if (!c.passed) ++failed;
  }
  write_json(r.directory / "validate_report.json",
             json{{"all_passed", report.all_passed()}, {"checks", checks}});
  r.files.push_back("validate_report.json");
  r.exit_code = report.all_passed() ? 0 : 1;
  r.summary = fmt::format("validate: {}/{} checks passed", report.checks.size() - failed,
                          report.checks.size());
  return r;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"levels", "coupling-map", "lmg-phase",
                                              "cat",    "fringes",      "validate"};
  return names;
}

CommandResult run_command(const std::string& name, const RunConfig& cfg) {
  static const std::map<std::string, std::function<CommandResult(const RunConfig&)>> table{
      {"levels", cmd_levels}, {"coupling-map", cmd_coupling_map}, {"lmg-phase", cmd_lmg_phase},
      {"cat", cmd_cat},       {"fringes", cmd_fringes},           {"validate", cmd_validate}};
  const auto it = table.find(name);
  if (it == table.end()) throw std::invalid_argument("unknown command " + name);
  return it->second(cfg);
}

}  // namespace spintorsion::app
