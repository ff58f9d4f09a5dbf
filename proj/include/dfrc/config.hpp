// Experiment configuration: parsing, validation, derived quantities.
//
// Config files are plain text with [system], [mobility], [solver], [radar]
// and [lls] sections. Power values are given in dBm in the file and stored
// in linear watts after parsing.
#ifndef DFRC_CONFIG_HPP
#define DFRC_CONFIG_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfrc/common.hpp"
#include "dfrc/radar.hpp"

namespace dfrc {

enum class AccessMode { RSMA, SDMA, NOMA };

inline std::string to_string(AccessMode m) {
  switch (m) {
    case AccessMode::RSMA: return "RSMA";
    case AccessMode::SDMA: return "SDMA";
    case AccessMode::NOMA: return "NOMA";
  }
  return "?";
}

inline std::optional<AccessMode> parse_access_mode(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), ::toupper);
  if (s == "RSMA") return AccessMode::RSMA;
  if (s == "SDMA") return AccessMode::SDMA;
  if (s == "NOMA") return AccessMode::NOMA;
  return std::nullopt;
}

struct SystemConfig {
  int n_tx = 8;
  int n_users = 4;
  double spacing = 0.5;              // antenna spacing, wavelengths
  double total_power = 0.1;          // P_t, linear W (20 dBm)
  double noise_power_user = 1e-3;    // sigma_n^2, linear W (0 dBm)
  std::vector<double> qos_rate{};    // bps/Hz per user; scalar broadcast on validate
  std::vector<double> weights{};     // mu_k; defaults to all ones
  double lambda_reg = 1e-9;
  AccessMode access_mode = AccessMode::RSMA;
};

struct MobilityConfig {
  double sample_interval = 0.01;  // T, s
  double user_speed = 0.833;      // v, m/s (3 km/h)
  double carrier_freq = 2e9;      // f_c, Hz
  // Direct override of sigma_e^2; NaN means derive from Jakes.
  double csit_error_var = std::numeric_limits<double>::quiet_NaN();
};

struct SolverConfig {
  double admm_penalty = 1.0;   // rho
  double admm_tol = 1e-4;      // nu
  double ao_tol = 1e-4;        // epsilon
  int max_admm_iters = 300;
  int max_ao_iters = 200;
  int saa_samples = 100;       // M_saa
  std::uint64_t rng_seed = 1;
};

struct LlsConfig {
  int blocks = 50;          // Monte-Carlo blocks per point
  int block_symbols = 256;  // S
};

// Radar settings as parsed; expanded into RadarSpec during validation.
struct RadarConfig {
  double grid_min = -90.0;
  double grid_max = 90.0;
  double grid_step = 1.0;
  double target_angle = 0.0;
  double beam_halfwidth = 8.0;
  double target_range = 50.0;
  double target_speed = 3.0;
  double carrier_freq = 2e9;
  double rx_noise_power = 1e-18;  // linear W (-150 dBm)
  bool two_way_path = false;
};

struct RawConfig {
  SystemConfig system;
  MobilityConfig mobility;
  SolverConfig solver;
  RadarConfig radar;
  LlsConfig lls;
};

// Named CSIT-quality presets; values are direct sigma_e^2 overrides because
// the Jakes mapping alone does not pin them down (see README).
inline std::optional<double> mobility_profile_error_var(const std::string& name) {
  if (name == "low-mobility") return 0.417;
  if (name == "high-mobility") return 0.984;
  return std::nullopt;
}

// sigma_e^2 = 1 - J0(2 pi f_D T)^2, the stationarity-consistent mapping.
inline double jakes_error_var(double v, double f_c, double T) {
  const double fd = v * f_c / kSpeedOfLight;
  const double j0 = std::cyl_bessel_j(0.0, 2.0 * kPi * fd * T);
  return std::clamp(1.0 - j0 * j0, 0.0, 1.0 - 1e-12);
}

struct ValidationError : std::runtime_error {
  std::vector<std::string> entries;
  explicit ValidationError(std::vector<std::string> e)
      : std::runtime_error(join(e)), entries(std::move(e)) {}
  static std::string join(const std::vector<std::string>& e) {
    std::string s = "invalid configuration:";
    for (const auto& x : e) s += "\n  - " + x;
    return s;
  }
};

// Immutable after construction; safe to share across workers.
struct Scenario {
  SystemConfig system;
  MobilityConfig mobility;
  SolverConfig solver;
  RadarConfig radar_cfg;
  LlsConfig lls;
  RadarSpec radar;
  double csit_error_var = 0.0;  // resolved sigma_e^2
  double time_corr = 1.0;       // rho_time = J0(2 pi f_D T)

  int n_tx() const { return system.n_tx; }
  int n_users() const { return system.n_users; }
  double per_antenna_power() const { return system.total_power / system.n_tx; }
};

inline std::vector<std::string> validation_errors(const RawConfig& c) {
  std::vector<std::string> errs;
  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) errs.push_back(msg);
  };
  const auto& s = c.system;
  require(s.n_tx >= 1, "system.n_tx must be >= 1");
  require(s.n_users >= 1, "system.n_users must be >= 1");
  require(s.spacing > 0.0, "system.spacing must be positive");
  require(s.total_power > 0.0, "system.total_power must be positive");
  require(s.noise_power_user > 0.0, "system.noise_power_user must be positive");
  require(std::all_of(s.qos_rate.begin(), s.qos_rate.end(),
                      [](double r) { return r >= 0.0; }),
          "system.qos_rate entries must be >= 0");
  require(s.qos_rate.empty() || s.qos_rate.size() == 1 ||
              s.qos_rate.size() == static_cast<std::size_t>(s.n_users),
          "system.qos_rate must have 1 or n_users entries");
  require(std::all_of(s.weights.begin(), s.weights.end(),
                      [](double w) { return w > 0.0; }),
          "system.weights entries must be > 0");
  require(s.weights.empty() || s.weights.size() == 1 ||
              s.weights.size() == static_cast<std::size_t>(s.n_users),
          "system.weights must have 1 or n_users entries");
  require(s.lambda_reg >= 0.0, "system.lambda_reg must be >= 0");

  const auto& m = c.mobility;
  require(m.sample_interval > 0.0, "mobility.sample_interval must be positive");
  require(m.user_speed >= 0.0, "mobility.user_speed must be >= 0");
  require(m.carrier_freq > 0.0, "mobility.carrier_freq must be positive");
  if (!std::isnan(m.csit_error_var))
    require(m.csit_error_var >= 0.0 && m.csit_error_var < 1.0,
            "mobility.csit_error_var must be in [0, 1)");

  const auto& v = c.solver;
  require(v.admm_penalty > 0.0, "solver.admm_penalty must be positive");
  require(v.admm_tol > 0.0, "solver.admm_tol must be positive");
  require(v.ao_tol > 0.0, "solver.ao_tol must be positive");
  require(v.max_admm_iters >= 1, "solver.max_admm_iters must be >= 1");
  require(v.max_ao_iters >= 1, "solver.max_ao_iters must be >= 1");
  require(v.saa_samples >= 1, "solver.saa_samples must be >= 1");

  const auto& r = c.radar;
  require(r.grid_min >= -90.0 && r.grid_max <= 90.0 && r.grid_min < r.grid_max,
          "radar grid must be strictly increasing within [-90, 90]");
  require(r.grid_step > 0.0, "radar.grid_step must be positive");
  require(r.target_angle >= r.grid_min && r.target_angle <= r.grid_max,
          "radar.target_angle must lie within the grid");
  require(r.beam_halfwidth > 0.0, "radar.beam_halfwidth must be positive");
  require(r.target_range > 0.0, "radar.target_range must be positive");
  require(r.carrier_freq > 0.0, "radar.carrier_freq must be positive");
  require(r.rx_noise_power > 0.0, "radar.rx_noise_power must be positive");

  require(c.lls.blocks >= 1, "lls.blocks must be >= 1");
  require(c.lls.block_symbols >= 2 && (c.lls.block_symbols & (c.lls.block_symbols - 1)) == 0,
          "lls.block_symbols must be a power of two");
  return errs;
}

inline Scenario validate(const RawConfig& raw) {
  auto errs = validation_errors(raw);
  if (!errs.empty()) throw ValidationError(std::move(errs));

  Scenario sc;
  sc.system = raw.system;
  sc.mobility = raw.mobility;
  sc.solver = raw.solver;
  sc.radar_cfg = raw.radar;
  sc.lls = raw.lls;

  auto broadcast = [&](std::vector<double> v, double fill) {
    if (v.empty()) v.assign(1, fill);
    if (v.size() == 1) v.assign(static_cast<std::size_t>(sc.system.n_users), v[0]);
    return v;
  };
  sc.system.qos_rate = broadcast(raw.system.qos_rate, 0.1);
  sc.system.weights = broadcast(raw.system.weights, 1.0);

  const auto& m = sc.mobility;
  const double fd = m.user_speed * m.carrier_freq / kSpeedOfLight;
  sc.time_corr = std::cyl_bessel_j(0.0, 2.0 * kPi * fd * m.sample_interval);
  sc.csit_error_var = std::isnan(m.csit_error_var)
                          ? jakes_error_var(m.user_speed, m.carrier_freq, m.sample_interval)
                          : m.csit_error_var;

  const auto& r = raw.radar;
  const int n_pts = static_cast<int>(std::floor((r.grid_max - r.grid_min) / r.grid_step + 1e-9)) + 1;
  sc.radar.angle_grid_deg.resize(n_pts);
  for (int i = 0; i < n_pts; ++i) sc.radar.angle_grid_deg(i) = r.grid_min + i * r.grid_step;
  // Snap the target direction onto the nearest grid point.
  Eigen::Index nearest = 0;
  (sc.radar.angle_grid_deg.array() - r.target_angle).abs().minCoeff(&nearest);
  sc.radar.target_angle = sc.radar.angle_grid_deg(nearest);
  sc.radar.desired_pattern =
      desired_pattern_rect(sc.radar.angle_grid_deg, sc.radar.target_angle, r.beam_halfwidth);
  sc.radar.target_range = r.target_range;
  sc.radar.target_speed = r.target_speed;
  sc.radar.carrier_freq = r.carrier_freq;
  sc.radar.rx_noise_power = r.rx_noise_power;
  sc.radar.beam_halfwidth = r.beam_halfwidth;
  sc.radar.two_way_path = r.two_way_path;
  return sc;
}

// --- plain-text config parsing -------------------------------------------

using IniData = std::map<std::string, std::map<std::string, std::string>>;

inline IniData parse_ini(std::istream& in) {
  IniData data;
  std::string line, section;
  while (std::getline(in, line)) {
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config parse error: expected key=value, got '" + line + "'");
    data[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return data;
}

inline IniData parse_ini_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  return parse_ini(f);
}

namespace detail {
inline double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::runtime_error("config value for '" + key + "' is not a number: " + v);
  }
}

inline std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(to_double(key, tok));
  return out;
}
}  // namespace detail

// Applies parsed key/value pairs onto a RawConfig. Unknown keys are errors so
// typos do not silently fall back to defaults.
inline void apply_ini(const IniData& ini, RawConfig& cfg) {
  for (const auto& [section, kvs] : ini) {
    for (const auto& [key, val] : kvs) {
      const std::string id = section + "." + key;
      auto num = [&] { return detail::to_double(id, val); };
      bool known = true;
      if (section == "system") {
        if (key == "n_tx") cfg.system.n_tx = static_cast<int>(num());
        else if (key == "n_users") cfg.system.n_users = static_cast<int>(num());
        else if (key == "spacing") cfg.system.spacing = num();
        else if (key == "total_power") cfg.system.total_power = dbm_to_watts(num());
        else if (key == "noise_power_user") cfg.system.noise_power_user = dbm_to_watts(num());
        else if (key == "qos_rate") cfg.system.qos_rate = detail::to_list(id, val);
        else if (key == "weights") cfg.system.weights = detail::to_list(id, val);
        else if (key == "lambda_reg") cfg.system.lambda_reg = num();
        else if (key == "access_mode") {
          auto m = parse_access_mode(val);
          if (!m) throw std::runtime_error("unknown access_mode: " + val);
          cfg.system.access_mode = *m;
        } else known = false;
      } else if (section == "mobility") {
        if (key == "sample_interval") cfg.mobility.sample_interval = num();
        else if (key == "user_speed") cfg.mobility.user_speed = num();
        else if (key == "carrier_freq") cfg.mobility.carrier_freq = num();
        else if (key == "csit_error_var") cfg.mobility.csit_error_var = num();
        else if (key == "profile") {
          auto var = mobility_profile_error_var(val);
          if (!var) throw std::runtime_error("unknown mobility profile: " + val);
          cfg.mobility.csit_error_var = *var;
        } else known = false;
      } else if (section == "solver") {
        if (key == "admm_penalty") cfg.solver.admm_penalty = num();
        else if (key == "admm_tol") cfg.solver.admm_tol = num();
        else if (key == "ao_tol") cfg.solver.ao_tol = num();
        else if (key == "max_admm_iters") cfg.solver.max_admm_iters = static_cast<int>(num());
        else if (key == "max_ao_iters") cfg.solver.max_ao_iters = static_cast<int>(num());
        else if (key == "saa_samples") cfg.solver.saa_samples = static_cast<int>(num());
        else if (key == "rng_seed") cfg.solver.rng_seed = static_cast<std::uint64_t>(num());
        else known = false;
      } else if (section == "radar") {
        if (key == "grid_min") cfg.radar.grid_min = num();
        else if (key == "grid_max") cfg.radar.grid_max = num();
        else if (key == "grid_step") cfg.radar.grid_step = num();
        else if (key == "target_angle") cfg.radar.target_angle = num();
        else if (key == "beam_halfwidth") cfg.radar.beam_halfwidth = num();
        else if (key == "target_range") cfg.radar.target_range = num();
        else if (key == "target_speed") cfg.radar.target_speed = num();
        else if (key == "carrier_freq") cfg.radar.carrier_freq = num();
        else if (key == "rx_noise_power") cfg.radar.rx_noise_power = dbm_to_watts(num());
        else if (key == "two_way_path") cfg.radar.two_way_path = num() != 0.0;
        else known = false;
      } else if (section == "lls") {
        if (key == "blocks") cfg.lls.blocks = static_cast<int>(num());
        else if (key == "block_symbols") cfg.lls.block_symbols = static_cast<int>(num());
        else known = false;
      } else {
        throw std::runtime_error("unknown config section: [" + section + "]");
      }
      if (!known) throw std::runtime_error("unknown config key: " + id);
    }
  }
}

inline Scenario load_scenario(const std::string& path) {
  RawConfig cfg;
  apply_ini(parse_ini_file(path), cfg);
  return validate(cfg);
}

}  // namespace dfrc

#endif  // DFRC_CONFIG_HPP
