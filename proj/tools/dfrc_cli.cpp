// Command-line front end for the DFRC precoder toolkit.
//
// Subcommands:
//   tradeoff         lambda sweep -> EWSR/RMSE/RMI/CRB trade-off CSV
//   lls              link-level weighted-throughput sweep CSV
//   beampattern      transmit beampattern P_t(theta) dump for one point
//   validate-config  parse and validate an INI scenario, print a summary
//
// Exit codes: 0 success, 2 configuration error, 3 solver failure.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dfrc/harness.hpp"

namespace {

std::string iso_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::vector<dfrc::AccessMode> parse_modes(const std::vector<std::string>& raw) {
  std::vector<dfrc::AccessMode> modes;
  for (const std::string& s : raw) {
    const auto m = dfrc::parse_access_mode(s);
    if (!m) throw dfrc::ValidationError({"unknown access mode: " + s});
    modes.push_back(*m);
  }
  return modes;
}

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 1;
  bool seed_set = false;
  int realizations = 20;
  bool full_scale = false;
  std::vector<std::string> modes{"rsma"};
  std::vector<std::string> profiles{"low-mobility"};
  std::vector<double> lambdas = dfrc::default_lambda_grid();
  std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_sweep) {
  cmd->add_option("--config", o.config_path, "scenario INI file")->required();
  cmd->add_option("--seed", o.seed, "master RNG seed (default: from config)");
  if (needs_sweep) {
    cmd->add_option("--realizations", o.realizations,
                    "channel realizations per point (default 20)");
    cmd->add_flag("--full-scale", o.full_scale,
                  "use 200 realizations per point");
    cmd->add_option("--modes", o.modes,
                    "access modes to sweep (rsma, sdma, noma)");
    cmd->add_option("--profiles", o.profiles,
                    "mobility profiles (low-mobility, high-mobility)");
    cmd->add_option("--lambdas", o.lambdas, "radar weight sweep values");
    cmd->add_option("--out-dir", o.out_dir, "output directory");
  }
}

dfrc::Scenario load(const CommonOpts& o) {
  dfrc::Scenario sc = [&] {
    try {
      return dfrc::load_scenario(o.config_path);
    } catch (const dfrc::ValidationError&) {
      throw;
    } catch (const std::exception& e) {
      throw dfrc::ValidationError({e.what()});
    }
  }();
  if (o.seed_set) sc.solver.rng_seed = o.seed;
  return sc;
}

dfrc::RunManifest make_manifest(const CommonOpts& o, const dfrc::Scenario& sc,
                                int n_real) {
  dfrc::RunManifest m;
  m.config_path = o.config_path;
  m.master_seed = sc.solver.rng_seed;
  m.realizations = n_real;
  m.lambdas = o.lambdas;
  m.modes = o.modes;
  m.profiles = o.profiles;
  m.timestamp = iso_timestamp();
  return m;
}

void write_plots(const std::string& dir, const std::string& stem,
                 const std::vector<dfrc::TradeoffPoint>& pts) {
  // One two-column RMSE-vs-EWSR curve per (mode, profile).
  for (std::size_t i = 0; i < pts.size();) {
    std::vector<double> x, y;
    const auto& head = pts[i];
    for (; i < pts.size() && pts[i].mode == head.mode &&
           pts[i].profile == head.profile;
         ++i) {
      x.push_back(pts[i].rmse);
      y.push_back(pts[i].ewsr);
    }
    dfrc::write_file(dir + "/" + stem + "_" + dfrc::to_string(head.mode) +
                         "_" + head.profile + ".dat",
                     dfrc::plot_xy(x, y));
  }
}

int run(int argc, char** argv) {
  CLI::App app{"DFRC precoder optimization toolkit"};
  app.require_subcommand(1);

  CommonOpts opt;
  auto* tradeoff = app.add_subcommand(
      "tradeoff", "EWSR vs beampattern-RMSE sweep over lambda");
  auto* lls = app.add_subcommand(
      "lls", "link-level weighted-throughput sweep over lambda");
  auto* beam = app.add_subcommand(
      "beampattern", "dump the transmit beampattern for one optimized point");
  auto* valid = app.add_subcommand("validate-config",
                                   "parse and validate a scenario file");
  add_common(tradeoff, opt, true);
  add_common(lls, opt, true);
  add_common(beam, opt, false);
  add_common(valid, opt, false);
  double beam_lambda = 1e-3;
  std::string beam_out = "beampattern.csv";
  beam->add_option("--lambda", beam_lambda, "radar weight for the point");
  beam->add_option("--out", beam_out, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  opt.seed_set = tradeoff->count("--seed") || lls->count("--seed") ||
                 beam->count("--seed") || valid->count("--seed");

  const dfrc::Scenario sc = load(opt);
  const int n_real = opt.full_scale ? 200 : opt.realizations;
  const auto modes = parse_modes(opt.modes);
  std::filesystem::create_directories(opt.out_dir);

  if (valid->parsed()) {
    std::printf("OK: %d tx antennas, %d users, mode %s, Pt %.3f W\n",
                sc.n_tx(), sc.n_users(),
                dfrc::to_string(sc.system.access_mode).c_str(),
                sc.system.total_power);
    return 0;
  }
  if (beam->parsed()) {
    const auto r = dfrc::detail::run_realization(sc, beam_lambda,
                                                 sc.solver.rng_seed, 0);
    if (r.infeasible)
      throw dfrc::SolverFailure("QoS infeasible for the drawn channel", "");
    std::string csv = "theta_deg,pattern\n";
    for (const auto& [theta, pt] : dfrc::beampattern_csv_rows(
             r.p_final, sc.radar, sc.system.spacing))
      csv += dfrc::detail::fmt(theta) + "," + dfrc::detail::fmt(pt) + "\n";
    dfrc::write_file(beam_out, csv);
    std::printf("wrote %s\n", beam_out.c_str());
    return 0;
  }

  const auto manifest = make_manifest(opt, sc, n_real);
  dfrc::write_file(opt.out_dir + "/manifest.json",
                   dfrc::manifest_json(manifest).dump(2) + "\n");
  if (tradeoff->parsed()) {
    const auto pts = dfrc::run_tradeoff(sc, opt.lambdas, modes, opt.profiles,
                                        n_real, sc.solver.rng_seed);
    dfrc::write_file(opt.out_dir + "/tradeoff.csv", dfrc::tradeoff_csv(pts));
    write_plots(opt.out_dir, "tradeoff", pts);
    std::printf("wrote %s/tradeoff.csv (%zu points)\n", opt.out_dir.c_str(),
                pts.size());
  } else {
    const auto pts = dfrc::run_lls(sc, opt.lambdas, modes, opt.profiles,
                                   n_real, sc.solver.rng_seed);
    dfrc::write_file(opt.out_dir + "/lls.csv", dfrc::lls_csv(pts));
    std::printf("wrote %s/lls.csv (%zu points)\n", opt.out_dir.c_str(),
                pts.size());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const dfrc::ValidationError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const dfrc::SolverFailure& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
