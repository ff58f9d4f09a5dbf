// Monte-Carlo experiment harness: seeded realization sweeps over
// (lambda, access mode, mobility profile), aggregation into trade-off and
// link-level-throughput points, and CSV/JSON persistence.
#ifndef DFRC_HARNESS_HPP
#define DFRC_HARNESS_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfrc/admm.hpp"
#include "dfrc/channel.hpp"
#include "dfrc/config.hpp"
#include "dfrc/errors.hpp"
#include "dfrc/lls.hpp"
#include "dfrc/radar.hpp"

namespace dfrc {

struct TradeoffPoint {
  double lambda = 0.0;
  AccessMode mode = AccessMode::RSMA;
  std::string profile;
  double ewsr = 0.0;           // mean AWSR over realizations, bps/Hz
  double rmse = 0.0;           // sqrt(mean over realizations of grid-mean MSE)
  double rmi = 0.0;            // mean radar mutual information, bits
  double crb = 0.0;            // mean total CRB
  VecR mean_power_dbm;         // per precoder column; linear mean, then dBm
  int n_converged = 0;
  int n_total = 0;
  int n_infeasible = 0;        // QoS-infeasible draws, counted and skipped
};

struct LlsPoint {
  double lambda = 0.0;
  AccessMode mode = AccessMode::RSMA;
  std::string profile;
  double throughput = 0.0;     // weighted throughput, bps/Hz
  double ewsr = 0.0;
  double rmse = 0.0;
};

struct RunManifest {
  std::string config_path;
  std::uint64_t master_seed = 0;
  int realizations = 0;
  std::vector<double> lambdas;
  std::vector<std::string> modes;
  std::vector<std::string> profiles;
  std::string code_version = "dfrc-toolkit 1.0.0";
  std::string timestamp;       // ISO-8601, caller-supplied
};

// Applies one of the named mobility profiles as a direct CSIT error override.
inline Scenario apply_profile(Scenario sc, const std::string& profile) {
  const auto var = mobility_profile_error_var(profile);
  if (!var) throw std::invalid_argument("unknown mobility profile: " + profile);
  sc.csit_error_var = *var;
  return sc;
}

namespace detail {

struct Realization {
  bool infeasible = false;
  bool converged = false;
  double awsr = 0.0;
  double mse = 0.0;            // grid-mean beampattern MSE
  double rmi = 0.0;
  double crb = 0.0;
  VecR col_power;              // linear W per precoder column
  MatC p_final;
  VecR common_splits;
  std::vector<int> order;
  ChannelSample channel;
};

// One seeded realization: channel draw -> SAA set -> ADMM -> metrics.
// Seeding depends only on (master_seed, index), never on lambda, so sweeps
// compare identical channel draws and shard merges are deterministic.
inline Realization run_realization(const Scenario& sc, double lambda,
                                   std::uint64_t master_seed,
                                   std::uint64_t index) {
  Realization out;
  Rng ch_rng(master_seed, 2 * index);
  out.channel = draw_aged_channel(sc, ch_rng);
  const SaaSampleSet saa =
      draw_saa_set(out.channel, sc.solver.saa_samples,
                   mix_seed(master_seed, 2 * index + 1));
  AdmmResult res;
  try {
    res = run_admm(sc, out.channel.h_est, saa, lambda,
                   mix_seed(master_seed, index) ^ 0x9e3779b97f4a7c15ull);
  } catch (const InfeasibleQos&) {
    out.infeasible = true;
    return out;
  }
  out.converged = res.converged;
  out.awsr = res.awsr;
  out.mse = res.pattern_mse / static_cast<double>(sc.radar.grid_size());
  out.rmi = radar_mutual_information(res.p_final, sc.radar, sc.system.spacing);
  try {
    out.crb = crb_total(res.p_final, sc.radar, sc.system.spacing);
  } catch (const SingularFisher&) {
    out.crb = std::numeric_limits<double>::quiet_NaN();
  }
  out.col_power = VecR(res.p_final.cols());
  for (Eigen::Index c = 0; c < res.p_final.cols(); ++c)
    out.col_power(c) = res.p_final.col(c).squaredNorm();
  out.p_final = res.p_final;
  out.common_splits = res.common_splits;
  out.order = res.order;
  return out;
}

inline double watts_to_dbm(double w) {
  return 10.0 * std::log10(std::max(w, 1e-30) * 1e3);
}

}  // namespace detail

inline std::vector<TradeoffPoint> run_tradeoff(
    const Scenario& base, const std::vector<double>& lambdas,
    const std::vector<AccessMode>& modes,
    const std::vector<std::string>& profiles, int n_realizations,
    std::uint64_t master_seed) {
  std::vector<TradeoffPoint> points;
  for (const std::string& profile : profiles) {
    for (AccessMode mode : modes) {
      Scenario sc = apply_profile(base, profile);
      sc.system.access_mode = mode;
      for (double lambda : lambdas) {
        TradeoffPoint pt;
        pt.lambda = lambda;
        pt.mode = mode;
        pt.profile = profile;
        pt.mean_power_dbm = VecR::Zero(sc.n_users() + 1);
        VecR power_lin = VecR::Zero(sc.n_users() + 1);
        double mse_sum = 0.0;
        int n_crb = 0;
        double crb_sum = 0.0;
        for (int idx = 0; idx < n_realizations; ++idx) {
          const auto r = detail::run_realization(
              sc, lambda, master_seed, static_cast<std::uint64_t>(idx));
          ++pt.n_total;
          if (r.infeasible) {
            ++pt.n_infeasible;
            continue;
          }
          if (r.converged) ++pt.n_converged;
          pt.ewsr += r.awsr;
          mse_sum += r.mse;
          pt.rmi += r.rmi;
          if (std::isfinite(r.crb)) {
            crb_sum += r.crb;
            ++n_crb;
          }
          power_lin += r.col_power;
        }
        const int n_ok = pt.n_total - pt.n_infeasible;
        if (n_ok > 0) {
          pt.ewsr /= n_ok;
          pt.rmse = std::sqrt(mse_sum / n_ok);
          pt.rmi /= n_ok;
          pt.crb = n_crb > 0 ? crb_sum / n_crb
                             : std::numeric_limits<double>::quiet_NaN();
          for (Eigen::Index c = 0; c < power_lin.size(); ++c)
            pt.mean_power_dbm(c) = detail::watts_to_dbm(power_lin(c) / n_ok);
        }
        points.push_back(std::move(pt));
      }
    }
  }
  return points;
}

inline std::vector<LlsPoint> run_lls(const Scenario& base,
                                     const std::vector<double>& lambdas,
                                     const std::vector<AccessMode>& modes,
                                     const std::vector<std::string>& profiles,
                                     int n_realizations,
                                     std::uint64_t master_seed) {
  std::vector<LlsPoint> points;
  for (const std::string& profile : profiles) {
    for (AccessMode mode : modes) {
      Scenario sc = apply_profile(base, profile);
      sc.system.access_mode = mode;
      for (double lambda : lambdas) {
        LlsPoint pt;
        pt.lambda = lambda;
        pt.mode = mode;
        pt.profile = profile;
        std::vector<LlsBlockResult> blocks;
        double mse_sum = 0.0;
        int n_ok = 0;
        for (int idx = 0; idx < n_realizations; ++idx) {
          const auto r = detail::run_realization(
              sc, lambda, master_seed, static_cast<std::uint64_t>(idx));
          if (r.infeasible) continue;
          ++n_ok;
          pt.ewsr += r.awsr;
          mse_sum += r.mse;

          // Transmit rates on the true channel select the modcodes.
          const MatC& h = r.channel.h_true;
          const int k = sc.n_users();
          std::optional<ModCodePair> cmc;
          std::vector<std::optional<ModCodePair>> pmc;
          VecR shares;
          if (mode == AccessMode::NOMA) {
            SaaSampleSet one;
            one.realizations = {h};
            const VecR sr = noma_average_stream_rates(
                r.p_final.rightCols(k), one, r.order,
                sc.system.noise_power_user);
            pmc.assign(static_cast<std::size_t>(k), std::nullopt);
            for (int i = 0; i < k; ++i)
              pmc[static_cast<std::size_t>(r.order[static_cast<std::size_t>(i)])] =
                  amc_select(sr(i));
          } else {
            double rc = std::numeric_limits<double>::infinity();
            for (int u = 0; u < k; ++u) {
              rc = std::min(rc, rates_from_sinr(rsma_common_sinr(
                                    r.p_final, h.col(u),
                                    sc.system.noise_power_user)));
              pmc.push_back(amc_select(rates_from_sinr(rsma_private_sinr(
                  r.p_final, h.col(u), u, sc.system.noise_power_user))));
            }
            if (mode == AccessMode::RSMA) {
              cmc = amc_select(rc);
              // Split the common payload by the optimizer's rate shares.
              if (r.common_splits.size() == static_cast<Eigen::Index>(k) &&
                  r.common_splits.cwiseMax(0.0).sum() > 1e-12)
                shares = r.common_splits.cwiseMax(0.0) /
                         r.common_splits.cwiseMax(0.0).sum();
            }
          }
          Rng blk_rng(master_seed, 0x11570000ull + idx);
          for (int b = 0; b < sc.lls.blocks; ++b)
            blocks.push_back(simulate_block(
                r.p_final, h, mode, r.order, cmc, pmc,
                sc.system.noise_power_user, sc.lls.block_symbols, blk_rng,
                shares.size() ? shares : VecR()));
        }
        if (n_ok > 0) {
          pt.ewsr /= n_ok;
          pt.rmse = std::sqrt(mse_sum / n_ok);
        }
        if (!blocks.empty())
          pt.throughput = weighted_throughput(blocks, sc.system.weights);
        points.push_back(std::move(pt));
      }
    }
  }
  return points;
}

// ---------------------------------------------------------------------------
// Persistence. Numbers use %.17g so a CSV -> parse -> CSV round trip is
// byte-identical.
// ---------------------------------------------------------------------------
namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline const char* kTradeoffHeader =
    "lambda,mode,profile,ewsr,rmse,rmi,crb,power_dbm,n_converged,n_total,"
    "n_infeasible";

inline std::string tradeoff_csv(const std::vector<TradeoffPoint>& points) {
  if (points.empty()) throw std::runtime_error("nothing to emit");
  std::string out = std::string(kTradeoffHeader) + "\n";
  for (const TradeoffPoint& p : points) {
    out += detail::fmt(p.lambda) + "," + to_string(p.mode) + "," + p.profile +
           "," + detail::fmt(p.ewsr) + "," + detail::fmt(p.rmse) + "," +
           detail::fmt(p.rmi) + "," + detail::fmt(p.crb) + ",";
    for (Eigen::Index c = 0; c < p.mean_power_dbm.size(); ++c)
      out += (c ? ";" : "") + detail::fmt(p.mean_power_dbm(c));
    out += "," + std::to_string(p.n_converged) + "," +
           std::to_string(p.n_total) + "," + std::to_string(p.n_infeasible) +
           "\n";
  }
  return out;
}

inline std::vector<TradeoffPoint> parse_tradeoff_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != kTradeoffHeader)
    throw std::runtime_error("tradeoff CSV: bad header");
  std::vector<TradeoffPoint> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 11)
      throw std::runtime_error("tradeoff CSV: bad row: " + line);
    TradeoffPoint p;
    p.lambda = std::stod(cells[0]);
    const auto m = parse_access_mode(cells[1]);
    if (!m) throw std::runtime_error("tradeoff CSV: bad mode " + cells[1]);
    p.mode = *m;
    p.profile = cells[2];
    p.ewsr = std::stod(cells[3]);
    p.rmse = std::stod(cells[4]);
    p.rmi = std::stod(cells[5]);
    p.crb = std::stod(cells[6]);
    std::vector<double> pw;
    std::istringstream ps(cells[7]);
    while (std::getline(ps, cell, ';')) pw.push_back(std::stod(cell));
    p.mean_power_dbm = Eigen::Map<VecR>(pw.data(), static_cast<Eigen::Index>(pw.size()));
    p.n_converged = std::stoi(cells[8]);
    p.n_total = std::stoi(cells[9]);
    p.n_infeasible = std::stoi(cells[10]);
    points.push_back(std::move(p));
  }
  return points;
}

inline const char* kLlsHeader = "lambda,mode,profile,weighted_throughput,rmse,ewsr";

inline std::string lls_csv(const std::vector<LlsPoint>& points) {
  if (points.empty()) throw std::runtime_error("nothing to emit");
  std::string out = std::string(kLlsHeader) + "\n";
  for (const LlsPoint& p : points)
    out += detail::fmt(p.lambda) + "," + to_string(p.mode) + "," + p.profile +
           "," + detail::fmt(p.throughput) + "," + detail::fmt(p.rmse) + "," +
           detail::fmt(p.ewsr) + "\n";
  return out;
}

inline nlohmann::json manifest_json(const RunManifest& m) {
  return nlohmann::json{{"config_path", m.config_path},
                        {"master_seed", m.master_seed},
                        {"realizations", m.realizations},
                        {"lambdas", m.lambdas},
                        {"modes", m.modes},
                        {"profiles", m.profiles},
                        {"code_version", m.code_version},
                        {"timestamp", m.timestamp}};
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

// Two-column plot data (x, y) per curve, e.g. RMSE vs EWSR.
inline std::string plot_xy(const std::vector<double>& x,
                           const std::vector<double>& y) {
  if (x.empty() || x.size() != y.size())
    throw std::runtime_error("nothing to emit");
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i)
    out += detail::fmt(x[i]) + " " + detail::fmt(y[i]) + "\n";
  return out;
}

inline std::vector<double> default_lambda_grid() {
  return {1e-9, 1e-7, 1e-5, 1e-3, 1e-2, 1e-1};
}

}  // namespace dfrc

#endif  // DFRC_HARNESS_HPP
