// Exact SINR/rate evaluation for RSMA, SDMA and NOMA, SAA-averaged rates,
// and weighted sum-rate arithmetic.
#ifndef DFRC_RATES_HPP
#define DFRC_RATES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "dfrc/channel.hpp"
#include "dfrc/common.hpp"
#include "dfrc/config.hpp"

namespace dfrc {

// P = [p_c, p_1..p_K]; column 0 is the common-stream precoder.
inline VecC common_col(const MatC& p) { return p.col(0); }
inline VecC private_col(const MatC& p, int k) { return p.col(k + 1); }
inline int user_count(const MatC& p) { return static_cast<int>(p.cols()) - 1; }

inline double rates_from_sinr(double gamma) { return std::log2(1.0 + gamma); }

struct RsmaSinr {
  double common;   // gamma_{c,k}
  double priv;     // gamma_k
};

inline double rsma_common_sinr(const MatC& p, const VecC& h_k, double noise_power) {
  const int k_users = user_count(p);
  double mui = 0.0;
  for (int j = 0; j < k_users; ++j)
    mui += std::norm(h_k.dot(private_col(p, j)));
  return std::norm(h_k.dot(common_col(p))) / (mui + noise_power);
}

inline double rsma_private_sinr(const MatC& p, const VecC& h_k, int k,
                                double noise_power) {
  const int k_users = user_count(p);
  double mui = 0.0;
  for (int j = 0; j < k_users; ++j)
    if (j != k) mui += std::norm(h_k.dot(private_col(p, j)));
  return std::norm(h_k.dot(private_col(p, k))) / (mui + noise_power);
}

inline RsmaSinr rsma_sinrs(const MatC& p, const VecC& h_k, int k, double noise_power) {
  return {rsma_common_sinr(p, h_k, noise_power),
          rsma_private_sinr(p, h_k, k, noise_power)};
}

// gamma_{pi(k) -> pi(i)} for i <= k: user pi(k) decoding stream pi(i), with
// interference from not-yet-decoded streams pi(j), j > i. Entries with i > k
// are left at NaN.
inline MatR noma_sinrs(const MatC& p_priv, const MatC& h,
                       const std::vector<int>& order, double noise_power) {
  const int k_users = static_cast<int>(p_priv.cols());
  MatR g = MatR::Constant(k_users, k_users, std::numeric_limits<double>::quiet_NaN());
  for (int k = 0; k < k_users; ++k) {
    const VecC hk = h.col(order[static_cast<std::size_t>(k)]);
    for (int i = 0; i <= k; ++i) {
      double mui = 0.0;
      for (int j = i + 1; j < k_users; ++j)
        mui += std::norm(hk.dot(p_priv.col(order[static_cast<std::size_t>(j)])));
      g(k, i) = std::norm(hk.dot(p_priv.col(order[static_cast<std::size_t>(i)]))) /
                (mui + noise_power);
    }
  }
  return g;
}

// Descending estimated channel gain ||h_hat_k||^2, ties broken by user index.
inline std::vector<int> noma_decoding_order(const MatC& h_est) {
  std::vector<int> order(static_cast<std::size_t>(h_est.cols()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return h_est.col(a).squaredNorm() > h_est.col(b).squaredNorm();
  });
  return order;
}

struct AverageRates {
  VecR common;   // R_bar_{c,k} per user
  VecR priv;     // R_bar_k per user
};

// SAFs: R_bar = (1/M) sum_m R^(m).
inline AverageRates average_rates(const MatC& p, const SaaSampleSet& saa,
                                  double noise_power) {
  if (saa.realizations.empty())
    throw std::invalid_argument("average_rates: empty SAA set");
  const int k_users = user_count(p);
  AverageRates out{VecR::Zero(k_users), VecR::Zero(k_users)};
  for (const auto& h : saa.realizations) {
    for (int k = 0; k < k_users; ++k) {
      const VecC hk = h.col(k);
      out.common(k) += rates_from_sinr(rsma_common_sinr(p, hk, noise_power));
      out.priv(k) += rates_from_sinr(rsma_private_sinr(p, hk, k, noise_power));
    }
  }
  out.common /= saa.size();
  out.priv /= saa.size();
  return out;
}

// NOMA stream rates under the spec's average-then-min convention: SAA-average
// each decoder's rate first, then take the min over decoders k >= i.
inline VecR noma_average_stream_rates(const MatC& p_priv, const SaaSampleSet& saa,
                                      const std::vector<int>& order,
                                      double noise_power) {
  const int k_users = static_cast<int>(p_priv.cols());
  MatR avg = MatR::Zero(k_users, k_users);
  for (const auto& h : saa.realizations) {
    const MatR g = noma_sinrs(p_priv, h, order, noise_power);
    for (int k = 0; k < k_users; ++k)
      for (int i = 0; i <= k; ++i) avg(k, i) += rates_from_sinr(g(k, i));
  }
  avg /= saa.size();
  VecR rates(k_users);
  for (int i = 0; i < k_users; ++i) {
    double r = std::numeric_limits<double>::infinity();
    for (int k = i; k < k_users; ++k) r = std::min(r, avg(k, i));
    rates(i) = r;
  }
  return rates;
}

struct RateReport {
  VecR common_rate_per_user;  // R_{c,k}
  double common_rate = 0.0;   // R_c = min_k R_{c,k}
  VecR private_rates;         // R_k
  VecR common_splits;         // C_k, sum = R_c
  VecR total_per_user;        // C_k + R_k
  double wsr = 0.0;           // sum mu_k (C_k + R_k)
};

inline double wsr(const VecR& common_splits, const VecR& private_rates,
                  const VecR& weights) {
  return (weights.array() * (common_splits.array() + private_rates.array())).sum();
}

inline RateReport make_rate_report(const VecR& common_per_user, const VecR& priv,
                                   const VecR& splits, const VecR& weights) {
  RateReport r;
  r.common_rate_per_user = common_per_user;
  r.common_rate = common_per_user.size() ? common_per_user.minCoeff() : 0.0;
  r.private_rates = priv;
  r.common_splits = splits;
  r.total_per_user = splits + priv;
  r.wsr = wsr(splits, priv, weights);
  return r;
}

inline nlohmann::json to_json(const RateReport& r) {
  auto vec = [](const VecR& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  return nlohmann::json{{"common_rate_per_user", vec(r.common_rate_per_user)},
                        {"common_rate", r.common_rate},
                        {"private_rates", vec(r.private_rates)},
                        {"common_splits", vec(r.common_splits)},
                        {"total_per_user", vec(r.total_per_user)},
                        {"wsr", r.wsr}};
}

// Per-antenna feasibility check used across the optimizer.
inline bool per_antenna_feasible(const MatC& p, double total_power, double tol = 1e-6) {
  const double cap = total_power / static_cast<double>(p.rows());
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    if (p.row(i).squaredNorm() > cap + tol) return false;
  return true;
}

}  // namespace dfrc

#endif  // DFRC_RATES_HPP
