// True channels, CSIT estimates under channel aging, and SAA sample sets.
#ifndef DFRC_CHANNEL_HPP
#define DFRC_CHANNEL_HPP

#include <cassert>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfrc/common.hpp"
#include "dfrc/config.hpp"

namespace dfrc {

struct ChannelSample {
  MatC h_true;        // H, N x K
  MatC h_est;         // H_hat known to the transmitter
  double corr_coeff;  // rho_time = J0(2 pi f_D T)
  double err_var;     // sigma_e^2
};

struct SaaSampleSet {
  std::vector<MatC> realizations;  // H^(m) = H_hat + Htilde^(m)
  std::uint64_t seed = 0;

  int size() const { return static_cast<int>(realizations.size()); }
};

inline double jakes_corr(double v, double f_c, double T) {
  const double fd = v * f_c / kSpeedOfLight;
  return std::cyl_bessel_j(0.0, 2.0 * kPi * fd * T);
}

// Without prev: H ~ CN(0,1) entrywise split as H = H_hat + Htilde with
// Htilde ~ CN(0, sigma_e^2). With prev: first-order Gauss-Markov evolution
// H_m = rho H_{m-1} + sqrt(1-rho^2) N_m, and the transmitter only knows the
// stale H_hat_m = H_{m-1}.
inline ChannelSample draw_aged_channel(const Scenario& sc, Rng& rng,
                                       const std::optional<MatC>& prev = std::nullopt) {
  const int n = sc.n_tx(), k = sc.n_users();
  ChannelSample out;
  out.corr_coeff = sc.time_corr;
  out.err_var = sc.csit_error_var;
  if (prev) {
    const double rho = sc.time_corr;
    out.h_est = *prev;
    out.h_true = rho * (*prev) +
                 std::sqrt(std::max(0.0, 1.0 - rho * rho)) * rng.cnormal_matrix(n, k);
  } else {
    out.h_est = rng.cnormal_matrix(n, k, 1.0 - sc.csit_error_var);
    out.h_true = out.h_est + rng.cnormal_matrix(n, k, sc.csit_error_var);
  }
  return out;
}

inline SaaSampleSet draw_saa_set(const ChannelSample& sample, int m_saa,
                                 std::uint64_t seed) {
  if (m_saa < 1) throw std::invalid_argument("draw_saa_set: m_saa must be >= 1");
  Rng rng(seed);
  SaaSampleSet set;
  set.seed = seed;
  set.realizations.reserve(static_cast<std::size_t>(m_saa));
  const auto rows = sample.h_est.rows(), cols = sample.h_est.cols();
  for (int m = 0; m < m_saa; ++m)
    set.realizations.push_back(sample.h_est +
                               rng.cnormal_matrix(rows, cols, sample.err_var));
  return set;
}

// Regression artifact: header line then row-major interleaved re/im values.
inline void dump_saa_csv(const SaaSampleSet& set, std::FILE* f) {
  const auto& first = set.realizations.at(0);
  std::fprintf(f, "# N=%ld K=%ld M_saa=%d seed=%llu\n", static_cast<long>(first.rows()),
               static_cast<long>(first.cols()), set.size(),
               static_cast<unsigned long long>(set.seed));
  for (const auto& h : set.realizations) {
    bool lead = true;
    for (Eigen::Index r = 0; r < h.rows(); ++r)
      for (Eigen::Index c = 0; c < h.cols(); ++c) {
        std::fprintf(f, "%s%.17g,%.17g", lead ? "" : ",", h(r, c).real(), h(r, c).imag());
        lead = false;
      }
    std::fprintf(f, "\n");
  }
}

}  // namespace dfrc

#endif  // DFRC_CHANNEL_HPP
