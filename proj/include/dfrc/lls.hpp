// Link-level simulator: CRC-checked polar coding over Gray-mapped QAM with an
// MMSE + successive-interference-cancellation receiver, adaptive modulation
// and coding, and the weighted-throughput metric.
#ifndef DFRC_LLS_HPP
#define DFRC_LLS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfrc/common.hpp"
#include "dfrc/config.hpp"
#include "dfrc/rates.hpp"

namespace dfrc {

// ---------------------------------------------------------------------------
// CRC-16 (CCITT polynomial 0x1021, zero initial value) over a bit vector.
// ---------------------------------------------------------------------------
inline std::vector<std::uint8_t> crc16_bits(const std::vector<std::uint8_t>& bits) {
  std::uint16_t reg = 0;
  for (std::uint8_t b : bits) {
    const std::uint16_t top = static_cast<std::uint16_t>((reg >> 15) ^ (b & 1u));
    reg = static_cast<std::uint16_t>(reg << 1);
    if (top) reg = static_cast<std::uint16_t>(reg ^ 0x1021u);
  }
  std::vector<std::uint8_t> out(16);
  for (int i = 0; i < 16; ++i)
    out[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>((reg >> (15 - i)) & 1u);
  return out;
}

inline constexpr int kCrcBits = 16;

// ---------------------------------------------------------------------------
// Polar code with Bhattacharyya-parameter construction and successive-
// cancellation decoding. Supports shortening to non-power-of-two transmitted
// lengths: the mother code's tail inputs are frozen to zero, which (by the
// triangularity of the polar transform) forces the tail code bits to zero, so
// they are simply not transmitted and enter the decoder as known bits.
// ---------------------------------------------------------------------------
class PolarCode {
 public:
  // tx_bits: transmitted (possibly shortened) code bits; info_bits includes
  // any CRC the caller embeds. design_snr_db is clamped to [-2, 20] dB.
  PolarCode(int tx_bits, int info_bits, double design_snr_db)
      : n_tx_(tx_bits), n_info_(info_bits) {
    if (tx_bits < 2) throw std::invalid_argument("polar: tx_bits < 2");
    if (info_bits < 1 || info_bits >= tx_bits)
      throw std::invalid_argument("polar: info_bits must be in [1, tx_bits)");
    n_block_ = 1;
    while (n_block_ < tx_bits) n_block_ <<= 1;

    const double snr_db = std::clamp(design_snr_db, -2.0, 20.0);
    const double snr = std::pow(10.0, snr_db / 10.0);
    std::vector<double> z(static_cast<std::size_t>(n_block_));
    for (int i = 0; i < n_block_; ++i)
      z[static_cast<std::size_t>(i)] = i < n_tx_ ? std::exp(-snr) : 0.0;
    construct(z);

    // Pick the most reliable non-shortened inputs as the information set.
    std::vector<int> idx;
    for (int i = 0; i < n_tx_; ++i) idx.push_back(i);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      return z[static_cast<std::size_t>(a)] < z[static_cast<std::size_t>(b)];
    });
    frozen_.assign(static_cast<std::size_t>(n_block_), 1);
    info_set_.assign(idx.begin(), idx.begin() + n_info_);
    std::sort(info_set_.begin(), info_set_.end());
    for (int i : info_set_) frozen_[static_cast<std::size_t>(i)] = 0;
  }

  int tx_bits() const { return n_tx_; }
  int info_bits() const { return n_info_; }
  int mother_bits() const { return n_block_; }
  const std::vector<int>& info_set() const { return info_set_; }

  std::vector<std::uint8_t> encode(const std::vector<std::uint8_t>& info) const {
    if (static_cast<int>(info.size()) != n_info_)
      throw std::invalid_argument("polar encode: wrong info length");
    std::vector<std::uint8_t> u(static_cast<std::size_t>(n_block_), 0);
    for (int i = 0; i < n_info_; ++i)
      u[static_cast<std::size_t>(info_set_[static_cast<std::size_t>(i)])] =
          info[static_cast<std::size_t>(i)] & 1u;
    transform(u.data(), n_block_);
    u.resize(static_cast<std::size_t>(n_tx_));  // tail bits are provably zero
    return u;
  }

  // llr convention: positive favors bit 0. Returns the info bits.
  std::vector<std::uint8_t> decode(const std::vector<double>& llr) const {
    if (static_cast<int>(llr.size()) != n_tx_)
      throw std::invalid_argument("polar decode: wrong llr length");
    std::vector<double> alpha(static_cast<std::size_t>(n_block_), 1e30);
    std::copy(llr.begin(), llr.end(), alpha.begin());
    std::vector<std::uint8_t> u(static_cast<std::size_t>(n_block_));
    int pos = 0;
    std::vector<std::uint8_t> beta(static_cast<std::size_t>(n_block_));
    sc_decode(alpha.data(), beta.data(), n_block_, pos, u);
    std::vector<std::uint8_t> info(static_cast<std::size_t>(n_info_));
    for (int i = 0; i < n_info_; ++i)
      info[static_cast<std::size_t>(i)] =
          u[static_cast<std::size_t>(info_set_[static_cast<std::size_t>(i)])];
    return info;
  }

 private:
  // Bhattacharyya recursion over per-position channel parameters; the first
  // half of the inputs sees the degraded (f) channels.
  static void construct(std::vector<double>& z) {
    const int n = static_cast<int>(z.size());
    if (n == 1) return;
    const int h = n / 2;
    std::vector<double> zf(static_cast<std::size_t>(h)), zg(static_cast<std::size_t>(h));
    for (int i = 0; i < h; ++i) {
      const double a = z[static_cast<std::size_t>(i)];
      const double b = z[static_cast<std::size_t>(i + h)];
      zf[static_cast<std::size_t>(i)] = a + b - a * b;
      zg[static_cast<std::size_t>(i)] = a * b;
    }
    construct(zf);
    construct(zg);
    std::copy(zf.begin(), zf.end(), z.begin());
    std::copy(zg.begin(), zg.end(), z.begin() + h);
  }

  // x = (enc(u1 xor u2), enc(u2)) — upper-triangular polar transform.
  static void transform(std::uint8_t* u, int n) {
    if (n == 1) return;
    const int h = n / 2;
    for (int i = 0; i < h; ++i) u[i] = static_cast<std::uint8_t>(u[i] ^ u[i + h]);
    transform(u, h);
    transform(u + h, h);
  }

  void sc_decode(double* alpha, std::uint8_t* beta, int n, int& pos,
                 std::vector<std::uint8_t>& u) const {
    if (n == 1) {
      std::uint8_t bit = 0;
      if (!frozen_[static_cast<std::size_t>(pos)] && alpha[0] < 0.0) bit = 1;
      u[static_cast<std::size_t>(pos)] = bit;
      beta[0] = bit;
      ++pos;
      return;
    }
    const int h = n / 2;
    std::vector<double> af(static_cast<std::size_t>(h));
    for (int i = 0; i < h; ++i) {
      const double a = alpha[i], b = alpha[i + h];
      const double s = (a < 0.0) == (b < 0.0) ? 1.0 : -1.0;
      af[static_cast<std::size_t>(i)] = s * std::min(std::abs(a), std::abs(b));
    }
    std::vector<std::uint8_t> b1(static_cast<std::size_t>(h));
    sc_decode(af.data(), b1.data(), h, pos, u);
    std::vector<double> ag(static_cast<std::size_t>(h));
    for (int i = 0; i < h; ++i)
      ag[static_cast<std::size_t>(i)] =
          alpha[i + h] + (b1[static_cast<std::size_t>(i)] ? -alpha[i] : alpha[i]);
    std::vector<std::uint8_t> b2(static_cast<std::size_t>(h));
    sc_decode(ag.data(), b2.data(), h, pos, u);
    for (int i = 0; i < h; ++i) {
      beta[i] = static_cast<std::uint8_t>(b1[static_cast<std::size_t>(i)] ^
                                          b2[static_cast<std::size_t>(i)]);
      beta[i + h] = b2[static_cast<std::size_t>(i)];
    }
  }

  int n_tx_;
  int n_info_;
  int n_block_ = 0;
  std::vector<int> info_set_;
  std::vector<std::uint8_t> frozen_;
};

// Spec'd convenience wrappers for the power-of-two case.
inline std::vector<std::uint8_t> polar_encode(
    const std::vector<std::uint8_t>& info, int block_bits, double code_rate,
    double design_snr_db = 0.0) {
  if (block_bits < 2 || (block_bits & (block_bits - 1)) != 0)
    throw std::invalid_argument("polar_encode: block_bits must be a power of two");
  const int k = static_cast<int>(std::lround(code_rate * block_bits));
  if (k < 1 || k >= block_bits)
    throw std::invalid_argument("polar_encode: rate leaves no usable info bits");
  if (static_cast<int>(info.size()) != k)
    throw std::invalid_argument("polar_encode: info length != rate * block_bits");
  return PolarCode(block_bits, k, design_snr_db).encode(info);
}

inline std::vector<std::uint8_t> polar_decode(const std::vector<double>& llrs,
                                              double code_rate,
                                              double design_snr_db = 0.0) {
  const int n = static_cast<int>(llrs.size());
  const int k = static_cast<int>(std::lround(code_rate * n));
  return PolarCode(n, k, design_snr_db).decode(llrs);
}

// ---------------------------------------------------------------------------
// Gray-mapped square QAM with unit average energy.
// ---------------------------------------------------------------------------
enum class Modulation { QPSK, QAM16, QAM64, QAM256 };

inline int bits_per_symbol(Modulation m) {
  switch (m) {
    case Modulation::QPSK: return 2;
    case Modulation::QAM16: return 4;
    case Modulation::QAM64: return 6;
    case Modulation::QAM256: return 8;
  }
  return 0;
}

inline const char* to_string(Modulation m) {
  switch (m) {
    case Modulation::QPSK: return "QPSK";
    case Modulation::QAM16: return "16QAM";
    case Modulation::QAM64: return "64QAM";
    case Modulation::QAM256: return "256QAM";
  }
  return "?";
}

namespace detail {

inline int gray_to_binary(int g) {
  int b = 0;
  for (; g; g >>= 1) b ^= g;
  return b;
}

inline int binary_to_gray(int b) { return b ^ (b >> 1); }

// PAM amplitude for a Gray label of m bits: levels {-(2^m - 1), ..., 2^m - 1}.
inline double pam_level(int gray_label, int m) {
  const int idx = gray_to_binary(gray_label);
  return 2.0 * idx - ((1 << m) - 1);
}

}  // namespace detail

// Maps bits (MSB-first per axis, I before Q) to unit-average-energy symbols.
inline std::vector<cxd> qam_modulate(const std::vector<std::uint8_t>& bits,
                                     Modulation mod) {
  const int b = bits_per_symbol(mod);
  const int m = b / 2;
  if (bits.size() % static_cast<std::size_t>(b) != 0)
    throw std::invalid_argument("qam_modulate: bit count not a symbol multiple");
  const int mm = 1 << m;
  const double norm = std::sqrt(2.0 * (static_cast<double>(mm) * mm - 1.0) / 3.0);
  std::vector<cxd> out(bits.size() / static_cast<std::size_t>(b));
  for (std::size_t s = 0; s < out.size(); ++s) {
    int gi = 0, gq = 0;
    for (int j = 0; j < m; ++j) {
      gi = (gi << 1) | bits[s * static_cast<std::size_t>(b) + static_cast<std::size_t>(j)];
      gq = (gq << 1) |
           bits[s * static_cast<std::size_t>(b) + static_cast<std::size_t>(m + j)];
    }
    out[s] = cxd(detail::pam_level(gi, m), detail::pam_level(gq, m)) / norm;
  }
  return out;
}

// Max-log LLRs (positive favors bit 0) for observations y = s + n with complex
// noise variance noise_var.
inline std::vector<double> qam_demodulate(const std::vector<cxd>& symbols,
                                          Modulation mod, double noise_var) {
  const int b = bits_per_symbol(mod);
  const int m = b / 2;
  const int mm = 1 << m;
  const double norm = std::sqrt(2.0 * (static_cast<double>(mm) * mm - 1.0) / 3.0);
  std::vector<double> llrs(symbols.size() * static_cast<std::size_t>(b));
  const double scale = 1.0 / std::max(noise_var, 1e-300);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    for (int axis = 0; axis < 2; ++axis) {
      const double y = axis == 0 ? symbols[s].real() : symbols[s].imag();
      for (int j = 0; j < m; ++j) {
        double d0 = std::numeric_limits<double>::infinity();
        double d1 = d0;
        for (int g = 0; g < mm; ++g) {
          const double a = detail::pam_level(g, m) / norm;
          const double d = (y - a) * (y - a);
          if ((g >> (m - 1 - j)) & 1) d1 = std::min(d1, d);
          else d0 = std::min(d0, d);
        }
        llrs[s * static_cast<std::size_t>(b) +
             static_cast<std::size_t>(axis * m + j)] = (d1 - d0) * scale;
      }
    }
  }
  return llrs;
}

// ---------------------------------------------------------------------------
// Adaptive modulation and coding.
// ---------------------------------------------------------------------------
struct ModCodePair {
  Modulation modulation = Modulation::QPSK;
  double code_rate = 0.5;

  double spectral_efficiency() const {
    return bits_per_symbol(modulation) * code_rate;
  }
};

// LTE-like ladder; on equal spectral efficiency the lower-order modulation
// comes first and wins the selection.
inline const std::vector<ModCodePair>& amc_table() {
  static const std::vector<ModCodePair> table = {
      {Modulation::QPSK, 0.25},   {Modulation::QPSK, 0.5},
      {Modulation::QPSK, 0.75},   {Modulation::QAM16, 0.5},
      {Modulation::QAM16, 0.75},  {Modulation::QAM64, 0.5},
      {Modulation::QAM64, 2.0 / 3.0}, {Modulation::QAM64, 0.75},
      {Modulation::QAM64, 5.0 / 6.0}, {Modulation::QAM256, 0.75},
      {Modulation::QAM256, 5.0 / 6.0}};
  return table;
}

// Highest spectral efficiency not exceeding the achievable rate; empty when
// even the smallest entry does not fit (no transmission).
inline std::optional<ModCodePair> amc_select(double achievable_rate) {
  std::optional<ModCodePair> best;
  for (const ModCodePair& mc : amc_table())
    if (mc.spectral_efficiency() <= achievable_rate + 1e-12 &&
        (!best || mc.spectral_efficiency() > best->spectral_efficiency() + 1e-12))
      best = mc;
  return best;
}

// ---------------------------------------------------------------------------
// Block simulation.
// ---------------------------------------------------------------------------
struct LlsBlockResult {
  std::vector<std::uint8_t> common_ok;   // per user (empty if no common stream)
  std::vector<std::uint8_t> private_ok;  // per user / per NOMA stream owner
  VecR delivered_bits;                   // D_{s,k} per user
  int symbols = 0;
};

namespace detail {

struct CodedStream {
  ModCodePair mc;
  PolarCode code;
  std::vector<std::uint8_t> payload;  // info bits without CRC
  std::vector<cxd> symbols;           // transmitted symbols, length S
  int payload_bits = 0;
};

// Builds one coded stream: payload + CRC -> polar -> QAM, spanning s symbols.
inline std::optional<CodedStream> make_stream(const ModCodePair& mc, int s,
                                              double design_snr_db, Rng& rng) {
  const int b = bits_per_symbol(mc.modulation);
  const int coded = b * s;
  const int info = static_cast<int>(std::lround(mc.code_rate * coded));
  const int payload = info - kCrcBits;
  if (payload < 1) return std::nullopt;
  CodedStream st{mc, PolarCode(coded, info, design_snr_db), {}, {}, payload};
  st.payload.resize(static_cast<std::size_t>(payload));
  for (auto& bit : st.payload)
    bit = static_cast<std::uint8_t>(rng.uniform() < 0.5);
  std::vector<std::uint8_t> with_crc = st.payload;
  const auto crc = crc16_bits(st.payload);
  with_crc.insert(with_crc.end(), crc.begin(), crc.end());
  st.symbols = qam_modulate(st.code.encode(with_crc), mc.modulation);
  return st;
}

// Decodes a stream from equalized observations z[t] ~ symbol + CN(0, nv).
inline bool decode_stream(const CodedStream& st, const std::vector<cxd>& z,
                          double nv, std::vector<cxd>* remod) {
  const auto llr = qam_demodulate(z, st.mc.modulation, nv);
  const auto info = st.code.decode(llr);
  std::vector<std::uint8_t> payload(info.begin(), info.end() - kCrcBits);
  const auto crc = crc16_bits(payload);
  // CRC supplies the receiver's flag; the ground-truth comparison guards the
  // throughput accounting against ~2^-16 CRC false positives delivering
  // wrong bits.
  const bool ok = std::equal(crc.begin(), crc.end(), info.end() - kCrcBits) &&
                  payload == st.payload;
  if (ok && remod) {
    std::vector<std::uint8_t> with_crc = payload;
    with_crc.insert(with_crc.end(), crc.begin(), crc.end());
    *remod = qam_modulate(st.code.encode(with_crc), st.mc.modulation);
  }
  return ok;
}

inline double clamp_snr_db(double sinr) {
  return std::clamp(10.0 * std::log10(std::max(sinr, 1e-12)), -2.0, 20.0);
}

}  // namespace detail

// Simulates one block of `s` symbols through y_k = h_k^H x + n. For RSMA the
// common stream is decoded, re-encoded and cancelled before the private
// stream; a failed common decode voids the user's private delivery (SIC
// causality). NOMA chains SIC through `order`. `common_share` splits the
// common payload across users (defaults to equal shares).
inline LlsBlockResult simulate_block(
    const MatC& p, const MatC& h_true, AccessMode mode,
    const std::vector<int>& order,
    const std::optional<ModCodePair>& common_mc,
    const std::vector<std::optional<ModCodePair>>& private_mc,
    double noise_power, int s, Rng& rng, const VecR& common_share = VecR()) {
  const int k_users = static_cast<int>(h_true.cols());
  LlsBlockResult res;
  res.symbols = s;
  res.delivered_bits = VecR::Zero(k_users);
  res.private_ok.assign(static_cast<std::size_t>(k_users), 0);

  const bool has_common = mode == AccessMode::RSMA && common_mc.has_value() &&
                          p.col(0).norm() > 0.0;

  // Build transmitted streams. Design SNR per stream comes from the
  // post-equalization SINR at the intended user(s) on the true channel.
  std::optional<detail::CodedStream> cs;
  if (has_common) {
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < k_users; ++k)
      worst = std::min(worst,
                       rsma_common_sinr(p, h_true.col(k), noise_power));
    cs = detail::make_stream(*common_mc, s, detail::clamp_snr_db(worst), rng);
  }
  std::vector<std::optional<detail::CodedStream>> ps(
      static_cast<std::size_t>(k_users));
  if (mode == AccessMode::NOMA) {
    // Design SNR of stream i: the worst decoder k >= i in the SIC chain.
    const MatR g = noma_sinrs(p.rightCols(k_users), h_true, order, noise_power);
    for (int i = 0; i < k_users; ++i) {
      const int user = order[static_cast<std::size_t>(i)];
      if (!private_mc[static_cast<std::size_t>(user)]) continue;
      double worst = std::numeric_limits<double>::infinity();
      for (int k = i; k < k_users; ++k) worst = std::min(worst, g(k, i));
      ps[static_cast<std::size_t>(user)] = detail::make_stream(
          *private_mc[static_cast<std::size_t>(user)], s,
          detail::clamp_snr_db(worst), rng);
    }
  } else {
    for (int k = 0; k < k_users; ++k) {
      if (!private_mc[static_cast<std::size_t>(k)]) continue;
      const double sinr = rsma_private_sinr(p, h_true.col(k), k, noise_power);
      ps[static_cast<std::size_t>(k)] = detail::make_stream(
          *private_mc[static_cast<std::size_t>(k)], s,
          detail::clamp_snr_db(sinr), rng);
    }
  }

  // Superimpose and add noise per user.
  MatC x = MatC::Zero(p.rows(), s);
  if (cs)
    for (int t = 0; t < s; ++t)
      x.col(t) += p.col(0) * cs->symbols[static_cast<std::size_t>(t)];
  for (int k = 0; k < k_users; ++k)
    if (ps[static_cast<std::size_t>(k)])
      for (int t = 0; t < s; ++t)
        x.col(t) += p.col(k + 1) *
                    ps[static_cast<std::size_t>(k)]->symbols[static_cast<std::size_t>(t)];

  if (has_common) res.common_ok.assign(static_cast<std::size_t>(k_users), 0);

  for (int k = 0; k < k_users; ++k) {
    const VecC hk = h_true.col(k);
    std::vector<cxd> y(static_cast<std::size_t>(s));
    const MatC noise = rng.cnormal_matrix(1, s, noise_power);
    for (int t = 0; t < s; ++t)
      y[static_cast<std::size_t>(t)] = hk.dot(x.col(t)) + noise(0, t);

    auto equalize_decode = [&](const detail::CodedStream& st, const cxd& gain,
                               double interference, std::vector<cxd>* remod) {
      // MMSE scalar equalizer for z = gain * sym + (interference + noise).
      const double sig = std::norm(gain);
      const double tot = sig + interference + noise_power;
      const cxd g = std::conj(gain) / tot;
      // z / (g * gain) ~ sym + noise of variance nv_eff.
      const cxd mu = g * gain;
      const double nv = std::norm(g) * (interference + noise_power) /
                        std::max(std::norm(mu), 1e-300);
      std::vector<cxd> zeq(static_cast<std::size_t>(s));
      for (int t = 0; t < s; ++t)
        zeq[static_cast<std::size_t>(t)] = g * y[static_cast<std::size_t>(t)] / mu;
      return detail::decode_stream(st, zeq, nv, remod);
    };

    if (mode == AccessMode::NOMA) {
      // Position of user k in the decoding order.
      int my_pos = 0;
      for (int i = 0; i < k_users; ++i)
        if (order[static_cast<std::size_t>(i)] == k) my_pos = i;
      bool chain_ok = true;
      for (int i = 0; i <= my_pos && chain_ok; ++i) {
        const int src = order[static_cast<std::size_t>(i)];
        // An untransmitted stream adds no interference; nothing to cancel.
        if (!ps[static_cast<std::size_t>(src)]) continue;
        double interf = 0.0;
        for (int j = i + 1; j < k_users; ++j) {
          const int other = order[static_cast<std::size_t>(j)];
          if (ps[static_cast<std::size_t>(other)])
            interf += std::norm(hk.dot(p.col(other + 1)));
        }
        std::vector<cxd> remod;
        const bool ok = equalize_decode(*ps[static_cast<std::size_t>(src)],
                                        hk.dot(p.col(src + 1)), interf,
                                        i < my_pos ? &remod : nullptr);
        if (!ok) {
          chain_ok = false;
        } else if (i < my_pos) {
          const cxd gain = hk.dot(p.col(src + 1));
          for (int t = 0; t < s; ++t)
            y[static_cast<std::size_t>(t)] -=
                gain * remod[static_cast<std::size_t>(t)];
        }
      }
      if (chain_ok && ps[static_cast<std::size_t>(k)]) {
        res.private_ok[static_cast<std::size_t>(k)] = 1;
        res.delivered_bits(k) += ps[static_cast<std::size_t>(k)]->payload_bits;
      }
      continue;
    }

    // RSMA / SDMA path.
    double priv_interf = 0.0;
    for (int j = 0; j < k_users; ++j)
      if (j != k && ps[static_cast<std::size_t>(j)])
        priv_interf += std::norm(hk.dot(p.col(j + 1)));

    bool common_ok = true;
    if (has_common && cs) {
      double interf = priv_interf;
      if (ps[static_cast<std::size_t>(k)])
        interf += std::norm(hk.dot(p.col(k + 1)));
      std::vector<cxd> remod;
      common_ok = equalize_decode(*cs, hk.dot(p.col(0)), interf, &remod);
      res.common_ok[static_cast<std::size_t>(k)] =
          static_cast<std::uint8_t>(common_ok);
      if (common_ok) {
        const cxd gain = hk.dot(p.col(0));
        for (int t = 0; t < s; ++t)
          y[static_cast<std::size_t>(t)] -= gain * remod[static_cast<std::size_t>(t)];
        const double share =
            common_share.size() == static_cast<Eigen::Index>(k_users)
                ? common_share(k)
                : 1.0 / static_cast<double>(k_users);
        res.delivered_bits(k) += share * cs->payload_bits;
      }
    }

    // SIC causality: a failed common stage voids the private delivery.
    if (!common_ok || !ps[static_cast<std::size_t>(k)]) continue;
    const bool ok = equalize_decode(*ps[static_cast<std::size_t>(k)],
                                    hk.dot(p.col(k + 1)), priv_interf, nullptr);
    if (ok) {
      res.private_ok[static_cast<std::size_t>(k)] = 1;
      res.delivered_bits(k) += ps[static_cast<std::size_t>(k)]->payload_bits;
    }
  }
  return res;
}

// Weighted throughput: sum_l sum_k mu_k D_{s,k}^(l) / sum_l S^(l), in bps/Hz.
inline double weighted_throughput(const std::vector<LlsBlockResult>& blocks,
                                  const std::vector<double>& weights) {
  if (blocks.empty())
    throw std::invalid_argument("weighted_throughput: no blocks");
  double num = 0.0, den = 0.0;
  for (const LlsBlockResult& b : blocks) {
    for (Eigen::Index k = 0; k < b.delivered_bits.size(); ++k)
      num += weights[static_cast<std::size_t>(k)] * b.delivered_bits(k);
    den += b.symbols;
  }
  return num / den;
}

}  // namespace dfrc

#endif  // DFRC_LLS_HPP
