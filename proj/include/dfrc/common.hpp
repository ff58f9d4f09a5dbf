// Shared numeric types, unit conversions and deterministic RNG.
#ifndef DFRC_COMMON_HPP
#define DFRC_COMMON_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace dfrc {

using cxd = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;

inline constexpr double kSpeedOfLight = 3e8;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w * 1e3); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

// splitmix64; used to derive independent per-worker seeds from (master, index).
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic normal/uniform generator. std::normal_distribution is
// implementation-defined, so the Gaussian transform is done by hand to keep
// outputs bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  Rng(std::uint64_t master, std::uint64_t index) : eng_(mix_seed(master, index)) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double normal() {  // standard normal, Box-Muller
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * kPi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // CN(0, var): two independent real normals with variance var/2 per part.
  cxd cnormal(double var = 1.0) {
    const double s = std::sqrt(var / 2.0);
    return {s * normal(), s * normal()};
  }

  MatC cnormal_matrix(Eigen::Index rows, Eigen::Index cols, double var = 1.0) {
    MatC m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = cnormal(var);
    return m;
  }

  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dfrc

#endif  // DFRC_COMMON_HPP
