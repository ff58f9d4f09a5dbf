// Steering vectors, transmit beampatterns, beampattern MSE, radar mutual
// information, Fisher/CRB evaluation and the Friis path gain.
#ifndef DFRC_RADAR_HPP
#define DFRC_RADAR_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfrc/common.hpp"

namespace dfrc {

// Array geometry, angle grid and target parameters for the sensing side.
struct RadarSpec {
  VecR angle_grid_deg;     // strictly increasing, within [-90, 90]
  double target_angle = 0.0;  // degrees, must lie on the grid
  VecR desired_pattern;    // P_d(theta_m) >= 0 per grid point
  double target_range = 50.0;     // m
  double target_speed = 3.0;      // m/s
  double carrier_freq = 2e9;      // Hz
  double rx_noise_power = 1e-18;  // sigma_r^2, linear W
  double beam_halfwidth = 8.0;    // degrees
  bool two_way_path = false;      // Friis applied twice when true

  Eigen::Index grid_size() const { return angle_grid_deg.size(); }
};

// a_t(theta) = [1, e^{j2 pi d sin t}, ..., e^{j2 pi (n-1) d sin t}]
inline VecC steering_vector(double theta_deg, int n, double spacing) {
  VecC a(n);
  const double phase = 2.0 * kPi * spacing * std::sin(deg_to_rad(theta_deg));
  for (int i = 0; i < n; ++i) a(i) = std::polar(1.0, phase * i);
  return a;
}

// P_t(theta_m) = a^H(theta_m) P P^H a(theta_m), clipped at 0 for roundoff.
inline VecR transmit_beampattern(const MatC& precoder, const RadarSpec& spec,
                                 double spacing) {
  const int n = static_cast<int>(precoder.rows());
  VecR gains(spec.grid_size());
  for (Eigen::Index m = 0; m < spec.grid_size(); ++m) {
    const VecC a = steering_vector(spec.angle_grid_deg(m), n, spacing);
    const double g = (a.adjoint() * precoder).squaredNorm();
    gains(m) = g < 0.0 ? 0.0 : g;
  }
  return gains;
}

inline double beampattern_gain_at(const MatC& precoder, double theta_deg,
                                  double spacing) {
  const VecC a = steering_vector(theta_deg, static_cast<int>(precoder.rows()), spacing);
  return (a.adjoint() * precoder).squaredNorm();
}

// sum_m |alpha P_d(theta_m) - P_t(theta_m)|^2
inline double beampattern_mse(const MatC& precoder, double alpha,
                              const RadarSpec& spec, double spacing) {
  const VecR pt = transmit_beampattern(precoder, spec, spacing);
  return (alpha * spec.desired_pattern - pt).squaredNorm();
}

// Default rectangular profile: 1 within beam_halfwidth of the target, else 0.
inline VecR desired_pattern_rect(const VecR& grid_deg, double target_angle,
                                 double halfwidth) {
  VecR pd = VecR::Zero(grid_deg.size());
  for (Eigen::Index m = 0; m < grid_deg.size(); ++m)
    if (std::abs(grid_deg(m) - target_angle) <= halfwidth + 1e-12) pd(m) = 1.0;
  return pd;
}

// One-way free-space amplitude-squared gain (c / (4 pi R f_c))^2.
inline double friis_gain(double range_m, double f_c) {
  if (range_m <= 0.0) throw std::invalid_argument("friis_gain: range must be positive");
  const double g = kSpeedOfLight / (4.0 * kPi * range_m * f_c);
  return g * g;
}

inline double path_gain(const RadarSpec& spec) {
  const double g = friis_gain(spec.target_range, spec.carrier_freq);
  return spec.two_way_path ? g * g : g;
}

// RMI via the rank-1 identity: log2 det(I + |h0|^2 a P_t(t0) a^H / s_r^2)
// = log2(1 + |h0|^2 N P_t(t0) / s_r^2).
inline double radar_mutual_information(const MatC& precoder, const RadarSpec& spec,
                                       double spacing) {
  const int n = static_cast<int>(precoder.rows());
  const double pt0 = beampattern_gain_at(precoder, spec.target_angle, spacing);
  const double h0_sq = path_gain(spec);
  return std::log2(1.0 + h0_sq * n * pt0 / spec.rx_noise_power);
}

struct SingularFisher : std::runtime_error {
  explicit SingularFisher(const std::string& what) : std::runtime_error(what) {}
};

// 4x4 real Fisher matrix for theta = [Re h0, Im h0, tau0, v0]; each block of
// the textbook matrix form collapses to the scalar N * P_t(theta_0).
inline Eigen::Matrix4d fisher_matrix(double pt_at_target, cxd h0, double f_c,
                                     double sigma_r) {
  const double f1 = pt_at_target;  // caller folds N into pt_at_target
  const cxd jw = cxd(0.0, 2.0 * kPi * f_c);
  const cxd f2 = -jw * h0 * f1;
  const cxd f3 = jw / kSpeedOfLight * h0 * f1;
  const cxd w2 = (2.0 * kPi * f_c * h0) * (2.0 * kPi * f_c * h0);
  const cxd f4 = -w2 * f1;
  const cxd f5 = w2 / kSpeedOfLight * f1;
  const cxd f6 = -w2 / (kSpeedOfLight * kSpeedOfLight) * f1;
  Eigen::Matrix4d f;
  f << f1, 0.0, f2.real(), f3.real(),
       0.0, f1, f2.imag(), f3.imag(),
       f2.real(), f2.imag(), f4.real(), f5.real(),
       f3.real(), f3.imag(), f5.real(), f6.real();
  return (2.0 / sigma_r) * f;
}

// Total CRB ||F^+||_F. The 4x4 Fisher matrix above is structurally rank-3:
// F_3 = -F_2/c, F_5 = -F_4/c and F_6 = -F_5/c make the delay and velocity
// rows exact multiples of each other (single-snapshot range/Doppler coupling),
// so F factors as F = A M A^T with A = [e1, e2, e3 - e4/c] and the 3x3 core
//   M = (2/sigma_r) [[F1, 0, Re F2], [0, F1, Im F2], [Re F2, Im F2, Re F4]].
// The CRB is taken on the identifiable subspace via the pseudoinverse
// F^+ = A (A^T A)^{-1} M^{-1} (A^T A)^{-1} A^T; M is inverted on a
// Jacobi-equilibrated copy (it mixes units), which is where the
// singularity test applies.
inline double crb_total(const MatC& precoder, const RadarSpec& spec, double spacing) {
  const int n = static_cast<int>(precoder.rows());
  const double pt0 = n * beampattern_gain_at(precoder, spec.target_angle, spacing);
  const cxd h0 = std::sqrt(path_gain(spec));
  if (pt0 <= 0.0 || std::abs(h0) == 0.0)
    throw SingularFisher("crb_total: Fisher matrix singular (zero target gain)");

  const double f1 = pt0;
  const cxd f2 = -cxd(0.0, 2.0 * kPi * spec.carrier_freq) * h0 * f1;
  const cxd w2 = (2.0 * kPi * spec.carrier_freq * h0) *
                 (2.0 * kPi * spec.carrier_freq * h0);
  const cxd f4 = -w2 * f1;
  Eigen::Matrix3d m;
  m << f1, 0.0, f2.real(),
       0.0, f1, f2.imag(),
       f2.real(), f2.imag(), f4.real();
  m *= 2.0 / std::sqrt(spec.rx_noise_power);

  Eigen::Vector3d d;
  for (int i = 0; i < 3; ++i) {
    const double rn = m.row(i).norm();
    if (!(rn > 0.0)) throw SingularFisher("crb_total: zero Fisher row");
    d(i) = 1.0 / std::sqrt(rn);
  }
  const Eigen::Matrix3d ms = d.asDiagonal() * m * d.asDiagonal();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(ms, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double cond = svd.singularValues()(0) / svd.singularValues()(2);
  if (!std::isfinite(cond) || cond > 1e12)
    throw SingularFisher("crb_total: Fisher matrix numerically singular, cond=" +
                         std::to_string(cond));
  const Eigen::Matrix3d minv = d.asDiagonal() *
                               svd.solve(Eigen::Matrix3d::Identity()) *
                               d.asDiagonal();

  const double c = kSpeedOfLight;
  Eigen::Matrix<double, 4, 3> a;
  a << 1.0, 0.0, 0.0,
       0.0, 1.0, 0.0,
       0.0, 0.0, 1.0,
       0.0, 0.0, -1.0 / c;
  const Eigen::Vector3d ginv(1.0, 1.0, 1.0 / (1.0 + 1.0 / (c * c)));
  const Eigen::Matrix3d w = ginv.asDiagonal() * minv * ginv.asDiagonal();
  const Eigen::Matrix4d pinv = a * w * a.transpose();
  return pinv.norm();
}

// Two-column CSV rows (angle_deg, gain_linear) for plotting.
inline std::vector<std::pair<double, double>> beampattern_csv_rows(
    const MatC& precoder, const RadarSpec& spec, double spacing) {
  const VecR g = transmit_beampattern(precoder, spec, spacing);
  std::vector<std::pair<double, double>> rows;
  rows.reserve(static_cast<std::size_t>(g.size()));
  for (Eigen::Index m = 0; m < g.size(); ++m)
    rows.emplace_back(spec.angle_grid_deg(m), g(m));
  return rows;
}

}  // namespace dfrc

#endif  // DFRC_RADAR_HPP
