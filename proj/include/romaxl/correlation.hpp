// SPDX-License-Identifier: Apache-2.0
//
// romaxl — rotatable planar-array XL-MIMO LoS channel analysis for
// high-speed rail links
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Second-order (Fresnel) machinery for the spherical-wave channel: the
// separable phase factorization, the spatial-multiplexing gain matrix and its
// closed form, and the parallel-panel spacing that orthogonalizes it.

#ifndef ROMAXL_CORRELATION_HPP
#define ROMAXL_CORRELATION_HPP

#include <complex>
#include <stdexcept>

#include "romaxl/channel.hpp"
#include "romaxl/geometry.hpp"

namespace romaxl {

/// M x M Gram of the spatial-multiplexing factor P; shares its rank with the
/// Gram of the factorized channel.
using GainMatrix = arma::cx_mat;

/// Separable second-order model of the channel: scale * diag(f_rx) * p * diag(f_tx)^H.
/// f_tx and f_rx are unit-modulus per-element phase diagonals; p carries the
/// tx/rx cross terms that produce spatial multiplexing.
struct CorrelationFactors {
  arma::cx_vec f_tx;  ///< length M
  arma::cx_vec f_rx;  ///< length N
  arma::cx_mat p;     ///< N x M, unit-modulus entries
  double scale = 0.0; ///< 1 / (4 pi D)

  arma::cx_mat reconstruct() const {
    arma::cx_mat channel = p;
    channel.each_col() %= f_rx;
    channel.each_row() %= arma::strans(arma::conj(f_tx));
    return scale * channel;
  }
};

/// Phase-coupling coefficients of the gain matrix: eta(a, b) couples rx axis a
/// (0 = horizontal, 1 = vertical) with tx axis b. Two derivations are kept:
/// `fitted` evaluates the gradient of the p-factor phase over element indices
/// (exact by construction; used by the closed-form gain), while `expansion`
/// is the direct per-axis trig expansion, retained as a cross-check. The two
/// agree for parallel panels but drift apart for general poses; callers can
/// inspect max_abs_diff() instead of trusting either blindly.
struct EtaCoefficients {
  arma::mat22 fitted;
  arma::mat22 expansion;

  double max_abs_diff() const { return arma::abs(fitted - expansion).max(); }
};

namespace detail {

/// sin(n x / 2) / sin(x / 2), with the removable singularity replaced by its
/// analytic limit.
inline double dirichlet_ratio(double arg, int n) {
  const double half = 0.5 * arg;
  const double denom = std::sin(half);
  if (std::abs(denom) < 1e-12) return n * std::cos(n * half) / std::cos(half);
  return std::sin(n * half) / denom;
}

inline arma::mat22 eta_fitted(const Scenario& scenario) {
  const double dist = center_distance(scenario);
  const arma::vec3 tx_h = scenario.tx.spacing_h * panel_axis_h(scenario.tx_pose);
  const arma::vec3 tx_v = scenario.tx.spacing_v * panel_axis_v(scenario.tx_pose);
  const arma::vec3 rx_h = scenario.rx.spacing_h * panel_axis_h(scenario.rx_pose);
  const arma::vec3 rx_v = scenario.rx.spacing_v * panel_axis_v(scenario.rx_pose);
  const arma::vec3& center = scenario.rx_center;
  const auto couple = [&](const arma::vec3& rx_axis, const arma::vec3& tx_axis) {
    return (arma::dot(rx_axis, tx_axis) -
            arma::dot(rx_axis, center) * arma::dot(tx_axis, center) / (dist * dist)) /
           dist;
  };
  arma::mat22 eta;
  eta(0, 0) = couple(rx_h, tx_h);
  eta(0, 1) = couple(rx_h, tx_v);
  eta(1, 0) = couple(rx_v, tx_h);
  eta(1, 1) = couple(rx_v, tx_v);
  return eta;
}

inline arma::mat22 eta_expansion(const Scenario& scenario) {
  const double dist = center_distance(scenario);
  const double d2 = dist * dist;
  const double x0 = scenario.rx_center(0);
  const double y0 = scenario.rx_center(1);
  const double z0 = scenario.rx_center(2);
  const double a1 = scenario.tx_pose.alpha, b1 = scenario.tx_pose.beta;
  const double a2 = scenario.rx_pose.alpha, b2 = scenario.rx_pose.beta;
  const double half_pi = arma::datum::pi / 2.0;

  const auto s1 = [&](double p, double q) {
    return d2 * std::cos(p - q) - x0 * x0 * std::cos(p) * std::cos(q);
  };
  const auto s2 = [&](double p, double q) {
    return -d2 * std::sin(p - q) + x0 * x0 * std::sin(p) * std::cos(q) -
           y0 * y0 * std::cos(p) * std::sin(q) - x0 * y0 * std::cos(p + q);
  };
  const auto s3 = [&](double p, double q) {
    return std::sin(p) * std::sin(b1) * std::cos(b2) +
           std::sin(q) * std::cos(b1) * std::sin(b2);
  };
  const auto s4 = [&](double p, double q) {
    return -y0 * y0 * std::cos(p) * std::cos(q) + d2 * std::cos(b1) * std::cos(b2) -
           z0 * z0 * std::cos(b1) * std::cos(b2) + x0 * y0 * std::sin(p + q);
  };

  const double d3 = d2 * dist;
  const double rx_tilt_term = z0 * std::cos(b1) * (x0 * std::cos(a2) + y0 * std::sin(a2));
  arma::mat22 eta;
  eta(0, 0) = scenario.rx.spacing_h * scenario.tx.spacing_h / d3 *
              (s1(a1, a2) + y0 * y0 * std::sin(a1) * std::sin(a2) +
               x0 * y0 * std::sin(a1 - a2));
  eta(0, 1) = scenario.rx.spacing_h * scenario.tx.spacing_v / d3 *
              (std::sin(b1) * s2(a1, a2) - rx_tilt_term);
  eta(1, 0) = scenario.rx.spacing_v * scenario.tx.spacing_h / d3 *
              (std::sin(b1) * s2(a2, a1) - rx_tilt_term);
  eta(1, 1) = scenario.rx.spacing_v * scenario.tx.spacing_v / d3 *
              (std::sin(b1) * std::sin(b2) * (s1(a1 + half_pi, a2 + half_pi) + s4(a1, a2)) +
               x0 * z0 * s3(a1, a2) - y0 * z0 * s3(a1 + half_pi, a2 + half_pi));
  return eta;
}

}  // namespace detail

/// Fresnel approximation of the element-pair distance: the squared separation
/// is expanded about the center distance and the square root truncated at
/// second order, dropping the tx-squared contributions from the quadratic
/// correction. m and n are zero-based tx/rx element IDs.
inline double approx_pair_distance(const Scenario& scenario, int m, int n) {
  scenario.validate();
  if (m < 0 || m >= scenario.tx.count() || n < 0 || n >= scenario.rx.count())
    throw std::out_of_range("approx_pair_distance: element index out of range");
  const arma::mat tx_off = antenna_offsets(scenario.tx, scenario.tx_pose);
  const arma::mat rx_off = antenna_offsets(scenario.rx, scenario.rx_pose);
  const double dist = center_distance(scenario);
  double rho = 0.0, reduced = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    const double c = scenario.rx_center(axis);
    const double dr = rx_off(axis, n);
    const double dt = tx_off(axis, m);
    const double full = 2.0 * c * dr - 2.0 * c * dt + dr * dr - 2.0 * dr * dt + dt * dt;
    rho += full;
    reduced += full - dt * dt;
  }
  const double d2 = dist * dist;
  return dist * (1.0 + rho / (2.0 * d2) - reduced * reduced / (8.0 * d2 * d2));
}

/// Separable phase factorization of the channel at the carrier frequency
/// (Doppler excluded: the factorization is a single-wavenumber model).
inline CorrelationFactors factorized_channel(const Scenario& scenario) {
  scenario.validate();
  const double dist = center_distance(scenario);
  const double k = 2.0 * arma::datum::pi / scenario.wavelength();
  const arma::mat tx_off = antenna_offsets(scenario.tx, scenario.tx_pose);
  const arma::mat rx_off = antenna_offsets(scenario.rx, scenario.rx_pose);
  const arma::vec3& center = scenario.rx_center;
  const double d2 = dist * dist;

  CorrelationFactors factors;
  factors.scale = 1.0 / (4.0 * arma::datum::pi * dist);
  factors.f_tx.set_size(tx_off.n_cols);
  factors.f_rx.set_size(rx_off.n_cols);
  factors.p.set_size(rx_off.n_cols, tx_off.n_cols);

  arma::vec tx_proj(tx_off.n_cols), rx_proj(rx_off.n_cols);
  for (arma::uword m = 0; m < tx_off.n_cols; ++m) {
    const arma::vec3 dt = tx_off.col(m);
    tx_proj(m) = arma::dot(dt, center);
    const double bracket =
        -2.0 * tx_proj(m) + arma::dot(dt, dt) - tx_proj(m) * tx_proj(m) / d2;
    // Stored with the opposite sign so that reconstruct()'s conjugation
    // applies the bracket phase; keeps the tx factor consistent with the
    // Fresnel expansion of the exact phase.
    factors.f_tx(m) = std::polar(1.0, k / (2.0 * dist) * bracket);
  }
  for (arma::uword n = 0; n < rx_off.n_cols; ++n) {
    const arma::vec3 dr = rx_off.col(n);
    rx_proj(n) = arma::dot(dr, center);
    const double bracket = 2.0 * d2 + 2.0 * rx_proj(n) + arma::dot(dr, dr) -
                           rx_proj(n) * rx_proj(n) / d2;
    factors.f_rx(n) = std::polar(1.0, -k / (2.0 * dist) * bracket);
  }
  for (arma::uword m = 0; m < tx_off.n_cols; ++m)
    for (arma::uword n = 0; n < rx_off.n_cols; ++n) {
      const double cross = arma::dot(rx_off.col(n), tx_off.col(m)) -
                           tx_proj(m) * rx_proj(n) / d2;
      factors.p(n, m) = std::polar(1.0, k / dist * cross);
    }
  return factors;
}

/// R = P^H P.
inline GainMatrix gain_matrix(const CorrelationFactors& factors) {
  if (factors.p.n_elem == 0)
    throw std::invalid_argument("gain_matrix: empty factors");
  return factors.p.t() * factors.p;
}

/// Both derivations of the phase-coupling coefficients (see EtaCoefficients).
inline EtaCoefficients eta_coefficients(const Scenario& scenario) {
  scenario.validate();
  return EtaCoefficients{detail::eta_fitted(scenario), detail::eta_expansion(scenario)};
}

/// Closed form of the gain-matrix entry (u, v): the rx sums over both panel
/// axes collapse into a product of two Dirichlet ratios whose arguments are
/// the fitted eta coefficients contracted with the tx index differences.
/// Real-valued because the rx offsets are centered; returned as complex to
/// match the gain-matrix entry type.
inline std::complex<double> gain_entry_closed_form(const Scenario& scenario, int u, int v) {
  scenario.validate();
  const int m_total = scenario.tx.count();
  if (u < 0 || u >= m_total || v < 0 || v >= m_total)
    throw std::out_of_range("gain_entry_closed_form: tx index out of range");
  const arma::mat22 eta = detail::eta_fitted(scenario);
  const double k = 2.0 * arma::datum::pi / scenario.wavelength();
  const int d1 = u % scenario.tx.count_h - v % scenario.tx.count_h;
  const int d2 = u / scenario.tx.count_h - v / scenario.tx.count_h;
  const double horizontal =
      detail::dirichlet_ratio(k * (eta(0, 0) * d1 + eta(0, 1) * d2), scenario.rx.count_h);
  const double vertical =
      detail::dirichlet_ratio(k * (eta(1, 0) * d1 + eta(1, 1) * d2), scenario.rx.count_v);
  return {horizontal * vertical, 0.0};
}

/// Parallel-panel spacing that zeroes the horizontal-vertical coupling kernel:
/// sqrt(|lambda D^3 / (N_H x0 z0)|). Requires all four rotation angles at zero
/// and a geometry with nonzero x0 and z0 (otherwise this orthogonality
/// mechanism is unavailable).
inline double optimal_spacing(const Scenario& scenario) {
  scenario.validate();
  constexpr double angle_tol = 1e-12;
  if (std::abs(scenario.tx_pose.alpha) > angle_tol ||
      std::abs(scenario.tx_pose.beta) > angle_tol ||
      std::abs(scenario.rx_pose.alpha) > angle_tol ||
      std::abs(scenario.rx_pose.beta) > angle_tol)
    throw std::invalid_argument("optimal_spacing: panels must be parallel (all angles zero)");
  const double x0 = scenario.rx_center(0);
  const double z0 = scenario.rx_center(2);
  if (x0 == 0.0 || z0 == 0.0)
    throw std::invalid_argument("optimal_spacing: requires nonzero x0 and z0");
  const double dist = center_distance(scenario);
  return std::sqrt(std::abs(scenario.wavelength() * dist * dist * dist /
                            (scenario.rx.count_h * x0 * z0)));
}

/// Number of singular values above tol times the largest; 0 for a zero matrix.
inline int numerical_rank(const arma::cx_mat& matrix, double tol = kDefaultRankTol) {
  if (!matrix.is_finite())
    throw std::invalid_argument("numerical_rank: non-finite matrix");
  const arma::vec singular_values = arma::svd(matrix);
  if (singular_values.n_elem == 0 || !(singular_values.max() > 0.0)) return 0;
  return static_cast<int>(
      arma::sum(singular_values > tol * singular_values.max()));
}

}  // namespace romaxl

#endif  // ROMAXL_CORRELATION_HPP
