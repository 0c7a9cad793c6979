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

#ifndef ROMAXL_CHANNEL_HPP
#define ROMAXL_CHANNEL_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

#include "romaxl/geometry.hpp"

namespace romaxl {

/// N x M line-of-sight channel; row n indexes rx elements, column m tx elements.
using ChannelMatrix = arma::cx_mat;

/// M x M Hermitian PSD correlation product H^H H.
using GramMatrix = arma::cx_mat;

inline constexpr double kDefaultRankTol = 1e-6;

/// Equal-power-per-stream budget; snr_linear is total transmit power over
/// noise power.
struct PowerPolicy {
  double snr_linear = 1.0;

  static PowerPolicy from_snr_db(double snr_db) {
    return PowerPolicy{std::pow(10.0, snr_db / 10.0)};
  }

  void validate() const {
    if (!(snr_linear > 0.0))
      throw std::invalid_argument("PowerPolicy: snr_linear must be positive");
  }
};

/// Doppler offset seen on the tx->rx path for a receiver moving at `velocity`:
/// (f_c/c) * ((rx - tx) . v) / |rx - tx|.
inline double doppler_frequency(const arma::vec3& tx_pos, const arma::vec3& rx_pos,
                                const arma::vec3& velocity, double carrier_hz) {
  const arma::vec3 separation = rx_pos - tx_pos;
  const double distance = arma::norm(separation);
  if (!(distance > 0.0))
    throw std::invalid_argument("doppler_frequency: coincident tx/rx positions");
  return carrier_hz / kSpeedOfLight * arma::dot(separation, velocity) / distance;
}

/// Spherical-wave LoS channel: entry (n, m) = exp(-j k d) / (4 pi d) with the
/// exact element-pair distance d and k = 2 pi f / c. The frequency is
/// carrier_hz plus the per-pair Doppler offset unless the scenario freezes it.
inline ChannelMatrix exact_channel(const Scenario& scenario) {
  scenario.validate();
  const arma::mat tx_pos = antenna_positions(scenario, Side::tx);
  const arma::mat rx_pos = antenna_positions(scenario, Side::rx);
  const arma::uword n_rx = rx_pos.n_cols;
  const arma::uword n_tx = tx_pos.n_cols;
  ChannelMatrix channel(n_rx, n_tx);
  for (arma::uword m = 0; m < n_tx; ++m) {
    for (arma::uword n = 0; n < n_rx; ++n) {
      const arma::vec3 separation = rx_pos.col(n) - tx_pos.col(m);
      const double distance = arma::norm(separation);
      if (!(distance > 0.0))
        throw std::invalid_argument("exact_channel: coincident element pair");
      double f = scenario.carrier_hz;
      if (!scenario.freeze_doppler)
        f += scenario.carrier_hz / kSpeedOfLight *
             arma::dot(separation, scenario.velocity) / distance;
      const double phase = -2.0 * arma::datum::pi * f / kSpeedOfLight * distance;
      channel(n, m) = std::polar(1.0 / (4.0 * arma::datum::pi * distance), phase);
    }
  }
  return channel;
}

/// G = H^H H.
inline GramMatrix gram(const ChannelMatrix& channel) {
  if (!channel.is_finite()) throw std::invalid_argument("gram: non-finite channel");
  return channel.t() * channel;
}

/// Capacity with equal power split over the retained streams: eigenvalues of G
/// above rank_tol times the largest define the numerical rank R, each stream
/// gets snr_linear / R, and the result is sum log2(1 + snr/R * lambda_i).
/// A zero (or negative-semidefinite) G carries no streams and returns 0.
inline double capacity(const GramMatrix& gram_matrix, const PowerPolicy& policy,
                       double rank_tol = kDefaultRankTol) {
  policy.validate();
  if (!gram_matrix.is_square())
    throw std::invalid_argument("capacity: gram matrix must be square");
  arma::vec eigenvalues;
  if (!arma::eig_sym(eigenvalues, gram_matrix))
    throw std::runtime_error("capacity: eigendecomposition failed");
  const double largest = eigenvalues.max();
  if (!(largest > 0.0)) return 0.0;
  const arma::vec retained = eigenvalues(arma::find(eigenvalues > rank_tol * largest));
  const double per_stream = policy.snr_linear / static_cast<double>(retained.n_elem);
  double bits = 0.0;
  for (const double lambda : retained) bits += std::log2(1.0 + per_stream * lambda);
  return bits;
}

/// Largest off-diagonal magnitude of G relative to the largest diagonal entry;
/// zero exactly when the channel columns are orthogonal.
inline double orthogonality_defect(const GramMatrix& gram_matrix) {
  if (!gram_matrix.is_square() || gram_matrix.n_rows == 0)
    throw std::invalid_argument("orthogonality_defect: gram matrix must be square");
  const arma::mat magnitudes = arma::abs(gram_matrix);
  const double diag_max = magnitudes.diag().max();
  if (!(diag_max > 0.0))
    throw std::invalid_argument("orthogonality_defect: zero gram matrix");
  double off_max = 0.0;
  for (arma::uword v = 0; v < magnitudes.n_cols; ++v)
    for (arma::uword u = 0; u < magnitudes.n_rows; ++u)
      if (u != v && magnitudes(u, v) > off_max) off_max = magnitudes(u, v);
  return off_max / diag_max;
}

}  // namespace romaxl

#endif  // ROMAXL_CHANNEL_HPP
