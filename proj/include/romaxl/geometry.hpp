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

#ifndef ROMAXL_GEOMETRY_HPP
#define ROMAXL_GEOMETRY_HPP

#include <armadillo>
#include <cmath>
#include <stdexcept>
#include <string>

namespace romaxl {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Uniform planar array: element counts and spacings along the two panel axes.
struct ArrayConfig {
  int count_h = 1;        ///< elements along the horizontal panel axis
  int count_v = 1;        ///< elements along the vertical panel axis
  double spacing_h = 0.5; ///< meters between adjacent horizontal elements
  double spacing_v = 0.5; ///< meters between adjacent vertical elements

  int count() const { return count_h * count_v; }

  void validate() const {
    if (count_h < 1 || count_v < 1)
      throw std::invalid_argument("ArrayConfig: element counts must be >= 1");
    if (!(spacing_h > 0.0) || !(spacing_v > 0.0))
      throw std::invalid_argument("ArrayConfig: spacings must be positive");
  }
};

/// Panel orientation: rotation about the x-axis (alpha) and tilt relative to
/// the z-axis (beta).
struct PanelPose {
  double alpha = 0.0;  ///< radians, in [-pi/2, pi/2]
  double beta = 0.0;   ///< radians, in [0, pi/2]

  void validate() const {
    constexpr double half_pi = 1.5707963267948966;
    if (!(alpha >= -half_pi && alpha <= half_pi))
      throw std::invalid_argument("PanelPose: alpha out of [-pi/2, pi/2]");
    if (!(beta >= 0.0 && beta <= half_pi))
      throw std::invalid_argument("PanelPose: beta out of [0, pi/2]");
  }
};

/// Full transceiver geometry. The transmit panel is centered at the origin,
/// the receive panel at rx_center; velocity is the receiver's (train along x).
struct Scenario {
  ArrayConfig tx{};
  ArrayConfig rx{};
  PanelPose tx_pose{};
  PanelPose rx_pose{};
  arma::vec3 rx_center = {0.0, 0.0, 0.0};
  arma::vec3 velocity = {0.0, 0.0, 0.0};
  double carrier_hz = 20e9;
  bool freeze_doppler = false;  ///< when true, every entry uses f = carrier_hz

  double wavelength() const { return kSpeedOfLight / carrier_hz; }

  void validate() const {
    tx.validate();
    rx.validate();
    tx_pose.validate();
    rx_pose.validate();
    if (!(arma::norm(rx_center) > 0.0))
      throw std::invalid_argument("Scenario: rx_center must have nonzero norm");
    if (!(carrier_hz > 0.0))
      throw std::invalid_argument("Scenario: carrier_hz must be positive");
  }
};

enum class Side { tx, rx };

/// Unit vector of the panel's horizontal axis.
inline arma::vec3 panel_axis_h(const PanelPose& pose) {
  return {std::cos(pose.alpha), std::sin(pose.alpha), 0.0};
}

/// Unit vector of the panel's vertical axis.
inline arma::vec3 panel_axis_v(const PanelPose& pose) {
  return {-std::sin(pose.beta) * std::sin(pose.alpha),
          std::sin(pose.beta) * std::cos(pose.alpha), std::cos(pose.beta)};
}

/// Distance between the two panel centers.
inline double center_distance(const Scenario& scenario) {
  const double d = arma::norm(scenario.rx_center);
  if (!(d > 0.0))
    throw std::invalid_argument("center_distance: co-located panel centers");
  return d;
}

/// Offsets of every element relative to the panel center, as columns of a
/// 3 x count matrix. Element IDs are zero-based and row-major: element m has
/// horizontal index m % count_h and vertical index m / count_h. The offsets
/// sum to zero (centered array).
inline arma::mat antenna_offsets(const ArrayConfig& config, const PanelPose& pose) {
  config.validate();
  pose.validate();
  const arma::vec3 axis_h = panel_axis_h(pose);
  const arma::vec3 axis_v = panel_axis_v(pose);
  const double mid_h = 0.5 * (config.count_h - 1);
  const double mid_v = 0.5 * (config.count_v - 1);
  arma::mat offsets(3, config.count());
  for (int m = 0; m < config.count(); ++m) {
    const int m1 = m % config.count_h;
    const int m2 = m / config.count_h;
    offsets.col(m) = (m1 - mid_h) * config.spacing_h * axis_h +
                     (m2 - mid_v) * config.spacing_v * axis_v;
  }
  return offsets;
}

/// Absolute element positions (3 x count). The tx panel is centered at the
/// origin; rx positions are rx_center plus the rotated offsets.
inline arma::mat antenna_positions(const Scenario& scenario, Side side) {
  scenario.validate();
  if (side == Side::tx) return antenna_offsets(scenario.tx, scenario.tx_pose);
  arma::mat positions = antenna_offsets(scenario.rx, scenario.rx_pose);
  positions.each_col() += scenario.rx_center;
  return positions;
}

}  // namespace romaxl

#endif  // ROMAXL_GEOMETRY_HPP
