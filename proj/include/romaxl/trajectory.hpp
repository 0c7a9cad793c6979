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
// Kinematic localization of a constant-velocity receiver from polar
// observations: speed estimation from two fixes, position prediction, a
// seeded ground-truth simulator, and NMSE scoring.

#ifndef ROMAXL_TRAJECTORY_HPP
#define ROMAXL_TRAJECTORY_HPP

#include <armadillo>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace romaxl {

/// Azimuth/range fix of the receiver as seen from the base station at `time`.
struct PolarObservation {
  double theta = 0.0;  ///< radians
  double range = 0.0;  ///< meters
  double time = 0.0;   ///< seconds
};

/// Azimuth/range pair without a timestamp.
struct PolarPoint {
  double theta = 0.0;
  double range = 0.0;
};

/// Straight-line pass parameters: x(t) = x0 - speed * t with y and z fixed.
struct TrackParams {
  arma::vec3 initial_center = {0.0, 0.0, 0.0};
  double speed = 0.0;        ///< m/s
  double duration = 0.0;     ///< seconds
  double step = 1.0;         ///< seconds between observations
  double noise_theta = 0.0;  ///< std of additive azimuth noise, radians
  double noise_range = 0.0;  ///< std of additive range noise, meters
  std::uint64_t seed = 0;

  void validate() const {
    if (!(speed >= 0.0)) throw std::invalid_argument("TrackParams: speed must be >= 0");
    if (!(step > 0.0)) throw std::invalid_argument("TrackParams: step must be positive");
    if (!(duration >= 0.0)) throw std::invalid_argument("TrackParams: duration must be >= 0");
    if (noise_theta < 0.0 || noise_range < 0.0)
      throw std::invalid_argument("TrackParams: noise stds must be >= 0");
  }
};

struct TrackSample {
  PolarObservation truth;
  PolarObservation noisy;
};

/// Along-track speed from two fixes: the drop in the x-projection R cos(theta)
/// over the observation interval.
inline double estimate_speed(const PolarObservation& obs0, const PolarObservation& obs1) {
  const double dt = obs1.time - obs0.time;
  if (!(dt > 0.0))
    throw std::invalid_argument("estimate_speed: observations must be in increasing time order");
  return (obs0.range * std::cos(obs0.theta) - obs1.range * std::cos(obs1.theta)) / dt;
}

/// Dead-reckoned fix at time t from an initial fix and an along-track speed.
/// The range follows the law of cosines; theta uses the quadrant-aware
/// arctangent so passes beyond the base station resolve correctly.
inline PolarPoint predict_position(const PolarObservation& obs0, double speed, double t) {
  if (t < 0.0) throw std::invalid_argument("predict_position: t must be >= 0");
  const double along = speed * t;
  const double radicand =
      along * along - 2.0 * along * obs0.range * std::cos(obs0.theta) + obs0.range * obs0.range;
  if (radicand < 0.0)
    throw std::domain_error("predict_position: inconsistent observation/speed inputs");
  const double theta =
      std::atan2(obs0.range * std::sin(obs0.theta), obs0.range * std::cos(obs0.theta) - along);
  return {theta, std::sqrt(radicand)};
}

/// Ground-truth pass plus noisy copies. Azimuth and range noise are
/// independent Gaussians scaled from one standard-normal stream per sample,
/// so a zero std reproduces the truth exactly while keeping the stream
/// aligned across noise settings with the same seed.
inline std::vector<TrackSample> simulate_track(const TrackParams& params) {
  params.validate();
  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> standard_normal(0.0, 1.0);
  const double y0 = params.initial_center(1);
  const auto steps = static_cast<std::size_t>(std::floor(params.duration / params.step + 1e-9));
  std::vector<TrackSample> samples;
  samples.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * params.step;
    const double x = params.initial_center(0) - params.speed * t;
    const double range = std::hypot(x, y0);
    if (!(range > 0.0))
      throw std::invalid_argument("simulate_track: track passes through the base station");
    const double theta = std::atan2(y0, x);
    const double theta_noise = standard_normal(rng);
    const double range_noise = standard_normal(rng);
    TrackSample sample;
    sample.truth = {theta, range, t};
    sample.noisy = {theta + params.noise_theta * theta_noise,
                    range + params.noise_range * range_noise, t};
    samples.push_back(sample);
  }
  return samples;
}

/// Error energy over signal energy, treating each sample as the raw
/// (theta, range) 2-vector. Mixed units by construction; at rail scales the
/// range term dominates (see nmse_cartesian for the metric in meters).
inline double nmse(std::span<const PolarPoint> truth, std::span<const PolarPoint> predicted) {
  if (truth.size() != predicted.size())
    throw std::invalid_argument("nmse: sequence length mismatch");
  if (truth.empty()) throw std::invalid_argument("nmse: empty sequences");
  double err = 0.0, sig = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double dt = truth[i].theta - predicted[i].theta;
    const double dr = truth[i].range - predicted[i].range;
    err += dt * dt + dr * dr;
    sig += truth[i].theta * truth[i].theta + truth[i].range * truth[i].range;
  }
  if (!(sig > 0.0)) throw std::invalid_argument("nmse: all-zero truth sequence");
  return err / sig;
}

/// NMSE on the Cartesian positions implied by the polar samples; a
/// unit-consistent companion to the raw polar metric.
inline double nmse_cartesian(std::span<const PolarPoint> truth,
                             std::span<const PolarPoint> predicted) {
  if (truth.size() != predicted.size())
    throw std::invalid_argument("nmse_cartesian: sequence length mismatch");
  if (truth.empty()) throw std::invalid_argument("nmse_cartesian: empty sequences");
  double err = 0.0, sig = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double xt = truth[i].range * std::cos(truth[i].theta);
    const double yt = truth[i].range * std::sin(truth[i].theta);
    const double xp = predicted[i].range * std::cos(predicted[i].theta);
    const double yp = predicted[i].range * std::sin(predicted[i].theta);
    err += (xt - xp) * (xt - xp) + (yt - yp) * (yt - yp);
    sig += xt * xt + yt * yt;
  }
  if (!(sig > 0.0)) throw std::invalid_argument("nmse_cartesian: all-zero truth sequence");
  return err / sig;
}

}  // namespace romaxl

#endif  // ROMAXL_TRAJECTORY_HPP
