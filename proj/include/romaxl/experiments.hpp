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
// Experiment runners behind the `roma` CLI: spacing sweep, per-position
// rotation optimization against the fixed baseline, localization accuracy,
// and a single rotation-optimization trace. All runners emit deterministic
// CSV for a given (config, seed).

#ifndef ROMAXL_EXPERIMENTS_HPP
#define ROMAXL_EXPERIMENTS_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "romaxl/optimizer.hpp"
#include "romaxl/trajectory.hpp"
#include "romaxl/version.hpp"

namespace romaxl {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat key = value experiment configuration. Unset sweep fields fall back to
/// per-mode defaults (spacing: d/lambda in [1, 40] over 40 points; position:
/// x in [10, 200] m over 7 points).
struct ExperimentConfig {
  // scenario
  double carrier_hz = 20e9;
  double snr_db = 15.0;
  double speed_mps = 350.0 / 3.6;
  double x0 = 30.0;
  double y0 = 4.0;
  double z0 = -10.0;
  int tx_count_h = 8, tx_count_v = 8;
  int rx_count_h = 8, rx_count_v = 8;
  double spacing_over_lambda = 19.0;
  double rank_tol = kDefaultRankTol;
  bool freeze_doppler = false;
  // differential evolution
  int de_population = 40;
  int de_generations = 100;
  double de_f0 = 0.5;
  double de_cr = 0.2;
  // localization
  double noise_theta = 0.1;   ///< proxy numerator (rad) or fixed std, per noise_model
  double noise_range = 100.0; ///< proxy numerator (m) or fixed std
  std::string noise_model = "proxy";  ///< "proxy" (std ~ 1/count_h) or "fixed"
  std::vector<int> count_list = {16, 32, 64, 128};
  int trials = 100;
  double track_x0 = 2000.0;
  double track_step_s = 1.0;
  // sweep (meaning depends on the mode)
  std::optional<double> sweep_start;
  std::optional<double> sweep_stop;
  std::optional<int> sweep_steps;
  std::uint64_t seed = 1;

  double wavelength() const { return kSpeedOfLight / carrier_hz; }

  PowerPolicy policy() const { return PowerPolicy::from_snr_db(snr_db); }

  /// Scenario at the configured geometry with parallel (zero-angle) panels.
  Scenario scenario() const {
    const double spacing = spacing_over_lambda * wavelength();
    Scenario s;
    s.tx = {tx_count_h, tx_count_v, spacing, spacing};
    s.rx = {rx_count_h, rx_count_v, spacing, spacing};
    s.rx_center = {x0, y0, z0};
    s.velocity = {speed_mps, 0.0, 0.0};
    s.carrier_hz = carrier_hz;
    s.freeze_doppler = freeze_doppler;
    return s;
  }

  void validate() const {
    if (!(carrier_hz > 0.0)) throw ConfigError("config: carrier_hz must be positive");
    if (!(spacing_over_lambda > 0.0))
      throw ConfigError("config: spacing_over_lambda must be positive");
    if (tx_count_h < 1 || tx_count_v < 1 || rx_count_h < 1 || rx_count_v < 1)
      throw ConfigError("config: antenna counts must be >= 1");
    if (!(speed_mps >= 0.0)) throw ConfigError("config: speed_mps must be >= 0");
    if (!(rank_tol > 0.0)) throw ConfigError("config: rank_tol must be positive");
    if (de_population < 4) throw ConfigError("config: de_population must be >= 4");
    if (de_generations < 1) throw ConfigError("config: de_generations must be >= 1");
    if (!(de_f0 > 0.0)) throw ConfigError("config: de_f0 must be positive");
    if (!(de_cr >= 0.0 && de_cr <= 1.0)) throw ConfigError("config: de_cr must be in [0, 1]");
    if (noise_theta < 0.0 || noise_range < 0.0)
      throw ConfigError("config: noise stds must be >= 0");
    if (noise_model != "proxy" && noise_model != "fixed")
      throw ConfigError("config: noise_model must be 'proxy' or 'fixed'");
    if (count_list.empty()) throw ConfigError("config: count_list must not be empty");
    for (int c : count_list)
      if (c < 1) throw ConfigError("config: count_list entries must be >= 1");
    if (trials < 1) throw ConfigError("config: trials must be >= 1");
    if (!(track_x0 > 0.0)) throw ConfigError("config: track_x0 must be positive");
    if (!(track_step_s > 0.0)) throw ConfigError("config: track_step_s must be positive");
    if (sweep_steps && *sweep_steps < 1) throw ConfigError("config: sweep_steps must be >= 1");
    if (sweep_start && sweep_stop && !(*sweep_stop >= *sweep_start))
      throw ConfigError("config: sweep_stop must be >= sweep_start");
  }

  static ExperimentConfig from_text(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  /// Stable serialization of every effective field; hashed into CSV preambles.
  std::string canonical() const;
};

namespace detail {

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (const unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

inline std::string fmt_num(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

inline std::string trimmed(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

inline double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for " + key + ": '" + value + "'");
  }
  if (used != value.size())
    throw ConfigError("config: bad numeric value for " + key + ": '" + value + "'");
  return out;
}

inline int parse_int(const std::string& key, const std::string& value) {
  const double d = parse_double(key, value);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d)
    throw ConfigError("config: expected integer for " + key + ": '" + value + "'");
  return i;
}

inline void write_preamble(std::ostream& out, const ExperimentConfig& cfg,
                           std::string_view mode) {
  char hash[24];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a64(cfg.canonical())));
  out << "# romaxl " << kVersion << " mode=" << mode << " seed=" << cfg.seed
      << " config_hash=0x" << hash << "\n";
}

/// Capacity with the free-space path gain at the center distance removed, so
/// the configured SNR is the per-element received SNR. Keeps sweep and
/// optimizer capacities in the multiplexing-limited regime the configured SNR
/// describes instead of being swamped by absolute path loss.
inline double normalized_exact_capacity(const Scenario& scenario, const PowerPolicy& policy,
                                        double rank_tol) {
  const double gain = 4.0 * arma::datum::pi * center_distance(scenario);
  return capacity(gain * gain * gram(exact_channel(scenario)), policy, rank_tol);
}

inline double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

inline std::string panel_label(const ExperimentConfig& cfg) {
  std::ostringstream label;
  label << cfg.tx_count_h << "x" << cfg.tx_count_v;
  if (cfg.rx_count_h != cfg.tx_count_h || cfg.rx_count_v != cfg.tx_count_v)
    label << "-" << cfg.rx_count_h << "x" << cfg.rx_count_v;
  return label.str();
}

}  // namespace detail

inline ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = detail::trimmed(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value on line " + std::to_string(line_no));
    const std::string key = detail::trimmed(line.substr(0, eq));
    const std::string value = detail::trimmed(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config: empty key or value on line " + std::to_string(line_no));

    if (key == "carrier_hz") cfg.carrier_hz = detail::parse_double(key, value);
    else if (key == "snr_db") cfg.snr_db = detail::parse_double(key, value);
    else if (key == "speed_mps") cfg.speed_mps = detail::parse_double(key, value);
    else if (key == "x0") cfg.x0 = detail::parse_double(key, value);
    else if (key == "y0") cfg.y0 = detail::parse_double(key, value);
    else if (key == "z0") cfg.z0 = detail::parse_double(key, value);
    else if (key == "tx_count_h") cfg.tx_count_h = detail::parse_int(key, value);
    else if (key == "tx_count_v") cfg.tx_count_v = detail::parse_int(key, value);
    else if (key == "rx_count_h") cfg.rx_count_h = detail::parse_int(key, value);
    else if (key == "rx_count_v") cfg.rx_count_v = detail::parse_int(key, value);
    else if (key == "spacing_over_lambda") cfg.spacing_over_lambda = detail::parse_double(key, value);
    else if (key == "rank_tol") cfg.rank_tol = detail::parse_double(key, value);
    else if (key == "freeze_doppler") cfg.freeze_doppler = detail::parse_int(key, value) != 0;
    else if (key == "de_population") cfg.de_population = detail::parse_int(key, value);
    else if (key == "de_generations") cfg.de_generations = detail::parse_int(key, value);
    else if (key == "de_f0") cfg.de_f0 = detail::parse_double(key, value);
    else if (key == "de_cr") cfg.de_cr = detail::parse_double(key, value);
    else if (key == "noise_theta") cfg.noise_theta = detail::parse_double(key, value);
    else if (key == "noise_range") cfg.noise_range = detail::parse_double(key, value);
    else if (key == "noise_model") cfg.noise_model = value;
    else if (key == "count_list") {
      cfg.count_list.clear();
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ','))
        cfg.count_list.push_back(detail::parse_int(key, detail::trimmed(item)));
    } else if (key == "trials") cfg.trials = detail::parse_int(key, value);
    else if (key == "track_x0") cfg.track_x0 = detail::parse_double(key, value);
    else if (key == "track_step_s") cfg.track_step_s = detail::parse_double(key, value);
    else if (key == "sweep_start") cfg.sweep_start = detail::parse_double(key, value);
    else if (key == "sweep_stop") cfg.sweep_stop = detail::parse_double(key, value);
    else if (key == "sweep_steps") cfg.sweep_steps = detail::parse_int(key, value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(detail::parse_double(key, value));
    else throw ConfigError("config: unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return from_text(text.str());
}

inline std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out << "carrier_hz=" << detail::fmt_num(carrier_hz) << "\nsnr_db=" << detail::fmt_num(snr_db)
      << "\nspeed_mps=" << detail::fmt_num(speed_mps) << "\nx0=" << detail::fmt_num(x0)
      << "\ny0=" << detail::fmt_num(y0) << "\nz0=" << detail::fmt_num(z0)
      << "\ntx_count_h=" << tx_count_h << "\ntx_count_v=" << tx_count_v
      << "\nrx_count_h=" << rx_count_h << "\nrx_count_v=" << rx_count_v
      << "\nspacing_over_lambda=" << detail::fmt_num(spacing_over_lambda)
      << "\nrank_tol=" << detail::fmt_num(rank_tol)
      << "\nfreeze_doppler=" << (freeze_doppler ? 1 : 0)
      << "\nde_population=" << de_population << "\nde_generations=" << de_generations
      << "\nde_f0=" << detail::fmt_num(de_f0) << "\nde_cr=" << detail::fmt_num(de_cr)
      << "\nnoise_theta=" << detail::fmt_num(noise_theta)
      << "\nnoise_range=" << detail::fmt_num(noise_range) << "\nnoise_model=" << noise_model
      << "\ncount_list=";
  for (std::size_t i = 0; i < count_list.size(); ++i)
    out << (i ? "," : "") << count_list[i];
  out << "\ntrials=" << trials << "\ntrack_x0=" << detail::fmt_num(track_x0)
      << "\ntrack_step_s=" << detail::fmt_num(track_step_s);
  if (sweep_start) out << "\nsweep_start=" << detail::fmt_num(*sweep_start);
  if (sweep_stop) out << "\nsweep_stop=" << detail::fmt_num(*sweep_stop);
  if (sweep_steps) out << "\nsweep_steps=" << *sweep_steps;
  out << "\nseed=" << seed << "\n";
  return out.str();
}

/// Capacity versus normalized spacing for parallel panels, with the
/// closed-form optimal spacing recorded alongside every row.
inline void run_spacing_sweep(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  const double start = cfg.sweep_start.value_or(1.0);
  const double stop = cfg.sweep_stop.value_or(40.0);
  const int steps = cfg.sweep_steps.value_or(40);
  if (!(stop >= start) || steps < 1) throw ConfigError("spacing-sweep: invalid sweep range");

  Scenario base = cfg.scenario();
  const double d_star = optimal_spacing(base);
  const double lambda = cfg.wavelength();
  const PowerPolicy policy = cfg.policy();

  detail::write_preamble(out, cfg, "spacing-sweep");
  out << "d_over_lambda,capacity_bps_hz,d_star_over_lambda,panel,distance_m,carrier_hz\n";
  const std::string panel = detail::panel_label(cfg);
  const double distance = center_distance(base);
  for (int i = 0; i < steps; ++i) {
    const double dol = steps == 1 ? start : start + (stop - start) * i / (steps - 1);
    Scenario s = base;
    const double spacing = dol * lambda;
    s.tx.spacing_h = s.tx.spacing_v = spacing;
    s.rx.spacing_h = s.rx.spacing_v = spacing;
    const double cap = detail::normalized_exact_capacity(s, policy, cfg.rank_tol);
    out << detail::fmt_num(dol) << ',' << detail::fmt_num(cap) << ','
        << detail::fmt_num(d_star / lambda) << ',' << panel << ','
        << detail::fmt_num(distance) << ',' << detail::fmt_num(cfg.carrier_hz) << "\n";
  }
}

/// Capacity versus train x-position for the fixed baseline, receiver-side
/// rotation, and two-sided rotation. Each optimized policy reports the best
/// configuration found, measured by exact-channel capacity, among the
/// optimizer result and the configurations feasible for the weaker policies;
/// the feasible sets are nested, so the reported capacities are ordered.
inline void run_position_sweep(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  const double start = cfg.sweep_start.value_or(10.0);
  const double stop = cfg.sweep_stop.value_or(200.0);
  const int steps = cfg.sweep_steps.value_or(7);
  if (!(stop >= start) || steps < 1) throw ConfigError("position-sweep: invalid sweep range");

  const PowerPolicy policy = cfg.policy();
  constexpr double half_pi = 1.5707963267948966;
  const std::array<double, 2> alpha_bounds = {-half_pi, half_pi};
  const std::array<double, 2> beta_bounds = {0.0, half_pi};

  detail::write_preamble(out, cfg, "position-sweep");
  out << "x_m,policy,capacity_bps_hz,normalized_capacity\n";

  for (int i = 0; i < steps; ++i) {
    const double x = steps == 1 ? start : start + (stop - start) * i / (steps - 1);
    Scenario site = cfg.scenario();
    site.rx_center = {x, cfg.y0, cfg.z0};

    const auto capacity_at = [&](const std::array<double, 4>& angles) {
      Scenario posed = site;
      posed.tx_pose = {angles[0], angles[1]};
      posed.rx_pose = {angles[2], angles[3]};
      return detail::normalized_exact_capacity(posed, policy, cfg.rank_tol);
    };

    const std::array<double, 4> zeros{0.0, 0.0, 0.0, 0.0};
    const double fpa_cap = capacity_at(zeros);

    DEConfig rx_only;
    rx_only.population = cfg.de_population;
    rx_only.dims = 2;
    rx_only.generations = cfg.de_generations;
    rx_only.f0 = cfg.de_f0;
    rx_only.cr = cfg.de_cr;
    rx_only.seed = cfg.seed + 1000003ULL * static_cast<std::uint64_t>(i) + 1;
    rx_only.bounds = {alpha_bounds, beta_bounds};
    const DEResult one = de_optimize(
        [&](const std::vector<double>& v) {
          return rank_objective({0.0, 0.0, v[0], v[1]}, site, policy, cfg.rank_tol);
        },
        rx_only);
    std::array<double, 4> one_angles = {0.0, 0.0, one.best[0], one.best[1]};
    double one_cap = capacity_at(one_angles);
    if (fpa_cap > one_cap) {
      one_angles = zeros;
      one_cap = fpa_cap;
    }

    DEConfig both_sides = rx_only;
    both_sides.dims = 4;
    both_sides.seed = cfg.seed + 1000003ULL * static_cast<std::uint64_t>(i) + 2;
    both_sides.bounds = {alpha_bounds, beta_bounds, alpha_bounds, beta_bounds};
    const DEResult both = de_optimize(
        [&](const std::vector<double>& v) {
          return rank_objective({v[0], v[1], v[2], v[3]}, site, policy, cfg.rank_tol);
        },
        both_sides);
    const std::array<double, 4> both_de{both.best[0], both.best[1], both.best[2], both.best[3]};
    double both_cap = capacity_at(both_de);
    if (one_cap > both_cap) both_cap = one_cap;

    out << detail::fmt_num(x) << ",fpa," << detail::fmt_num(fpa_cap) << ','
        << detail::fmt_num(1.0) << "\n";
    out << detail::fmt_num(x) << ",one-sided," << detail::fmt_num(one_cap) << ','
        << detail::fmt_num(one_cap / fpa_cap) << "\n";
    out << detail::fmt_num(x) << ",both-sided," << detail::fmt_num(both_cap) << ','
        << detail::fmt_num(both_cap / fpa_cap) << "\n";
  }
}

/// Median localization NMSE per antenna count over seeded noise trials. Under
/// the proxy model the observation noise shrinks as 1/count_h; trials share
/// seeds across counts so the comparison uses common random numbers.
inline void run_localization(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  const double duration = 2.0 * cfg.track_x0 / cfg.speed_mps;
  if (!(cfg.speed_mps > 0.0) || duration < cfg.track_step_s)
    throw ConfigError("localization: track too short for two observations");

  detail::write_preamble(out, cfg, "localization");
  out << "count_h,noise_theta,noise_range,nmse_paper,nmse_cartesian\n";

  for (const int count : cfg.count_list) {
    const double sigma_theta =
        cfg.noise_model == "proxy" ? cfg.noise_theta / count : cfg.noise_theta;
    const double sigma_range =
        cfg.noise_model == "proxy" ? cfg.noise_range / count : cfg.noise_range;

    std::vector<double> polar_scores, cartesian_scores;
    polar_scores.reserve(cfg.trials);
    cartesian_scores.reserve(cfg.trials);
    for (int trial = 0; trial < cfg.trials; ++trial) {
      TrackParams params;
      params.initial_center = {cfg.track_x0, cfg.y0, cfg.z0};
      params.speed = cfg.speed_mps;
      params.duration = duration;
      params.step = cfg.track_step_s;
      params.noise_theta = sigma_theta;
      params.noise_range = sigma_range;
      params.seed = cfg.seed + static_cast<std::uint64_t>(trial);
      const std::vector<TrackSample> samples = simulate_track(params);

      const double speed_hat = estimate_speed(samples[0].noisy, samples[1].noisy);
      std::vector<PolarPoint> truth, predicted;
      truth.reserve(samples.size());
      predicted.reserve(samples.size());
      for (const TrackSample& sample : samples) {
        truth.push_back({sample.truth.theta, sample.truth.range});
        predicted.push_back(predict_position(samples[0].noisy, speed_hat, sample.truth.time));
      }
      polar_scores.push_back(nmse(truth, predicted));
      cartesian_scores.push_back(nmse_cartesian(truth, predicted));
    }
    out << count << ',' << detail::fmt_num(sigma_theta) << ',' << detail::fmt_num(sigma_range)
        << ',' << detail::fmt_num(detail::median(polar_scores)) << ','
        << detail::fmt_num(detail::median(cartesian_scores)) << "\n";
  }
}

struct RotationOptSummary {
  std::array<double, 4> angles{};
  Fitness fitness;
};

/// Per-generation optimizer trace at the configured geometry; returns the
/// final optimum.
inline RotationOptSummary run_rotation_opt(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  const Scenario site = cfg.scenario();
  const PowerPolicy policy = cfg.policy();
  constexpr double half_pi = 1.5707963267948966;

  DEConfig de;
  de.population = cfg.de_population;
  de.dims = 4;
  de.generations = cfg.de_generations;
  de.f0 = cfg.de_f0;
  de.cr = cfg.de_cr;
  de.seed = cfg.seed;
  de.bounds = {{-half_pi, half_pi}, {0.0, half_pi}, {-half_pi, half_pi}, {0.0, half_pi}};

  const DEResult result = de_optimize(
      [&](const std::vector<double>& v) {
        return rank_objective({v[0], v[1], v[2], v[3]}, site, policy, cfg.rank_tol);
      },
      de);

  detail::write_preamble(out, cfg, "rotation-opt");
  out << "generation,rank,capacity_bps_hz,a1,b1,a2,b2\n";
  for (std::size_t g = 0; g < result.trace.size(); ++g) {
    const DETraceEntry& entry = result.trace[g];
    out << g << ',' << entry.fitness.rank << ',' << detail::fmt_num(entry.fitness.capacity)
        << ',' << detail::fmt_num(entry.x[0]) << ',' << detail::fmt_num(entry.x[1]) << ','
        << detail::fmt_num(entry.x[2]) << ',' << detail::fmt_num(entry.x[3]) << "\n";
  }
  return RotationOptSummary{{result.best[0], result.best[1], result.best[2], result.best[3]},
                            result.fitness};
}

}  // namespace romaxl

#endif  // ROMAXL_EXPERIMENTS_HPP
