#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "swapsim/angle.hpp"
#include "swapsim/random.hpp"
#include "swapsim/stats.hpp"

namespace swapsim {

// Chain with two intermediate referees: Alice and R1 share links[0], R1 and
// R2 share links[1], R2 and Bob share links[2]. The round agrees exactly
// when the strict comparisons along (phiA, links..., phiB) all have the same
// truth value. Works for any chain length >= 1.

namespace detail {
inline void check_chain_angle(int m, double phi) {
  if (m < 1) throw std::invalid_argument("sector count must be positive");
  if (!(phi >= 0.0 && phi <= kPi / m)) {
    throw std::domain_error("chain angle outside [0, pi/m]");
  }
}
}  // namespace detail

inline bool run_chain_round(int m, double phi_alice, double phi_bob,
                            std::span<const double> links) {
  detail::check_chain_angle(m, phi_alice);
  detail::check_chain_angle(m, phi_bob);
  if (links.empty()) throw std::invalid_argument("chain needs at least one link");
  const bool expected = phi_alice < links.front();
  for (std::size_t i = 0; i + 1 < links.size(); ++i) {
    if ((links[i] < links[i + 1]) != expected) return false;
  }
  return (links.back() < phi_bob) == expected;
}

/// Exact agreement probability of the three-link chain:
/// (m^3 / 6 pi^3) |phiA - phiB|^3.
inline double chain_agreement_closed_form(int m, double phi_alice,
                                          double phi_bob) {
  detail::check_chain_angle(m, phi_alice);
  detail::check_chain_angle(m, phi_bob);
  const double d = std::abs(phi_alice - phi_bob);
  const double md_over_pi = m * d / kPi;
  return md_over_pi * md_over_pi * md_over_pi / 6.0;
}

inline constexpr std::string_view kChainLinkLabel = "chainLink";

/// Monte Carlo agreement estimate of the three-link chain; the links draw
/// from three independently keyed streams.
inline EstimatorResult estimate_chain_agreement(int m, double phi_alice,
                                                double phi_bob,
                                                std::uint64_t n,
                                                std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("estimate over zero samples");
  RandomStream first(seed, kChainLinkLabel, 0);
  RandomStream middle(seed, kChainLinkLabel, 1);
  RandomStream last(seed, kChainLinkLabel, 2);
  const double width = kPi / m;
  std::uint64_t agreements = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double links[3] = {first.next_scaled(width),
                             middle.next_scaled(width),
                             last.next_scaled(width)};
    agreements += run_chain_round(m, phi_alice, phi_bob, links);
  }
  return make_probability_estimate(agreements, n);
}

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points_used = 0;
  int excluded_zero = 0;  // estimates at 0 cannot enter a log-log fit
};

/// Least-squares slope of log(prob) against log(delta). Zero or negative
/// probabilities are excluded and counted.
inline ScalingFit fit_log_slope(std::span<const double> deltas,
                                std::span<const double> probs) {
  if (deltas.size() != probs.size()) {
    throw std::invalid_argument("fit_log_slope: length mismatch");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  int excluded = 0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) {
      throw std::invalid_argument("fit_log_slope: deltas must be positive");
    }
    if (probs[i] > 0.0) {
      xs.push_back(std::log(deltas[i]));
      ys.push_back(std::log(probs[i]));
    } else {
      ++excluded;
    }
  }
  if (xs.size() < 2) {
    throw std::invalid_argument("fit_log_slope: fewer than 2 usable points");
  }
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= xs.size();
  mean_y /= ys.size();
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  const double slope = sxy / sxx;
  return {slope, mean_y - slope * mean_x, static_cast<int>(xs.size()), excluded};
}

/// Estimates the chain agreement at each delta (phiA = 0, phiB = delta) and
/// fits the log-log slope. Requires at least 4 distinct deltas spanning a
/// decade, so the slope is identified rather than extrapolated.
inline ScalingFit fit_scaling_exponent(int m, std::span<const double> deltas,
                                       std::uint64_t n_per_delta,
                                       std::uint64_t seed) {
  if (deltas.size() < 4) {
    throw std::invalid_argument("fit_scaling_exponent: need >= 4 deltas");
  }
  double lo = deltas[0];
  double hi = deltas[0];
  for (const double d : deltas) {
    detail::check_chain_angle(m, d);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (!(hi >= 10.0 * lo * (1.0 - 1e-12))) {
    throw std::invalid_argument("fit_scaling_exponent: deltas must span a decade");
  }
  std::vector<double> probs;
  probs.reserve(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    probs.push_back(estimate_chain_agreement(
                        m, 0.0, deltas[i], n_per_delta,
                        derive_seed(seed, "chainDelta", i))
                        .estimate);
  }
  return fit_log_slope(deltas, probs);
}

}  // namespace swapsim
