#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace swapsim {

inline constexpr double kCiHalfWidthSigmas = 3.0;  // 99.7% interval

/// Monte Carlo point estimate with Wald standard error.
struct EstimatorResult {
  std::uint64_t n = 0;
  double estimate = 0.0;
  double std_err = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

inline EstimatorResult make_probability_estimate(std::uint64_t successes,
                                                 std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("estimate over zero samples");
  const double p = static_cast<double>(successes) / static_cast<double>(n);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return {n, p, se, p - kCiHalfWidthSigmas * se, p + kCiHalfWidthSigmas * se};
}

inline EstimatorResult make_correlation_estimate(std::int64_t product_sum,
                                                 std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("estimate over zero samples");
  const double e = static_cast<double>(product_sum) / static_cast<double>(n);
  const double se =
      std::sqrt(std::max(0.0, 1.0 - e * e) / static_cast<double>(n));
  return {n, e, se, e - kCiHalfWidthSigmas * se, e + kCiHalfWidthSigmas * se};
}

inline double z_score(const EstimatorResult& r, double target) {
  if (r.std_err == 0.0) {
    if (r.estimate == target) return 0.0;
    return std::copysign(std::numeric_limits<double>::infinity(),
                         r.estimate - target);
  }
  return (r.estimate - target) / r.std_err;
}

/// Pass bound for individual z tests across the suite.
inline constexpr double kZBound = 4.5;

// Wald z-scores degenerate when the expected success count is tiny; below
// this the tests switch to a raw-count bound instead.
inline bool degenerate_proportion(double target_p, std::uint64_t n) {
  return static_cast<double>(n) * std::min(target_p, 1.0 - target_p) < 25.0;
}

inline constexpr double kDegenerateCountBound = 20.0;  // |observed-expected| cap

/// Upper 0.001-tail quantile of the chi-square distribution.
inline double chi_square_upper_001(int dof) {
  // frozen from an external quantile computation, dof 30..50
  static constexpr double kTable[] = {
      59.70306430442994,  61.098306081058126, 62.487219057088474,
      63.870098522344946, 65.24721746094244,  66.61882884370104,
      67.98516762602424,  69.3464524962412,   70.70288741150503,
      72.0546629519878,   73.40195751899103,  74.74493839842374,
      76.08376270770002,  77.41857824131394,  78.74952422804303,
      80.07673201081901,  81.40032565870999,  82.72042251912399,
      84.03713371722348,  85.35056460859305,  86.66081519040317,
  };
  if (dof < 30 || dof > 50) {
    throw std::invalid_argument("chi_square_upper_001: dof outside table");
  }
  return kTable[dof - 30];
}

}  // namespace swapsim
