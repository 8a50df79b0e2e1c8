#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "swapsim/angle.hpp"
#include "swapsim/quadrature.hpp"
#include "swapsim/weight_table.hpp"

namespace swapsim {

// Quadrature evaluation of the protocol's agreement probability, decomposed
// region by region over the two hidden variables. This never samples and
// never goes through weight()'s clamping, so it certifies the sampler from
// an independent direction: a failing term pinpoints one table cell.

namespace detail {

// One rectangular or triangular region of the (lambda_AR, lambda_RB) square,
// carrying the announced-bit row that holds on it.
struct AgreementSum {
  int bob_sector;
  double phi_bob;
  QuadratureConfig cfg;
  double total = 0.0;

  template <class LoFn, class HiFn>
  void add(int alice_bit, int referee_bit, int bob_bit, double ar_lo,
           double ar_hi, LoFn&& rb_lo, HiFn&& rb_hi) {
    const int row = pack_row(alice_bit, referee_bit, bob_bit);
    total += integrate_2d(
        [this, row](double, double lambda_rb) {
          return weight_closed_form(bob_sector, row, phi_bob - lambda_rb);
        },
        ar_lo, ar_hi, rb_lo, rb_hi, cfg);
  }

  double value() const { return 16.0 / (kPi * kPi) * total; }
};

inline void check_reduced_domain(double phi_alice, double phi_bob) {
  if (!(phi_alice >= 0.0 && phi_alice < kQuarterPi)) {
    throw std::domain_error("reduced Alice angle must lie in [0, pi/4)");
  }
  if (!(phi_bob >= 0.0 && phi_bob < kPi)) {
    throw std::domain_error("reduced Bob angle must lie in [0, pi)");
  }
}

}  // namespace detail

/// Agreement probability for reduced angles with phi_alice strictly below
/// Bob's sector edge, as a nine-region integral over the hidden variables.
inline double integral_agreement_less(double phi_alice, double phi_bob,
                                      const QuadratureConfig& cfg = {}) {
  detail::check_reduced_domain(phi_alice, phi_bob);
  const SectorSplit split = split_by_sector(phi_bob);
  const double edge = split.offset;  // phi_bob - sector*pi/4
  if (!(phi_alice < edge)) {
    throw std::domain_error(
        "integral_agreement_less requires phi_alice < phi_bob - sector*pi/4");
  }
  const double q = kQuarterPi;
  const auto at = [](double c) { return [c](double) { return c; }; };
  const auto diag = [](double x) { return x; };

  detail::AgreementSum sum{split.sector, phi_bob, cfg};
  // lambda_AR below phi_alice
  sum.add(0, 0, 1, 0.0, phi_alice, at(0.0), diag);
  sum.add(0, 1, 1, 0.0, phi_alice, diag, at(edge));
  sum.add(0, 1, 0, 0.0, phi_alice, at(edge), at(q));
  // lambda_AR between phi_alice and the sector edge
  sum.add(1, 0, 1, phi_alice, edge, at(0.0), diag);
  sum.add(1, 1, 1, phi_alice, edge, diag, at(edge));
  sum.add(1, 1, 0, phi_alice, edge, at(edge), at(q));
  // lambda_AR above the sector edge
  sum.add(1, 0, 1, edge, q, at(0.0), at(edge));
  sum.add(1, 0, 0, edge, q, at(edge), diag);
  sum.add(1, 1, 0, edge, q, diag, at(q));
  return sum.value();
}

/// Companion case with phi_alice at or above Bob's sector edge.
inline double integral_agreement_geq(double phi_alice, double phi_bob,
                                     const QuadratureConfig& cfg = {}) {
  detail::check_reduced_domain(phi_alice, phi_bob);
  const SectorSplit split = split_by_sector(phi_bob);
  const double edge = split.offset;
  if (!(phi_alice >= edge)) {
    throw std::domain_error(
        "integral_agreement_geq requires phi_alice >= phi_bob - sector*pi/4");
  }
  const double q = kQuarterPi;
  const auto at = [](double c) { return [c](double) { return c; }; };
  const auto diag = [](double x) { return x; };

  detail::AgreementSum sum{split.sector, phi_bob, cfg};
  // lambda_AR below the sector edge
  sum.add(0, 0, 1, 0.0, edge, at(0.0), diag);
  sum.add(0, 1, 1, 0.0, edge, diag, at(edge));
  sum.add(0, 1, 0, 0.0, edge, at(edge), at(q));
  // lambda_AR between the sector edge and phi_alice
  sum.add(0, 0, 1, edge, phi_alice, at(0.0), at(edge));
  sum.add(0, 0, 0, edge, phi_alice, at(edge), diag);
  sum.add(0, 1, 0, edge, phi_alice, diag, at(q));
  // lambda_AR above phi_alice
  sum.add(1, 0, 1, phi_alice, q, at(0.0), at(edge));
  sum.add(1, 0, 0, phi_alice, q, at(edge), diag);
  sum.add(1, 1, 0, phi_alice, q, diag, at(q));
  return sum.value();
}

/// Agreement probability for arbitrary equatorial angles. Applies the same
/// sign and sector reduction as the sampler, then integrates; the result
/// must equal (1 - cos(phiA - phiB)) / 2 everywhere.
inline double agreement_from_integrals(double phi_alice, double phi_bob,
                                       const QuadratureConfig& cfg = {}) {
  const int alice_sign = sign_of_sin(phi_alice);
  const SectorSplit alice_split = split_by_sector(phi_alice);
  const double shifted_bob = phi_bob - alice_split.sector * kQuarterPi;
  const int bob_base_sign = sign_of_sin(shifted_bob);
  const double reduced_bob = mod_pi(shifted_bob);
  const double edge = split_by_sector(reduced_bob).offset;
  const double keep_prob =
      alice_split.offset < edge
          ? integral_agreement_less(alice_split.offset, reduced_bob, cfg)
          : integral_agreement_geq(alice_split.offset, reduced_bob, cfg);
  return alice_sign == bob_base_sign ? keep_prob : 1.0 - keep_prob;
}

/// Agreement probability of the unweighted single-sector protocol:
/// (m^2 / 2 pi^2) (phiA - phiB)^2.
inline double naive_sector_agreement(int m, double phi_alice, double phi_bob) {
  if (m < 1) throw std::invalid_argument("sector count must be positive");
  const double delta = phi_alice - phi_bob;
  return m * m / (2.0 * kPi * kPi) * delta * delta;
}

/// Quadrature check of the weighted single-sector protocol against its
/// closed form sin(delta/2)^2, plus a bound check on the cosine weight.
struct WeightedSectorCheck {
  double integral = 0.0;
  double closed_form = 0.0;
  bool weight_within_bounds = false;
};

inline WeightedSectorCheck weighted_sector_agreement(
    int m, double phi_alice, double phi_bob, const QuadratureConfig& cfg = {}) {
  if (m < 1) throw std::invalid_argument("sector count must be positive");
  const double amplitude = kPi * kPi / (2.0 * m * m);
  // gamma = phi_bob - lambda_RB spans [-pi/m, pi/m]; the cosine peaks at 0
  const bool within = amplitude <= 1.0 + kWeightValueSlack &&
                      amplitude * std::cos(kPi / m) >= -kWeightValueSlack;

  const double lo = std::min(phi_alice, phi_bob);
  const double hi = std::max(phi_alice, phi_bob);
  const auto keep = [&](double lambda_rb) {
    return amplitude * std::cos(phi_bob - lambda_rb);
  };
  // the all-equal-bits region: a strict chain between the two settings
  const double raw =
      phi_alice <= phi_bob
          ? integrate_2d([&](double, double rb) { return keep(rb); }, lo, hi,
                         [](double ar) { return ar; },
                         [hi](double) { return hi; }, cfg)
          : integrate_2d([&](double, double rb) { return keep(rb); }, lo, hi,
                         [lo](double) { return lo; },
                         [](double ar) { return ar; }, cfg);
  const double s = std::sin(0.5 * (phi_alice - phi_bob));
  return {m * m / (kPi * kPi) * raw, s * s, within};
}

/// Agreement probability after the polar-angle run, given the equatorial
/// agreement probability of the first run.
inline double compose_protocol2(double equatorial_agree_prob, double theta_alice,
                                double theta_bob) {
  const double same = 0.5 * (1.0 - std::cos(theta_alice + theta_bob));
  const double differ = 0.5 * (1.0 - std::cos(theta_alice - theta_bob));
  return equatorial_agree_prob * same + (1.0 - equatorial_agree_prob) * differ;
}

struct TableBoundsRow {
  WeightEntry entry;
  double min_value = 0.0;
  double max_value = 0.0;
  bool pass = false;
};

struct TableBoundsReport {
  std::array<TableBoundsRow, 32> rows{};
  bool all_pass = false;
  int grid_points = 0;
};

/// Scans every table entry on an equispaced grid of its interval and flags
/// values outside [0, 1] beyond rounding slack.
inline TableBoundsReport verify_table_bounds(int grid_points) {
  if (grid_points < 2) {
    throw std::invalid_argument("verify_table_bounds: need at least 2 points");
  }
  TableBoundsReport report;
  report.grid_points = grid_points;
  report.all_pass = true;
  int k = 0;
  for (const WeightEntry& entry : weight_table_entries()) {
    const GammaInterval dom = weight_domain(entry.sector);
    const int row =
        detail::pack_row(entry.alice_bit, entry.referee_bit, entry.bob_bit);
    double lo = 1.0;
    double hi = 0.0;
    const double step = (dom.hi - dom.lo) / (grid_points - 1);
    for (int i = 0; i < grid_points; ++i) {
      const double v =
          detail::weight_closed_form(entry.sector, row, dom.lo + i * step);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const bool pass = lo >= -kWeightValueSlack && hi <= 1.0 + kWeightValueSlack;
    report.rows[k++] = {entry, lo, hi, pass};
    report.all_pass = report.all_pass && pass;
  }
  return report;
}

}  // namespace swapsim
