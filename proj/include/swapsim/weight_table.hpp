#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "swapsim/angle.hpp"

namespace swapsim {

inline constexpr double kPiSqOver32 = kPi * kPi / 32.0;
inline constexpr double kPiSqOver64 = kPi * kPi / 64.0;
inline constexpr double kSqrt2 = std::numbers::sqrt2;

// Slack for gamma landing just outside its sector interval through
// floating-point arithmetic, and for table values grazing 0 or 1.
inline constexpr double kGammaSlack = 1e-9;
inline constexpr double kWeightValueSlack = 1e-12;

/// Valid gamma range for a sector's column of the acceptance table.
struct GammaInterval {
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr GammaInterval weight_domain(int sector) {
  return {(sector - 1) * kQuarterPi, (sector + 1) * kQuarterPi};
}

namespace detail {

// Acceptance probabilities with which Bob keeps his provisional sign, one
// closed form per (sector, announced-bit row). Rows pack the three bits as
// (alice << 2) | (referee << 1) | bob; gamma is Bob's sector angle minus his
// hidden variable. Every form stays inside [0, 1] on its sector's interval.
inline double weight_closed_form(int sector, int row, double gamma) {
  const double g = gamma;
  switch (sector) {
    case 0:
      return (row == 0b000 || row == 0b111) ? kPiSqOver32 * std::cos(g) : 0.0;
    case 1:
      switch (row) {
        case 0b011:
        case 0b101:
          return kPiSqOver32 * std::cos(g - kQuarterPi);
        case 0b110:
          return kPiSqOver32 * std::cos(g);
        case 0b111:
          return kPiSqOver32 * (std::cos(g) + 2.0 * std::cos(g - kQuarterPi));
        default:
          return 0.0;
      }
    case 2:
      switch (row) {
        case 0b000:
          return 0.5 + kPiSqOver64 * (1.0 - (2.0 + kSqrt2) * std::sin(g));
        case 0b001:
          return 0.5 + kPiSqOver64 * (1.0 - kSqrt2 * std::sin(g));
        case 0b010:
          return 0.5 - kPiSqOver64 * (1.0 + kSqrt2 * std::sin(g + kQuarterPi));
        case 0b011:
          return 0.5 - kPiSqOver64 * (1.0 - kSqrt2 * std::sin(g - kQuarterPi));
        case 0b100:
          return 0.5 + kPiSqOver64 * (1.0 - kSqrt2 * std::sin(g + kQuarterPi));
        case 0b101:
          return 0.5 + kPiSqOver64 * (1.0 + kSqrt2 * std::sin(g - kQuarterPi));
        case 0b110:
          return 0.5 - kPiSqOver64 * (1.0 - kSqrt2 * std::sin(g));
        default:  // 0b111
          return 0.5 - kPiSqOver64 * (1.0 - (2.0 + kSqrt2) * std::sin(g));
      }
    default:  // sector 3
      switch (row) {
        case 0b000:
          return 1.0 + kPiSqOver32 * (std::cos(g) + 2.0 * std::cos(g + kQuarterPi));
        case 0b001:
          return 1.0 + kPiSqOver32 * std::cos(g);
        case 0b010:
        case 0b100:
          return 1.0 + kPiSqOver32 * std::cos(g + kQuarterPi);
        default:
          return 1.0;
      }
  }
}

inline constexpr int pack_row(int alice_bit, int referee_bit, int bob_bit) {
  return (alice_bit << 2) | (referee_bit << 1) | bob_bit;
}

}  // namespace detail

/// Probability that Bob outputs his provisional sign, given the three
/// announced bits and his sector. Rejects gamma outside the sector interval
/// (beyond kGammaSlack) and table values outside [0, 1] beyond rounding
/// slack; values within slack are clamped.
inline double weight(int sector, int alice_bit, int referee_bit, int bob_bit,
                     double gamma) {
  if (sector < 0 || sector > 3) {
    throw std::out_of_range("weight: sector must be in {0,1,2,3}");
  }
  if ((alice_bit | referee_bit | bob_bit) < 0 ||
      alice_bit > 1 || referee_bit > 1 || bob_bit > 1) {
    throw std::out_of_range("weight: announced bits must be 0 or 1");
  }
  const GammaInterval dom = weight_domain(sector);
  if (gamma < dom.lo - kGammaSlack || gamma > dom.hi + kGammaSlack) {
    throw std::domain_error("weight: gamma outside the sector's interval");
  }
  double v = detail::weight_closed_form(
      sector, detail::pack_row(alice_bit, referee_bit, bob_bit), gamma);
  if (v < 0.0) {
    if (v < -kWeightValueSlack) {
      throw std::logic_error("weight: table value below 0");
    }
    v = 0.0;
  } else if (v > 1.0) {
    if (v > 1.0 + kWeightValueSlack) {
      throw std::logic_error("weight: table value above 1");
    }
    v = 1.0;
  }
  return v;
}

/// Index tuple of one table entry.
struct WeightEntry {
  int sector = 0;
  int alice_bit = 0;
  int referee_bit = 0;
  int bob_bit = 0;
};

/// All 32 entries, sector-major then row-major.
inline constexpr std::array<WeightEntry, 32> weight_table_entries() {
  std::array<WeightEntry, 32> entries{};
  int k = 0;
  for (int sector = 0; sector < 4; ++sector) {
    for (int row = 0; row < 8; ++row) {
      entries[k++] = {sector, (row >> 2) & 1, (row >> 1) & 1, row & 1};
    }
  }
  return entries;
}

}  // namespace swapsim
