#pragma once

#include <cmath>
#include <numbers>

namespace swapsim {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kQuarterPi = std::numbers::pi / 4.0;

/// Reduces x into [0, 2*pi).
inline double mod_two_pi(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // adding 2*pi to a tiny negative remainder can round up to 2*pi itself
  return r < kTwoPi ? r : 0.0;
}

/// Reduces x into [0, pi).
inline double mod_pi(double x) {
  double r = std::fmod(x, kPi);
  if (r < 0.0) r += kPi;
  return r < kPi ? r : 0.0;
}

// sign(sin x), extended to the zeros of the sine so that shifting x by pi
// always flips the result: +1 on [0, pi), -1 on [pi, 2*pi).
inline int sign_of_sin(double x) { return mod_two_pi(x) < kPi ? +1 : -1; }

/// An angle in radians, normalized to [0, 2*pi) on construction.
class Angle {
 public:
  constexpr Angle() = default;

  static Angle from_radians(double r) { return Angle(mod_two_pi(r)); }

  double radians() const { return value_; }

 private:
  explicit constexpr Angle(double v) : value_(v) {}

  double value_ = 0.0;
};

/// Position of an angle within the quarter-pi sector grid of [0, pi).
struct SectorSplit {
  int sector = 0;       // floor((4/pi) * (phi mod pi)), in {0,1,2,3}
  double offset = 0.0;  // (phi mod pi) - sector*pi/4, in [0, pi/4)
};

inline SectorSplit split_by_sector(double phi) {
  const double reduced = mod_pi(phi);
  int sector = static_cast<int>(reduced / kQuarterPi);
  if (sector > 3) sector = 3;  // reduced within one ulp of pi
  double offset = reduced - sector * kQuarterPi;
  if (offset < 0.0) offset = 0.0;
  return {sector, offset};
}

inline int sector_index(Angle phi) { return split_by_sector(phi.radians()).sector; }

}  // namespace swapsim
