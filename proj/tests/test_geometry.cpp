#include <cmath>

#include <gtest/gtest.h>

#include "swapsim/angle.hpp"
#include "swapsim/direction.hpp"
#include "swapsim/random.hpp"

namespace swapsim {
namespace {

TEST(Angle, NormalizationIsIdempotentAndPeriodic) {
  RandomStream rng(11, "angles");
  for (int i = 0; i < 10000; ++i) {
    const double raw = (rng.next_unit() - 0.5) * 50.0;
    const double once = Angle::from_radians(raw).radians();
    EXPECT_EQ(Angle::from_radians(once).radians(), once);
    EXPECT_NEAR(Angle::from_radians(raw + kTwoPi).radians(), once, 1e-12);
    EXPECT_GE(once, 0.0);
    EXPECT_LT(once, kTwoPi);
  }
}

TEST(Angle, SectorIndexExamples) {
  EXPECT_EQ(sector_index(Angle::from_radians(0.0)), 0);
  EXPECT_EQ(sector_index(Angle::from_radians(kPi / 3.0)), 1);
  EXPECT_EQ(sector_index(Angle::from_radians(9.0 * kPi / 8.0)), 0);
}

TEST(Angle, SectorIndexIsPiPeriodic) {
  for (int i = 0; i < 10000; ++i) {
    const double phi = i * (kTwoPi / 10000.0);
    EXPECT_EQ(sector_index(Angle::from_radians(phi + kPi)),
              sector_index(Angle::from_radians(phi)));
  }
}

TEST(Angle, SectorOffsetStaysInQuarterPi) {
  RandomStream rng(12, "offsets");
  for (int i = 0; i < 100000; ++i) {
    const double phi = (rng.next_unit() - 0.5) * 40.0;
    const SectorSplit s = split_by_sector(phi);
    EXPECT_GE(s.offset, 0.0);
    EXPECT_LT(s.offset, kQuarterPi);
    EXPECT_GE(s.sector, 0);
    EXPECT_LE(s.sector, 3);
  }
}

TEST(Angle, SignOfSinFlipsUnderPiShift) {
  RandomStream rng(13, "signs");
  for (int i = 0; i < 10000; ++i) {
    const double x = (rng.next_unit() - 0.5) * 30.0;
    EXPECT_EQ(sign_of_sin(x + kPi), -sign_of_sin(x));
  }
  EXPECT_EQ(sign_of_sin(0.0), +1);
  EXPECT_EQ(sign_of_sin(kPi), -1);
}

TEST(Direction, SphericalCartesianRoundTrip) {
  RandomStream rng(21, "directions");
  for (int i = 0; i < 10000; ++i) {
    const double theta = std::acos(1.0 - 2.0 * rng.next_unit());
    const double phi = rng.next_scaled(kTwoPi);
    const auto d = MeasurementDirection::from_spherical(theta, phi);
    const double norm = d.x() * d.x() + d.y() * d.y() + d.z() * d.z();
    EXPECT_NEAR(norm, 1.0, 1e-12);
    const auto back = MeasurementDirection::from_cartesian(d.x(), d.y(), d.z());
    EXPECT_NEAR(back.x(), d.x(), 1e-12);
    EXPECT_NEAR(back.y(), d.y(), 1e-12);
    EXPECT_NEAR(back.z(), d.z(), 1e-12);
  }
}

TEST(Direction, RejectsNonUnitCartesian) {
  EXPECT_THROW(MeasurementDirection::from_cartesian(0.0, 0.0, 1.0 + 1e-7),
               std::domain_error);
  EXPECT_THROW(MeasurementDirection::from_cartesian(0.0, 0.0, 0.0),
               std::domain_error);
  EXPECT_NO_THROW(MeasurementDirection::from_cartesian(0.0, 0.0, 1.0 + 1e-10));
}

TEST(Direction, RejectsPolarAngleOutsideRange) {
  EXPECT_THROW(MeasurementDirection::from_spherical(-0.1, 0.0), std::domain_error);
  EXPECT_THROW(MeasurementDirection::from_spherical(kPi + 0.1, 0.0),
               std::domain_error);
}

TEST(SingletCorrelation, Examples) {
  const auto plus_z = MeasurementDirection::from_cartesian(0.0, 0.0, 1.0);
  const auto minus_z = MeasurementDirection::from_cartesian(0.0, 0.0, -1.0);
  EXPECT_DOUBLE_EQ(singlet_correlation(plus_z, plus_z), -1.0);
  EXPECT_DOUBLE_EQ(singlet_correlation(plus_z, minus_z), 1.0);

  const auto ex = MeasurementDirection::from_spherical(kPi / 2.0, 0.0);
  const auto ey = MeasurementDirection::from_spherical(kPi / 2.0, kPi / 2.0);
  EXPECT_NEAR(singlet_correlation(ex, ey), 0.0, 1e-12);
}

TEST(SingletCorrelation, BoundedAndPerfectlyAnticorrelatedWithItself) {
  RandomStream rng(22, "pairs");
  for (int i = 0; i < 100000; ++i) {
    const auto x = MeasurementDirection::from_spherical(
        std::acos(1.0 - 2.0 * rng.next_unit()), rng.next_scaled(kTwoPi));
    const auto y = MeasurementDirection::from_spherical(
        std::acos(1.0 - 2.0 * rng.next_unit()), rng.next_scaled(kTwoPi));
    EXPECT_LE(std::abs(singlet_correlation(x, y)), 1.0 + 1e-12);
    EXPECT_NEAR(singlet_correlation(x, x), -1.0, 1e-12);
  }
}

TEST(EquatorialAgreement, Examples) {
  EXPECT_DOUBLE_EQ(
      equatorial_agreement(Angle::from_radians(1.3), Angle::from_radians(1.3)),
      0.0);
  EXPECT_NEAR(
      equatorial_agreement(Angle::from_radians(0.0), Angle::from_radians(kPi)),
      1.0, 1e-12);
  EXPECT_NEAR(equatorial_agreement(Angle::from_radians(0.0),
                                   Angle::from_radians(kPi / 2.0)),
              0.5, 1e-12);
}

TEST(EquatorialAgreement, SymmetricExactlyAndShiftInvariant) {
  RandomStream rng(23, "equatorial");
  for (int i = 0; i < 10000; ++i) {
    const auto a = Angle::from_radians(rng.next_scaled(kTwoPi));
    const auto b = Angle::from_radians(rng.next_scaled(kTwoPi));
    EXPECT_EQ(equatorial_agreement(a, b), equatorial_agreement(b, a));
    const double shift = (rng.next_unit() - 0.5) * 20.0;
    EXPECT_NEAR(
        equatorial_agreement(Angle::from_radians(a.radians() + shift),
                             Angle::from_radians(b.radians() + shift)),
        equatorial_agreement(a, b), 1e-12);
  }
}

}  // namespace
}  // namespace swapsim
