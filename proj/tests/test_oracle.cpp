#include <cmath>

#include <gtest/gtest.h>

#include "swapsim/direction.hpp"
#include "swapsim/estimators.hpp"
#include "swapsim/oracle.hpp"

namespace swapsim {
namespace {

double closed_form(double phi_a, double phi_b) {
  return 0.5 * (1.0 - std::cos(phi_a - phi_b));
}

TEST(IntegralAgreement, LessBranchExample) {
  // expected value frozen from the closed form (1 - cos 0.6) / 2
  EXPECT_NEAR(integral_agreement_less(0.1, 0.7), 0.08733219254516084, 1e-6);
}

TEST(IntegralAgreement, GeqBranchExamples) {
  EXPECT_NEAR(integral_agreement_geq(0.2, 0.1), 0.0024979173609870897, 1e-6);
  EXPECT_NEAR(integral_agreement_geq(0.15, 0.15), 0.0, 1e-6);
}

TEST(IntegralAgreement, EnforcesStrictBranchPreconditions) {
  EXPECT_THROW(integral_agreement_less(0.0, 0.0), std::domain_error);
  EXPECT_THROW(integral_agreement_less(0.2, 0.1), std::domain_error);
  EXPECT_THROW(integral_agreement_geq(0.1, 0.7), std::domain_error);
  EXPECT_THROW(integral_agreement_less(kQuarterPi, 0.9), std::domain_error);
  EXPECT_THROW(integral_agreement_geq(0.1, kPi), std::domain_error);
}

TEST(IntegralAgreement, MatchesClosedFormAcrossAllSectors) {
  int less_branch = 0;
  int geq_branch = 0;
  bool sector_seen[4] = {};
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double phi_a = (i + 0.5) * kQuarterPi / 6.0;
      const double phi_b = (j + 0.5) * kPi / 10.0;
      const SectorSplit split = split_by_sector(phi_b);
      sector_seen[split.sector] = true;
      double value = 0.0;
      if (phi_a < split.offset) {
        value = integral_agreement_less(phi_a, phi_b);
        ++less_branch;
      } else {
        value = integral_agreement_geq(phi_a, phi_b);
        ++geq_branch;
      }
      EXPECT_NEAR(value, closed_form(phi_a, phi_b), 1e-6)
          << "phiA=" << phi_a << " phiB=" << phi_b;
    }
  }
  EXPECT_GT(less_branch, 0);
  EXPECT_GT(geq_branch, 0);
  for (const bool seen : sector_seen) EXPECT_TRUE(seen);
}

TEST(IntegralAgreement, SymmetryRelationsHoldAtOracleLevel) {
  const double base_pairs[][2] = {{0.9, 2.3}, {2.0, 5.1}};
  for (const auto& pair : base_pairs) {
    const double phi_a = pair[0];
    const double phi_b = pair[1];
    const double base = agreement_from_integrals(phi_a, phi_b);
    EXPECT_NEAR(1.0 - agreement_from_integrals(phi_a, phi_b + kPi), base, 1e-6);
    EXPECT_NEAR(1.0 - agreement_from_integrals(phi_a + kPi, phi_b), base, 1e-6);
    EXPECT_NEAR(agreement_from_integrals(phi_a + kPi, phi_b + kPi), base, 1e-6);
    for (int j = 1; j <= 7; ++j) {
      EXPECT_NEAR(agreement_from_integrals(phi_a + j * kQuarterPi,
                                           phi_b + j * kQuarterPi),
                  base, 1e-6)
          << "j=" << j;
    }
  }
}

// the quadrature route and the sampling route are written against the same
// contract but share no code path; they must land on the same numbers
TEST(IntegralAgreement, AgreesWithTheSampler) {
  RandomStream rng(55, "oraclepairs");
  for (int p = 0; p < 20; ++p) {
    const double phi_a = rng.next_scaled(kTwoPi);
    const double phi_b = rng.next_scaled(kTwoPi);
    const double oracle_value = agreement_from_integrals(phi_a, phi_b);
    const std::uint64_t n = 200000;
    const EstimatorResult sampled = estimate_equatorial_agreement(
        Angle::from_radians(phi_a), Angle::from_radians(phi_b), n,
        derive_seed(56, "pair", p));
    if (degenerate_proportion(oracle_value, n)) {
      EXPECT_LE(std::abs(sampled.estimate - oracle_value) * n,
                kDegenerateCountBound);
    } else {
      EXPECT_LE(std::abs(z_score(sampled, oracle_value)), 4.5);
    }
  }
}

TEST(NaiveSectorAgreement, ClosedForm) {
  EXPECT_DOUBLE_EQ(naive_sector_agreement(4, 0.0, kPi / 8.0), 0.125);
  EXPECT_DOUBLE_EQ(naive_sector_agreement(4, 0.2, 0.2), 0.0);
  EXPECT_DOUBLE_EQ(naive_sector_agreement(4, 0.1, 0.3),
                   naive_sector_agreement(4, 0.3, 0.1));
}

TEST(WeightedSectorAgreement, MatchesItsClosedForm) {
  const WeightedSectorCheck check = weighted_sector_agreement(4, 0.0, kPi / 8.0);
  EXPECT_TRUE(check.weight_within_bounds);
  EXPECT_NEAR(check.closed_form, 0.03806023374435662, 1e-15);  // sin^2(pi/16)
  EXPECT_NEAR(check.integral, check.closed_form, 1e-6);

  const WeightedSectorCheck zero = weighted_sector_agreement(4, 0.1, 0.1);
  EXPECT_NEAR(zero.integral, 0.0, 1e-9);
  EXPECT_DOUBLE_EQ(zero.closed_form, 0.0);

  // swapped order integrates the mirrored region to the same value
  const WeightedSectorCheck swapped = weighted_sector_agreement(4, kPi / 8.0, 0.0);
  EXPECT_NEAR(swapped.integral, check.integral, 1e-6);
}

TEST(WeightedSectorAgreement, FlagsAnOutOfRangeWeight) {
  // two sectors: the cosine amplitude pi^2/8 exceeds 1 near gamma = 0
  EXPECT_FALSE(weighted_sector_agreement(2, 0.1, 0.2).weight_within_bounds);
  EXPECT_TRUE(weighted_sector_agreement(3, 0.1, 0.2).weight_within_bounds);
}

TEST(ComposeProtocol2, HandEvaluatedExamples) {
  EXPECT_DOUBLE_EQ(compose_protocol2(0.3, 0.0, 0.0), 0.0);
  EXPECT_NEAR(compose_protocol2(0.8, 0.0, kPi), 1.0, 1e-15);
  EXPECT_NEAR(compose_protocol2(0.5, kPi / 2.0, kPi / 2.0), 0.5, 1e-15);
}

TEST(ComposeProtocol2, ReproducesTheFullCorrelation) {
  RandomStream rng(57, "compose");
  for (int i = 0; i < 10000; ++i) {
    const double theta_a = std::acos(1.0 - 2.0 * rng.next_unit());
    const double phi_a = rng.next_scaled(kTwoPi);
    const double theta_b = std::acos(1.0 - 2.0 * rng.next_unit());
    const double phi_b = rng.next_scaled(kTwoPi);
    const auto x = MeasurementDirection::from_spherical(theta_a, phi_a);
    const auto y = MeasurementDirection::from_spherical(theta_b, phi_b);
    const double composed = compose_protocol2(
        equatorial_agreement(Angle::from_radians(phi_a),
                             Angle::from_radians(phi_b)),
        theta_a, theta_b);
    ASSERT_NEAR(composed, 0.5 * (1.0 - x.dot(y)), 1e-12);
  }
}

TEST(VerifyTableBounds, AllEntriesPass) {
  const TableBoundsReport report = verify_table_bounds(10000);
  EXPECT_TRUE(report.all_pass);
  EXPECT_EQ(report.rows.size(), 32u);
  for (const TableBoundsRow& row : report.rows) {
    EXPECT_TRUE(row.pass);
    EXPECT_GE(row.min_value, -1e-12);
    EXPECT_LE(row.max_value, 1.0 + 1e-12);
  }
}

TEST(VerifyTableBounds, KnownExtremes) {
  const TableBoundsReport report = verify_table_bounds(100001);
  // sector 0, bits 000: cosine arc from (pi^2/32)cos(pi/4) up to pi^2/32
  const TableBoundsRow& first = report.rows[0];
  ASSERT_EQ(first.entry.sector, 0);
  ASSERT_EQ(first.entry.alice_bit, 0);
  EXPECT_NEAR(first.min_value, 0.21808950623871498, 1e-9);
  EXPECT_NEAR(first.max_value, 0.30842513753404244, 1e-9);
  // sector 3, bits 011: constant 1
  const TableBoundsRow& constant = report.rows[3 * 8 + 3];
  ASSERT_EQ(constant.entry.sector, 3);
  EXPECT_DOUBLE_EQ(constant.min_value, 1.0);
  EXPECT_DOUBLE_EQ(constant.max_value, 1.0);
}

TEST(VerifyTableBounds, RejectsDegenerateGrid) {
  EXPECT_THROW(verify_table_bounds(1), std::invalid_argument);
}

}  // namespace
}  // namespace swapsim
