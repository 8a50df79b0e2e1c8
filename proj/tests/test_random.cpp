#include <cmath>

#include <gtest/gtest.h>

#include "swapsim/random.hpp"

namespace swapsim {
namespace {

TEST(RandomStream, SameKeySameSequence) {
  RandomStream a(42, stream_label::kAliceReferee, 0);
  RandomStream b(42, stream_label::kAliceReferee, 0);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(a.next_u64(), b.next_u64());
  }
}

TEST(RandomStream, LabelsAndIndicesSeparateStreams) {
  EXPECT_NE(stream_key(42, stream_label::kAliceReferee, 0),
            stream_key(42, stream_label::kRefereeBob, 0));
  EXPECT_NE(stream_key(42, stream_label::kAliceReferee, 0),
            stream_key(42, stream_label::kAliceReferee, 1));
  EXPECT_NE(stream_key(42, stream_label::kAliceReferee, 0),
            stream_key(43, stream_label::kAliceReferee, 0));
}

TEST(RandomStream, UnitDrawsAreInRange) {
  RandomStream s(7, "unit");
  for (int i = 0; i < 100000; ++i) {
    const double u = s.next_unit();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

// the two hidden-variable sources must look statistically independent
TEST(RandomStream, HiddenVariableStreamsUncorrelated) {
  const int n = 1000000;
  RandomStream ar(99, stream_label::kAliceReferee, 0);
  RandomStream rb(99, stream_label::kRefereeBob, 0);
  double sum_x = 0.0, sum_y = 0.0, sum_xy = 0.0, sum_x2 = 0.0, sum_y2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = ar.next_unit();
    const double y = rb.next_unit();
    sum_x += x;
    sum_y += y;
    sum_xy += x * y;
    sum_x2 += x * x;
    sum_y2 += y * y;
  }
  const double mean_x = sum_x / n;
  const double mean_y = sum_y / n;
  const double cov = sum_xy / n - mean_x * mean_y;
  const double var_x = sum_x2 / n - mean_x * mean_x;
  const double var_y = sum_y2 / n - mean_y * mean_y;
  const double corr = cov / std::sqrt(var_x * var_y);
  EXPECT_LT(std::abs(corr), 4.0 / std::sqrt(double(n)));
  EXPECT_NEAR(mean_x, 0.5, 0.002);
  EXPECT_NEAR(mean_y, 0.5, 0.002);
}

TEST(RandomStream, BitsAreBalanced) {
  RandomStream s(3, stream_label::kFlip, 0);
  int ones = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) ones += s.next_bit();
  EXPECT_NEAR(double(ones) / n, 0.5, 0.01);
}

TEST(DeriveSeed, IsStableAndSensitive) {
  EXPECT_EQ(derive_seed(5, "pair", 3), derive_seed(5, "pair", 3));
  EXPECT_NE(derive_seed(5, "pair", 3), derive_seed(5, "pair", 4));
  EXPECT_NE(derive_seed(5, "pair", 3), derive_seed(6, "pair", 3));
}

}  // namespace
}  // namespace swapsim
