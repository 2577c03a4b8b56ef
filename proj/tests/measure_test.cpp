#include "cmspectra/measure.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace cmspectra {
namespace {

TEST(DiscreteMeasure, RejectsBrokenInvariants) {
  EXPECT_THROW(DiscreteMeasure(std::vector<Atom>{}), std::invalid_argument);
  EXPECT_THROW(DiscreteMeasure({{1.0, 0.5}, {1.0, 0.5}}), std::invalid_argument);
  EXPECT_THROW(DiscreteMeasure({{2.0, 0.5}, {1.0, 0.5}}), std::invalid_argument);
  EXPECT_THROW(DiscreteMeasure({{1.0, 0.5}, {2.0, 0.4}}), std::invalid_argument);
  EXPECT_THROW(DiscreteMeasure({{1.0, 0.0}, {2.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(DiscreteMeasure({{std::nan(""), 1.0}}), std::invalid_argument);
  EXPECT_NO_THROW(DiscreteMeasure({{1.0, 0.5}, {2.0, 0.5}}));
}

TEST(DiscreteMeasure, FromUnnormalizedSortsMergesAndRenormalizes) {
  const auto m = DiscreteMeasure::from_unnormalized({{3.0, 2.0}, {1.0, 1.0}, {3.0, 1.0}, {5.0, 0.0}});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_DOUBLE_EQ(m.atoms()[0].location, 1.0);
  EXPECT_DOUBLE_EQ(m.atoms()[0].weight, 0.25);
  EXPECT_DOUBLE_EQ(m.atoms()[1].location, 3.0);
  EXPECT_DOUBLE_EQ(m.atoms()[1].weight, 0.75);
}

TEST(DiscreteMeasure, UniformOnMergesDuplicates) {
  const std::vector<double> v{2.0, 1.0, 2.0, 2.0};
  const auto m = DiscreteMeasure::uniform_on(v);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_DOUBLE_EQ(m.weight_at(2.0), 0.75);
  EXPECT_DOUBLE_EQ(m.weight_at(1.0), 0.25);
  EXPECT_DOUBLE_EQ(m.weight_at(7.0), 0.0);
}

TEST(DiscreteMeasure, MomentsAndCdf) {
  const DiscreteMeasure m({{0.5, 0.5}, {1.5, 0.5}});
  EXPECT_DOUBLE_EQ(m.mean(), 1.0);
  EXPECT_DOUBLE_EQ(m.moment(2), 0.5 * 0.25 + 0.5 * 2.25);
  EXPECT_DOUBLE_EQ(m.moment(-2), 0.5 * 4.0 + 0.5 / 2.25);
  EXPECT_DOUBLE_EQ(m.cdf(0.4), 0.0);
  EXPECT_DOUBLE_EQ(m.cdf(0.5), 0.5);
  EXPECT_DOUBLE_EQ(m.cdf(1.0), 0.5);
  EXPECT_DOUBLE_EQ(m.cdf(1.5), 1.0);
  const DiscreteMeasure with_zero({{0.0, 0.5}, {2.0, 0.5}});
  EXPECT_TRUE(std::isinf(with_zero.moment(-2)));
}

TEST(DiscreteMeasure, DilationAndNormalization) {
  const DiscreteMeasure m({{1.0, 0.5}, {3.0, 0.5}});
  const auto d = m.dilated(2.0);
  EXPECT_DOUBLE_EQ(d.min_location(), 2.0);
  EXPECT_DOUBLE_EQ(d.max_location(), 6.0);
  EXPECT_NEAR(m.normalized_to_unit_mean().mean(), 1.0, 1e-15);
  EXPECT_THROW(m.dilated(0.0), std::invalid_argument);
  EXPECT_THROW(DiscreteMeasure::point_mass(0.0).normalized_to_unit_mean(), std::invalid_argument);
}

TEST(DiscreteMeasure, FingerprintIsStableAndDiscriminating) {
  const DiscreteMeasure a({{1.0, 0.5}, {3.0, 0.5}});
  const DiscreteMeasure b({{1.0, 0.5}, {3.0, 0.5}});
  const DiscreteMeasure c({{1.0, 0.25}, {3.0, 0.75}});
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  EXPECT_NE(a.fingerprint(), c.fingerprint());
  EXPECT_EQ(a.fingerprint().size(), 16u);
  EXPECT_EQ(a.to_string(), "1:0.5,3:0.5");
}

TEST(DiscreteMeasure, RandomSamplesSatisfyInvariants) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + trial % 37);
    for (auto& x : v) x = std::round(u(rng) * 4.0) / 4.0;
    const auto m = DiscreteMeasure::uniform_on(v);
    double total = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      total += m.atoms()[k].weight;
      if (k) {
        EXPECT_LT(m.atoms()[k - 1].location, m.atoms()[k].location);
      }
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace cmspectra
