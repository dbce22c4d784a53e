#include <gtest/gtest.h>

#include <random>

#include "optlim/quandle.hpp"
#include "support.hpp"

using namespace optlim;
using testing_support::close;
using testing_support::random_element;

namespace {

constexpr int kTrials = 1000;
constexpr double kTol = 1e-10;

// Moebius cross-ratio of four finite points.
Complex point_cross_ratio(Complex z0, Complex z1, Complex z2, Complex z3) {
  return (z0 - z3) * (z1 - z2) / ((z0 - z2) * (z1 - z3));
}

}  // namespace

TEST(Quandle, Idempotence) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < kTrials; ++i) {
    const auto a = random_element(rng);
    EXPECT_TRUE(close(star(a, a), a, kTol));
    EXPECT_TRUE(close(star_inv(a, a), a, kTol));
  }
}

TEST(Quandle, StarInverse) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < kTrials; ++i) {
    const auto a = random_element(rng), b = random_element(rng);
    EXPECT_TRUE(close(star_inv(star(a, b), b), a, kTol));
    EXPECT_TRUE(close(star(star_inv(a, b), b), a, kTol));
  }
}

TEST(Quandle, RightSelfDistributive) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < kTrials; ++i) {
    const auto a = random_element(rng), b = random_element(rng), c = random_element(rng);
    const auto lhs = star(star(a, b), c);
    const auto rhs = star(star(a, c), star(b, c));
    EXPECT_TRUE(close(lhs, rhs, kTol)) << lhs << " vs " << rhs;
  }
}

TEST(Quandle, DeterminantInvariance) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < kTrials; ++i) {
    const auto a = random_element(rng), b = random_element(rng), c = random_element(rng);
    EXPECT_TRUE(close(det2(star(a, c), star(b, c)), det2(a, b), kTol));
    EXPECT_TRUE(close(det2(star_inv(a, c), star_inv(b, c)), det2(a, b), kTol));
  }
}

TEST(Quandle, HopfEquivariance) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < kTrials; ++i) {
    const auto a = random_element(rng), b = random_element(rng);
    const HopfValue lhs = hopf(star(a, b));
    const HopfValue rhs = mobius_apply(b, hopf(a));
    ASSERT_FALSE(lhs.is_infinite());
    ASSERT_FALSE(rhs.is_infinite());
    EXPECT_LE(std::abs(lhs.value() - rhs.value()), kTol * std::max(1.0, std::abs(lhs.value())));
  }
}

TEST(Quandle, SignInsensitive) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_element(rng), b = random_element(rng);
    EXPECT_TRUE(close(star(a, -b), star(a, b), kTol));
    EXPECT_TRUE(close(star(-a, b), -star(a, b), kTol));
  }
}

TEST(Quandle, FixedPointIsHopfValue) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const auto b = random_element(rng);
    EXPECT_TRUE(approx_equal(mobius_apply(b, hopf(b)), hopf(b), 1e-9));
  }
  const ParabolicElement inf{1.0, 0.0};
  EXPECT_TRUE(hopf(inf).is_infinite());
  EXPECT_TRUE(mobius_apply(inf, HopfValue::infinity()).is_infinite());
}

TEST(Quandle, HopfValues) {
  EXPECT_EQ(hopf({Complex{3.0, 1.0}, Complex{1.0, 0.0}}).value(), Complex(3.0, 1.0));
  EXPECT_EQ(hopf({0.0, 2.0}).value(), Complex(0.0));
  EXPECT_TRUE(approx_equal(hopf({2.0, 4.0}), hopf({-1.0, -2.0})));
  EXPECT_FALSE(approx_equal(hopf({1.0, 0.0}), hopf({1.0, 1e-3})));
  EXPECT_DOUBLE_EQ(hopf_separation({1.0, 0.0}, {0.0, 1.0}), 1.0);
  EXPECT_DOUBLE_EQ(hopf_separation({1.0, 2.0}, {-2.0, -4.0}), 0.0);
}

TEST(Quandle, ZeroVectorRejected) { EXPECT_THROW(ParabolicElement(0.0, 0.0), std::invalid_argument); }

TEST(Quandle, CrossRatioMatchesMoebiusCrossRatio) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < kTrials; ++i) {
    const auto v0 = random_element(rng), v1 = random_element(rng), v2 = random_element(rng),
               v3 = random_element(rng);
    const Complex expected =
        point_cross_ratio(hopf(v0).value(), hopf(v1).value(), hopf(v2).value(), hopf(v3).value());
    const Complex got = cross_ratio(v0, v1, v2, v3);
    EXPECT_LE(std::abs(got - expected), 1e-8 * std::max(1.0, std::abs(expected)));
  }
}

TEST(Quandle, CrossRatioIsScaleInvariant) {
  const ParabolicElement v0{1.0, 2.0}, v1{Complex{0.0, 1.0}, 1.0}, v2{3.0, -1.0}, v3{1.0, 0.0};
  const Complex base = cross_ratio(v0, v1, v2, v3);
  EXPECT_LE(std::abs(cross_ratio(v0 * Complex{2.0, 1.0}, -v1, v2 * 5.0, v3) - base), 1e-12);
}

TEST(Quandle, DegenerateCrossRatioThrows) {
  const ParabolicElement a{1.0, 2.0}, b{0.0, 1.0}, c{3.0, 1.0};
  EXPECT_THROW(cross_ratio(a, b, a * 2.0, c), DegenerateCrossRatio);
  EXPECT_THROW(cross_ratio(a, b, c, -b), DegenerateCrossRatio);
}
