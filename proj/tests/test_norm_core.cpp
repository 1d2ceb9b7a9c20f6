#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "iunorm/norm_core.hpp"
#include "oracles.hpp"

namespace iunorm {
namespace {

DiscreteFunction half_indicator() { return DiscreteFunction({{1.0, 0.5}, {0.0, 0.5}}); }
DiscreteFunction three_level() { return DiscreteFunction({{2.0, 0.25}, {1.0, 0.5}, {0.0, 0.25}}); }
DiscreteFunction uniform_4321() {
  const std::vector<double> v{4, 3, 2, 1};
  return DiscreteFunction::uniform(v);
}

TEST(DiscreteFunction, RejectsBadMasses) {
  EXPECT_THROW(DiscreteFunction({{1.0, 0.5}, {0.0, 0.4}}), std::invalid_argument);
  EXPECT_THROW(DiscreteFunction({{1.0, 1.0}, {0.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(DiscreteFunction({{1.0, 1.5}, {0.0, -0.5}}), std::invalid_argument);
  EXPECT_THROW(DiscreteFunction(std::vector<Atom>{}), std::invalid_argument);
}

TEST(DiscreteFunction, UniformMassesSumExactlyEnough) {
  std::vector<double> v(999983, 1.0);
  EXPECT_NO_THROW(DiscreteFunction::uniform(v));
}

TEST(DiscreteFunction, LevelsMergeEqualAbsoluteValues) {
  const DiscreteFunction f({{-2.0, 0.25}, {2.0, 0.25}, {1.0, 0.5}});
  const auto levels = f.levels();
  ASSERT_EQ(levels.size(), 2u);
  EXPECT_EQ(levels[0].abs_value, 2.0);
  EXPECT_DOUBLE_EQ(levels[0].mass, 0.5);
}

TEST(DiscreteFunction, CsvWithAndWithoutMass) {
  std::istringstream with_mass("value,mass\n1,0.5\n0,0.5\n");
  EXPECT_DOUBLE_EQ(m_norm_exact(read_discrete_function_csv(with_mass), 2), 0.75);
  std::istringstream no_mass("value\n-3\n1\n2\n");
  EXPECT_NEAR(m_norm_exact(read_discrete_function_csv(no_mass), 1), 2.0, 1e-15);
}

TEST(DiscreteFunction, CsvErrorsCarryLineNumbers) {
  std::istringstream bad("value,mass\n1,0.5\nx,0.5\n");
  try {
    read_discrete_function_csv(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream short_row("value,mass\n1,0.5\n0\n");
  EXPECT_THROW(read_discrete_function_csv(short_row), ParseError);
  std::istringstream bad_header("v,m\n1,1\n");
  EXPECT_THROW(read_discrete_function_csv(bad_header), ParseError);
  std::istringstream bad_sum("value,mass\n1,0.5\n0,0.4\n");
  EXPECT_THROW(read_discrete_function_csv(bad_sum), ParseError);
}

TEST(LambdaValue, Examples) {
  EXPECT_DOUBLE_EQ(lambda_value(half_indicator(), 0.5), 0.5);
  EXPECT_DOUBLE_EQ(lambda_value(three_level(), 1.0), 0.25);
  EXPECT_EQ(lambda_value(three_level(), 2.0), 0.0);
  EXPECT_EQ(lambda_value(three_level(), 7.0), 0.0);
  EXPECT_THROW(lambda_value(three_level(), -0.1), std::invalid_argument);
}

TEST(LambdaValue, NonincreasingStepFunction) {
  Rng rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const auto f = oracle::random_function(rng, 8);
    double prev = 1.0;
    for (double t = 0.0; t < 6.0; t += 0.125) {
      const double v = lambda_value(f, t);
      EXPECT_LE(v, prev + 1e-15);
      prev = v;
    }
  }
}

TEST(MNormExact, Examples) {
  EXPECT_DOUBLE_EQ(m_norm_exact(half_indicator(), 2), 0.75);
  EXPECT_DOUBLE_EQ(m_norm_exact(DiscreteFunction({{-3.5, 1.0}}), 17), 3.5);
  EXPECT_NEAR(m_norm_exact(three_level(), 2), 1.375, 1e-15);
  EXPECT_THROW(m_norm_exact(three_level(), 0), std::invalid_argument);
}

TEST(MNormExact, MatchesEnumerationOracle) {
  Rng rng(2024);
  for (int rep = 0; rep < 300; ++rep) {
    const auto f = oracle::random_function(rng, 5);
    for (int m = 1; m <= 4; ++m) EXPECT_NEAR(m_norm_exact(f, m), oracle::brute_force_m_norm(f, m), 1e-12);
  }
}

TEST(MNormExact, HugeMDoesNotUnderflow) {
  // 1 - (1 - 1e-9)^(1e9) = 1 - e^{-1} to first order.
  const DiscreteFunction f({{1.0, 1e-9}, {0.0, 1.0 - 1e-9}});
  EXPECT_NEAR(m_norm_exact(f, 1000000000ULL), -std::expm1(1e9 * std::log1p(-1e-9)), 1e-12);
  EXPECT_NEAR(m_norm_exact(f, 1000000000ULL), 0.6321205588, 1e-9);
}

TEST(MNormFromLambda, Examples) {
  EXPECT_DOUBLE_EQ(m_norm_from_lambda(half_indicator(), 2), 0.75);
  EXPECT_DOUBLE_EQ(m_norm_from_lambda(DiscreteFunction({{3.0, 1.0}}), 7), 3.0);
  EXPECT_NEAR(m_norm_from_lambda(three_level(), 2), 1.375, 1e-15);
}

TEST(MNormFromLambda, AgreesWithExact) {
  Rng rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const auto f = oracle::random_function(rng, 30);
    const auto m = 1 + rng.below(100);
    EXPECT_NEAR(m_norm_from_lambda(f, m), m_norm_exact(f, m), 1e-12);
  }
}

TEST(MNormExact, NormInvariants) {
  Rng rng(77);
  for (int rep = 0; rep < 200; ++rep) {
    const auto f = oracle::random_function(rng, 12);
    EXPECT_NEAR(m_norm_exact(f, 1), f.l1_norm(), 1e-13);
    double prev = 0.0;
    for (std::uint64_t m = 1; m <= 32; ++m) {
      const double v = m_norm_exact(f, m);
      EXPECT_GE(v, f.l1_norm() - 1e-12);
      EXPECT_LE(v, f.max_abs() + 1e-12);
      EXPECT_GE(v, prev - 1e-12);
      prev = v;
    }
    EXPECT_NEAR(m_norm_exact(f, 1ULL << 40), f.max_abs(), 1e-6);
    const double c = rng.uniform(-4.0, 4.0);
    EXPECT_NEAR(m_norm_exact(f.scaled(c), 5), std::abs(c) * m_norm_exact(f, 5), 1e-12);
  }
}

TEST(MNormExact, TriangleInequalityOnSharedAtoms) {
  Rng rng(8);
  for (int rep = 0; rep < 200; ++rep) {
    const auto f = oracle::random_function(rng, 10);
    std::vector<Atom> g_atoms(f.atoms().begin(), f.atoms().end());
    std::vector<Atom> sum_atoms = g_atoms;
    for (std::size_t i = 0; i < g_atoms.size(); ++i) {
      g_atoms[i].value = rng.uniform(-3.0, 3.0);
      sum_atoms[i].value = f.atoms()[i].value + g_atoms[i].value;
    }
    const DiscreteFunction g(g_atoms), h(sum_atoms);
    for (std::uint64_t m : {1, 2, 7, 40})
      EXPECT_LE(m_norm_exact(h, m), m_norm_exact(f, m) + m_norm_exact(g, m) + 1e-12);
  }
}

TEST(IndicatorNorm, Examples) {
  EXPECT_DOUBLE_EQ(indicator_norm(0.5, 2), 0.75);
  EXPECT_EQ(indicator_norm(1.0, 12345), 1.0);
  EXPECT_NEAR(indicator_norm(0.1, 10), 0.6513215599, 1e-10);
  EXPECT_EQ(indicator_norm(0.0, 10), 0.0);
  EXPECT_THROW(indicator_norm(1.1, 1), std::invalid_argument);
  EXPECT_THROW(indicator_norm(-0.1, 1), std::invalid_argument);
}

TEST(IndicatorNorm, MonotoneInPAndM) {
  for (double p = 0.01; p < 1.0; p += 0.07)
    for (std::uint64_t m = 1; m < 200; m += 13) {
      EXPECT_LE(indicator_norm(p, m), indicator_norm(std::min(p + 0.01, 1.0), m));
      EXPECT_LE(indicator_norm(p, m), indicator_norm(p, m + 1));
    }
}

TEST(MNormMc, ConstantSamplerHasZeroError) {
  const auto est = m_norm_mc([](Rng&) { return 5.0; }, 3, 10, 1);
  EXPECT_EQ(est.mean, 5.0);
  EXPECT_EQ(est.std_error, 0.0);
  EXPECT_EQ(est.trials, 10u);
}

TEST(MNormMc, IndicatorWithinFourSigma) {
  const auto est = m_norm_mc(AtomSampler(half_indicator()), 2, 100000, 42);
  EXPECT_LE(std::abs(est.mean - 0.75), 4.0 * est.std_error);
}

TEST(MNormMc, DeterministicAndThreadIndependent) {
  const AtomSampler sampler(three_level());
  const auto a = m_norm_mc(sampler, 3, 5000, 99, 1);
  const auto b = m_norm_mc(sampler, 3, 5000, 99, 1);
  const auto c = m_norm_mc(sampler, 3, 5000, 99, 4);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_THROW(m_norm_mc(sampler, 3, 1, 99), std::invalid_argument);
}

TEST(AvgTopQuantile, Examples) {
  EXPECT_DOUBLE_EQ(avg_top_quantile(uniform_4321(), 0.5), 3.5);
  EXPECT_NEAR(avg_top_quantile(uniform_4321(), 0.375), 11.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(avg_top_quantile(uniform_4321(), 1.0), 2.5);
  EXPECT_THROW(avg_top_quantile(uniform_4321(), 0.0), std::invalid_argument);
  EXPECT_THROW(avg_top_quantile(uniform_4321(), 1.01), std::invalid_argument);
}

TEST(AvgTopQuantile, DominatesRandomFractionalSubsets) {
  Rng rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    const auto f = oracle::random_function(rng, 10);
    const auto atoms = f.atoms();
    // Random fractional subset, rescaled to total mass p.
    std::vector<double> w(atoms.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = rng.uniform();
      mass += w[i] * atoms[i].mass;
    }
    double integral = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) integral += w[i] * atoms[i].mass * std::abs(atoms[i].value);
    EXPECT_LE(integral / mass, avg_top_quantile(f, mass) + 1e-12);
  }
}

TEST(Theorem3Bound, Examples) {
  const auto a = theorem3_bound(half_indicator(), 0.5, 2);
  EXPECT_DOUBLE_EQ(a.lhs, 0.75);
  EXPECT_DOUBLE_EQ(a.rhs, 0.75);
  const auto b = theorem3_bound(DiscreteFunction({{-2.5, 1.0}}), 1.0, 1);
  EXPECT_DOUBLE_EQ(b.lhs, 2.5);
  EXPECT_DOUBLE_EQ(b.rhs, 2.5);
  // lhs by enumeration of the 4^3 triples: 220/64.
  const auto c = theorem3_bound(uniform_4321(), 0.5, 3);
  EXPECT_NEAR(c.rhs, 3.0625, 1e-15);
  EXPECT_NEAR(c.lhs, 3.4375, 1e-15);
  EXPECT_NEAR(c.lhs, oracle::brute_force_m_norm(uniform_4321(), 3), 1e-15);
}

TEST(Theorem3Bound, SubsetVariantNeverExceedsLhs) {
  Rng rng(10);
  for (int rep = 0; rep < 200; ++rep) {
    const auto f = oracle::random_function(rng, 10);
    std::vector<double> w(f.size());
    for (auto& x : w) x = rng.uniform() < 0.5 ? 1.0 : rng.uniform();
    w[0] = 1.0;
    const auto m = 1 + rng.below(50);
    const auto b = theorem3_bound_for_subset(f, w, m);
    EXPECT_GE(b.lhs, b.rhs - 1e-12);
  }
}

}  // namespace
}  // namespace iunorm
