#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "iunorm/trig_poly.hpp"
#include "oracles.hpp"

namespace iunorm {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(TrigPoly, ValidatesShapeAndSymmetry) {
  EXPECT_THROW(TrigPoly(1, {1.0, 2.0}, false), std::invalid_argument);
  EXPECT_THROW(TrigPoly(1, {Complex{1, 1}, 0.0, Complex{1, 1}}, true), std::invalid_argument);
  EXPECT_NO_THROW(TrigPoly(1, {Complex{1, -1}, 0.0, Complex{1, 1}}, true));
  EXPECT_FALSE(TrigPoly::from_coefficients(1, {1.0, 0.0, -1.0}).real_valued());
}

TEST(TrigPoly, EvalExamples) {
  EXPECT_NEAR(TrigPoly::cosine(1).eval_real(0.0), 1.0, 1e-15);
  for (int n : {0, 1, 5, 40}) {
    EXPECT_NEAR(kernel(KernelKind::dirichlet, n).eval_real(0.0), 2 * n + 1, 1e-12);
    // sum_{|j|<=n} (1 - |j|/(n+1)) = (2n+1) - n = n + 1.
    EXPECT_NEAR(kernel(KernelKind::fejer, n).eval_real(0.0), n + 1, 1e-12);
  }
  Rng rng(1);
  const auto p = random_real_trig_poly(12, rng);
  for (double x : {0.1, 1.7, 4.4}) EXPECT_LE(std::abs(p.eval(x).imag()), 1e-10 * p.coeff_abs_sum());
}

TEST(SampleOnNet, Examples) {
  const auto c = sample_on_net(TrigPoly::constant(3.0), 8);
  ASSERT_EQ(c.net_size(), 8u);
  for (double v : c.samples) EXPECT_NEAR(v, 3.0, 1e-15);
  const auto cs = sample_on_net(TrigPoly::cosine(1), 4);
  const double expected[] = {1, 0, -1, 0};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(cs.samples[k], expected[k], 1e-15);
}

TEST(SampleOnNet, MatchesDirectSummation) {
  Rng rng(16);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 1 + static_cast<int>(rng.below(40));
    const auto p = random_real_trig_poly(n, rng);
    for (std::size_t big_n : {std::size_t{64}, std::size_t{3}, static_cast<std::size_t>(2 * n + 1), std::size_t{97}}) {
      const double origin = rep % 2 ? 0.3 : 0.0;
      const auto fast = sample_on_net(p, big_n, origin);
      const auto slow = oracle::direct_samples(p, big_n, origin);
      double scale = 0.0;
      for (const auto& v : slow) scale = std::max(scale, std::abs(v));
      for (std::size_t k = 0; k < big_n; ++k) EXPECT_NEAR(fast.samples[k], slow[k].real(), 1e-9 * scale);
    }
  }
}

TEST(SampleOnNet, ComplexPolynomialStoresModuli) {
  const auto p = TrigPoly::from_coefficients(1, {0.0, 0.0, 2.0});  // 2 e^{ix}
  for (double v : sample_on_net(p, 16).samples) EXPECT_NEAR(v, 2.0, 1e-14);
}

TEST(Kernel, Coefficients) {
  const auto f1 = kernel(KernelKind::fejer, 1);
  EXPECT_DOUBLE_EQ(f1.coeff(-1).real(), 0.5);
  EXPECT_DOUBLE_EQ(f1.coeff(0).real(), 1.0);
  EXPECT_DOUBLE_EQ(f1.coeff(1).real(), 0.5);
  const auto d2 = kernel(KernelKind::dirichlet, 2);
  for (int j = -2; j <= 2; ++j) EXPECT_EQ(d2.coeff(j), Complex{1.0});
  const auto f0 = kernel(KernelKind::fejer, 0);
  EXPECT_EQ(f0.order(), 0);
  EXPECT_EQ(f0.coeff(0), Complex{1.0});
  EXPECT_THROW(kernel(KernelKind::fejer, -1), std::invalid_argument);
}

TEST(Kernel, FejerIsNonnegative) {
  for (int n : {1, 7, 64, 300})
    for (double v : sample_on_net(kernel(KernelKind::fejer, n), 64 * static_cast<std::size_t>(n)).samples)
      EXPECT_GE(v, -1e-9);
}

TEST(AnalyticDerivative, Examples) {
  const auto d = analytic_derivative(TrigPoly::cosine(1), 1);
  for (double x : {0.0, 0.4, 2.0}) EXPECT_NEAR(d.eval_real(x), -std::sin(x), 1e-15);
  const auto z = analytic_derivative(TrigPoly::constant(4.0), 1);
  EXPECT_EQ(z.coeff(0), Complex{0.0});
  const auto d2 = analytic_derivative(TrigPoly::cosine(5), 2);
  for (double x : {0.0, 0.4, 2.0}) EXPECT_NEAR(d2.eval_real(x), -25.0 * std::cos(5 * x), 1e-12);
  EXPECT_THROW(analytic_derivative(TrigPoly::cosine(1), 0), std::invalid_argument);
}

TEST(RieszDerivative, Examples) {
  EXPECT_NEAR(riesz_derivative(TrigPoly::cosine(1), 0.0), 0.0, 1e-15);
  EXPECT_NEAR(riesz_derivative(TrigPoly::cosine(1), kPi / 2), -1.0, 1e-15);
  for (int n : {1, 3, 10}) EXPECT_NEAR(riesz_derivative(TrigPoly::constant(2.5), 0.7, n), 0.0, 1e-12 * n);
  EXPECT_THROW(riesz_derivative(TrigPoly::constant(1.0), 0.0), std::invalid_argument);
  EXPECT_THROW(riesz_derivative(TrigPoly::from_coefficients(1, {0.0, 0.0, 1.0}), 0.0), std::invalid_argument);
}

TEST(RieszDerivative, WeightsSumToN) {
  for (int n : {1, 2, 17, 128, 1000}) {
    double s = 0.0;
    for (const auto& node : riesz_nodes(n)) s += node.weight;
    EXPECT_NEAR(s, n, 1e-9 * n);
  }
}

TEST(RieszDerivative, MatchesAnalyticDerivative) {
  Rng rng(6);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + static_cast<int>(rng.below(64));
    const auto p = random_real_trig_poly(n, rng);
    const auto d = analytic_derivative(p, 1);
    double max_p = 0.0;
    for (double v : sample_on_net(p, 64 * static_cast<std::size_t>(n)).samples) max_p = std::max(max_p, std::abs(v));
    for (int i = 0; i < 8; ++i) {
      const double x = rng.uniform(0.0, kTwoPi);
      EXPECT_NEAR(riesz_derivative(p, x), d.eval_real(x), 1e-8 * n * max_p);
    }
  }
}

TEST(UniformNormEstimate, Examples) {
  EXPECT_NEAR(uniform_norm_estimate(TrigPoly::cosine(1)), 1.0, 1e-15);
  for (int n : {1, 4, 33}) EXPECT_GE(uniform_norm_estimate(kernel(KernelKind::dirichlet, n)), 2 * n + 1 - 1e-9);
  EXPECT_THROW(uniform_norm_estimate(TrigPoly::constant(1.0)), std::invalid_argument);
}

TEST(UniformNormEstimate, WithinBernsteinWindowOfFineNet) {
  Rng rng(32);
  for (int rep = 0; rep < 20; ++rep) {
    const auto p = random_real_trig_poly(32, rng);
    double fine = 0.0;
    for (double v : sample_on_net(p, 64 * 32).samples) fine = std::max(fine, std::abs(v));
    const double coarse = uniform_norm_estimate(p);
    EXPECT_LE(coarse, fine * (1 + 1e-12));
    EXPECT_LE(fine, 4.67 * coarse);
  }
}

TEST(UniformNormEstimate, RecoveredByNetNormWithMEqualN) {
  Rng rng(33);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + static_cast<int>(rng.below(128));
    const auto p = random_real_trig_poly(n, rng);
    const double ratio = net_m_norm(sample_on_net(p, 8 * static_cast<std::size_t>(n)), static_cast<std::uint64_t>(n)) /
                         uniform_norm_estimate(p);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LE(hi, 1.0 + 1e-12);
  EXPECT_LE(hi / lo, 6.0);
}

TEST(NetMNorm, Examples) {
  EXPECT_DOUBLE_EQ(net_m_norm(NetVector{{1.0, 0.0}}, 2), 0.75);
  EXPECT_NEAR(net_m_norm(NetVector{{-2.0, -2.0, -2.0, -2.0}}, 9), 2.0, 1e-15);
  EXPECT_NEAR(net_m_norm(NetVector{{3.0, 1.0, 2.0}}, 2), 22.0 / 9.0, 1e-15);
  EXPECT_THROW(net_m_norm(NetVector{}, 1), std::invalid_argument);
}

TEST(NetMNorm, MatchesIndexTupleEnumeration) {
  Rng rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(1 + rng.below(6));
    for (auto& v : x) v = std::round(rng.uniform(-4, 4));
    for (int m = 1; m <= 3; ++m) EXPECT_NEAR(net_m_norm(x, m), oracle::brute_force_net_m_norm(x, m), 1e-12);
  }
}

TEST(DiscretizationGap, Examples) {
  const auto c = discretization_gap(TrigPoly::constant(2.0), 3, 8);
  EXPECT_EQ(c.rel_gap, 0.0);
  const auto g = discretization_gap(TrigPoly::cosine(1), 1, 64);
  EXPECT_NEAR(g.continuous_approx, 2.0 / kPi, 1e-3);
  // 8-point Riemann sum of |cos|: (1 + sqrt2) / 4.
  EXPECT_NEAR(g.net8n, (1.0 + std::sqrt(2.0)) / 4.0, 1e-12);
  EXPECT_NEAR(g.rel_gap, 1.0 - (1.0 + std::sqrt(2.0)) * kPi / 8.0, 1e-3);
  EXPECT_LT(g.rel_gap, kPi / 4.0 + 0.01);
  EXPECT_THROW(discretization_gap(TrigPoly::cosine(1), 1, 7), std::invalid_argument);
}

TEST(DiscretizationGap, L1NormOfCosineByQuadrature) {
  const double l1 = oracle::simpson([](double t) { return std::abs(std::cos(t)); }, 0.0, kTwoPi, 20000) / kTwoPi;
  EXPECT_NEAR(l1, 2.0 / kPi, 1e-9);
}

TEST(TrigPolyCsv, RoundTripAndErrors) {
  Rng rng(9);
  const auto p = random_real_trig_poly(5, rng);
  std::stringstream s;
  write_trig_poly_csv(s, p);
  const auto q = read_trig_poly_csv(s);
  ASSERT_EQ(q.order(), 5);
  EXPECT_TRUE(q.real_valued());
  for (int j = -5; j <= 5; ++j) EXPECT_EQ(q.coeff(j), p.coeff(j));

  std::istringstream gap("j,re,im\n-1,1,0\n1,1,0\n");
  EXPECT_THROW(read_trig_poly_csv(gap), ParseError);
  std::istringstream dup("j,re,im\n0,1,0\n0,1,0\n");
  EXPECT_THROW(read_trig_poly_csv(dup), ParseError);
  std::istringstream header("k,re,im\n0,1,0\n");
  EXPECT_THROW(read_trig_poly_csv(header), ParseError);
}

TEST(NetCsv, Layout) {
  std::ostringstream s;
  write_net_csv(s, sample_on_net(TrigPoly::cosine(1), 4));
  const std::string text = s.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "k,t_k,value");
  EXPECT_NE(text.find("\n1,0,1\n"), std::string::npos);
}

}  // namespace
}  // namespace iunorm
