#pragma once

// Random polynomials F = sum_i a_i xi_i f_i over a function system sampled
// on a uniform net, and the quantities used to bound E ||F||_{m,inf}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iunorm/norm_core.hpp"
#include "iunorm/parallel.hpp"
#include "iunorm/random.hpp"
#include "iunorm/trig_poly.hpp"

namespace iunorm {

enum class XiKind { rademacher, gaussian };

inline XiKind parse_xi_kind(std::string_view name) {
  if (name == "rademacher") return XiKind::rademacher;
  if (name == "gaussian") return XiKind::gaussian;
  throw std::invalid_argument("unsupported distribution '" + std::string(name) +
                              "' (only rademacher and gaussian have the required tails)");
}

inline std::string_view to_string(XiKind kind) { return kind == XiKind::rademacher ? "rademacher" : "gaussian"; }

// Both kinds are centered with unit variance.
inline double third_absolute_moment(XiKind kind) {
  return kind == XiKind::rademacher ? 1.0 : 2.0 * std::sqrt(2.0 / std::numbers::pi);
}

class EnsembleSpec {
 public:
  explicit EnsembleSpec(XiKind kind, double moment_bound = 2.0) : kind_(kind), moment_bound_(moment_bound) {
    if (!(moment_bound >= 1.0)) throw std::invalid_argument("EnsembleSpec: moment bound M must be >= 1");
    if (third_absolute_moment(kind) > moment_bound * moment_bound * moment_bound)
      throw std::invalid_argument("EnsembleSpec: E|xi|^3 exceeds M^3");
  }

  XiKind kind() const noexcept { return kind_; }
  double moment_bound() const noexcept { return moment_bound_; }

  double draw(Rng& rng) const { return kind_ == XiKind::rademacher ? rng.rademacher() : rng.normal(); }

 private:
  XiKind kind_;
  double moment_bound_;
};

inline std::vector<double> sample_xi(const EnsembleSpec& spec, std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("sample_xi: n must be >= 1");
  std::vector<double> xi(n);
  for (auto& x : xi) x = spec.draw(rng);
  return xi;
}

inline std::vector<double> sample_xi(const EnsembleSpec& spec, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_xi(spec, n, rng);
}

// (sum a^2)^2 / sum a^4, in [1, n].
inline double r_statistic(std::span<const double> a) {
  double s2 = 0.0;
  double s4 = 0.0;
  for (double v : a) {
    s2 += v * v;
    s4 += v * v * v * v;
  }
  if (!(s4 > 0.0)) throw std::invalid_argument("r_statistic: zero coefficient vector");
  return s2 * s2 / s4;
}

struct CoefficientVector {
  std::vector<double> a;
  double r_stat = 0.0;

  explicit CoefficientVector(std::vector<double> coeffs) : a(std::move(coeffs)), r_stat(r_statistic(a)) {}

  static CoefficientVector ones(std::size_t n) { return CoefficientVector(std::vector<double>(n, 1.0)); }

  double sum_squares() const {
    double s = 0.0;
    for (double v : a) s += v * v;
    return s;
  }
};

// n functions sampled on a common uniform net of N points.
class FunctionSystem {
 public:
  FunctionSystem(std::size_t count, std::size_t net_size, std::vector<double> values, std::string name = {})
      : count_(count), net_size_(net_size), values_(std::move(values)), name_(std::move(name)) {
    if (count_ == 0 || net_size_ == 0) throw std::invalid_argument("FunctionSystem: empty system");
    if (values_.size() != count_ * net_size_) throw std::invalid_argument("FunctionSystem: value matrix size mismatch");
    const double inv_n = 1.0 / static_cast<double>(net_size_);
    for (std::size_t i = 0; i < count_; ++i) {
      double l1 = 0.0, l2 = 0.0, l3 = 0.0, sup = 0.0;
      for (double v : row(i)) {
        const double a = std::abs(v);
        l1 += a;
        l2 += a * a;
        l3 += a * a * a;
        sup = std::max(sup, a);
      }
      l1_norms_.push_back(l1 * inv_n);
      l2_norms_.push_back(std::sqrt(l2 * inv_n));
      l3_norms_.push_back(std::cbrt(l3 * inv_n));
      sup_norms_.push_back(sup);
    }
  }

  // sqrt(2) cos(i t), i = 1..n: unit L2 norm under dt/2pi.
  static FunctionSystem cosine(std::size_t n, std::size_t net_size) {
    std::vector<double> values(n * net_size);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = sample_on_net(TrigPoly::cosine(static_cast<int>(i + 1), std::numbers::sqrt2), net_size);
      std::copy(row.samples.begin(), row.samples.end(), values.begin() + static_cast<std::ptrdiff_t>(i * net_size));
    }
    return FunctionSystem(n, net_size, std::move(values), "sqrt2_cos");
  }

  // Each row divided by its net L1 norm.
  FunctionSystem l1_normalized() const {
    auto values = values_;
    for (std::size_t i = 0; i < count_; ++i) {
      if (!(l1_norms_[i] > 0.0)) throw std::invalid_argument("FunctionSystem: zero function cannot be normalized");
      for (std::size_t k = 0; k < net_size_; ++k) values[i * net_size_ + k] /= l1_norms_[i];
    }
    return FunctionSystem(count_, net_size_, std::move(values), name_ + "_l1");
  }

  std::size_t count() const noexcept { return count_; }
  std::size_t net_size() const noexcept { return net_size_; }
  const std::string& name() const noexcept { return name_; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * net_size_, net_size_}; }
  std::span<const double> l1_norms() const noexcept { return l1_norms_; }
  std::span<const double> l2_norms() const noexcept { return l2_norms_; }
  std::span<const double> l3_norms() const noexcept { return l3_norms_; }
  double l3_bound() const { return *std::max_element(l3_norms_.begin(), l3_norms_.end()); }
  double max_sup_norm() const { return *std::max_element(sup_norms_.begin(), sup_norms_.end()); }

  // ||f_i||_2 = 1 (to 2%) and ||f_i||_3 <= M for every i.
  bool satisfies_condition_a(double moment_bound, double tolerance = 0.02) const {
    for (std::size_t i = 0; i < count_; ++i)
      if (std::abs(l2_norms_[i] - 1.0) > tolerance || l3_norms_[i] > moment_bound) return false;
    return true;
  }

  // ||f_i||_1 = 1 (to 2%) and ||f_i||_3 <= M for every i.
  bool satisfies_l1_condition(double moment_bound, double tolerance = 0.02) const {
    for (std::size_t i = 0; i < count_; ++i)
      if (std::abs(l1_norms_[i] - 1.0) > tolerance || l3_norms_[i] > moment_bound) return false;
    return true;
  }

  // sum_i weights_i f_i on the net.
  std::vector<double> combine(std::span<const double> weights) const {
    if (weights.size() != count_) throw std::invalid_argument("FunctionSystem: coefficient dimension mismatch");
    std::vector<double> out(net_size_, 0.0);
    for (std::size_t i = 0; i < count_; ++i) {
      const double w = weights[i];
      if (w == 0.0) continue;
      const double* r = values_.data() + i * net_size_;
      for (std::size_t k = 0; k < net_size_; ++k) out[k] += w * r[k];
    }
    return out;
  }

 private:
  std::size_t count_;
  std::size_t net_size_;
  std::vector<double> values_;
  std::string name_;
  std::vector<double> l1_norms_, l2_norms_, l3_norms_, sup_norms_;
};

inline NetVector realize(std::span<const double> a, std::span<const double> xi, const FunctionSystem& fs) {
  if (a.size() != fs.count() || xi.size() != fs.count())
    throw std::invalid_argument("random_poly_net: dimension mismatch");
  std::vector<double> weights(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) weights[i] = a[i] * xi[i];
  return NetVector{fs.combine(weights), 0.0};
}

// One realization of sum_i a_i xi_i f_i with xi drawn from `seed`.
inline NetVector random_poly_net(const EnsembleSpec& spec, std::span<const double> a, const FunctionSystem& fs,
                                 std::uint64_t seed) {
  if (a.size() != fs.count()) throw std::invalid_argument("random_poly_net: dimension mismatch");
  const auto xi = sample_xi(spec, a.size(), seed);
  return realize(a, xi, fs);
}

// Per-trial ||F||_{m,inf} for each m in m_list: result[j][t]. Trial t draws
// xi from derive_seed(seed, t) and shares the realization across m values.
inline std::vector<std::vector<double>> m_norm_trials(const EnsembleSpec& spec, std::span<const double> a,
                                                      const FunctionSystem& fs, std::span<const std::uint64_t> m_list,
                                                      std::uint64_t trials, std::uint64_t seed, unsigned threads = 1) {
  if (a.size() != fs.count()) throw std::invalid_argument("expected_m_norm: dimension mismatch");
  for (auto m : m_list) detail::require_m(m);
  std::vector<std::vector<double>> out(m_list.size(), std::vector<double>(trials));
  parallel_for(trials, threads, [&](std::size_t t) {
    const auto realization = random_poly_net(spec, a, fs, derive_seed(seed, t));
    const auto levels = uniform_levels(realization.samples);
    for (std::size_t j = 0; j < m_list.size(); ++j) out[j][t] = m_norm_from_levels(levels, m_list[j]);
  });
  return out;
}

inline std::vector<NormEstimate> expected_m_norms(const EnsembleSpec& spec, std::span<const double> a,
                                                  const FunctionSystem& fs, std::span<const std::uint64_t> m_list,
                                                  std::uint64_t trials, std::uint64_t seed, unsigned threads = 1) {
  if (trials < 2) throw std::invalid_argument("expected_m_norm: trials must be >= 2");
  const auto per_trial = m_norm_trials(spec, a, fs, m_list, trials, seed, threads);
  std::vector<NormEstimate> out;
  for (const auto& values : per_trial) out.push_back(summarize_trials(values, seed));
  return out;
}

inline NormEstimate expected_m_norm(const EnsembleSpec& spec, std::span<const double> a, const FunctionSystem& fs,
                                    std::uint64_t m, std::uint64_t trials, std::uint64_t seed, unsigned threads = 1) {
  const std::uint64_t ms[] = {m};
  return expected_m_norms(spec, a, fs, ms, trials, seed, threads).front();
}

// Lower-bound shape sqrt(sum a^2 * ln P), P = min(m, R) + 1.
inline double theorem1_rhs(std::span<const double> a, std::uint64_t m) {
  detail::require_m(m);
  const double r = r_statistic(a);
  double s2 = 0.0;
  for (double v : a) s2 += v * v;
  const double p = std::min(static_cast<double>(m), r) + 1.0;
  return std::sqrt(s2 * std::log(p));
}

// ||(sum a_i^2 f_i^2)^{1/2}||_{m,inf} * sqrt(1 + ln m) on the system's net.
inline double theorem2_rhs(const FunctionSystem& fs, std::span<const double> a, std::uint64_t m) {
  detail::require_m(m);
  if (a.size() != fs.count()) throw std::invalid_argument("theorem2_rhs: dimension mismatch");
  std::vector<double> g(fs.net_size(), 0.0);
  for (std::size_t i = 0; i < fs.count(); ++i) {
    const double w = a[i] * a[i];
    if (w == 0.0) continue;
    const auto r = fs.row(i);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] += w * r[k] * r[k];
  }
  for (auto& v : g) v = std::sqrt(v);
  return net_m_norm(g, m) * std::sqrt(1.0 + std::log(static_cast<double>(m)));
}

// max_i ||f_i||_inf * (sum a^2)^{1/2} * sqrt(1 + ln m).
inline double corollary2_rhs(const FunctionSystem& fs, std::span<const double> a, std::uint64_t m) {
  detail::require_m(m);
  if (a.size() != fs.count()) throw std::invalid_argument("corollary2_rhs: dimension mismatch");
  double s2 = 0.0;
  for (double v : a) s2 += v * v;
  return fs.max_sup_norm() * std::sqrt(s2) * std::sqrt(1.0 + std::log(static_cast<double>(m)));
}

struct BoundReport {
  std::size_t n = 0;
  std::uint64_t m = 0;
  double r_stat = 0.0;
  double p = 0.0;  // min(m, R) + 1
  NormEstimate lhs;
  double rhs = 0.0;
  double ratio = 0.0;
  std::uint64_t seed = 0;
};

inline BoundReport make_lower_bound_report(std::span<const double> a, std::uint64_t m, const NormEstimate& lhs) {
  BoundReport r;
  r.n = a.size();
  r.m = m;
  r.r_stat = r_statistic(a);
  r.p = std::min(static_cast<double>(m), r.r_stat) + 1.0;
  r.lhs = lhs;
  r.rhs = theorem1_rhs(a, m);
  r.ratio = lhs.mean / r.rhs;
  r.seed = lhs.seed;
  return r;
}

// Random +-1 coefficients r_k, k = -n..n.
inline TrigPoly random_sign_poly(int n, Rng& rng) {
  std::vector<Complex> c(2 * static_cast<std::size_t>(n) + 1);
  for (auto& z : c) z = rng.rademacher();
  return TrigPoly::from_coefficients(n, std::move(c));
}

inline double sup_over_net(const TrigPoly& p, std::size_t net_size) {
  const auto values = sample_values(p, net_size);
  double best = 0.0;
  for (const auto& v : values) best = std::max(best, std::abs(v));
  return best;
}

// E ||sum_{|k|<=n} r_k e^{ikt}||_inf / sqrt(n ln n), the sup taken over a
// net of net_factor * n points.
inline NormEstimate salem_zygmund_ratio(int n, std::uint64_t trials, std::uint64_t seed, unsigned threads = 1,
                                        std::size_t net_factor = 8) {
  if (n < 2) throw std::invalid_argument("salem_zygmund_ratio: n must be >= 2");
  if (trials < 2) throw std::invalid_argument("salem_zygmund_ratio: trials must be >= 2");
  const double scale = std::sqrt(n * std::log(static_cast<double>(n)));
  const std::size_t net = net_factor * static_cast<std::size_t>(n);
  std::vector<double> ratios(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    ratios[t] = sup_over_net(random_sign_poly(n, rng), net) / scale;
  });
  return summarize_trials(ratios, seed);
}

// All signs +1: the Dirichlet kernel, whose sup (2n+1) sits on the net.
inline double salem_zygmund_all_plus_ratio(int n, std::size_t net_factor = 8) {
  if (n < 2) throw std::invalid_argument("salem_zygmund_ratio: n must be >= 2");
  return sup_over_net(kernel(KernelKind::dirichlet, n), net_factor * static_cast<std::size_t>(n)) /
         std::sqrt(n * std::log(static_cast<double>(n)));
}

}  // namespace iunorm
