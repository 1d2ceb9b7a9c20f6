#pragma once

// Integral-uniform norm ||f||_{m,inf} = E max(|f(x_1)|, ..., |f(x_m)|) for
// x_i drawn independently from the underlying probability measure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "iunorm/discrete_function.hpp"
#include "iunorm/parallel.hpp"
#include "iunorm/random.hpp"

namespace iunorm {

struct NormEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  bool operator==(const NormEstimate&) const = default;
};

// Mean and plain CLT standard error of per-trial values, summed in index
// order so the result is independent of how the values were produced.
inline NormEstimate summarize_trials(std::span<const double> values, std::uint64_t seed) {
  if (values.size() < 2) throw std::invalid_argument("summarize_trials: need at least 2 trials");
  const double n = static_cast<double>(values.size());
  const double mean = accurate_sum(values) / n;
  std::vector<double> sq;
  sq.reserve(values.size());
  for (double v : values) sq.push_back((v - mean) * (v - mean));
  const double var = accurate_sum(sq) / (n - 1.0);
  return {mean, std::sqrt(var / n), values.size(), seed};
}

// Levels of |x| under the uniform measure 1/N on the indices of x.
inline std::vector<Level> uniform_levels(std::span<const double> values) {
  std::vector<double> abs_values(values.size());
  std::transform(values.begin(), values.end(), abs_values.begin(), [](double v) { return std::abs(v); });
  std::sort(abs_values.begin(), abs_values.end(), std::greater<>());
  const double n = static_cast<double>(values.size());
  std::vector<Level> levels;
  std::size_t i = 0;
  while (i < abs_values.size()) {
    std::size_t j = i + 1;
    while (j < abs_values.size() && abs_values[j] == abs_values[i]) ++j;
    levels.push_back({abs_values[i], static_cast<double>(j - i) / n});
    i = j;
  }
  return levels;
}

namespace detail {

// log(1 - S_k) for k = 0..r, S_k the mass of the k largest levels.
// Small S uses log1p(-S) from the top; large S uses the complementary mass
// summed from the bottom. The last entry is exactly -inf.
inline std::vector<double> log_complement_masses(std::span<const Level> levels) {
  const std::size_t r = levels.size();
  std::vector<double> prefix(r + 1, 0.0);
  std::vector<double> suffix(r + 1, 0.0);
  for (std::size_t k = 0; k < r; ++k) prefix[k + 1] = prefix[k] + levels[k].mass;
  for (std::size_t k = r; k-- > 0;) suffix[k] = suffix[k + 1] + levels[k].mass;
  std::vector<double> log_q(r + 1);
  log_q[0] = 0.0;
  for (std::size_t k = 1; k <= r; ++k) {
    if (k == r)
      log_q[k] = -std::numeric_limits<double>::infinity();
    else if (prefix[k] < 0.5)
      log_q[k] = std::log1p(-prefix[k]);
    else
      log_q[k] = std::log(suffix[k]);
  }
  return log_q;
}

inline void require_m(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("m must be >= 1");
}

}  // namespace detail

// Sum over levels u_1 > u_2 > ... of u_k [(1-S_{k-1})^m - (1-S_k)^m]. Each
// difference is formed as (1-S_{k-1})^m * -expm1(m log((1-S_k)/(1-S_{k-1})))
// so neither cancellation nor underflow hurts large m.
inline double m_norm_from_levels(std::span<const Level> levels, std::uint64_t m) {
  detail::require_m(m);
  if (levels.empty()) throw std::invalid_argument("m_norm: empty function");
  const double md = static_cast<double>(m);
  const auto log_q = detail::log_complement_masses(levels);
  double sum = 0.0;
  for (std::size_t k = 1; k <= levels.size(); ++k) {
    const double prev = std::exp(md * log_q[k - 1]);
    double weight;
    if (std::isinf(log_q[k]))
      weight = prev;
    else
      weight = prev * -std::expm1(md * (log_q[k] - log_q[k - 1]));
    sum += levels[k - 1].abs_value * weight;
  }
  return sum;
}

// mu{|f| > t}, strict.
inline double lambda_value(const DiscreteFunction& f, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("lambda_value: t must be >= 0");
  std::vector<double> masses;
  for (const auto& a : f.atoms())
    if (std::abs(a.value) > t) masses.push_back(a.mass);
  return accurate_sum(masses);
}

inline double m_norm_exact(const DiscreteFunction& f, std::uint64_t m) {
  detail::require_m(m);
  const auto levels = f.levels();
  return m_norm_from_levels(levels, m);
}

// Integral of 1 - (1 - lambda_f(t))^m over t >= 0, summed exactly over the
// steps of lambda_f: sum_k (u_k - u_{k+1}) (1 - (1 - S_k)^m), u_{r+1} = 0.
inline double m_norm_from_lambda(const DiscreteFunction& f, std::uint64_t m) {
  detail::require_m(m);
  const auto levels = f.levels();
  const auto log_q = detail::log_complement_masses(levels);
  const double md = static_cast<double>(m);
  double sum = 0.0;
  for (std::size_t k = 1; k <= levels.size(); ++k) {
    const double next = k < levels.size() ? levels[k].abs_value : 0.0;
    const double tail = std::isinf(log_q[k]) ? 1.0 : -std::expm1(md * log_q[k]);
    sum += (levels[k - 1].abs_value - next) * tail;
  }
  return sum;
}

// 1 - (1 - p)^m, the norm of an indicator of a set of measure p.
inline double indicator_norm(double p, std::uint64_t m) {
  detail::require_m(m);
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("indicator_norm: p must lie in [0, 1]");
  if (p == 1.0) return 1.0;
  return -std::expm1(static_cast<double>(m) * std::log1p(-p));
}

// Monte Carlo estimate of E max_{i<=m} |X_i| where sampler(Rng&) draws X.
// Trial t uses its own stream derive_seed(seed, t).
template <class Sampler>
NormEstimate m_norm_mc(Sampler&& sampler, std::uint64_t m, std::uint64_t trials, std::uint64_t seed,
                       unsigned threads = 1) {
  detail::require_m(m);
  if (trials < 2) throw std::invalid_argument("m_norm_mc: trials must be >= 2");
  std::vector<double> maxima(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    double best = 0.0;
    for (std::uint64_t i = 0; i < m; ++i) best = std::max(best, std::abs(static_cast<double>(sampler(rng))));
    maxima[t] = best;
  });
  return summarize_trials(maxima, seed);
}

// Draws atoms of f with probability equal to their mass.
class AtomSampler {
 public:
  explicit AtomSampler(const DiscreteFunction& f) {
    double acc = 0.0;
    for (const auto& a : f.atoms()) {
      acc += a.mass;
      cumulative_.push_back(acc);
      values_.push_back(a.value);
    }
  }

  double operator()(Rng& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), values_.size() - 1);
    return values_[idx];
  }

 private:
  std::vector<double> cumulative_;
  std::vector<double> values_;
};

// Largest mean of |f| over (fractional) sets of measure p: the top level
// set by |value|, with the boundary atom split so the mass is exactly p.
inline double avg_top_quantile_levels(std::span<const Level> levels_desc, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("avg_top_quantile: p must lie in (0, 1]");
  double remaining = p;
  double integral = 0.0;
  for (const auto& l : levels_desc) {
    if (remaining <= 0.0) break;
    const double take = std::min(l.mass, remaining);
    integral += take * l.abs_value;
    remaining -= take;
  }
  return integral / p;
}

inline double avg_top_quantile(const DiscreteFunction& f, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("avg_top_quantile: p must lie in (0, 1]");
  if (p == 1.0) return f.l1_norm();
  const auto levels = f.levels();
  return avg_top_quantile_levels(levels, p);
}

struct BoundPair {
  double lhs = 0.0;
  double rhs = 0.0;
};

// ||f||_{m,inf} against (1 - (1-p)^m) times the best average of |f| over a
// set of measure p.
inline BoundPair theorem3_bound(const DiscreteFunction& f, double p, std::uint64_t m) {
  return {m_norm_exact(f, m), indicator_norm(p, m) * avg_top_quantile(f, p)};
}

// Same right-hand side for an arbitrary fractional subset: weights[i] in
// [0, 1] is the fraction of atom i that belongs to the set.
inline BoundPair theorem3_bound_for_subset(const DiscreteFunction& f, std::span<const double> weights,
                                           std::uint64_t m) {
  if (weights.size() != f.size()) throw std::invalid_argument("theorem3_bound_for_subset: size mismatch");
  std::vector<double> mass_terms;
  std::vector<double> integral_terms;
  const auto atoms = f.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!(weights[i] >= 0.0 && weights[i] <= 1.0))
      throw std::invalid_argument("theorem3_bound_for_subset: weights must lie in [0, 1]");
    mass_terms.push_back(weights[i] * atoms[i].mass);
    integral_terms.push_back(weights[i] * atoms[i].mass * std::abs(atoms[i].value));
  }
  const double measure = std::min(1.0, accurate_sum(mass_terms));
  if (!(measure > 0.0)) throw std::invalid_argument("theorem3_bound_for_subset: empty set");
  return {m_norm_exact(f, m), indicator_norm(measure, m) * accurate_sum(integral_terms) / measure};
}

}  // namespace iunorm
