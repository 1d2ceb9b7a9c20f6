#pragma once

// Sign selection: for a system {f_i} find theta in {-1,+1}^n such that the
// best average of |sum theta_i f_i| over sets of measure 2^-k stays above
// c0 sqrt(nk), plus the dyadic-grouping bound that turns sign-sum control
// into control for arbitrary coefficients.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "iunorm/norm_core.hpp"
#include "iunorm/parallel.hpp"
#include "iunorm/random.hpp"
#include "iunorm/random_ensemble.hpp"
#include "iunorm/trig_poly.hpp"

namespace iunorm {

using SignVector = std::vector<int>;

namespace detail {

inline void require_representable(double min_mass, int k) {
  if (k < 1) throw std::invalid_argument("problem18_lhs: k must be >= 1");
  const double p = std::ldexp(1.0, -k);
  if (p < min_mass * (1.0 - 1e-12))
    throw std::invalid_argument("problem18_lhs: 2^-k = " + std::to_string(p) +
                                " is below the finest atom mass; use a finer net");
}

}  // namespace detail

// sup over sets e with mu(e) = 2^-k of 2^k * integral_e |F|.
inline double problem18_lhs(const DiscreteFunction& f, int k) {
  detail::require_representable(f.min_mass(), k);
  return avg_top_quantile(f, std::ldexp(1.0, -k));
}

inline double problem18_lhs(const NetVector& v, int k) {
  if (v.samples.empty()) throw std::invalid_argument("problem18_lhs: empty net");
  detail::require_representable(1.0 / static_cast<double>(v.samples.size()), k);
  const auto levels = uniform_levels(v.samples);
  return avg_top_quantile_levels(levels, std::ldexp(1.0, -k));
}

struct CertificateRow {
  int k = 0;
  double lhs = 0.0;
  double target = 0.0;
  bool pass = false;
  double m_norm = 0.0;     // ||F||_{2^k,inf}
  bool bridge_ok = false;  // m_norm <= 2 * lhs
};

struct Certificate18 {
  SignVector theta;
  std::vector<CertificateRow> rows;

  bool all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
  }
  bool bridge_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.bridge_ok; });
  }
  // min_k lhs_k / sqrt(n k).
  double min_ratio(std::size_t n) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) best = std::min(best, r.lhs / std::sqrt(static_cast<double>(n) * r.k));
    return best;
  }
};

// Largest k covered: floor(log2 n), at least 1.
inline int dyadic_k_max(std::size_t n) {
  int k = 0;
  while ((std::size_t{1} << (k + 1)) <= n) ++k;
  return std::max(k, 1);
}

namespace detail {

inline bool bridge_holds(double m_norm, double lhs) { return m_norm <= 2.0 * lhs * (1.0 + 1e-12) + 1e-300; }

inline std::vector<CertificateRow> certificate_rows(std::span<const Level> levels, double min_mass, std::size_t n,
                                                    int k_max, double c0) {
  if (k_max > dyadic_k_max(n)) throw std::invalid_argument("verify_18: k_max exceeds log2(n)");
  std::vector<CertificateRow> rows;
  for (int k = 1; k <= k_max; ++k) {
    require_representable(min_mass, k);
    CertificateRow r;
    r.k = k;
    r.lhs = avg_top_quantile_levels(levels, std::ldexp(1.0, -k));
    r.target = c0 * std::sqrt(static_cast<double>(n) * k);
    r.pass = r.lhs >= r.target;
    r.m_norm = m_norm_from_levels(levels, std::uint64_t{1} << k);
    r.bridge_ok = bridge_holds(r.m_norm, r.lhs);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace detail

inline Certificate18 verify_18(const NetVector& f, std::size_t n, int k_max, double c0, SignVector theta = {}) {
  if (f.samples.empty()) throw std::invalid_argument("verify_18: empty net");
  const auto levels = uniform_levels(f.samples);
  return {std::move(theta),
          detail::certificate_rows(levels, 1.0 / static_cast<double>(f.samples.size()), n, k_max, c0)};
}

inline Certificate18 verify_18(const DiscreteFunction& f, std::size_t n, int k_max, double c0, SignVector theta = {}) {
  const auto levels = f.levels();
  return {std::move(theta), detail::certificate_rows(levels, f.min_mass(), n, k_max, c0)};
}

inline nlohmann::json certificate_to_json(const Certificate18& c) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : c.rows) rows.push_back({{"k", r.k}, {"lhs", r.lhs}, {"target", r.target}, {"pass", r.pass}});
  return {{"theta", c.theta}, {"rows", rows}};
}

struct SignSearchOptions {
  double moment_bound = 2.0;
  // Branch threshold: an attempt with ||F||_1 >= n^{1/2 + delta} is flagged.
  double delta = 0.25;
  bool refine = false;
  unsigned threads = 1;
};

struct SignSearchResult {
  Certificate18 best;
  std::size_t best_attempt = 0;
  double best_min_ratio = 0.0;
  std::vector<double> attempt_min_ratios;
  std::size_t bridge_violations = 0;  // over all (attempt, k) pairs examined
  double max_l1 = 0.0;                // largest ||F^theta||_1 seen
  bool large_l1_branch = false;       // some attempt reached n^{1/2 + delta}
  bool refined_improved = false;
};

namespace detail {

inline double sign_score(std::span<const double> values, std::size_t n, int k_max) {
  const auto levels = uniform_levels(values);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_max; ++k)
    best = std::min(best, avg_top_quantile_levels(levels, std::ldexp(1.0, -k)) / std::sqrt(static_cast<double>(n) * k));
  return best;
}

}  // namespace detail

// Random-sign search: attempt t draws theta from derive_seed(seed, t); the
// attempt maximizing min_k lhs_k / sqrt(nk) wins, ties to the lowest index.
// With options.refine, one greedy pass of single-sign flips follows.
inline SignSearchResult search_signs(const FunctionSystem& fs, std::size_t attempts, double c0, std::uint64_t seed,
                                     const SignSearchOptions& options = {}) {
  if (attempts == 0) throw std::invalid_argument("search_signs: attempts must be >= 1");
  if (!fs.satisfies_l1_condition(options.moment_bound))
    throw std::invalid_argument("search_signs: system fails the ||f_i||_1 = 1, ||f_i||_3 <= M gate");
  const std::size_t n = fs.count();
  const int k_max = dyadic_k_max(n);
  const double min_mass = 1.0 / static_cast<double>(fs.net_size());
  detail::require_representable(min_mass, k_max);
  const double l1_threshold = std::pow(static_cast<double>(n), 0.5 + options.delta);

  struct AttemptOutcome {
    double score = 0.0;
    std::size_t bridge_violations = 0;
    double l1 = 0.0;
  };
  std::vector<AttemptOutcome> outcomes(attempts);
  const auto draw_theta = [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    std::vector<double> theta(n);
    for (auto& s : theta) s = rng.rademacher();
    return theta;
  };
  parallel_for(attempts, options.threads, [&](std::size_t t) {
    const auto values = fs.combine(draw_theta(t));
    const auto levels = uniform_levels(values);
    AttemptOutcome o;
    o.score = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= k_max; ++k) {
      const double lhs = avg_top_quantile_levels(levels, std::ldexp(1.0, -k));
      o.score = std::min(o.score, lhs / std::sqrt(static_cast<double>(n) * k));
      if (!detail::bridge_holds(m_norm_from_levels(levels, std::uint64_t{1} << k), lhs)) ++o.bridge_violations;
    }
    o.l1 = avg_top_quantile_levels(levels, 1.0);
    outcomes[t] = o;
  });

  SignSearchResult result;
  result.attempt_min_ratios.reserve(attempts);
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < attempts; ++t) {
    const auto& o = outcomes[t];
    result.attempt_min_ratios.push_back(o.score);
    result.bridge_violations += o.bridge_violations;
    result.max_l1 = std::max(result.max_l1, o.l1);
    if (o.score > best_score) {
      best_score = o.score;
      result.best_attempt = t;
    }
  }
  result.large_l1_branch = result.max_l1 >= l1_threshold;

  auto theta = draw_theta(result.best_attempt);
  auto values = fs.combine(theta);
  if (options.refine) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = fs.row(i);
      const double step = -2.0 * theta[i];
      for (std::size_t k = 0; k < values.size(); ++k) values[k] += step * row[k];
      const double score = detail::sign_score(values, n, k_max);
      if (score > best_score) {
        best_score = score;
        theta[i] = -theta[i];
        result.refined_improved = true;
      } else {
        for (std::size_t k = 0; k < values.size(); ++k) values[k] -= step * row[k];
      }
    }
    // Recombine to drop the rounding drift of the incremental updates.
    values = fs.combine(theta);
  }
  SignVector signs(theta.size());
  std::transform(theta.begin(), theta.end(), signs.begin(), [](double s) { return s > 0.0 ? 1 : -1; });
  result.best = verify_18(NetVector{values, 0.0}, n, k_max, c0, std::move(signs));
  result.best_min_ratio = result.best.min_ratio(n);
  return result;
}

// Seminorm on coefficient vectors, standing for a -> ||sum a_i w_i||.
using Seminorm = std::function<double(std::span<const double>)>;

struct LemmaInstance {
  double beta = 0.0;
  double c11 = 1.0;
  std::size_t n = 0;
  Seminorm seminorm;

  LemmaInstance(double beta_, double c11_, std::size_t n_, Seminorm seminorm_)
      : beta(beta_), c11(c11_), n(n_), seminorm(std::move(seminorm_)) {
    if (!(beta >= 0.0 && beta < 0.5)) throw std::invalid_argument("LemmaInstance: beta must lie in [0, 1/2)");
    if (!(c11 > 0.0)) throw std::invalid_argument("LemmaInstance: C11 must be positive");
    if (n == 0) throw std::invalid_argument("LemmaInstance: n must be >= 1");
    if (!seminorm) throw std::invalid_argument("LemmaInstance: missing seminorm");
  }

  double sign_sum_bound() const { return c11 * std::pow(static_cast<double>(n), 0.5 + beta); }
};

// Probe check of the hypotheses: unit basis vectors have seminorm 1, random
// sign sums stay within C11 n^{1/2+beta}, and the seminorm is absolutely
// homogeneous and subadditive on random probe pairs.
inline bool check_lemma_probes(const LemmaInstance& inst, std::size_t probes, std::uint64_t seed) {
  const std::size_t n = inst.n;
  constexpr double tol = 1e-9;
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = 1.0;
    if (std::abs(inst.seminorm(e) - 1.0) > tol) return false;
    e[i] = 0.0;
  }
  Rng rng(seed);
  const double limit = inst.sign_sum_bound() * (1.0 + tol);
  for (std::size_t p = 0; p < probes; ++p) {
    std::vector<double> theta(n), x(n), y(n), sum(n), scaled(n);
    const double c = rng.uniform(-3.0, 3.0);
    for (std::size_t i = 0; i < n; ++i) {
      theta[i] = rng.rademacher();
      x[i] = rng.normal();
      y[i] = rng.normal();
      sum[i] = x[i] + y[i];
      scaled[i] = c * x[i];
    }
    if (inst.seminorm(theta) > limit) return false;
    const double nx = inst.seminorm(x);
    const double ny = inst.seminorm(y);
    if (inst.seminorm(sum) > (nx + ny) * (1.0 + tol) + tol) return false;
    if (std::abs(inst.seminorm(scaled) - std::abs(c) * nx) > tol * (1.0 + std::abs(c) * nx)) return false;
  }
  return true;
}

struct DyadicBound {
  double bound = 0.0;             // bound on ||sum a_i w_i|| in the caller's scale
  double normalized_bound = 0.0;  // same, after rescaling to sum a^2 = n
  double scale = 1.0;             // normalized coefficients = scale * a
  int K = 0;
  std::vector<std::vector<std::size_t>> groups;  // groups[k-1] = sigma_k
  std::vector<std::size_t> residual_indices;     // |b_j| < 2^-K sqrt(n)
  std::vector<std::size_t> peeled_indices;       // |b_j| >= sqrt(n)
};

// Constant in ||W|| <= C12 n^{3/4 + beta/2} for the grouping below (with
// sum a^2 = n): 2^K is within a factor sqrt(2) of n^{1/4 + beta/2}.
inline double lemma_c12(double c11) { return 4.0 * std::numbers::sqrt2 + std::numbers::sqrt2 * c11 + 1.0; }

// Rescale a to sum a^2 = n; peel |b_j| >= sqrt(n) by the triangle
// inequality; group sigma_k = {j : 2^-k sqrt(n) <= |b_j| < 2^{-k+1} sqrt(n)}
// for k = 1..K with K = round((1/4 + beta/2) log2 n); bound the rest through
// the sign-sum hypothesis. Result: peeled + sqrt(n)(2^{K+2} + C11 2^-K n^{1/2+beta}).
inline DyadicBound dyadic_bound(const LemmaInstance& inst, std::span<const double> a) {
  if (a.empty()) throw std::invalid_argument("dyadic_bound: empty coefficient vector");
  if (a.size() != inst.n) throw std::invalid_argument("dyadic_bound: dimension mismatch");
  const double n = static_cast<double>(inst.n);
  const double root_n = std::sqrt(n);
  double s2 = 0.0;
  for (double v : a) s2 += v * v;
  DyadicBound out;
  out.K = std::max(0, static_cast<int>(std::lround((0.25 + inst.beta / 2.0) * std::log2(n))));
  out.groups.assign(static_cast<std::size_t>(out.K), {});
  if (s2 == 0.0) {
    for (std::size_t j = 0; j < a.size(); ++j) out.residual_indices.push_back(j);
    return out;
  }
  out.scale = root_n / std::sqrt(s2);
  double peeled = 0.0;
  const double residual_cut = std::ldexp(root_n, -out.K);
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double b = std::abs(a[j]) * out.scale;
    if (b >= root_n) {
      out.peeled_indices.push_back(j);
      peeled += b;
    } else if (b < residual_cut) {
      out.residual_indices.push_back(j);
    } else {
      int k = 1;
      while (k < out.K && b < std::ldexp(root_n, -k)) ++k;
      out.groups[static_cast<std::size_t>(k - 1)].push_back(j);
    }
  }
  out.normalized_bound =
      peeled + root_n * (std::ldexp(1.0, out.K + 2) + inst.c11 * std::ldexp(1.0, -out.K) * std::pow(n, 0.5 + inst.beta));
  out.bound = out.normalized_bound / out.scale;
  return out;
}

// Length floor(n^{1/2+beta}) of the l1 block, capped at n.
inline std::size_t sharpness_block_length(double beta, std::size_t n) {
  if (!(beta >= 0.0 && beta < 0.5)) throw std::invalid_argument("sharpness_seminorm: beta must lie in [0, 1/2)");
  const double raw = std::pow(static_cast<double>(n), 0.5 + beta);
  const auto len = static_cast<std::size_t>(std::floor(raw + 1e-9 * std::max(1.0, raw)));
  return std::min(len, n);
}

// max(sum_{k<=L} |a_k|, max_{k>L} |a_k|), L = floor(n^{1/2+beta}).
inline double sharpness_seminorm(double beta, std::size_t n, std::span<const double> a) {
  if (a.size() != n) throw std::invalid_argument("sharpness_seminorm: dimension mismatch");
  const std::size_t len = sharpness_block_length(beta, n);
  double head = 0.0;
  double tail = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k < len)
      head += std::abs(a[k]);
    else
      tail = std::max(tail, std::abs(a[k]));
  }
  return std::max(head, tail);
}

// W = sum_{k<=L} w_k.
inline std::vector<double> sharpness_witness(double beta, std::size_t n) {
  std::vector<double> a(n, 0.0);
  std::fill_n(a.begin(), sharpness_block_length(beta, n), 1.0);
  return a;
}

// ||W|| / (n^{1/4+beta/2} (sum a^2)^{1/2}) for the witness.
inline double sharpness_witness_ratio(double beta, std::size_t n) {
  const auto w = sharpness_witness(beta, n);
  double s2 = 0.0;
  for (double v : w) s2 += v * v;
  return sharpness_seminorm(beta, n, w) / (std::pow(static_cast<double>(n), 0.25 + beta / 2.0) * std::sqrt(s2));
}

}  // namespace iunorm
