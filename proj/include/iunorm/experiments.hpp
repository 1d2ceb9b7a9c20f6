#pragma once

// Experiment commands behind the `iunorm` CLI. Each command maps a RunConfig
// to a Report whose rows carry the raw numbers and, where the underlying
// operation has a contract, a pass flag recomputable from the same row.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "iunorm/discrete_function.hpp"
#include "iunorm/format.hpp"
#include "iunorm/norm_core.hpp"
#include "iunorm/parallel.hpp"
#include "iunorm/random.hpp"
#include "iunorm/random_ensemble.hpp"
#include "iunorm/sign_select.hpp"
#include "iunorm/trig_poly.hpp"

namespace iunorm {

// Bad flags, missing inputs, malformed files: exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string command;
  std::vector<int> n_list;
  std::vector<std::uint64_t> m_list;
  std::string dist = "rademacher";
  std::string kind;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> net_factor;
  std::optional<std::size_t> net_size;
  std::optional<std::uint64_t> mc_trials;
  double c0 = 0.05;
  double beta = 0.0;
  double delta = 0.25;
  double moment_bound = 2.0;
  bool refine = false;
  std::string input_path;
  std::string poly_path;
  std::string output_path;
  OutputFormat format = OutputFormat::csv;
  unsigned threads = 1;
};

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Report {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  bool all_pass = true;
  // Replaces the generic JSON layout when a command has its own schema.
  std::optional<nlohmann::json> json_document;
  // Raw text output (file-format commands), emitted verbatim.
  std::optional<std::string> raw_text;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error(command + ": row width does not match columns");
    rows.push_back(std::move(row));
  }
};

inline std::string cell_to_string(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>)
          return v;
        else if constexpr (std::is_same_v<T, double>)
          return format_double(v);
        else if constexpr (std::is_same_v<T, bool>)
          return v ? "true" : "false";
        else
          return std::to_string(v);
      },
      c);
}

inline std::string to_csv(const Report& r) {
  if (r.raw_text) return *r.raw_text;
  std::ostringstream out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << r.columns[i];
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_to_string(row[i]);
    out << '\n';
  }
  return out.str();
}

inline std::string to_json(const Report& r) {
  if (r.json_document) return r.json_document->dump(2) + "\n";
  if (r.raw_text) return nlohmann::json{{"command", r.command}, {"text", *r.raw_text}}.dump(2) + "\n";
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i)
      std::visit([&](const auto& v) { obj[r.columns[i]] = v; }, row[i]);
    rows.push_back(std::move(obj));
  }
  return nlohmann::json{{"command", r.command}, {"all_pass", r.all_pass}, {"rows", rows}}.dump(2) + "\n";
}

inline std::string render(const Report& r, OutputFormat format) {
  return format == OutputFormat::csv ? to_csv(r) : to_json(r);
}

// Writes through a sibling temporary file and renames it into place.
inline void write_atomically(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

namespace detail {

inline std::uint64_t require_seed(const RunConfig& c) {
  if (!c.seed) throw UsageError(c.command + ": --seed is required");
  return *c.seed;
}

template <class T>
std::vector<T> or_default(const std::vector<T>& given, std::vector<T> fallback) {
  return given.empty() ? std::move(fallback) : given;
}

inline std::int64_t as_int(std::uint64_t v) { return static_cast<std::int64_t>(v); }

inline double fejer_dirichlet_log_scale(int n, std::uint64_t m) {
  return static_cast<double>(m) * (1.0 + std::log(static_cast<double>(n) / static_cast<double>(m)));
}

// Stream for polynomial `index` of degree n under `seed`.
inline std::uint64_t poly_seed(std::uint64_t seed, int n, std::size_t index) {
  return derive_seed(derive_seed(seed, static_cast<std::uint64_t>(n)), index);
}

}  // namespace detail

inline Report cmd_norm(const RunConfig& c) {
  if (c.input_path.empty()) throw UsageError("norm: --input is required");
  DiscreteFunction f;
  try {
    f = read_discrete_function_csv(c.input_path);
  } catch (const ParseError& e) {
    throw UsageError("norm: " + c.input_path + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw UsageError(std::string("norm: ") + e.what());
  }
  const auto m_list = detail::or_default(c.m_list, {1});
  Report r;
  r.command = "norm";
  if (!c.mc_trials) {
    r.columns = {"m", "norm"};
    for (auto m : m_list) r.add_row({detail::as_int(m), m_norm_exact(f, m)});
    return r;
  }
  const std::uint64_t seed = detail::require_seed(c);
  r.columns = {"m", "mean", "std_error", "trials", "seed", "exact", "pass"};
  const AtomSampler sampler(f);
  for (auto m : m_list) {
    const auto est = m_norm_mc(sampler, m, *c.mc_trials, seed, c.threads);
    const double exact = m_norm_exact(f, m);
    const bool pass = std::abs(est.mean - exact) <= 4.0 * est.std_error + 1e-12 * std::max(1.0, exact);
    r.all_pass = r.all_pass && pass;
    r.add_row({detail::as_int(m), est.mean, est.std_error, detail::as_int(est.trials), detail::as_int(seed), exact, pass});
  }
  return r;
}

inline Report cmd_kernel_sweep(const RunConfig& c) {
  const int n = c.n_list.empty() ? 1024 : c.n_list.front();
  if (n < 1) throw UsageError("kernel-sweep: n must be >= 1");
  std::vector<std::uint64_t> m_list = c.m_list;
  if (m_list.empty())
    for (std::uint64_t m = 1; m <= static_cast<std::uint64_t>(n); m *= 2) m_list.push_back(m);
  for (auto m : m_list)
    if (m == 0 || m > static_cast<std::uint64_t>(n)) throw UsageError("kernel-sweep: every m must satisfy 1 <= m <= n");
  std::vector<KernelKind> kinds;
  if (c.kind.empty() || c.kind == "both")
    kinds = {KernelKind::fejer, KernelKind::dirichlet};
  else if (c.kind == "fejer")
    kinds = {KernelKind::fejer};
  else if (c.kind == "dirichlet")
    kinds = {KernelKind::dirichlet};
  else
    throw UsageError("kernel-sweep: --kind must be fejer, dirichlet or both");
  const std::size_t net = c.net_factor.value_or(64) * static_cast<std::size_t>(n);
  Report r;
  r.command = "kernel-sweep";
  r.columns = {"kind", "n", "m", "net_size", "norm", "norm_over_m", "norm_over_m_log"};
  for (auto kind : kinds) {
    const auto samples = sample_on_net(kernel(kind, n), net);
    const auto levels = uniform_levels(samples.samples);
    for (auto m : m_list) {
      const double norm = m_norm_from_levels(levels, m);
      r.add_row({std::string(kind == KernelKind::fejer ? "fejer" : "dirichlet"), std::int64_t{n}, detail::as_int(m),
                 static_cast<std::int64_t>(net), norm, norm / static_cast<double>(m),
                 norm / detail::fejer_dirichlet_log_scale(n, m)});
    }
  }
  return r;
}

struct SandwichGrid {
  std::string system = "sqrt2_cos";
  std::vector<int> n_list{64, 256, 1024};
  std::vector<std::uint64_t> m_list{4, 16, 64, 256};
  std::string dist = "rademacher";
  std::uint64_t trials = 200;
  std::uint64_t seed = 0;
  std::size_t net_factor = 8;
};

// JSON grid file with keys system, n_list, m_list, dist, trials, seed,
// net_factor; missing keys keep their defaults.
inline SandwichGrid read_sandwich_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("sandwich: cannot open " + path);
  SandwichGrid g;
  try {
    const auto j = nlohmann::json::parse(in);
    if (!j.contains("seed")) throw UsageError("sandwich: config needs a seed");
    g.system = j.value("system", g.system);
    g.n_list = j.value("n_list", g.n_list);
    g.m_list = j.value("m_list", g.m_list);
    g.dist = j.value("dist", g.dist);
    g.trials = j.value("trials", g.trials);
    g.seed = j.at("seed").get<std::uint64_t>();
    g.net_factor = j.value("net_factor", g.net_factor);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("sandwich: " + path + ": " + e.what());
  }
  return g;
}

inline Report run_sandwich(const SandwichGrid& g, double moment_bound, unsigned threads) {
  if (g.system != "sqrt2_cos") throw UsageError("sandwich: only system 'sqrt2_cos' is available");
  if (g.trials < 2) throw UsageError("sandwich: trials must be >= 2");
  EnsembleSpec spec = [&] {
    try {
      return EnsembleSpec(parse_xi_kind(g.dist), moment_bound);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("sandwich: ") + e.what());
    }
  }();
  Report r;
  r.command = "sandwich";
  r.columns = {"system",       "dist",    "n",         "m",        "net_size",     "R",
               "P",            "lhs_mean", "lhs_std_error", "lhs_q10", "trials",  "seed",
               "rhs_theorem1", "ratio_low", "rhs_corollary2", "ratio_high", "rhs_theorem2", "gate_ok",
               "pass"};
  for (int n : g.n_list) {
    if (n < 1) throw UsageError("sandwich: n must be >= 1");
    const auto fs = FunctionSystem::cosine(static_cast<std::size_t>(n), g.net_factor * static_cast<std::size_t>(n));
    const bool gate = fs.satisfies_condition_a(spec.moment_bound());
    const auto a = CoefficientVector::ones(static_cast<std::size_t>(n));
    const auto per_trial = m_norm_trials(spec, a.a, fs, g.m_list, g.trials, g.seed, threads);
    for (std::size_t j = 0; j < g.m_list.size(); ++j) {
      const auto m = g.m_list[j];
      const auto est = summarize_trials(per_trial[j], g.seed);
      auto sorted = per_trial[j];
      std::sort(sorted.begin(), sorted.end());
      const double q10 = sorted[static_cast<std::size_t>(0.1 * static_cast<double>(sorted.size() - 1))];
      const auto report = make_lower_bound_report(a.a, m, est);
      const double rhs_c2 = corollary2_rhs(fs, a.a, m);
      const double ratio_high = est.mean / rhs_c2;
      const bool pass = gate && report.ratio > 0.0 && ratio_high <= 1.0;
      r.all_pass = r.all_pass && pass;
      r.add_row({g.system, g.dist, std::int64_t{n}, detail::as_int(m), static_cast<std::int64_t>(fs.net_size()),
                 report.r_stat, report.p, est.mean, est.std_error, q10, detail::as_int(est.trials),
                 detail::as_int(g.seed), report.rhs, report.ratio, rhs_c2, ratio_high, theorem2_rhs(fs, a.a, m), gate,
                 pass});
    }
  }
  return r;
}

inline Report cmd_sandwich(const RunConfig& c) {
  SandwichGrid g;
  if (!c.input_path.empty()) {
    g = read_sandwich_grid(c.input_path);
  } else {
    g.seed = detail::require_seed(c);
    if (!c.n_list.empty()) g.n_list = c.n_list;
    if (!c.m_list.empty()) g.m_list = c.m_list;
    g.dist = c.dist;
    g.trials = c.trials.value_or(g.trials);
    g.net_factor = c.net_factor.value_or(g.net_factor);
  }
  return run_sandwich(g, c.moment_bound, c.threads);
}

namespace detail {

// Either the polynomial from --poly or `count` random ones per n.
struct PolyBatch {
  std::vector<int> degrees;
  std::vector<std::size_t> indices;
  std::vector<TrigPoly> polys;
};

inline PolyBatch poly_batch(const RunConfig& c, std::vector<int> default_n, std::uint64_t default_count) {
  PolyBatch b;
  if (!c.poly_path.empty()) {
    try {
      b.polys.push_back(read_trig_poly_csv(c.poly_path));
    } catch (const std::exception& e) {
      throw UsageError(c.command + ": " + c.poly_path + ": " + e.what());
    }
    if (!b.polys.back().real_valued()) throw UsageError(c.command + ": polynomial must be real-valued");
    b.degrees.push_back(b.polys.back().order());
    b.indices.push_back(0);
    return b;
  }
  const std::uint64_t seed = require_seed(c);
  const auto n_list = or_default(c.n_list, std::move(default_n));
  const std::uint64_t count = c.trials.value_or(default_count);
  for (int n : n_list) {
    if (n < 1) throw UsageError(c.command + ": n must be >= 1");
    for (std::size_t i = 0; i < count; ++i) {
      Rng rng(poly_seed(seed, n, i));
      b.polys.push_back(random_real_trig_poly(n, rng));
      b.degrees.push_back(n);
      b.indices.push_back(i);
    }
  }
  return b;
}

}  // namespace detail

inline constexpr double kBernsteinSlack = 1.02;

inline Report cmd_bernstein(const RunConfig& c) {
  const auto batch = detail::poly_batch(c, {8, 32, 128}, 20);
  const auto m_list = detail::or_default(c.m_list, {1, 4, 16});
  const std::size_t factor = c.net_factor.value_or(64);
  // norms[p][j] = (||P'||, ||P||) on the factor * n net.
  std::vector<std::vector<std::pair<double, double>>> norms(batch.polys.size());
  parallel_for(batch.polys.size(), c.threads, [&](std::size_t p) {
    const auto& poly = batch.polys[p];
    const std::size_t net = factor * static_cast<std::size_t>(std::max(1, poly.order()));
    const auto levels_p = uniform_levels(sample_on_net(poly, net).samples);
    const auto levels_d = uniform_levels(sample_on_net(analytic_derivative(poly, 1), net).samples);
    for (auto m : m_list) norms[p].emplace_back(m_norm_from_levels(levels_d, m), m_norm_from_levels(levels_p, m));
  });
  Report r;
  r.command = "bernstein";
  r.columns = {"n", "m", "poly", "net_size", "deriv_norm", "poly_norm", "ratio", "pass"};
  for (std::size_t p = 0; p < batch.polys.size(); ++p) {
    const int n = std::max(1, batch.degrees[p]);
    for (std::size_t j = 0; j < m_list.size(); ++j) {
      const auto [dn, pn] = norms[p][j];
      const double ratio = pn > 0.0 ? dn / (n * pn) : 0.0;
      const bool pass = dn <= kBernsteinSlack * n * pn;
      r.all_pass = r.all_pass && pass;
      r.add_row({std::int64_t{batch.degrees[p]}, detail::as_int(m_list[j]), static_cast<std::int64_t>(batch.indices[p]),
                 static_cast<std::int64_t>(factor * static_cast<std::size_t>(n)), dn, pn, ratio, pass});
    }
  }
  return r;
}

// pi/4 from the net argument plus 0.01 for the fine-net proxy.
inline constexpr double kDiscretizationGapLimit = std::numbers::pi / 4.0 + 0.01;

inline Report cmd_discretize(const RunConfig& c) {
  const auto batch = detail::poly_batch(c, {4, 16, 64}, 20);
  const auto m_list = detail::or_default(c.m_list, {1, 4, 16});
  const int fine = static_cast<int>(c.net_factor.value_or(64));
  if (fine < 8) throw UsageError("discretize: --net-factor must be >= 8");
  std::vector<std::vector<DiscretizationGap>> gaps(batch.polys.size());
  parallel_for(batch.polys.size(), c.threads, [&](std::size_t p) {
    for (auto m : m_list) gaps[p].push_back(discretization_gap(batch.polys[p], m, fine));
  });
  Report r;
  r.command = "discretize";
  r.columns = {"n", "m", "poly", "continuous_approx", "net8n", "rel_gap", "threshold", "pass"};
  for (std::size_t p = 0; p < batch.polys.size(); ++p) {
    for (std::size_t j = 0; j < m_list.size(); ++j) {
      const auto& g = gaps[p][j];
      const bool pass = g.rel_gap < kDiscretizationGapLimit;
      r.all_pass = r.all_pass && pass;
      r.add_row({std::int64_t{batch.degrees[p]}, detail::as_int(m_list[j]), static_cast<std::int64_t>(batch.indices[p]),
                 g.continuous_approx, g.net8n, g.rel_gap, kDiscretizationGapLimit, pass});
    }
  }
  return r;
}

inline constexpr double kSalemZygmundSpread = 2.0;

inline Report cmd_salem_zygmund(const RunConfig& c) {
  const std::uint64_t seed = detail::require_seed(c);
  const auto n_list = detail::or_default(c.n_list, {64, 256, 1024, 4096});
  const std::uint64_t trials = c.trials.value_or(200);
  const std::size_t factor = c.net_factor.value_or(8);
  std::vector<NormEstimate> estimates;
  for (int n : n_list) {
    if (n < 2) throw UsageError("salem-zygmund: n must be >= 2");
    estimates.push_back(salem_zygmund_ratio(n, trials, derive_seed(seed, static_cast<std::uint64_t>(n)), c.threads, factor));
  }
  double min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& e : estimates) min_ratio = std::min(min_ratio, e.mean);
  Report r;
  r.command = "salem-zygmund";
  r.columns = {"n", "trials", "seed", "net_size", "ratio_mean", "ratio_std_error", "ratio_min_all", "spread", "pass"};
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const double spread = estimates[i].mean / min_ratio;
    const bool pass = spread <= kSalemZygmundSpread;
    r.all_pass = r.all_pass && pass;
    r.add_row({std::int64_t{n_list[i]}, detail::as_int(trials), detail::as_int(seed),
               static_cast<std::int64_t>(factor * static_cast<std::size_t>(n_list[i])), estimates[i].mean,
               estimates[i].std_error, min_ratio, spread, pass});
  }
  return r;
}

// cos(i t) divided by its net L1 norm, i = 1..n.
inline FunctionSystem normalized_cosine_system(std::size_t n, std::size_t net_size) {
  return FunctionSystem::cosine(n, net_size).l1_normalized();
}

inline Report cmd_sign_search(const RunConfig& c) {
  const std::uint64_t seed = detail::require_seed(c);
  const int n = c.n_list.empty() ? 64 : c.n_list.front();
  if (n < 1) throw UsageError("sign-search: n must be >= 1");
  const std::uint64_t attempts = c.trials.value_or(2000);
  const std::size_t net = c.net_factor.value_or(8) * static_cast<std::size_t>(n);
  const auto fs = normalized_cosine_system(static_cast<std::size_t>(n), net);
  SignSearchOptions opts;
  opts.moment_bound = c.moment_bound;
  opts.delta = c.delta;
  opts.refine = c.refine;
  opts.threads = c.threads;
  SignSearchResult res;
  try {
    res = search_signs(fs, attempts, c.c0, seed, opts);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("sign-search: ") + e.what());
  }
  Report r;
  r.command = "sign-search";
  r.columns = {"n", "k", "lhs", "target", "ratio", "pass", "m_norm_2k", "bridge_ok", "best_attempt",
               "bridge_violations_all_attempts"};
  for (const auto& row : res.best.rows) {
    const bool pass = row.pass && row.bridge_ok;
    r.all_pass = r.all_pass && pass;
    r.add_row({std::int64_t{n}, std::int64_t{row.k}, row.lhs, row.target, row.lhs / std::sqrt(static_cast<double>(n) * row.k),
               row.pass, row.m_norm, row.bridge_ok, static_cast<std::int64_t>(res.best_attempt),
               static_cast<std::int64_t>(res.bridge_violations)});
  }
  r.all_pass = r.all_pass && res.bridge_violations == 0;
  r.json_document = certificate_to_json(res.best);
  return r;
}

inline double euclidean_seminorm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

// Sharpness witness ratio and dyadic-bound soundness against the Euclidean
// seminorm (unit basis, sign sums sqrt(n) <= n^{1/2+beta}).
inline Report cmd_lemma(const RunConfig& c) {
  const std::uint64_t seed = detail::require_seed(c);
  const auto n_list = detail::or_default(c.n_list, {256, 4096, 65536});
  const std::uint64_t trials = c.trials.value_or(200);
  if (!(c.beta >= 0.0 && c.beta < 0.5)) throw UsageError("lemma: --beta must lie in [0, 1/2)");
  Report r;
  r.command = "lemma";
  r.columns = {"n",           "beta",        "witness_norm",     "witness_ratio",  "witness_pass", "trials",
               "max_oracle_over_bound", "max_group_fill", "dyadic_pass", "pass"};
  for (int n : n_list) {
    if (n < 1) throw UsageError("lemma: n must be >= 1");
    const auto un = static_cast<std::size_t>(n);
    const auto w = sharpness_witness(c.beta, un);
    const double witness_ratio = sharpness_witness_ratio(c.beta, un);
    const bool witness_pass = witness_ratio >= 0.25 && witness_ratio <= 4.0;
    const LemmaInstance inst(c.beta, 1.0, un, euclidean_seminorm);
    std::vector<double> worst(trials), fill(trials);
    parallel_for(trials, c.threads, [&](std::size_t t) {
      Rng rng(derive_seed(derive_seed(seed, un), t));
      std::vector<double> a(un);
      for (auto& v : a) v = rng.normal() * std::exp(2.0 * rng.normal());
      const auto b = dyadic_bound(inst, a);
      worst[t] = b.bound > 0.0 ? inst.seminorm(a) / b.bound : 0.0;
      double f = 0.0;
      for (std::size_t k = 0; k < b.groups.size(); ++k)
        f = std::max(f, static_cast<double>(b.groups[k].size()) / std::ldexp(1.0, 2 * static_cast<int>(k + 1)));
      fill[t] = f;
    });
    const double max_ratio = *std::max_element(worst.begin(), worst.end());
    const double max_fill = *std::max_element(fill.begin(), fill.end());
    const bool dyadic_pass = max_ratio <= 1.0 && max_fill <= 1.0;
    const bool pass = witness_pass && dyadic_pass;
    r.all_pass = r.all_pass && pass;
    r.add_row({std::int64_t{n}, c.beta, sharpness_seminorm(c.beta, un, w), witness_ratio, witness_pass,
               detail::as_int(trials), max_ratio, max_fill, dyadic_pass, pass});
  }
  return r;
}

// Writes a kernel or random real polynomial as `j,re,im` CSV.
inline Report cmd_poly(const RunConfig& c) {
  const int n = c.n_list.empty() ? 4 : c.n_list.front();
  if (n < 0) throw UsageError("poly: n must be >= 0");
  TrigPoly p;
  if (c.kind == "fejer" || c.kind.empty()) {
    p = kernel(KernelKind::fejer, n);
  } else if (c.kind == "dirichlet") {
    p = kernel(KernelKind::dirichlet, n);
  } else if (c.kind == "random") {
    Rng rng(detail::require_seed(c));
    p = random_real_trig_poly(n, rng);
  } else {
    throw UsageError("poly: --kind must be fejer, dirichlet or random");
  }
  std::ostringstream out;
  write_trig_poly_csv(out, p);
  Report r;
  r.command = "poly";
  r.raw_text = out.str();
  return r;
}

// Samples a `j,re,im` polynomial on an N-point net as `k,t_k,value` CSV.
inline Report cmd_sample(const RunConfig& c) {
  if (c.poly_path.empty()) throw UsageError("sample: --poly is required");
  TrigPoly p;
  try {
    p = read_trig_poly_csv(c.poly_path);
  } catch (const std::exception& e) {
    throw UsageError("sample: " + c.poly_path + ": " + e.what());
  }
  const std::size_t net = c.net_size.value_or(8 * static_cast<std::size_t>(std::max(1, p.order())));
  if (net == 0) throw UsageError("sample: --net-size must be >= 1");
  std::ostringstream out;
  write_net_csv(out, sample_on_net(p, net));
  Report r;
  r.command = "sample";
  r.raw_text = out.str();
  return r;
}

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"norm",          "kernel-sweep", "sandwich", "bernstein", "discretize",
                                              "salem-zygmund", "sign-search",  "lemma",    "poly",      "sample"};
  return names;
}

inline Report run_command(const RunConfig& c) {
  try {
    if (c.command == "norm") return cmd_norm(c);
    if (c.command == "kernel-sweep") return cmd_kernel_sweep(c);
    if (c.command == "sandwich") return cmd_sandwich(c);
    if (c.command == "bernstein") return cmd_bernstein(c);
    if (c.command == "discretize") return cmd_discretize(c);
    if (c.command == "salem-zygmund") return cmd_salem_zygmund(c);
    if (c.command == "sign-search") return cmd_sign_search(c);
    if (c.command == "lemma") return cmd_lemma(c);
    if (c.command == "poly") return cmd_poly(c);
    if (c.command == "sample") return cmd_sample(c);
  } catch (const std::invalid_argument& e) {
    throw UsageError(c.command + ": " + e.what());
  }
  throw UsageError("unknown command '" + c.command + "'");
}

}  // namespace iunorm
