#pragma once

// Trigonometric polynomials on [0, 2pi) with the normalized measure dt/2pi.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "iunorm/discrete_function.hpp"
#include "iunorm/format.hpp"
#include "iunorm/norm_core.hpp"
#include "iunorm/random.hpp"

namespace iunorm {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class TrigPoly {
 public:
  static constexpr double kSymmetryTolerance = 1e-12;

  TrigPoly() : TrigPoly(0, {Complex{0.0}}, true) {}

  // coeffs[j + order] is the coefficient of e^{ijx}, j = -order..order.
  TrigPoly(int order, std::vector<Complex> coeffs, bool real_valued)
      : order_(order), coeffs_(std::move(coeffs)), real_valued_(real_valued) {
    if (order_ < 0) throw std::invalid_argument("TrigPoly: negative order");
    if (coeffs_.size() != static_cast<std::size_t>(2 * order_ + 1))
      throw std::invalid_argument("TrigPoly: expected 2n+1 coefficients");
    if (real_valued_ && !is_conjugate_symmetric(coeffs_, order_))
      throw std::invalid_argument("TrigPoly: real-valued polynomial needs c_{-j} = conj(c_j)");
  }

  // Real-valued iff the coefficients are conjugate symmetric.
  static TrigPoly from_coefficients(int order, std::vector<Complex> coeffs) {
    const bool real = coeffs.size() == static_cast<std::size_t>(2 * order + 1) && is_conjugate_symmetric(coeffs, order);
    return TrigPoly(order, std::move(coeffs), real);
  }

  static TrigPoly constant(double c) { return TrigPoly(0, {Complex{c}}, true); }

  // cos(kx) scaled by `scale`.
  static TrigPoly cosine(int k, double scale = 1.0) {
    std::vector<Complex> c(2 * k + 1, Complex{0.0});
    if (k == 0) {
      c[0] = scale;
    } else {
      c[0] = scale / 2.0;
      c[2 * k] = scale / 2.0;
    }
    return TrigPoly(k, std::move(c), true);
  }

  int order() const noexcept { return order_; }
  bool real_valued() const noexcept { return real_valued_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  Complex coeff(int j) const {
    if (j < -order_ || j > order_) return Complex{0.0};
    return coeffs_[static_cast<std::size_t>(j + order_)];
  }

  double coeff_abs_sum() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::abs(c);
    return s;
  }

  Complex eval(double x) const {
    Complex sum{0.0};
    for (int j = -order_; j <= order_; ++j) sum += coeff(j) * std::polar(1.0, static_cast<double>(j) * x);
    return sum;
  }

  double eval_real(double x) const { return eval(x).real(); }

 private:
  static bool is_conjugate_symmetric(std::span<const Complex> c, int n) {
    double scale = 1.0;
    for (const auto& z : c) scale = std::max(scale, std::abs(z));
    for (int j = 0; j <= n; ++j) {
      const Complex plus = c[static_cast<std::size_t>(n + j)];
      const Complex minus = c[static_cast<std::size_t>(n - j)];
      if (std::abs(plus - std::conj(minus)) > kSymmetryTolerance * scale) return false;
    }
    return true;
  }

  int order_;
  std::vector<Complex> coeffs_;
  bool real_valued_;
};

// Values of a function at t_k = origin + k 2pi/N, k = 0..N-1 (the k-th
// entry is the paper-style node t_{k+1}), with uniform masses 1/N.
struct NetVector {
  std::vector<double> samples;
  double origin = 0.0;

  std::size_t net_size() const noexcept { return samples.size(); }
  double node(std::size_t k) const { return origin + kTwoPi * static_cast<double>(k) / static_cast<double>(samples.size()); }
  DiscreteFunction to_discrete() const { return DiscreteFunction::uniform(samples); }
};

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

// In-place backward transform out_k = sum_l in_l e^{+2 pi i l k / N}.
// Planning is serialized; FFTW_ESTIMATE on fftw-aligned buffers gives the
// same plan, hence the same bits, on every call.
inline void backward_dft(fftw_complex* buf, int n) {
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("fftw planning failed");
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace detail

// P(origin + 2 pi k / N), k = 0..N-1. Coefficients are folded modulo N, so
// the result is exact for every N (aliasing is part of P's values).
inline std::vector<Complex> sample_values(const TrigPoly& p, std::size_t net_size, double origin = 0.0) {
  if (net_size == 0) throw std::invalid_argument("sample_on_net: N must be >= 1");
  if (net_size > static_cast<std::size_t>(std::numeric_limits<int>::max()))
    throw std::invalid_argument("sample_on_net: N too large");
  const int n = p.order();
  const auto big_n = static_cast<std::int64_t>(net_size);
  detail::FftwBuffer buf(net_size);
  std::fill_n(&buf.data[0][0], 2 * net_size, 0.0);
  for (int j = -n; j <= n; ++j) {
    Complex c = p.coeff(j);
    if (c == Complex{0.0}) continue;
    if (origin != 0.0) c *= std::polar(1.0, static_cast<double>(j) * origin);
    const auto slot = static_cast<std::size_t>(((j % big_n) + big_n) % big_n);
    buf.data[slot][0] += c.real();
    buf.data[slot][1] += c.imag();
  }
  detail::backward_dft(buf.data, static_cast<int>(net_size));
  std::vector<Complex> out(net_size);
  for (std::size_t k = 0; k < net_size; ++k) out[k] = {buf.data[k][0], buf.data[k][1]};
  return out;
}

// Real-valued polynomials keep their values; complex ones are stored as
// moduli, which is all the m-norms look at.
inline NetVector sample_on_net(const TrigPoly& p, std::size_t net_size, double origin = 0.0) {
  const auto values = sample_values(p, net_size, origin);
  NetVector v;
  v.origin = origin;
  v.samples.resize(values.size());
  for (std::size_t k = 0; k < values.size(); ++k)
    v.samples[k] = p.real_valued() ? values[k].real() : std::abs(values[k]);
  return v;
}

enum class KernelKind { fejer, dirichlet };

inline TrigPoly kernel(KernelKind kind, int n) {
  if (n < 0) throw std::invalid_argument("kernel: n must be >= 0");
  std::vector<Complex> c(2 * n + 1);
  for (int j = -n; j <= n; ++j) {
    const double v = kind == KernelKind::fejer ? 1.0 - std::abs(j) / static_cast<double>(n + 1) : 1.0;
    c[static_cast<std::size_t>(j + n)] = v;
  }
  return TrigPoly(n, std::move(c), true);
}

// c_j -> (ij)^r c_j.
inline TrigPoly analytic_derivative(const TrigPoly& p, int r) {
  if (r < 1) throw std::invalid_argument("analytic_derivative: r must be >= 1");
  static constexpr Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const int n = p.order();
  std::vector<Complex> c(p.coeffs().begin(), p.coeffs().end());
  for (int j = -n; j <= n; ++j) {
    const Complex factor = kIPowers[r % 4] * std::pow(static_cast<double>(j), r);
    c[static_cast<std::size_t>(j + n)] *= factor;
  }
  return TrigPoly(n, std::move(c), p.real_valued());
}

// Nodes x_k = (2k-1) pi / (2n) and weights 1 / (4n sin^2(x_k/2)),
// k = 1..2n, of the M. Riesz interpolation formula for P'.
struct RieszNode {
  double shift = 0.0;
  double weight = 0.0;
};

inline std::vector<RieszNode> riesz_nodes(int n) {
  if (n < 1) throw std::invalid_argument("riesz_derivative: order must be >= 1");
  std::vector<RieszNode> nodes(2 * static_cast<std::size_t>(n));
  for (int k = 1; k <= 2 * n; ++k) {
    const double x = (2.0 * k - 1.0) * std::numbers::pi / (2.0 * n);
    const double s = std::sin(x / 2.0);
    nodes[static_cast<std::size_t>(k - 1)] = {x, 1.0 / (4.0 * n * s * s)};
  }
  return nodes;
}

// P'(x) as sum_k (-1)^{k+1} lambda_k P(x + x_k); exact for every real
// polynomial of order <= space_order.
inline double riesz_derivative(const TrigPoly& p, double x, int space_order) {
  if (!p.real_valued()) throw std::invalid_argument("riesz_derivative: polynomial must be real-valued");
  if (space_order < p.order()) throw std::invalid_argument("riesz_derivative: space order below polynomial order");
  const auto nodes = riesz_nodes(space_order);
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    sum += sign * nodes[k].weight * p.eval_real(x + nodes[k].shift);
  }
  return sum;
}

inline double riesz_derivative(const TrigPoly& p, double x) { return riesz_derivative(p, x, p.order()); }

// max |P| over the 4n-point net.
inline double uniform_norm_estimate(const TrigPoly& p) {
  if (p.order() < 1) throw std::invalid_argument("uniform_norm_estimate: order must be >= 1");
  const auto values = sample_values(p, 4 * static_cast<std::size_t>(p.order()));
  double best = 0.0;
  for (const auto& v : values) best = std::max(best, p.real_valued() ? std::abs(v.real()) : std::abs(v));
  return best;
}

inline double net_m_norm(std::span<const double> samples, std::uint64_t m) {
  if (samples.empty()) throw std::invalid_argument("net_m_norm: empty net");
  const auto levels = uniform_levels(samples);
  return m_norm_from_levels(levels, m);
}

inline double net_m_norm(const NetVector& v, std::uint64_t m) { return net_m_norm(v.samples, m); }

struct DiscretizationGap {
  double continuous_approx = 0.0;
  double net8n = 0.0;
  double rel_gap = 0.0;
};

// Compares the m-norm on the 8n net against a fine net of fine_factor * 8n
// points standing in for the continuous norm.
inline DiscretizationGap discretization_gap(const TrigPoly& p, std::uint64_t m, int fine_factor) {
  if (fine_factor < 8) throw std::invalid_argument("discretization_gap: fine_factor must be >= 8");
  const std::size_t base = 8 * static_cast<std::size_t>(std::max(1, p.order()));
  DiscretizationGap g;
  g.continuous_approx = net_m_norm(sample_on_net(p, base * static_cast<std::size_t>(fine_factor)), m);
  g.net8n = net_m_norm(sample_on_net(p, base), m);
  g.rel_gap = g.continuous_approx > 0.0 ? std::abs(g.continuous_approx - g.net8n) / g.continuous_approx : 0.0;
  return g;
}

// Real polynomial with independent standard normal coefficients: c_0 real,
// c_j for j >= 1 complex with unit variance per part, c_{-j} = conj(c_j).
inline TrigPoly random_real_trig_poly(int n, Rng& rng) {
  std::vector<Complex> c(2 * static_cast<std::size_t>(n) + 1);
  c[static_cast<std::size_t>(n)] = rng.normal();
  for (int j = 1; j <= n; ++j) {
    const Complex z{rng.normal(), rng.normal()};
    c[static_cast<std::size_t>(n + j)] = z;
    c[static_cast<std::size_t>(n - j)] = std::conj(z);
  }
  return TrigPoly(n, std::move(c), true);
}

// CSV `j,re,im`, one row per j = -n..n in any order.
inline TrigPoly read_trig_poly_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::map<int, Complex> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"j", "re", "im"}) throw ParseError(line_no, "header must be 'j,re,im'");
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) throw ParseError(line_no, "expected 3 fields");
    const double jd = detail::parse_number(fields[0], line_no);
    const int j = static_cast<int>(jd);
    if (static_cast<double>(j) != jd) throw ParseError(line_no, "j must be an integer");
    if (!rows.emplace(j, Complex{detail::parse_number(fields[1], line_no), detail::parse_number(fields[2], line_no)}).second)
      throw ParseError(line_no, "duplicate j = " + std::to_string(j));
  }
  if (!header_seen) throw ParseError(line_no, "missing header");
  if (rows.empty()) throw ParseError(line_no, "no coefficients");
  const int n = std::max(-rows.begin()->first, rows.rbegin()->first);
  if (rows.size() != static_cast<std::size_t>(2 * n + 1) || rows.begin()->first != -n)
    throw ParseError(line_no, "coefficients must cover j = -n..n exactly");
  std::vector<Complex> c;
  c.reserve(rows.size());
  for (const auto& [j, z] : rows) c.push_back(z);
  return TrigPoly::from_coefficients(n, std::move(c));
}

inline TrigPoly read_trig_poly_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_trig_poly_csv(in);
}

inline void write_trig_poly_csv(std::ostream& out, const TrigPoly& p) {
  out << "j,re,im\n";
  for (int j = -p.order(); j <= p.order(); ++j)
    out << j << ',' << format_double(p.coeff(j).real()) << ',' << format_double(p.coeff(j).imag()) << '\n';
}

// CSV `k,t_k,value` with the 1-based node index.
inline void write_net_csv(std::ostream& out, const NetVector& v) {
  out << "k,t_k,value\n";
  for (std::size_t k = 0; k < v.samples.size(); ++k)
    out << k + 1 << ',' << format_double(v.node(k)) << ',' << format_double(v.samples[k]) << '\n';
}

}  // namespace iunorm
