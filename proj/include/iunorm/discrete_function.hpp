#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace iunorm {

struct Atom {
  double value = 0.0;
  double mass = 0.0;
};

// One level of |f|: a distinct absolute value and the total mass carrying it.
struct Level {
  double abs_value = 0.0;
  double mass = 0.0;
};

// Neumaier-compensated sum; keeps N copies of 1/N within a few ulps of 1.
inline double accurate_sum(std::span<const double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A function on a finite probability space: values with positive masses
// summing to one.
class DiscreteFunction {
 public:
  static constexpr double kMassTolerance = 1e-12;

  DiscreteFunction() = default;

  explicit DiscreteFunction(std::vector<Atom> atoms, std::string description = {})
      : atoms_(std::move(atoms)), description_(std::move(description)) {
    if (atoms_.empty()) throw std::invalid_argument("DiscreteFunction: no atoms");
    std::vector<double> masses;
    masses.reserve(atoms_.size());
    for (const auto& a : atoms_) {
      if (!(a.mass > 0.0) || !std::isfinite(a.mass))
        throw std::invalid_argument("DiscreteFunction: masses must be positive");
      if (!std::isfinite(a.value)) throw std::invalid_argument("DiscreteFunction: non-finite value");
      masses.push_back(a.mass);
    }
    const double total = accurate_sum(masses);
    if (std::abs(total - 1.0) > kMassTolerance)
      throw std::invalid_argument("DiscreteFunction: masses sum to " + std::to_string(total) + ", expected 1");
  }

  // Uniform masses 1/N over the given values.
  static DiscreteFunction uniform(std::span<const double> values, std::string description = {}) {
    if (values.empty()) throw std::invalid_argument("DiscreteFunction: no atoms");
    std::vector<Atom> atoms;
    atoms.reserve(values.size());
    const double mass = 1.0 / static_cast<double>(values.size());
    for (double v : values) atoms.push_back({v, mass});
    return DiscreteFunction(std::move(atoms), std::move(description));
  }

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  const std::string& description() const noexcept { return description_; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& a : atoms_) m = std::max(m, std::abs(a.value));
    return m;
  }

  double min_mass() const {
    double m = 1.0;
    for (const auto& a : atoms_) m = std::min(m, a.mass);
    return m;
  }

  double l1_norm() const {
    std::vector<double> terms;
    terms.reserve(atoms_.size());
    for (const auto& a : atoms_) terms.push_back(a.mass * std::abs(a.value));
    return accurate_sum(terms);
  }

  DiscreteFunction scaled(double c) const {
    auto atoms = atoms_;
    for (auto& a : atoms) a.value *= c;
    return DiscreteFunction(std::move(atoms), description_);
  }

  // Canonical view: atoms with equal |value| merged, sorted by |value|
  // descending.
  std::vector<Level> levels() const {
    std::vector<Level> raw;
    raw.reserve(atoms_.size());
    for (const auto& a : atoms_) raw.push_back({std::abs(a.value), a.mass});
    std::sort(raw.begin(), raw.end(), [](const Level& x, const Level& y) { return x.abs_value > y.abs_value; });
    std::vector<Level> merged;
    for (const auto& l : raw) {
      if (!merged.empty() && merged.back().abs_value == l.abs_value)
        merged.back().mass += l.mass;
      else
        merged.push_back(l);
    }
    return merged;
  }

 private:
  std::vector<Atom> atoms_;
  std::string description_;
};

namespace detail {

inline std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline double parse_number(const std::string& text, std::size_t line) {
  if (text.empty()) throw ParseError(line, "empty numeric field");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError(line, "not a number: '" + text + "'");
  }
  if (used != text.size()) throw ParseError(line, "not a number: '" + text + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite number: '" + text + "'");
  return v;
}

}  // namespace detail

// Reads `value,mass` CSV (header required). Without a mass column every
// atom gets mass 1/N.
inline DiscreteFunction read_discrete_function_csv(std::istream& in, std::string description = {}) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::vector<std::string>> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    header = detail::split_csv_line(line);
    break;
  }
  if (!header) throw ParseError(line_no, "missing header");
  const bool has_mass = header->size() == 2 && (*header)[0] == "value" && (*header)[1] == "mass";
  const bool value_only = header->size() == 1 && (*header)[0] == "value";
  if (!has_mass && !value_only) throw ParseError(line_no, "header must be 'value,mass' or 'value'");

  std::vector<Atom> atoms;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != header->size())
      throw ParseError(line_no, "expected " + std::to_string(header->size()) + " fields, got " +
                                    std::to_string(fields.size()));
    const double v = detail::parse_number(fields[0], line_no);
    if (has_mass) {
      const double m = detail::parse_number(fields[1], line_no);
      if (!(m > 0.0)) throw ParseError(line_no, "mass must be positive");
      atoms.push_back({v, m});
    } else {
      values.push_back(v);
    }
  }
  if (atoms.empty() && values.empty()) throw ParseError(line_no, "no data rows");
  try {
    if (has_mass) return DiscreteFunction(std::move(atoms), std::move(description));
    return DiscreteFunction::uniform(values, std::move(description));
  } catch (const std::invalid_argument& e) {
    throw ParseError(line_no, e.what());
  }
}

inline DiscreteFunction read_discrete_function_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_discrete_function_csv(in, path);
}

}  // namespace iunorm
