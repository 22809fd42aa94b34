#include "hqc/hybrid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "hqc/error.hpp"
#include "hqc/format.hpp"

namespace hqc {

namespace {

double round12(double x) {
  const double r = std::round(x * 1e12) / 1e12;
  return r == 0.0 ? 0.0 : r;  // fold -0
}

}  // namespace

ValueMap default_value_map() { return {{'a', -1.0}, {'b', 1.0}}; }

ValueMap parse_value_map(std::string_view text) {
  ValueMap vm;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    const auto colon = item.find(':');
    if (colon != 1 || item.size() < 3)
      fail(ErrorKind::invalid_input, "value map entries look like `a:-1`, got `" + std::string(item) + "`");
    vm[item[0]] = parse_double(item.substr(2), "value map");
  }
  if (vm.empty()) fail(ErrorKind::invalid_input, "value map is empty");
  return vm;
}

std::string format_value_map(const ValueMap& vm) {
  std::string out;
  for (const auto& [c, v] : vm) {
    if (!out.empty()) out += ',';
    out += c;
    out += ':';
    out += format_double(v);
  }
  return out;
}

std::vector<double> letters_to_values(std::string_view w, const ValueMap& vm) {
  std::vector<double> out;
  out.reserve(w.size());
  for (char c : w) {
    auto it = vm.find(c);
    if (it == vm.end()) fail(ErrorKind::invalid_input, std::string("value map has no entry for '") + c + "'");
    out.push_back(it->second);
  }
  return out;
}

HybridPotential hybridize(std::span<const double> v, std::span<const double> u, double kappa, std::size_t shift) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) fail(ErrorKind::precondition, "kappa must lie in [0, 1]");
  if (u.size() < v.size() + shift)
    fail(ErrorKind::precondition, "shifted parent has " + std::to_string(u.size()) + " sites, need " +
                                      std::to_string(v.size() + shift));
  HybridPotential p;
  p.kappa = kappa;
  p.shift = shift;
  p.values.resize(v.size());
  for (std::size_t n = 0; n < v.size(); ++n) p.values[n] = kappa * v[n] + (1.0 - kappa) * u[n + shift];
  return p;
}

std::vector<double> value_set(std::span<const double> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double x : values) out.push_back(round12(x));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Word values_to_letters(std::span<const double> values) {
  const auto levels = value_set(values);
  if (levels.size() > 26) fail(ErrorKind::invalid_input, "too many distinct values to code as letters");
  Word w(values.size(), 'a');
  for (std::size_t n = 0; n < values.size(); ++n) {
    const auto it = std::lower_bound(levels.begin(), levels.end(), round12(values[n]));
    w[n] = static_cast<char>('a' + (it - levels.begin()));
  }
  return w;
}

void write_potential_csv(std::ostream& os, const HybridPotential& p) {
  os << "# parent_v = " << p.parent_v << "\n# parent_u = " << p.parent_u << "\n# kappa = " << format_double(p.kappa)
     << "\n# shift = " << p.shift << "\nn,V_n\n";
  for (std::size_t n = 0; n < p.values.size(); ++n) os << n << ',' << format_double(p.values[n]) << '\n';
}

}  // namespace hqc
