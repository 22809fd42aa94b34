#pragma once

// Independent reference implementations used as oracles by the tests. They
// are deliberately naive and share no code with the library.

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using Rules = std::map<char, std::string>;

inline std::string substitute(const Rules& rules, const std::string& w) {
  std::string out;
  for (char c : w) out += rules.at(c);
  return out;
}

inline std::string substitute_n(const Rules& rules, std::string w, int k) {
  for (int i = 0; i < k; ++i) w = substitute(rules, w);
  return w;
}

inline std::vector<std::size_t> scan(const std::string& text, const std::string& w) {
  std::vector<std::size_t> out;
  if (w.size() > text.size()) return out;
  for (std::size_t p = 0; p + w.size() <= text.size(); ++p) {
    bool match = true;
    for (std::size_t i = 0; i < w.size() && match; ++i) match = text[p + i] == w[i];
    if (match) out.push_back(p);
  }
  return out;
}

inline std::map<std::string, std::size_t> factor_counts(const std::string& text, std::size_t n) {
  std::map<std::string, std::size_t> counts;
  for (std::size_t p = 0; p + n <= text.size(); ++p) ++counts[text.substr(p, n)];
  return counts;
}

// Dense H, row-major.
inline std::vector<double> dense_h(const std::vector<double>& v, double lambda) {
  const std::size_t n = v.size();
  std::vector<double> h(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    h[i * n + i] = lambda * v[i];
    if (i + 1 < n) h[i * n + i + 1] = h[(i + 1) * n + i] = 1.0;
  }
  return h;
}

inline std::vector<double> matvec(const std::vector<double>& a, const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) y[i] += a[i * n + j] * x[j];
  return y;
}

// psi_n(t) = (-i)^{n - n0} J_{n - n0}(2t) on the infinite free lattice.
inline std::complex<double> free_amplitude(long offset, double t) {
  const long m = offset < 0 ? -offset : offset;
  double j = std::cyl_bessel_j(static_cast<double>(m), 2.0 * t);
  if (offset < 0 && (m % 2)) j = -j;  // J_{-m} = (-1)^m J_m
  static const std::complex<double> minus_i(0.0, -1.0);
  return std::pow(minus_i, static_cast<int>(offset % 4 + 4) % 4) * j;
}

inline std::vector<double> random_signs(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> v(n);
  for (auto& x : v) x = coin(rng) ? 1.0 : -1.0;
  return v;
}

}  // namespace oracle
