#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hqc/substitution.hpp"

namespace hqc {

using ValueMap = std::map<Letter, double>;

/// a -> -1, b -> +1.
ValueMap default_value_map();

/// Parses "a:-1,b:1".
ValueMap parse_value_map(std::string_view text);
std::string format_value_map(const ValueMap& vm);

std::vector<double> letters_to_values(std::string_view w, const ValueMap& vm);

/// values[n] = kappa * v[n] + (1 - kappa) * u[n + shift] for n < |v|.
struct HybridPotential {
  std::vector<double> values;
  double kappa = 0.5;
  std::size_t shift = 0;
  std::string parent_v;
  std::string parent_u;
  ValueMap value_map_v;
  ValueMap value_map_u;
};

/// Negative relative shifts are expressed by swapping the roles of v and u.
HybridPotential hybridize(std::span<const double> v, std::span<const double> u, double kappa, std::size_t shift);

/// Distinct values after rounding to 12 decimals, ascending.
std::vector<double> value_set(std::span<const double> values);

/// Codes a finite-valued sequence as letters 'a', 'b', ... in ascending
/// order of value (12-decimal rounding), so symbolic diagnostics apply to it.
Word values_to_letters(std::span<const double> values);

/// CSV with header `n,V_n`.
void write_potential_csv(std::ostream& os, const HybridPotential& p);

}  // namespace hqc
