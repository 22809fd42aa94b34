#pragma once

// Finite-window symbolic dynamics. Every statement about an infinite
// sequence is approximated by a window of its one-sided orbit, so results
// are evidence for the property in question and carry the window length.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hqc/substitution.hpp"

namespace hqc {

class SequenceSource {
 public:
  enum class Kind { fixed_point, periodic, explicit_word };

  /// One-sided fixed point of `sub` grown from `seed`, optionally projected
  /// letter by letter (e.g. paper folding's 1,2 -> a and 3,4 -> b).
  static SequenceSource fixed_point(Substitution sub, Letter seed, std::optional<LiteralMap> projection = {});
  static SequenceSource periodic(Word pattern);
  static SequenceSource explicit_word(Word w);

  Kind kind() const noexcept { return kind_; }
  /// Non-null for fixed-point sources.
  const Substitution* substitution() const noexcept { return sub_ ? &*sub_ : nullptr; }
  const std::optional<LiteralMap>& projection() const noexcept { return projection_; }
  Letter seed() const noexcept { return seed_; }
  const Word& pattern() const noexcept { return word_; }
  std::string describe() const;

  /// Letters start .. start+len-1. Explicit words are finite: asking past
  /// their end is a precondition error.
  Word window(std::size_t start, std::size_t len) const;
  Word prefix(std::size_t len) const { return window(0, len); }

 private:
  SequenceSource() = default;

  Kind kind_ = Kind::explicit_word;
  std::optional<Substitution> sub_;
  std::optional<LiteralMap> projection_;
  Letter seed_ = 0;
  Word word_;
};

struct OccurrenceSet {
  Word word;
  std::vector<std::size_t> positions;
  std::size_t window_len = 0;
};

/// All p in [0, |text| - |w|] with text[p, p+|w|) == w (overlaps included).
std::vector<std::size_t> find_all(std::string_view text, std::string_view w);

OccurrenceSet occurrences(const SequenceSource& source, std::string_view w, std::size_t window_len);

/// Largest difference between successive positions: the empirical bound on
/// the gaps with which the word recurs. Needs at least two positions.
std::size_t max_gap(const OccurrenceSet& occ);

/// n in [1, window_len - radius] such that the length-`radius` blocks at
/// offsets 0 and n agree (one-sided stand-in for the distance 2^-radius).
/// Explicit words clip the window to their length, which may leave nothing
/// to compare: the result is then empty.
OccurrenceSet epsilon_periods(const SequenceSource& source, std::size_t radius, std::size_t window_len);

/// Number of distinct length-n factors of `text`. A lower bound for the
/// complexity of the underlying infinite sequence.
std::size_t factor_count(std::string_view text, std::size_t n);
std::size_t complexity(const SequenceSource& source, std::size_t n, std::size_t window_len);

struct BoshernitzanRow {
  std::size_t n = 0;
  std::size_t p_n = 0;
  double eta_hat = 0.0;
  double score = 0.0;
  std::size_t window_len = 0;
};

/// n * eta(n), with eta(n) the smallest overlapping-occurrence frequency of a
/// length-n factor in the window. Requires window_len >= 1000 n.
BoshernitzanRow boshernitzan_row(std::string_view text, std::size_t n);
double boshernitzan_score(const SequenceSource& source, std::size_t n, std::size_t window_len);

/// Positions p such that r occurs in a at p and s occurs in b at p + rel_shift,
/// i.e. aligned occurrences of (r, s) along the orbit of (a, shift^rel_shift b).
std::vector<std::size_t> pair_factor_occurs(const SequenceSource& a, const SequenceSource& b, std::string_view r,
                                            std::string_view s, std::int64_t rel_shift, std::size_t window_len);

struct Witness {
  Word r;
  Word s;
  std::int64_t shift_min = 0;
  std::int64_t shift_max = 0;
  std::size_t window_len = 0;
};

/// Pairs (r, s) of equal length <= max_word_len, each in the observed
/// language of its parent, that never occur aligned at any relative shift in
/// [-shift_radius, shift_radius]. A non-minimality indicator, not a proof.
std::vector<Witness> witness_search(const SequenceSource& a, const SequenceSource& b, std::size_t max_word_len,
                                    std::size_t window_len, std::int64_t shift_radius = 0);

struct IndependenceVerdict {
  enum class Status { dependent, independent_up_to_bound };
  Status status = Status::independent_up_to_bound;
  double theta = 0.0;
  double vartheta = 0.0;
  unsigned bound = 0;
  double tolerance = 0.0;
  /// Exponents (l, k) of the first hit, or of the closest approach when independent.
  unsigned l = 0;
  unsigned k = 0;
  double gap = 0.0;  // |l log theta - k log vartheta|
  /// Closest approach is within 1000 x tolerance without being a hit.
  bool near_dependence = false;

  bool dependent() const noexcept { return status == Status::dependent; }
};

std::string to_string(const IndependenceVerdict& v);

/// Bounded search for theta^l == vartheta^k with 1 <= l, k <= bound on the log scale.
IndependenceVerdict multiplicative_independence(double theta, double vartheta, unsigned bound = 64,
                                                double tol = 1e-9);

}  // namespace hqc
