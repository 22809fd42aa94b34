#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hqc {

/// Letters are single characters; a word is a plain string over them.
using Letter = char;
using Word = std::string;
using LiteralMap = std::map<Letter, Letter>;

/// Default cap on generated word length (2^26 letters).
inline constexpr std::size_t kDefaultWordCap = std::size_t{1} << 26;

/// Ordered set of distinct letters. Each letter may carry a display name,
/// which is how product alphabets render their letters as "(x,y)".
class Alphabet {
 public:
  explicit Alphabet(std::string letters);
  Alphabet(std::string letters, std::vector<std::string> names);

  std::size_t size() const noexcept { return letters_.size(); }
  const std::string& letters() const noexcept { return letters_; }
  std::optional<std::size_t> index_of(Letter c) const noexcept;
  bool contains(Letter c) const noexcept { return index_of(c).has_value(); }
  bool contains_all(std::string_view w) const noexcept;
  const std::string& name(Letter c) const;

  /// Concatenation of the display names of the letters of `w`.
  std::string render(std::string_view w) const;

 private:
  std::string letters_;
  std::vector<std::string> names_;
};

class Substitution {
 public:
  /// Images are listed in alphabet order. Throws invalid_input on an empty
  /// image or a letter outside the alphabet.
  Substitution(std::string name, Alphabet alphabet, std::vector<Word> images);

  /// Convenience: alphabet is taken from the rule order, e.g. {{'a',"ab"},{'b',"a"}}.
  static Substitution from_rules(std::string name, const std::vector<std::pair<Letter, Word>>& rules);

  const std::string& name() const noexcept { return name_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const std::vector<Word>& images() const noexcept { return images_; }
  const Word& image(Letter c) const;

  /// Common image length L when every image has length L.
  std::optional<std::size_t> constant_length() const noexcept;

 private:
  std::string name_;
  Alphabet alphabet_;
  std::vector<Word> images_;
};

/// Dense square matrix of nonnegative integer counts, row-major.
/// entry(w, w') = number of occurrences of letter w' in the image of w.
class SubstitutionMatrix {
 public:
  SubstitutionMatrix() = default;
  SubstitutionMatrix(std::size_t k, std::vector<std::int64_t> entries);

  static SubstitutionMatrix identity(std::size_t k);

  std::size_t size() const noexcept { return k_; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return entries_[i * k_ + j]; }
  const std::vector<std::int64_t>& entries() const noexcept { return entries_; }
  std::vector<std::vector<std::int64_t>> rows() const;

  std::int64_t row_sum(std::size_t i) const;
  bool positive() const noexcept;

  /// Exact product; throws resource_limit on 64-bit overflow.
  SubstitutionMatrix operator*(const SubstitutionMatrix& rhs) const;
  SubstitutionMatrix power(unsigned e) const;

  friend bool operator==(const SubstitutionMatrix&, const SubstitutionMatrix&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<std::int64_t> entries_;
};

enum class PisotVerdict { pisot, not_pisot, indeterminate };

std::string_view to_string(PisotVerdict v);

struct SpectralInfo {
  double dominant = 0.0;
  /// Moduli of the remaining eigenvalues, sorted descending.
  std::vector<double> others;
  std::vector<std::complex<double>> eigenvalues;
  PisotVerdict pisot = PisotVerdict::indeterminate;
};

Word apply(const Substitution& sub, std::string_view w);

/// k-fold application; iterate(sub, w, 0) == w.
Word iterate(const Substitution& sub, std::string_view seed, unsigned k,
             std::size_t cap = kDefaultWordCap);

/// First `min_len` letters of the one-sided fixed point grown from `seed`.
Word fixed_point_prefix(const Substitution& sub, Letter seed, std::size_t min_len,
                        std::size_t cap = kDefaultWordCap);

SubstitutionMatrix substitution_matrix(const Substitution& sub);

/// Smallest k <= max_k with M^k entrywise positive.
std::optional<unsigned> primitivity_power(const Substitution& sub, unsigned max_k = 32);

/// Eigenvalues of the matrix with a Pisot classification. Moduli within
/// `margin` of 1 are resolved exactly when the eigenvalue is a root of unity
/// of small order (det(M^m - I) == 0), otherwise reported indeterminate.
SpectralInfo spectral_info(const SubstitutionMatrix& m, double margin = 1e-9);

Word apply_literal_map(std::string_view w, const LiteralMap& map);

/// (x,y) -> (xi(x), eta(y)) paired letter by letter. Both rules must be of
/// the same constant length.
Substitution product_substitution(const Substitution& xi, const Substitution& eta);

/// The rule x -> sub^e(x).
Substitution power(const Substitution& sub, unsigned e);

/// Reads `letter -> image` lines; blank lines and `#` comments are skipped.
Substitution parse_substitution(std::istream& in, std::string name = "custom");

namespace catalogue {

Substitution fibonacci();
Substitution thue_morse();
Substitution period_doubling();
/// Four letters 1..4 with seed 1; project with paper_folding_map().
Substitution paper_folding();
LiteralMap paper_folding_map();
/// Standard four-letter Rudin-Shapiro rule 1->12, 2->13, 3->42, 4->43,
/// projected by 1,2 -> a and 3,4 -> b.
Substitution rudin_shapiro();
LiteralMap rudin_shapiro_map();

}  // namespace catalogue

}  // namespace hqc
