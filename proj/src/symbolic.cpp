#include "hqc/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "hqc/error.hpp"

namespace hqc {

SequenceSource SequenceSource::fixed_point(Substitution sub, Letter seed, std::optional<LiteralMap> projection) {
  const Word& img = sub.image(seed);
  if (img.front() != seed)
    fail(ErrorKind::precondition, "image of '" + std::string(1, seed) + "' under " + sub.name() +
                                      " does not start with it; no fixed point grows from this seed");
  SequenceSource s;
  s.kind_ = Kind::fixed_point;
  s.sub_ = std::move(sub);
  s.seed_ = seed;
  s.projection_ = std::move(projection);
  return s;
}

SequenceSource SequenceSource::periodic(Word pattern) {
  if (pattern.empty()) fail(ErrorKind::invalid_input, "periodic pattern must be nonempty");
  SequenceSource s;
  s.kind_ = Kind::periodic;
  s.word_ = std::move(pattern);
  return s;
}

SequenceSource SequenceSource::explicit_word(Word w) {
  SequenceSource s;
  s.kind_ = Kind::explicit_word;
  s.word_ = std::move(w);
  return s;
}

std::string SequenceSource::describe() const {
  switch (kind_) {
    case Kind::fixed_point: return sub_->name();
    case Kind::periodic: return "periodic:" + word_;
    case Kind::explicit_word: return "word[" + std::to_string(word_.size()) + "]";
  }
  return {};
}

Word SequenceSource::window(std::size_t start, std::size_t len) const {
  switch (kind_) {
    case Kind::fixed_point: {
      if (len == 0) return {};
      Word w = fixed_point_prefix(*sub_, seed_, start + len);
      w.erase(0, start);
      return projection_ ? apply_literal_map(w, *projection_) : w;
    }
    case Kind::periodic: {
      Word w(len, '\0');
      const std::size_t p = word_.size();
      for (std::size_t i = 0; i < len; ++i) w[i] = word_[(start + i) % p];
      return w;
    }
    case Kind::explicit_word:
      if (start + len > word_.size())
        fail(ErrorKind::precondition, "window [" + std::to_string(start) + ", " + std::to_string(start + len) +
                                          ") runs past the end of an explicit word of length " +
                                          std::to_string(word_.size()));
      return word_.substr(start, len);
  }
  return {};
}

// --- occurrences --------------------------------------------------------------

std::vector<std::size_t> find_all(std::string_view text, std::string_view w) {
  std::vector<std::size_t> out;
  if (w.size() > text.size()) return out;
  if (w.empty()) {
    out.resize(text.size() + 1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
    return out;
  }
  const std::boyer_moore_horspool_searcher searcher(w.begin(), w.end());
  auto it = text.begin();
  while (true) {
    auto [first, last] = searcher(it, text.end());
    if (first == text.end()) break;
    const auto pos = static_cast<std::size_t>(first - text.begin());
    out.push_back(pos);
    it = first + 1;
  }
  return out;
}

OccurrenceSet occurrences(const SequenceSource& source, std::string_view w, std::size_t window_len) {
  if (w.size() > window_len) fail(ErrorKind::precondition, "word is longer than the window");
  const Word text = source.prefix(window_len);
  return {Word(w), find_all(text, w), window_len};
}

std::size_t max_gap(const OccurrenceSet& occ) {
  if (occ.positions.size() < 2)
    fail(ErrorKind::insufficient_data, "need at least two occurrences to measure a gap, have " +
                                           std::to_string(occ.positions.size()));
  std::size_t gap = 0;
  for (std::size_t i = 1; i < occ.positions.size(); ++i)
    gap = std::max(gap, occ.positions[i] - occ.positions[i - 1]);
  return gap;
}

OccurrenceSet epsilon_periods(const SequenceSource& source, std::size_t radius, std::size_t window_len) {
  if (radius < 1) fail(ErrorKind::precondition, "radius must be at least 1");
  if (radius >= window_len) fail(ErrorKind::precondition, "radius must be smaller than the window");
  // Explicit words are read only as far as they go.
  const std::size_t w = source.kind() == SequenceSource::Kind::explicit_word
                            ? std::min(window_len, source.pattern().size())
                            : window_len;
  OccurrenceSet out{{}, {}, w};
  if (radius >= w) return out;
  const Word text = source.prefix(w);
  const std::string_view block(text.data(), radius);
  out.word = Word(block);
  for (std::size_t n : find_all(text, block))
    if (n >= 1) out.positions.push_back(n);
  return out;
}

// --- complexity -----------------------------------------------------------------

std::size_t factor_count(std::string_view text, std::size_t n) {
  if (n > text.size()) return 0;
  if (n == 0) return 1;
  std::unordered_set<std::string_view> seen;
  for (std::size_t p = 0; p + n <= text.size(); ++p) seen.insert(text.substr(p, n));
  return seen.size();
}

std::size_t complexity(const SequenceSource& source, std::size_t n, std::size_t window_len) {
  if (n > window_len) fail(ErrorKind::precondition, "factor length exceeds the window");
  return factor_count(source.prefix(window_len), n);
}

BoshernitzanRow boshernitzan_row(std::string_view text, std::size_t n) {
  if (n < 1) fail(ErrorKind::precondition, "factor length must be at least 1");
  if (text.size() < 1000 * n)
    fail(ErrorKind::precondition, "window of " + std::to_string(text.size()) + " letters is too small for n = " +
                                      std::to_string(n) + " (need at least 1000 n)");
  std::unordered_map<std::string_view, std::size_t> counts;
  const std::size_t slots = text.size() - n + 1;
  for (std::size_t p = 0; p < slots; ++p) ++counts[text.substr(p, n)];
  std::size_t least = std::numeric_limits<std::size_t>::max();
  for (const auto& [w, c] : counts) least = std::min(least, c);
  BoshernitzanRow row;
  row.n = n;
  row.p_n = counts.size();
  row.eta_hat = static_cast<double>(least) / static_cast<double>(slots);
  row.score = static_cast<double>(n) * row.eta_hat;
  row.window_len = text.size();
  return row;
}

double boshernitzan_score(const SequenceSource& source, std::size_t n, std::size_t window_len) {
  if (n < 1 || window_len < 1000 * n)
    fail(ErrorKind::precondition, "window must hold at least 1000 n letters");
  return boshernitzan_row(source.prefix(window_len), n).score;
}

// --- product orbits -------------------------------------------------------------

std::vector<std::size_t> pair_factor_occurs(const SequenceSource& a, const SequenceSource& b, std::string_view r,
                                            std::string_view s, std::int64_t rel_shift, std::size_t window_len) {
  if (r.size() != s.size()) fail(ErrorKind::precondition, "aligned factor pair needs |r| == |s|");
  const Word ta = a.prefix(window_len);
  const std::size_t b_len = rel_shift > 0 ? window_len + static_cast<std::size_t>(rel_shift) : window_len;
  const Word tb = b.prefix(b_len);
  std::vector<std::size_t> out;
  for (std::size_t p : find_all(ta, r)) {
    const std::int64_t q = static_cast<std::int64_t>(p) + rel_shift;
    if (q < 0 || static_cast<std::size_t>(q) + s.size() > tb.size()) continue;
    if (std::string_view(tb).substr(static_cast<std::size_t>(q), s.size()) == s) out.push_back(p);
  }
  return out;
}

std::vector<Witness> witness_search(const SequenceSource& a, const SequenceSource& b, std::size_t max_word_len,
                                    std::size_t window_len, std::int64_t shift_radius) {
  if (max_word_len > 12) fail(ErrorKind::precondition, "witness search is limited to words of length 12");
  if (shift_radius < 0) fail(ErrorKind::precondition, "shift radius must be nonnegative");
  const Word ta = a.prefix(window_len);
  const Word tb = b.prefix(window_len);
  std::vector<Witness> out;

  for (std::size_t len = 1; len <= max_word_len && len <= window_len; ++len) {
    // Index the observed languages of both windows.
    auto index = [len](const Word& text, std::vector<std::string_view>& words) {
      std::unordered_map<std::string_view, std::size_t> ids;
      std::vector<std::size_t> at(text.size() - len + 1);
      for (std::size_t p = 0; p + len <= text.size(); ++p) {
        auto [it, inserted] = ids.try_emplace(std::string_view(text).substr(p, len), ids.size());
        if (inserted) words.push_back(it->first);
        at[p] = it->second;
      }
      return at;
    };
    std::vector<std::string_view> words_a, words_b;
    const auto id_a = index(ta, words_a);
    const auto id_b = index(tb, words_b);

    std::vector<char> seen(words_a.size() * words_b.size(), 0);
    for (std::int64_t shift = -shift_radius; shift <= shift_radius; ++shift) {
      for (std::size_t p = 0; p < id_a.size(); ++p) {
        const std::int64_t q = static_cast<std::int64_t>(p) + shift;
        if (q < 0 || static_cast<std::size_t>(q) >= id_b.size()) continue;
        seen[id_a[p] * words_b.size() + id_b[static_cast<std::size_t>(q)]] = 1;
      }
    }
    std::vector<Witness> level;
    for (std::size_t i = 0; i < words_a.size(); ++i)
      for (std::size_t j = 0; j < words_b.size(); ++j)
        if (!seen[i * words_b.size() + j])
          level.push_back({Word(words_a[i]), Word(words_b[j]), -shift_radius, shift_radius, window_len});
    std::sort(level.begin(), level.end(), [](const Witness& x, const Witness& y) {
      return std::tie(x.r, x.s) < std::tie(y.r, y.s);
    });
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

// --- multiplicative independence --------------------------------------------------

std::string to_string(const IndependenceVerdict& v) {
  std::ostringstream os;
  if (v.dependent()) {
    os << "dependent(" << v.l << ", " << v.k << ")";
  } else {
    os << "independent_up_to_bound(" << v.bound << ")";
    if (v.near_dependence) os << " [near-dependence at (" << v.l << ", " << v.k << "), gap " << v.gap << "]";
  }
  return os.str();
}

IndependenceVerdict multiplicative_independence(double theta, double vartheta, unsigned bound, double tol) {
  if (!(theta > 1.0) || !(vartheta > 1.0))
    fail(ErrorKind::precondition, "multiplicative independence needs both values > 1");
  if (bound < 1) fail(ErrorKind::precondition, "search bound must be at least 1");
  if (!(tol > 0.0)) fail(ErrorKind::precondition, "tolerance must be positive");
  const double lt = std::log(theta);
  const double lv = std::log(vartheta);
  IndependenceVerdict v;
  v.theta = theta;
  v.vartheta = vartheta;
  v.bound = bound;
  v.tolerance = tol;
  v.gap = std::numeric_limits<double>::infinity();
  for (unsigned l = 1; l <= bound; ++l)
    for (unsigned k = 1; k <= bound; ++k) {
      const double gap = std::abs(l * lt - k * lv);
      if (gap <= tol) {
        v.status = IndependenceVerdict::Status::dependent;
        v.l = l;
        v.k = k;
        v.gap = gap;
        return v;
      }
      if (gap < v.gap) {
        v.gap = gap;
        v.l = l;
        v.k = k;
      }
    }
  v.near_dependence = v.gap <= 1000.0 * tol;
  return v;
}

}  // namespace hqc
