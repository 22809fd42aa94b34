#include "hqc/substitution.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "hqc/error.hpp"

namespace hqc {

namespace {

std::string quoted(Letter c) { return std::string("'") + c + "'"; }

}  // namespace

Alphabet::Alphabet(std::string letters) : Alphabet(letters, {}) {}

Alphabet::Alphabet(std::string letters, std::vector<std::string> names)
    : letters_(std::move(letters)), names_(std::move(names)) {
  if (letters_.empty()) fail(ErrorKind::invalid_input, "alphabet must contain at least one letter");
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (letters_.find(letters_[i], i + 1) != std::string::npos)
      fail(ErrorKind::invalid_input, "alphabet letter " + quoted(letters_[i]) + " is repeated");
  }
  if (names_.empty()) {
    for (char c : letters_) names_.emplace_back(1, c);
  } else if (names_.size() != letters_.size()) {
    fail(ErrorKind::invalid_input, "alphabet needs one display name per letter");
  }
}

std::optional<std::size_t> Alphabet::index_of(Letter c) const noexcept {
  auto pos = letters_.find(c);
  if (pos == std::string::npos) return std::nullopt;
  return pos;
}

bool Alphabet::contains_all(std::string_view w) const noexcept {
  return std::all_of(w.begin(), w.end(), [this](char c) { return contains(c); });
}

const std::string& Alphabet::name(Letter c) const {
  auto i = index_of(c);
  if (!i) fail(ErrorKind::invalid_input, "letter " + quoted(c) + " is not in the alphabet");
  return names_[*i];
}

std::string Alphabet::render(std::string_view w) const {
  std::string out;
  for (char c : w) out += name(c);
  return out;
}

Substitution::Substitution(std::string name, Alphabet alphabet, std::vector<Word> images)
    : name_(std::move(name)), alphabet_(std::move(alphabet)), images_(std::move(images)) {
  if (images_.size() != alphabet_.size())
    fail(ErrorKind::invalid_input, "substitution needs exactly one image per letter");
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i].empty())
      fail(ErrorKind::invalid_input, "image of " + quoted(alphabet_.letters()[i]) + " is empty");
    if (!alphabet_.contains_all(images_[i]))
      fail(ErrorKind::invalid_input, "image of " + quoted(alphabet_.letters()[i]) +
                                         " uses a letter outside the alphabet");
  }
}

Substitution Substitution::from_rules(std::string name,
                                      const std::vector<std::pair<Letter, Word>>& rules) {
  std::string letters;
  std::vector<Word> images;
  for (const auto& [c, img] : rules) {
    letters += c;
    images.push_back(img);
  }
  return Substitution(std::move(name), Alphabet(letters), std::move(images));
}

const Word& Substitution::image(Letter c) const {
  auto i = alphabet_.index_of(c);
  if (!i) fail(ErrorKind::invalid_input, "letter " + quoted(c) + " is not in the alphabet of " + name_);
  return images_[*i];
}

std::optional<std::size_t> Substitution::constant_length() const noexcept {
  const std::size_t len = images_.front().size();
  for (const auto& img : images_)
    if (img.size() != len) return std::nullopt;
  return len;
}

// --- SubstitutionMatrix -----------------------------------------------------

SubstitutionMatrix::SubstitutionMatrix(std::size_t k, std::vector<std::int64_t> entries)
    : k_(k), entries_(std::move(entries)) {
  if (entries_.size() != k_ * k_) fail(ErrorKind::invalid_input, "matrix must be square");
}

SubstitutionMatrix SubstitutionMatrix::identity(std::size_t k) {
  std::vector<std::int64_t> e(k * k, 0);
  for (std::size_t i = 0; i < k; ++i) e[i * k + i] = 1;
  return {k, std::move(e)};
}

std::vector<std::vector<std::int64_t>> SubstitutionMatrix::rows() const {
  std::vector<std::vector<std::int64_t>> out(k_);
  for (std::size_t i = 0; i < k_; ++i)
    out[i].assign(entries_.begin() + static_cast<std::ptrdiff_t>(i * k_),
                  entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * k_));
  return out;
}

std::int64_t SubstitutionMatrix::row_sum(std::size_t i) const {
  std::int64_t s = 0;
  for (std::size_t j = 0; j < k_; ++j) s += (*this)(i, j);
  return s;
}

bool SubstitutionMatrix::positive() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](std::int64_t v) { return v > 0; });
}

SubstitutionMatrix SubstitutionMatrix::operator*(const SubstitutionMatrix& rhs) const {
  if (k_ != rhs.k_) fail(ErrorKind::invalid_input, "matrix dimensions differ");
  std::vector<std::int64_t> out(k_ * k_, 0);
  for (std::size_t i = 0; i < k_; ++i)
    for (std::size_t l = 0; l < k_; ++l) {
      const std::int64_t a = (*this)(i, l);
      if (a == 0) continue;
      for (std::size_t j = 0; j < k_; ++j) {
        std::int64_t prod = 0;
        auto& dst = out[i * k_ + j];
        if (__builtin_mul_overflow(a, rhs(l, j), &prod) || __builtin_add_overflow(dst, prod, &dst))
          fail(ErrorKind::resource_limit, "integer overflow in substitution matrix product");
      }
    }
  return {k_, std::move(out)};
}

SubstitutionMatrix SubstitutionMatrix::power(unsigned e) const {
  SubstitutionMatrix result = identity(k_);
  for (unsigned i = 0; i < e; ++i) result = result * *this;
  return result;
}

// --- words ------------------------------------------------------------------

Word apply(const Substitution& sub, std::string_view w) {
  Word out;
  out.reserve(w.size() * 2);
  for (char c : w) out += sub.image(c);
  return out;
}

Word iterate(const Substitution& sub, std::string_view seed, unsigned k, std::size_t cap) {
  if (!sub.alphabet().contains_all(seed))
    fail(ErrorKind::invalid_input, "seed uses a letter outside the alphabet of " + sub.name());
  // Project the length first with exact counts so we never allocate past the cap.
  const auto& alpha = sub.alphabet();
  std::vector<std::int64_t> counts(alpha.size(), 0);
  for (char c : seed) ++counts[*alpha.index_of(c)];
  const auto m = substitution_matrix(sub);
  for (unsigned step = 0; step < k; ++step) {
    std::vector<std::int64_t> next(alpha.size(), 0);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i)
      for (std::size_t j = 0; j < alpha.size(); ++j) {
        next[j] += counts[i] * m(i, j);
        total += counts[i] * m(i, j);
      }
    if (static_cast<std::size_t>(total) > cap)
      fail(ErrorKind::resource_limit, "iterate would produce " + std::to_string(total) +
                                          " letters, above the cap of " + std::to_string(cap));
    counts = std::move(next);
  }
  Word w(seed);
  for (unsigned step = 0; step < k; ++step) w = hqc::apply(sub, w);
  return w;
}

Word fixed_point_prefix(const Substitution& sub, Letter seed, std::size_t min_len, std::size_t cap) {
  if (min_len < 1) fail(ErrorKind::precondition, "fixed point prefix length must be at least 1");
  if (min_len > cap)
    fail(ErrorKind::resource_limit, "requested " + std::to_string(min_len) +
                                        " letters, above the cap of " + std::to_string(cap));
  const Word& img = sub.image(seed);
  if (img.front() != seed)
    fail(ErrorKind::precondition, "image of " + quoted(seed) + " under " + sub.name() +
                                      " does not start with it; no fixed point grows from this seed");
  Word w(1, seed);
  while (w.size() < min_len) {
    // Prefixes of the fixed point map to longer prefixes, so only the part
    // needed to reach min_len has to be expanded.
    Word next;
    next.reserve(std::min(min_len, w.size() * 4));
    for (char c : w) {
      next += sub.image(c);
      if (next.size() >= min_len) break;
    }
    if (next.size() <= w.size())
      fail(ErrorKind::precondition, "fixed point from " + quoted(seed) + " under " + sub.name() +
                                        " does not grow");
    w = std::move(next);
  }
  w.resize(min_len);
  return w;
}

SubstitutionMatrix substitution_matrix(const Substitution& sub) {
  const auto& alpha = sub.alphabet();
  const std::size_t k = alpha.size();
  std::vector<std::int64_t> e(k * k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (char c : sub.images()[i]) ++e[i * k + *alpha.index_of(c)];
  return {k, std::move(e)};
}

std::optional<unsigned> primitivity_power(const Substitution& sub, unsigned max_k) {
  const auto m = substitution_matrix(sub);
  // Only the zero pattern matters, so saturate at 1 to avoid overflow.
  const std::size_t k = m.size();
  std::vector<std::int64_t> pattern(k * k);
  for (std::size_t i = 0; i < k * k; ++i) pattern[i] = m.entries()[i] > 0 ? 1 : 0;
  const SubstitutionMatrix base(k, pattern);
  SubstitutionMatrix acc = base;
  for (unsigned p = 1; p <= max_k; ++p) {
    if (acc.positive()) return p;
    auto next = acc * base;
    std::vector<std::int64_t> sat(next.entries());
    for (auto& v : sat) v = v > 0 ? 1 : 0;
    acc = SubstitutionMatrix(k, std::move(sat));
  }
  return std::nullopt;
}

// --- spectrum ---------------------------------------------------------------

namespace {

__extension__ typedef __int128 i128;

// Fraction-free Gaussian elimination; returns nullopt if an intermediate
// value leaves the 128-bit range.
std::optional<bool> singular_exact(std::vector<i128> a, std::size_t k) {
  constexpr i128 kLimit = static_cast<i128>(1) << 100;
  i128 prev = 1;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    while (piv < k && a[piv * k + c] == 0) ++piv;
    if (piv == k) return true;
    if (piv != c)
      for (std::size_t j = 0; j < k; ++j) std::swap(a[c * k + j], a[piv * k + j]);
    for (std::size_t r = c + 1; r < k; ++r) {
      for (std::size_t j = c + 1; j < k; ++j) {
        const i128 x = a[r * k + j], y = a[c * k + c], z = a[r * k + c], w = a[c * k + j];
        if (x > kLimit || x < -kLimit || y > kLimit || y < -kLimit || z > kLimit || z < -kLimit ||
            w > kLimit || w < -kLimit)
          return std::nullopt;
        const long double est = static_cast<long double>(x) * static_cast<long double>(y) -
                                static_cast<long double>(z) * static_cast<long double>(w);
        if (std::fabs(est) > 1e37L) return std::nullopt;
        a[r * k + j] = (x * y - z * w) / prev;
      }
      a[r * k + c] = 0;
    }
    prev = a[c * k + c];
  }
  return false;
}

// True if det(M^m - I) == 0, i.e. some eigenvalue is an m-th root of unity.
std::optional<bool> has_root_of_unity(const SubstitutionMatrix& m, unsigned order) {
  try {
    const auto p = m.power(order);
    const std::size_t k = m.size();
    std::vector<i128> a(k * k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) a[i * k + j] = p(i, j) - (i == j ? 1 : 0);
    return singular_exact(std::move(a), k);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

std::string_view to_string(PisotVerdict v) {
  switch (v) {
    case PisotVerdict::pisot: return "true";
    case PisotVerdict::not_pisot: return "false";
    case PisotVerdict::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

SpectralInfo spectral_info(const SubstitutionMatrix& m, double margin) {
  const std::size_t k = m.size();
  if (k == 0 || m.entries().size() != k * k) fail(ErrorKind::invalid_input, "matrix must be square and nonempty");
  if (k > 16) fail(ErrorKind::invalid_input, "spectral_info supports alphabets of at most 16 letters");
  if (std::any_of(m.entries().begin(), m.entries().end(), [](std::int64_t v) { return v < 0; }))
    fail(ErrorKind::invalid_input, "substitution matrix entries must be nonnegative");

  Eigen::MatrixXd a(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a(i, j) = static_cast<double>(m(i, j));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  if (solver.info() != Eigen::Success) fail(ErrorKind::numerical_failure, "eigenvalue solver did not converge");

  SpectralInfo info;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) info.eigenvalues.push_back(solver.eigenvalues()[i]);
  std::sort(info.eigenvalues.begin(), info.eigenvalues.end(), [](auto x, auto y) {
    if (std::abs(x) != std::abs(y)) return std::abs(x) > std::abs(y);
    return x.real() > y.real();
  });

  // Perron root: the largest real eigenvalue. Refine it with Rayleigh-style
  // power iteration on the (nonnegative) matrix.
  auto perron = std::max_element(info.eigenvalues.begin(), info.eigenvalues.end(),
                                 [](auto x, auto y) { return x.real() < y.real(); });
  double theta = perron->real();
  if (theta > 0) {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(k));
    const Eigen::MatrixXd shifted = a + Eigen::MatrixXd::Identity(k, k);  // aperiodic, same eigenvector
    for (int it = 0; it < 2000; ++it) {
      Eigen::VectorXd w = shifted * v;
      w /= w.norm();
      if ((w - v).norm() < 1e-15) { v = w; break; }
      v = w;
    }
    const double rq = v.dot(a * v) / v.dot(v);
    if (std::abs(rq - theta) < 1e-8 * std::max(1.0, theta)) theta = rq;
  }
  info.dominant = theta;
  bool skipped = false;
  for (const auto& ev : info.eigenvalues) {
    if (!skipped && &ev == &*perron) { skipped = true; continue; }
    info.others.push_back(std::abs(ev));
  }
  std::sort(info.others.begin(), info.others.end(), std::greater<>());

  // Pisot: dominant > 1 and every other modulus < 1.
  auto near_one = [margin](double r) { return std::abs(r - 1.0) <= margin; };
  if (info.dominant < 1.0 - margin) {
    info.pisot = PisotVerdict::not_pisot;
    return info;
  }
  bool undecided = near_one(info.dominant);
  bool fails = false;
  for (double r : info.others) {
    if (r > 1.0 + margin) fails = true;
    else if (near_one(r)) undecided = true;
  }
  if (fails) {
    info.pisot = PisotVerdict::not_pisot;
    return info;
  }
  if (!undecided) {
    info.pisot = PisotVerdict::pisot;
    return info;
  }
  // Some modulus sits on the unit circle to within the margin. An integer
  // matrix eigenvalue of modulus one that is a root of unity of order m makes
  // M^m - I singular; check that exactly for small m.
  for (const auto& ev : info.eigenvalues) {
    if (!near_one(std::abs(ev))) continue;
    for (unsigned order = 1; order <= 12; ++order) {
      if (std::abs(std::pow(ev, static_cast<double>(order)) - 1.0) > 1e-6) continue;
      if (auto singular = has_root_of_unity(m, order); singular && *singular) {
        info.pisot = PisotVerdict::not_pisot;
        return info;
      }
    }
  }
  info.pisot = PisotVerdict::indeterminate;
  return info;
}

// --- derived rules ----------------------------------------------------------

Word apply_literal_map(std::string_view w, const LiteralMap& map) {
  Word out;
  out.reserve(w.size());
  for (char c : w) {
    auto it = map.find(c);
    if (it == map.end()) fail(ErrorKind::invalid_input, "literal map has no image for " + quoted(c));
    out += it->second;
  }
  return out;
}

Substitution product_substitution(const Substitution& xi, const Substitution& eta) {
  const auto lx = xi.constant_length();
  const auto ly = eta.constant_length();
  if (!lx || !ly || *lx != *ly)
    fail(ErrorKind::precondition, "product substitution needs two constant-length rules of equal length");
  const auto& ax = xi.alphabet();
  const auto& ay = eta.alphabet();
  const std::size_t kx = ax.size(), ky = ay.size();
  if (kx * ky > 94) fail(ErrorKind::resource_limit, "product alphabet too large");

  // Product letters are encoded as consecutive printable characters starting
  // at '!'; their display names are the pairs.
  auto code = [&](std::size_t i, std::size_t j) { return static_cast<char>('!' + i * ky + j); };
  std::string letters;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < kx; ++i)
    for (std::size_t j = 0; j < ky; ++j) {
      letters += code(i, j);
      names.push_back("(" + ax.name(ax.letters()[i]) + "," + ay.name(ay.letters()[j]) + ")");
    }
  std::vector<Word> images;
  for (std::size_t i = 0; i < kx; ++i)
    for (std::size_t j = 0; j < ky; ++j) {
      const Word& x = xi.images()[i];
      const Word& y = eta.images()[j];
      Word img;
      for (std::size_t p = 0; p < x.size(); ++p) img += code(*ax.index_of(x[p]), *ay.index_of(y[p]));
      images.push_back(std::move(img));
    }
  return Substitution(xi.name() + "x" + eta.name(), Alphabet(letters, names), std::move(images));
}

Substitution power(const Substitution& sub, unsigned e) {
  std::vector<Word> images;
  for (char c : sub.alphabet().letters()) images.push_back(iterate(sub, Word(1, c), e));
  return Substitution(sub.name() + "^" + std::to_string(e), sub.alphabet(), std::move(images));
}

Substitution parse_substitution(std::istream& in, std::string name) {
  std::vector<std::pair<Letter, Word>> rules;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto arrow = line.find("->");
    const std::string lhs = arrow == std::string::npos ? "" : trim(line.substr(0, arrow));
    const std::string rhs = arrow == std::string::npos ? "" : trim(line.substr(arrow + 2));
    if (lhs.size() != 1 || rhs.empty() || rhs.find_first_of(" \t") != std::string::npos)
      fail(ErrorKind::invalid_input, "line " + std::to_string(lineno) + ": expected `letter -> image`");
    for (const auto& [c, img] : rules)
      if (c == lhs[0]) fail(ErrorKind::invalid_input, "line " + std::to_string(lineno) + ": duplicate rule for " + quoted(c));
    rules.emplace_back(lhs[0], rhs);
  }
  if (rules.empty()) fail(ErrorKind::invalid_input, "substitution file contains no rules");
  return Substitution::from_rules(std::move(name), rules);
}

namespace catalogue {

Substitution fibonacci() { return Substitution::from_rules("fcc", {{'a', "ab"}, {'b', "a"}}); }
Substitution thue_morse() { return Substitution::from_rules("tm", {{'a', "ab"}, {'b', "ba"}}); }
Substitution period_doubling() { return Substitution::from_rules("pd", {{'a', "ab"}, {'b', "aa"}}); }
Substitution paper_folding() {
  return Substitution::from_rules("pf", {{'1', "12"}, {'2', "32"}, {'3', "14"}, {'4', "34"}});
}
LiteralMap paper_folding_map() { return {{'1', 'a'}, {'2', 'a'}, {'3', 'b'}, {'4', 'b'}}; }
Substitution rudin_shapiro() {
  return Substitution::from_rules("rs", {{'1', "12"}, {'2', "13"}, {'3', "42"}, {'4', "43"}});
}
LiteralMap rudin_shapiro_map() { return {{'1', 'a'}, {'2', 'a'}, {'3', 'b'}, {'4', 'b'}}; }

}  // namespace catalogue

}  // namespace hqc
