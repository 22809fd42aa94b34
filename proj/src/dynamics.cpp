#include "hqc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "hqc/error.hpp"
#include "hqc/format.hpp"

namespace hqc {

WaveState WaveState::delta(std::size_t n_sites, std::size_t site) {
  if (site >= n_sites) fail(ErrorKind::invalid_input, "initial site lies outside the lattice");
  WaveState s;
  s.re.assign(n_sites, 0.0);
  s.im.assign(n_sites, 0.0);
  s.re[site] = 1.0;
  return s;
}

double WaveState::norm2() const noexcept {
  double acc = 0.0;
  for (std::size_t n = 0; n < re.size(); ++n) acc += re[n] * re[n] + im[n] * im[n];
  return acc;
}

LatticeModel LatticeModel::centered(std::vector<double> potential, double lambda) {
  LatticeModel m;
  m.n0 = potential.size() / 2;
  m.potential = std::move(potential);
  m.lambda = lambda;
  return m;
}

double LatticeModel::norm_bound() const noexcept {
  double vmax = 0.0;
  for (double v : potential) vmax = std::max(vmax, std::abs(v));
  return 2.0 + std::abs(lambda) * vmax;
}

void apply_hamiltonian(const LatticeModel& model, std::span<const double> x, std::span<double> y) {
  const std::size_t n = model.size();
  if (x.size() != n || y.size() != n)
    fail(ErrorKind::invalid_input, "vector length " + std::to_string(x.size()) + " does not match lattice size " +
                                       std::to_string(n));
  if (n == 0) return;
  const double lam = model.lambda;
  const double* v = model.potential.data();
  if (n == 1) {
    y[0] = lam * v[0] * x[0];
    return;
  }
  y[0] = x[1] + lam * v[0] * x[0];
  for (std::size_t i = 1; i + 1 < n; ++i) y[i] = x[i + 1] + x[i - 1] + lam * v[i] * x[i];
  y[n - 1] = x[n - 2] + lam * v[n - 1] * x[n - 1];
}

std::vector<double> apply_hamiltonian(const LatticeModel& model, std::span<const double> x) {
  std::vector<double> y(x.size());
  apply_hamiltonian(model, x, y);
  return y;
}

std::string_view to_string(Integrator scheme) {
  switch (scheme) {
    case Integrator::leapfrog: return "leapfrog";
    case Integrator::split2: return "split2";
    case Integrator::split4: return "split4";
    case Integrator::split6: return "split6";
  }
  return "split4";
}

Integrator parse_integrator(std::string_view name) {
  for (auto s : {Integrator::leapfrog, Integrator::split2, Integrator::split4, Integrator::split6})
    if (to_string(s) == name) return s;
  fail(ErrorKind::invalid_input, "unknown integrator `" + std::string(name) + "` (leapfrog, split2, split4, split6)");
}

int order(Integrator scheme) {
  switch (scheme) {
    case Integrator::leapfrog:
    case Integrator::split2: return 2;
    case Integrator::split4: return 4;
    case Integrator::split6: return 6;
  }
  return 2;
}

double default_dt(const LatticeModel& model) { return 0.02 / model.norm_bound(); }

// --- steppers -------------------------------------------------------------------

namespace {

using cplx = std::complex<double>;

// Weights of symmetric compositions of Strang steps.
std::vector<double> composition_weights(Integrator scheme) {
  switch (scheme) {
    case Integrator::split4: {
      const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
      return {w1, 1.0 - 2.0 * w1, w1};
    }
    case Integrator::split6: {
      // Yoshida (1990), solution A.
      const double w1 = -1.17767998417887, w2 = 0.235573213359357, w3 = 0.784513610477560;
      const double w0 = 1.0 - 2.0 * (w1 + w2 + w3);
      return {w3, w2, w1, w0, w1, w2, w3};
    }
    default: return {1.0};
  }
}

// exp(-i t [[d1, 1], [1, d2]]) is symmetric: entries u11, u12 (= u21), u22.
struct Block {
  double r11, i11, r12, i12, r22, i22;
};

Block block_exp(double d1, double d2, double t) {
  const double mean = 0.5 * (d1 + d2);
  const double half = 0.5 * (d1 - d2);
  const double omega = std::sqrt(half * half + 1.0);
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t) / omega;
  const cplx phase = std::polar(1.0, -mean * t);
  const cplx u11 = phase * cplx(c, -s * half);
  const cplx u22 = phase * cplx(c, s * half);
  const cplx u12 = phase * cplx(0.0, -s);
  return {u11.real(), u11.imag(), u12.real(), u12.imag(), u22.real(), u22.imag()};
}

// One half of the bond splitting: pairs (first, first+1), (first+2, ...), and
// the sites not covered by a pair evolve by a phase only.
class BondPass {
 public:
  BondPass(const LatticeModel& model, std::size_t first, double t) {
    const std::size_t n = model.size();
    const double lam = model.lambda;
    // Blocks depend only on the pair of on-site values, so share them.
    std::map<std::pair<double, double>, std::uint32_t> kinds;
    for (std::size_t i = first; i + 1 < n; i += 2) {
      const std::pair<double, double> key{model.potential[i], model.potential[i + 1]};
      auto [it, inserted] = kinds.try_emplace(key, static_cast<std::uint32_t>(table_.size()));
      if (inserted) table_.push_back(block_exp(0.5 * lam * key.first, 0.5 * lam * key.second, t));
      kind_.push_back(it->second);
    }
    first_ = first;
    for (std::size_t i = 0; i < n; ++i) {
      const bool paired = i >= first && (i - first) / 2 < kind_.size();
      if (!paired) singles_.push_back({i, std::polar(1.0, -0.5 * lam * model.potential[i] * t)});
    }
  }

  void apply(double* re, double* im) const {
    const Block* table = table_.data();
    std::size_t i = first_;
    for (std::uint32_t k : kind_) {
      const Block& u = table[k];
      const double x0 = re[i], y0 = im[i], x1 = re[i + 1], y1 = im[i + 1];
      re[i] = u.r11 * x0 - u.i11 * y0 + u.r12 * x1 - u.i12 * y1;
      im[i] = u.r11 * y0 + u.i11 * x0 + u.r12 * y1 + u.i12 * x1;
      re[i + 1] = u.r12 * x0 - u.i12 * y0 + u.r22 * x1 - u.i22 * y1;
      im[i + 1] = u.r12 * y0 + u.i12 * x0 + u.r22 * y1 + u.i22 * x1;
      i += 2;
    }
    for (const auto& [site, ph] : singles_) {
      const double x = re[site], y = im[site];
      re[site] = ph.real() * x - ph.imag() * y;
      im[site] = ph.real() * y + ph.imag() * x;
    }
  }

 private:
  std::size_t first_ = 0;
  std::vector<Block> table_;
  std::vector<std::uint32_t> kind_;
  std::vector<std::pair<std::size_t, cplx>> singles_;
};

// Composition of Strang steps A(w/2) B(w) A(w/2) with the adjacent A half
// steps merged, both inside a step and across consecutive steps.
class SplitStepper {
 public:
  SplitStepper(const LatticeModel& model, double dt, Integrator scheme)
      : SplitStepper(model, dt, composition_weights(scheme)) {}

  void run(WaveState& psi, std::size_t steps) const {
    if (steps == 0) return;
    double* re = psi.re.data();
    double* im = psi.im.data();
    lead_.apply(re, im);
    for (std::size_t k = 0; k < steps; ++k) {
      for (std::size_t s = 0; s < inner_b_.size(); ++s) {
        inner_b_[s].apply(re, im);
        if (s < inner_a_.size()) inner_a_[s].apply(re, im);
      }
      (k + 1 < steps ? join_ : tail_).apply(re, im);
    }
  }

 private:
  SplitStepper(const LatticeModel& model, double dt, const std::vector<double>& w)
      : lead_(model, 0, 0.5 * w.front() * dt),
        join_(model, 0, 0.5 * (w.back() + w.front()) * dt),
        tail_(model, 0, 0.5 * w.back() * dt) {
    for (std::size_t s = 0; s < w.size(); ++s) {
      inner_b_.emplace_back(model, 1, w[s] * dt);
      if (s + 1 < w.size()) inner_a_.emplace_back(model, 0, 0.5 * (w[s] + w[s + 1]) * dt);
    }
  }

  BondPass lead_, join_, tail_;
  std::vector<BondPass> inner_a_, inner_b_;
};

// Stormer-Verlet: p -= dt/2 Hq; q += dt Hp; p -= dt/2 Hq, half kicks merged.
void leapfrog(const LatticeModel& model, WaveState& psi, double dt, std::size_t steps) {
  if (steps == 0) return;
  std::vector<double> h(psi.size());
  auto kick = [&](double c) {
    apply_hamiltonian(model, psi.re, h);
    for (std::size_t n = 0; n < h.size(); ++n) psi.im[n] -= c * h[n];
  };
  auto drift = [&](double c) {
    apply_hamiltonian(model, psi.im, h);
    for (std::size_t n = 0; n < h.size(); ++n) psi.re[n] += c * h[n];
  };
  kick(0.5 * dt);
  for (std::size_t k = 0; k < steps; ++k) {
    drift(dt);
    kick(k + 1 < steps ? dt : 0.5 * dt);
  }
}

class Stepper {
 public:
  Stepper(const LatticeModel& model, double dt, Integrator scheme) : model_(model), dt_(dt), scheme_(scheme) {
    if (scheme != Integrator::leapfrog) split_.emplace_back(model, dt, scheme);
  }
  void run(WaveState& psi, std::size_t steps) const {
    if (scheme_ == Integrator::leapfrog) leapfrog(model_, psi, dt_, steps);
    else split_.front().run(psi, steps);
  }

 private:
  const LatticeModel& model_;
  double dt_;
  Integrator scheme_;
  std::vector<SplitStepper> split_;
};

void check_state(const LatticeModel& model, const WaveState& psi) {
  if (psi.re.size() != model.size() || psi.im.size() != model.size())
    fail(ErrorKind::invalid_input, "wave state size does not match the lattice");
}

}  // namespace

void propagate(const LatticeModel& model, WaveState& psi, double dt, std::size_t steps, Integrator scheme) {
  check_state(model, psi);
  if (!std::isfinite(dt) || dt == 0.0) fail(ErrorKind::precondition, "time step must be finite and nonzero");
  Stepper(model, dt, scheme).run(psi, steps);
  psi.t += dt * static_cast<double>(steps);
}

EvolveResult evolve(const LatticeModel& model, const WaveState& psi0, const EvolveOptions& options) {
  check_state(model, psi0);
  if (!(options.dt > 0.0) || !std::isfinite(options.dt)) fail(ErrorKind::precondition, "dt must be positive");
  if (model.n0 >= model.size()) fail(ErrorKind::precondition, "initial site lies outside the lattice");

  std::vector<std::size_t> marks = options.sample_steps;
  if (marks.empty()) {
    if (options.sample_every == 0) fail(ErrorKind::precondition, "sample_every must be positive");
    for (std::size_t s = options.sample_every; s <= options.steps; s += options.sample_every) marks.push_back(s);
  }
  for (std::size_t i = 0; i < marks.size(); ++i) {
    if (marks[i] == 0 || marks[i] > options.steps || (i > 0 && marks[i] <= marks[i - 1]))
      fail(ErrorKind::precondition, "sample steps must be strictly increasing within [1, steps]");
  }

  EvolveResult result;
  result.final_state = psi0;
  WaveState& psi = result.final_state;
  const double norm0 = psi0.norm2();
  if (!(norm0 > 0.0) || !std::isfinite(norm0)) fail(ErrorKind::invalid_input, "initial state must have finite nonzero norm");
  const double t0 = psi0.t;
  result.series.samples.push_back({t0, second_moment(psi, model.n0), norm0});

  const Stepper stepper(model, options.dt, options.scheme);
  std::size_t done = 0;
  for (std::size_t mark : marks) {
    stepper.run(psi, mark - done);
    done = mark;
    psi.t = t0 + options.dt * static_cast<double>(done);
    const double norm = psi.norm2();
    const double m2 = second_moment(psi, model.n0);
    if (!std::isfinite(norm) || !std::isfinite(m2))
      fail(ErrorKind::numerical_failure, "non-finite amplitudes detected by step " + std::to_string(done));
    if (std::abs(norm / norm0 - 1.0) > options.norm_limit) {
      std::ostringstream os;
      os << "norm drifted by " << std::abs(norm / norm0 - 1.0) << " at step " << done << " (t = " << psi.t
         << "), above the limit " << options.norm_limit << "; use a smaller dt or a split integrator";
      fail(ErrorKind::integrator_instability, os.str());
    }
    result.series.samples.push_back({psi.t, m2, norm});
  }
  if (done < options.steps) {
    stepper.run(psi, options.steps - done);
    psi.t = t0 + options.dt * static_cast<double>(options.steps);
  }
  return result;
}

WaveState exact_evolve(const LatticeModel& model, const WaveState& psi0, double t) {
  check_state(model, psi0);
  const auto n = static_cast<Eigen::Index>(model.size());
  if (n > 512) fail(ErrorKind::resource_limit, "exact_evolve is limited to 512 sites");
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = model.lambda * model.potential[static_cast<std::size_t>(i)];
    if (i + 1 < n) h(i, i + 1) = h(i + 1, i) = 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
  if (eig.info() != Eigen::Success) fail(ErrorKind::numerical_failure, "dense eigensolver failed");
  const Eigen::MatrixXd& u = eig.eigenvectors();
  Eigen::VectorXcd psi(n);
  for (Eigen::Index i = 0; i < n; ++i)
    psi(i) = cplx(psi0.re[static_cast<std::size_t>(i)], psi0.im[static_cast<std::size_t>(i)]);
  Eigen::VectorXcd coeff = u.transpose().cast<cplx>() * psi;
  for (Eigen::Index k = 0; k < n; ++k) coeff(k) *= std::polar(1.0, -eig.eigenvalues()(k) * t);
  const Eigen::VectorXcd out = u.cast<cplx>() * coeff;
  WaveState res;
  res.t = psi0.t + t;
  res.re.resize(model.size());
  res.im.resize(model.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    res.re[static_cast<std::size_t>(i)] = out(i).real();
    res.im[static_cast<std::size_t>(i)] = out(i).imag();
  }
  return res;
}

double second_moment(const WaveState& psi, std::size_t n0) {
  double acc = 0.0;
  for (std::size_t n = 0; n < psi.size(); ++n) {
    const double d = static_cast<double>(n) - static_cast<double>(n0);
    acc += d * d * (psi.re[n] * psi.re[n] + psi.im[n] * psi.im[n]);
  }
  return acc;
}

double energy(const LatticeModel& model, const WaveState& psi) {
  const auto hre = apply_hamiltonian(model, psi.re);
  const auto him = apply_hamiltonian(model, psi.im);
  double e = 0.0;
  for (std::size_t n = 0; n < psi.size(); ++n) e += psi.re[n] * hre[n] + psi.im[n] * him[n];
  return e;
}

bool wavefront_safe(double t_max, std::size_t n_sites, std::size_t n0, std::size_t margin) {
  if (n0 >= n_sites) return false;
  const double room = static_cast<double>(std::min(n0, n_sites - 1 - n0));
  return 2.0 * t_max + static_cast<double>(margin) < room;
}

std::vector<std::size_t> geometric_sample_steps(double dt, double t_min, double t_max, unsigned per_decade) {
  if (!(dt > 0.0) || !(t_min > 0.0) || !(t_max > t_min) || per_decade == 0)
    fail(ErrorKind::precondition, "geometric sampling needs dt > 0, 0 < t_min < t_max and points per decade > 0");
  const auto last = static_cast<std::size_t>(std::llround(t_max / dt));
  const double decades = std::log10(t_max / t_min);
  const auto count = static_cast<std::size_t>(std::ceil(decades * per_decade));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i <= count; ++i) {
    const double t = t_min * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(count));
    const auto s = std::max<std::size_t>(1, std::min(last, static_cast<std::size_t>(std::llround(t / dt))));
    if (out.empty() || s > out.back()) out.push_back(s);
  }
  if (out.back() != last) out.push_back(last);
  return out;
}

void write_moment_csv(std::ostream& os, const MomentSeries& series, const std::vector<std::string>& header) {
  for (const auto& line : header) os << "# " << line << '\n';
  os << "t,m2,norm\n";
  char buf[96];
  for (const auto& s : series.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.t, s.m2, s.norm);
    os << buf;
  }
}

MomentSeries read_moment_csv(std::istream& is, std::vector<std::string>* header) {
  MomentSeries series;
  std::string line;
  bool seen_columns = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (header) header->push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    if (!seen_columns) {
      if (line != "t,m2,norm") fail(ErrorKind::invalid_input, "expected the header `t,m2,norm`, got `" + line + "`");
      seen_columns = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos)
      fail(ErrorKind::invalid_input, "line " + std::to_string(lineno) + ": expected three columns");
    const std::string_view sv(line);
    MomentSample s;
    s.t = parse_double(sv.substr(0, c1), "t");
    s.m2 = parse_double(sv.substr(c1 + 1, c2 - c1 - 1), "m2");
    s.norm = parse_double(sv.substr(c2 + 1), "norm");
    if (!series.samples.empty() && !(s.t > series.samples.back().t))
      fail(ErrorKind::invalid_input, "line " + std::to_string(lineno) + ": times must be strictly increasing");
    series.samples.push_back(s);
  }
  if (!seen_columns) fail(ErrorKind::invalid_input, "no `t,m2,norm` header found");
  return series;
}

}  // namespace hqc
