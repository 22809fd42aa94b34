#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hqc {

/// psi_n = re[n] + i im[n] on sites 0..N-1 at time t.
struct WaveState {
  std::vector<double> re;
  std::vector<double> im;
  double t = 0.0;

  static WaveState delta(std::size_t n_sites, std::size_t site);

  std::size_t size() const noexcept { return re.size(); }
  double norm2() const noexcept;
};

/// (H psi)_n = psi_{n+1} + psi_{n-1} + lambda V_n psi_n with psi_{-1} = psi_N = 0.
struct LatticeModel {
  std::vector<double> potential;
  double lambda = 1.0;
  std::size_t n0 = 0;

  /// Initial site defaults to floor(N/2).
  static LatticeModel centered(std::vector<double> potential, double lambda);

  std::size_t size() const noexcept { return potential.size(); }
  /// Upper bound 2 + lambda max|V| on the spectral radius of H.
  double norm_bound() const noexcept;
};

void apply_hamiltonian(const LatticeModel& model, std::span<const double> x, std::span<double> y);
std::vector<double> apply_hamiltonian(const LatticeModel& model, std::span<const double> x);

/// Time steppers, all symplectic on (q, p) = (Re psi, Im psi).
///
/// `leapfrog` is Stormer-Verlet on q' = Hp, p' = -Hq. Its norm is not
/// conserved exactly: it oscillates with relative amplitude ~(|H| dt)^2 / 4.
///
/// The `split*` schemes write H = A + B with A (B) the even (odd) bonds plus
/// half the on-site term; both are block diagonal with 2x2 blocks that are
/// exponentiated exactly, so every stage is unitary. `split2` is Strang,
/// `split4` the Yoshida triple jump and `split6` Yoshida's seven-stage
/// sixth-order composition.
enum class Integrator { leapfrog, split2, split4, split6 };

std::string_view to_string(Integrator scheme);
Integrator parse_integrator(std::string_view name);
/// Order of accuracy of the scheme.
int order(Integrator scheme);

/// 0.02 / (2 + lambda max|V|).
double default_dt(const LatticeModel& model);

struct MomentSample {
  double t = 0.0;
  double m2 = 0.0;
  double norm = 0.0;
};

struct MomentSeries {
  std::vector<MomentSample> samples;
};

struct EvolveOptions {
  double dt = 0.0;
  std::size_t steps = 0;
  /// Sample every this many steps (ignored when sample_steps is nonempty).
  std::size_t sample_every = 1;
  /// Explicit, strictly increasing step indices at which to sample.
  std::vector<std::size_t> sample_steps;
  Integrator scheme = Integrator::split4;
  /// Hard limit on |norm - 1| (relative to the initial norm).
  double norm_limit = 1e-6;
};

struct EvolveResult {
  MomentSeries series;
  WaveState final_state;
};

/// Propagates `psi` in place by `steps` steps of size `dt`; dt may be
/// negative (time reversal). No sampling or checks.
void propagate(const LatticeModel& model, WaveState& psi, double dt, std::size_t steps, Integrator scheme);

/// Samples (t, m2, norm) at t = 0 and at the requested steps. Throws
/// numerical_failure on NaN/Inf and integrator_instability when the norm
/// drifts past `norm_limit`.
EvolveResult evolve(const LatticeModel& model, const WaveState& psi0, const EvolveOptions& options);

/// Dense spectral propagation, exp(-iHt) psi0. Validation oracle; N <= 512.
WaveState exact_evolve(const LatticeModel& model, const WaveState& psi0, double t);

double second_moment(const WaveState& psi, std::size_t n0);

/// <psi|H|psi> (real for Hermitian H).
double energy(const LatticeModel& model, const WaveState& psi);

/// 2 T_max + margin < min(n0, N - 1 - n0): the packet front, moving at most
/// at the maximal group velocity 2, stays clear of both boundaries.
bool wavefront_safe(double t_max, std::size_t n_sites, std::size_t n0, std::size_t margin);

/// Step indices for samples spaced evenly in log t, from t_min to t_max,
/// `per_decade` per decade; always ends at the final step.
std::vector<std::size_t> geometric_sample_steps(double dt, double t_min, double t_max, unsigned per_decade);

/// `t,m2,norm` rows with 17 significant digits; `header` lines are written
/// first, each prefixed with "# ".
void write_moment_csv(std::ostream& os, const MomentSeries& series, const std::vector<std::string>& header = {});
/// Reads the format above; comment lines are returned in `header` (without "# ").
MomentSeries read_moment_csv(std::istream& is, std::vector<std::string>* header = nullptr);

}  // namespace hqc
