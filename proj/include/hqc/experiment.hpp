#pragma once

// Experiment plumbing shared by the CLI and the Python module: source specs,
// configuration files, presets, sweeps and the diagnostics report.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hqc/analysis.hpp"
#include "hqc/dynamics.hpp"
#include "hqc/hybrid.hpp"
#include "hqc/symbolic.hpp"

namespace hqc {

inline constexpr int kFormatVersion = 1;

/// Catalogue names `fcc`, `tm`, `pd`, `pf`, `rs`, plus `periodic:<pattern>`
/// and `file:<path>` (a `letter -> image` file; the seed is the first rule's
/// letter). Throws usage on anything else.
SequenceSource make_source(std::string_view spec);

/// Catalogue substitution behind a spec, if any (used for matrix reports).
std::optional<Substitution> substitution_for(std::string_view spec);

struct ExperimentConfig {
  std::string parent_a = "fcc";
  std::string parent_b = "tm";
  ValueMap value_map_a = default_value_map();
  ValueMap value_map_b = default_value_map();
  std::vector<double> kappas = {0.5};
  double lambda = 1.0;
  /// Shifts applied to parent_b.
  std::vector<std::size_t> shifts = {0, 1, 2, 3, 4, 5};
  std::size_t n_sites = std::size_t{1} << 14;
  double t_max = 2000.0;
  std::optional<double> dt;  // nullopt = auto
  /// "geometric:<points_per_decade>" or a positive step count.
  std::string sample_every = "geometric:20";
  /// "center" or a site index.
  std::string seedsite = "center";
  std::string output_dir = "hqc-out";
  Integrator integrator = Integrator::split6;
  std::size_t margin = 64;
  ClassifyThresholds thresholds;
  /// Free-form label used to prefix run ids (presets set it).
  std::string label;
};

/// Every problem with the config, empty when valid.
std::vector<std::string> validate(const ExperimentConfig& cfg);
/// Throws usage listing all problems at once.
void require_valid(const ExperimentConfig& cfg);

/// `key = value` lines; `#` starts a comment. Also accepts the header of a
/// file written by this tool (lines `# key = value` before the CSV body), so
/// any output can be replayed. Unknown keys are errors.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Resolved `key = value` lines, including defaults, in a fixed order.
std::vector<std::string> config_lines(const ExperimentConfig& cfg);

/// `fig1`, `fig2`, `fig3`; `full` switches to N = 2^14.
std::vector<ExperimentConfig> preset(std::string_view name, bool full = false);

/// Auto dt: leapfrog and split2/split4 use 0.02 / (2 + lambda max|V|);
/// split6 uses ten times that.
double auto_dt(Integrator scheme, const LatticeModel& model);

std::size_t initial_site(const ExperimentConfig& cfg);

HybridPotential build_potential(const ExperimentConfig& cfg, std::size_t shift, double kappa);

struct RunResult {
  std::string id;
  std::string parent_a;
  std::string parent_b;
  std::size_t shift = 0;
  double kappa = 0.0;
  double lambda = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  MomentSeries series;
  TransportFit fit;
  RegimeLabel label;
  /// Header lines that reproduce this run (config with this shift/kappa only).
  std::vector<std::string> header;
};

std::string run_id(const ExperimentConfig& cfg, std::size_t shift, double kappa);

/// Builds the potential, checks the wavefront guard, evolves, fits and classifies.
RunResult run_one(const ExperimentConfig& cfg, std::size_t shift, double kappa);

/// All (config, shift, kappa) runs on `jobs` worker threads. Results come back
/// sorted by (config order, shift, kappa). `on_done` is called (serialized)
/// as each run finishes.
std::vector<RunResult> run_sweep(const std::vector<ExperimentConfig>& configs, unsigned jobs,
                                 const std::function<void(const RunResult&)>& on_done = {});

void write_run_csv(std::ostream& os, const RunResult& run);
/// experiment_id,parent_a,parent_b,shift,kappa,lambda,beta,residual,label,
/// after `header` lines prefixed with "# ".
void write_summary_csv(std::ostream& os, const std::vector<RunResult>& runs,
                       const std::vector<std::string>& header = {});

/// Format version plus the resolved config of every sweep entry; a lone
/// config is written plainly so the file can be replayed with --config.
std::vector<std::string> sweep_header(const std::vector<ExperimentConfig>& configs);

/// Minimality prediction for the product of two parents' hulls: applies when
/// both are primitive substitutions, and then reads off the independence
/// verdict of their dominant eigenvalues.
struct MinimalityPrediction {
  bool applicable = false;
  std::optional<double> theta;
  std::optional<double> vartheta;
  std::optional<IndependenceVerdict> verdict;
  std::string text;
};

MinimalityPrediction predict_minimality(std::string_view parent_a, std::string_view parent_b, unsigned bound = 64,
                                        double tol = 1e-9);

struct DiagnoseOptions {
  std::size_t max_word_len = 8;
  std::size_t witness_window = std::size_t{1} << 16;
  std::int64_t shift_radius = 0;
  std::vector<std::size_t> n_values = {4, 8, 16, 32};
  std::size_t complexity_window = std::size_t{1} << 18;
  double kappa = 0.5;
};

struct ProfileRow {
  std::string sequence;
  BoshernitzanRow row;
};

struct DiagnoseReport {
  std::string parent_a;
  std::string parent_b;
  DiagnoseOptions options;
  std::vector<Witness> witnesses;
  std::vector<ProfileRow> profile;
  MinimalityPrediction prediction;
};

DiagnoseReport diagnose(std::string_view parent_a, std::string_view parent_b, const DiagnoseOptions& options = {});

/// sequence,n,p_n,eta_hat,score
void write_profile_csv(std::ostream& os, const DiagnoseReport& report);

}  // namespace hqc
