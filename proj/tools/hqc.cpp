// hqc: hybrid quasicrystal potentials, transport simulation and symbolic
// diagnostics from the command line.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "hqc/analysis.hpp"
#include "hqc/error.hpp"
#include "hqc/experiment.hpp"
#include "hqc/format.hpp"
#include "hqc/substitution.hpp"
#include "hqc/symbolic.hpp"

namespace fs = std::filesystem;
using namespace hqc;

namespace {

struct ConfigFlags {
  std::string config;
  std::string preset;
  bool full = false;
  std::string output;
  unsigned jobs = 1;
  // Overrides applied after the config file / preset.
  std::string parent_a, parent_b, kappas, shifts, dt, integrator, sample_every;
  std::optional<double> lambda, t_max;
  std::optional<std::size_t> n_sites;

  void add_to(CLI::App* app, bool with_jobs) {
    app->add_option("--config", config, "Config file (key = value), or an output CSV to replay");
    app->add_option("--preset", preset, "Figure preset: fig1, fig2, fig3");
    app->add_flag("--full", full, "Full-scale presets (N = 2^14)");
    app->add_option("--output", output, "Output directory");
    if (with_jobs) app->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    app->add_option("--parent-a", parent_a, "Fixed parent source");
    app->add_option("--parent-b", parent_b, "Shifted parent source");
    app->add_option("--kappa", kappas, "Mixing weight(s), comma separated");
    app->add_option("--shifts", shifts, "Shifts of parent b, e.g. 0..5");
    app->add_option("--lambda", lambda, "Coupling constant");
    app->add_option("--N", n_sites, "Number of lattice sites");
    app->add_option("--tmax", t_max, "Final time");
    app->add_option("--dt", dt, "Time step or `auto`");
    app->add_option("--integrator", integrator, "leapfrog, split2, split4, split6");
    app->add_option("--sample-every", sample_every, "geometric:<points per decade> or a step count");
  }

  std::vector<ExperimentConfig> resolve() const {
    if (!preset.empty() && !config.empty()) fail(ErrorKind::usage, "use either --preset or --config, not both");
    std::vector<ExperimentConfig> configs;
    if (!preset.empty()) configs = hqc::preset(preset, full);
    else if (!config.empty()) configs = {load_config(config)};
    else configs = {ExperimentConfig{}};
    for (auto& cfg : configs) {
      std::ostringstream extra;
      if (!parent_a.empty()) extra << "parent_a = " << parent_a << '\n';
      if (!parent_b.empty()) extra << "parent_b = " << parent_b << '\n';
      if (!kappas.empty()) extra << "kappas = " << kappas << '\n';
      if (!shifts.empty()) extra << "shifts = " << shifts << '\n';
      if (!dt.empty()) extra << "dt = " << dt << '\n';
      if (!integrator.empty()) extra << "integrator = " << integrator << '\n';
      if (!sample_every.empty()) extra << "sample_every = " << sample_every << '\n';
      if (lambda) extra << "lambda = " << format_double(*lambda) << '\n';
      if (t_max) extra << "T_max = " << format_double(*t_max) << '\n';
      if (n_sites) extra << "N = " << *n_sites << '\n';
      if (!output.empty()) extra << "output_dir = " << output << '\n';
      std::istringstream in(extra.str());
      cfg = parse_config(in, cfg);
    }
    return configs;
  }
};

void print_fit(std::ostream& os, const RunResult& r) {
  os << std::left << std::setw(40) << r.id << " beta = " << std::fixed << std::setprecision(3) << r.fit.beta
     << "  residual = " << r.fit.residual << "  plateau = " << r.label.plateau_ratio << "  "
     << to_string(r.label.regime) << std::defaultfloat << '\n';
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) fail(ErrorKind::usage, "cannot write `" + path.string() + "`");
  return out;
}

int cmd_gen(const std::string& spec, std::size_t length, const std::string& output) {
  const Word w = make_source(spec).prefix(length);
  if (output.empty()) {
    std::cout << w << '\n';
  } else {
    auto out = open_out(output);
    out << w << '\n';
  }
  return 0;
}

int cmd_matrix(const std::string& spec) {
  const auto sub = substitution_for(spec);
  if (!sub) fail(ErrorKind::usage, "`" + spec + "` is not a substitution source");
  const auto m = substitution_matrix(*sub);
  const auto info = spectral_info(m);
  const auto prim = primitivity_power(*sub);
  const auto& letters = sub->alphabet().letters();
  std::cout << "substitution " << sub->name() << ":";
  for (char c : letters) std::cout << ' ' << c << "->" << sub->image(c);
  std::cout << "\nmatrix (row w counts letters w' in the image of w):\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::cout << "  " << letters[i] << " [";
    for (std::size_t j = 0; j < m.size(); ++j) std::cout << (j ? " " : "") << m(i, j);
    std::cout << "]\n";
  }
  std::cout << std::setprecision(11) << "dominant " << info.dominant << "\nother moduli";
  // Defective zero eigenvalues come back from the solver as ~sqrt(eps).
  for (double r : info.others) std::cout << ' ' << (std::abs(r) < 1e-6 ? 0.0 : r);
  std::cout << "\nprimitivity power " << (prim ? std::to_string(*prim) : std::string("none within 32")) << '\n';
  std::cout << "pisot " << to_string(info.pisot) << '\n';
  return 0;
}

int cmd_simulate(const ConfigFlags& flags) {
  const auto configs = flags.resolve();
  if (configs.size() != 1) fail(ErrorKind::usage, "simulate runs a single configuration; use sweep for this preset");
  const auto& cfg = configs.front();
  const RunResult run = run_one(cfg, cfg.shifts.front(), cfg.kappas.front());
  if (flags.output.empty()) {
    write_run_csv(std::cout, run);
  } else {
    auto out = open_out(fs::path(flags.output) / (run.id + ".csv"));
    write_run_csv(out, run);
  }
  print_fit(std::cerr, run);
  return 0;
}

int cmd_sweep(const ConfigFlags& flags) {
  const auto configs = flags.resolve();
  // Predictions first, one per distinct parent pair.
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& cfg : configs)
    if (pairs.emplace(cfg.parent_a, cfg.parent_b).second)
      std::cout << "[prediction] " << cfg.parent_a << " x " << cfg.parent_b << ": "
                << predict_minimality(cfg.parent_a, cfg.parent_b).text << '\n';
  std::cout.flush();

  auto runs = run_sweep(configs, flags.jobs, [](const RunResult& r) { print_fit(std::cout, r); std::cout.flush(); });
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& cfg_dir = configs.front().output_dir;
    auto out = open_out(fs::path(cfg_dir) / (runs[i].id + ".csv"));
    write_run_csv(out, runs[i]);
  }
  const fs::path summary = fs::path(configs.front().output_dir) / "summary.csv";
  {
    auto out = open_out(summary);
    write_summary_csv(out, runs, sweep_header(configs));
  }
  std::map<std::string, int> counts;
  for (const auto& r : runs) ++counts[std::string(to_string(r.label.regime))];
  std::cout << "== verdict: " << runs.size() << " runs:";
  for (const auto& [label, n] : counts) std::cout << ' ' << label << '=' << n;
  std::cout << " (summary in " << summary.string() << ")\n";
  return 0;
}

int cmd_diagnose(const std::string& a, const std::string& b, const DiagnoseOptions& opt, const std::string& output) {
  const auto report = diagnose(a, b, opt);
  std::cout << "diagnose " << a << " x " << b << "\n";
  std::cout << "witnesses (aligned pairs never seen at shifts [" << -opt.shift_radius << ", " << opt.shift_radius
            << "], words up to length " << opt.max_word_len << ", window " << opt.witness_window
            << "): " << report.witnesses.size() << '\n';
  // Per length, show the witnesses that do occur in a nearby shifted orbit
  // (a, shift^j b), earliest first: those separate the orbit of (a, b) from
  // another point of the product.
  if (!report.witnesses.empty()) {
    constexpr std::int64_t kProbe = 8;
    const Word ta = make_source(a).prefix(opt.witness_window);
    const Word tb = make_source(b).prefix(opt.witness_window + kProbe);
    struct Shown {
      std::int64_t shift;
      std::size_t pos;
      const Witness* w;
    };
    std::map<std::size_t, std::vector<Shown>> by_len;
    std::map<std::size_t, std::size_t> counts;
    for (const auto& w : report.witnesses) {
      ++counts[w.r.size()];
      std::optional<Shown> best;
      for (std::size_t p : find_all(ta, w.r)) {
        for (std::int64_t j = opt.shift_radius + 1; j <= opt.shift_radius + kProbe; ++j) {
          if (tb.compare(p + static_cast<std::size_t>(j), w.s.size(), w.s) != 0) continue;
          if (!best || std::pair(j, p) < std::pair(best->shift, best->pos)) best = Shown{j, p, &w};
          break;
        }
        if (best && best->shift == opt.shift_radius + 1) break;
      }
      if (best) by_len[w.r.size()].push_back(*best);
    }
    for (const auto& [len, n] : counts) {
      std::cout << "  length " << len << ": " << n;
      auto it = by_len.find(len);
      if (it == by_len.end()) {
        std::cout << '\n';
        continue;
      }
      auto& v = it->second;
      std::stable_sort(v.begin(), v.end(),
                       [](const Shown& x, const Shown& y) { return std::pair(x.shift, x.pos) < std::pair(y.shift, y.pos); });
      std::cout << "; e.g.";
      for (std::size_t i = 0; i < std::min<std::size_t>(3, v.size()); ++i)
        std::cout << " (" << v[i].w->r << ", " << v[i].w->s << ") seen at shift " << v[i].shift << " position "
                  << v[i].pos << ';';
      std::cout << '\n';
    }
  }
  if (report.witnesses.empty()) std::cout << "  none: consistent with a minimal product hull\n";
  else std::cout << "  evidence that the orbit closure of (" << a << ", " << b << ") is not the full product\n";

  std::cout << "complexity / Boshernitzan profile (window " << opt.complexity_window << "):\n";
  std::cout << "  sequence,n,p_n,eta_hat,score\n";
  for (const auto& [name, row] : report.profile)
    std::cout << "  " << name << ',' << row.n << ',' << row.p_n << ',' << std::setprecision(6) << row.eta_hat << ','
              << row.score << '\n';
  std::cout << "independence: " << report.prediction.text << '\n';

  if (!output.empty()) {
    auto out = open_out(fs::path(output) / "witnesses.csv");
    out << "# hqc-format " << kFormatVersion << "\n# source_a = " << a << "\n# source_b = " << b
        << "\n# max_word_len = " << opt.max_word_len << "\n# window_len = " << opt.witness_window
        << "\n# shift_radius = " << opt.shift_radius << "\nr,s,shift_min,shift_max,window_len\n";
    for (const auto& w : report.witnesses)
      out << w.r << ',' << w.s << ',' << w.shift_min << ',' << w.shift_max << ',' << w.window_len << '\n';
    std::map<std::string, std::vector<BoshernitzanRow>> by_sequence;
    for (const auto& [name, row] : report.profile) by_sequence[name].push_back(row);
    for (const auto& [name, rows] : by_sequence) {
      std::string file = "profile_";
      for (char c : name) file += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
      auto prof = open_out(fs::path(output) / (file + ".csv"));
      prof << "# hqc-format " << kFormatVersion << "\n# sequence = " << name << "\n# window_len = " << opt.complexity_window << "\nn,p_n,eta_hat,score\n";
      char buf[96];
      for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g\n", row.n, row.p_n, row.eta_hat, row.score);
        prof << buf;
      }
    }
  }
  return 0;
}

int cmd_analyze(const std::string& path, std::optional<double> t_min, std::optional<double> t_max,
                const ClassifyThresholds& thresholds) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::usage, "cannot open `" + path + "`");
  const auto series = read_moment_csv(in);
  if (series.samples.empty()) fail(ErrorKind::insufficient_data, "no samples in `" + path + "`");
  const TransportFit fit = (t_min || t_max)
                               ? fit_beta(series, t_min.value_or(series.samples.back().t / 10.0),
                                          t_max.value_or(series.samples.back().t))
                               : fit_last_decade(series);
  const auto label = classify(series, fit, thresholds);
  std::cout << std::setprecision(6) << "beta " << fit.beta << "\nlog_c " << fit.log_c << "\nresidual " << fit.residual
            << "\nwindow " << fit.t_min << " " << fit.t_max << "\nn_points " << fit.n_points << "\nexcluded "
            << fit.excluded << "\nplateau_ratio " << label.plateau_ratio << "\nlabel " << to_string(label.regime)
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hqc: hybrid quasicrystal transport and symbolic diagnostics"};
  app.require_subcommand(1);

  std::string gen_spec, gen_out;
  std::size_t gen_len = 0;
  auto* gen = app.add_subcommand("gen", "Print the first letters of a source");
  gen->add_option("source", gen_spec, "fcc, tm, pd, pf, rs, periodic:<pattern>, file:<path>")->required();
  gen->add_option("length", gen_len, "Number of letters")->required();
  gen->add_option("--output", gen_out, "Write to a file instead of stdout");

  std::string matrix_spec;
  auto* matrix = app.add_subcommand("matrix", "Substitution matrix, spectrum, primitivity and Pisot verdict");
  matrix->add_option("source", matrix_spec)->required();

  ConfigFlags sim_flags, sweep_flags;
  auto* simulate = app.add_subcommand("simulate", "Run one hybrid simulation and write its moment CSV");
  sim_flags.add_to(simulate, false);
  auto* sweep = app.add_subcommand("sweep", "Run all shifts and kappas of a config or preset");
  sweep_flags.add_to(sweep, true);
  sweep_flags.jobs = std::max(1u, std::thread::hardware_concurrency());

  std::string diag_a, diag_b, diag_out;
  DiagnoseOptions diag_opt;
  auto* diag = app.add_subcommand("diagnose", "Witness search, complexity, Boshernitzan scores, independence");
  diag->add_option("source_a", diag_a)->required();
  diag->add_option("source_b", diag_b)->required();
  diag->add_option("--max-word-len", diag_opt.max_word_len)->check(CLI::Range(1, 12));
  diag->add_option("--window", diag_opt.witness_window, "Window for the witness search");
  diag->add_option("--shift-radius", diag_opt.shift_radius, "Also accept aligned occurrences at shifts in [-S, S]");
  diag->add_option("--complexity-window", diag_opt.complexity_window);
  diag->add_option("--n", diag_opt.n_values, "Factor lengths for the profile");
  diag->add_option("--kappa", diag_opt.kappa, "Mixing weight for the hybrid value sequence");
  diag->add_option("--output", diag_out, "Directory for witnesses.csv and profile CSVs");

  std::string analyze_path;
  std::optional<double> an_tmin, an_tmax;
  ClassifyThresholds an_thr;
  auto* analyze = app.add_subcommand("analyze", "Re-fit beta on an existing moment CSV");
  analyze->add_option("csv", analyze_path)->required();
  analyze->add_option("--tmin", an_tmin);
  analyze->add_option("--tmax", an_tmax);
  analyze->add_option("--localized-beta", an_thr.localized_beta);
  analyze->add_option("--plateau-ratio", an_thr.plateau_ratio);
  analyze->add_option("--ballistic-beta", an_thr.ballistic_beta);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_gen(gen_spec, gen_len, gen_out);
    if (*matrix) return cmd_matrix(matrix_spec);
    if (*simulate) return cmd_simulate(sim_flags);
    if (*sweep) return cmd_sweep(sweep_flags);
    if (*diag) return cmd_diagnose(diag_a, diag_b, diag_opt, diag_out);
    if (*analyze) return cmd_analyze(analyze_path, an_tmin, an_tmax, an_thr);
  } catch (const Error& e) {
    std::cerr << "hqc: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "hqc: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
