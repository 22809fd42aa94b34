#include "hqc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "hqc/error.hpp"
#include "hqc/format.hpp"

namespace hqc {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
  const std::string t = trim(text);
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    fail(ErrorKind::usage, std::string(what) + ": expected a nonnegative integer, got `" + t + "`");
  return value;
}

// "0..5", "0,2,4" or a mix such as "0..2,7".
std::vector<std::size_t> parse_shifts(std::string_view text) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) {
    if (const auto dots = item.find(".."); dots != std::string::npos) {
      const auto lo = parse_count(std::string_view(item).substr(0, dots), "shifts");
      const auto hi = parse_count(std::string_view(item).substr(dots + 2), "shifts");
      if (hi < lo) fail(ErrorKind::usage, "shifts: empty range `" + item + "`");
      for (std::size_t j = lo; j <= hi; ++j) out.push_back(j);
    } else {
      out.push_back(parse_count(item, "shifts"));
    }
  }
  return out;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string sanitize(std::string_view s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '-';
  return out;
}

std::optional<unsigned> geometric_points(const std::string& sample_every) {
  constexpr std::string_view prefix = "geometric:";
  if (sample_every.rfind(prefix, 0) != 0) return std::nullopt;
  return static_cast<unsigned>(parse_count(std::string_view(sample_every).substr(prefix.size()), "sample_every"));
}

}  // namespace

// --- sources ------------------------------------------------------------------

SequenceSource make_source(std::string_view spec) {
  if (spec == "fcc") return SequenceSource::fixed_point(catalogue::fibonacci(), 'a');
  if (spec == "tm") return SequenceSource::fixed_point(catalogue::thue_morse(), 'a');
  if (spec == "pd") return SequenceSource::fixed_point(catalogue::period_doubling(), 'a');
  if (spec == "pf") return SequenceSource::fixed_point(catalogue::paper_folding(), '1', catalogue::paper_folding_map());
  if (spec == "rs") return SequenceSource::fixed_point(catalogue::rudin_shapiro(), '1', catalogue::rudin_shapiro_map());
  if (spec.rfind("periodic:", 0) == 0) {
    const auto pattern = spec.substr(9);
    if (pattern.empty()) fail(ErrorKind::usage, "periodic source needs a pattern, e.g. periodic:ab");
    return SequenceSource::periodic(Word(pattern));
  }
  if (spec.rfind("file:", 0) == 0) {
    auto sub = substitution_for(spec);
    const Letter seed = sub->alphabet().letters().front();
    return SequenceSource::fixed_point(std::move(*sub), seed);
  }
  fail(ErrorKind::usage, "unknown source `" + std::string(spec) + "` (fcc, tm, pd, pf, rs, periodic:<pattern>, file:<path>)");
}

std::optional<Substitution> substitution_for(std::string_view spec) {
  if (spec == "fcc") return catalogue::fibonacci();
  if (spec == "tm") return catalogue::thue_morse();
  if (spec == "pd") return catalogue::period_doubling();
  if (spec == "pf") return catalogue::paper_folding();
  if (spec == "rs") return catalogue::rudin_shapiro();
  if (spec.rfind("file:", 0) == 0) {
    const std::string path(spec.substr(5));
    std::ifstream in(path);
    if (!in) fail(ErrorKind::usage, "cannot open substitution file `" + path + "`");
    return parse_substitution(in, path);
  }
  return std::nullopt;
}

// --- configuration ------------------------------------------------------------

std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> errors;
  for (const auto* spec : {&cfg.parent_a, &cfg.parent_b}) {
    try {
      (void)make_source(*spec);
    } catch (const Error& e) {
      errors.push_back(e.what());
    }
  }
  if (cfg.kappas.empty()) errors.emplace_back("kappas: at least one value is required");
  for (double k : cfg.kappas)
    if (!(k >= 0.0 && k <= 1.0)) errors.push_back("kappas: " + format_double(k) + " is outside [0, 1]");
  if (!std::isfinite(cfg.lambda) || cfg.lambda < 0.0) errors.emplace_back("lambda: must be finite and >= 0");
  if (cfg.shifts.empty()) errors.emplace_back("shifts: at least one shift is required");
  if (cfg.n_sites < 3) errors.emplace_back("N: need at least 3 sites");
  if (!(cfg.t_max > 0.0) || !std::isfinite(cfg.t_max)) errors.emplace_back("T_max: must be positive");
  if (cfg.dt && (!(*cfg.dt > 0.0) || !std::isfinite(*cfg.dt))) errors.emplace_back("dt: must be positive or auto");
  try {
    if (auto ppd = geometric_points(cfg.sample_every)) {
      if (*ppd < 1) errors.emplace_back("sample_every: geometric sampling needs at least one point per decade");
    } else if (parse_count(cfg.sample_every, "sample_every") == 0) {
      errors.emplace_back("sample_every: must be positive");
    }
  } catch (const Error& e) {
    errors.push_back(e.what());
  }
  try {
    if (initial_site(cfg) >= cfg.n_sites) errors.emplace_back("seedsite: outside the lattice");
  } catch (const Error& e) {
    errors.push_back(e.what());
  }
  if (cfg.n_sites >= 3 && cfg.t_max > 0.0) {
    std::size_t n0 = cfg.n_sites / 2;
    try {
      n0 = initial_site(cfg);
    } catch (const Error&) {
    }
    if (!wavefront_safe(cfg.t_max, cfg.n_sites, n0, cfg.margin)) {
      std::ostringstream os;
      os << "T_max = " << cfg.t_max << " is not wavefront-safe for N = " << cfg.n_sites << ", seed site " << n0
         << ", margin " << cfg.margin << ": need 2 T_max + margin < " << std::min(n0, cfg.n_sites - 1 - n0)
         << "; lower T_max to at most " << (static_cast<double>(std::min(n0, cfg.n_sites - 1 - n0)) - cfg.margin - 1) / 2.0
         << " or raise N";
      errors.push_back(os.str());
    }
  }
  if (cfg.output_dir.empty()) errors.emplace_back("output_dir: must not be empty");
  return errors;
}

void require_valid(const ExperimentConfig& cfg) {
  const auto errors = validate(cfg);
  if (!errors.empty()) fail(ErrorKind::usage, "invalid configuration:\n  " + join(errors, "\n  "));
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  ExperimentConfig cfg = std::move(base);
  std::vector<std::string> errors;
  std::string line;
  std::size_t lineno = 0;
  bool replay = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = trim(line);
    if (lineno == 1 && body.rfind("# hqc-format", 0) == 0) replay = true;
    if (replay) {
      // Output header: config lines are comments; the CSV body ends it.
      if (body.empty()) continue;
      if (body[0] != '#') break;
      body = trim(std::string_view(body).substr(1));
      if (body.rfind("hqc-format", 0) == 0) continue;
    } else {
      if (auto hash = body.find('#'); hash != std::string::npos) body = trim(std::string_view(body).substr(0, hash));
    }
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected `key = value`");
      continue;
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    try {
      if (key == "parent_a") cfg.parent_a = value;
      else if (key == "parent_b") cfg.parent_b = value;
      else if (key == "value_map_a") cfg.value_map_a = parse_value_map(value);
      else if (key == "value_map_b") cfg.value_map_b = parse_value_map(value);
      else if (key == "kappa" || key == "kappas") {
        cfg.kappas.clear();
        for (const auto& k : split_list(value)) cfg.kappas.push_back(parse_double(k, key));
      } else if (key == "lambda") cfg.lambda = parse_double(value, key);
      else if (key == "shifts") cfg.shifts = parse_shifts(value);
      else if (key == "N") cfg.n_sites = parse_count(value, key);
      else if (key == "T_max") cfg.t_max = parse_double(value, key);
      else if (key == "dt") cfg.dt = value == "auto" ? std::nullopt : std::optional<double>(parse_double(value, key));
      else if (key == "sample_every") cfg.sample_every = value;
      else if (key == "seedsite") cfg.seedsite = value;
      else if (key == "output_dir") cfg.output_dir = value;
      else if (key == "integrator") cfg.integrator = parse_integrator(value);
      else if (key == "margin") cfg.margin = parse_count(value, key);
      else if (key == "localized_beta") cfg.thresholds.localized_beta = parse_double(value, key);
      else if (key == "plateau_ratio") cfg.thresholds.plateau_ratio = parse_double(value, key);
      else if (key == "ballistic_beta") cfg.thresholds.ballistic_beta = parse_double(value, key);
      else if (key == "label") cfg.label = value;
      // Run metadata written next to the config in output headers.
      else if (replay && (key == "experiment_id" || key == "steps" || key == "dt_resolved")) continue;
      else errors.push_back("line " + std::to_string(lineno) + ": unknown key `" + key + "`");
    } catch (const Error& e) {
      errors.push_back("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!errors.empty()) fail(ErrorKind::usage, "invalid configuration file:\n  " + join(errors, "\n  "));
  return cfg;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::usage, "cannot open config file `" + path + "`");
  return parse_config(in, std::move(base));
}

std::vector<std::string> config_lines(const ExperimentConfig& cfg) {
  std::vector<std::string> kappas, shifts;
  for (double k : cfg.kappas) kappas.push_back(format_double(k));
  for (auto j : cfg.shifts) shifts.push_back(std::to_string(j));
  return {
      "label = " + cfg.label,
      "parent_a = " + cfg.parent_a,
      "parent_b = " + cfg.parent_b,
      "value_map_a = " + format_value_map(cfg.value_map_a),
      "value_map_b = " + format_value_map(cfg.value_map_b),
      "kappas = " + join(kappas, ","),
      "lambda = " + format_double(cfg.lambda),
      "shifts = " + join(shifts, ","),
      "N = " + std::to_string(cfg.n_sites),
      "T_max = " + format_double(cfg.t_max),
      "dt = " + (cfg.dt ? format_double(*cfg.dt) : std::string("auto")),
      "sample_every = " + cfg.sample_every,
      "seedsite = " + cfg.seedsite,
      "output_dir = " + cfg.output_dir,
      "integrator = " + std::string(to_string(cfg.integrator)),
      "margin = " + std::to_string(cfg.margin),
      "localized_beta = " + format_double(cfg.thresholds.localized_beta),
      "plateau_ratio = " + format_double(cfg.thresholds.plateau_ratio),
      "ballistic_beta = " + format_double(cfg.thresholds.ballistic_beta),
  };
}

std::vector<ExperimentConfig> preset(std::string_view name, bool full) {
  ExperimentConfig base;
  base.n_sites = full ? (std::size_t{1} << 14) : (std::size_t{1} << 13);
  base.t_max = full ? 4000.0 : 2000.0;
  base.label = std::string(name);
  if (name == "fig1") {
    // Fcc fixed, TM shifted by 0..5, at kappa 1/2 and the complementary 0.2, 0.8.
    base.parent_a = "fcc";
    base.parent_b = "tm";
    base.kappas = {0.5, 0.2, 0.8};
    base.shifts = {0, 1, 2, 3, 4, 5};
    return {base};
  }
  if (name == "fig2") {
    base.parent_a = "tm";
    base.parent_b = "tm";
    base.shifts = {0, 1, 2, 3, 4, 5};
    return {base};
  }
  if (name == "fig3") {
    std::vector<ExperimentConfig> out;
    for (std::size_t period : {4, 16, 7, 10}) {
      ExperimentConfig cfg = base;
      cfg.parent_a = "pf";
      // Balanced blocks a^ceil(p/2) b^floor(p/2); the original pattern is not known.
      cfg.parent_b = "periodic:" + std::string((period + 1) / 2, 'a') + std::string(period / 2, 'b');
      cfg.shifts = {0};
      cfg.label = std::string(name) + "-p" + std::to_string(period);
      out.push_back(cfg);
    }
    return out;
  }
  fail(ErrorKind::usage, "unknown preset `" + std::string(name) + "` (fig1, fig2, fig3)");
}

// --- runs -------------------------------------------------------------------------

double auto_dt(Integrator scheme, const LatticeModel& model) {
  return scheme == Integrator::split6 ? 10.0 * default_dt(model) : default_dt(model);
}

std::size_t initial_site(const ExperimentConfig& cfg) {
  if (cfg.seedsite == "center") return cfg.n_sites / 2;
  return parse_count(cfg.seedsite, "seedsite");
}

HybridPotential build_potential(const ExperimentConfig& cfg, std::size_t shift, double kappa) {
  const auto a = make_source(cfg.parent_a);
  const auto b = make_source(cfg.parent_b);
  const auto v = letters_to_values(a.prefix(cfg.n_sites), cfg.value_map_a);
  const auto u = letters_to_values(b.prefix(cfg.n_sites + shift), cfg.value_map_b);
  HybridPotential p = hybridize(v, u, kappa, shift);
  p.parent_v = cfg.parent_a;
  p.parent_u = cfg.parent_b;
  p.value_map_v = cfg.value_map_a;
  p.value_map_u = cfg.value_map_b;
  return p;
}

std::string run_id(const ExperimentConfig& cfg, std::size_t shift, double kappa) {
  std::string id = cfg.label.empty() ? std::string() : sanitize(cfg.label) + "_";
  id += sanitize(cfg.parent_a) + "_" + sanitize(cfg.parent_b) + "_s" + std::to_string(shift) + "_k" +
        sanitize(format_double(kappa));
  return id;
}

RunResult run_one(const ExperimentConfig& cfg, std::size_t shift, double kappa) {
  ExperimentConfig single = cfg;
  single.shifts = {shift};
  single.kappas = {kappa};
  require_valid(single);

  RunResult run;
  run.id = run_id(cfg, shift, kappa);
  run.parent_a = cfg.parent_a;
  run.parent_b = cfg.parent_b;
  run.shift = shift;
  run.kappa = kappa;
  run.lambda = cfg.lambda;

  auto potential = build_potential(cfg, shift, kappa);
  LatticeModel model;
  model.potential = std::move(potential.values);
  model.lambda = cfg.lambda;
  model.n0 = initial_site(cfg);

  EvolveOptions opt;
  opt.scheme = cfg.integrator;
  opt.dt = cfg.dt ? *cfg.dt : auto_dt(cfg.integrator, model);
  opt.steps = static_cast<std::size_t>(std::llround(cfg.t_max / opt.dt));
  if (opt.steps == 0) fail(ErrorKind::usage, "T_max is shorter than one time step");
  if (auto ppd = geometric_points(cfg.sample_every)) {
    const double t_first = std::min(1.0, cfg.t_max / 10.0);
    opt.sample_steps = geometric_sample_steps(opt.dt, std::max(t_first, opt.dt), opt.steps * opt.dt, *ppd);
  } else {
    opt.sample_every = parse_count(cfg.sample_every, "sample_every");
  }
  run.dt = opt.dt;
  run.steps = opt.steps;

  run.series = evolve(model, WaveState::delta(model.size(), model.n0), opt).series;
  run.fit = fit_last_decade(run.series);
  run.label = classify(run.series, run.fit, cfg.thresholds);

  single.dt = opt.dt;
  run.header.push_back("hqc-format " + std::to_string(kFormatVersion));
  for (auto& line : config_lines(single)) run.header.push_back(std::move(line));
  run.header.push_back("experiment_id = " + run.id);
  run.header.push_back("steps = " + std::to_string(run.steps));
  return run;
}

std::vector<RunResult> run_sweep(const std::vector<ExperimentConfig>& configs, unsigned jobs,
                                 const std::function<void(const RunResult&)>& on_done) {
  // Validate everything before the first simulation starts.
  std::vector<std::string> errors;
  for (const auto& cfg : configs)
    for (auto& e : validate(cfg)) errors.push_back((cfg.label.empty() ? "" : cfg.label + ": ") + e);
  if (!errors.empty()) fail(ErrorKind::usage, "invalid configuration:\n  " + join(errors, "\n  "));

  struct Task {
    std::size_t config;
    std::size_t shift;
    double kappa;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < configs.size(); ++c)
    for (auto j : configs[c].shifts)
      for (double k : configs[c].kappas) tasks.push_back({c, j, k});
  std::sort(tasks.begin(), tasks.end(), [](const Task& x, const Task& y) {
    return std::tie(x.config, x.shift, x.kappa) < std::tie(y.config, y.shift, y.kappa);
  });

  std::vector<std::optional<RunResult>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      {
        std::lock_guard lock(mutex);
        if (first_error) return;
      }
      try {
        RunResult r = run_one(configs[tasks[i].config], tasks[i].shift, tasks[i].kappa);
        std::lock_guard lock(mutex);
        if (on_done) on_done(r);
        results[i] = std::move(r);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const unsigned n_workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);
  std::vector<RunResult> out;
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

void write_run_csv(std::ostream& os, const RunResult& run) { write_moment_csv(os, run.series, run.header); }

void write_summary_csv(std::ostream& os, const std::vector<RunResult>& runs, const std::vector<std::string>& header) {
  for (const auto& line : header) os << "# " << line << '\n';
  os << "experiment_id,parent_a,parent_b,shift,kappa,lambda,beta,residual,label\n";
  char buf[64];
  for (const auto& r : runs) {
    os << r.id << ',' << r.parent_a << ',' << r.parent_b << ',' << r.shift << ',' << format_double(r.kappa) << ','
       << format_double(r.lambda) << ',';
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", r.fit.beta, r.fit.residual);
    os << buf << ',' << to_string(r.label.regime) << '\n';
  }
}

std::vector<std::string> sweep_header(const std::vector<ExperimentConfig>& configs) {
  std::vector<std::string> out{"hqc-format " + std::to_string(kFormatVersion)};
  for (std::size_t i = 0; i < configs.size(); ++i)
    for (const auto& line : config_lines(configs[i]))
      out.push_back(configs.size() == 1 ? line : "[" + std::to_string(i) + "] " + line);
  return out;
}

// --- predictions and diagnostics ---------------------------------------------------

MinimalityPrediction predict_minimality(std::string_view parent_a, std::string_view parent_b, unsigned bound,
                                        double tol) {
  MinimalityPrediction p;
  const auto sa = substitution_for(parent_a);
  const auto sb = substitution_for(parent_b);
  if (!sa || !sb) {
    p.text = "minimality prediction not applicable: " +
             std::string(!sa ? parent_a : parent_b) + " is not a substitution sequence";
    return p;
  }
  if (!primitivity_power(*sa) || !primitivity_power(*sb)) {
    p.text = "minimality prediction not applicable: a parent substitution is not primitive";
    return p;
  }
  p.theta = spectral_info(substitution_matrix(*sa)).dominant;
  p.vartheta = spectral_info(substitution_matrix(*sb)).dominant;
  p.applicable = true;
  p.verdict = multiplicative_independence(*p.theta, *p.vartheta, bound, tol);
  std::ostringstream os;
  os.precision(12);
  os << "dominant eigenvalues " << *p.theta << " (" << parent_a << ") and " << *p.vartheta << " (" << parent_b
     << "): " << to_string(*p.verdict) << "; ";
  if (p.verdict->dependent())
    os << "independence hypothesis fails, the product hull may split into several minimal components "
          "(shift-dependent transport possible)";
  else
    os << "product hull predicted minimal (one transport regime expected across shifts)";
  p.text = os.str();
  return p;
}

DiagnoseReport diagnose(std::string_view parent_a, std::string_view parent_b, const DiagnoseOptions& options) {
  DiagnoseReport report;
  report.parent_a = std::string(parent_a);
  report.parent_b = std::string(parent_b);
  report.options = options;
  const auto a = make_source(parent_a);
  const auto b = make_source(parent_b);
  report.witnesses = witness_search(a, b, options.max_word_len, options.witness_window, options.shift_radius);

  const Word wa = a.prefix(options.complexity_window);
  const Word wb = b.prefix(options.complexity_window);
  const auto va = letters_to_values(wa, default_value_map());
  const auto vb = letters_to_values(wb, default_value_map());
  const Word hybrid = values_to_letters(hybridize(va, vb, options.kappa, 0).values);
  const std::string hybrid_name = "hybrid(" + report.parent_a + "," + report.parent_b + ")";
  for (const auto& [name, text] : {std::pair<std::string, const Word*>{report.parent_a, &wa},
                                   {report.parent_b, &wb},
                                   {hybrid_name, &hybrid}}) {
    for (auto n : options.n_values) report.profile.push_back({name, boshernitzan_row(*text, n)});
  }
  report.prediction = predict_minimality(parent_a, parent_b);
  return report;
}

void write_profile_csv(std::ostream& os, const DiagnoseReport& report) {
  os << "sequence,n,p_n,eta_hat,score\n";
  char buf[96];
  for (const auto& [name, row] : report.profile) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g", row.n, row.p_n, row.eta_hat, row.score);
    os << name << ',' << buf << '\n';
  }
}

}  // namespace hqc
