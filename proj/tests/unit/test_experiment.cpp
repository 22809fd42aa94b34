#include <sstream>

#include "doctest.h"
#include "hqc/error.hpp"
#include "hqc/experiment.hpp"

using namespace hqc;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::usage;
}

ExperimentConfig small() {
  ExperimentConfig cfg;
  cfg.n_sites = 512;
  cfg.t_max = 60;
  cfg.shifts = {0, 1};
  cfg.kappas = {0.5};
  cfg.label = "t";
  return cfg;
}

}  // namespace

TEST_CASE("source specs") {
  CHECK(make_source("tm").prefix(16) == "abbabaabbaababba");
  CHECK(make_source("pd").prefix(8) == "abaaabab");
  CHECK(make_source("periodic:ab").prefix(6) == "ababab");
  CHECK(make_source("pf").prefix(8) == "aabaabba");
  CHECK(make_source("rs").prefix(8).find_first_not_of("ab") == std::string::npos);
  CHECK(kind_of([] { make_source("tmx"); }) == ErrorKind::usage);
  CHECK(kind_of([] { make_source("periodic:"); }) == ErrorKind::usage);
  CHECK(substitution_for("fcc").has_value());
  CHECK_FALSE(substitution_for("periodic:ab").has_value());
}

TEST_CASE("config files") {
  std::istringstream in(
      "# demo\n"
      "parent_a = fcc\nparent_b = tm   # shifted\n"
      "kappas = 0.2, 0.5,0.8\nshifts = 0..2,7\nN = 4096\nT_max = 500\n"
      "dt = auto\nintegrator = split4\nplateau_ratio = 1.5\n");
  const auto cfg = parse_config(in);
  CHECK(cfg.kappas == std::vector<double>{0.2, 0.5, 0.8});
  CHECK(cfg.shifts == std::vector<std::size_t>{0, 1, 2, 7});
  CHECK(cfg.n_sites == 4096);
  CHECK(cfg.t_max == 500.0);
  CHECK_FALSE(cfg.dt.has_value());
  CHECK(cfg.integrator == Integrator::split4);
  CHECK(cfg.thresholds.plateau_ratio == 1.5);

  std::istringstream bad("colour = red\nlambda = x\n");
  try {
    parse_config(bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::usage);
    const std::string msg = e.what();
    CHECK(msg.find("colour") != std::string::npos);
    CHECK(msg.find("line 2") != std::string::npos);
  }
}

TEST_CASE("validation lists every problem") {
  ExperimentConfig cfg;
  cfg.parent_a = "nope";
  cfg.kappas = {1.5};
  cfg.n_sites = 1024;
  cfg.t_max = 2000;
  const auto errors = validate(cfg);
  CHECK(errors.size() >= 3);
  bool guidance = false;
  for (const auto& e : errors) guidance = guidance || e.find("wavefront") != std::string::npos;
  CHECK(guidance);
  CHECK(kind_of([&] { require_valid(cfg); }) == ErrorKind::usage);
  CHECK(validate(ExperimentConfig{}).empty());
}

TEST_CASE("presets") {
  const auto f1 = preset("fig1");
  REQUIRE(f1.size() == 1);
  CHECK(f1[0].parent_a == "fcc");
  CHECK(f1[0].parent_b == "tm");
  CHECK(f1[0].n_sites == 8192);
  CHECK(f1[0].shifts == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
  CHECK(f1[0].kappas.size() == 3);
  CHECK(preset("fig1", true)[0].n_sites == 16384);
  const auto f3 = preset("fig3");
  REQUIRE(f3.size() == 4);
  CHECK(f3[0].parent_b == "periodic:aabb");
  CHECK(f3[2].parent_b == "periodic:aaaabbb");
  for (const auto& cfg : f1) CHECK(validate(cfg).empty());
  for (const auto& cfg : f3) CHECK(validate(cfg).empty());
  for (const auto& cfg : preset("fig1", true)) CHECK(validate(cfg).empty());
  CHECK(kind_of([] { preset("fig9"); }) == ErrorKind::usage);
}

TEST_CASE("a run replays bit for bit from its own header") {
  const auto cfg = small();
  const auto run = run_one(cfg, 1, 0.5);
  CHECK(run.id == "t_fcc_tm_s1_k0.5");
  std::ostringstream first;
  write_run_csv(first, run);
  CHECK(first.str().rfind("# hqc-format 1\n", 0) == 0);
  CHECK(first.str().find("# dt = ") != std::string::npos);

  std::istringstream header(first.str());
  const auto again_cfg = parse_config(header);
  const auto again = run_one(again_cfg, again_cfg.shifts.front(), again_cfg.kappas.front());
  std::ostringstream second;
  write_run_csv(second, again);
  CHECK(first.str() == second.str());
  for (const auto& s : run.series.samples) CHECK(std::abs(s.norm - 1.0) < 1e-8);
}

TEST_CASE("sweeps are ordered and thread-count independent") {
  auto cfg = small();
  cfg.kappas = {0.8, 0.2};
  const auto one = run_sweep({cfg}, 1);
  const auto two = run_sweep({cfg}, 3);
  REQUIRE(one.size() == 4);
  CHECK(one[0].shift == 0);
  CHECK(one[0].kappa == 0.2);
  CHECK(one[1].kappa == 0.8);
  CHECK(one[3].shift == 1);
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].id == two[i].id);
    CHECK(one[i].fit.beta == two[i].fit.beta);
  }
  std::ostringstream os;
  write_summary_csv(os, one, sweep_header({cfg}));
  CHECK(os.str().find("experiment_id,parent_a,parent_b,shift,kappa,lambda,beta,residual,label\n") !=
        std::string::npos);

  auto broken = cfg;
  broken.t_max = 1e5;
  CHECK(kind_of([&] { run_sweep({cfg, broken}, 1); }) == ErrorKind::usage);
}

TEST_CASE("minimality prediction") {
  const auto tf = predict_minimality("tm", "fcc");
  CHECK(tf.applicable);
  REQUIRE(tf.verdict.has_value());
  CHECK_FALSE(tf.verdict->dependent());
  const auto tt = predict_minimality("tm", "tm");
  CHECK(to_string(*tt.verdict) == "dependent(1, 1)");
  CHECK_FALSE(predict_minimality("pf", "periodic:aab").applicable);
}

TEST_CASE("diagnose report") {
  DiagnoseOptions opt;
  opt.witness_window = 1 << 14;
  opt.complexity_window = 1 << 15;
  opt.n_values = {4, 8};
  const auto rep = diagnose("tm", "pd", opt);
  bool found = false;
  for (const auto& w : rep.witnesses) found = found || (w.r == "abba" && w.s == "baaa");
  CHECK(found);
  CHECK(rep.profile.size() == 6);
  CHECK(diagnose("tm", "fcc", opt).witnesses.empty());
}
