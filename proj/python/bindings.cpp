#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hqc/analysis.hpp"
#include "hqc/dynamics.hpp"
#include "hqc/error.hpp"
#include "hqc/experiment.hpp"
#include "hqc/hybrid.hpp"
#include "hqc/substitution.hpp"
#include "hqc/symbolic.hpp"

namespace py = pybind11;
using namespace hqc;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-d array");
  return {a.data(), a.data() + a.size()};
}

Array to_array(const std::vector<double>& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict series_dict(const MomentSeries& s) {
  std::vector<double> t, m2, norm;
  for (const auto& x : s.samples) {
    t.push_back(x.t);
    m2.push_back(x.m2);
    norm.push_back(x.norm);
  }
  py::dict d;
  d["t"] = to_array(t);
  d["m2"] = to_array(m2);
  d["norm"] = to_array(norm);
  return d;
}

MomentSeries series_from(const Array& t, const Array& m2) {
  const auto tv = to_vector(t), mv = to_vector(m2);
  if (tv.size() != mv.size()) throw py::value_error("t and m2 differ in length");
  MomentSeries s;
  for (std::size_t i = 0; i < tv.size(); ++i) s.samples.push_back({tv[i], mv[i], 1.0});
  return s;
}

py::dict fit_dict(const TransportFit& f) {
  py::dict d;
  d["beta"] = f.beta;
  d["log_c"] = f.log_c;
  d["residual"] = f.residual;
  d["t_min"] = f.t_min;
  d["t_max"] = f.t_max;
  d["n_points"] = f.n_points;
  d["excluded"] = f.excluded;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hybrid quasicrystal potentials, transport and symbolic diagnostics";

  static py::exception<Error> exc(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = exc;
      py::object inst = err(std::string(e.what()));
      inst.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(exc.ptr(), inst.ptr());
    }
  });

  // substitutions
  m.def("gen", [](const std::string& spec, std::size_t n) { return make_source(spec).prefix(n); }, py::arg("source"),
        py::arg("length"), "First `length` letters of a source spec (fcc, tm, pd, pf, rs, periodic:<p>, file:<path>).");
  m.def(
      "iterate",
      [](const std::string& spec, const std::string& seed, unsigned k) {
        const auto sub = substitution_for(spec);
        if (!sub) fail(ErrorKind::usage, "`" + spec + "` is not a substitution");
        return hqc::iterate(*sub, seed, k);
      },
      py::arg("substitution"), py::arg("seed"), py::arg("k"));
  m.def(
      "matrix",
      [](const std::string& spec) {
        const auto sub = substitution_for(spec);
        if (!sub) fail(ErrorKind::usage, "`" + spec + "` is not a substitution");
        return substitution_matrix(*sub).rows();
      },
      py::arg("substitution"), "Rows of M with M[w][w'] = number of w' in the image of w.");
  m.def(
      "spectral_info",
      [](const std::string& spec) {
        const auto sub = substitution_for(spec);
        if (!sub) fail(ErrorKind::usage, "`" + spec + "` is not a substitution");
        const auto info = hqc::spectral_info(substitution_matrix(*sub));
        const auto prim = primitivity_power(*sub);
        py::dict d;
        d["dominant"] = info.dominant;
        d["others"] = info.others;
        d["pisot"] = std::string(to_string(info.pisot));
        d["primitivity_power"] = prim ? py::cast(*prim) : py::none();
        return d;
      },
      py::arg("substitution"));

  // symbolic
  m.def("find_all", [](const std::string& text, const std::string& w) { return hqc::find_all(text, w); });
  m.def("complexity", [](const std::string& text, std::size_t n) { return factor_count(text, n); }, py::arg("text"),
        py::arg("n"));
  m.def(
      "boshernitzan",
      [](const std::string& text, std::size_t n) {
        const auto r = boshernitzan_row(text, n);
        py::dict d;
        d["n"] = r.n;
        d["p_n"] = r.p_n;
        d["eta_hat"] = r.eta_hat;
        d["score"] = r.score;
        return d;
      },
      py::arg("text"), py::arg("n"));
  m.def(
      "witness_search",
      [](const std::string& a, const std::string& b, std::size_t max_len, std::size_t window, std::int64_t radius) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& w : hqc::witness_search(make_source(a), make_source(b), max_len, window, radius))
          out.emplace_back(w.r, w.s);
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("max_word_len") = 8, py::arg("window_len") = 1 << 16,
      py::arg("shift_radius") = 0);
  m.def(
      "multiplicative_independence",
      [](double theta, double vartheta, unsigned bound, double tol) {
        const auto v = hqc::multiplicative_independence(theta, vartheta, bound, tol);
        py::dict d;
        d["dependent"] = v.dependent();
        d["verdict"] = to_string(v);
        d["l"] = v.l;
        d["k"] = v.k;
        return d;
      },
      py::arg("theta"), py::arg("vartheta"), py::arg("bound") = 64, py::arg("tol") = 1e-9);

  // hybrid potentials
  m.def(
      "hybrid_potential",
      [](const std::string& a, const std::string& b, double kappa, std::size_t shift, std::size_t n) {
        const auto v = letters_to_values(make_source(a).prefix(n), default_value_map());
        const auto u = letters_to_values(make_source(b).prefix(n + shift), default_value_map());
        return to_array(hybridize(v, u, kappa, shift).values);
      },
      py::arg("a"), py::arg("b"), py::arg("kappa"), py::arg("shift"), py::arg("n"),
      "kappa * v_n + (1 - kappa) * u_{n+shift} with letter values a = -1, b = +1.");

  // dynamics
  m.def(
      "evolve",
      [](const Array& potential, double lambda, double t_max, std::optional<double> dt, const std::string& scheme,
         unsigned per_decade) {
        const auto model = LatticeModel::centered(to_vector(potential), lambda);
        EvolveOptions opt;
        opt.scheme = parse_integrator(scheme);
        opt.dt = dt ? *dt : auto_dt(opt.scheme, model);
        opt.steps = static_cast<std::size_t>(std::llround(t_max / opt.dt));
        opt.sample_steps = geometric_sample_steps(opt.dt, std::min(1.0, t_max / 10), t_max, per_decade);
        EvolveResult r;
        {
          py::gil_scoped_release release;
          r = hqc::evolve(model, WaveState::delta(model.size(), model.n0), opt);
        }
        return series_dict(r.series);
      },
      py::arg("potential"), py::arg("lambda_") = 1.0, py::arg("t_max") = 100.0, py::arg("dt") = py::none(),
      py::arg("scheme") = "split6", py::arg("per_decade") = 20,
      "Evolve a delta at the central site; returns dict of t, m2, norm arrays.");
  m.def(
      "fit_beta",
      [](const Array& t, const Array& m2, std::optional<double> t_min, std::optional<double> t_max) {
        const auto s = series_from(t, m2);
        if (!t_min && !t_max) return fit_dict(fit_last_decade(s));
        const double hi = t_max.value_or(s.samples.empty() ? 0.0 : s.samples.back().t);
        return fit_dict(hqc::fit_beta(s, t_min.value_or(hi / 10), hi));
      },
      py::arg("t"), py::arg("m2"), py::arg("t_min") = py::none(), py::arg("t_max") = py::none());
  m.def(
      "classify",
      [](const Array& t, const Array& m2) {
        const auto s = series_from(t, m2);
        const auto f = fit_last_decade(s);
        const auto l = hqc::classify(s, f);
        return py::make_tuple(std::string(to_string(l.regime)), f.beta, l.plateau_ratio);
      },
      py::arg("t"), py::arg("m2"), "(label, beta, plateau_ratio) from a last-decade fit.");
}
