#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "designcount/bounds.hpp"
#include "designcount/cli.hpp"
#include "designcount/entropy_lab.hpp"
#include "designcount/enumeration.hpp"
#include "designcount/errors.hpp"
#include "designcount/io.hpp"

namespace py = pybind11;
using namespace designcount;

namespace {

py::object big(const BigInt& v) { return py::module_::import("builtins").attr("int")(v.str()); }

py::tuple ratio(const Rational& r) {
  return py::make_tuple(big(boost::multiprecision::numerator(r)), big(boost::multiprecision::denominator(r)));
}

py::dict count(const std::string& object, int n, bool labeled, int jobs, std::optional<std::uint64_t> node_budget) {
  SearchConfig config;
  config.jobs = jobs;
  config.node_budget = node_budget;
  CountResult r;
  {
    py::gil_scoped_release release;
    if (object == "sts")
      r = count_triple_systems(n, config);
    else if (object == "1f")
      r = count_one_factorizations(n, labeled, config);
    else if (object == "latin")
      r = count_latin_squares(n, config);
    else
      throw Error(ErrorCode::BadInput, "object must be sts, 1f or latin");
  }
  py::dict d;
  d["kind"] = object;
  d["n"] = n;
  d["labeled"] = object == "1f" ? labeled : true;
  d["count"] = big(r.count);
  d["complete"] = r.complete;
  d["nodes"] = r.nodes;
  return d;
}

py::list verify(const std::string& lemma, const std::string& variant, int n, const std::string& mode,
                std::uint64_t samples, std::uint64_t seed, int jobs) {
  VerifyOptions opt;
  if (mode != "exact" && mode != "mc") throw Error(ErrorCode::BadInput, "mode must be exact or mc");
  opt.mode = mode == "exact" ? Mode::Exact : Mode::MonteCarlo;
  opt.samples = samples;
  opt.seed = seed;
  opt.jobs = jobs;
  std::vector<LemmaVerdict> rows;
  {
    py::gil_scoped_release release;
    rows = verify_lemma(parse_lemma(lemma), parse_variant(variant), n, opt);
  }
  py::list out;
  for (const auto& r : rows) {
    py::dict d;
    d["lemma"] = r.lemma;
    d["variant"] = std::string(variant_name(r.variant));
    d["n"] = r.n;
    d["conditioning"] = r.conditioning;
    d["formula"] = ratio(r.formula);
    d["observed"] = r.observed ? py::object(ratio(*r.observed)) : py::none();
    d["estimate"] = r.estimate;
    d["se"] = r.se;
    d["pass"] = r.pass;
    d["samples"] = r.samples;
    d["alternative"] = r.alternative ? py::object(ratio(*r.alternative)) : py::none();
    d["note"] = r.note;
    out.append(d);
  }
  return out;
}

py::tuple cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = run_cli(args, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact design counts, counting bounds and reveal-order checks";
  m.attr("__version__") = std::string(kVersion);

  // Messages carry the error code as a prefix, e.g. "DuplicatePair: ...".
  py::register_exception<Error>(m, "DesignError", PyExc_ValueError);

  m.def("count", &count, py::arg("object"), py::arg("n"), py::arg("labeled") = false, py::arg("jobs") = 1,
        py::arg("node_budget") = py::none());

  m.def(
      "validate",
      [](const std::string& text) {
        const Design d = parse_design(text);
        return to_json(d).dump();
      },
      py::arg("text"), "Parse and validate one design; returns its canonical JSON.");

  m.def(
      "bounds",
      [](int n, const std::vector<std::string>& names) {
        KnownCounts known;
        for (const auto& name : names)
          if (name == "cameron-lower") known = cameron_base_counts(n);
        py::dict out;
        for (const auto& e : bound_report(n, names, known).entries) out[py::str(e.name)] = e.value.value;
        return out;
      },
      py::arg("n"), py::arg("names"), "Natural-log values of the named bounds.");

  m.def("verify", &verify, py::arg("lemma"), py::arg("variant"), py::arg("n"), py::arg("mode") = "exact",
        py::arg("samples") = 100000, py::arg("seed") = 1, py::arg("jobs") = 1);

  m.def(
      "entropy",
      [](const std::string& variant, int n, std::uint64_t samples, std::uint64_t seed, int jobs) {
        EntropyEstimate e;
        {
          py::gil_scoped_release release;
          e = entropy_upper_estimate(parse_variant(variant), n, samples, seed, jobs);
        }
        return py::module_::import("json").attr("loads")(e.to_json());
      },
      py::arg("variant"), py::arg("n"), py::arg("samples"), py::arg("seed") = 1, py::arg("jobs") = 1);

  m.def(
      "finite_sum",
      [](const std::string& variant, std::int64_t n) {
        const FiniteSum s = finite_sum_rate(parse_variant(variant), n);
        return py::make_tuple(s.sum, s.target);
      },
      py::arg("variant"), py::arg("n"));

  m.def("cli", &cli, py::arg("args"), "Run the command-line front end; returns (exit code, stdout, stderr).");
}
