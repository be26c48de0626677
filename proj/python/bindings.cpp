#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gracezo/benchmarks.hpp"
#include "gracezo/errors.hpp"
#include "gracezo/estimator.hpp"
#include "gracezo/experiment.hpp"
#include "gracezo/graph.hpp"
#include "gracezo/optimizer.hpp"
#include "gracezo/theory.hpp"

namespace py = pybind11;
using namespace gracezo;

namespace {

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

py::array_t<double> to_array(std::span<const double> v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Objective from_callable(std::size_t dimension, py::function fn) {
  return Objective(dimension, [fn = std::move(fn)](std::span<const double> x) {
    py::gil_scoped_acquire gil;
    return fn(to_array(x)).cast<double>();
  });
}

py::dict trace_dict(const RunTrace& t) {
  py::list steps, queries, values, normalized;
  for (const TraceRow& r : t.rows) {
    steps.append(r.step);
    queries.append(r.queries);
    values.append(r.value);
    normalized.append(r.normalized);
  }
  py::dict d;
  d["step"] = steps;
  d["queries"] = queries;
  d["value"] = values;
  d["normalized"] = normalized;
  d["best_point"] = to_array(t.best_point);
  d["best_value"] = t.best_value;
  d["best_step"] = t.best_step;
  d["budget_exhausted"] = t.budget_exhausted;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sparse-gradient zeroth-order optimization core";

  py::register_exception<BudgetExhausted>(m, "BudgetExhausted", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InfeasibleParameters>(m, "InfeasibleParameters", PyExc_ValueError);
  py::register_exception<DegenerateDegree>(m, "DegenerateDegree", PyExc_ArithmeticError);

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream") = 0)
      .def_property_readonly("seed", &RngStream::seed)
      .def_property_readonly("stream", &RngStream::stream)
      .def("next_u64", &RngStream::next_u64)
      .def("uniform_below", &RngStream::uniform_below)
      .def("uniform01", &RngStream::uniform01)
      .def("normal", &RngStream::normal)
      .def("derive", &RngStream::derive);

  m.def("random_permutation", [](std::size_t n, RngStream& rng) { return random_permutation(n, rng).images; },
        py::arg("n"), py::arg("rng"), "0-based images of a uniform permutation of range(n)");
  m.def(
      "partition_groups",
      [](std::size_t d, std::size_t n, std::vector<Index> omega) {
        return partition_groups(d, n, Permutation{std::move(omega)});
      },
      py::arg("d"), py::arg("n"), py::arg("omega"));
  m.def(
      "dependent_partition",
      [](std::vector<Index> members, std::uint64_t divisor, RngStream& rng) {
        const DependentPartition p = dependent_partition(members, divisor, rng);
        py::dict d;
        d["block_size"] = p.block_size;
        d["label_count"] = p.label_count;
        d["labels"] = std::vector<std::uint32_t>(p.labels.begin(), p.labels.end());
        d["signs"] = std::vector<int>(p.signs.begin(), p.signs.end());
        return d;
      },
      py::arg("members"), py::arg("divisor"), py::arg("rng"));

  py::class_<DivisionSchedule>(m, "DivisionSchedule")
      .def_static("practical", &DivisionSchedule::practical, py::arg("first"))
      .def_static("from_values", [](std::vector<std::uint64_t> v) { return DivisionSchedule::from_values(std::move(v)); })
      .def("at", &DivisionSchedule::at)
      .def("prefix", &DivisionSchedule::prefix);

  py::class_<GraceConfig>(m, "GraceConfig")
      .def(py::init<>())
      .def_static("defaults", &GraceConfig::defaults, py::arg("d"), py::arg("s"), py::arg("epsilon"),
                  py::arg("first_divisor") = 20)
      .def_readwrite("sparsity", &GraceConfig::sparsity)
      .def_readwrite("epsilon", &GraceConfig::epsilon)
      .def_readwrite("repeats", &GraceConfig::repeats)
      .def_readwrite("group_size", &GraceConfig::group_size)
      .def_readwrite("schedule", &GraceConfig::schedule)
      .def_readwrite("stop_size", &GraceConfig::stop_size)
      .def_readwrite("max_shrink_iterations", &GraceConfig::max_shrink_iterations);

  py::class_<Objective>(m, "Objective")
      .def(py::init(&from_callable), py::arg("dimension"), py::arg("fn"))
      .def_property_readonly("dimension", &Objective::dimension)
      .def("__call__", [](const Objective& f, const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
        return f(to_vector(x));
      });

  py::class_<QueryLedger, std::shared_ptr<QueryLedger>>(m, "QueryLedger")
      .def_readonly("count", &QueryLedger::count)
      .def_readonly("cap", &QueryLedger::cap);
  m.def(
      "with_ledger",
      [](Objective f, std::optional<std::uint64_t> cap) {
        CountedObjective c = with_ledger(std::move(f), cap);
        return py::make_tuple(c.objective, c.ledger);
      },
      py::arg("f"), py::arg("cap") = py::none());

  py::class_<SparseGradient>(m, "SparseGradient")
      .def_readonly("dimension", &SparseGradient::dimension)
      .def_readonly("queries_used", &SparseGradient::queries_used)
      .def_readonly("value_at_point", &SparseGradient::value_at_point)
      .def_property_readonly("entries",
                             [](const SparseGradient& g) {
                               py::dict d;
                               for (const auto& [i, v] : g.entries) d[py::int_(i)] = v;
                               return d;
                             })
      .def("support", &SparseGradient::support)
      .def("dense", [](const SparseGradient& g) { return to_array(g.dense()); })
      .def("__getitem__", &SparseGradient::operator[]);

  m.def(
      "grace_estimate",
      [](const Objective& f, const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
         const GraceConfig& cfg, RngStream& rng) { return grace_estimate(f, to_vector(x), cfg, rng); },
      py::arg("f"), py::arg("x"), py::arg("config"), py::arg("rng"));
  m.def(
      "finite_difference",
      [](const Objective& f, const py::array_t<double, py::array::c_style | py::array::forcecast>& x, double fx,
         Index j, double eps) { return finite_difference(f, to_vector(x), fx, j, eps); },
      py::arg("f"), py::arg("x"), py::arg("fx"), py::arg("j"), py::arg("epsilon"));

  py::class_<BenchmarkInstance>(m, "BenchmarkInstance")
      .def_readonly("objective", &BenchmarkInstance::objective)
      .def_property_readonly("initial_point", [](const BenchmarkInstance& b) { return to_array(b.initial_point); })
      .def_readonly("support", &BenchmarkInstance::support)
      .def_property_readonly("spec_text", [](const BenchmarkInstance& b) { return serialize_instance_spec(b.spec); })
      .def("gradient", [](const BenchmarkInstance& b, const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
        if (!b.gradient) throw std::invalid_argument("this family has no analytic gradient");
        return to_array(b.gradient(to_vector(x)));
      });
  m.def("instantiate", [](const std::string& text) { return instantiate(parse_instance_spec(text)); },
        py::arg("spec_text"), "Build an instance from its 'key = value' text form");
  m.def(
      "make_sparse_linear",
      [](std::size_t d, const std::map<Index, double>& coeffs) { return make_sparse_linear(d, coeffs); },
      py::arg("d"), py::arg("coeffs"));

  m.def(
      "minimize",
      [](const Objective& f, const py::array_t<double, py::array::c_style | py::array::forcecast>& x1,
         const std::string& method, double eta, double epsilon, std::optional<std::uint64_t> budget,
         std::optional<std::size_t> max_steps, std::optional<GraceConfig> grace, std::uint64_t seed) {
        OptimizerConfig opt;
        opt.method = parse_method(method);
        opt.eta = eta;
        opt.epsilon = epsilon;
        opt.budget = budget;
        opt.max_steps = max_steps;
        const std::vector<double> start = to_vector(x1);
        const GraceConfig cfg = grace ? *grace : GraceConfig::defaults(f.dimension(), 1, epsilon);
        return trace_dict(minimize(f, start, opt, cfg, RngStream(seed)));
      },
      py::arg("f"), py::arg("x1"), py::arg("method") = "grace", py::arg("eta") = 0.1, py::arg("epsilon") = 1e-4,
      py::arg("budget") = py::none(), py::arg("max_steps") = py::none(), py::arg("grace") = py::none(),
      py::arg("seed") = 0);

  m.def(
      "run_experiment",
      [](const std::string& spec_text, unsigned jobs) {
        const ExperimentSpec spec = parse_experiment_spec(spec_text);
        ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = run_experiment(spec, {jobs});
        }
        py::dict d;
        d["trace_csv"] = trace_csv(result);
        d["summary_csv"] = summary_csv(result);
        d["sweep_csv"] = sweep_csv(result);
        d["failures"] = result.has_failures();
        return d;
      },
      py::arg("spec_text"), py::arg("jobs") = 1);
  m.def("normalize_experiment_spec", [](const std::string& text) {
    return serialize_experiment_spec(parse_experiment_spec(text));
  });

  m.def("compute_C1", &compute_C1);
  py::class_<TheoryParams>(m, "TheoryParams")
      .def(py::init(&reference_theory_params))
      .def_readwrite("D", &TheoryParams::D)
      .def_readwrite("delta", &TheoryParams::delta)
      .def_readwrite("phi", &TheoryParams::phi)
      .def_readwrite("theta", &TheoryParams::theta)
      .def_readwrite("rho", &TheoryParams::rho)
      .def_readwrite("alpha", &TheoryParams::alpha);
  m.def("compute_C2", &compute_C2, py::arg("params"));
  m.def("theoretical_schedule",
        [](const TheoryParams& p, std::size_t count) { return theoretical_schedule(p, count).prefix(count); });
  m.def("verify_schedule_conditions", [](const TheoryParams& p) {
    const ScheduleConditions c = verify_schedule_conditions(p);
    py::dict d;
    d["K"] = c.K;
    d["A"] = c.A;
    d["cond1"] = c.cond1;
    d["cond2"] = c.cond2;
    d["cond3"] = c.cond3;
    return d;
  });
  m.def("verify_theory", [](const TheoryParams& p) {
    const VerifyReport r = verify_theory(p);
    return py::make_tuple(r.all_pass(), r.render());
  }, py::arg("params") = reference_theory_params());
  m.def("falling_factorial", [](long long n, std::size_t k) { return py::int_(py::str(falling_factorial(n, k).str())); });
  m.def("check_egamma", [](std::size_t d, std::size_t s, double g) { return check_egamma(d, s, g).holds; });
  m.def("lambda1", &lambda1, py::arg("n"), py::arg("d"), py::arg("L1"));
  m.def("lambda2", &lambda2, py::arg("d"), py::arg("L0"), py::arg("L1"));
  m.def("query_scaling_probe",
        [](std::vector<std::size_t> dims, std::vector<std::size_t> ss, std::size_t repeats, std::uint64_t seed) {
          py::list out;
          for (const ScalingRow& r : query_scaling_probe(dims, ss, repeats, seed))
            out.append(py::make_tuple(r.d, r.s, r.mean_queries, r.predictor));
          return out;
        },
        py::arg("dims"), py::arg("sparsities"), py::arg("repeats"), py::arg("seed") = 1);
}
