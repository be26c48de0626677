#include "gracezo/experiment.hpp"

#include <algorithm>
#include <bit>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gracezo/errors.hpp"
#include "instance_text.hpp"

namespace gracezo {

namespace pt = boost::property_tree;
using detail::format_double;

namespace {

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += format_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

template <typename T>
std::vector<T> split_list(const std::string& text, const std::string& key) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) throw ParseError(0, "empty entry in '" + key + "'");
    const auto last = item.find_last_not_of(" \t");
    item = item.substr(first, last - first + 1);
    std::istringstream value(item);
    T parsed{};
    if (item.front() == '-' && std::is_unsigned_v<T>) throw ParseError(0, "negative entry in '" + key + "'");
    if (!(value >> parsed) || !value.eof()) throw ParseError(0, "bad entry '" + item + "' in '" + key + "'");
    out.push_back(parsed);
  }
  return out;
}

// The ini reader drops sections without keys, so headers are listed from the raw text.
std::vector<std::string> section_headers(const std::string& text) {
  std::vector<std::string> names;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    const auto last = line.find_last_not_of(" \t\r");
    if (first == std::string::npos || line[first] != '[' || line[last] != ']') continue;
    std::string name = line.substr(first + 1, last - first - 1);
    const auto a = name.find_first_not_of(" \t");
    const auto b = name.find_last_not_of(" \t");
    names.push_back(a == std::string::npos ? std::string() : name.substr(a, b - a + 1));
  }
  return names;
}

void reject_unknown_keys(const pt::ptree& section, const std::string& name, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : section) {
    if (!value.empty()) throw ParseError(0, "nested key in [" + name + "]");
    if (!allowed.count(key)) throw ParseError(0, "unknown key '" + key + "' in [" + name + "]");
  }
}

const std::set<std::string>& method_keys(Method method) {
  static const std::map<Method, std::set<std::string>> keys{
      {Method::grace, {"epsilon", "repeats", "group_size", "first_divisor", "stop_size"}},
      {Method::rs, {"mu"}},
      {Method::zo_signsgd, {"mu", "batch", "directions"}},
      {Method::gld, {"scales"}},
  };
  return keys.at(method);
}

double median_of(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

SweepRow aggregate(Method method, double eta, const std::vector<double>& values, std::size_t failures) {
  SweepRow row;
  row.method = method;
  row.eta = eta;
  row.runs = values.size();
  row.failures = failures;
  if (values.empty()) {
    row.mean = row.se = row.median = std::numeric_limits<double>::quiet_NaN();
    return row;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  row.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - row.mean) * (v - row.mean);
    row.se = std::sqrt(ss / static_cast<double>(values.size() - 1)) / std::sqrt(static_cast<double>(values.size()));
  }
  row.median = median_of(values);
  return row;
}

std::string csv_safe(std::string text) {
  for (char& c : text)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return text;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (instance_seeds.empty()) throw std::invalid_argument("experiment needs at least one instance seed");
  if (run_seeds.empty()) throw std::invalid_argument("experiment needs at least one run seed");
  if (methods.empty()) throw std::invalid_argument("experiment needs at least one method");
  if (eta_grid.empty()) throw std::invalid_argument("experiment needs a nonempty eta grid");
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
  for (double eta : eta_grid)
    if (!(eta > 0.0)) throw std::invalid_argument("eta values must be positive");
  if (benchmark.family == Family::attack && benchmark.graph_path.empty())
    throw std::invalid_argument("attack benchmark needs a graph path");
}

std::string serialize_experiment_spec(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "[experiment]\n";
  detail::write_instance_fields(out, spec.benchmark, "benchmark");
  out << "instance_seeds = " << join(spec.instance_seeds) << '\n'
      << "run_seeds = " << join(spec.run_seeds) << '\n'
      << "budget = " << spec.budget << '\n';
  if (spec.max_steps) out << "max_steps = " << *spec.max_steps << '\n';
  out << "eta_grid = " << join(spec.eta_grid) << '\n';
  if (!spec.output.empty()) out << "output = " << spec.output << '\n';
  for (const MethodSpec& m : spec.methods) {
    out << "\n[" << to_string(m.method) << "]\n";
    switch (m.method) {
      case Method::grace:
        out << "epsilon = " << format_double(m.epsilon) << '\n' << "repeats = " << m.repeats << '\n';
        if (m.group_size) out << "group_size = " << *m.group_size << '\n';
        if (m.first_divisor) out << "first_divisor = " << *m.first_divisor << '\n';
        out << "stop_size = " << m.stop_size << '\n';
        break;
      case Method::rs:
        out << "mu = " << format_double(m.mu) << '\n';
        break;
      case Method::zo_signsgd:
        out << "mu = " << format_double(m.mu) << '\n'
            << "batch = " << m.batch << '\n'
            << "directions = " << m.directions << '\n';
        break;
      case Method::gld:
        out << "scales = " << m.gld_scales << '\n';
        break;
    }
  }
  return out.str();
}

ExperimentSpec parse_experiment_spec(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.line(), e.message());
  }

  ExperimentSpec spec;
  const auto section = tree.get_child_optional("experiment");
  if (!section) throw ParseError(0, "missing [experiment] section");
  reject_unknown_keys(*section, "experiment",
                      {"benchmark", "d", "s", "lambda", "w", "graph", "u", "v", "hops", "coeff_lo", "coeff_hi",
                       "instance_seeds", "run_seeds", "budget", "max_steps", "eta_grid", "output"});
  spec.benchmark = detail::read_instance_fields(*section, "benchmark");
  try {
    spec.instance_seeds = split_list<std::uint64_t>(section->get<std::string>("instance_seeds"), "instance_seeds");
    spec.run_seeds = split_list<std::uint64_t>(section->get<std::string>("run_seeds"), "run_seeds");
    spec.budget = section->get<std::uint64_t>("budget");
    if (auto steps = section->get_optional<std::size_t>("max_steps")) spec.max_steps = *steps;
    spec.eta_grid = split_list<double>(section->get<std::string>("eta_grid"), "eta_grid");
    spec.output = section->get<std::string>("output", "");

    for (const auto& [name, body] : tree)
      if (!body.data().empty()) throw ParseError(0, "top-level key '" + name + "' outside any section");
    std::set<Method> seen;
    const pt::ptree empty;
    for (const std::string& name : section_headers(text)) {
      if (name == "experiment") continue;
      const auto found = tree.get_child_optional(pt::ptree::path_type(name, '\0'));
      const pt::ptree& body = found ? *found : empty;
      MethodSpec m;
      try {
        m.method = parse_method(name);
      } catch (const std::invalid_argument&) {
        throw ParseError(0, "unknown section [" + name + "]");
      }
      if (!seen.insert(m.method).second) throw ParseError(0, "duplicate section [" + name + "]");
      reject_unknown_keys(body, name, method_keys(m.method));
      m.epsilon = body.get<double>("epsilon", m.epsilon);
      m.repeats = body.get<std::size_t>("repeats", m.repeats);
      if (auto n = body.get_optional<std::size_t>("group_size")) m.group_size = *n;
      if (auto d1 = body.get_optional<std::uint64_t>("first_divisor")) m.first_divisor = *d1;
      m.stop_size = body.get<std::size_t>("stop_size", m.stop_size);
      m.mu = body.get<double>("mu", m.mu);
      m.batch = body.get<std::size_t>("batch", m.batch);
      m.directions = body.get<std::size_t>("directions", m.directions);
      m.gld_scales = body.get<std::size_t>("scales", m.gld_scales);
      spec.methods.push_back(m);
    }
  } catch (const pt::ptree_error& e) {
    throw ParseError(0, e.what());
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read experiment spec " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  ExperimentSpec spec = parse_experiment_spec(buf.str());
  const std::filesystem::path graph = spec.benchmark.graph_path;
  if (!graph.empty() && graph.is_relative())
    spec.benchmark.graph_path = (path.parent_path() / graph).lexically_normal().string();
  return spec;
}

GraceConfig grace_config_for(const MethodSpec& method, const InstanceSpec& benchmark, std::size_t d) {
  const std::uint64_t d1 = method.first_divisor.value_or(benchmark.family == Family::attack ? 10 : 20);
  GraceConfig cfg = GraceConfig::defaults(d, std::min(std::max<std::size_t>(benchmark.s, 1), d), method.epsilon, d1);
  cfg.repeats = method.repeats;
  if (method.group_size) cfg.group_size = *method.group_size;
  cfg.stop_size = method.stop_size;
  return cfg;
}

OptimizerConfig optimizer_config_for(const MethodSpec& method, const ExperimentSpec& spec, double eta) {
  OptimizerConfig opt;
  opt.method = method.method;
  opt.eta = eta;
  opt.epsilon = method.epsilon;
  opt.budget = spec.budget;
  opt.max_steps = spec.max_steps;
  opt.mu = method.mu;
  opt.batch = method.batch;
  opt.directions = method.directions;
  opt.gld_scales = method.gld_scales;
  return opt;
}

double RunResult::best_normalized() const {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (const TraceRow& row : trace.rows)
    if (std::isnan(best) || row.normalized < best) best = row.normalized;
  return best;
}

bool ExperimentResult::has_failures() const {
  return std::any_of(runs.begin(), runs.end(), [](const RunResult& r) { return !r.ok(); });
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  spec.validate();

  // Instances are built up front so that bad input fails before any run.
  std::vector<BenchmarkInstance> instances;
  for (std::uint64_t seed : spec.instance_seeds) {
    InstanceSpec is = spec.benchmark;
    is.seed = seed;
    is.stream = 0;
    BenchmarkInstance inst = instantiate(is);
    if (is.family == Family::attack) inst.objective = infinite_on_degenerate(inst.objective);
    instances.push_back(std::move(inst));
  }

  ExperimentResult result;
  result.benchmark = to_string(spec.benchmark.family);
  for (std::size_t mi = 0; mi < spec.methods.size(); ++mi)
    for (std::size_t ei = 0; ei < spec.eta_grid.size(); ++ei)
      for (std::size_t ii = 0; ii < spec.instance_seeds.size(); ++ii)
        for (std::size_t ri = 0; ri < spec.run_seeds.size(); ++ri) {
          RunResult r;
          r.method_index = mi;
          r.eta_index = ei;
          r.instance_seed = spec.instance_seeds[ii];
          r.run_seed = spec.run_seeds[ri];
          r.method = spec.methods[mi].method;
          r.eta = spec.eta_grid[ei];
          result.runs.push_back(std::move(r));
        }

  auto instance_of = [&](std::size_t run) -> const BenchmarkInstance& {
    return instances[(run / spec.run_seeds.size()) % spec.instance_seeds.size()];
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < result.runs.size(); i = next++) {
      RunResult& r = result.runs[i];
      const BenchmarkInstance& inst = instance_of(i);
      const MethodSpec& m = spec.methods[r.method_index];
      try {
        const std::size_t d = inst.objective.dimension();
        const GraceConfig grace = grace_config_for(m, spec.benchmark, d);
        const OptimizerConfig opt = optimizer_config_for(m, spec, r.eta);
        const RngStream rng = RngStream(r.run_seed, r.instance_seed).derive(r.method_index);
        r.trace = minimize(inst.objective, inst.initial_point, opt, grace, rng);
      } catch (const std::exception& e) {
        r.trace = {};
        r.error = e.what();
        if (r.error.empty()) r.error = "unknown error";
      }
    }
  };

  unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, result.runs.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
    std::optional<SweepRow> best;
    for (std::size_t ei = 0; ei < spec.eta_grid.size(); ++ei) {
      std::vector<double> values;
      std::size_t failures = 0;
      for (const RunResult& r : result.runs) {
        if (r.method_index != mi || r.eta_index != ei) continue;
        if (r.ok()) {
          values.push_back(r.best_normalized());
        } else {
          ++failures;
        }
      }
      SweepRow row = aggregate(spec.methods[mi].method, spec.eta_grid[ei], values, failures);
      result.sweep.push_back(row);
      if (!std::isnan(row.mean) && (!best || row.mean < best->mean)) best = row;
    }
    if (!best) best = result.sweep[mi * spec.eta_grid.size()];
    result.summary.push_back(*best);
  }
  return result;
}

std::string trace_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "benchmark,method,instance_seed,run_seed,eta,step,queries,f_value,normalized_objective,status\n";
  for (const RunResult& r : result.runs) {
    const std::string prefix = result.benchmark + ',' + to_string(r.method) + ',' + std::to_string(r.instance_seed) +
                               ',' + std::to_string(r.run_seed) + ',' + format_double(r.eta) + ',';
    if (!r.ok()) {
      out << prefix << "0,0,nan,nan,failed: " << csv_safe(r.error) << '\n';
      continue;
    }
    for (const TraceRow& row : r.trace.rows)
      out << prefix << row.step << ',' << row.queries << ',' << format_double(row.value) << ','
          << format_double(row.normalized) << ",ok\n";
  }
  return out.str();
}

std::string summary_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "benchmark,method,best_eta,runs,mean_best_normalized,se_best_normalized,median_best_normalized\n";
  for (const SweepRow& row : result.summary)
    out << result.benchmark << ',' << to_string(row.method) << ',' << format_double(row.eta) << ',' << row.runs << ','
        << format_double(row.mean) << ',' << format_double(row.se) << ',' << format_double(row.median) << '\n';
  return out.str();
}

std::string sweep_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "benchmark,method,eta,runs,failures,mean_best_normalized,se_best_normalized,median_best_normalized\n";
  for (const SweepRow& row : result.sweep)
    out << result.benchmark << ',' << to_string(row.method) << ',' << format_double(row.eta) << ',' << row.runs << ','
        << row.failures << ',' << format_double(row.mean) << ',' << format_double(row.se) << ','
        << format_double(row.median) << '\n';
  return out.str();
}

std::filesystem::path resolve_output_dir(const ExperimentSpec& spec) {
  const char* env = std::getenv("GRACEZO_OUTPUT_DIR");
  const std::filesystem::path base = env && *env ? std::filesystem::path(env) : std::filesystem::path();
  if (spec.output.empty()) return base.empty() ? std::filesystem::path("gracezo-output") : base;
  const std::filesystem::path out(spec.output);
  return out.is_absolute() || base.empty() ? out : base / out;
}

void write_experiment_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::pair<const char*, std::string> files[] = {
      {"trace.csv", trace_csv(result)}, {"summary.csv", summary_csv(result)}, {"sweep.csv", sweep_csv(result)}};
  for (const auto& [name, text] : files) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << text;
  }
}

bool VerifyReport::all_pass() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.pass; });
}

std::string VerifyReport::render() const {
  std::size_t width = 0;
  for (const VerifyRow& r : rows) width = std::max(width, r.name.size());
  std::ostringstream out;
  for (const VerifyRow& r : rows)
    out << (r.pass ? "PASS  " : "FAIL  ") << r.name << std::string(width - r.name.size() + 2, ' ') << r.detail
        << '\n';
  out << (all_pass() ? "all checks passed\n" : "some checks FAILED\n");
  return out.str();
}

TheoryParams reference_theory_params() {
  TheoryParams p;
  p.D = 18;
  p.delta = 0.5;
  p.phi = 0.64;
  p.theta = 0.08;
  return p;
}

VerifyReport verify_theory(const TheoryParams& p) {
  VerifyReport report;
  auto add = [&](std::string name, std::string detail, bool pass) {
    report.rows.push_back({std::move(name), std::move(detail), pass});
  };
  auto fmt = [](const char* pattern, auto... values) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, values...);
    return std::string(buf);
  };

  const C1Details c1 = compute_C1_details();
  add("C1", fmt("C1 = %.6f (expected 2.28955, < 2.29)", c1.value),
      c1.value >= 2.2886 && c1.value <= 2.2905 && c1.value < 2.29);
  add("C1 closed form",
      fmt("argmax %.6f vs closed form %.6f, values differ by %.2e", c1.argmax, c1.closed_form_argmax,
          std::abs(c1.value - c1.closed_form_value)),
      std::abs(c1.value - c1.closed_form_value) <= 1e-6 && std::abs(c1.closed_form_argmax - 0.648887) <= 1e-5);

  bool domain_ok = true;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    domain_ok = false;
    add("parameters", e.what(), false);
  }
  if (domain_ok) {
    const double c2 = compute_C2(p);
    add("C2", fmt("C2 = %.4f at D=%llu delta=%g phi=%g theta=%g (expected 134.88)", c2,
                  static_cast<unsigned long long>(p.D), p.delta, p.phi, p.theta),
        std::abs(c2 - 134.88) <= 0.1);
    add("C2 improvement ratio", fmt("579263 / C2 = %.1f (expected >= 4000)", 579263.0 / c2), 579263.0 / c2 >= 4000.0);

    const ScheduleConditions cond = verify_schedule_conditions(p);
    add("schedule condition 1", fmt("%.6f >= %.6f", cond.cond1_lhs, cond.cond1_rhs), cond.cond1);
    add("schedule condition 2", fmt("K = %.6f >= 1.5", cond.K), cond.cond2);
    add("schedule condition 3", fmt("A = %.6f > 1", cond.A), cond.cond3);

    if (cond.all()) {
      const std::vector<std::uint64_t> values = theoretical_schedule(p, 10).prefix(10);
      bool nondecreasing = true, bounded = true, progress = true;
      for (std::size_t r = 1; r <= values.size(); ++r) {
        const double dr = static_cast<double>(values[r - 1]);
        const double bound = theoretical_lower_bound(p, cond.A, r);
        if (dr < DivisionSchedule::kMaxDivisor && dr < bound) bounded = false;
        if (r >= 2) {
          if (values[r - 1] < values[r - 2]) nondecreasing = false;
          if (schedule_progress(p, dr, r) < schedule_progress(p, static_cast<double>(values[r - 2]), r - 1))
            progress = false;
        }
      }
      std::string listing;
      for (std::size_t i = 0; i < 5; ++i) listing += (i ? "," : "") + std::to_string(values[i]);
      add("theoretical schedule", "D_1..D_5 = " + listing + ", nondecreasing over 10 terms", nondecreasing);
      add("theoretical lower bound", "D_r >= A^{(3/2)^{r-1}} / ((1-theta)(1-phi) phi^2 delta) for r <= 10", bounded);
      add("theoretical progress", "D_r delta_{r,2} ln(3/delta_{r,1}) / ln(3/delta_{r+1,1}) nondecreasing", progress);
    } else {
      add("theoretical schedule", "infeasible: " + cond.first_failure(), false);
    }
  }

  const std::vector<std::uint64_t> practical = DivisionSchedule::practical(20).prefix(3);
  add("practical schedule", fmt("D_1..D_3 = %llu,%llu,%llu (expected 20,89,839)",
                                static_cast<unsigned long long>(practical[0]),
                                static_cast<unsigned long long>(practical[1]),
                                static_cast<unsigned long long>(practical[2])),
      practical == std::vector<std::uint64_t>{20, 89, 839});

  std::size_t egamma_cases = 0, egamma_failures = 0;
  for (std::size_t d = 10; d <= 200; ++d)
    for (std::size_t s = 1; s <= std::min<std::size_t>(d, 20); ++s)
      for (int g = 1; g <= 9; ++g) {
        ++egamma_cases;
        if (!check_egamma(d, s, g / 10.0).holds) ++egamma_failures;
      }
  add("e^{-gamma} bound", fmt("%zu of %zu cases hold", egamma_cases - egamma_failures, egamma_cases),
      egamma_failures == 0);

  std::size_t prob_cases = 0, prob_failures = 0, cond_cases = 0;
  for (std::size_t d = 1; d <= 6; ++d)
    for (std::size_t n = 1; n <= d; ++n)
      for (std::size_t k = 0; k < (d + n - 1) / n; ++k)
        for (unsigned mask = 1; mask < (1u << d); ++mask) {
          if (std::popcount(mask) > 3) continue;
          IndexSet H;
          for (Index i = 0; i < d; ++i)
            if (mask & (1u << i)) H.push_back(i);
          for (Index j : H) {
            const PartitionProbabilityCheck c = check_partition_probability(d, n, k, H, j);
            ++prob_cases;
            cond_cases += c.conditional_cases;
            if (!c.equal || !c.conditional_equal) ++prob_failures;
          }
        }
  add("partition probabilities",
      fmt("%zu of %zu exact (d <= 6, |H| <= 3), %zu conditional cases", prob_cases - prob_failures, prob_cases,
          cond_cases),
      prob_failures == 0);
  return report;
}

std::vector<ScalingRow> query_scaling_probe(const std::vector<std::size_t>& dims,
                                            const std::vector<std::size_t>& sparsities, std::size_t repeats,
                                            std::uint64_t seed) {
  if (dims.empty() || sparsities.empty()) throw std::invalid_argument("scaling probe needs nonempty lists");
  if (repeats == 0) throw std::invalid_argument("scaling probe needs repeats >= 1");
  std::vector<ScalingRow> rows;
  for (std::size_t d : dims)
    for (std::size_t s : sparsities) {
      if (s == 0 || s > d) continue;
      double total = 0.0;
      for (std::size_t r = 0; r < repeats; ++r) {
        RngStream instance_rng(seed, mix64(d) ^ (s << 20) ^ r);
        const BenchmarkInstance inst = make_planted_linear(d, s, 0.5, 1.5, instance_rng);
        RngStream rng = instance_rng.derive(1);
        const SparseGradient g =
            grace_estimate(inst.objective, inst.initial_point, GraceConfig::defaults(d, s, 1e-3), rng);
        total += static_cast<double>(g.queries_used);
      }
      ScalingRow row;
      row.d = d;
      row.s = s;
      row.mean_queries = total / static_cast<double>(repeats);
      const double ratio = static_cast<double>(d) / static_cast<double>(s);
      row.predictor = ratio > 1.0 ? static_cast<double>(s) * std::log2(std::log2(ratio))
                                  : std::numeric_limits<double>::quiet_NaN();
      rows.push_back(row);
    }
  return rows;
}

std::string scaling_csv(const std::vector<ScalingRow>& rows) {
  std::ostringstream out;
  out << "d,s,mean_queries,s_log2log2_d_over_s\n";
  for (const ScalingRow& r : rows)
    out << r.d << ',' << r.s << ',' << format_double(r.mean_queries) << ',' << format_double(r.predictor) << '\n';
  return out.str();
}

double scaling_correlation(const std::vector<ScalingRow>& rows) {
  std::vector<std::pair<double, double>> xy;
  for (const ScalingRow& r : rows)
    if (std::isfinite(r.predictor)) xy.emplace_back(r.predictor, r.mean_queries);
  if (xy.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0, my = 0;
  for (auto [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(xy.size());
  my /= static_cast<double>(xy.size());
  double sxy = 0, sxx = 0, syy = 0;
  for (auto [x, y] : xy) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace gracezo
