#include "gracezo/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gracezo/errors.hpp"
#include "instance_text.hpp"

namespace gracezo {

std::string to_string(Family family) {
  switch (family) {
    case Family::distance: return "distance";
    case Family::magnitude: return "magnitude";
    case Family::attack: return "attack";
    case Family::planted_linear: return "planted_linear";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  if (name == "distance") return Family::distance;
  if (name == "magnitude") return Family::magnitude;
  if (name == "attack") return Family::attack;
  if (name == "planted_linear") return Family::planted_linear;
  throw std::invalid_argument("unknown benchmark family '" + name + "'");
}

namespace {

using detail::format_double;

IndexSet random_support(std::size_t d, std::size_t s, RngStream& rng) {
  const Permutation perm = random_permutation(d, rng);
  IndexSet support;
  support.reserve(s);
  for (Index i = 0; i < d; ++i)
    if (perm[i] < s) support.push_back(i);
  return support;
}

void check_sparsity(std::size_t d, std::size_t s) {
  if (d == 0) throw std::invalid_argument("dimension must be positive");
  if (s == 0 || s > d) throw std::invalid_argument("sparsity must satisfy 1 <= s <= d");
}

struct DistanceFunction {
  std::vector<double> center;
  std::vector<double> weights;

  double operator()(std::span<const double> x) const {
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double diff = x[i] - center[i];
      total += weights[i] * diff * diff;
    }
    return total;
  }
};

struct MagnitudeFunction {
  std::size_t s;
  double lambda;

  double operator()(std::span<const double> x) const {
    // tanh(x^2) is monotone in |x|, so the top-s magnitudes are the top-s
    // tanh values. Summing in sorted order makes the value exactly
    // invariant under coordinate permutations.
    std::vector<double> t(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) t[i] = std::tanh(x[i] * x[i]);
    std::sort(t.begin(), t.end(), std::greater<>());
    double head = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < s; ++i) head += t[i];
    for (std::size_t i = s; i < t.size(); ++i) tail += t[i];
    return lambda * tail - head + static_cast<double>(s);
  }
};

struct AttackFunction {
  std::size_t n;
  std::vector<double> adjacency;  // 0/1 as doubles
  std::size_t u, v, hops;
  double lambda;

  double operator()(std::span<const double> x) const {
    std::vector<double> perturbed(n * n);
    std::vector<double> inv_sqrt_degree(n);
    double frob = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double degree = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double a = adjacency[i * n + j];
        const double mag = std::abs(x[i * n + j]);
        frob += x[i * n + j] * x[i * n + j];
        const double entry = std::max(a * (1.0 - mag) + (1.0 - a) * mag, 0.0);
        perturbed[i * n + j] = entry;
        degree += entry;
      }
      if (degree == 0.0) throw DegenerateDegree(i);
      inv_sqrt_degree[i] = 1.0 / std::sqrt(degree);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) perturbed[i * n + j] *= inv_sqrt_degree[i] * inv_sqrt_degree[j];

    // Row u of successive powers: row <- row * M.
    std::vector<double> row(perturbed.begin() + static_cast<std::ptrdiff_t>(u * n),
                            perturbed.begin() + static_cast<std::ptrdiff_t>((u + 1) * n));
    std::vector<double> next(n);
    double connectivity = row[v];
    for (std::size_t w = 2; w <= hops; ++w) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double ri = row[i];
        if (ri == 0.0) continue;
        const double* mrow = &perturbed[i * n];
        for (std::size_t j = 0; j < n; ++j) next[j] += ri * mrow[j];
      }
      row.swap(next);
      connectivity += row[v];
    }
    return connectivity + lambda * frob;
  }
};

struct SparseLinearFunction {
  std::vector<std::pair<Index, double>> terms;

  double operator()(std::span<const double> x) const {
    double total = 0.0;
    for (const auto& [j, c] : terms) total += c * x[j];
    return total;
  }
};

}  // namespace

BenchmarkInstance make_distance(std::size_t d, std::size_t s, RngStream& rng) {
  check_sparsity(d, s);
  BenchmarkInstance inst;
  inst.spec.family = Family::distance;
  inst.spec.d = d;
  inst.spec.s = s;
  inst.spec.seed = rng.seed();
  inst.spec.stream = rng.stream();
  inst.support = random_support(d, s, rng);

  auto fn = std::make_shared<DistanceFunction>();
  fn->center.assign(d, 0.0);
  for (Index i : inst.support) fn->center[i] = rng.uniform01();
  fn->weights.resize(d);
  for (auto& w : fn->weights) w = rng.uniform01();

  inst.objective = Objective(d, [fn](std::span<const double> x) { return (*fn)(x); });
  inst.gradient = [fn](std::span<const double> x) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * fn->weights[i] * (x[i] - fn->center[i]);
    return g;
  };
  inst.initial_point.assign(d, 0.0);
  return inst;
}

BenchmarkInstance make_magnitude(std::size_t d, std::size_t s, double lambda, double w, RngStream& rng) {
  check_sparsity(d, s);
  if (!(lambda > 0.0)) throw std::invalid_argument("magnitude: lambda must be positive");
  if (!(w > 0.0)) throw std::invalid_argument("magnitude: w must be positive");
  BenchmarkInstance inst;
  inst.spec.family = Family::magnitude;
  inst.spec.d = d;
  inst.spec.s = s;
  inst.spec.seed = rng.seed();
  inst.spec.stream = rng.stream();
  inst.spec.lambda = lambda;
  inst.spec.w = w;
  inst.support = random_support(d, s, rng);
  inst.initial_point.assign(d, 0.0);
  for (Index i : inst.support) inst.initial_point[i] = w * rng.sign();
  inst.objective = Objective(d, MagnitudeFunction{s, lambda});
  return inst;
}

BenchmarkInstance make_attack(const Graph& graph, std::size_t u, std::size_t v, std::size_t hops,
                              double lambda) {
  const std::size_t n = graph.vertex_count();
  if (n < 2) throw std::invalid_argument("attack: graph needs at least two vertices");
  if (u >= n || v >= n) throw std::invalid_argument("attack: vertex out of range");
  if (u == v) throw std::invalid_argument("attack: u and v must differ");
  if (hops == 0) throw std::invalid_argument("attack: hop count must be >= 1");
  if (lambda < 0.0) throw std::invalid_argument("attack: lambda must be non-negative");
  AttackFunction fn{n, {}, u, v, hops, lambda};
  fn.adjacency.assign(graph.adjacency().begin(), graph.adjacency().end());

  BenchmarkInstance inst;
  inst.spec.family = Family::attack;
  inst.spec.d = n * n;
  inst.spec.s = std::min<std::size_t>(30, n * n);
  inst.spec.u = u;
  inst.spec.v = v;
  inst.spec.hops = hops;
  inst.spec.lambda = lambda;
  inst.objective = Objective(n * n, std::move(fn));
  inst.initial_point.assign(n * n, 0.0);
  return inst;
}

BenchmarkInstance make_sparse_linear(std::size_t d, const std::map<Index, double>& coeffs) {
  if (d == 0) throw std::invalid_argument("dimension must be positive");
  SparseLinearFunction fn;
  BenchmarkInstance inst;
  for (const auto& [j, c] : coeffs) {
    if (j >= d) throw std::invalid_argument("sparse linear: index " + std::to_string(j) + " out of range");
    fn.terms.emplace_back(j, c);
    inst.support.push_back(j);
  }
  inst.spec.family = Family::planted_linear;
  inst.spec.d = d;
  inst.spec.s = std::max<std::size_t>(1, coeffs.size());
  inst.gradient = [d, terms = fn.terms](std::span<const double>) {
    std::vector<double> g(d, 0.0);
    for (const auto& [j, c] : terms) g[j] = c;
    return g;
  };
  inst.objective = Objective(d, std::move(fn));
  inst.initial_point.assign(d, 0.0);
  return inst;
}

BenchmarkInstance make_planted_linear(std::size_t d, std::size_t s, double lo, double hi, RngStream& rng) {
  check_sparsity(d, s);
  const IndexSet support = random_support(d, s, rng);
  std::map<Index, double> coeffs;
  for (Index j : support) coeffs[j] = rng.uniform(lo, hi);
  BenchmarkInstance inst = make_sparse_linear(d, coeffs);
  inst.spec.s = s;
  inst.spec.seed = rng.seed();
  inst.spec.stream = rng.stream();
  inst.spec.coeff_lo = lo;
  inst.spec.coeff_hi = hi;
  return inst;
}

BenchmarkInstance instantiate(const InstanceSpec& spec) {
  RngStream rng(spec.seed, spec.stream);
  switch (spec.family) {
    case Family::distance: return make_distance(spec.d, spec.s, rng);
    case Family::magnitude: return make_magnitude(spec.d, spec.s, spec.lambda.value_or(0.1), spec.w, rng);
    case Family::planted_linear:
      return make_planted_linear(spec.d, spec.s, spec.coeff_lo, spec.coeff_hi, rng);
    case Family::attack: {
      const Graph graph = load_graph_file(spec.graph_path);
      const double n = static_cast<double>(graph.vertex_count());
      BenchmarkInstance inst = make_attack(graph, spec.u, spec.v, spec.hops, spec.lambda.value_or(100.0 / (n * n)));
      inst.spec.s = spec.s;
      inst.spec.seed = spec.seed;
      inst.spec.stream = spec.stream;
      inst.spec.graph_path = spec.graph_path;
      return inst;
    }
  }
  throw std::invalid_argument("unknown family");
}

Objective infinite_on_degenerate(Objective f) {
  const std::size_t dim = f.dimension();
  return Objective(dim, [inner = std::move(f)](std::span<const double> x) {
    try {
      return inner(x);
    } catch (const DegenerateDegree&) {
      return std::numeric_limits<double>::infinity();
    }
  });
}

namespace detail {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_instance_fields(std::ostream& out, const InstanceSpec& spec, const char* family_key) {
  out << family_key << " = " << to_string(spec.family) << '\n'
      << "d = " << spec.d << '\n'
      << "s = " << spec.s << '\n';
  if (spec.lambda) out << "lambda = " << format_double(*spec.lambda) << '\n';
  out << "w = " << format_double(spec.w) << '\n';
  if (!spec.graph_path.empty()) out << "graph = " << spec.graph_path << '\n';
  out << "u = " << spec.u + 1 << '\n'
      << "v = " << spec.v + 1 << '\n'
      << "hops = " << spec.hops << '\n'
      << "coeff_lo = " << format_double(spec.coeff_lo) << '\n'
      << "coeff_hi = " << format_double(spec.coeff_hi) << '\n';
}

InstanceSpec read_instance_fields(const boost::property_tree::ptree& tree, const char* family_key) {
  namespace pt = boost::property_tree;
  InstanceSpec spec;
  try {
    spec.family = parse_family(tree.get<std::string>(family_key));
    spec.d = tree.get<std::size_t>("d", 0);
    spec.s = tree.get<std::size_t>("s", 1);
    if (auto lambda = tree.get_optional<double>("lambda")) spec.lambda = *lambda;
    spec.w = tree.get<double>("w", 0.2);
    spec.graph_path = tree.get<std::string>("graph", "");
    const auto u = tree.get<std::size_t>("u", 1);
    const auto v = tree.get<std::size_t>("v", 2);
    if (u == 0 || v == 0) throw ParseError(0, "vertices u and v are 1-based");
    spec.u = u - 1;
    spec.v = v - 1;
    spec.hops = tree.get<std::size_t>("hops", 4);
    spec.coeff_lo = tree.get<double>("coeff_lo", 0.5);
    spec.coeff_hi = tree.get<double>("coeff_hi", 1.5);
  } catch (const pt::ptree_error& e) {
    throw ParseError(0, e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
  return spec;
}

}  // namespace detail

std::string serialize_instance_spec(const InstanceSpec& spec) {
  std::ostringstream out;
  detail::write_instance_fields(out, spec, "family");
  out << "seed = " << spec.seed << '\n' << "stream = " << spec.stream << '\n';
  return out.str();
}

InstanceSpec parse_instance_spec(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.line(), e.message());
  }
  InstanceSpec spec = detail::read_instance_fields(tree, "family");
  try {
    spec.seed = tree.get<std::uint64_t>("seed", 0);
    spec.stream = tree.get<std::uint64_t>("stream", 0);
  } catch (const pt::ptree_error& e) {
    throw ParseError(0, e.what());
  }
  return spec;
}

}  // namespace gracezo
