#include "gracezo/graph.hpp"

#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "gracezo/errors.hpp"

namespace gracezo {

Graph::Graph(std::size_t n) : n_(n), adjacency_(n * n, 0) {
  if (n == 0) throw std::invalid_argument("graph needs at least one vertex");
}

void Graph::add_edge(std::size_t a, std::size_t b) {
  if (a >= n_ || b >= n_) throw std::out_of_range("edge endpoint out of range");
  if (a == b) throw std::invalid_argument("self-loops are not allowed");
  if (!adjacency_[a * n_ + b]) ++edges_;
  adjacency_[a * n_ + b] = 1;
  adjacency_[b * n_ + a] = 1;
}

std::size_t Graph::degree(std::size_t v) const {
  const auto row = adjacency_.begin() + static_cast<std::ptrdiff_t>(v * n_);
  return static_cast<std::size_t>(std::accumulate(row, row + static_cast<std::ptrdiff_t>(n_), 0));
}

std::size_t Graph::component_count() const {
  std::vector<std::size_t> parent(n_);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::size_t components = n_;
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = a + 1; b < n_; ++b)
      if (has_edge(a, b)) {
        const auto ra = find(a), rb = find(b);
        if (ra != rb) {
          parent[ra] = rb;
          --components;
        }
      }
  return components;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::size_t parse_count(std::string_view field, std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError(line, "expected a non-negative integer, got '" + std::string(field) + "'");
  return value;
}

}  // namespace

Graph load_graph(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  std::size_t expected_edges = 0, seen_edges = 0;
  Graph graph;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const auto line = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty() || fields.front().front() == '#') continue;
    if (fields.size() != 2) throw ParseError(line_no, "expected two integers");
    const auto a = parse_count(fields[0], line_no);
    const auto b = parse_count(fields[1], line_no);
    if (!have_header) {
      if (a == 0) throw ParseError(line_no, "vertex count must be positive");
      graph = Graph(a);
      expected_edges = b;
      have_header = true;
      continue;
    }
    if (seen_edges == expected_edges) throw ParseError(line_no, "more edge lines than declared");
    if (a < 1 || a > graph.vertex_count() || b < 1 || b > graph.vertex_count())
      throw ParseError(line_no, "vertex out of range 1.." + std::to_string(graph.vertex_count()));
    if (a == b) throw ParseError(line_no, "self-loop on vertex " + std::to_string(a));
    graph.add_edge(a - 1, b - 1);
    ++seen_edges;
  }
  if (!have_header) throw ParseError(line_no, "missing 'n m' header");
  if (seen_edges != expected_edges)
    throw ParseError(line_no, "declared " + std::to_string(expected_edges) + " edges, found " +
                                  std::to_string(seen_edges));
  return graph;
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_graph(buf.str());
}

}  // namespace gracezo
