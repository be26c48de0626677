#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gracezo {

/// Simple undirected graph stored as a dense symmetric 0/1 adjacency matrix.
/// Vertices are 0-based in memory and 1-based in the edge-list format.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n);

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_; }

  /// Idempotent; rejects self-loops and out-of-range vertices.
  void add_edge(std::size_t a, std::size_t b);
  bool has_edge(std::size_t a, std::size_t b) const { return adjacency_[a * n_ + b] != 0; }
  std::size_t degree(std::size_t v) const;
  std::size_t component_count() const;

  /// Row-major n*n adjacency, entries 0 or 1.
  const std::vector<std::uint8_t>& adjacency() const noexcept { return adjacency_; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t edges_ = 0;
  std::vector<std::uint8_t> adjacency_;
};

/// Parses "n m" followed by m lines "a b" (1-based, a != b). Blank lines and
/// lines starting with '#' are skipped. Errors carry the offending line number.
Graph load_graph(std::string_view text);
Graph load_graph_file(const std::string& path);

}  // namespace gracezo
