#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace netsub {

/// Undirected simple graph on nodes 0..n_nodes-1.
///
/// Edges are stored normalized as (min, max) and sorted, so two graphs with the
/// same edge set compare equal regardless of insertion order.
class Graph {
 public:
  using Edge = std::pair<int, int>;

  explicit Graph(int n_nodes);
  Graph(int n_nodes, const std::vector<Edge>& edges);

  /// Throws InvalidArgument on self-loops, out-of-range endpoints or duplicates.
  void add_edge(int i, int j);

  int n_nodes() const noexcept { return n_nodes_; }
  std::size_t n_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool has_edge(int i, int j) const;
  int degree(int i) const;
  int max_degree() const;
  std::vector<int> degrees() const;
  bool connected() const;

  bool operator==(const Graph&) const = default;

 private:
  int n_nodes_;
  std::vector<Edge> edges_;
};

enum class Topology { line, complete, star, ring };

Topology parse_topology(std::string_view name);
std::string_view to_string(Topology t);

/// Two complete graphs on u_1..u_n (indices 0..n-1) and v_1..v_n (indices
/// n..2n-1) joined by the perfect matching u_i -- v_i.
Graph build_gn_prime(int n);

Graph build_standard(Topology topology, int n);

inline int gn_prime_u(int i) { return i; }
inline int gn_prime_v(int n, int i) { return n + i; }

// Edge-list text: "n <count>" then one "i j" pair per line, 0-based.
void write_edge_list(std::ostream& os, const Graph& g);
Graph read_edge_list(std::istream& is);

}  // namespace netsub
