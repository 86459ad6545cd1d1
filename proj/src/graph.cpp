#include "netsub/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

#include "netsub/error.hpp"

namespace netsub {

Graph::Graph(int n_nodes) : n_nodes_(n_nodes) {
  if (n_nodes < 1) throw InvalidArgument("graph needs at least one node");
}

Graph::Graph(int n_nodes, const std::vector<Edge>& edges) : Graph(n_nodes) {
  for (const auto& [i, j] : edges) add_edge(i, j);
}

void Graph::add_edge(int i, int j) {
  if (i < 0 || j < 0 || i >= n_nodes_ || j >= n_nodes_) {
    throw InvalidArgument("edge endpoint out of range: (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
  }
  if (i == j) throw InvalidArgument("self-loop at node " + std::to_string(i));
  Edge e{std::min(i, j), std::max(i, j)};
  auto pos = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (pos != edges_.end() && *pos == e) {
    throw InvalidArgument("duplicate edge (" + std::to_string(e.first) + "," +
                          std::to_string(e.second) + ")");
  }
  edges_.insert(pos, e);
}

bool Graph::has_edge(int i, int j) const {
  Edge e{std::min(i, j), std::max(i, j)};
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(n_nodes_), 0);
  for (const auto& [i, j] : edges_) {
    ++deg[static_cast<std::size_t>(i)];
    ++deg[static_cast<std::size_t>(j)];
  }
  return deg;
}

int Graph::degree(int i) const { return degrees().at(static_cast<std::size_t>(i)); }

int Graph::max_degree() const {
  auto deg = degrees();
  return *std::max_element(deg.begin(), deg.end());
}

bool Graph::connected() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_nodes_));
  for (const auto& [i, j] : edges_) {
    adj[static_cast<std::size_t>(i)].push_back(j);
    adj[static_cast<std::size_t>(j)].push_back(i);
  }
  std::vector<char> seen(static_cast<std::size_t>(n_nodes_), 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int visited = 1;
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++visited;
        frontier.push(w);
      }
    }
  }
  return visited == n_nodes_;
}

Topology parse_topology(std::string_view name) {
  if (name == "line") return Topology::line;
  if (name == "complete") return Topology::complete;
  if (name == "star") return Topology::star;
  if (name == "ring") return Topology::ring;
  throw InvalidArgument("unknown topology '" + std::string(name) + "'");
}

std::string_view to_string(Topology t) {
  switch (t) {
    case Topology::line: return "line";
    case Topology::complete: return "complete";
    case Topology::star: return "star";
    case Topology::ring: return "ring";
  }
  return "?";
}

Graph build_gn_prime(int n) {
  if (n < 2) throw InvalidArgument("G_n' needs n >= 2, got " + std::to_string(n));
  Graph g(2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      g.add_edge(gn_prime_u(i), gn_prime_u(j));
      g.add_edge(gn_prime_v(n, i), gn_prime_v(n, j));
    }
    g.add_edge(gn_prime_u(i), gn_prime_v(n, i));
  }
  return g;
}

Graph build_standard(Topology topology, int n) {
  if (n < 2) throw InvalidArgument("topology needs n >= 2, got " + std::to_string(n));
  Graph g(n);
  switch (topology) {
    case Topology::line:
      for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
      break;
    case Topology::complete:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
      break;
    case Topology::star:
      for (int i = 1; i < n; ++i) g.add_edge(0, i);
      break;
    case Topology::ring:
      for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
      // n == 2 would duplicate the single edge
      if (n > 2) g.add_edge(n - 1, 0);
      break;
  }
  return g;
}

void write_edge_list(std::ostream& os, const Graph& g) {
  os << "n " << g.n_nodes() << '\n';
  for (const auto& [i, j] : g.edges()) os << i << ' ' << j << '\n';
}

Graph read_edge_list(std::istream& is) {
  std::string line;
  int n = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream head(line);
    std::string tag;
    if (!(head >> tag >> n) || tag != "n") {
      throw InvalidArgument("edge list must start with 'n <count>'");
    }
    break;
  }
  if (n < 1) throw InvalidArgument("edge list missing node count");
  Graph g(n);
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    int i = 0, j = 0;
    if (!(row >> i >> j)) throw InvalidArgument("malformed edge line: '" + line + "'");
    g.add_edge(i, j);
  }
  return g;
}

}  // namespace netsub
