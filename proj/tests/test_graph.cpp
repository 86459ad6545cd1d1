#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "netsub/experiments.hpp"
#include "netsub/graph.hpp"
#include "netsub/mixing.hpp"

using namespace netsub;

TEST_CASE("G_n' shape") {
  const Graph g = build_gn_prime(4);
  CHECK(g.n_nodes() == 8);
  CHECK(g.n_edges() == 16);
  for (int i = 0; i < 8; ++i) CHECK(g.degree(i) == 4);
  for (int i = 0; i < 4; ++i) CHECK(g.has_edge(gn_prime_u(i), gn_prime_v(4, i)));
  CHECK_FALSE(g.has_edge(gn_prime_u(0), gn_prime_v(4, 1)));
  CHECK(build_gn_prime(10).max_degree() == 10);
  CHECK(g.connected());
  CHECK_THROWS_AS(build_gn_prime(1), InvalidArgument);
}

TEST_CASE("standard topologies") {
  const Graph star = build_standard(Topology::star, 4);
  CHECK(star.n_edges() == 3);
  CHECK(star.degree(0) == 3);
  const Graph line = build_standard(Topology::line, 10);
  CHECK(line.n_edges() == 9);
  CHECK(line.max_degree() == 2);
  CHECK(build_standard(Topology::ring, 10).n_edges() == 10);
  CHECK(build_standard(Topology::ring, 2).n_edges() == 1);
  CHECK(build_standard(Topology::complete, 5).n_edges() == 10);
  CHECK(parse_topology("line") == Topology::line);
  CHECK_THROWS_AS(parse_topology("torus"), InvalidArgument);
}

TEST_CASE("edges are validated and normalized") {
  Graph g(3);
  g.add_edge(2, 0);
  CHECK(g.edges().front() == Graph::Edge{0, 2});
  CHECK_THROWS_AS(g.add_edge(0, 2), InvalidArgument);
  CHECK_THROWS_AS(g.add_edge(1, 1), InvalidArgument);
  CHECK_THROWS_AS(g.add_edge(0, 3), InvalidArgument);
  CHECK(Graph(3, {{0, 1}, {1, 2}}) == Graph(3, {{2, 1}, {1, 0}}));
  CHECK_FALSE(Graph(3, {{0, 1}}).connected());
}

TEST_CASE("edge list round trip") {
  const Graph g = build_gn_prime(3);
  std::stringstream ss;
  write_edge_list(ss, g);
  CHECK(ss.str().rfind("n 6\n", 0) == 0);
  CHECK(read_edge_list(ss) == g);
  std::istringstream bad("n 2\n0 5\n");
  CHECK_THROWS_AS(read_edge_list(bad), InvalidArgument);
}

TEST_CASE("mixing matrix entries") {
  const auto w = mixing_matrix<double>(build_gn_prime(4), 0.125);
  CHECK(w.entries().diagonal().isConstant(0.5));
  CHECK(w.symmetric());
  CHECK((w.entries().rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(mixing_matrix<double>(build_gn_prime(4), 0.25), InvalidArgument);
  CHECK_THROWS_AS(mixing_matrix<double>(build_gn_prime(4), 0.5), InvalidArgument);
  CHECK_THROWS_AS(mixing_matrix<double>(build_gn_prime(4), -0.1), InvalidArgument);
  // the boundary eps = 1/deg is only admitted on request
  const auto edge = mixing_matrix<double>(build_gn_prime(4), 0.25, DiagonalRule::nonnegative);
  CHECK(edge.entries().diagonal().isZero());
  Eigen::MatrixXd bad(2, 2);
  bad << 0.5, 0.6, 0.5, 0.4;
  CHECK_THROWS_AS(MixingMatrix<double>{bad}, InvalidArgument);
}

TEST_CASE("sigma of K2 at eps=0.3 is 0.4") {
  Graph k2(2, {{0, 1}});
  const auto w = mixing_matrix<double>(k2, 0.3);
  CHECK(w.sigma() == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(dense_second_singular_value(w.entries()) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("identity has sigma 0 for one node") {
  const auto w = MixingMatrix<double>::identity(1);
  CHECK(w.sigma() == 0.0);
}

TEST_CASE("closed-form spectrum of G_n'") {
  for (int n : {2, 4, 8, 16}) {
    for (double eps : {0.9 / (n + 2), 0.5 / n}) {
      const auto r = spectrum(n, eps);
      CHECK(r.numeric.size() == std::size_t(2 * n));
      CHECK(r.max_abs_diff <= 1e-9);
      CHECK(std::abs(r.sigma_power - r.sigma_dense) <= 1e-8);
      CHECK(std::abs(r.sigma_dense - r.sigma_closed) <= 1e-9);
    }
  }
  // n=2, eps=0.1: 1, 0.8, 0.8, 0.6
  const auto r = spectrum(2, 0.1);
  const std::vector<double> expect{1.0, 0.8, 0.8, 0.6};
  for (std::size_t i = 0; i < 4; ++i) CHECK(r.closed_form[i] == doctest::Approx(expect[i]).epsilon(1e-15));
}

TEST_CASE("power iteration agrees with the dense solve on random doubly stochastic matrices") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 7;
    // convex combination of permutation matrices is doubly stochastic
    Eigen::MatrixXd w = 0.3 * Eigen::MatrixXd::Identity(n, n);
    for (int k = 0; k < 3; ++k) {
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int i = 0; i < n; ++i) w(i, perm[i]) += 0.7 / 3;
    }
    const MixingMatrix<double> m(w);
    CHECK(std::abs(m.sigma() - dense_second_singular_value(w)) <= 1e-8);
  }
}

TEST_CASE("mixing contracts toward the mean") {
  const auto w = mixing_matrix<double>(build_standard(Topology::line, 10), 0.25);
  CHECK(contraction_min_slack(w, 1000, 1) >= -1e-12);
  const auto g = mixing_matrix<double>(build_gn_prime(8), 0.125, DiagonalRule::nonnegative);
  CHECK(contraction_min_slack(g, 1000, 2) >= -1e-12);
}
