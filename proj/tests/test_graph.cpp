#include <random>

#include "doctest.h"

#include "curvgraph/errors.hpp"
#include "curvgraph/graph.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace curvgraph;
using testutil::from_values;
using testutil::path_graph;
using testutil::unit_graph;

TEST_CASE("distance basics") {
  const auto path = path_graph(3);
  CHECK(*distance(path, 0, 2) == 2);
  CHECK(*distance(path, 1, 1) == 0);

  const auto c4 = unit_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  CHECK(*distance(c4, 0, 2) == 2);

  const auto two_parts = unit_graph(4, {{0, 1}, {2, 3}});
  CHECK(!distance(two_parts, 0, 3).has_value());
  CHECK_THROWS_AS((void)distance(path, 0, 7), DomainError);
}

TEST_CASE("ball and sphere") {
  const auto path = path_graph(3);
  const RootedBall b1 = ball(path, 1, 1);
  CHECK(b1.graph.order() == 3);
  CHECK(b1.graph.edge_count() == 2);
  CHECK(b1.depth[b1.root] == 0);

  const RootedBall b0 = ball(path, 1, 0);
  CHECK(b0.graph.order() == 1);
  CHECK(b0.graph.edge_count() == 0);

  // lattice truncations against the coordinate-enumeration oracle
  const auto z2 = gen::materialize_ball(testutil::lattice(2), testutil::lattice(2).root(), 4);
  const RootedBall inner = ball(z2.graph, z2.root, 2);
  CHECK(inner.graph.order() == oracles::lattice_ball_count(2, 2));  // 13
  CHECK(sphere(z2.graph, z2.root, 1).size() == 4);
  CHECK(sphere(z2.graph, z2.root, 0) == std::vector<Vertex>{z2.root});

  const auto z3 = gen::materialize_ball(testutil::lattice(3), testutil::lattice(3).root(), 4);
  CHECK(sphere(z3.graph, z3.root, 2).size() ==
        static_cast<std::size_t>(oracles::lattice_sphere_count(3, 2)));  // 18
}

TEST_CASE("ball equals disjoint union of spheres") {
  const auto z2 = gen::materialize_ball(testutil::lattice(2), testutil::lattice(2).root(), 3);
  const RootedBall b = ball(z2.graph, z2.root, 3);
  std::size_t total = 0;
  for (int r = 0; r <= 3; ++r) total += sphere(z2.graph, z2.root, r).size();
  CHECK(total == static_cast<std::size_t>(b.graph.order()));
}

TEST_CASE("laplacian basics") {
  const auto edge = unit_graph(2, {{0, 1}});
  const auto f = from_values(edge, {0.0, 1.0});
  CHECK(laplacian(edge, f, 0) == doctest::Approx(1.0));

  const auto c = VertexFunction::constant(edge, 3.5);
  CHECK(laplacian(edge, c, 0) == doctest::Approx(0.0));

  // linear functions are harmonic on a Z truncation
  const auto path = path_graph(5);
  const auto linear = from_values(path, {0, 1, 2, 3, 4});
  for (Vertex v = 1; v <= 3; ++v) CHECK(laplacian(path, linear, v) == doctest::Approx(0.0));

  VertexFunction partial(edge.order());
  partial.set(0, 1.0);
  CHECK_THROWS_AS((void)laplacian(edge, partial, 0), DomainError);
}

TEST_CASE("boundaries") {
  const auto path = path_graph(5);  // 0-1-2-3-4
  CHECK(exterior_boundary(path, {2}) == std::vector<Vertex>{1, 3});
  CHECK(exterior_boundary(path, {0, 1, 2, 3, 4}).empty());
  CHECK(interior_boundary(path, {1, 2, 3}) == std::vector<Vertex>{1, 3});
  CHECK(interior_boundary(path, {0, 1, 2, 3, 4}).empty());

  const auto z2 = gen::materialize_ball(testutil::lattice(2), testutil::lattice(2).root(), 4);
  CHECK(exterior_boundary(z2.graph, {z2.root}).size() == 4);

  // interior boundary of a radius-2 lattice ball is its radius-2 sphere
  std::vector<Vertex> b2;
  for (Vertex v = 0; v < z2.graph.order(); ++v)
    if (z2.depth[v] <= 2) b2.push_back(v);
  CHECK(interior_boundary(z2.graph, b2).size() ==
        static_cast<std::size_t>(oracles::lattice_sphere_count(2, 2)));

  // closure and disjointness
  const auto ext = exterior_boundary(path, {1, 2});
  for (Vertex v : ext) CHECK((v != 1 && v != 2));
  CHECK(closure(path, {1, 2}) == std::vector<Vertex>{0, 1, 2, 3});
}

TEST_CASE("induced subgraph") {
  const auto c4 = unit_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  const auto [sub, members] = induced_subgraph(c4, {0, 1});
  CHECK(sub.order() == 2);
  CHECK(sub.edge_count() == 1);

  const auto [empty, none] = induced_subgraph(c4, {});
  CHECK(empty.order() == 0);

  const auto [full, all] = induced_subgraph(c4, {0, 1, 2, 3});
  CHECK(full.order() == 4);
  CHECK(full.edge_count() == 4);
}

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(unit_graph(2, {{0, 0}}), DomainError);
  CHECK_THROWS_AS(unit_graph(2, {{0, 1}, {1, 0}}), DomainError);
  CHECK_THROWS_AS(WeightedGraph({"a"}, {0.0}, {}), DomainError);
  CHECK_THROWS_AS(WeightedGraph({"a", "b"}, {1.0, 1.0}, {{0, 1, -2.0}}), DomainError);
}

TEST_CASE("distance symmetry and triangle inequality on random graphs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = oracles::random_connected_graph(100 + trial, 12, 0.25, 0.5, 2.0);
    std::uniform_int_distribution<int> pick(0, g.order() - 1);
    for (int k = 0; k < 20; ++k) {
      const Vertex a = pick(rng), b = pick(rng), c = pick(rng);
      const int dab = *distance(g, a, b);
      CHECK(dab == *distance(g, b, a));
      CHECK(dab <= *distance(g, a, c) + *distance(g, c, b));
    }
  }
}

TEST_CASE("summation by parts on random graphs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = oracles::random_connected_graph(200 + trial, 10, 0.3, 0.5, 2.0);
    VertexFunction f(g.order()), h(g.order());
    for (Vertex v = 0; v < g.order(); ++v) {
      f.set(v, val(rng));
      h.set(v, val(rng));
    }
    double lhs = 0.0;
    for (Vertex v = 0; v < g.order(); ++v)
      lhs += g.vertex_weight(v) * f.at(v) * laplacian(g, h, v);
    double rhs = 0.0;
    for (const EdgeRef& e : g.edges())
      rhs -= e.w * (f.at(e.v) - f.at(e.u)) * (h.at(e.v) - h.at(e.u));
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    CHECK(std::abs(lhs - rhs) / scale < 1e-12);
  }
}
