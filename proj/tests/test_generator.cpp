#include "doctest.h"

#include "curvgraph/errors.hpp"
#include "curvgraph/generator.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace curvgraph;
using gen::GraphGenerator;

TEST_CASE("materialized ball sizes") {
  const auto z2 = testutil::lattice(2);
  const RootedBall b = gen::materialize_ball(z2, z2.root(), 1);
  CHECK(b.graph.order() == 5);
  CHECK(b.graph.edge_count() == 4);

  const auto t3 = testutil::tree(3);
  const RootedBall tb = gen::materialize_ball(t3, t3.root(), 2);
  CHECK(tb.graph.order() == 10);  // 1 + 3 + 6

  const auto gl3 = testutil::glued_lattice(3);
  const RootedBall gb = gen::materialize_ball(gl3, gl3.root(), 1);
  CHECK(gb.graph.order() == 13);  // 1 + 6 + 6
}

TEST_CASE("lattice sphere counts match the enumeration oracle") {
  for (int d = 1; d <= 3; ++d) {
    const auto z = testutil::lattice(d);
    const RootedBall b = gen::materialize_ball(z, z.root(), 4);
    for (int r = 0; r <= 4; ++r) {
      long long count = 0;
      for (int depth : b.depth) count += (depth == r);
      CHECK(count == oracles::lattice_sphere_count(d, r));
    }
  }
}

TEST_CASE("growing the radius preserves ids and weights") {
  const auto gl2 = testutil::glued_lattice(2);
  const RootedBall small = gen::materialize_ball(gl2, gl2.root(), 3);
  const RootedBall big = gen::materialize_ball(gl2, gl2.root(), 4);
  REQUIRE(big.graph.order() > small.graph.order());
  for (Vertex v = 0; v < small.graph.order(); ++v) {
    CHECK(big.graph.label(v) == small.graph.label(v));
    CHECK(big.graph.vertex_weight(v) == small.graph.vertex_weight(v));
    CHECK(big.depth[v] == small.depth[v]);
  }
  for (const EdgeRef& e : small.graph.edges())
    CHECK(big.graph.edge_weight(e.u, e.v) == e.w);
}

TEST_CASE("oracle symmetry on sampled vertices") {
  const auto gl3 = testutil::glued_lattice(3);
  const RootedBall b = gen::materialize_ball(gl3, gl3.root(), 2);
  // validate_bounded_geometry walks the oracle and raises on asymmetry
  const auto report = gen::validate_bounded_geometry(gl3, 3);
  CHECK(report.pass);
}

TEST_CASE("bounded geometry validation") {
  CHECK(gen::validate_bounded_geometry(testutil::lattice(3), 3).pass);
  CHECK(gen::validate_bounded_geometry(testutil::tree(3), 3).pass);

  const auto bad = GraphGenerator::from_json(
      R"({"family":"lattice","d":1,"m":1.0,"w":1.0,"C":6.0,"pert_radius":1,
          "perturb_w":[{"u":[0],"v":[1],"w":10.0}]})");
  const auto report = gen::validate_bounded_geometry(bad, 3);
  CHECK(!report.pass);
  REQUIRE(report.edge_weight_violations.size() == 1);
  CHECK(report.edge_weight_violations.front().second == 10.0);

  const auto heavy = GraphGenerator::from_json(
      R"({"family":"lattice","d":2,"m":1.0,"w":1.0,"C":4.0,"pert_radius":1,
          "perturb_m":[{"v":[0,0],"m":9.0}]})");
  const auto mreport = gen::validate_bounded_geometry(heavy, 2);
  CHECK(!mreport.pass);
  REQUIRE(mreport.vertex_weight_violations.size() == 1);
  CHECK(mreport.vertex_weight_violations.front().first == "(0,0)");

  // table entries beyond the sampled ball are still checked
  const auto far = GraphGenerator::from_json(
      R"({"family":"lattice","d":1,"m":1.0,"w":1.0,"C":2.0,"pert_radius":6,
          "perturb_m":[{"v":[5],"m":100.0}],
          "perturb_w":[{"u":[5],"v":[6],"w":0.001}]})");
  const auto freport = gen::validate_bounded_geometry(far, 2);
  CHECK(!freport.pass);
  CHECK(freport.vertex_weight_violations.size() == 1);
  CHECK(freport.edge_weight_violations.size() == 1);
}

TEST_CASE("perturbations are honored and radius-checked") {
  const auto g = GraphGenerator::from_json(
      R"({"family":"lattice","d":2,"m":1.0,"w":1.0,"C":4.0,"pert_radius":2,
          "perturb_m":[{"v":[1,0],"m":2.5}],
          "perturb_w":[{"u":[0,0],"v":[0,1],"w":0.5}]})");
  const RootedBall b = gen::materialize_ball(g, g.root(), 2);
  CHECK(b.graph.vertex_weight(b.graph.index_of("(1,0)")) == 2.5);
  CHECK(b.graph.edge_weight(b.graph.index_of("(0,0)"), b.graph.index_of("(0,1)")) == 0.5);
  CHECK(b.graph.vertex_weight(b.graph.index_of("(0,-1)")) == 1.0);

  CHECK_THROWS_AS(GraphGenerator::from_json(
                      R"({"family":"lattice","d":2,"m":1.0,"w":1.0,"C":4.0,"pert_radius":1,
                          "perturb_m":[{"v":[5,0],"m":2.0}]})"),
                  ParseError);
}

TEST_CASE("vertex budget") {
  const auto z3 = testutil::lattice(3);
  CHECK_THROWS_AS((void)gen::materialize_ball(z3, z3.root(), 10, 50), ResourceError);
}

TEST_CASE("product family matches the flat lattice") {
  const auto prod = GraphGenerator::from_json(
      R"({"family":"product","factors":[{"family":"lattice","d":1},{"family":"lattice","d":1}],
          "m":1.0,"w":1.0,"C":4.0})");
  const auto z2 = testutil::lattice(2);
  for (int r = 0; r <= 3; ++r) {
    const auto a = gen::materialize_ball(prod, prod.root(), r);
    const auto b = gen::materialize_ball(z2, z2.root(), r);
    CHECK(a.graph.order() == b.graph.order());
    CHECK(a.graph.edge_count() == b.graph.edge_count());
  }
}

TEST_CASE("glued lattice identifies exactly one vertex") {
  const auto gl2 = testutil::glued_lattice(2);
  const RootedBall b = gen::materialize_ball(gl2, gl2.root(), 2);
  CHECK(b.graph.degree(b.root) == 8);
  long long s2 = 0;
  for (int d : b.depth) s2 += (d == 2);
  CHECK(s2 == 2 * oracles::lattice_sphere_count(2, 2));
}

TEST_CASE("root rules") {
  const auto gl2 = testutil::glued_lattice(2);
  gen::RootRule rule;
  rule.direction = {1, 0};
  rule.side = 1;
  const auto p0 = rule.root_at(gl2, 0);
  CHECK(p0.to_string() == "(0,0)");  // identified root canonicalizes to side A
  const auto p3 = rule.root_at(gl2, 3);
  CHECK(p3.to_string() == "B:(3,0)");

  const auto t3 = testutil::tree(3);
  gen::RootRule branch;
  branch.branch = {0};
  CHECK(branch.root_at(t3, 0).to_string() == "t:");
  CHECK(branch.root_at(t3, 2).to_string() == "t:0.0");
}

TEST_CASE("generator json round trips through tokens") {
  const auto gl3 = testutil::glued_lattice(3);
  const auto v = gl3.vertex_from_json(R"({"side":"B","inner":[1,2,0]})");
  CHECK(v.to_string() == "B:(1,2,0)");
  const auto root = gl3.vertex_from_json(R"({"side":"B","inner":[0,0,0]})");
  CHECK(root.to_string() == "(0,0,0)");  // canonicalized to side A
  CHECK_THROWS_AS((void)gl3.vertex_from_json("[1,2]"), ParseError);
}
