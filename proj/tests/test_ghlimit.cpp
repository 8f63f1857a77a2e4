#include <cmath>

#include "doctest.h"

#include "curvgraph/errors.hpp"
#include "curvgraph/ends.hpp"
#include "curvgraph/ghlimit.hpp"
#include "test_helpers.hpp"

using namespace curvgraph;
using namespace curvgraph::gh;

namespace {

gen::GraphGenerator perturbed_z2(int index) {
  // root-incident edge weight 1 + 1/index
  const double w = 1.0 + 1.0 / index;
  return gen::GraphGenerator::from_json(
      R"({"family":"lattice","d":2,"m":1.0,"w":1.0,"C":4.0,"pert_radius":1,
          "perturb_w":[{"u":[0,0],"v":[1,0],"w":)" +
      std::to_string(w) + "}]}");
}

}  // namespace

TEST_CASE("rooted isomorphism basics") {
  const auto z2 = testutil::lattice(2);
  const RootedBall a = gen::materialize_ball(z2, z2.root(), 2);
  const RootedBall b = gen::materialize_ball(z2, z2.root(), 2);

  const auto identity = rooted_isomorphism(a, b);
  REQUIRE(identity.has_value());
  // verify: bijective, root-fixing, adjacency-preserving both ways
  CHECK((*identity)[a.root] == b.root);
  std::vector<char> hit(b.graph.order(), 0);
  for (Vertex v : *identity) {
    CHECK(!hit[v]);
    hit[v] = 1;
  }
  std::size_t preserved = 0;
  for (const EdgeRef& e : a.graph.edges())
    preserved += b.graph.adjacent((*identity)[e.u], (*identity)[e.v]);
  CHECK(preserved == a.graph.edge_count());
  CHECK(a.graph.edge_count() == b.graph.edge_count());

  // symmetric direction exists as well
  CHECK(rooted_isomorphism(b, a).has_value());
}

TEST_CASE("radius-1 balls of Z2 and T4 agree; radius-2 balls do not") {
  const auto z2 = testutil::lattice(2);
  const auto t4 = testutil::tree(4);
  const RootedBall bz1 = gen::materialize_ball(z2, z2.root(), 1);
  const RootedBall bt1 = gen::materialize_ball(t4, t4.root(), 1);
  CHECK(rooted_isomorphism(bz1, bt1).has_value());

  const RootedBall bz2 = gen::materialize_ball(z2, z2.root(), 2);
  const RootedBall bt2 = gen::materialize_ball(t4, t4.root(), 2);
  CHECK(bz2.graph.order() == 13);
  CHECK(bt2.graph.order() == 17);
  CHECK(!rooted_isomorphism(bz2, bt2).has_value());
}

TEST_CASE("constant sequences converge with zero deviation") {
  const auto z2 = testutil::lattice(2);
  gen::RootRule still;
  still.direction = {0, 0};
  const gen::RootedGeneratorSequence seq{z2, still};
  const std::vector<int> indices{1, 2, 3, 4};
  const auto balls = materialize_sequence(seq, indices, 2);
  const auto rep = pgh_converges(balls, indices, 2, 1e-9);
  CHECK(rep.verdict == ConvergenceVerdict::Converged);
  CHECK(*rep.stabilization_index == 1);
  for (const auto& e : rep.entries) {
    CHECK(e.isomorphic);
    CHECK(e.m_deviation == doctest::Approx(0.0));
    CHECK(e.w_deviation == doctest::Approx(0.0));
  }

  const auto limit = pgh_limit(balls, indices, 2, 1e-9);
  CHECK(limit.ball.graph.order() == balls.front().graph.order());
}

TEST_CASE("marching roots on the glued Z2 stabilize once the glue leaves the ball") {
  const auto gl2 = testutil::glued_lattice(2);
  gen::RootRule rule;
  rule.direction = {1, 0};
  const gen::RootedGeneratorSequence seq{gl2, rule};
  std::vector<int> indices;
  for (int i = 2; i <= 12; ++i) indices.push_back(i);
  const auto balls = materialize_sequence(seq, indices, 3);
  const auto rep = pgh_converges(balls, indices, 3, 1e-9);
  CHECK(rep.verdict == ConvergenceVerdict::Converged);
  // the glue sits on the probe sphere at i = 3, where the induced ball is
  // already the plain lattice ball; from i = 4 it has left the ball entirely
  CHECK(*rep.stabilization_index == 3);

  // the limit ball is the pure Z2 ball with unit weights
  const auto limit = pgh_limit(balls, indices, 3, 1e-9);
  const auto z2 = testutil::lattice(2);
  const RootedBall pure = gen::materialize_ball(z2, z2.root(), 3);
  CHECK(rooted_isomorphism(limit.ball, pure, 1e-12).has_value());
}

TEST_CASE("weight perturbations settle only once 1/i is below eps") {
  // balls around the root of Z2 with one root edge at weight 1 + 1/i
  auto balls_for = [&](const std::vector<int>& indices) {
    std::vector<RootedBall> balls;
    for (int i : indices) {
      const auto g = perturbed_z2(i);
      balls.push_back(gen::materialize_ball(g, g.root(), 2));
    }
    return balls;
  };

  const std::vector<int> coarse{2, 4, 6, 8, 10};
  const auto diverge = pgh_converges(balls_for(coarse), coarse, 2, 1e-3);
  CHECK(diverge.verdict == ConvergenceVerdict::WeightsDiverge);
  CHECK(diverge.stabilization_index.has_value());

  const std::vector<int> fine{10, 100, 1000, 10000};
  const auto converged = pgh_converges(balls_for(fine), fine, 2, 1e-3);
  CHECK(converged.verdict == ConvergenceVerdict::Converged);
  CHECK(*converged.weight_stabilization_index == 1000);

  // limit weights sit within eps of the unperturbed lattice
  const auto limit = pgh_limit(balls_for(fine), fine, 2, 1e-3);
  const auto z2 = testutil::lattice(2);
  const RootedBall pure = gen::materialize_ball(z2, z2.root(), 2);
  CHECK(rooted_isomorphism(limit.ball, pure, 1e-3).has_value());
}

TEST_CASE("convergence at radius R restricts to every smaller radius") {
  const auto gl2 = testutil::glued_lattice(2);
  gen::RootRule rule;
  rule.direction = {1, 0};
  const gen::RootedGeneratorSequence seq{gl2, rule};
  std::vector<int> indices{5, 6, 7, 8};
  for (int radius : {3, 2, 1}) {
    const auto balls = materialize_sequence(seq, indices, radius);
    CHECK(pgh_converges(balls, indices, radius, 1e-9).verdict ==
          ConvergenceVerdict::Converged);
  }
}

TEST_CASE("limit balls are consistent across radii") {
  const auto gl2 = testutil::glued_lattice(2);
  gen::RootRule rule;
  rule.direction = {1, 0};
  const gen::RootedGeneratorSequence seq{gl2, rule};
  std::vector<int> indices{5, 6, 7, 8};

  const auto limit3 = pgh_limit(materialize_sequence(seq, indices, 3), indices, 3, 1e-9);
  const auto limit4 = pgh_limit(materialize_sequence(seq, indices, 4), indices, 4, 1e-9);
  const RootedBall restricted = ball(limit4.ball.graph, limit4.ball.root, 3);
  CHECK(rooted_isomorphism(limit3.ball, restricted, 1e-12).has_value());
}

TEST_CASE("function convergence through the chosen isomorphisms") {
  const auto z2 = testutil::lattice(2);
  gen::RootRule still;
  still.direction = {0, 0};
  const gen::RootedGeneratorSequence seq{z2, still};
  const std::vector<int> indices{1, 2, 4, 8, 16};
  const auto balls = materialize_sequence(seq, indices, 2);
  const auto conv = pgh_converges(balls, indices, 2, 1e-9);
  REQUIRE(conv.verdict == ConvergenceVerdict::Converged);

  // u_i = c + 1/i constants against the limit c: deviations are exactly 1/i
  const double c = 0.75;
  std::vector<VertexFunction> u_list;
  for (int i : indices)
    u_list.push_back(VertexFunction::constant(balls.front().graph, c + 1.0 / i));
  const auto limit_fn = VertexFunction::constant(balls.back().graph, c);
  const auto rep = function_convergence(conv, balls, u_list, limit_fn, 0.3);
  for (std::size_t k = 0; k < indices.size(); ++k)
    CHECK(rep.deviations[k] == doctest::Approx(1.0 / indices[k]));
  CHECK(rep.converged);
  CHECK(*rep.stabilization_index == 4);

  // identically zero converges with zero deviation
  std::vector<VertexFunction> zeros(indices.size(),
                                    VertexFunction::constant(balls.front().graph, 0.0));
  const auto zero_rep = function_convergence(
      conv, balls, zeros, VertexFunction::constant(balls.back().graph, 0.0), 1e-12);
  CHECK(zero_rep.converged);
  for (double d : zero_rep.deviations) CHECK(d == doctest::Approx(0.0));
}

TEST_CASE("bounded harmonic approximants flatten along marching roots") {
  // restrictions of an end-separating function to balls marching into its
  // end converge to the constant 1, and the gradient evidence decays
  const auto gl3 = testutil::glued_lattice(3);
  const auto basis = curvgraph::ends::separating_harmonics(gl3, {gl3.root()}, 8, 12, 6);
  REQUIRE(basis.status == curvgraph::ends::BasisStatus::Ok);

  // pick the function that is ~1 on the side-A end
  const curvgraph::VertexFunction* h = nullptr;
  for (std::size_t i = 0; i < basis.functions.size(); ++i)
    if (basis.end_representatives[i] == "(-1,0,0)") h = &basis.functions[i];
  REQUIRE(h != nullptr);

  gen::RootRule rule;
  rule.direction = {1, 0, 0};
  const std::vector<int> indices{4, 6, 8, 10};
  const auto balls = materialize_sequence({gl3, rule}, indices, 2);
  const auto conv = pgh_converges(balls, indices, 2, 1e-9);
  REQUIRE(conv.verdict == ConvergenceVerdict::Converged);

  std::vector<VertexFunction> u_list;
  for (const RootedBall& b : balls) {
    VertexFunction u(b.graph.order());
    for (Vertex v = 0; v < b.graph.order(); ++v)
      u.set(v, h->at(basis.ball.graph.index_of(b.graph.label(v))));
    u_list.push_back(std::move(u));
  }
  const auto rep = function_convergence(
      conv, balls, u_list, VertexFunction::constant(balls.back().graph, 1.0), 0.25);
  REQUIRE(rep.deviations.size() == indices.size());
  for (std::size_t k = 1; k < rep.deviations.size(); ++k)
    CHECK(rep.deviations[k] <= rep.deviations[k - 1] + 1e-12);
  CHECK(rep.deviations.back() < rep.deviations.front());
  CHECK(rep.converged);
}

TEST_CASE("curvature semicontinuity along converged sequences") {
  // constant sequence: limit curvature equals the sequence curvature exactly
  const auto z2 = testutil::lattice(2);
  gen::RootRule still;
  still.direction = {0, 0};
  const std::vector<int> indices{1, 2, 3};
  {
    const auto balls = materialize_sequence({z2, still}, indices, 3);
    const auto conv = pgh_converges(balls, indices, 3, 1e-9);
    const auto rep = curvature_semicontinuity_check(conv, balls, curv::CurvatureMode::Ollivier);
    CHECK(rep.holds);
    for (const auto& row : rep.rows) CHECK(row.limit_value == doctest::Approx(row.min_tail));
  }
  {
    const auto balls = materialize_sequence({z2, still}, indices, 2);
    const auto conv = pgh_converges(balls, indices, 2, 1e-9);
    const auto rep = curvature_semicontinuity_check(conv, balls, curv::CurvatureMode::BakryEmery);
    CHECK(rep.holds);
  }

  // marching roots on the glued Z2, Ollivier mode
  const auto gl2 = testutil::glued_lattice(2);
  gen::RootRule rule;
  rule.direction = {1, 0};
  std::vector<int> march{4, 5, 6, 7, 8, 9, 10, 11, 12};
  const auto balls = materialize_sequence({gl2, rule}, march, 3);
  const auto conv = pgh_converges(balls, march, 3, 1e-9);
  REQUIRE(conv.verdict == ConvergenceVerdict::Converged);
  const auto rep = curvature_semicontinuity_check(conv, balls, curv::CurvatureMode::Ollivier);
  CHECK(rep.holds);
  for (const auto& row : rep.rows) {
    CHECK(row.limit_value == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(row.min_tail == doctest::Approx(0.0).epsilon(1e-9));
  }

  // perturbed weights 1 + 1/i on a root edge settle into the limit bound
  std::vector<RootedBall> pballs;
  const std::vector<int> fine{50, 100, 200, 400};
  for (int i : fine) {
    const auto g = perturbed_z2(i);
    pballs.push_back(gen::materialize_ball(g, g.root(), 3));
  }
  const auto pconv = pgh_converges(pballs, fine, 3, 1e-1);
  REQUIRE(pconv.verdict == ConvergenceVerdict::Converged);
  const auto prep = curvature_semicontinuity_check(pconv, pballs, curv::CurvatureMode::Ollivier,
                                                   1e-6);
  CHECK(prep.holds);
}

TEST_CASE("refusals") {
  const auto z2 = testutil::lattice(2);
  const auto t4 = testutil::tree(4);
  const std::vector<int> indices{1, 2};
  std::vector<RootedBall> mixed{gen::materialize_ball(z2, z2.root(), 2),
                                gen::materialize_ball(t4, t4.root(), 2)};
  const auto rep = pgh_converges(mixed, indices, 2, 1e-9);
  CHECK(rep.verdict == ConvergenceVerdict::NotStabilized);
  CHECK_THROWS_AS((void)pgh_limit(mixed, indices, 2, 1e-9), DomainError);

  std::vector<VertexFunction> us(2, VertexFunction::constant(mixed[0].graph, 0.0));
  CHECK_THROWS_AS((void)function_convergence(
                      rep, mixed, us, VertexFunction::constant(mixed[1].graph, 0.0), 1e-3),
                  DomainError);
  CHECK_THROWS_AS(
      (void)curvature_semicontinuity_check(rep, mixed, curv::CurvatureMode::Ollivier),
      DomainError);
}
