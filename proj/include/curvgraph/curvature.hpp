#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "curvgraph/generator.hpp"
#include "curvgraph/graph.hpp"
#include "curvgraph/linalg.hpp"

namespace curvgraph::curv {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Carre du champ: Gamma(f,h)(x) = 1/(2 m(x)) sum_{y~x} w(x,y)(f(y)-f(x))(h(y)-h(x)).
double gamma(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h, Vertex x);
double gamma(const WeightedGraph& g, const VertexFunction& f, Vertex x);

// Gamma_2(f)(x) = 1/2 Delta Gamma(f)(x) - Gamma(f, Delta f)(x); needs f on B_2(x).
double gamma2(const WeightedGraph& g, const VertexFunction& f, Vertex x);

// Quadratic forms of the curvature-dimension inequality at x, over functions
// on B_2(x) with f(x) pinned to 0 (both forms ignore constants):
//   q1(f) = Gamma(f)(x)
//   q2(f) = Gamma_2(f)(x) - (1/n) (Delta f(x))^2
struct CurvatureForms {
  std::vector<Vertex> basis;  // vertices of B_2(x) except x, ascending
  linalg::SymMatrix q1;
  linalg::SymMatrix q2;
};
CurvatureForms curvature_forms(const WeightedGraph& g, Vertex x, double n = kInfinity);

struct BakryEmeryResult {
  Vertex vertex = 0;
  double n_param = kInfinity;
  double curvature = 0.0;
  double tolerance = 0.0;
  bool degenerate = false;  // isolated vertex: curvature reported as +inf
  VertexFunction witness;   // Gamma(witness)(x) > 0, ratio <= curvature + tolerance
};

// Maximal K with Gamma_2(f)(x) >= (1/n)(Delta f(x))^2 + K Gamma(f)(x) for all
// f, by bisection on the PSD test for q2 - K q1. The ball B_2(x) must be
// entirely contained in g. Throws NumericError if bracketing escapes +-1e6.
BakryEmeryResult bakry_emery_curvature(const WeightedGraph& g, Vertex x, double n = kInfinity,
                                       double tol = 1e-8);

// CD(K, n) at x: q2 - K q1 is positive semidefinite up to the slack
// eps_psd = 1e-10 (1 + ||q2||_inf).
bool cd_check(const WeightedGraph& g, Vertex x, double K, double n = kInfinity);

struct OllivierResult {
  Vertex x = 0, y = 0;
  double kappa = 0.0;
  bool optimal = false;
  VertexFunction optimizer;  // on B_1(x) u B_1(y); grad_yx f = 1, 1-Lipschitz
  double duality_gap = 0.0;
};

// Ollivier curvature of the edge {x,y} as the optimum of
//   min grad_xy Delta f   s.t.  f(y)-f(x) = 1,  f(u)-f(v) <= d(u,v)
// over f on N = B_1(x) u B_1(y), with combinatorial distances taken inside g.
// Exact for truncations of infinite graphs whenever B_3(x) is contained in g.
OllivierResult ollivier_curvature(const WeightedGraph& g, Vertex x, Vertex y);

// Same LP solved with exact rational pivoting; inputs must have rationally
// representable weights. Used by the oracle corpus cross-checks.
double ollivier_curvature_exact(const WeightedGraph& g, Vertex x, Vertex y);

enum class CurvatureMode { BakryEmery, Ollivier };

struct CurvatureViolation {
  std::string where;  // vertex label or "{u,v}" edge label
  double value = 0.0;
};

struct CurvatureOutsideReport {
  CurvatureMode mode = CurvatureMode::Ollivier;
  int probe_radius = 0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<CurvatureViolation> violations;
  std::size_t checked = 0;  // vertices (BE) or edges (Ollivier) tested
};

// Verifies K_inf(x) >= -tol on B_probe \ omega (BE) or kappa(e) >= -tol on
// E_{B_probe \ omega} (Ollivier) inside a materialized ball with enough slack
// radius for exact local computations (+2 for BE, +3 for Ollivier).
CurvatureOutsideReport curvature_outside(const gen::GraphGenerator& generator,
                                         const std::vector<gen::GenVertex>& omega,
                                         CurvatureMode mode, int probe_radius,
                                         double tol = 1e-9,
                                         std::size_t vertex_budget = gen::kDefaultVertexBudget);

// Finite-graph variant; g itself is the universe.
CurvatureOutsideReport curvature_outside(const WeightedGraph& g, const std::vector<Vertex>& omega,
                                         CurvatureMode mode, double tol = 1e-9);

}  // namespace curvgraph::curv
