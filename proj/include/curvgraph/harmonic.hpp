#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curvgraph/curvature.hpp"
#include "curvgraph/generator.hpp"
#include "curvgraph/graph.hpp"

namespace curvgraph::harm {

struct SolveOptions {
  double cg_rel_tol = 1e-10;
  int dense_threshold = 500;          // below this many unknowns, direct LDL^T
  double residual_certify = 1e-8;     // scale factor for "is harmonic" checks
  std::size_t vertex_budget = gen::kDefaultVertexBudget;
};

struct HarmonicSolution {
  VertexFunction values;              // boundary data exact, interior solved
  std::vector<Vertex> interior;
  std::vector<Vertex> boundary;
  double residual = 0.0;              // max |Delta u| over the interior
  int iterations = 0;
  std::string method;
};

// Unique u with Delta u = 0 on `interior` and u = data on the prescribed
// boundary. Every interior vertex's neighbors must carry either an unknown or
// a boundary value; interior components with no boundary contact raise
// IllPosedError.
HarmonicSolution dirichlet_solve(const WeightedGraph& g, const std::vector<Vertex>& interior,
                                 const VertexFunction& boundary_values, SolveOptions opts = {});

// Dirichlet Green's function on B_rho(x0):
//   Delta G = -(1/m(x1)) 1_{x1} on B_rho(x0),  G = 0 on the exterior boundary.
// g must contain B_rho(x0) together with that boundary layer; nonnegativity
// is asserted. Defined on the closed ball.
VertexFunction green_dirichlet(const WeightedGraph& g, Vertex x0, int rho, Vertex x1,
                               SolveOptions opts = {});

enum class GreenVerdict { Converged, Growing, BudgetExceeded };

struct GreenLimitRow {
  int rho = 0;
  std::vector<double> window_values;   // on the fixed window, ball order
  double increment = -1.0;             // sup over the window vs previous row; -1 on the first
};

struct GreenLimitResult {
  std::vector<std::string> window_labels;
  std::vector<GreenLimitRow> rows;
  GreenVerdict verdict = GreenVerdict::Growing;
  std::string note;
};

// Growing-ball Green table: per rho solves on B_rho(root) and reports the
// sup-increment over a fixed window. Stalling increments diagnose
// non-parabolicity; a linearly growing table diagnoses parabolicity.
GreenLimitResult green_limit(const gen::GraphGenerator& g, const gen::GenVertex& x1,
                             const std::vector<int>& rho_schedule, double stall_eps,
                             int window_radius = -1, SolveOptions opts = {});

struct GradientField {
  VertexFunction vertex_gamma;          // Gamma(u)(x) where computable
  std::vector<double> edge_gradient;    // |u(x)-u(y)| aligned with g.edges()
};

GradientField gradient_field(const WeightedGraph& g, const VertexFunction& u);

struct EdgeId {
  Vertex x = -1, y = -1;  // oriented x in the probed set, y its neighbor
  double gradient = 0.0;
};

struct MaxGradientReport {
  EdgeId max_over_set;       // max |grad_xy u| over x in W, y ~ x
  EdgeId max_over_boundary;  // same over x in the interior boundary of W
  bool holds = false;        // maxima equal within eq_tol
  double eq_tol = 1e-12;
  bool curvature_ok = true;  // kappa >= -curv_tol on edges inside W minus its boundary
  std::vector<curv::CurvatureViolation> curvature_violations;
  double harmonic_residual = 0.0;
};

struct MaxGradientOptions {
  double eq_tol = 1e-12;
  double curvature_tol = 1e-9;
  bool verify_curvature = true;
};

// Gradient maximum principle harness: u must be residual-certified harmonic
// on W minus its interior boundary (DomainError otherwise); the curvature
// precondition is checked and reported, and the maxima are compared either way.
MaxGradientReport gradient_max_principle_check(const WeightedGraph& g,
                                               const std::vector<Vertex>& W,
                                               const VertexFunction& u,
                                               MaxGradientOptions opts = {});

struct SubharmonicityRow {
  Vertex vertex = 0;
  double laplacian_of_gamma = 0.0;
  bool flagged = false;
};

struct SubharmonicityReport {
  std::vector<SubharmonicityRow> rows;
  double tol = 0.0;
  bool all_clear = true;
  double harmonic_residual = 0.0;
};

// Delta Gamma(u)(x) per region vertex; for harmonic u this equals
// 2 Gamma_2(u)(x), which CD(0,infty) forces nonnegative. u must be
// residual-certified harmonic on the region.
SubharmonicityReport subharmonicity_check(const WeightedGraph& g, const VertexFunction& u,
                                          const std::vector<Vertex>& region, double tol = 1e-9);

struct UniqueContinuationProbe {
  double max_annulus_gradient = 0.0;
  double max_inner_sphere_gradient = 0.0;
  bool holds = false;
  double tol = 0.0;
};

// For u vanishing on B_{R0+1}(root) and harmonic on the probe ball: the
// gradient maximum over the annulus must match the (zero) gradient on S_R0.
UniqueContinuationProbe unique_continuation_probe(const RootedBall& probe_ball, int R0,
                                                  const VertexFunction& u, double tol = 1e-9);

struct DimensionCertificate {
  std::string x0;
  int R0 = 0;
  curv::CurvatureMode mode = curv::CurvatureMode::Ollivier;
  int probe_radius = 0;
  std::size_t sphere_count = 0;  // #S_{R0+1}(x0): the certified dimension bound
  curv::CurvatureOutsideReport curvature;
  bool granted = false;
  std::optional<UniqueContinuationProbe> continuation;
};

// Verifies nonnegative curvature outside B_R0(x0) on the
// probe region and, when it passes, certifies dim H_0 <= #S_{R0+1}(x0).
// R0 = -1 makes the excluded set empty. Refusal is a result, not an error.
DimensionCertificate dimension_certificate(const gen::GraphGenerator& g,
                                           const gen::GenVertex& x0, int R0,
                                           curv::CurvatureMode mode, int probe_radius,
                                           double curvature_tol = 1e-9,
                                           std::size_t vertex_budget = gen::kDefaultVertexBudget);

struct DecayRow {
  int radius = 0;
  double max_gamma = 0.0;
  double max_edge_gradient = 0.0;
};

// Per-radius maxima of Gamma(u) on S_r and |grad_e u| on edges leaving S_r;
// trend evidence, no verdict. u must cover B_{max(radii)+1}.
std::vector<DecayRow> gradient_decay_profile(const RootedBall& ball, const VertexFunction& u,
                                             const std::vector<int>& radii);

}  // namespace curvgraph::harm
