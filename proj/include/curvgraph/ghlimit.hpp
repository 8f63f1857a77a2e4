#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curvgraph/curvature.hpp"
#include "curvgraph/generator.hpp"
#include "curvgraph/graph.hpp"

namespace curvgraph::gh {

// Root-preserving combinatorial isomorphism b1 -> b2, found by depth-layered
// backtracking with (depth, degree, neighbor-profile) pruning; weights are
// not compared unless weight_eps is set, in which case the search only
// accepts mappings with |m1 - m2| and |w1 - w2| within eps everywhere.
// Returns the vertex mapping or nullopt. ResourceError past the node budget.
std::optional<std::vector<Vertex>> rooted_isomorphism(const RootedBall& b1, const RootedBall& b2,
                                                      std::optional<double> weight_eps = {},
                                                      long node_budget = 5000000);

std::vector<RootedBall> materialize_sequence(const gen::RootedGeneratorSequence& seq,
                                             const std::vector<int>& indices, int radius,
                                             std::size_t vertex_budget = gen::kDefaultVertexBudget);

enum class ConvergenceVerdict { Converged, NotStabilized, WeightsDiverge };

struct IndexEntry {
  int index = 0;
  bool isomorphic = false;               // root-isomorphic to the last tested ball
  double m_deviation = -1.0;             // through the chosen isomorphism
  double w_deviation = -1.0;
  std::vector<Vertex> map_from_target;   // target vertex -> this ball's vertex
};

struct ConvergenceReport {
  int radius = 0;
  double eps = 0.0;
  std::vector<IndexEntry> entries;
  std::optional<int> stabilization_index;         // combinatorial, least tested N
  std::optional<int> weight_stabilization_index;  // deviations <= eps from here on
  ConvergenceVerdict verdict = ConvergenceVerdict::NotStabilized;
};

// Stabilization of B_radius(p_i) against the last tested index, plus weight
// deviation tables through the found isomorphisms. The report only speaks for
// the tested indices.
ConvergenceReport pgh_converges(const std::vector<RootedBall>& balls,
                                const std::vector<int>& indices, int radius, double eps);

struct LimitBall {
  RootedBall ball;              // weights of the last tested index
  std::vector<int> provenance;  // indices the verdict rests on
};

// Refuses (DomainError) unless pgh_converges says Converged.
LimitBall pgh_limit(const std::vector<RootedBall>& balls, const std::vector<int>& indices,
                    int radius, double eps);

struct FunctionConvergenceReport {
  std::vector<double> deviations;        // per index; -1 where no isomorphism exists
  std::optional<int> stabilization_index;
  bool converged = false;
  double eps = 0.0;
};

// max_{B_R(p_inf)} |u_i o phi^-1 - u| per index, through the isomorphisms the
// convergence report selected; u_limit lives on the last tested ball.
FunctionConvergenceReport function_convergence(const ConvergenceReport& convergence,
                                               const std::vector<RootedBall>& balls,
                                               const std::vector<VertexFunction>& u_list,
                                               const VertexFunction& u_limit, double eps);

struct SemicontinuityRow {
  std::string where;                // "root" for BE, edge label for Ollivier
  std::vector<double> tail_values;  // per tested tail index
  double limit_value = 0.0;
  double min_tail = 0.0;
  bool holds = false;
};

struct SemicontinuityReport {
  curv::CurvatureMode mode = curv::CurvatureMode::Ollivier;
  double tol = 0.0;
  std::vector<SemicontinuityRow> rows;
  bool holds = false;
};

// Curvature lower bounds survive the limit: the limit ball's curvature at the
// root (BE) or on each root edge (Ollivier) must be at least the tail minimum
// minus tol. Balls must have radius >= 2 (BE) or >= 3 (Ollivier) and the
// convergence report must say Converged.
SemicontinuityReport curvature_semicontinuity_check(const ConvergenceReport& convergence,
                                                    const std::vector<RootedBall>& balls,
                                                    curv::CurvatureMode mode, double tol = 1e-6);

}  // namespace curvgraph::gh
