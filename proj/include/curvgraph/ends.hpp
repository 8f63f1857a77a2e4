#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curvgraph/generator.hpp"
#include "curvgraph/graph.hpp"
#include "curvgraph/harmonic.hpp"

namespace curvgraph::ends {

// One end of the generated graph w.r.t. omega, approximated as a connected
// component of B_probe \ omega that reaches the probe sphere.
struct End {
  std::vector<gen::GenVertex> omega;
  gen::GenVertex representative;            // smallest vertex of the component
  std::vector<std::string> component_labels;  // component inside the probe ball
  int probe_radius = 0;
  bool touches_probe_sphere = true;
};

struct EndsResult {
  std::vector<End> ends;
  int probe_radius = 0;
  bool stable = false;  // same count when probed at probe_radius - 2
};

// Components of B_probe(root) \ omega touching S_probe; finite components are
// dropped. Omega must stay clear of the probe sphere.
EndsResult ends_wrt(const gen::GraphGenerator& g, const std::vector<gen::GenVertex>& omega,
                    int probe_radius, std::size_t vertex_budget = gen::kDefaultVertexBudget);

// Barrier f_rho of an end: harmonic on the component within B_{rho-1}, equal
// to 1 where the component meets omega and 0 on its depth-rho sphere layer.
struct BarrierSolution {
  RootedBall ball;       // B_rho(root); values are indexed against ball.graph
  VertexFunction values;
  std::vector<Vertex> interior;
  double residual = 0.0;
};

BarrierSolution barrier(const gen::GraphGenerator& g, const End& end, int rho,
                        harm::SolveOptions opts = {});

enum class EndVerdict { Parabolic, NonParabolic, Inconclusive };

struct SentinelTrace {
  std::string label;
  int depth = 0;
  std::vector<double> values;  // one per schedule entry
};

struct EndClassification {
  EndVerdict verdict = EndVerdict::Inconclusive;
  std::vector<int> schedule;
  std::vector<SentinelTrace> sentinels;
  double limit_estimate = 0.0;   // max sentinel value at the last rho
  double last_increment = 0.0;   // max over sentinels between the last two rhos
  double margin = 0.0;
  double stall_eps = 0.0;
  bool monotone = true;          // barrier trace non-decreasing up to solver slack
  std::string reason;
};

// Sentinels sit at depths probe/2, 3*probe/4 and probe-1 inside the end.
// Non-parabolic: trace stalls below 1 - margin. Parabolic: trace runs against
// 1 - margin while the increments keep shrinking. Everything else, including
// any schedule shorter than 3, stays inconclusive.
EndClassification classify_end(const gen::GraphGenerator& g, const End& end,
                               const std::vector<int>& rho_schedule, double margin = 0.05,
                               double stall_eps = 1e-3, harm::SolveOptions opts = {});

struct EndCountStage {
  std::vector<std::string> omega_labels;
  int n_ends = 0;
  int n_nonparabolic = 0;
  int n_parabolic = 0;
  int n_inconclusive = 0;
  bool stable = false;
  std::vector<EndClassification> classifications;
};

struct EndCountResult {
  std::vector<EndCountStage> stages;
  bool count_monotone = true;  // N non-decreasing along the exhaustion
};

EndCountResult count_ends(const gen::GraphGenerator& g,
                          const std::vector<std::vector<gen::GenVertex>>& omega_exhaustion,
                          int probe_radius, const std::vector<int>& rho_schedule,
                          double margin = 0.05, double stall_eps = 1e-3,
                          harm::SolveOptions opts = {});

enum class BasisStatus { Ok, ConstantsOnly, Refused };

struct SeparatingBasis {
  BasisStatus status = BasisStatus::Refused;
  std::string note;
  RootedBall ball;  // B_{rho_green + 1}(root)
  std::vector<std::string> end_representatives;  // non-parabolic ends, in order
  std::vector<VertexFunction> functions;         // h_i on the ball
  std::vector<std::string> sentinel_labels;      // one sentinel per end
  std::vector<std::vector<double>> gram;         // gram[i][j] = h_i(sentinel_j)
  double max_identity_deviation = 0.0;
  std::vector<double> sup_norms;                 // ||h_i|| over the ball, diagnostic vs 1
};

// Bounded harmonic functions separating the non-parabolic ends: for each such
// end, h_i = g_i + sum_x Delta g_i(x) m(x) Green_rho(x, .) with g_i the
// indicator of the end's closure. With one non-parabolic end the basis is the
// constants; with none the construction is refused.
SeparatingBasis separating_harmonics(const gen::GraphGenerator& g,
                                     const std::vector<gen::GenVertex>& omega, int probe_radius,
                                     int rho_green, int sentinel_depth = -1,
                                     const std::vector<int>& classify_schedule = {},
                                     double classify_stall_eps = 2e-2,
                                     harm::SolveOptions opts = {});

}  // namespace curvgraph::ends
