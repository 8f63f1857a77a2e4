#include "curvgraph/report.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include "curvgraph/errors.hpp"

namespace curvgraph::report {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw ResourceError("cannot create directory '" + p.parent_path().string() + "'");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ResourceError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw ResourceError("short write to '" + path + "'");
}

namespace {

json function_values(const VertexFunction& f, const WeightedGraph& g) {
  json arr = json::array();
  for (Vertex v = 0; v < g.order(); ++v)
    if (f.defined(v)) arr.push_back({{"id", g.label(v)}, {"value", f.at(v)}});
  return arr;
}

json violations_json(const std::vector<curv::CurvatureViolation>& vs) {
  json arr = json::array();
  for (const auto& v : vs) arr.push_back({{"where", v.where}, {"curvature", v.value}});
  return arr;
}

const char* verdict_name(ends::EndVerdict v) {
  switch (v) {
    case ends::EndVerdict::Parabolic: return "parabolic";
    case ends::EndVerdict::NonParabolic: return "non-parabolic";
    case ends::EndVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

}  // namespace

json to_json(const curv::BakryEmeryResult& r, const WeightedGraph& g) {
  json j;
  j["vertex"] = g.label(r.vertex);
  j["n"] = std::isfinite(r.n_param) ? json(r.n_param) : json("inf");
  j["curvature"] = r.degenerate ? json("inf") : json(r.curvature);
  j["tolerance"] = r.tolerance;
  j["degenerate"] = r.degenerate;
  if (!r.degenerate) j["witness"] = function_values(r.witness, g);
  return j;
}

json to_json(const curv::OllivierResult& r, const WeightedGraph& g) {
  json j;
  j["edge"] = {g.label(r.x), g.label(r.y)};
  j["kappa"] = r.kappa;
  j["lp_status"] = r.optimal ? "optimal" : "failed";
  j["duality_gap"] = r.duality_gap;
  j["optimizer"] = function_values(r.optimizer, g);
  return j;
}

json to_json(const curv::CurvatureOutsideReport& r) {
  json j;
  j["mode"] = (r.mode == curv::CurvatureMode::BakryEmery) ? "bakry-emery" : "ollivier";
  j["probe_radius"] = r.probe_radius;
  j["tolerance"] = r.tolerance;
  j["checked"] = r.checked;
  j["pass"] = r.pass;
  j["violations"] = violations_json(r.violations);
  return j;
}

json to_json(const gen::BoundedGeometryReport& r) {
  json j;
  j["pass"] = r.pass;
  j["constant"] = r.constant;
  j["sample_radius"] = r.sample_radius;
  auto list = [](const std::vector<std::pair<std::string, double>>& v) {
    json arr = json::array();
    for (const auto& [where, value] : v) arr.push_back({{"where", where}, {"value", value}});
    return arr;
  };
  j["degree_violations"] = list(r.degree_violations);
  j["vertex_weight_violations"] = list(r.vertex_weight_violations);
  j["edge_weight_violations"] = list(r.edge_weight_violations);
  return j;
}

json to_json(const harm::HarmonicSolution& s, const WeightedGraph& g) {
  json j;
  j["values"] = function_values(s.values, g);
  j["residual"] = s.residual;
  j["iterations"] = s.iterations;
  j["method"] = s.method;
  json interior = json::array(), boundary = json::array();
  for (Vertex v : s.interior) interior.push_back(g.label(v));
  for (Vertex v : s.boundary) boundary.push_back(g.label(v));
  j["interior"] = interior;
  j["boundary"] = boundary;
  return j;
}

json to_json(const harm::GreenLimitResult& r) {
  json j;
  switch (r.verdict) {
    case harm::GreenVerdict::Converged: j["verdict"] = "converged"; break;
    case harm::GreenVerdict::Growing: j["verdict"] = "growing"; break;
    case harm::GreenVerdict::BudgetExceeded: j["verdict"] = "budget-exceeded"; break;
  }
  if (!r.note.empty()) j["note"] = r.note;
  j["window"] = r.window_labels;
  json rows = json::array();
  for (const auto& row : r.rows) {
    json jr;
    jr["rho"] = row.rho;
    jr["values"] = row.window_values;
    if (row.increment >= 0.0) jr["increment"] = row.increment;
    rows.push_back(std::move(jr));
  }
  j["rows"] = rows;
  return j;
}

json to_json(const harm::MaxGradientReport& r, const WeightedGraph& g) {
  auto edge = [&](const harm::EdgeId& e) {
    json je;
    if (e.x >= 0) {
      je["x"] = g.label(e.x);
      je["y"] = g.label(e.y);
      je["gradient"] = e.gradient;
    }
    return je;
  };
  json j;
  j["max_over_set"] = edge(r.max_over_set);
  j["max_over_boundary"] = edge(r.max_over_boundary);
  j["holds"] = r.holds;
  j["eq_tol"] = r.eq_tol;
  j["curvature_ok"] = r.curvature_ok;
  j["curvature_violations"] = violations_json(r.curvature_violations);
  j["harmonic_residual"] = r.harmonic_residual;
  return j;
}

json to_json(const harm::SubharmonicityReport& r, const WeightedGraph& g) {
  json j;
  j["tol"] = r.tol;
  j["all_clear"] = r.all_clear;
  j["harmonic_residual"] = r.harmonic_residual;
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"vertex", g.label(row.vertex)},
                    {"laplacian_of_gamma", row.laplacian_of_gamma},
                    {"flagged", row.flagged}});
  j["rows"] = rows;
  return j;
}

json to_json(const harm::DimensionCertificate& c) {
  json j;
  j["x0"] = c.x0;
  j["R0"] = c.R0;
  j["mode"] = (c.mode == curv::CurvatureMode::BakryEmery) ? "bakry-emery" : "ollivier";
  j["probe_radius"] = c.probe_radius;
  j["sphere_count"] = c.sphere_count;
  j["dimension_bound"] = c.sphere_count;
  j["granted"] = c.granted;
  j["curvature"] = to_json(c.curvature);
  if (c.continuation) {
    j["continuation"] = {{"max_annulus_gradient", c.continuation->max_annulus_gradient},
                         {"max_inner_sphere_gradient", c.continuation->max_inner_sphere_gradient},
                         {"holds", c.continuation->holds},
                         {"tol", c.continuation->tol}};
  }
  return j;
}

json to_json(const ends::EndsResult& r) {
  json j;
  j["probe_radius"] = r.probe_radius;
  j["stable"] = r.stable;
  j["count"] = r.ends.size();
  json arr = json::array();
  for (const auto& e : r.ends) {
    arr.push_back({{"representative", e.representative.to_string()},
                   {"component_size", e.component_labels.size()},
                   {"touches_probe_sphere", e.touches_probe_sphere}});
  }
  j["ends"] = arr;
  return j;
}

json to_json(const ends::EndClassification& c) {
  json j;
  j["verdict"] = verdict_name(c.verdict);
  j["reason"] = c.reason;
  j["schedule"] = c.schedule;
  j["limit_estimate"] = c.limit_estimate;
  j["last_increment"] = c.last_increment;
  j["margin"] = c.margin;
  j["stall_eps"] = c.stall_eps;
  j["monotone"] = c.monotone;
  json sentinels = json::array();
  for (const auto& s : c.sentinels)
    sentinels.push_back({{"label", s.label}, {"depth", s.depth}, {"values", s.values}});
  j["sentinels"] = sentinels;
  return j;
}

json to_json(const ends::EndCountResult& r) {
  json j;
  j["count_monotone"] = r.count_monotone;
  json stages = json::array();
  for (const auto& s : r.stages) {
    json js;
    js["omega"] = s.omega_labels;
    js["n_ends"] = s.n_ends;
    js["n_nonparabolic"] = s.n_nonparabolic;
    js["n_parabolic"] = s.n_parabolic;
    js["n_inconclusive"] = s.n_inconclusive;
    js["stable"] = s.stable;
    json cls = json::array();
    for (const auto& c : s.classifications) cls.push_back(to_json(c));
    js["classifications"] = cls;
    stages.push_back(std::move(js));
  }
  j["stages"] = stages;
  return j;
}

json to_json(const ends::SeparatingBasis& b) {
  json j;
  switch (b.status) {
    case ends::BasisStatus::Ok: j["status"] = "ok"; break;
    case ends::BasisStatus::ConstantsOnly: j["status"] = "constants-only"; break;
    case ends::BasisStatus::Refused: j["status"] = "refused"; break;
  }
  j["note"] = b.note;
  j["ends"] = b.end_representatives;
  j["sentinels"] = b.sentinel_labels;
  j["gram"] = b.gram;
  j["max_identity_deviation"] = b.max_identity_deviation;
  j["sup_norms"] = b.sup_norms;
  return j;
}

json to_json(const gh::ConvergenceReport& r) {
  json j;
  j["radius"] = r.radius;
  j["eps"] = r.eps;
  switch (r.verdict) {
    case gh::ConvergenceVerdict::Converged: j["verdict"] = "converged"; break;
    case gh::ConvergenceVerdict::NotStabilized: j["verdict"] = "not-stabilized"; break;
    case gh::ConvergenceVerdict::WeightsDiverge: j["verdict"] = "weights-diverge"; break;
  }
  if (r.stabilization_index) j["stabilization_index"] = *r.stabilization_index;
  if (r.weight_stabilization_index)
    j["weight_stabilization_index"] = *r.weight_stabilization_index;
  j["note"] = "statements cover the tested indices only";
  json entries = json::array();
  for (const auto& e : r.entries) {
    json je;
    je["index"] = e.index;
    je["isomorphic"] = e.isomorphic;
    if (e.isomorphic) {
      je["m_deviation"] = e.m_deviation;
      je["w_deviation"] = e.w_deviation;
    }
    entries.push_back(std::move(je));
  }
  j["entries"] = entries;
  return j;
}

json to_json(const gh::FunctionConvergenceReport& r) {
  json j;
  j["eps"] = r.eps;
  j["converged"] = r.converged;
  if (r.stabilization_index) j["stabilization_index"] = *r.stabilization_index;
  j["deviations"] = r.deviations;
  return j;
}

json to_json(const gh::SemicontinuityReport& r) {
  json j;
  j["mode"] = (r.mode == curv::CurvatureMode::BakryEmery) ? "bakry-emery" : "ollivier";
  j["tol"] = r.tol;
  j["holds"] = r.holds;
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"where", row.where},
                    {"tail_values", row.tail_values},
                    {"limit_value", row.limit_value},
                    {"min_tail", row.min_tail},
                    {"holds", row.holds}});
  }
  j["rows"] = rows;
  return j;
}

std::string green_limit_csv(const harm::GreenLimitResult& r) {
  std::string out = csv_line({"rho", "vertex", "value"});
  for (const auto& row : r.rows)
    for (std::size_t i = 0; i < row.window_values.size(); ++i)
      out += csv_line({std::to_string(row.rho), r.window_labels[i],
                       format_double(row.window_values[i])});
  return out;
}

std::string decay_csv(const std::vector<harm::DecayRow>& rows) {
  std::string out = csv_line({"r", "max_gamma", "max_edge_grad"});
  for (const auto& row : rows)
    out += csv_line({std::to_string(row.radius), format_double(row.max_gamma),
                     format_double(row.max_edge_gradient)});
  return out;
}

std::string barrier_trace_csv(const ends::EndClassification& c) {
  std::string out = csv_line({"rho", "sentinel_id", "value"});
  for (std::size_t k = 0; k < c.schedule.size(); ++k)
    for (const auto& s : c.sentinels)
      out += csv_line({std::to_string(c.schedule[k]), s.label, format_double(s.values[k])});
  return out;
}

}  // namespace curvgraph::report
