#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "curvgraph/curvature.hpp"
#include "curvgraph/ends.hpp"
#include "curvgraph/generator.hpp"
#include "curvgraph/ghlimit.hpp"
#include "curvgraph/harmonic.hpp"

namespace curvgraph::report {

// 12 significant digits, locale-independent; shared by the CSV and JSON paths
// so identical runs emit identical bytes.
std::string format_double(double v);

std::string csv_line(const std::vector<std::string>& cells);

void write_file(const std::string& path, const std::string& content);

nlohmann::json to_json(const curv::BakryEmeryResult& r, const WeightedGraph& g);
nlohmann::json to_json(const curv::OllivierResult& r, const WeightedGraph& g);
nlohmann::json to_json(const curv::CurvatureOutsideReport& r);
nlohmann::json to_json(const gen::BoundedGeometryReport& r);
nlohmann::json to_json(const harm::HarmonicSolution& s, const WeightedGraph& g);
nlohmann::json to_json(const harm::GreenLimitResult& r);
nlohmann::json to_json(const harm::MaxGradientReport& r, const WeightedGraph& g);
nlohmann::json to_json(const harm::SubharmonicityReport& r, const WeightedGraph& g);
nlohmann::json to_json(const harm::DimensionCertificate& c);
nlohmann::json to_json(const ends::EndsResult& r);
nlohmann::json to_json(const ends::EndClassification& c);
nlohmann::json to_json(const ends::EndCountResult& r);
nlohmann::json to_json(const ends::SeparatingBasis& b);
nlohmann::json to_json(const gh::ConvergenceReport& r);
nlohmann::json to_json(const gh::FunctionConvergenceReport& r);
nlohmann::json to_json(const gh::SemicontinuityReport& r);

std::string green_limit_csv(const harm::GreenLimitResult& r);
std::string decay_csv(const std::vector<harm::DecayRow>& rows);
std::string barrier_trace_csv(const ends::EndClassification& c);

}  // namespace curvgraph::report
