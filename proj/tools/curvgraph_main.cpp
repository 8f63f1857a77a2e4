// curvgraph: discrete curvature, harmonic functions, ends and pointed
// Gromov-Hausdorff checks on weighted graphs and finitely-presented
// infinite graphs.
//
// Exit codes: 0 success, 1 verdict failure (refused certificate, failed
// check), 2 usage or input error, 3 resource limit.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <tuple>

#include "CLI11.hpp"
#include "json.hpp"

#include "curvgraph/corpus.hpp"
#include "curvgraph/curvature.hpp"
#include "curvgraph/ends.hpp"
#include "curvgraph/errors.hpp"
#include "curvgraph/generator.hpp"
#include "curvgraph/ghlimit.hpp"
#include "curvgraph/graph_io.hpp"
#include "curvgraph/harmonic.hpp"
#include "curvgraph/parallel.hpp"
#include "curvgraph/report.hpp"

namespace {

using namespace curvgraph;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

struct OutputOptions {
  bool csv = false;
  bool json_errors = false;
  std::string out_path;  // empty = stdout
};

void emit(const OutputOptions& opts, const std::string& text) {
  if (opts.out_path.empty())
    std::cout << text;
  else
    report::write_file(opts.out_path, text);
}

void emit_json(const OutputOptions& opts, const json& j) { emit(opts, j.dump(2) + "\n"); }

std::size_t vertex_budget() {
  if (const char* env = std::getenv("CURVGRAPH_BUDGET")) {
    const long v = std::atol(env);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return gen::kDefaultVertexBudget;
}

std::vector<int> parse_schedule(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    out.push_back(std::stoi(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  if (out.empty()) throw ParseError("empty schedule");
  return out;
}

std::vector<int> parse_indices(const std::string& text) {
  // "4..12" or "4,6,8"
  const std::size_t dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (hi < lo) throw ParseError("empty index range");
    std::vector<int> out;
    for (int i = lo; i <= hi; ++i) out.push_back(i);
    return out;
  }
  return parse_schedule(text);
}

std::vector<gen::GenVertex> load_omega(const std::string& path, const gen::GraphGenerator& g) {
  const json j = json::parse(io::read_file(path));
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
    throw ParseError(path + ": expected {\"vertices\": [token, ...]}");
  std::vector<gen::GenVertex> out;
  for (const json& tok : j["vertices"]) out.push_back(g.vertex_from_json(tok.dump()));
  return out;
}

curv::CurvatureMode parse_mode(const std::string& mode) {
  if (mode == "ollivier") return curv::CurvatureMode::Ollivier;
  if (mode == "be" || mode == "bakry-emery") return curv::CurvatureMode::BakryEmery;
  throw ParseError("mode must be 'ollivier' or 'be'");
}

int run(int argc, char** argv) {
  CLI::App app{"discrete curvature, harmonic functions and ends on weighted graphs"};
  app.require_subcommand(1);

  OutputOptions out;
  app.add_flag("--csv", out.csv, "tabular output where supported");
  app.add_flag("--json-errors", out.json_errors, "machine-readable errors on stderr");
  app.add_option("--out", out.out_path, "write the report to a file instead of stdout");

  // ---- curvature ------------------------------------------------------------
  auto* curvature = app.add_subcommand("curvature", "pointwise curvature computations");
  curvature->require_subcommand(1);
  curvature->fallthrough();

  std::string be_graph, be_vertex, be_n = "inf";
  double be_tol = 1e-8;
  bool be_all = false;
  auto* be = curvature->add_subcommand("be", "Bakry-Emery curvature at a vertex");
  be->fallthrough();
  be->add_option("--graph", be_graph, "graph JSON file")->required();
  be->add_option("--vertex", be_vertex, "vertex id");
  be->add_flag("--all", be_all, "sweep every vertex");
  be->add_option("--n", be_n, "dimension parameter (default inf)");
  be->add_option("--tol", be_tol, "bisection tolerance");

  std::string ol_graph, ol_edge;
  bool ol_all = false;
  auto* ol = curvature->add_subcommand("ollivier", "Ollivier curvature of an edge");
  ol->fallthrough();
  ol->add_option("--graph", ol_graph, "graph JSON file")->required();
  ol->add_option("--edge", ol_edge, "edge as u,v");
  ol->add_flag("--all", ol_all, "sweep every edge");

  std::string co_gen, co_omega, co_mode = "ollivier";
  int co_probe = 4;
  double co_tol = 1e-9;
  auto* co = curvature->add_subcommand("outside", "curvature sign outside a finite set");
  co->fallthrough();
  co->add_option("--gen", co_gen, "generator JSON file")->required();
  co->add_option("--omega", co_omega, "omega JSON file ({\"vertices\": [tokens]})");
  co->add_option("--mode", co_mode, "ollivier | be");
  co->add_option("--probe", co_probe, "probe radius");
  co->add_option("--tol", co_tol, "negativity tolerance");

  // ---- harmonic ---------------------------------------------------------------
  auto* harmonic = app.add_subcommand("harmonic", "Dirichlet problems and gradient checks");
  harmonic->require_subcommand(1);
  harmonic->fallthrough();

  std::string hs_graph, hs_boundary;
  auto* hs = harmonic->add_subcommand("solve", "Dirichlet solve with prescribed boundary");
  hs->fallthrough();
  hs->add_option("--graph", hs_graph, "graph JSON file")->required();
  hs->add_option("--boundary", hs_boundary, "boundary values JSON file")->required();

  std::string hg_gen, hg_source = "", hg_schedule = "4,6,8";
  double hg_stall = 1e-2;
  auto* hg = harmonic->add_subcommand("green", "growing-ball Green's function table");
  hg->fallthrough();
  hg->add_option("--gen", hg_gen, "generator JSON file")->required();
  hg->add_option("--source", hg_source, "source vertex token (default: root)");
  hg->add_option("--rho-schedule", hg_schedule, "comma-separated radii");
  hg->add_option("--stall-eps", hg_stall, "stall threshold");

  std::string hd_gen, hd_x0 = "", hd_mode = "ollivier";
  int hd_r0 = 1, hd_probe = 4;
  auto* hd = harmonic->add_subcommand("dimbound", "dimension bound certificate");
  hd->fallthrough();
  hd->add_option("--gen", hd_gen, "generator JSON file")->required();
  hd->add_option("--x0", hd_x0, "center vertex token (default: root)");
  hd->add_option("--R0", hd_r0, "excluded ball radius (-1 for empty omega)");
  hd->add_option("--mode", hd_mode, "ollivier | be");
  hd->add_option("--probe", hd_probe, "probe radius");

  std::string hm_graph, hm_w, hm_u;
  auto* hm = harmonic->add_subcommand("maxgrad", "gradient maximum principle check");
  hm->fallthrough();
  hm->add_option("--graph", hm_graph, "graph JSON file")->required();
  hm->add_option("--w", hm_w, "vertex set JSON file for W")->required();
  hm->add_option("--u", hm_u, "function JSON file")->required();

  std::string de_gen, de_u, de_radii = "1,2,3";
  int de_ball = -1;
  auto* de = harmonic->add_subcommand("decay", "gradient decay profile of a function");
  de->fallthrough();
  de->add_option("--gen", de_gen, "generator JSON file")->required();
  de->add_option("--u", de_u, "function JSON file (ids = ball labels)")->required();
  de->add_option("--radii", de_radii, "comma-separated radii");
  de->add_option("--ball", de_ball, "ball radius (default max(radii)+1)");

  // ---- ends ---------------------------------------------------------------
  auto* ends_cmd = app.add_subcommand("ends", "ends and parabolicity");
  ends_cmd->require_subcommand(1);
  ends_cmd->fallthrough();

  std::string ec_gen, ec_omega;
  int ec_probe = 10;
  auto* ec = ends_cmd->add_subcommand("count", "ends w.r.t. a finite set");
  ec->fallthrough();
  ec->add_option("--gen", ec_gen, "generator JSON file")->required();
  ec->add_option("--omega", ec_omega, "omega JSON file")->required();
  ec->add_option("--probe", ec_probe, "probe radius");

  std::string el_gen, el_omega, el_schedule = "4,6,8,10,12";
  int el_probe = 3;
  double el_margin = 0.05, el_stall = 1e-3;
  auto* el = ends_cmd->add_subcommand("classify", "parabolic / non-parabolic verdicts");
  el->fallthrough();
  el->add_option("--gen", el_gen, "generator JSON file")->required();
  el->add_option("--omega", el_omega, "omega JSON file")->required();
  el->add_option("--schedule", el_schedule, "barrier rho schedule");
  el->add_option("--probe", el_probe, "ends probe radius");
  el->add_option("--margin", el_margin, "distance from 1 that counts as 'below'");
  el->add_option("--stall-eps", el_stall, "stall threshold");

  std::string eb_gen, eb_omega;
  int eb_probe = 10, eb_rho = 12, eb_sentinel = -1;
  auto* eb = ends_cmd->add_subcommand("basis", "end-separating harmonic basis");
  eb->fallthrough();
  eb->add_option("--gen", eb_gen, "generator JSON file")->required();
  eb->add_option("--omega", eb_omega, "omega JSON file")->required();
  eb->add_option("--probe", eb_probe, "ends probe radius");
  eb->add_option("--rho", eb_rho, "Green's function radius");
  eb->add_option("--sentinel-depth", eb_sentinel, "gram sentinel depth (default probe-2)");

  // ---- gh -------------------------------------------------------------------
  auto* gh_cmd = app.add_subcommand("gh", "discrete pointed Gromov-Hausdorff checks");
  gh_cmd->require_subcommand(1);
  gh_cmd->fallthrough();

  std::string gc_gen, gc_roots, gc_indices = "4..12";
  int gc_radius = 3;
  double gc_eps = 1e-3;
  auto* gc = gh_cmd->add_subcommand("check", "ball stabilization along a rooted sequence");
  gc->fallthrough();
  gc->add_option("--gen", gc_gen, "generator JSON file")->required();
  gc->add_option("--roots", gc_roots, "root rule JSON file")->required();
  gc->add_option("--indices", gc_indices, "index list: 4..12 or 4,6,8");
  gc->add_option("--radius", gc_radius, "ball radius");
  gc->add_option("--eps", gc_eps, "weight deviation tolerance");

  std::string gl_gen, gl_roots, gl_indices = "4..12";
  int gl_radius = 3;
  double gl_eps = 1e-3;
  auto* gl = gh_cmd->add_subcommand("limit", "extract the limit ball of a converged sequence");
  gl->fallthrough();
  gl->add_option("--gen", gl_gen, "generator JSON file")->required();
  gl->add_option("--roots", gl_roots, "root rule JSON file")->required();
  gl->add_option("--indices", gl_indices, "index list");
  gl->add_option("--radius", gl_radius, "ball radius");
  gl->add_option("--eps", gl_eps, "weight deviation tolerance");

  std::string gs_gen, gs_roots, gs_indices = "4..12", gs_mode = "ollivier";
  double gs_eps = 1e-3, gs_tol = 1e-6;
  auto* gs = gh_cmd->add_subcommand("semicontinuity", "curvature lower bound in the limit");
  gs->fallthrough();
  gs->add_option("--gen", gs_gen, "generator JSON file")->required();
  gs->add_option("--roots", gs_roots, "root rule JSON file")->required();
  gs->add_option("--indices", gs_indices, "index list");
  gs->add_option("--mode", gs_mode, "ollivier | be");
  gs->add_option("--eps", gs_eps, "weight deviation tolerance");
  gs->add_option("--tol", gs_tol, "semicontinuity tolerance");

  // ---- corpus -----------------------------------------------------------------
  std::string corpus_out;
  auto* corpus_cmd = app.add_subcommand("corpus", "regenerate the standard report tree");
  corpus_cmd->fallthrough();
  corpus_cmd->add_option("--out", corpus_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);
  const std::size_t budget = vertex_budget();

  // ---- dispatch -----------------------------------------------------------
  if (be->parsed()) {
    const WeightedGraph g = io::load_graph_file(be_graph);
    const double n = (be_n == "inf") ? curv::kInfinity : std::stod(be_n);
    if (be_all) {
      std::vector<curv::BakryEmeryResult> results(g.order());
      parallel_for(g.order(), [&](std::size_t i) {
        results[i] = curv::bakry_emery_curvature(g, static_cast<Vertex>(i), n, be_tol);
      });
      if (out.csv) {
        std::string csv = report::csv_line({"vertex", "k"});
        for (const auto& r : results)
          csv += report::csv_line({g.label(r.vertex), report::format_double(r.curvature)});
        emit(out, csv);
      } else {
        json arr = json::array();
        for (const auto& r : results) arr.push_back(report::to_json(r, g));
        emit_json(out, arr);
      }
      return kExitOk;
    }
    if (be_vertex.empty()) throw ParseError("need --vertex or --all");
    const auto r = curv::bakry_emery_curvature(g, g.index_of(be_vertex), n, be_tol);
    emit_json(out, report::to_json(r, g));
    return kExitOk;
  }
  if (ol->parsed()) {
    const WeightedGraph g = io::load_graph_file(ol_graph);
    if (ol_all) {
      const auto& edges = g.edges();
      std::vector<curv::OllivierResult> results(edges.size());
      parallel_for(edges.size(), [&](std::size_t i) {
        results[i] = curv::ollivier_curvature(g, edges[i].u, edges[i].v);
      });
      if (out.csv) {
        std::string csv = report::csv_line({"u", "v", "kappa"});
        for (const auto& r : results)
          csv += report::csv_line({g.label(r.x), g.label(r.y), report::format_double(r.kappa)});
        emit(out, csv);
      } else {
        json arr = json::array();
        for (const auto& r : results) arr.push_back(report::to_json(r, g));
        emit_json(out, arr);
      }
      return kExitOk;
    }
    const std::size_t comma = ol_edge.find(',');
    if (comma == std::string::npos) throw ParseError("--edge expects u,v");
    const Vertex x = g.index_of(ol_edge.substr(0, comma));
    const Vertex y = g.index_of(ol_edge.substr(comma + 1));
    emit_json(out, report::to_json(curv::ollivier_curvature(g, x, y), g));
    return kExitOk;
  }
  if (co->parsed()) {
    const auto g = gen::GraphGenerator::from_json_file(co_gen);
    const auto omega = co_omega.empty() ? std::vector<gen::GenVertex>{} : load_omega(co_omega, g);
    const auto r = curv::curvature_outside(g, omega, parse_mode(co_mode), co_probe, co_tol, budget);
    emit_json(out, report::to_json(r));
    return r.pass ? kExitOk : kExitVerdict;
  }

  if (hs->parsed()) {
    const WeightedGraph g = io::load_graph_file(hs_graph);
    const VertexFunction boundary = io::load_vertex_function_file(hs_boundary, g);
    std::vector<Vertex> interior;
    for (Vertex v = 0; v < g.order(); ++v)
      if (!boundary.defined(v)) interior.push_back(v);
    const auto sol = harm::dirichlet_solve(g, interior, boundary);
    emit_json(out, report::to_json(sol, g));
    return kExitOk;
  }
  if (hg->parsed()) {
    const auto g = gen::GraphGenerator::from_json_file(hg_gen);
    const auto source = hg_source.empty() ? g.root() : g.vertex_from_json(hg_source);
    harm::SolveOptions opts;
    opts.vertex_budget = budget;
    const auto r = harm::green_limit(g, source, parse_schedule(hg_schedule), hg_stall, -1, opts);
    if (out.csv)
      emit(out, report::green_limit_csv(r));
    else
      emit_json(out, report::to_json(r));
    return (r.verdict == harm::GreenVerdict::BudgetExceeded) ? kExitResource : kExitOk;
  }
  if (hd->parsed()) {
    const auto g = gen::GraphGenerator::from_json_file(hd_gen);
    const auto x0 = hd_x0.empty() ? g.root() : g.vertex_from_json(hd_x0);
    const auto cert = harm::dimension_certificate(g, x0, hd_r0, parse_mode(hd_mode), hd_probe,
                                                  1e-9, budget);
    emit_json(out, report::to_json(cert));
    return cert.granted ? kExitOk : kExitVerdict;
  }
  if (hm->parsed()) {
    const WeightedGraph g = io::load_graph_file(hm_graph);
    const auto w_set = io::load_vertex_set_file(hm_w, g);
    const VertexFunction u = io::load_vertex_function_file(hm_u, g);
    const auto rep = harm::gradient_max_principle_check(g, w_set, u);
    emit_json(out, report::to_json(rep, g));
    return rep.holds ? kExitOk : kExitVerdict;
  }
  if (de->parsed()) {
    const auto g = gen::GraphGenerator::from_json_file(de_gen);
    const auto radii = parse_schedule(de_radii);
    const int rmax = *std::max_element(radii.begin(), radii.end());
    const int ball_radius = de_ball > 0 ? de_ball : rmax + 1;
    const RootedBall ball = gen::materialize_ball(g, g.root(), ball_radius, budget);
    const VertexFunction u = io::load_vertex_function_file(de_u, ball.graph);
    const auto rows = harm::gradient_decay_profile(ball, u, radii);
    emit(out, report::decay_csv(rows));
    return kExitOk;
  }

  if (ec->parsed()) {
    const auto g = gen::GraphGenerator::from_json_file(ec_gen);
    const auto r = ends::ends_wrt(g, load_omega(ec_omega, g), ec_probe, budget);
    emit_json(out, report::to_json(r));
    return kExitOk;
  }
  if (el->parsed()) {
    const auto g = gen::GraphGenerator::from_json_file(el_gen);
    const auto omega = load_omega(el_omega, g);
    harm::SolveOptions opts;
    opts.vertex_budget = budget;
    const auto er = ends::ends_wrt(g, omega, el_probe, budget);
    json arr = json::array();
    std::string csv = report::csv_line({"rho", "sentinel_id", "value"});
    for (const auto& e : er.ends) {
      const auto cls =
          ends::classify_end(g, e, parse_schedule(el_schedule), el_margin, el_stall, opts);
      arr.push_back(report::to_json(cls));
      for (std::size_t k = 0; k < cls.schedule.size(); ++k)
        for (const auto& s : cls.sentinels)
          csv += report::csv_line({std::to_string(cls.schedule[k]), s.label,
                                   report::format_double(s.values[k])});
    }
    if (out.csv)
      emit(out, csv);
    else
      emit_json(out, json{{"probe_radius", er.probe_radius}, {"ends", arr}});
    return kExitOk;
  }
  if (eb->parsed()) {
    const auto g = gen::GraphGenerator::from_json_file(eb_gen);
    harm::SolveOptions opts;
    opts.vertex_budget = budget;
    const auto basis = ends::separating_harmonics(g, load_omega(eb_omega, g), eb_probe, eb_rho,
                                                  eb_sentinel, {}, 2e-2, opts);
    emit_json(out, report::to_json(basis));
    return basis.status == ends::BasisStatus::Refused ? kExitVerdict : kExitOk;
  }

  auto run_gh = [&](const std::string& gen_path, const std::string& roots_path,
                    const std::string& indices_text, int radius, double eps) {
    const auto g = gen::GraphGenerator::from_json_file(gen_path);
    const auto rule = gen::RootRule::from_json(io::read_file(roots_path), roots_path);
    const gen::RootedGeneratorSequence seq{g, rule};
    const auto indices = parse_indices(indices_text);
    const auto balls = gh::materialize_sequence(seq, indices, radius, budget);
    return std::make_tuple(balls, indices, gh::pgh_converges(balls, indices, radius, eps));
  };

  if (gc->parsed()) {
    const auto [balls, indices, conv] = run_gh(gc_gen, gc_roots, gc_indices, gc_radius, gc_eps);
    emit_json(out, report::to_json(conv));
    return conv.verdict == gh::ConvergenceVerdict::Converged ? kExitOk : kExitVerdict;
  }
  if (gl->parsed()) {
    const auto [balls, indices, conv] = run_gh(gl_gen, gl_roots, gl_indices, gl_radius, gl_eps);
    if (conv.verdict != gh::ConvergenceVerdict::Converged) {
      emit_json(out, report::to_json(conv));
      return kExitVerdict;
    }
    const auto limit = gh::pgh_limit(balls, indices, gl_radius, gl_eps);
    json j;
    j["convergence"] = report::to_json(conv);
    j["limit_ball"] = json::parse(io::graph_to_json(limit.ball.graph));
    j["provenance"] = limit.provenance;
    emit_json(out, j);
    return kExitOk;
  }
  if (gs->parsed()) {
    const int radius = (parse_mode(gs_mode) == curv::CurvatureMode::BakryEmery) ? 2 : 3;
    const auto [balls, indices, conv] = run_gh(gs_gen, gs_roots, gs_indices, radius, gs_eps);
    if (conv.verdict != gh::ConvergenceVerdict::Converged) {
      emit_json(out, report::to_json(conv));
      return kExitVerdict;
    }
    const auto rep = gh::curvature_semicontinuity_check(conv, balls, parse_mode(gs_mode), gs_tol);
    emit_json(out, report::to_json(rep));
    return rep.holds ? kExitOk : kExitVerdict;
  }

  if (corpus_cmd->parsed()) {
    corpus::run_corpus(corpus_out);
    return kExitOk;
  }

  return kExitUsage;
}

void report_error(bool json_errors, const char* kind, const std::string& what) {
  if (json_errors) {
    json j;
    j["error"] = kind;
    j["message"] = what;
    std::cerr << j.dump() << "\n";
  } else {
    std::cerr << "error (" << kind << "): " << what << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  bool json_errors = false;
  for (int i = 1; i < argc; ++i)
    if (std::string(argv[i]) == "--json-errors") json_errors = true;

  try {
    return run(argc, argv);
  } catch (const curvgraph::ResourceError& e) {
    report_error(json_errors, "resource", e.what());
    return kExitResource;
  } catch (const curvgraph::ParseError& e) {
    report_error(json_errors, "parse", e.what());
    return kExitUsage;
  } catch (const curvgraph::DomainError& e) {
    report_error(json_errors, "domain", e.what());
    return kExitUsage;
  } catch (const curvgraph::IllPosedError& e) {
    report_error(json_errors, "ill-posed", e.what());
    return kExitUsage;
  } catch (const curvgraph::IntegrityError& e) {
    report_error(json_errors, "integrity", e.what());
    return kExitResource;
  } catch (const curvgraph::NumericError& e) {
    report_error(json_errors, "numeric", e.what());
    return kExitResource;
  } catch (const std::exception& e) {
    report_error(json_errors, "internal", e.what());
    return kExitUsage;
  }
}
