#include "curvgraph/generator.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "curvgraph/errors.hpp"
#include "json.hpp"

namespace curvgraph::gen {

using nlohmann::json;

// ---------------------------------------------------------------------------
// tokens

std::string Token::to_string() const {
  std::ostringstream ss;
  switch (kind) {
    case Kind::Lattice: {
      ss << '(';
      for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) ss << ',';
        ss << coords[i];
      }
      ss << ')';
      break;
    }
    case Kind::Tree: {
      ss << "t:";
      for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) ss << '.';
        ss << path[i];
      }
      break;
    }
    case Kind::Product: {
      ss << "p:(";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) ss << '|';
        ss << parts[i].to_string();
      }
      ss << ')';
      break;
    }
  }
  return ss.str();
}

std::string GenVertex::to_string() const {
  std::string s = base.to_string();
  if (side == 0) return s;
  return "B:" + s;
}

Token Family::root() const {
  Token t;
  switch (kind) {
    case Kind::Lattice:
      t.kind = Token::Kind::Lattice;
      t.coords.assign(lattice_dim, 0);
      break;
    case Kind::Tree:
      t.kind = Token::Kind::Tree;
      break;
    case Kind::Product:
      t.kind = Token::Kind::Product;
      for (const Family& f : factors) t.parts.push_back(f.root());
      break;
  }
  return t;
}

int Family::max_degree() const {
  switch (kind) {
    case Kind::Lattice:
      return 2 * lattice_dim;
    case Kind::Tree:
      return tree_degree;
    case Kind::Product: {
      int d = 0;
      for (const Family& f : factors) d += f.max_degree();
      return d;
    }
  }
  return 0;
}

namespace {

bool token_matches_family(const Token& t, const Family& f) {
  switch (f.kind) {
    case Family::Kind::Lattice:
      return t.kind == Token::Kind::Lattice &&
             t.coords.size() == static_cast<std::size_t>(f.lattice_dim);
    case Family::Kind::Tree: {
      if (t.kind != Token::Kind::Tree) return false;
      for (std::size_t i = 0; i < t.path.size(); ++i) {
        const int limit = (i == 0) ? f.tree_degree : f.tree_degree - 1;
        if (t.path[i] < 0 || t.path[i] >= limit) return false;
      }
      return true;
    }
    case Family::Kind::Product: {
      if (t.kind != Token::Kind::Product || t.parts.size() != f.factors.size()) return false;
      for (std::size_t i = 0; i < t.parts.size(); ++i)
        if (!token_matches_family(t.parts[i], f.factors[i])) return false;
      return true;
    }
  }
  return false;
}

// Base-family neighbors; weights are filled in by the generator.
void base_neighbors(const Family& f, const Token& t, std::vector<Token>& out) {
  switch (f.kind) {
    case Family::Kind::Lattice: {
      for (std::size_t i = 0; i < t.coords.size(); ++i) {
        for (int delta : {-1, +1}) {
          Token n = t;
          n.coords[i] += delta;
          out.push_back(std::move(n));
        }
      }
      break;
    }
    case Family::Kind::Tree: {
      if (!t.path.empty()) {
        Token parent = t;
        parent.path.pop_back();
        out.push_back(std::move(parent));
      }
      const int child_count = t.path.empty() ? f.tree_degree : f.tree_degree - 1;
      for (int c = 0; c < child_count; ++c) {
        Token child = t;
        child.path.push_back(c);
        out.push_back(std::move(child));
      }
      break;
    }
    case Family::Kind::Product: {
      for (std::size_t i = 0; i < f.factors.size(); ++i) {
        std::vector<Token> sub;
        base_neighbors(f.factors[i], t.parts[i], sub);
        for (Token& s : sub) {
          Token n = t;
          n.parts[i] = std::move(s);
          out.push_back(std::move(n));
        }
      }
      break;
    }
  }
}

Token token_from_json_value(const json& j, const Family& f, const std::string& source) {
  Token t;
  switch (f.kind) {
    case Family::Kind::Lattice: {
      if (!j.is_array()) throw ParseError(source + ": lattice token must be an array of integers");
      t.kind = Token::Kind::Lattice;
      for (const json& c : j) {
        if (!c.is_number_integer()) throw ParseError(source + ": lattice coordinate must be an integer");
        t.coords.push_back(c.get<std::int64_t>());
      }
      break;
    }
    case Family::Kind::Tree: {
      t.kind = Token::Kind::Tree;
      const json* arr = nullptr;
      if (j.is_array())
        arr = &j;
      else if (j.is_object() && j.contains("path") && j["path"].is_array())
        arr = &j["path"];
      else
        throw ParseError(source + ": tree token must be {\"path\": [...]} or an array");
      for (const json& c : *arr) {
        if (!c.is_number_integer()) throw ParseError(source + ": tree path step must be an integer");
        t.path.push_back(c.get<std::int32_t>());
      }
      break;
    }
    case Family::Kind::Product: {
      if (!j.is_object() || !j.contains("parts") || !j["parts"].is_array())
        throw ParseError(source + ": product token must be {\"parts\": [...]}");
      t.kind = Token::Kind::Product;
      if (j["parts"].size() != f.factors.size())
        throw ParseError(source + ": product token has wrong number of parts");
      for (std::size_t i = 0; i < f.factors.size(); ++i)
        t.parts.push_back(token_from_json_value(j["parts"][i], f.factors[i], source));
      break;
    }
  }
  if (!token_matches_family(t, f)) throw ParseError(source + ": token does not fit the family");
  return t;
}

Family family_from_json_value(const json& j, const std::string& source) {
  Family f;
  std::string kind;
  if (j.is_string())
    kind = j.get<std::string>();
  else if (j.is_object() && j.contains("family") && j["family"].is_string())
    kind = j["family"].get<std::string>();
  else
    throw ParseError(source + ": family must be a string or an object with 'family'");

  auto get_int = [&](const char* key, int fallback, bool required) {
    if (j.is_object() && j.contains(key)) {
      if (!j[key].is_number_integer()) throw ParseError(source + std::string(": '") + key + "' must be an integer");
      return j[key].get<int>();
    }
    if (required) throw ParseError(source + std::string(": missing '") + key + "'");
    return fallback;
  };

  if (kind == "lattice") {
    f.kind = Family::Kind::Lattice;
    f.lattice_dim = get_int("d", 1, true);
    if (f.lattice_dim < 1) throw ParseError(source + ": lattice dimension must be >= 1");
  } else if (kind == "tree") {
    f.kind = Family::Kind::Tree;
    f.tree_degree = get_int("degree", 3, true);
    if (f.tree_degree < 2) throw ParseError(source + ": tree degree must be >= 2");
  } else if (kind == "product") {
    f.kind = Family::Kind::Product;
    if (!j.is_object() || !j.contains("factors") || !j["factors"].is_array() || j["factors"].size() < 2)
      throw ParseError(source + ": product needs a 'factors' array with at least 2 entries");
    for (const json& sub : j["factors"]) f.factors.push_back(family_from_json_value(sub, source));
  } else {
    throw ParseError(source + ": unknown family '" + kind + "'");
  }
  return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// generator

GraphGenerator::GraphGenerator(Family family, double base_m, double base_w, double bg_constant,
                               bool glued, std::vector<std::pair<Token, Token>> identify,
                               Perturbations perturbations)
    : family_(std::move(family)),
      base_m_(base_m),
      base_w_(base_w),
      bg_constant_(bg_constant),
      glued_(glued),
      pert_(std::move(perturbations)) {
  if (!(base_m_ > 0.0) || !(base_w_ > 0.0)) throw DomainError("base weights must be positive");
  if (!(bg_constant_ >= 1.0)) throw DomainError("bounded-geometry constant must be >= 1");
  if (glued_) {
    if (identify.empty()) identify.emplace_back(family_.root(), family_.root());
    for (auto& [a, b] : identify) {
      if (!token_matches_family(a, family_) || !token_matches_family(b, family_))
        throw DomainError("glue identification token does not fit the family");
      if (b_to_a_.count(b) || a_to_b_.count(a))
        throw DomainError("glue identification list maps a vertex twice");
      b_to_a_[b] = a;
      a_to_b_[a] = b;
    }
  } else if (!identify.empty()) {
    throw DomainError("identification list given for a non-glued generator");
  }
  for (const auto& [v, m] : pert_.vertex_m) {
    if (!(m > 0.0)) throw DomainError("perturbed vertex weight must be positive");
    if (!valid_vertex(v)) throw DomainError("perturbation names an invalid vertex " + v.to_string());
  }
  for (const auto& [e, w] : pert_.edge_w) {
    if (!(w > 0.0)) throw DomainError("perturbed edge weight must be positive");
    if (!valid_vertex(e.first) || !valid_vertex(e.second))
      throw DomainError("edge perturbation names an invalid vertex");
  }
}

GenVertex GraphGenerator::root() const { return canonical(0, family_.root()); }

bool GraphGenerator::valid_vertex(const GenVertex& x) const {
  if (!token_matches_family(x.base, family_)) return false;
  if (!glued_ && x.side != 0) return false;
  if (x.side < 0 || x.side > 1) return false;
  // identified vertices exist only in their canonical side-A form
  if (glued_ && x.side == 1 && b_to_a_.count(x.base)) return false;
  return true;
}

GenVertex GraphGenerator::canonical(int side, Token t) const {
  if (glued_ && side == 1) {
    auto it = b_to_a_.find(t);
    if (it != b_to_a_.end()) return GenVertex{0, it->second};
  }
  return GenVertex{glued_ ? side : 0, std::move(t)};
}

std::vector<std::pair<GenVertex, double>> GraphGenerator::neighbors(const GenVertex& x) const {
  if (!valid_vertex(x)) throw DomainError("invalid generator vertex " + x.to_string());
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->entries.find(x);
    if (it != cache_->entries.end()) return it->second;
  }

  std::vector<GenVertex> raw;
  std::vector<Token> base;
  base_neighbors(family_, x.base, base);
  for (Token& t : base) raw.push_back(canonical(x.side, std::move(t)));
  if (glued_ && x.side == 0) {
    auto it = a_to_b_.find(x.base);
    if (it != a_to_b_.end()) {
      std::vector<Token> other;
      base_neighbors(family_, it->second, other);
      for (Token& t : other) raw.push_back(canonical(1, std::move(t)));
    }
  }

  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());

  std::vector<std::pair<GenVertex, double>> out;
  out.reserve(raw.size());
  for (GenVertex& n : raw) {
    double w = base_w_;
    const auto key = (n < x) ? std::make_pair(n, x) : std::make_pair(x, n);
    auto it = pert_.edge_w.find(key);
    if (it != pert_.edge_w.end()) w = it->second;
    out.emplace_back(std::move(n), w);
  }

  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    cache_->entries.emplace(x, out);
  }
  return out;
}

double GraphGenerator::vertex_weight(const GenVertex& x) const {
  if (!valid_vertex(x)) throw DomainError("invalid generator vertex " + x.to_string());
  auto it = pert_.vertex_m.find(x);
  return it != pert_.vertex_m.end() ? it->second : base_m_;
}

GenVertex GraphGenerator::vertex_from_json(const std::string& text) const {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("vertex token: ") + e.what());
  }
  int side = 0;
  const json* inner = &j;
  if (j.is_object() && j.contains("side")) {
    if (!glued_) throw ParseError("vertex token names a side but the generator is not glued");
    const std::string s = j["side"].is_string() ? j["side"].get<std::string>() : "";
    if (s == "A" || s == "a")
      side = 0;
    else if (s == "B" || s == "b")
      side = 1;
    else
      throw ParseError("vertex token side must be \"A\" or \"B\"");
    if (!j.contains("inner")) throw ParseError("vertex token with side needs 'inner'");
    inner = &j["inner"];
  }
  GenVertex v = canonical(side, token_from_json_value(*inner, family_, "vertex token"));
  if (!valid_vertex(v)) throw ParseError("vertex token is not a vertex of this generator");
  return v;
}

GraphGenerator GraphGenerator::from_json(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError(source + ": generator spec must be an object");

  Family family = family_from_json_value(j, source);
  const double base_m = j.value("m", 1.0);
  const double base_w = j.value("w", 1.0);
  if (!j.contains("C") || !j["C"].is_number())
    throw ParseError(source + ": generator spec needs the bounded-geometry constant 'C'");
  const double c = j["C"].get<double>();

  bool glued = false;
  std::vector<std::pair<Token, Token>> identify;
  if (j.contains("glue") && !j["glue"].is_null() &&
      !(j["glue"].is_boolean() && !j["glue"].get<bool>())) {
    glued = true;
    const json& g = j["glue"];
    if (g.is_object() && g.contains("identify")) {
      for (const json& pair : g["identify"]) {
        if (!pair.is_object() || !pair.contains("a") || !pair.contains("b"))
          throw ParseError(source + ": glue identify entries need 'a' and 'b'");
        identify.emplace_back(token_from_json_value(pair["a"], family, source),
                              token_from_json_value(pair["b"], family, source));
      }
    }
  }

  Perturbations pert;
  pert.declared_radius = j.value("pert_radius", 0);
  GraphGenerator tmp(family, base_m, base_w, c, glued, identify, {});
  auto parse_vertex = [&](const json& tok) {
    if (tok.is_object() && tok.contains("side")) return tmp.vertex_from_json(tok.dump());
    return tmp.canonical(0, token_from_json_value(tok, family, source));
  };
  if (j.contains("perturb_m")) {
    for (const json& p : j["perturb_m"]) {
      if (!p.is_object() || !p.contains("v") || !p.contains("m"))
        throw ParseError(source + ": perturb_m entries need 'v' and 'm'");
      pert.vertex_m[parse_vertex(p["v"])] = p["m"].get<double>();
    }
  }
  if (j.contains("perturb_w")) {
    for (const json& p : j["perturb_w"]) {
      if (!p.is_object() || !p.contains("u") || !p.contains("v") || !p.contains("w"))
        throw ParseError(source + ": perturb_w entries need 'u', 'v' and 'w'");
      GenVertex u = parse_vertex(p["u"]);
      GenVertex v = parse_vertex(p["v"]);
      if (v < u) std::swap(u, v);
      pert.edge_w[{u, v}] = p["w"].get<double>();
    }
  }

  GraphGenerator out(std::move(family), base_m, base_w, c, glued, std::move(identify),
                     std::move(pert));
  out.spec_json_ = j.dump();

  // perturbations must stay within the declared radius of the root
  if (!out.pert_.vertex_m.empty() || !out.pert_.edge_w.empty()) {
    const int r_pert = out.pert_.declared_radius;
    const RootedBall probe = materialize_ball(out, out.root(), r_pert);
    auto inside = [&](const GenVertex& v) { return probe.graph.find(v.to_string()).has_value(); };
    for (const auto& [v, m] : out.pert_.vertex_m)
      if (!inside(v))
        throw ParseError(source + ": perturbed vertex " + v.to_string() +
                         " lies outside the declared pert_radius " + std::to_string(r_pert));
    for (const auto& [e, w] : out.pert_.edge_w)
      if (!inside(e.first) || !inside(e.second))
        throw ParseError(source + ": perturbed edge {" + e.first.to_string() + "," +
                         e.second.to_string() + "} lies outside the declared pert_radius " +
                         std::to_string(r_pert));
  }
  return out;
}

GraphGenerator GraphGenerator::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str(), path);
}

// ---------------------------------------------------------------------------
// materialization

RootedBall materialize_ball(const GraphGenerator& g, const GenVertex& x0, int radius,
                            std::size_t vertex_budget, std::vector<GenVertex>* tokens_out) {
  if (radius < 0) throw DomainError("negative radius");
  if (!g.valid_vertex(x0)) throw DomainError("invalid root " + x0.to_string());

  std::map<GenVertex, Vertex> index;
  std::vector<GenVertex> tokens;
  std::vector<int> depth;
  std::vector<std::vector<std::pair<GenVertex, double>>> nbrs;

  std::vector<GenVertex> frontier{x0};
  index[x0] = 0;
  tokens.push_back(x0);
  depth.push_back(0);

  for (int r = 0; r < radius && !frontier.empty(); ++r) {
    std::map<GenVertex, bool> next;
    for (const GenVertex& u : frontier) {
      for (const auto& [v, w] : g.neighbors(u))
        if (!index.count(v)) next.emplace(v, true);
    }
    std::vector<GenVertex> layer;
    layer.reserve(next.size());
    for (auto& [v, _] : next) layer.push_back(v);  // std::map iterates in token order
    for (const GenVertex& v : layer) {
      if (tokens.size() >= vertex_budget)
        throw ResourceError("ball exceeds vertex budget of " + std::to_string(vertex_budget) +
                            " (radius " + std::to_string(radius) + " around " + x0.to_string() + ")");
      index[v] = static_cast<Vertex>(tokens.size());
      tokens.push_back(v);
      depth.push_back(r + 1);
    }
    frontier = std::move(layer);
  }

  std::vector<std::string> labels;
  std::vector<double> mw;
  labels.reserve(tokens.size());
  for (const GenVertex& t : tokens) {
    labels.push_back(t.to_string());
    mw.push_back(g.vertex_weight(t));
  }

  std::vector<EdgeRef> edges;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (const auto& [v, w] : g.neighbors(tokens[i])) {
      auto it = index.find(v);
      if (it == index.end()) continue;
      const Vertex a = static_cast<Vertex>(i), b = it->second;
      if (a < b) edges.push_back({a, b, w});
    }
  }

  RootedBall ballout;
  ballout.graph = WeightedGraph(std::move(labels), std::move(mw), edges);
  ballout.root = 0;
  ballout.radius = radius;
  ballout.depth = std::move(depth);
  if (tokens_out) *tokens_out = std::move(tokens);
  return ballout;
}

BoundedGeometryReport validate_bounded_geometry(const GraphGenerator& g, int sample_radius) {
  BoundedGeometryReport report;
  report.constant = g.bg_constant();
  report.sample_radius = sample_radius;
  const double c = g.bg_constant();
  const double lo = 1.0 / c;

  // Walk the oracle directly so asymmetry is observable.
  std::set<std::pair<GenVertex, GenVertex>> reported_edges;
  std::deque<GenVertex> queue{g.root()};
  std::map<GenVertex, int> dist{{g.root(), 0}};
  while (!queue.empty()) {
    GenVertex u = queue.front();
    queue.pop_front();
    const int du = dist[u];

    const double m = g.vertex_weight(u);
    if (!(m >= lo && m <= c))
      report.vertex_weight_violations.emplace_back(u.to_string(), m);

    const auto nbrs = g.neighbors(u);
    if (static_cast<double>(nbrs.size()) > c)
      report.degree_violations.emplace_back(u.to_string(), static_cast<double>(nbrs.size()));

    for (const auto& [v, w] : nbrs) {
      // symmetry: u must be listed among v's neighbors with the same weight
      const auto back = g.neighbors(v);
      bool found = false;
      for (const auto& [bv, bw] : back) {
        if (bv == u) {
          if (bw != w)
            throw IntegrityError("oracle asymmetry: w(" + u.to_string() + "," + v.to_string() +
                                 ") differs by direction");
          found = true;
          break;
        }
      }
      if (!found)
        throw IntegrityError("oracle asymmetry: " + v.to_string() + " does not list " +
                             u.to_string());
      if (!(w >= lo && w <= c)) {
        const auto key = (u < v) ? std::make_pair(u, v) : std::make_pair(v, u);
        if (reported_edges.insert(key).second)
          report.edge_weight_violations.emplace_back(
              "{" + key.first.to_string() + "," + key.second.to_string() + "}", w);
      }
      if (du < sample_radius && !dist.count(v)) {
        dist[v] = du + 1;
        queue.push_back(v);
      }
    }
  }

  // the perturbation table is checked in full, even entries the sampled ball
  // never reached
  for (const auto& [v, m] : g.pert_.vertex_m) {
    if (dist.count(v)) continue;  // already covered by the walk
    if (!(m >= lo && m <= c)) report.vertex_weight_violations.emplace_back(v.to_string(), m);
  }
  for (const auto& [e, w] : g.pert_.edge_w) {
    if (reported_edges.count(e)) continue;
    // an edge with a visited endpoint was already checked by the walk
    if (dist.count(e.first) || dist.count(e.second)) continue;
    if (!(w >= lo && w <= c))
      report.edge_weight_violations.emplace_back(
          "{" + e.first.to_string() + "," + e.second.to_string() + "}", w);
  }

  report.pass = report.degree_violations.empty() && report.vertex_weight_violations.empty() &&
                report.edge_weight_violations.empty();
  return report;
}

GenVertex RootRule::root_at(const GraphGenerator& g, int index) const {
  if (index < 0) throw DomainError("negative sequence index");
  const Family& fam = g.family();
  Token t = fam.root();
  if (!branch.empty()) {
    if (fam.kind != Family::Kind::Tree) throw DomainError("branch rule requires a tree family");
    for (int i = 0; i < index; ++i) t.path.push_back(branch[i % branch.size()]);
  } else if (!direction.empty()) {
    Token* lattice_part = &t;
    const Family* lattice_fam = &fam;
    if (fam.kind == Family::Kind::Product) {
      lattice_part = &t.parts[0];
      lattice_fam = &fam.factors[0];
    }
    if (lattice_fam->kind != Family::Kind::Lattice)
      throw DomainError("direction rule requires a lattice family (or lattice first factor)");
    if (direction.size() != lattice_part->coords.size())
      throw DomainError("direction dimension mismatch");
    for (std::size_t i = 0; i < direction.size(); ++i)
      lattice_part->coords[i] = direction[i] * index;
  }
  GenVertex v{side, std::move(t)};
  if (!g.valid_vertex(v)) {
    // identified vertices canonicalize to side A
    v = GenVertex{0, v.base};
    if (!g.valid_vertex(v)) throw DomainError("root rule produced an invalid vertex");
  }
  return v;
}

RootRule RootRule::from_json(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
  RootRule r;
  if (j.contains("direction")) {
    for (const json& c : j["direction"]) r.direction.push_back(c.get<std::int64_t>());
  }
  if (j.contains("branch")) {
    for (const json& c : j["branch"]) r.branch.push_back(c.get<std::int32_t>());
  }
  if (j.contains("side")) {
    const std::string s = j["side"].get<std::string>();
    r.side = (s == "B" || s == "b") ? 1 : 0;
  }
  if (r.direction.empty() && r.branch.empty())
    throw ParseError(source + ": root rule needs 'direction' or 'branch'");
  return r;
}

}  // namespace curvgraph::gen
