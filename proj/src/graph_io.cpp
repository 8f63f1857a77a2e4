#include "curvgraph/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "curvgraph/errors.hpp"
#include "json.hpp"

namespace curvgraph::io {

using nlohmann::json;

namespace {

// nlohmann reports byte offsets; convert to line:column for the message.
std::string position_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_or_throw(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + position_of(text, e.byte ? e.byte - 1 : 0) + ": " + e.what());
  }
}

std::string id_text(const json& id, const std::string& source, const std::string& where) {
  if (id.is_string()) return id.get<std::string>();
  if (id.is_number_integer()) return std::to_string(id.get<long long>());
  throw ParseError(source + ": " + where + ": id must be an integer or a string");
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

WeightedGraph load_graph_json(const std::string& text, const std::string& source) {
  const json j = parse_or_throw(text, source);
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw ParseError(source + ": expected object with 'vertices' and 'edges'");

  struct RawVertex {
    std::string label;
    long long numeric = 0;
    bool is_numeric = false;
    double m = 1.0;
  };
  std::vector<RawVertex> raw;
  bool all_numeric = true;
  for (std::size_t i = 0; i < j["vertices"].size(); ++i) {
    const json& v = j["vertices"][i];
    const std::string where = "vertices[" + std::to_string(i) + "]";
    if (!v.is_object() || !v.contains("id"))
      throw ParseError(source + ": " + where + ": expected {\"id\":..., \"m\":...}");
    RawVertex rv;
    rv.label = id_text(v["id"], source, where);
    rv.is_numeric = v["id"].is_number_integer();
    if (rv.is_numeric) rv.numeric = v["id"].get<long long>();
    all_numeric = all_numeric && rv.is_numeric;
    if (v.contains("m")) {
      if (!v["m"].is_number()) throw ParseError(source + ": " + where + ": 'm' must be a number");
      rv.m = v["m"].get<double>();
    }
    if (!(rv.m > 0.0))
      throw ParseError(source + ": " + where + " (id=" + rv.label + "): vertex weight must be positive");
    raw.push_back(std::move(rv));
  }

  // canonical order: numeric when possible, else lexicographic on the label
  std::sort(raw.begin(), raw.end(), [&](const RawVertex& a, const RawVertex& b) {
    if (all_numeric) return a.numeric < b.numeric;
    return a.label < b.label;
  });

  std::map<std::string, Vertex> index;
  std::vector<std::string> labels;
  std::vector<double> weights;
  for (const RawVertex& rv : raw) {
    if (index.count(rv.label))
      throw ParseError(source + ": duplicate vertex id '" + rv.label + "'");
    index[rv.label] = static_cast<Vertex>(labels.size());
    labels.push_back(rv.label);
    weights.push_back(rv.m);
  }

  std::vector<EdgeRef> edges;
  std::set<std::pair<Vertex, Vertex>> seen;
  for (std::size_t i = 0; i < j["edges"].size(); ++i) {
    const json& e = j["edges"][i];
    const std::string where = "edges[" + std::to_string(i) + "]";
    if (!e.is_object() || !e.contains("u") || !e.contains("v"))
      throw ParseError(source + ": " + where + ": expected {\"u\":..., \"v\":..., \"w\":...}");
    const std::string ul = id_text(e["u"], source, where);
    const std::string vl = id_text(e["v"], source, where);
    auto ui = index.find(ul), vi = index.find(vl);
    if (ui == index.end()) throw ParseError(source + ": " + where + ": unknown vertex '" + ul + "'");
    if (vi == index.end()) throw ParseError(source + ": " + where + ": unknown vertex '" + vl + "'");
    double w = 1.0;
    if (e.contains("w")) {
      if (!e["w"].is_number()) throw ParseError(source + ": " + where + ": 'w' must be a number");
      w = e["w"].get<double>();
    }
    Vertex u = ui->second, v = vi->second;
    if (u == v) throw ParseError(source + ": " + where + ": self-loop on '" + ul + "'");
    if (!(w > 0.0))
      throw ParseError(source + ": " + where + ": edge weight must be positive");
    if (u > v) std::swap(u, v);
    if (!seen.emplace(u, v).second)
      throw ParseError(source + ": " + where + ": duplicate edge {" + ul + "," + vl + "}");
    edges.push_back({u, v, w});
  }
  return WeightedGraph(std::move(labels), std::move(weights), edges);
}

WeightedGraph load_graph_file(const std::string& path) {
  return load_graph_json(read_file(path), path);
}

std::string graph_to_json(const WeightedGraph& g) {
  // numeric labels go back out as numbers so a reload keeps the same
  // canonical order
  auto id_of = [&](Vertex v) -> json {
    const std::string& label = g.label(v);
    try {
      std::size_t used = 0;
      const long long n = std::stoll(label, &used);
      if (used == label.size()) return json(n);
    } catch (...) {
    }
    return json(label);
  };
  json j;
  j["vertices"] = json::array();
  for (Vertex v = 0; v < g.order(); ++v)
    j["vertices"].push_back({{"id", id_of(v)}, {"m", g.vertex_weight(v)}});
  j["edges"] = json::array();
  for (const EdgeRef& e : g.edges())
    j["edges"].push_back({{"u", id_of(e.u)}, {"v", id_of(e.v)}, {"w", e.w}});
  return j.dump(2);
}

std::vector<Vertex> load_vertex_set(const std::string& text, const WeightedGraph& g,
                                    const std::string& source) {
  const json j = parse_or_throw(text, source);
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
    throw ParseError(source + ": expected {\"vertices\": [...]}");
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < j["vertices"].size(); ++i) {
    const std::string label =
        id_text(j["vertices"][i], source, "vertices[" + std::to_string(i) + "]");
    auto v = g.find(label);
    if (!v) throw ParseError(source + ": unknown vertex '" + label + "'");
    out.push_back(*v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Vertex> load_vertex_set_file(const std::string& path, const WeightedGraph& g) {
  return load_vertex_set(read_file(path), g, path);
}

VertexFunction load_vertex_function(const std::string& text, const WeightedGraph& g,
                                    const std::string& source) {
  const json j = parse_or_throw(text, source);
  if (!j.is_object() || !j.contains("values") || !j["values"].is_array())
    throw ParseError(source + ": expected {\"values\": [{\"id\":..., \"value\":...}]}");
  VertexFunction f(g.order());
  for (std::size_t i = 0; i < j["values"].size(); ++i) {
    const json& entry = j["values"][i];
    const std::string where = "values[" + std::to_string(i) + "]";
    if (!entry.is_object() || !entry.contains("id") || !entry.contains("value"))
      throw ParseError(source + ": " + where + ": expected {\"id\":..., \"value\":...}");
    const std::string label = id_text(entry["id"], source, where);
    auto v = g.find(label);
    if (!v) throw ParseError(source + ": " + where + ": unknown vertex '" + label + "'");
    if (!entry["value"].is_number())
      throw ParseError(source + ": " + where + ": 'value' must be a number");
    f.set(*v, entry["value"].get<double>());
  }
  return f;
}

VertexFunction load_vertex_function_file(const std::string& path, const WeightedGraph& g) {
  return load_vertex_function(read_file(path), g);
}

}  // namespace curvgraph::io
