#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "curvgraph/graph.hpp"

namespace curvgraph::gen {

// Structured vertex token of a generated infinite graph. Interpreted against
// the generator's family: lattice tokens carry coordinates, tree tokens a
// root path, product tokens one part per factor. A glued generator prefixes
// every token with the copy side; identified vertices canonicalize to side A.
struct Token {
  enum class Kind : std::uint8_t { Lattice, Tree, Product };

  Kind kind = Kind::Lattice;
  std::vector<std::int64_t> coords;  // Lattice
  std::vector<std::int32_t> path;    // Tree: first step in [0,d), later steps in [0,d-1)
  std::vector<Token> parts;          // Product

  auto tie() const { return std::tie(kind, coords, path, parts); }
  friend bool operator==(const Token& a, const Token& b) { return a.tie() == b.tie(); }
  friend bool operator<(const Token& a, const Token& b) { return a.tie() < b.tie(); }

  std::string to_string() const;
};

struct GenVertex {
  int side = 0;  // 0 unless the generator glues two copies; then 0 = A, 1 = B
  Token base;

  friend bool operator==(const GenVertex& a, const GenVertex& b) {
    return a.side == b.side && a.base == b.base;
  }
  friend bool operator<(const GenVertex& a, const GenVertex& b) {
    return std::tie(a.side, a.base) < std::tie(b.side, b.base);
  }
  std::string to_string() const;
};

// Base family shape: lattice Z^d, regular tree T_d, or a product of families.
struct Family {
  enum class Kind : std::uint8_t { Lattice, Tree, Product };
  Kind kind = Kind::Lattice;
  int lattice_dim = 1;
  int tree_degree = 3;
  std::vector<Family> factors;

  Token root() const;
  int max_degree() const;
};

struct Perturbations {
  std::map<GenVertex, double> vertex_m;
  std::map<std::pair<GenVertex, GenVertex>, double> edge_w;  // key ordered (min,max)
  int declared_radius = 0;
};

struct BoundedGeometryReport {
  bool pass = true;
  double constant = 0.0;
  int sample_radius = 0;
  std::vector<std::pair<std::string, double>> degree_violations;
  std::vector<std::pair<std::string, double>> vertex_weight_violations;
  std::vector<std::pair<std::string, double>> edge_weight_violations;
};

// Finitely-presented infinite weighted graph: a pure, symmetric neighbor
// oracle with uniform base weights, an optional gluing of two copies of the
// base family, and a finite perturbation table near the root.
class GraphGenerator {
 public:
  GraphGenerator(Family family, double base_m, double base_w, double bg_constant,
                 bool glued = false,
                 std::vector<std::pair<Token, Token>> identify = {},  // glue: A-token, B-token
                 Perturbations perturbations = {});

  static GraphGenerator from_json(const std::string& text, const std::string& source = "<input>");
  static GraphGenerator from_json_file(const std::string& path);

  GenVertex root() const;
  bool glued() const { return glued_; }
  const Family& family() const { return family_; }
  double bg_constant() const { return bg_constant_; }

  // Pure symmetric oracle; results sorted by token order.
  std::vector<std::pair<GenVertex, double>> neighbors(const GenVertex& x) const;
  double vertex_weight(const GenVertex& x) const;
  bool valid_vertex(const GenVertex& x) const;

  // Parses a token from its JSON form: lattice [c...], tree {"path":[...]},
  // product {"parts":[...]}, glued {"side":"A"|"B","inner":...}. A bare base
  // token is accepted for glued generators and lands on side A.
  GenVertex vertex_from_json(const std::string& text) const;

  std::string to_json() const { return spec_json_; }

 private:
  GenVertex canonical(int side, Token t) const;
  friend BoundedGeometryReport validate_bounded_geometry(const GraphGenerator&, int);

  Family family_;
  double base_m_ = 1.0;
  double base_w_ = 1.0;
  double bg_constant_ = 1.0;
  bool glued_ = false;
  std::map<Token, Token> b_to_a_;  // glue identification, canonical direction
  std::map<Token, Token> a_to_b_;
  Perturbations pert_;
  std::string spec_json_;

  // Memo for the pure oracle; shared across copies, coarsely locked.
  // Correctness never depends on hits.
  struct NeighborCache {
    std::mutex mutex;
    std::map<GenVertex, std::vector<std::pair<GenVertex, double>>> entries;
  };
  std::shared_ptr<NeighborCache> cache_ = std::make_shared<NeighborCache>();
};

inline constexpr std::size_t kDefaultVertexBudget = 200000;

// B_R(x0) as a concrete graph; labels are token serializations and vertex ids
// are layer-major (sorted by token inside each depth layer), so growing R
// never renumbers existing vertices. Throws ResourceError past the budget.
// tokens_out, when given, receives the token of every ball vertex in id order.
RootedBall materialize_ball(const GraphGenerator& g, const GenVertex& x0, int radius,
                            std::size_t vertex_budget = kDefaultVertexBudget,
                            std::vector<GenVertex>* tokens_out = nullptr);

// Checks degree and weight bounds against the declared constant on the ball
// of `sample_radius` around the root plus every perturbation-table entry.
// Oracle asymmetry raises IntegrityError.
BoundedGeometryReport validate_bounded_geometry(const GraphGenerator& g, int sample_radius);

// Root schedule for rooted sequences (G, p_i): lattice rays, a chosen glue
// side, or a repeated tree branch.
struct RootRule {
  std::vector<std::int64_t> direction;  // lattice: p_i = i * direction
  int side = 0;
  std::vector<std::int32_t> branch;     // tree: repeat to length i

  GenVertex root_at(const GraphGenerator& g, int index) const;

  static RootRule from_json(const std::string& text, const std::string& source = "<input>");
};

struct RootedGeneratorSequence {
  GraphGenerator generator;
  RootRule roots;

  GenVertex root_at(int index) const { return roots.root_at(generator, index); }
};

}  // namespace curvgraph::gen
