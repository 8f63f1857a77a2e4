#include "curvgraph/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "curvgraph/errors.hpp"
#include "curvgraph/parallel.hpp"
#include "curvgraph/simplex.hpp"

namespace curvgraph::curv {

double gamma(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h, Vertex x) {
  const double fx = f.at(x), hx = h.at(x);
  double acc = 0.0;
  for (const auto& [y, w] : g.neighbors(x)) acc += w * (f.at(y) - fx) * (h.at(y) - hx);
  return acc / (2.0 * g.vertex_weight(x));
}

double gamma(const WeightedGraph& g, const VertexFunction& f, Vertex x) {
  return gamma(g, f, f, x);
}

double gamma2(const WeightedGraph& g, const VertexFunction& f, Vertex x) {
  // Gamma(f) and Delta f on B_1(x), then one Laplacian / one Gamma pairing at x.
  VertexFunction gam(f.size());
  VertexFunction lap(f.size());
  gam.set(x, gamma(g, f, x));
  lap.set(x, laplacian(g, f, x));
  for (const auto& [y, w] : g.neighbors(x)) {
    gam.set(y, gamma(g, f, y));
    lap.set(y, laplacian(g, f, y));
  }
  return 0.5 * laplacian(g, gam, x) - gamma(g, f, lap, x);
}

namespace {

// Bilinear building blocks on indicator functions, restricted to what the
// form assembly needs. e_i is the indicator of basis vertex i; x is pinned
// to 0, so indicators of x never appear.
struct FormAssembler {
  const WeightedGraph& g;
  Vertex x;
  std::vector<Vertex> basis;             // B_2(x) \ {x}
  std::vector<int> pos;                  // graph vertex -> basis position (or -1)

  explicit FormAssembler(const WeightedGraph& graph, Vertex center) : g(graph), x(center) {
    const auto dist = distances_from(g, x);
    pos.assign(g.order(), -1);
    for (Vertex v = 0; v < g.order(); ++v)
      if (v != x && dist[v] >= 0 && dist[v] <= 2) basis.push_back(v);
    for (std::size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = static_cast<int>(i);
  }

  double value(int i, Vertex v) const {  // e_i(v) with e := 0 at x
    return (pos[v] >= 0 && pos[v] == i) ? 1.0 : 0.0;
  }

  double gamma_pair(int i, int j, Vertex z) const {
    double acc = 0.0;
    const double fiz = value(i, z), fjz = value(j, z);
    for (const auto& [y, w] : g.neighbors(z)) acc += w * (value(i, y) - fiz) * (value(j, y) - fjz);
    return acc / (2.0 * g.vertex_weight(z));
  }

  double laplace(int i, Vertex z) const {
    double acc = 0.0;
    const double fiz = value(i, z);
    for (const auto& [y, w] : g.neighbors(z)) acc += w * (value(i, y) - fiz);
    return acc / g.vertex_weight(z);
  }

  // Gamma_2(e_i, e_j)(x) via the bilinear polarization of Definition-style
  // pieces: 1/2 Delta Gamma(e_i,e_j)(x) - 1/2 Gamma(e_i, Delta e_j)(x)
  //         - 1/2 Gamma(e_j, Delta e_i)(x).
  double gamma2_pair(int i, int j) const {
    const double mx = g.vertex_weight(x);
    double lap_gamma = 0.0;
    const double gij_x = gamma_pair(i, j, x);
    for (const auto& [y, w] : g.neighbors(x)) lap_gamma += w * (gamma_pair(i, j, y) - gij_x);
    lap_gamma /= mx;

    auto gamma_f_lap = [&](int a, int b) {
      // Gamma(e_a, Delta e_b)(x)
      double acc = 0.0;
      const double fax = value(a, x);
      const double lbx = laplace(b, x);
      for (const auto& [y, w] : g.neighbors(x))
        acc += w * (value(a, y) - fax) * (laplace(b, y) - lbx);
      return acc / (2.0 * mx);
    };
    return 0.5 * lap_gamma - 0.5 * gamma_f_lap(i, j) - 0.5 * gamma_f_lap(j, i);
  }
};

}  // namespace

CurvatureForms curvature_forms(const WeightedGraph& g, Vertex x, double n) {
  if (!(n > 0.0)) throw DomainError("dimension parameter must be positive");
  FormAssembler fa(g, x);
  const std::size_t k = fa.basis.size();
  CurvatureForms out;
  out.basis = fa.basis;
  out.q1 = linalg::SymMatrix(k);
  out.q2 = linalg::SymMatrix(k);

  std::vector<double> dlt(k);
  for (std::size_t i = 0; i < k; ++i) dlt[i] = fa.laplace(static_cast<int>(i), x);

  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      const double q1 = fa.gamma_pair(static_cast<int>(i), static_cast<int>(j), x);
      double q2 = fa.gamma2_pair(static_cast<int>(i), static_cast<int>(j));
      if (std::isfinite(n)) q2 -= dlt[i] * dlt[j] / n;
      out.q1(i, j) = out.q1(j, i) = q1;
      out.q2(i, j) = out.q2(j, i) = q2;
    }
  }
  return out;
}

namespace {

bool psd_with_slack(const linalg::SymMatrix& q2, const linalg::SymMatrix& q1, double K) {
  const std::size_t k = q2.size();
  linalg::SymMatrix a(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a(i, j) = q2(i, j) - K * q1(i, j);
  const double slack = 1e-10 * (1.0 + q2.max_abs());
  return linalg::smallest_eigenvalue(a) >= -slack;
}

}  // namespace

bool cd_check(const WeightedGraph& g, Vertex x, double K, double n) {
  const CurvatureForms forms = curvature_forms(g, x, n);
  if (forms.basis.empty()) return true;  // isolated vertex satisfies everything
  return psd_with_slack(forms.q2, forms.q1, K);
}

BakryEmeryResult bakry_emery_curvature(const WeightedGraph& g, Vertex x, double n, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  BakryEmeryResult res;
  res.vertex = x;
  res.n_param = n;
  res.tolerance = tol;

  if (g.degree(x) == 0) {
    res.degenerate = true;
    res.curvature = kInfinity;
    res.witness = VertexFunction(g.order());
    return res;
  }

  const CurvatureForms forms = curvature_forms(g, x, n);
  const std::size_t k = forms.basis.size();

  // Rayleigh quotient of a neighbor indicator bounds the curvature above.
  const Vertex nb = g.neighbors(x).front().first;
  std::size_t nb_pos = 0;
  for (std::size_t i = 0; i < k; ++i)
    if (forms.basis[i] == nb) nb_pos = i;
  const double upper0 = forms.q2(nb_pos, nb_pos) / forms.q1(nb_pos, nb_pos);

  constexpr double kRange = 1e6;
  double hi = upper0 + 1.0;
  while (psd_with_slack(forms.q2, forms.q1, hi)) {
    hi = 2.0 * hi + 1.0;
    if (hi > kRange) throw NumericError("curvature bracket exceeded +1e6 (degenerate vertex?)");
  }
  double lo = -std::abs(upper0) - 1.0;
  while (!psd_with_slack(forms.q2, forms.q1, lo)) {
    lo = 2.0 * lo - 1.0;
    if (lo < -kRange) throw NumericError("curvature bracket exceeded -1e6 (degenerate vertex?)");
  }

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (psd_with_slack(forms.q2, forms.q1, mid))
      lo = mid;
    else
      hi = mid;
  }
  res.curvature = 0.5 * (lo + hi);

  // Witness: eigenvector of the smallest eigenvalue just past the failing
  // side; it must have positive Gamma since q2 - K q1 stays PSD on ker q1.
  linalg::SymMatrix a(k);
  const double kfail = res.curvature + tol;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a(i, j) = forms.q2(i, j) - kfail * forms.q1(i, j);
  const linalg::EigenResult eig = linalg::jacobi_eigen(a);
  res.witness = VertexFunction(g.order());
  res.witness.set(x, 0.0);
  for (std::size_t i = 0; i < k; ++i) res.witness.set(forms.basis[i], eig.vectors.front()[i]);
  return res;
}

// ---------------------------------------------------------------------------
// Ollivier curvature

namespace {

struct OllivierSetup {
  std::vector<Vertex> support;          // N = B_1(x) u B_1(y), ascending
  std::vector<Vertex> variables;        // N minus {x, y}
  std::vector<std::vector<int>> dist;   // pairwise distances inside g, -1 = unreachable
  std::vector<double> fixed;            // f(x) = 0, f(y) = 1 folded into constraints
};

OllivierSetup ollivier_setup(const WeightedGraph& g, Vertex x, Vertex y) {
  if (!g.adjacent(x, y)) throw DomainError("ollivier_curvature: vertices are not adjacent");

  std::vector<Vertex> support{x, y};
  for (const auto& [v, w] : g.neighbors(x)) support.push_back(v);
  for (const auto& [v, w] : g.neighbors(y)) support.push_back(v);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());

  OllivierSetup s;
  s.support = support;
  for (Vertex v : support)
    if (v != x && v != y) s.variables.push_back(v);

  s.dist.assign(support.size(), std::vector<int>(support.size(), -1));
  for (std::size_t i = 0; i < support.size(); ++i) {
    const auto d = distances_from(g, support[i]);
    for (std::size_t j = 0; j < support.size(); ++j) s.dist[i][j] = d[support[j]];
  }
  return s;
}

struct OllivierLp {
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<double> c;
  double constant = 0.0;
};

// min Delta f(x) - Delta f(y) over f on N with f(x) = 0 and f(y) = 1 pinned;
// Lipschitz pairs become rows f(u) - f(v) <= d(u,v).
OllivierLp build_ollivier_lp(const WeightedGraph& g, Vertex x, Vertex y, const OllivierSetup& s) {
  OllivierLp lp;
  lp.c.assign(s.variables.size(), 0.0);

  auto var_pos = [&](Vertex v) -> int {
    auto it = std::lower_bound(s.variables.begin(), s.variables.end(), v);
    return (it != s.variables.end() && *it == v) ? static_cast<int>(it - s.variables.begin()) : -1;
  };
  auto add = [&](Vertex v, double coef) {
    if (v == x) return;  // f(x) = 0
    if (v == y) {
      lp.constant += coef;  // f(y) = 1
      return;
    }
    const int p = var_pos(v);
    if (p < 0) throw IntegrityError("ollivier objective touched a vertex outside the support");
    lp.c[p] += coef;
  };

  const double inv_mx = 1.0 / g.vertex_weight(x);
  const double inv_my = 1.0 / g.vertex_weight(y);
  for (const auto& [z, w] : g.neighbors(x)) add(z, w * inv_mx);   // Delta f(x); f(x) terms vanish
  for (const auto& [z, w] : g.neighbors(y)) {
    add(z, -w * inv_my);                                          // -Delta f(y)
    lp.constant += w * inv_my;                                    // +f(y) sum w/m(y)
  }

  const std::size_t nv = s.variables.size();
  for (std::size_t i = 0; i < s.support.size(); ++i) {
    for (std::size_t j = 0; j < s.support.size(); ++j) {
      if (i == j || s.dist[i][j] < 0) continue;
      const Vertex u = s.support[i], v = s.support[j];
      std::vector<double> row(nv, 0.0);
      double rhs = s.dist[i][j];
      bool trivial = true;
      if (u == y)
        rhs -= 1.0;
      else if (u != x) {
        row[var_pos(u)] += 1.0;
        trivial = false;
      }
      if (v == y)
        rhs += 1.0;
      else if (v != x) {
        row[var_pos(v)] -= 1.0;
        trivial = false;
      }
      if (trivial) continue;  // both endpoints pinned; feasibility is structural
      lp.A.push_back(std::move(row));
      lp.b.push_back(rhs);
    }
  }
  return lp;
}

}  // namespace

OllivierResult ollivier_curvature(const WeightedGraph& g, Vertex x, Vertex y) {
  const OllivierSetup s = ollivier_setup(g, x, y);
  const OllivierLp lp = build_ollivier_lp(g, x, y, s);

  const lp::LpResult<double> sol = lp::solve_inequality_lp(lp.A, lp.b, lp.c);
  if (sol.status != lp::LpStatus::Optimal)
    throw NumericError("ollivier LP did not reach an optimum");

  OllivierResult res;
  res.x = x;
  res.y = y;
  res.kappa = sol.objective + lp.constant;
  res.optimal = true;

  res.optimizer = VertexFunction(g.order());
  res.optimizer.set(x, 0.0);
  res.optimizer.set(y, 1.0);
  for (std::size_t i = 0; i < s.variables.size(); ++i) res.optimizer.set(s.variables[i], sol.x[i]);

  // feasibility re-verification of the reported optimizer
  for (std::size_t i = 0; i < lp.A.size(); ++i) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < lp.c.size(); ++j) lhs += lp.A[i][j] * sol.x[j];
    if (lhs > lp.b[i] + 1e-8)
      throw NumericError("ollivier LP optimizer violates a Lipschitz constraint");
  }
  double dual_obj = 0.0;
  for (std::size_t i = 0; i < lp.b.size(); ++i) dual_obj += sol.dual[i] * lp.b[i];
  res.duality_gap = std::abs(dual_obj - sol.objective);
  return res;
}

double ollivier_curvature_exact(const WeightedGraph& g, Vertex x, Vertex y) {
  using lp::Rational;
  const OllivierSetup s = ollivier_setup(g, x, y);
  const OllivierLp dbl = build_ollivier_lp(g, x, y, s);

  // Same LP with every coefficient promoted to an exact rational.
  std::vector<std::vector<Rational>> A(dbl.A.size());
  std::vector<Rational> b(dbl.b.size()), c(dbl.c.size());
  for (std::size_t i = 0; i < dbl.A.size(); ++i) {
    A[i].reserve(dbl.A[i].size());
    for (double v : dbl.A[i]) A[i].push_back(Rational::from_double(v));
    b[i] = Rational::from_double(dbl.b[i]);
  }
  for (std::size_t j = 0; j < dbl.c.size(); ++j) c[j] = Rational::from_double(dbl.c[j]);

  const lp::LpResult<Rational> sol = lp::solve_inequality_lp(A, b, c);
  if (sol.status != lp::LpStatus::Optimal)
    throw NumericError("exact ollivier LP did not reach an optimum");
  return (sol.objective + Rational::from_double(dbl.constant)).to_double();
}

// ---------------------------------------------------------------------------
// curvature outside a finite set

namespace {

CurvatureOutsideReport outside_on_ball(const WeightedGraph& g, const std::vector<int>& depth,
                                       const std::vector<char>& in_omega, CurvatureMode mode,
                                       int probe_radius, double tol) {
  CurvatureOutsideReport report;
  report.mode = mode;
  report.probe_radius = probe_radius;
  report.tolerance = tol;

  if (mode == CurvatureMode::BakryEmery) {
    std::vector<Vertex> targets;
    for (Vertex v = 0; v < g.order(); ++v)
      if (!in_omega[v] && depth[v] <= probe_radius) targets.push_back(v);
    std::vector<double> values(targets.size(), 0.0);
    parallel_for(targets.size(), [&](std::size_t i) {
      const BakryEmeryResult r = bakry_emery_curvature(g, targets[i]);
      values[i] = r.degenerate ? kInfinity : r.curvature;
    });
    report.checked = targets.size();
    for (std::size_t i = 0; i < targets.size(); ++i)
      if (values[i] < -tol) report.violations.push_back({g.label(targets[i]), values[i]});
  } else {
    std::vector<EdgeRef> targets;
    for (const EdgeRef& e : g.edges()) {
      if (in_omega[e.u] || in_omega[e.v]) continue;
      if (depth[e.u] > probe_radius || depth[e.v] > probe_radius) continue;
      targets.push_back(e);
    }
    std::vector<double> values(targets.size(), 0.0);
    parallel_for(targets.size(), [&](std::size_t i) {
      values[i] = ollivier_curvature(g, targets[i].u, targets[i].v).kappa;
    });
    report.checked = targets.size();
    for (std::size_t i = 0; i < targets.size(); ++i)
      if (values[i] < -tol)
        report.violations.push_back(
            {"{" + g.label(targets[i].u) + "," + g.label(targets[i].v) + "}", values[i]});
  }
  report.pass = report.violations.empty();
  return report;
}

}  // namespace

CurvatureOutsideReport curvature_outside(const gen::GraphGenerator& generator,
                                         const std::vector<gen::GenVertex>& omega,
                                         CurvatureMode mode, int probe_radius, double tol,
                                         std::size_t vertex_budget) {
  const int margin = (mode == CurvatureMode::BakryEmery) ? 2 : 3;
  const RootedBall ball =
      gen::materialize_ball(generator, generator.root(), probe_radius + margin, vertex_budget);

  std::vector<char> in_omega(ball.graph.order(), 0);
  for (const gen::GenVertex& v : omega) {
    const auto idx = ball.graph.find(v.to_string());
    if (idx) in_omega[*idx] = 1;
    // omega vertices outside the probe ball exclude nothing
  }
  return outside_on_ball(ball.graph, ball.depth, in_omega, mode, probe_radius, tol);
}

CurvatureOutsideReport curvature_outside(const WeightedGraph& g, const std::vector<Vertex>& omega,
                                         CurvatureMode mode, double tol) {
  std::vector<char> in_omega(g.order(), 0);
  for (Vertex v : omega) {
    if (v < 0 || v >= g.order()) throw DomainError("omega vertex out of range");
    in_omega[v] = 1;
  }
  std::vector<int> depth(g.order(), 0);  // whole graph is the probe region
  return outside_on_ball(g, depth, in_omega, mode, g.order(), tol);
}

}  // namespace curvgraph::curv
