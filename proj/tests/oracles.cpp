#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

#include "curvgraph/curvature.hpp"
#include "curvgraph/errors.hpp"

namespace oracles {

using curvgraph::lp::Rational;

long long lattice_ball_count(int d, int r) {
  // walk coordinates recursively, spending at most r total deviation
  std::function<long long(int, int)> count = [&](int dim, int budget) -> long long {
    if (dim == 0) return 1;
    long long total = 0;
    for (int c = -budget; c <= budget; ++c) total += count(dim - 1, budget - std::abs(c));
    return total;
  };
  return count(d, r);
}

long long lattice_sphere_count(int d, int r) {
  if (r == 0) return 1;
  return lattice_ball_count(d, r) - lattice_ball_count(d, r - 1);
}

namespace {

std::vector<std::vector<int>> floyd_warshall(const WeightedGraph& g) {
  const int n = g.order();
  const int inf = 1 << 20;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

}  // namespace

double lipschitz_enumeration_kappa(const WeightedGraph& g, Vertex x, Vertex y) {
  for (const auto& e : g.edges())
    if (e.w != 1.0) throw std::invalid_argument("enumeration oracle needs unit weights");

  const auto dist = floyd_warshall(g);

  std::vector<Vertex> support{x, y};
  for (const auto& [v, w] : g.neighbors(x)) support.push_back(v);
  for (const auto& [v, w] : g.neighbors(y)) support.push_back(v);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());

  std::vector<Vertex> free_vertices;
  for (Vertex v : support)
    if (v != x && v != y) free_vertices.push_back(v);

  std::vector<int> f(g.order(), 0);
  f[x] = 0;
  f[y] = 1;
  const int inf_dist = 1 << 20;

  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t)> enumerate = [&](std::size_t k) {
    if (k == free_vertices.size()) {
      // all Lipschitz constraints over the support
      for (Vertex u : support)
        for (Vertex v : support) {
          if (u == v || dist[u][v] >= inf_dist) continue;
          if (f[u] - f[v] > dist[u][v]) return;
        }
      double lap_x = 0.0, lap_y = 0.0;
      for (const auto& [z, w] : g.neighbors(x)) lap_x += (f[z] - f[x]) / g.vertex_weight(x);
      for (const auto& [z, w] : g.neighbors(y)) lap_y += (f[z] - f[y]) / g.vertex_weight(y);
      best = std::min(best, lap_x - lap_y);
      return;
    }
    for (int value = -3; value <= 3; ++value) {
      f[free_vertices[k]] = value;
      enumerate(k + 1);
    }
  };
  enumerate(0);
  return best;
}

// ---------------------------------------------------------------------------
// Bakry-Emery generalized-eigenvalue oracle

namespace {

// local cyclic Jacobi, written for this file; values ascending
std::vector<double> local_sym_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  if (n == 0) return {};
  double scale = 0.0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::abs(v));
  const double stop = 1e-14 * std::max(scale, 1e-300);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a[p][q]));
    if (off <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) <= stop * 1e-3) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t =
            (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = a[i][i];
  std::sort(vals.begin(), vals.end());
  return vals;
}

VertexFunction indicator(const WeightedGraph& g, Vertex v) {
  VertexFunction f(g.order());
  for (Vertex u = 0; u < g.order(); ++u) f.set(u, u == v ? 1.0 : 0.0);
  return f;
}

VertexFunction indicator_sum(const WeightedGraph& g, Vertex a, Vertex b, double sign) {
  VertexFunction f(g.order());
  for (Vertex u = 0; u < g.order(); ++u)
    f.set(u, (u == a ? 1.0 : 0.0) + sign * (u == b ? 1.0 : 0.0));
  return f;
}

}  // namespace

double be_generalized_eigen_oracle(const WeightedGraph& g, Vertex x, double n) {
  namespace curv = curvgraph::curv;
  const auto dist = curvgraph::distances_from(g, x);

  std::vector<Vertex> s1, s2;
  for (Vertex v = 0; v < g.order(); ++v) {
    if (dist[v] == 1) s1.push_back(v);
    if (dist[v] == 2) s2.push_back(v);
  }
  if (s1.empty()) return std::numeric_limits<double>::infinity();
  std::vector<Vertex> basis = s1;
  basis.insert(basis.end(), s2.begin(), s2.end());
  const std::size_t k = basis.size(), k1 = s1.size();

  // q2 by polarization of the scalar Gamma_2:  q(u,v) = (q(u+v) - q(u-v))/4
  auto q2_pair = [&](Vertex a, Vertex b) {
    if (a == b) return curv::gamma2(g, indicator(g, a), x);
    const double plus = curv::gamma2(g, indicator_sum(g, a, b, +1.0), x);
    const double minus = curv::gamma2(g, indicator_sum(g, a, b, -1.0), x);
    return 0.25 * (plus - minus);
  };

  std::vector<std::vector<double>> q2(k, std::vector<double>(k, 0.0));
  std::vector<double> lap(k, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    lap[i] = curvgraph::laplacian(g, indicator(g, basis[i]), x);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      double v = q2_pair(basis[i], basis[j]);
      if (std::isfinite(n)) v -= lap[i] * lap[j] / n;
      q2[i][j] = q2[j][i] = v;
    }

  // q1 is diagonal on the sphere-1 block: Gamma(e_i)(x) = w(x,i) / (2 m(x))
  std::vector<double> d1(k1, 0.0);
  for (std::size_t i = 0; i < k1; ++i)
    d1[i] = g.edge_weight(x, s1[i]) / (2.0 * g.vertex_weight(x));

  // Schur complement onto the sphere-1 block; the sphere-2 block of q2 is
  // diagonal and positive, which makes the reduction exact. Guard both facts.
  for (std::size_t z = 0; z < k - k1; ++z) {
    if (!(q2[k1 + z][k1 + z] > 0.0))
      throw std::logic_error("oracle: sphere-2 diagonal of Gamma_2 not positive");
    for (std::size_t z2 = z + 1; z2 < k - k1; ++z2)
      if (std::abs(q2[k1 + z][k1 + z2]) > 1e-11)
        throw std::logic_error("oracle: sphere-2 block of Gamma_2 not diagonal");
  }
  std::vector<std::vector<double>> reduced(k1, std::vector<double>(k1, 0.0));
  for (std::size_t i = 0; i < k1; ++i)
    for (std::size_t j = 0; j < k1; ++j) {
      double v = q2[i][j];
      for (std::size_t z = 0; z < k - k1; ++z) {
        const double czz = q2[k1 + z][k1 + z];
        v -= q2[i][k1 + z] * q2[j][k1 + z] / czz;
      }
      reduced[i][j] = v / std::sqrt(d1[i] * d1[j]);
    }
  return local_sym_eigenvalues(reduced).front();
}

bool rational_cd_check_unit(const WeightedGraph& g, Vertex x, const Rational& K) {
  for (const auto& e : g.edges())
    if (e.w != 1.0) throw std::invalid_argument("rational CD check needs unit weights");
  for (Vertex v = 0; v < g.order(); ++v)
    if (g.vertex_weight(v) != 1.0) throw std::invalid_argument("rational CD check needs m = 1");

  const auto dist = curvgraph::distances_from(g, x);
  std::vector<Vertex> basis;
  for (Vertex v = 0; v < g.order(); ++v)
    if (v != x && dist[v] >= 0 && dist[v] <= 2) basis.push_back(v);
  const std::size_t k = basis.size();
  if (k == 0) return true;

  // exact evaluation of Gamma, Delta, Gamma_2 on indicator pairs with m = w = 1
  auto value = [&](std::size_t i, Vertex v) { return Rational(basis[i] == v ? 1 : 0); };
  auto gamma_pair = [&](std::size_t i, std::size_t j, Vertex z) {
    Rational acc(0);
    for (const auto& [y, w] : g.neighbors(z))
      acc += (value(i, y) - value(i, z)) * (value(j, y) - value(j, z));
    return acc / Rational(2);
  };
  auto lap = [&](std::size_t i, Vertex z) {
    Rational acc(0);
    for (const auto& [y, w] : g.neighbors(z)) acc += value(i, y) - value(i, z);
    return acc;
  };
  auto gamma2_pair = [&](std::size_t i, std::size_t j) {
    Rational lap_gamma(0);
    const Rational gx = gamma_pair(i, j, x);
    for (const auto& [y, w] : g.neighbors(x)) lap_gamma += gamma_pair(i, j, y) - gx;
    Rational cross_ij(0), cross_ji(0);
    const Rational li_x = lap(i, x), lj_x = lap(j, x);
    for (const auto& [y, w] : g.neighbors(x)) {
      cross_ij += (value(i, y) - value(i, x)) * (lap(j, y) - lj_x);
      cross_ji += (value(j, y) - value(j, x)) * (lap(i, y) - li_x);
    }
    return lap_gamma / Rational(2) - cross_ij / Rational(4) - cross_ji / Rational(4);
  };

  std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k, Rational(0)));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      Rational v = gamma2_pair(i, j) - K * gamma_pair(i, j, x);
      a[i][j] = v;
      a[j][i] = v;
    }

  // fraction-free-ish LDL^T: PSD iff every pivot stays nonnegative, recursing
  // past zero pivots only when their row vanishes
  for (std::size_t p = 0; p < k; ++p) {
    if (a[p][p] < Rational(0)) return false;
    if (a[p][p] == Rational(0)) {
      for (std::size_t j = p + 1; j < k; ++j)
        if (!(a[p][j] == Rational(0))) return false;
      continue;
    }
    for (std::size_t i = p + 1; i < k; ++i) {
      const Rational f = a[i][p] / a[p][p];
      for (std::size_t j = p; j < k; ++j) a[i][j] -= f * a[p][j];
    }
  }
  return true;
}

VertexFunction gaussian_dirichlet(const WeightedGraph& g, const std::vector<Vertex>& interior,
                                  const VertexFunction& boundary) {
  std::vector<Vertex> idx = interior;
  std::sort(idx.begin(), idx.end());
  std::vector<int> pos(g.order(), -1);
  for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = static_cast<int>(i);

  const std::size_t n = idx.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const Vertex v = idx[i];
    for (const auto& [y, w] : g.neighbors(v)) {
      a[i][i] += w;
      if (pos[y] >= 0)
        a[i][pos[y]] -= w;
      else
        a[i][n] += w * boundary.at(y);
    }
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    if (std::abs(a[col][col]) < 1e-14) throw std::runtime_error("oracle: singular system");
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  VertexFunction out(g.order());
  for (Vertex b = 0; b < g.order(); ++b)
    if (boundary.defined(b)) out.set(b, boundary.at(b));
  for (std::size_t i = 0; i < n; ++i) out.set(idx[i], a[i][n] / a[i][i]);
  return out;
}

WeightedGraph random_connected_graph(std::uint64_t seed, int n, double edge_prob, double w_lo,
                                     double w_hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> weight(w_lo, w_hi);
  std::uniform_int_distribution<int> pick(0, n - 1);

  std::vector<curvgraph::EdgeRef> edges;
  std::set<std::pair<int, int>> seen;
  auto add = [&](int u, int v) {
    if (u == v) return;
    if (u > v) std::swap(u, v);
    if (!seen.emplace(u, v).second) return;
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), weight(rng)});
  };
  // random spanning tree first, then extra edges
  for (int v = 1; v < n; ++v) add(std::uniform_int_distribution<int>(0, v - 1)(rng), v);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (unit(rng) < edge_prob) add(u, v);

  std::vector<std::string> labels;
  std::vector<double> m;
  for (int v = 0; v < n; ++v) {
    labels.push_back(std::to_string(v));
    m.push_back(weight(rng));
  }
  return WeightedGraph(std::move(labels), std::move(m), edges);
}

}  // namespace oracles
