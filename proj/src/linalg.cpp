#include "curvgraph/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "curvgraph/errors.hpp"

namespace curvgraph::linalg {

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

EigenResult jacobi_eigen(SymMatrix a, bool want_vectors, int max_sweeps) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> vecs;
  if (want_vectors) {
    vecs.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) vecs[i][i] = 1.0;  // vecs[k][i]: component i of vector k
  }
  const double scale = std::max(a.max_abs(), 1e-300);
  const double stop = 1e-15 * scale;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= stop) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= stop * 1e-2) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        if (want_vectors) {
          // vecs[k][j]: row k of the accumulated rotation matrix; columns are
          // the eigenvectors, extracted after sorting below
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = vecs[k][p], vkq = vecs[k][q];
            vecs[k][p] = c * vkp - s * vkq;
            vecs[k][q] = s * vkp + c * vkq;
          }
        }
      }
    }
  }

  EigenResult r;
  r.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.values[i] = a(i, i);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return r.values[i] < r.values[j]; });

  std::vector<double> sorted_vals(n);
  for (std::size_t k = 0; k < n; ++k) sorted_vals[k] = r.values[idx[k]];
  r.values = std::move(sorted_vals);
  if (want_vectors) {
    r.vectors.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) r.vectors[k][i] = vecs[i][idx[k]];
  }
  return r;
}

double smallest_eigenvalue(const SymMatrix& a) {
  if (a.size() == 0) return 0.0;
  return jacobi_eigen(a, /*want_vectors=*/false).values.front();
}

std::vector<double> ldlt_solve(SymMatrix a, std::vector<double> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw DomainError("ldlt_solve: dimension mismatch");
  const double scale = std::max(a.max_abs(), 1e-300);
  std::vector<double> d(n, 0.0);

  for (std::size_t j = 0; j < n; ++j) {
    double dj = a(j, j);
    for (std::size_t k = 0; k < j; ++k) dj -= a(j, k) * a(j, k) * d[k];
    if (!(dj > 1e-14 * scale))
      throw NumericError("ldlt_solve: matrix not positive definite");
    d[j] = dj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double lij = a(i, j);
      for (std::size_t k = 0; k < j; ++k) lij -= a(i, k) * a(j, k) * d[k];
      a(i, j) = lij / dj;
    }
  }
  // forward: L z = b
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < i; ++k) b[i] -= a(i, k) * b[k];
  // diagonal
  for (std::size_t i = 0; i < n; ++i) b[i] /= d[i];
  // backward: L^T x = z
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t k = i + 1; k < n; ++k) b[i] -= a(k, i) * b[k];
  return b;
}

void SparseSym::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  const std::size_t n = size();
  y.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = diag[i] * x[i];
    for (const auto& [j, v] : off[i]) acc += v * x[j];
    y[i] = acc;
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

CgResult conjugate_gradient(const SparseSym& a, const std::vector<double>& b, double rel_tol,
                            int max_iterations) {
  const std::size_t n = a.size();
  CgResult res;
  res.x.assign(n, 0.0);
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }

  std::vector<double> inv_diag(n);
  for (std::size_t i = 0; i < n; ++i) inv_diag[i] = (a.diag[i] != 0.0) ? 1.0 / a.diag[i] : 1.0;

  std::vector<double> r = b, z(n), p(n), ap(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);

  for (int it = 0; it < max_iterations; ++it) {
    a.multiply(p, ap);
    const double pap = dot(p, ap);
    if (pap <= 0.0) throw NumericError("conjugate_gradient: matrix not positive definite");
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      res.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    res.iterations = it + 1;
    const double rnorm = std::sqrt(dot(r, r));
    res.relative_residual = rnorm / bnorm;
    if (res.relative_residual <= rel_tol) {
      res.converged = true;
      return res;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return res;
}

}  // namespace curvgraph::linalg
