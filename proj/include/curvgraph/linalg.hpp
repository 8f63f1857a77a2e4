#pragma once

#include <cstddef>
#include <vector>

namespace curvgraph::linalg {

// Row-major dense square matrix, just enough surface for the solvers here.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  double max_abs() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

struct EigenResult {
  std::vector<double> values;               // ascending
  std::vector<std::vector<double>> vectors; // vectors[k] pairs with values[k]
};

// Cyclic Jacobi rotations; fine for the dense symmetric problems here
// (a few dozen rows). Off-diagonal threshold relative to the matrix scale.
EigenResult jacobi_eigen(SymMatrix a, bool want_vectors = true, int max_sweeps = 64);

double smallest_eigenvalue(const SymMatrix& a);

// Dense LDL^T solve for symmetric positive definite systems.
// Throws NumericError when a pivot degenerates.
std::vector<double> ldlt_solve(SymMatrix a, std::vector<double> b);

// Sparse symmetric matrix in adjacency form for conjugate gradients.
struct SparseSym {
  std::vector<double> diag;
  std::vector<std::vector<std::pair<int, double>>> off;  // strictly off-diagonal, both halves

  std::size_t size() const { return diag.size(); }
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
};

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Jacobi-preconditioned CG. rel_tol is on ||Ax-b|| / ||b||.
CgResult conjugate_gradient(const SparseSym& a, const std::vector<double>& b, double rel_tol,
                            int max_iterations);

double dot(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace curvgraph::linalg
