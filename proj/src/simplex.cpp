#include "curvgraph/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace curvgraph::lp {

namespace {
long long gcd128(__int128 a, __int128 b) {
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > std::numeric_limits<long long>::max()) throw NumericError("rational overflow");
  return static_cast<long long>(a);
}
}  // namespace

Rational Rational::make(__int128 n, __int128 d) {
  if (d == 0) throw NumericError("rational division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 an = n < 0 ? -n : n;
  if (an != 0) {
    long long g = gcd128(an, d);
    n /= g;
    d /= g;
  } else {
    d = 1;
  }
  constexpr __int128 lim = std::numeric_limits<long long>::max();
  if (n > lim || n < -lim || d > lim) throw NumericError("rational overflow");
  Rational r;
  r.num_ = static_cast<long long>(n);
  r.den_ = static_cast<long long>(d);
  return r;
}

void Rational::normalize() { *this = make(num_, den_); }

Rational Rational::from_double(double x) {
  constexpr long long kDen = 1LL << 24;
  const double scaled = x * static_cast<double>(kDen);
  const double rounded = std::nearbyint(scaled);
  if (std::abs(scaled - rounded) > 1e-9 * std::max(1.0, std::abs(scaled)) ||
      std::abs(rounded) > 9e15)
    throw NumericError("value not representable in exact rational mode");
  return make(static_cast<__int128>(static_cast<long long>(rounded)), kDen);
}

namespace {

template <class T>
class Tableau {
 public:
  using Ops = ScalarOps<T>;

  Tableau(const std::vector<std::vector<T>>& A, const std::vector<T>& b, const std::vector<T>& c)
      : m_(A.size()), nfree_(c.size()) {
    // columns: [u_0..u_{n-1}, v_0..v_{n-1}, s_0..s_{m-1}, artificials...]
    nsplit_ = 2 * nfree_;
    ncols_ = nsplit_ + m_;
    rows_.assign(m_, std::vector<T>(ncols_, Ops::zero()));
    rhs_.assign(m_, Ops::zero());
    basis_.assign(m_, -1);
    cost2_.assign(ncols_, Ops::zero());
    for (std::size_t j = 0; j < nfree_; ++j) {
      cost2_[j] = c[j];
      cost2_[nfree_ + j] = -c[j];
    }

    std::vector<std::size_t> needs_artificial;
    for (std::size_t i = 0; i < m_; ++i) {
      const bool flip = b[i] < Ops::zero();
      const T sign = flip ? T(-1) : T(1);
      for (std::size_t j = 0; j < nfree_; ++j) {
        rows_[i][j] = sign * A[i][j];
        rows_[i][nfree_ + j] = -(sign * A[i][j]);
      }
      rows_[i][nsplit_ + i] = sign;
      rhs_[i] = sign * b[i];
      if (flip)
        needs_artificial.push_back(i);
      else
        basis_[i] = static_cast<int>(nsplit_ + i);
    }
    first_artificial_ = ncols_;
    for (std::size_t i : needs_artificial) {
      for (auto& row : rows_) row.push_back(Ops::zero());
      cost2_.push_back(Ops::zero());
      rows_[i][ncols_] = T(1);
      basis_[i] = static_cast<int>(ncols_);
      ++ncols_;
    }
  }

  LpStatus run_two_phases() {
    if (first_artificial_ < ncols_) {
      std::vector<T> cost1(ncols_, Ops::zero());
      for (std::size_t j = first_artificial_; j < ncols_; ++j) cost1[j] = T(1);
      const LpStatus s1 = iterate(cost1, /*ban_artificials=*/false);
      if (s1 != LpStatus::Optimal) return s1;
      T infeas = Ops::zero();
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] >= static_cast<int>(first_artificial_)) infeas += rhs_[i];
      if (infeas > Ops::tol()) return LpStatus::Infeasible;
      drive_out_artificials();
    }
    return iterate(cost2_, /*ban_artificials=*/true);
  }

  std::vector<T> primal_free() const {
    std::vector<T> full(ncols_, Ops::zero());
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= 0) full[basis_[i]] = rhs_[i];
    std::vector<T> x(nfree_, Ops::zero());
    for (std::size_t j = 0; j < nfree_; ++j) x[j] = full[j] - full[nfree_ + j];
    return x;
  }

  // Multiplier for original row i is the negated reduced cost of its slack.
  std::vector<T> duals() const {
    std::vector<T> cbar = reduced_costs(cost2_);
    std::vector<T> y(m_, Ops::zero());
    for (std::size_t i = 0; i < m_; ++i) y[i] = -cbar[nsplit_ + i];
    return y;
  }

 private:
  // Basic artificials (value 0 after a feasible phase 1) must leave the basis
  // before phase 2, otherwise a later pivot could push them positive again.
  // A row with no usable pivot column is redundant and stays inert.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < static_cast<int>(first_artificial_)) continue;
      std::size_t best = first_artificial_;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (Ops::is_zero(rows_[i][j])) continue;
        if (best == first_artificial_ || Ops::abs(rows_[i][best]) < Ops::abs(rows_[i][j]))
          best = j;
      }
      if (best < first_artificial_) pivot(i, best, nullptr);
    }
  }

  std::vector<T> reduced_costs(const std::vector<T>& cost) const {
    std::vector<T> cbar = cost;
    for (std::size_t i = 0; i < m_; ++i) {
      const int bj = basis_[i];
      if (bj < 0 || Ops::is_zero(cost[bj])) continue;
      for (std::size_t j = 0; j < ncols_; ++j) cbar[j] -= cost[bj] * rows_[i][j];
    }
    return cbar;
  }

  LpStatus iterate(const std::vector<T>& cost, bool ban_artificials) {
    std::vector<T> cbar = reduced_costs(cost);
    const std::size_t limit_col = ban_artificials ? first_artificial_ : ncols_;
    const long max_iter = 200 + 40L * static_cast<long>(m_ + ncols_);
    long stall = 0;
    bool bland = false;

    for (long it = 0; it < max_iter; ++it) {
      // entering column
      std::size_t enter = limit_col;
      if (bland) {
        for (std::size_t j = 0; j < limit_col; ++j)
          if (cbar[j] < -Ops::tol()) {
            enter = j;
            break;
          }
      } else {
        T best = -Ops::tol();
        for (std::size_t j = 0; j < limit_col; ++j)
          if (cbar[j] < best) {
            best = cbar[j];
            enter = j;
          }
      }
      if (enter == limit_col) return LpStatus::Optimal;

      // ratio test
      std::size_t leave = m_;
      for (std::size_t i = 0; i < m_; ++i) {
        if (rows_[i][enter] <= Ops::tol()) continue;
        if (leave == m_) {
          leave = i;
          continue;
        }
        const T lhs = rhs_[i] * rows_[leave][enter];
        const T rhs = rhs_[leave] * rows_[i][enter];
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[leave])) leave = i;
      }
      if (leave == m_) return LpStatus::Unbounded;

      if (Ops::is_zero(rhs_[leave])) {
        if (++stall > 2 * static_cast<long>(m_) + 20) bland = true;
      } else {
        stall = 0;
      }
      pivot(leave, enter, &cbar);
    }
    return LpStatus::IterationLimit;
  }

  void pivot(std::size_t r, std::size_t c, std::vector<T>* cbar) {
    const T p = rows_[r][c];
    for (std::size_t j = 0; j < ncols_; ++j) rows_[r][j] = rows_[r][j] / p;
    rhs_[r] = rhs_[r] / p;
    rows_[r][c] = T(1);  // kill roundoff on the pivot itself
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || Ops::is_zero(rows_[i][c])) continue;
      const T f = rows_[i][c];
      for (std::size_t j = 0; j < ncols_; ++j) rows_[i][j] -= f * rows_[r][j];
      rows_[i][c] = Ops::zero();
      rhs_[i] -= f * rhs_[r];
    }
    if (cbar != nullptr && !Ops::is_zero((*cbar)[c])) {
      const T f = (*cbar)[c];
      for (std::size_t j = 0; j < ncols_; ++j) (*cbar)[j] -= f * rows_[r][j];
      (*cbar)[c] = Ops::zero();
    }
    basis_[r] = static_cast<int>(c);
  }

  std::size_t m_, nfree_, nsplit_, ncols_;
  std::size_t first_artificial_;
  std::vector<std::vector<T>> rows_;
  std::vector<T> rhs_;
  std::vector<T> cost2_;
  std::vector<int> basis_;
};

}  // namespace

template <class T>
LpResult<T> solve_inequality_lp(const std::vector<std::vector<T>>& A, const std::vector<T>& b,
                                const std::vector<T>& c) {
  if (A.size() != b.size()) throw DomainError("lp: row count mismatch");
  for (const auto& row : A)
    if (row.size() != c.size()) throw DomainError("lp: column count mismatch");

  Tableau<T> t(A, b, c);
  LpResult<T> res;
  res.status = t.run_two_phases();
  if (res.status != LpStatus::Optimal) return res;
  res.x = t.primal_free();
  res.dual = t.duals();
  res.objective = ScalarOps<T>::zero();
  for (std::size_t j = 0; j < c.size(); ++j) res.objective += c[j] * res.x[j];
  return res;
}

template LpResult<double> solve_inequality_lp<double>(const std::vector<std::vector<double>>&,
                                                      const std::vector<double>&,
                                                      const std::vector<double>&);
template LpResult<Rational> solve_inequality_lp<Rational>(
    const std::vector<std::vector<Rational>>&, const std::vector<Rational>&,
    const std::vector<Rational>&);

}  // namespace curvgraph::lp
