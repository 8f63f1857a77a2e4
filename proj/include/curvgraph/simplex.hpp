#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "curvgraph/errors.hpp"

namespace curvgraph::lp {

// Exact rational scalar for the pivoting mode used by the test-corpus
// cross-checks. Overflow is detected (via 128-bit intermediates) and raised,
// never wrapped.
class Rational {
 public:
  Rational() = default;
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

  static Rational from_double(double x);

  long long num() const { return num_; }
  long long den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return combine(a, b, /*subtract=*/false);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return combine(a, b, /*subtract=*/true);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num_) * b.num_;
    __int128 d = static_cast<__int128>(a.den_) * b.den_;
    return make(n, d);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw NumericError("rational division by zero");
    __int128 n = static_cast<__int128>(a.num_) * b.den_;
    __int128 d = static_cast<__int128>(a.den_) * b.num_;
    return make(n, d);
  }
  Rational operator-() const { return Rational(-num_, den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

 private:
  static Rational make(__int128 n, __int128 d);
  static Rational combine(const Rational& a, const Rational& b, bool subtract) {
    __int128 n = static_cast<__int128>(a.num_) * b.den_;
    __int128 m = static_cast<__int128>(b.num_) * a.den_;
    return make(subtract ? n - m : n + m, static_cast<__int128>(a.den_) * b.den_);
  }
  void normalize();

  long long num_ = 0;
  long long den_ = 1;
};

template <class T>
struct ScalarOps;

template <>
struct ScalarOps<double> {
  static double zero() { return 0.0; }
  static double tol() { return 1e-11; }
  static bool is_zero(double x) { return x > -tol() && x < tol(); }
  static double abs(double x) { return x < 0 ? -x : x; }
  static double to_double(double x) { return x; }
};

template <>
struct ScalarOps<Rational> {
  static Rational zero() { return Rational(0); }
  static Rational tol() { return Rational(0); }
  static bool is_zero(const Rational& x) { return x.num() == 0; }
  static Rational abs(const Rational& x) { return x < Rational(0) ? -x : x; }
  static double to_double(const Rational& x) { return x.to_double(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

template <class T>
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  T objective = ScalarOps<T>::zero();
  std::vector<T> x;     // values of the free variables
  std::vector<T> dual;  // one multiplier per row; y <= 0 and A^T y = c at optimum
};

// minimize c.x subject to A x <= b with x free.
//
// Free variables are split into positive parts, rows with negative right-hand
// side get artificial columns, and a textbook two-phase tableau simplex runs
// with Dantzig pricing, falling back to Bland's rule after a stall.
template <class T>
LpResult<T> solve_inequality_lp(const std::vector<std::vector<T>>& A, const std::vector<T>& b,
                                const std::vector<T>& c);

extern template LpResult<double> solve_inequality_lp<double>(
    const std::vector<std::vector<double>>&, const std::vector<double>&,
    const std::vector<double>&);
extern template LpResult<Rational> solve_inequality_lp<Rational>(
    const std::vector<std::vector<Rational>>&, const std::vector<Rational>&,
    const std::vector<Rational>&);

}  // namespace curvgraph::lp
