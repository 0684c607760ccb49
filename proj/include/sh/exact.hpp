#pragma once

// Exact integer and rational linear algebra: Hermite normal form, integer
// kernels, Smith diagonals and Gaussian elimination over any exact field.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sh/errors.hpp"

namespace sh {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using IntMatrix = std::vector<IntVector>;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_zero(const Integer& x) { return sgn(x) == 0; }

/// Parses "a", "-a" or "a/b" into a canonical rational.
inline Rational parse_rational(const std::string& text) {
  Rational r;
  if (text.empty() || r.set_str(text, 10) != 0) {
    throw SpecError("malformed rational '" + text + "'");
  }
  if (sgn(r.get_den()) == 0) throw SpecError("zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

/// Canonical "num/den" serialization (integers keep the "/1" suffix off).
inline std::string to_string(const Rational& r) { return r.get_str(10); }

inline Integer lcm_of_denominators(const RationalVector& v) {
  Integer l = 1;
  for (const Rational& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

namespace detail {

// floor division for mpz (C++ '/' truncates toward zero).
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Unimodular combination of rows r and s so that row r receives
// gcd(A[r][col], A[s][col]) and row s gets 0 in that column.
inline void gcd_combine(IntMatrix& a, std::size_t r, std::size_t s, std::size_t col) {
  const Integer x = a[r][col];
  const Integer y = a[s][col];
  Integer g, u, v;
  mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  const Integer xg = x / g;
  const Integer yg = y / g;
  for (std::size_t k = 0; k < a[r].size(); ++k) {
    const Integer ar = a[r][k];
    const Integer as = a[s][k];
    a[r][k] = u * ar + v * as;
    a[s][k] = -yg * ar + xg * as;
  }
}

}  // namespace detail

/// Row-style Hermite normal form of the first `cols` columns, applied in place
/// to whole rows (so augmented columns follow along). Returns the rank.
inline std::size_t hermite_in_place(IntMatrix& a, std::size_t cols) {
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    for (std::size_t i = row + 1; i < a.size(); ++i) {
      if (!is_zero(a[i][col])) detail::gcd_combine(a, row, i, col);
    }
    if (is_zero(a[row][col])) continue;
    if (sgn(a[row][col]) < 0) {
      for (Integer& x : a[row]) x = -x;
    }
    for (std::size_t k = 0; k < row; ++k) {
      if (is_zero(a[k][col])) continue;
      const Integer q = detail::floor_div(a[k][col], a[row][col]);
      for (std::size_t j = 0; j < a[k].size(); ++j) a[k][j] -= q * a[row][j];
    }
    ++row;
  }
  return row;
}

/// Hermite normal form of the row lattice; zero rows dropped.
inline IntMatrix hermite_form(IntMatrix rows) {
  if (rows.empty()) return rows;
  const std::size_t rank = hermite_in_place(rows, rows.front().size());
  rows.resize(rank);
  return rows;
}

/// Index [Z^dim : L] of the lattice spanned by `rows`; nullopt if L is not of full rank.
inline std::optional<Integer> lattice_index(const IntMatrix& rows, std::size_t dim) {
  IntMatrix h = hermite_form(rows);
  if (h.size() != dim) return std::nullopt;
  Integer index = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    // pivots of a full-rank HNF sit on the diagonal
    index *= h[i][i];
  }
  return index;
}

/// Basis of the (automatically saturated) lattice {x in Z^D : M x = 0}.
inline IntMatrix integer_kernel(const IntMatrix& m, std::size_t dim) {
  const std::size_t r = m.size();
  IntMatrix aug(dim, IntVector(r + dim, 0));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < r; ++j) aug[i][j] = m[j][i];
    aug[i][r + i] = 1;
  }
  const std::size_t rank = hermite_in_place(aug, r);
  IntMatrix kernel;
  for (std::size_t i = rank; i < dim; ++i) {
    kernel.emplace_back(aug[i].begin() + static_cast<std::ptrdiff_t>(r), aug[i].end());
  }
  // the cofactor rows can be enormous; the HNF of the kernel itself is not
  return hermite_form(std::move(kernel));
}

/// Nonzero Smith invariants d_1 | d_2 | ... of an integer matrix.
inline IntVector smith_diagonal(IntMatrix a) {
  IntVector diag;
  if (a.empty()) return diag;
  const std::size_t rows = a.size();
  const std::size_t cols = a.front().size();
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (is_zero(a[i][j])) continue;
          if (!best || abs(a[i][j]) < abs(a[best->first][best->second])) best = {{i, j}};
        }
      }
      if (!best) return diag;
      std::swap(a[t], a[best->first]);
      for (auto& row : a) std::swap(row[t], row[best->second]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        const Integer q = detail::floor_div(a[i][t], a[t][t]);
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (!is_zero(a[i][t])) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        const Integer q = detail::floor_div(a[t][j], a[t][t]);
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (!is_zero(a[t][j])) clean = false;
      }
      if (!clean) continue;
      std::optional<std::size_t> bad;
      for (std::size_t i = t + 1; i < rows && !bad; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (!is_zero(Integer(a[i][j] % a[t][t]))) {
            bad = i;
            break;
          }
        }
      }
      if (!bad) break;
      for (std::size_t j = t; j < cols; ++j) a[t][j] += a[*bad][j];
    }
    diag.push_back(abs(a[t][t]));
  }
  return diag;
}

/// Reduced row echelon form over an exact field. `Scalar` needs exact +,-,*,/
/// and `is_zero` / `inverse` overloads. Returns the pivot columns.
template <typename Scalar>
std::vector<std::size_t> reduce_rows(std::vector<std::vector<Scalar>>& a) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  const std::size_t cols = a.front().size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t sel = row;
    while (sel < a.size() && is_zero(a[sel][col])) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[row], a[sel]);
    const Scalar inv_pivot = inverse(a[row][col]);
    for (std::size_t j = col; j < cols; ++j) a[row][j] = a[row][j] * inv_pivot;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == row || is_zero(a[i][col])) continue;
      const Scalar f = a[i][col];
      for (std::size_t j = col; j < cols; ++j) a[i][j] = a[i][j] - f * a[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

/// Rational scalar adapter for reduce_rows.
struct Q {
  Rational v;
  Q() = default;
  Q(Rational x) : v(std::move(x)) {}
  friend Q operator*(const Q& a, const Q& b) { return Q(Rational(a.v * b.v)); }
  friend Q operator-(const Q& a, const Q& b) { return Q(Rational(a.v - b.v)); }
  friend bool is_zero(const Q& a) { return sgn(a.v) == 0; }
  friend Q inverse(const Q& a) { return Q(Rational(Rational(1) / a.v)); }
};

inline std::vector<std::vector<Q>> to_q(const RationalMatrix& m) {
  std::vector<std::vector<Q>> out;
  out.reserve(m.size());
  for (const auto& row : m) out.emplace_back(row.begin(), row.end());
  return out;
}

inline std::size_t rational_rank(const RationalMatrix& m) {
  auto a = to_q(m);
  return reduce_rows(a).size();
}

/// Exact determinant of a square rational matrix.
inline Rational rational_det(const RationalMatrix& m) {
  const std::size_t n = m.size();
  RationalMatrix a = m;
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && is_zero(a[sel][col])) ++sel;
    if (sel == n) return Rational(0);
    if (sel != col) {
      std::swap(a[sel], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t i = col + 1; i < n; ++i) {
      if (is_zero(a[i][col])) continue;
      const Rational f = a[i][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  return det;
}

/// Solves m x = b exactly for square invertible m.
inline RationalVector rational_solve(const RationalMatrix& m, const RationalVector& b) {
  const std::size_t n = m.size();
  RationalMatrix aug(n, RationalVector(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n] = b[i];
  }
  auto q = to_q(aug);
  const auto pivots = reduce_rows(q);
  if (pivots.size() != n || pivots.back() != n - 1) {
    throw MathError("singular rational system");
  }
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = q[i][n].v;
  return x;
}

}  // namespace sh
