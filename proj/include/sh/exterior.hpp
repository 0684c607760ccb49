#pragma once

// Exterior algebra of K^n / C^n with coordinates on the basis e_I, I a strictly
// increasing index set. Index sets are bitmasks ordered lexicographically.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sh/errors.hpp"
#include "sh/numberfield.hpp"

namespace sh {

inline constexpr std::size_t kMaxAmbient = 16;

inline bool is_zero(const std::complex<double>& z) { return z == std::complex<double>(0.0, 0.0); }
inline bool is_zero(double x) { return x == 0.0; }

namespace detail {

struct SubsetTable {
  std::vector<std::uint32_t> masks;                          // lexicographic order
  std::vector<std::pair<std::uint32_t, std::size_t>> lookup;  // sorted by mask
};

inline void lex_subsets(std::size_t n, std::size_t m, std::size_t start, std::uint32_t acc,
                        std::vector<std::uint32_t>& out) {
  if (m == 0) {
    out.push_back(acc);
    return;
  }
  for (std::size_t i = start; i + m <= n; ++i) lex_subsets(n, m - 1, i + 1, acc | (1u << i), out);
}

inline const SubsetTable& subset_table(std::size_t n, std::size_t m) {
  thread_local std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const SubsetTable>> cache;
  auto& slot = cache[{n, m}];
  if (!slot) {
    auto t = std::make_shared<SubsetTable>();
    lex_subsets(n, m, 0, 0, t->masks);
    for (std::size_t r = 0; r < t->masks.size(); ++r) t->lookup.emplace_back(t->masks[r], r);
    std::sort(t->lookup.begin(), t->lookup.end());
    slot = std::move(t);
  }
  return *slot;
}

// (-1)^{#{(i,j) : i in a, j in b, i > j}}
inline int merge_sign(std::uint32_t a, std::uint32_t b) {
  int inversions = 0;
  for (std::uint32_t rest = b; rest != 0; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    inversions += std::popcount(a >> (j + 1));
  }
  return (inversions & 1) ? -1 : 1;
}

inline std::complex<double> conj_if_complex(const std::complex<double>& z) { return std::conj(z); }
inline double conj_if_complex(double x) { return x; }

}  // namespace detail

/// Grade-m element of the exterior algebra of an n-dimensional space.
template <typename Scalar>
class MultiVector {
 public:
  MultiVector(std::size_t n, std::size_t m, const Scalar& zero) : n_(n), m_(m) {
    if (n == 0 || n > kMaxAmbient) throw MathError("ambient dimension must be in 1..16");
    if (m > n) throw MathError("grade exceeds ambient dimension");
    coords_.assign(detail::subset_table(n, m).masks.size(), zero);
  }

  /// Grade-1 element with the given coordinates.
  static MultiVector from_vector(const std::vector<Scalar>& v) {
    if (v.empty()) throw MathError("empty vector");
    MultiVector out(v.size(), 1, v.front() - v.front());
    for (std::size_t i = 0; i < v.size(); ++i) out.coords_[i] = v[i];
    return out;
  }

  std::size_t ambient() const { return n_; }
  std::size_t grade() const { return m_; }
  std::size_t size() const { return coords_.size(); }
  const std::vector<Scalar>& coords() const { return coords_; }
  const Scalar& operator[](std::size_t rank) const { return coords_[rank]; }
  Scalar& operator[](std::size_t rank) { return coords_[rank]; }
  const std::vector<std::uint32_t>& masks() const { return detail::subset_table(n_, m_).masks; }

  std::size_t rank_of(std::uint32_t mask) const {
    const auto& lk = detail::subset_table(n_, m_).lookup;
    const auto it = std::lower_bound(lk.begin(), lk.end(), std::make_pair(mask, std::size_t{0}));
    if (it == lk.end() || it->first != mask) throw MathError("index set of wrong grade");
    return it->second;
  }
  const Scalar& at(std::uint32_t mask) const { return coords_[rank_of(mask)]; }

  /// Index set of coordinate `rank` as 1-based sorted indices.
  std::vector<std::size_t> index_set(std::size_t rank) const {
    std::vector<std::size_t> out;
    for (std::uint32_t r = masks()[rank]; r != 0; r &= r - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(r)) + 1);
    return out;
  }

  friend MultiVector operator+(const MultiVector& a, const MultiVector& b) {
    check_same_shape(a, b);
    MultiVector out = a;
    for (std::size_t i = 0; i < out.coords_.size(); ++i) out.coords_[i] = a.coords_[i] + b.coords_[i];
    return out;
  }
  friend MultiVector operator*(const Scalar& s, const MultiVector& a) {
    MultiVector out = a;
    for (auto& c : out.coords_) c = s * c;
    return out;
  }

  static void check_same_shape(const MultiVector& a, const MultiVector& b) {
    if (a.n_ != b.n_) throw MathError("ambient dimension mismatch");
    if (a.m_ != b.m_) throw MathError("grade mismatch");
  }

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<Scalar> coords_;
};

/// u ^ v, grade a+b.
template <typename Scalar>
MultiVector<Scalar> wedge(const MultiVector<Scalar>& u, const MultiVector<Scalar>& v) {
  if (u.ambient() != v.ambient()) throw MathError("ambient dimension mismatch");
  if (u.grade() + v.grade() > u.ambient()) throw MathError("grade overflow in wedge");
  const Scalar zero = u[0] - u[0];
  MultiVector<Scalar> out(u.ambient(), u.grade() + v.grade(), zero);
  const auto& um = u.masks();
  const auto& vm = v.masks();
  for (std::size_t i = 0; i < um.size(); ++i) {
    if (is_zero(u[i])) continue;
    for (std::size_t j = 0; j < vm.size(); ++j) {
      if ((um[i] & vm[j]) != 0 || is_zero(v[j])) continue;
      const std::size_t r = out.rank_of(um[i] | vm[j]);
      const Scalar prod = u[i] * v[j];
      if (detail::merge_sign(um[i], vm[j]) > 0) {
        out[r] = out[r] + prod;
      } else {
        out[r] = out[r] - prod;
      }
    }
  }
  return out;
}

/// X_1 ^ ... ^ X_d of the given rows (all of one ambient dimension).
template <typename Scalar>
MultiVector<Scalar> wedge_rows(const std::vector<std::vector<Scalar>>& rows) {
  if (rows.empty()) throw MathError("wedge of an empty family");
  MultiVector<Scalar> acc = MultiVector<Scalar>::from_vector(rows.front());
  for (std::size_t i = 1; i < rows.size(); ++i) acc = wedge(acc, MultiVector<Scalar>::from_vector(rows[i]));
  return acc;
}

/// Hermitian inner product on the e_I basis (conjugate-linear in v).
template <typename Scalar>
Scalar inner(const MultiVector<Scalar>& u, const MultiVector<Scalar>& v) {
  MultiVector<Scalar>::check_same_shape(u, v);
  Scalar acc{};
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * detail::conj_if_complex(v[i]);
  return acc;
}

template <typename Scalar>
double norm(const MultiVector<Scalar>& u) {
  double acc = 0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += std::norm(std::complex<double>(u[i]));
  return std::sqrt(acc);
}

using ComplexMultiVector = MultiVector<std::complex<double>>;
using ExactMultiVector = MultiVector<FieldElement>;

inline std::vector<std::complex<double>> to_std(const Eigen::VectorXcd& v) {
  return {v.data(), v.data() + v.size()};
}

/// D(X_1..X_m) = ||X_1 ^ ... ^ X_m||.
inline double gen_det(const std::vector<Eigen::VectorXcd>& xs) {
  std::vector<std::vector<std::complex<double>>> rows;
  for (const auto& x : xs) rows.push_back(to_std(x));
  return norm(wedge_rows(rows));
}

/// sigma_j applied coordinatewise to an exact multivector.
inline ComplexMultiVector embed(const ExactMultiVector& u, std::size_t j) {
  ComplexMultiVector out(u.ambient(), u.grade(), std::complex<double>(0, 0));
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = embed(u[i], j);
  return out;
}

inline bool is_zero(const ExactMultiVector& u) {
  return std::all_of(u.coords().begin(), u.coords().end(), [](const FieldElement& x) { return x.is_zero(); });
}

/// Projective normal form: divide by the first nonzero coordinate.
inline ExactMultiVector normalized(const ExactMultiVector& u) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i].is_zero()) continue;
    const FieldElement inv = u[i].inverse();
    ExactMultiVector out = u;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = out[k] * inv;
    return out;
  }
  throw MathError("normalizing the zero multivector");
}

/// Exact key of a multivector (use on normalized ones for projective dedup).
inline std::string key(const ExactMultiVector& u) {
  std::string s = std::to_string(u.ambient()) + ":" + std::to_string(u.grade()) + ":";
  for (const auto& c : u.coords()) s += c.key() + ";";
  return s;
}

/// Plucker coordinates of a numeric basis; throws when rank deficient.
inline ComplexMultiVector plucker(const std::vector<Eigen::VectorXcd>& basis, double tol = 1e-12) {
  std::vector<std::vector<std::complex<double>>> rows;
  double scale = 1;
  for (const auto& x : basis) {
    rows.push_back(to_std(x));
    scale *= x.norm();
  }
  ComplexMultiVector w = wedge_rows(rows);
  if (norm(w) <= tol * scale) throw MathError("rank-deficient basis");
  return w;
}

/// Exact Plucker coordinates of rows over K; throws when rank deficient.
inline ExactMultiVector plucker(const std::vector<std::vector<FieldElement>>& rows) {
  ExactMultiVector w = wedge_rows(rows);
  if (is_zero(w)) throw MathError("rank-deficient basis");
  return w;
}

}  // namespace sh
