#pragma once

// Subspaces of K^n given by an exact basis, and the exact complements
// (phi-orthogonal over K, Hermitian over K').

#include <cstddef>
#include <utility>
#include <vector>

#include "sh/errors.hpp"
#include "sh/exact.hpp"
#include "sh/exterior.hpp"
#include "sh/geometry.hpp"
#include "sh/numberfield.hpp"

namespace sh {

using KVector = std::vector<FieldElement>;
using KMatrix = std::vector<KVector>;

/// Exact rank of a matrix over K.
inline std::size_t rank_over_k(KMatrix rows) { return reduce_rows(rows).size(); }

/// Basis of {x in K^n : sum_i rows[r][i] x_i = 0 for all r} (the phi-kernel).
inline KMatrix kernel_over_k(const FieldPtr& k, KMatrix rows, std::size_t n) {
  const auto pivots = reduce_rows(rows);
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  KMatrix basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    KVector x(n, k->zero());
    x[free] = k->one();
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -rows[r][free];
    basis.push_back(std::move(x));
  }
  return basis;
}

/// phi(x, y) = sum_i x_i y_i.
inline FieldElement phi(const KVector& x, const KVector& y) {
  if (x.size() != y.size() || x.empty()) throw MathError("phi of vectors of different lengths");
  FieldElement acc = x[0] * y[0];
  for (std::size_t i = 1; i < x.size(); ++i) acc = acc + x[i] * y[i];
  return acc;
}

inline CVector embed(const KVector& x, std::size_t j) {
  CVector out(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) out(static_cast<Eigen::Index>(i)) = embed(x[i], j);
  return out;
}

inline KVector transported(const KVector& x, const FieldPtr& target) {
  KVector out;
  out.reserve(x.size());
  for (const auto& c : x) out.push_back(c.transported(target));
  return out;
}

/// S^d subset K^n with an exact full-rank basis and cached Plucker coordinates.
class SubspaceOverK {
 public:
  SubspaceOverK(FieldPtr field, KMatrix basis) : field_(std::move(field)), basis_(std::move(basis)) {
    if (basis_.empty()) throw MathError("subspace needs at least one basis vector");
    n_ = basis_.front().size();
    if (n_ == 0 || n_ > kMaxAmbient) throw MathError("ambient dimension must be in 1..16");
    for (const auto& row : basis_) {
      if (row.size() != n_) throw MathError("basis rows of different lengths");
      for (const auto& x : row)
        if (x.field() != field_ && !x.field()->same_as(*field_)) throw MathError("basis entry from another field");
    }
    if (rank_over_k(basis_) != basis_.size()) throw MathError("rank-deficient basis");
    plucker_ = plucker(basis_);
  }

  const FieldPtr& field() const { return field_; }
  std::size_t ambient() const { return n_; }
  std::size_t dim() const { return basis_.size(); }
  const KMatrix& basis() const { return basis_; }
  const ExactMultiVector& plucker_coords() const { return plucker_; }

  /// sigma_j of the basis rows.
  std::vector<CVector> embedded_basis(std::size_t j) const {
    std::vector<CVector> out;
    for (const auto& row : basis_) out.push_back(embed(row, j));
    return out;
  }
  /// sigma_1 image as a numeric subspace of C^n.
  NumericSubspace numeric(std::size_t j = 0) const { return NumericSubspace::from_vectors(embedded_basis(j)); }

  bool contains(const KVector& x) const {
    KMatrix rows = basis_;
    rows.push_back(x);
    return rank_over_k(std::move(rows)) == basis_.size();
  }
  bool contains(const SubspaceOverK& other) const {
    for (const auto& row : other.basis_)
      if (!contains(row)) return false;
    return true;
  }
  bool same_as(const SubspaceOverK& other) const {
    return dim() == other.dim() && field_->same_as(*other.field_) && contains(other);
  }

 private:
  FieldPtr field_;
  std::size_t n_ = 0;
  KMatrix basis_;
  ExactMultiVector plucker_{1, 0, FieldElement()};
};

/// S^{phi,perp} = {x : phi(x, s) = 0 for all s in S}, over K.
inline SubspaceOverK phi_complement(const SubspaceOverK& s) {
  if (s.dim() == s.ambient()) throw MathError("complement needs 0 < d < n");
  return SubspaceOverK(s.field(), kernel_over_k(s.field(), s.basis(), s.ambient()));
}

/// Coefficientwise transport to K' (sigma_1 image gets complex conjugated).
inline SubspaceOverK conjugate_subspace(const SubspaceOverK& s) {
  const FieldPtr kc = s.field()->conjugate();
  KMatrix rows;
  for (const auto& row : s.basis()) rows.push_back(transported(row, kc));
  return SubspaceOverK(kc, std::move(rows));
}

/// S^perp, defined over K': its sigma_1 image is the Hermitian complement of sigma_1(S).
inline SubspaceOverK hermitian_complement(const SubspaceOverK& s) { return conjugate_subspace(phi_complement(s)); }

}  // namespace sh
