#pragma once

// Angles and distances between numeric subspaces of C^n (R^n embeds as the
// real case). omega_i are the principal-angle sines.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "sh/errors.hpp"
#include "sh/exterior.hpp"

namespace sh {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Subspace of C^n held by an orthonormal basis (columns of `onb`).
class NumericSubspace {
 public:
  /// Orthonormalizes the columns of `basis`; throws on numerical rank deficiency.
  static NumericSubspace from_basis(const CMatrix& basis, double rank_tol = 1e-10) {
    if (basis.cols() == 0 || basis.rows() == 0) throw MathError("empty subspace basis");
    if (basis.cols() > basis.rows()) throw MathError("more basis vectors than ambient dimension");
    Eigen::JacobiSVD<CMatrix> svd(basis, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= rank_tol * s(0)) throw MathError("rank-deficient subspace basis");
    return NumericSubspace(svd.matrixU());
  }
  static NumericSubspace from_vectors(const std::vector<CVector>& vs, double rank_tol = 1e-10) {
    if (vs.empty()) throw MathError("empty subspace basis");
    CMatrix m(vs.front().size(), static_cast<Eigen::Index>(vs.size()));
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (vs[i].size() != m.rows()) throw MathError("ambient dimension mismatch");
      m.col(static_cast<Eigen::Index>(i)) = vs[i];
    }
    return from_basis(m, rank_tol);
  }
  /// Trusts that the columns are already orthonormal (checked to `tol`).
  static NumericSubspace from_onb(const CMatrix& onb, double tol = 1e-9) {
    const CMatrix g = onb.adjoint() * onb;
    if ((g - CMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() > tol)
      throw MathError("basis is not orthonormal");
    return NumericSubspace(onb);
  }

  std::size_t ambient() const { return static_cast<std::size_t>(onb_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(onb_.cols()); }
  const CMatrix& onb() const { return onb_; }
  CVector vector(std::size_t i) const { return onb_.col(static_cast<Eigen::Index>(i)); }

  CVector project(const CVector& x) const { return onb_ * (onb_.adjoint() * x); }

 private:
  explicit NumericSubspace(CMatrix onb) : onb_(std::move(onb)) {}
  CMatrix onb_;
};

struct PrincipalData {
  std::vector<double> lambdas;  // descending
  std::vector<double> omegas;   // ascending
  CMatrix x_basis;              // d columns in A, first f aligned
  CMatrix y_basis;              // e columns in B, first f aligned
};

/// Cosines above this switch omega to the residual route.
inline constexpr double kResidualSwitch = 1.0 - 1e-6;

/// omega(X, Y) = |X ^ Y| / (|X| |Y|).
inline double proj_dist(const CVector& x, const CVector& y) {
  const double nx = x.norm(), ny = y.norm();
  if (nx == 0.0 || ny == 0.0) throw MathError("projective distance of a zero vector");
  const CVector u = x / nx, v = y / ny;
  // residual form of |u ^ v|, no cancellation near 0
  return std::min(1.0, (v - u * u.dot(v)).norm());
}

/// omega(X, B) = |X - P_B X| / |X|.
inline double dist_point_subspace(const CVector& x, const NumericSubspace& b) {
  if (x.size() != static_cast<Eigen::Index>(b.ambient())) throw MathError("ambient dimension mismatch");
  const double nx = x.norm();
  if (nx == 0.0) throw MathError("distance of a zero vector");
  return std::min(1.0, (x - b.project(x)).norm() / nx);
}

inline PrincipalData principal_data(const NumericSubspace& a, const NumericSubspace& b) {
  if (a.ambient() != b.ambient()) throw MathError("ambient dimension mismatch");
  const CMatrix m = a.onb().adjoint() * b.onb();
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const std::size_t f = std::min(a.dim(), b.dim());
  PrincipalData out;
  out.x_basis = a.onb() * svd.matrixU();
  out.y_basis = b.onb() * svd.matrixV();
  bool need_residual = false;
  for (std::size_t i = 0; i < f; ++i) {
    const double l = std::clamp(svd.singularValues()(static_cast<Eigen::Index>(i)), 0.0, 1.0);
    out.lambdas.push_back(l);
    out.omegas.push_back(std::sqrt((1.0 - l) * (1.0 + l)));
    if (l > kResidualSwitch) need_residual = true;
  }
  if (need_residual) {
    // singular values of (I - P_B) A, ascending, are the omegas (padded by ones)
    const CMatrix r = a.onb() - b.onb() * (b.onb().adjoint() * a.onb());
    Eigen::JacobiSVD<CMatrix> rs(r);
    std::vector<double> sv(rs.singularValues().data(), rs.singularValues().data() + rs.singularValues().size());
    std::sort(sv.begin(), sv.end());
    for (std::size_t i = 0; i < f; ++i)
      if (out.lambdas[i] > kResidualSwitch) out.omegas[i] = std::min(1.0, sv[i]);
  }
  return out;
}

/// omega_i(A, B) for 1 <= i <= min(d, e).
inline double omega_i(const NumericSubspace& a, const NumericSubspace& b, std::size_t i) {
  const std::size_t f = std::min(a.dim(), b.dim());
  if (i < 1 || i > f) throw MathError("omega index out of range");
  return principal_data(a, b).omegas[i - 1];
}

/// mu(A, B) = prod_k omega_k(A, B).
inline double mu(const NumericSubspace& a, const NumericSubspace& b) {
  double prod = 1.0;
  for (double w : principal_data(a, b).omegas) prod *= w;
  return prod;
}

/// |X_1^..^X_d^Y_1^..^Y_e| / (|X_1^..^X_d| |Y_1^..^Y_e|), for d + e <= n.
inline double mu_wedge(const std::vector<CVector>& a_basis, const std::vector<CVector>& b_basis) {
  if (a_basis.empty() || b_basis.empty()) throw MathError("empty basis");
  const auto n = a_basis.front().size();
  if (static_cast<Eigen::Index>(a_basis.size() + b_basis.size()) > n)
    throw MathError("mu_wedge needs d + e <= n");
  std::vector<CVector> all = a_basis;
  all.insert(all.end(), b_basis.begin(), b_basis.end());
  const double da = gen_det(a_basis), db = gen_det(b_basis);
  if (da == 0.0 || db == 0.0) throw MathError("rank-deficient basis");
  return gen_det(all) / (da * db);
}

inline NumericSubspace orth_complement(const NumericSubspace& b) {
  const auto n = static_cast<Eigen::Index>(b.ambient());
  const auto e = static_cast<Eigen::Index>(b.dim());
  if (e == 0 || e == n) throw MathError("orthogonal complement needs 0 < e < n");
  Eigen::HouseholderQR<CMatrix> qr(b.onb());
  const CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  return NumericSubspace::from_onb(q.rightCols(n - e));
}

}  // namespace sh
