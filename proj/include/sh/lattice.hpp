#pragma once

// The rho embedding K^n -> E^{np}, the lattices Lambda(S) = rho(O_K^n cap S)
// with exact integer coordinates, LLL reduction under a linear weighting and
// Fincke-Pohst enumeration.
//
// O_K^n is identified with Z^{np}: generator g = k*p + b is omega_b e_k.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "sh/errors.hpp"
#include "sh/exact.hpp"
#include "sh/numberfield.hpp"
#include "sh/subspace.hpp"

namespace sh {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using LRow = Eigen::Matrix<long double, 1, Eigen::Dynamic>;

/// rho(X) = (X^{[1]}, ..., X^{[p]}), block i holding coordinate i of every entry.
inline LVector rho(const KVector& x) {
  if (x.empty()) return LVector();
  const std::size_t n = x.size(), p = x.front().field()->degree();
  LVector out(static_cast<Eigen::Index>(n * p));
  for (std::size_t k = 0; k < n; ++k) {
    const auto c = real_coords_ld(x[k]);
    for (std::size_t i = 0; i < p; ++i) out(static_cast<Eigen::Index>(i * n + k)) = c[i];
  }
  return out;
}

/// Row g = k*p + b is rho(omega_b e_k).
inline LMatrix generator_images(const FieldPtr& k, std::size_t n) {
  const std::size_t p = k->degree();
  LMatrix g = LMatrix::Zero(static_cast<Eigen::Index>(n * p), static_cast<Eigen::Index>(n * p));
  for (std::size_t b = 0; b < p; ++b) {
    const auto c = real_coords_ld(k->basis_element(b));
    for (std::size_t kk = 0; kk < n; ++kk)
      for (std::size_t i = 0; i < p; ++i) g(static_cast<Eigen::Index>(kk * p + b), static_cast<Eigen::Index>(i * n + kk)) = c[i];
  }
  return g;
}

inline long double to_ld(const Integer& z) { return static_cast<long double>(z.get_d()); }

/// Sublattice of rho(O_K^n), held by an exact basis in Z^{np}.
class EmbeddedLattice {
 public:
  EmbeddedLattice(FieldPtr field, std::size_t n, IntMatrix basis)
      : field_(std::move(field)), n_(n), basis_(std::move(basis)) {
    gens_ = std::make_shared<const LMatrix>(generator_images(field_, n_));
    for (const auto& row : basis_)
      if (row.size() != ambient()) throw MathError("lattice basis row of wrong length");
    refresh_images();
  }

  /// rho(O_K^n) itself.
  static EmbeddedLattice full(const FieldPtr& field, std::size_t n) {
    const std::size_t dim = n * field->degree();
    IntMatrix id(dim, IntVector(dim, 0));
    for (std::size_t i = 0; i < dim; ++i) id[i][i] = 1;
    return EmbeddedLattice(field, n, std::move(id));
  }

  const FieldPtr& field() const { return field_; }
  std::size_t n() const { return n_; }
  std::size_t ambient() const { return n_ * field_->degree(); }
  std::size_t rank() const { return basis_.size(); }
  const IntMatrix& basis() const { return basis_; }
  const LMatrix& images() const { return images_; }
  const LMatrix& generator_image_matrix() const { return *gens_; }
  LMatrix gram() const { return images_ * images_.transpose(); }

  /// rho of the point with exact coordinates z in Z^{np}.
  LVector image(const IntVector& z) const {
    LRow row = LRow::Zero(static_cast<Eigen::Index>(ambient()));
    for (std::size_t g = 0; g < z.size(); ++g)
      if (sgn(z[g]) != 0) row += to_ld(z[g]) * gens_->row(static_cast<Eigen::Index>(g));
    return row.transpose();
  }
  /// sum_i coeffs_i basis_i.
  IntVector combine(const std::vector<long>& coeffs) const {
    IntVector z(ambient(), 0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i] == 0) continue;
      for (std::size_t g = 0; g < z.size(); ++g) z[g] += coeffs[i] * basis_[i][g];
    }
    return z;
  }
  /// The vector of O_K^n with coordinates z.
  KVector to_kvector(const IntVector& z) const {
    const std::size_t p = field_->degree();
    KVector x(n_, field_->zero());
    for (std::size_t k = 0; k < n_; ++k) {
      RationalVector c(p, Rational(0));
      for (std::size_t b = 0; b < p; ++b) {
        if (sgn(z[k * p + b]) == 0) continue;
        const FieldElement w = field_->basis_element(b);
        for (std::size_t i = 0; i < p; ++i) c[i] += Rational(z[k * p + b]) * w.coeffs()[i];
      }
      x[k] = field_->element(std::move(c));
    }
    return x;
  }
  /// Inverse of to_kvector; throws if x is not in O_K^n.
  IntVector from_kvector(const KVector& x) const {
    if (x.size() != n_) throw MathError("vector of wrong length");
    const std::size_t p = field_->degree();
    IntVector z(ambient());
    for (std::size_t k = 0; k < n_; ++k) {
      const RationalVector c = field_->to_integral_coords(x[k].coeffs());
      for (std::size_t b = 0; b < p; ++b) {
        if (c[b].get_den() != 1) throw MathError("vector is not integral");
        z[k * p + b] = c[b].get_num();
      }
    }
    return z;
  }

  /// Replaces the basis by another basis of the same lattice.
  void set_basis(IntMatrix basis) {
    basis_ = std::move(basis);
    refresh_images();
  }

 private:
  void refresh_images() {
    images_.resize(static_cast<Eigen::Index>(basis_.size()), static_cast<Eigen::Index>(ambient()));
    for (std::size_t i = 0; i < basis_.size(); ++i) images_.row(static_cast<Eigen::Index>(i)) = image(basis_[i]).transpose();
  }

  FieldPtr field_;
  std::size_t n_;
  IntMatrix basis_;
  std::shared_ptr<const LMatrix> gens_;
  LMatrix images_;
};

/// Integer rows spanning the K-linear equations phi(X, r) = 0 (r in `rows`)
/// on the coordinates c in Z^{np} of X.
inline IntMatrix subspace_equations(const FieldPtr& k, const KMatrix& rows, std::size_t n) {
  const std::size_t p = k->degree();
  IntMatrix out;
  for (const auto& r : rows) {
    // column g = k*p + b holds the power-basis coefficients of omega_b r_k
    RationalMatrix eq(p, RationalVector(n * p, Rational(0)));
    for (std::size_t kk = 0; kk < n; ++kk) {
      for (std::size_t b = 0; b < p; ++b) {
        const FieldElement prod = k->basis_element(b) * r[kk];
        for (std::size_t i = 0; i < p; ++i) eq[i][kk * p + b] = prod.coeffs()[i];
      }
    }
    for (auto& row : eq) {
      const Integer l = lcm_of_denominators(row);
      IntVector irow(row.size());
      for (std::size_t j = 0; j < row.size(); ++j) irow[j] = Rational(row[j] * l).get_num();
      out.push_back(std::move(irow));
    }
  }
  return out;
}

/// Lambda(S) = rho(O_K^n cap S), rank dp, with a saturated exact basis.
inline EmbeddedLattice lattice_of_subspace(const SubspaceOverK& s) {
  const std::size_t n = s.ambient(), p = s.field()->degree();
  if (s.dim() == n) return EmbeddedLattice::full(s.field(), n);
  // S = (S^{phi,perp})^{phi,perp}
  const KMatrix eqs = kernel_over_k(s.field(), s.basis(), n);
  IntMatrix basis = integer_kernel(subspace_equations(s.field(), eqs, n), n * p);
  if (basis.size() != s.dim() * p) throw MathError("lattice of subspace has unexpected rank");
  return EmbeddedLattice(s.field(), n, std::move(basis));
}

/// d(Lambda) = sqrt(det Gram); 1 for the zero lattice.
inline double det_lattice(const EmbeddedLattice& l) {
  if (l.rank() == 0) return 1.0;
  Eigen::HouseholderQR<LMatrix> qr(l.images().transpose());
  long double det = 1;
  const LMatrix r = qr.matrixQR();
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(l.rank()); ++i) det *= std::fabs(r(i, i));
  return static_cast<double>(det);
}

namespace detail {

inline Integer round_to_integer(long double x) {
  if (!std::isfinite(x)) throw MathError("LLL: non-finite Gram-Schmidt coefficient");
  Integer z;
  mpz_set_d(z.get_mpz_t(), static_cast<double>(std::nearbyint(x)));
  return z;
}

}  // namespace detail

/// LLL (delta = 0.99) of the integer rows of `coords` for the quadratic form
/// |c M|^2, where M maps Z^D to the weighted space. `coords` is transformed
/// by exact unimodular operations; floating Gram-Schmidt data is recomputed
/// from the exact rows, so no drift accumulates.
inline void lll_rows(IntMatrix& coords, const LMatrix& m, long double delta = 0.99L) {
  const std::size_t r = coords.size();
  if (r <= 1) return;
  const auto image = [&](const IntVector& z) {
    LRow row = LRow::Zero(m.cols());
    for (std::size_t g = 0; g < z.size(); ++g)
      if (sgn(z[g]) != 0) row += to_ld(z[g]) * m.row(static_cast<Eigen::Index>(g));
    return row;
  };
  std::vector<LRow> b(r);
  for (std::size_t i = 0; i < r; ++i) b[i] = image(coords[i]);
  std::vector<LRow> bstar(r);
  std::vector<long double> bnorm(r);
  std::vector<std::vector<long double>> mu(r, std::vector<long double>(r, 0));
  const auto gso_row = [&](std::size_t i) {
    bstar[i] = b[i];
    for (std::size_t j = 0; j < i; ++j) {
      mu[i][j] = bnorm[j] > 0 ? b[i].dot(bstar[j]) / bnorm[j] : 0;
      bstar[i] -= mu[i][j] * bstar[j];
    }
    bnorm[i] = bstar[i].squaredNorm();
  };
  for (std::size_t i = 0; i < r; ++i) gso_row(i);
  std::size_t k = 1;
  std::size_t guard = 0;
  while (k < r) {
    if (++guard > 1000000) throw MathError("LLL reduction did not terminate");
    gso_row(k);  // rows < k are current, row k may be stale
    for (std::size_t j = k; j-- > 0;) {
      if (std::fabs(mu[k][j]) <= 0.5L) continue;
      const Integer q = detail::round_to_integer(mu[k][j]);
      for (std::size_t g = 0; g < coords[k].size(); ++g) coords[k][g] -= q * coords[j][g];
      const long double qd = to_ld(q);
      for (std::size_t t = 0; t <= j; ++t) mu[k][t] -= qd * (t == j ? 1.0L : mu[j][t]);
    }
    b[k] = image(coords[k]);
    gso_row(k);
    if (bnorm[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * bnorm[k - 1]) {
      ++k;
    } else {
      std::swap(coords[k], coords[k - 1]);
      std::swap(b[k], b[k - 1]);
      gso_row(k - 1);
      gso_row(k);
      if (bnorm[k - 1] == 0 || bnorm[k] == 0) throw MathError("LLL: numerically singular Gram matrix");
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
}

/// LLL-reduced copy; `weight` (D x m) defines the form |rho(x) weight|^2
/// (identity when absent).
inline EmbeddedLattice lll_reduce(const EmbeddedLattice& l, const std::optional<LMatrix>& weight = std::nullopt) {
  if (l.rank() == 0) throw MathError("LLL of the zero lattice");
  IntMatrix coords = l.basis();
  const LMatrix m = weight ? LMatrix(l.generator_image_matrix() * *weight) : l.generator_image_matrix();
  lll_rows(coords, m);
  EmbeddedLattice out = l;
  out.set_basis(std::move(coords));
  return out;
}

struct EnumeratedPoint {
  std::vector<long> coeffs;  // relative to the basis given to enumerate
  long double norm2 = 0;
};

/// Fincke-Pohst: all nonzero integer x with |x B|^2 <= radius2, B = rows of `basis_images`.
/// Throws NotFound once more than `max_points` points have been produced.
inline std::vector<EnumeratedPoint> enumerate_ball(const LMatrix& basis_images, long double radius2,
                                                   std::size_t max_points = 4000000) {
  const auto r = static_cast<std::size_t>(basis_images.rows());
  std::vector<EnumeratedPoint> out;
  if (r == 0) return out;
  // g = u^T u from a QR of the images (the Gram matrix itself squares the conditioning)
  if (basis_images.cols() < basis_images.rows()) throw MathError("enumeration: basis images are dependent");
  const Eigen::HouseholderQR<LMatrix> qr(basis_images.transpose());
  LMatrix u = qr.matrixQR().topRows(static_cast<Eigen::Index>(r)).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    if (u(i, i) == 0) throw MathError("enumeration: basis images are dependent");
    if (u(i, i) < 0) u.row(i) = -u.row(i);
  }
  // Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
  std::vector<long double> qd(r);
  std::vector<std::vector<long double>> qo(r, std::vector<long double>(r, 0));
  for (std::size_t i = 0; i < r; ++i) {
    const long double d = u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    qd[i] = d * d;
    for (std::size_t j = i + 1; j < r; ++j) qo[i][j] = u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / d;
  }
  std::vector<long> x(r, 0);
  const std::function<void(std::size_t, long double)> rec = [&](std::size_t i, long double rest) {
    long double c = 0;
    for (std::size_t j = i + 1; j < r; ++j) c += qo[i][j] * static_cast<long double>(x[j]);
    const long double half = std::sqrt(std::max<long double>(rest, 0) / qd[i]);
    const long lo = static_cast<long>(std::ceil(-c - half - 1e-12L));
    const long hi = static_cast<long>(std::floor(-c + half + 1e-12L));
    for (long v = lo; v <= hi; ++v) {
      const long double t = static_cast<long double>(v) + c;
      const long double used = qd[i] * t * t;
      if (used > rest * (1 + 1e-12L) + 1e-300L) continue;
      x[i] = v;
      if (i == 0) {
        if (std::any_of(x.begin(), x.end(), [](long e) { return e != 0; })) {
          if (out.size() >= max_points) throw NotFound("enumeration exceeded its point budget");
          EnumeratedPoint pt;
          pt.coeffs = x;
          pt.norm2 = (LRow(Eigen::Map<const Eigen::Matrix<long, 1, Eigen::Dynamic>>(x.data(), static_cast<Eigen::Index>(r)).cast<long double>()) * basis_images).squaredNorm();
          out.push_back(std::move(pt));
        }
      } else {
        rec(i - 1, rest - used);
      }
    }
    x[i] = 0;
  };
  rec(r - 1, radius2);
  return out;
}

}  // namespace sh
