#pragma once

// Lattice points in the convex bodies of the going-down construction:
//   (i)   X* in Pi   (coefficients of the projection on S* in [-1/2, 1/2])
//   (ii)  |<X_T, frame_k>| <= bound_k
//   (iii) |X_0| <= C * residual_bound
// The body sits inside the ellipsoid |L X|^2 <= dim S* + #frame + 1, which is
// enumerated after an LLL reduction weighted by L.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sh/errors.hpp"
#include "sh/lattice.hpp"

namespace sh {

struct BodySpec {
  LMatrix pi_basis;                        // rows: images of the sublattice basis of (i)
  LMatrix frame;                           // rows: orthonormal, orthogonal to S*
  std::vector<long double> frame_bounds;   // one per frame row
  long double residual_bound = 1;          // (iii) at C = 1
  long double slack = 1e-9L;               // closed-boundary slack
};

struct BodyDecomposition {
  std::vector<long double> pi_coeffs;      // X* = sum pi_coeffs_i basis_i
  std::vector<long double> frame_coeffs;   // <X_T, frame_k>
  long double residual_norm = 0;           // |X_0|
};

inline void check_body(const BodySpec& b, std::size_t dim) {
  if (b.pi_basis.rows() > 0 && static_cast<std::size_t>(b.pi_basis.cols()) != dim) throw MathError("body: bad Pi basis");
  if (b.frame.rows() > 0 && static_cast<std::size_t>(b.frame.cols()) != dim) throw MathError("body: bad frame");
  if (static_cast<std::size_t>(b.frame.rows()) != b.frame_bounds.size()) throw MathError("body: one bound per frame vector");
  if (b.frame.rows() > 0) {
    const LMatrix g = b.frame * b.frame.transpose();
    if ((g - LMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() > 1e-9L) throw MathError("body: frame is not orthonormal");
    if (b.pi_basis.rows() > 0) {
      const long double scale = b.pi_basis.rowwise().norm().maxCoeff();
      if ((b.frame * b.pi_basis.transpose()).cwiseAbs().maxCoeff() > 1e-9L * scale) throw MathError("body: frame not orthogonal to S*");
    }
  }
}

/// Decomposition through the normal equations of the Pi basis.
inline BodyDecomposition decompose(const BodySpec& b, const LVector& x) {
  BodyDecomposition out;
  LVector rest = x;
  if (b.pi_basis.rows() > 0) {
    const LMatrix g = b.pi_basis * b.pi_basis.transpose();
    const LVector t = g.ldlt().solve(b.pi_basis * x);
    out.pi_coeffs.assign(t.data(), t.data() + t.size());
    rest -= b.pi_basis.transpose() * t;
  }
  if (b.frame.rows() > 0) {
    const LVector f = b.frame * x;
    out.frame_coeffs.assign(f.data(), f.data() + f.size());
    rest -= b.frame.transpose() * f;
  }
  out.residual_norm = rest.norm();
  return out;
}

/// Independent route: one least-squares solve (QR) against [Pi basis; frame].
inline BodyDecomposition decompose_independent(const BodySpec& b, const LVector& x) {
  const Eigen::Index np = b.pi_basis.rows(), nf = b.frame.rows();
  BodyDecomposition out;
  if (np + nf == 0) {
    out.residual_norm = x.norm();
    return out;
  }
  LMatrix a(x.size(), np + nf);
  if (np > 0) a.leftCols(np) = b.pi_basis.transpose();
  if (nf > 0) a.rightCols(nf) = b.frame.transpose();
  const LVector c = a.colPivHouseholderQr().solve(x);
  for (Eigen::Index i = 0; i < np; ++i) out.pi_coeffs.push_back(c(i));
  for (Eigen::Index i = 0; i < nf; ++i) out.frame_coeffs.push_back(c(np + i));
  out.residual_norm = (x - a * c).norm();
  return out;
}

struct BodyVerdict {
  bool pi_ok = true;
  bool frame_ok = true;
  bool residual_ok = true;
  bool ok() const { return pi_ok && frame_ok && residual_ok; }
};

inline BodyVerdict judge(const BodySpec& b, const BodyDecomposition& d, long double c) {
  BodyVerdict v;
  for (long double t : d.pi_coeffs)
    if (std::fabs(t) > 0.5L + b.slack) v.pi_ok = false;
  for (std::size_t k = 0; k < d.frame_coeffs.size(); ++k)
    if (std::fabs(d.frame_coeffs[k]) > b.frame_bounds[k] * (1 + b.slack)) v.frame_ok = false;
  if (d.residual_norm > c * b.residual_bound * (1 + b.slack)) v.residual_ok = false;
  return v;
}

/// Volume of the unit ball of E^l.
inline double unit_ball_volume(std::size_t l) {
  return std::pow(std::numbers::pi, l / 2.0) / std::tgamma(l / 2.0 + 1.0);
}

/// Volume of the body at scale C.
inline double body_volume(const BodySpec& b, std::size_t dim, long double c) {
  long double v = 1;
  if (b.pi_basis.rows() > 0) v *= std::sqrt((b.pi_basis * b.pi_basis.transpose()).determinant());
  for (long double bound : b.frame_bounds) v *= 2 * bound;
  const std::size_t rest = dim - static_cast<std::size_t>(b.pi_basis.rows() + b.frame.rows());
  v *= unit_ball_volume(rest) * std::pow(c * b.residual_bound, static_cast<long double>(rest));
  return static_cast<double>(v);
}

/// Linear map X -> (2 pi_coeffs, frame_coeffs / bounds, X_0 / (C r)), as a D x m matrix acting on rows.
inline LMatrix body_weight(const BodySpec& b, std::size_t dim, long double c) {
  const auto d = static_cast<Eigen::Index>(dim);
  const Eigen::Index np = b.pi_basis.rows(), nf = b.frame.rows();
  LMatrix w = LMatrix::Zero(d, np + nf + d);
  LMatrix proj = LMatrix::Identity(d, d);
  if (np > 0) {
    const LMatrix g = b.pi_basis * b.pi_basis.transpose();
    const LMatrix coef = b.pi_basis.transpose() * g.inverse();  // row X -> t
    w.leftCols(np) = 2 * coef;
    proj -= coef * b.pi_basis;
  }
  for (Eigen::Index k = 0; k < nf; ++k) {
    w.col(np + k) = b.frame.row(k).transpose() / b.frame_bounds[static_cast<std::size_t>(k)];
    proj -= b.frame.row(k).transpose() * b.frame.row(k);
  }
  w.rightCols(d) = proj / (c * b.residual_bound);
  return w;
}

struct SearchOptions {
  long double c0 = 1;
  int max_doublings = 40;
  std::size_t max_points = 200000;
  std::function<bool(const IntVector&)> accept;  // extra exact admissibility test
};

struct SearchResult {
  IntVector point;  // exact coordinates in Z^{np}
  LVector image;
  BodyDecomposition decomposition;
  long double c = 1;
  int doublings = 0;
  std::size_t candidates = 0;  // enumerated at the successful scale
};

namespace detail {

inline bool lex_less(const IntVector& a, const IntVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int s = cmp(a[i], b[i]);
    if (s != 0) return s < 0;
  }
  return false;
}

}  // namespace detail

/// Nonzero point of `lattice` (of full rank) in the body, scanning C = c0, 2 c0, 4 c0, ...
/// The first admissible point in (ellipsoid norm, lexicographic coordinates) order wins.
inline SearchResult find_point_in_body(const EmbeddedLattice& lattice, const BodySpec& body,
                                       const SearchOptions& opt = {}) {
  const std::size_t dim = lattice.ambient();
  if (lattice.rank() != dim) throw MathError("body search needs a full-rank lattice");
  check_body(body, dim);
  const long double radius2 = static_cast<long double>(body.pi_basis.rows() + body.frame.rows() + 1) * (1 + 1e-9L);
  long double c = opt.c0;
  for (int step = 0; step <= opt.max_doublings; ++step, c *= 2) {
    const LMatrix w = body_weight(body, dim, c);
    const EmbeddedLattice reduced = lll_reduce(lattice, w);
    const LMatrix weighted = reduced.images() * w;
    // a body can hold far more points than its volume suggests (a dense sublattice
    // lying almost flat in it); then only a smaller concentric ellipsoid is listed
    std::vector<EnumeratedPoint> pts;
    for (long double shrink = 1;; shrink /= 2) {
      try {
        pts = enumerate_ball(weighted, radius2 * shrink, opt.max_points);
        break;
      } catch (const NotFound&) {
        if (shrink < 1e-12L) throw;
      }
    }
    struct Cand {
      long double norm2;
      IntVector z;
    };
    std::vector<Cand> cands;
    cands.reserve(pts.size());
    for (auto& p : pts) cands.push_back({p.norm2, reduced.combine(p.coeffs)});
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.norm2 != b.norm2) return a.norm2 < b.norm2;
      return detail::lex_less(a.z, b.z);
    });
    for (const auto& cand : cands) {
      const LVector x = lattice.image(cand.z);
      const BodyDecomposition d = decompose(body, x);
      if (!judge(body, d, c).ok()) continue;
      if (opt.accept && !opt.accept(cand.z)) continue;
      SearchResult r;
      r.point = cand.z;
      r.image = x;
      r.decomposition = d;
      r.c = c;
      r.doublings = step;
      r.candidates = cands.size();
      return r;
    }
  }
  throw NotFound("no admissible lattice point up to C = " + std::to_string(static_cast<double>(c / 2)));
}

}  // namespace sh
