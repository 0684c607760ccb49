#pragma once

// Constructive going-down: from B^e (over K) approximating A^d, build
// B^{e-1} = <W, Z_1, ..., Z_m>^perp inside B^e, where Z spans B^{e,perp}
// over K' and rho(W) is a lattice point of Lambda(K'^n) in a convex body.
// Every quantity the argument relies on is measured and recorded.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sh/body.hpp"
#include "sh/errors.hpp"
#include "sh/geometry.hpp"
#include "sh/height.hpp"
#include "sh/lattice.hpp"
#include "sh/subspace.hpp"

namespace sh {

enum class Branch { kFirst, kSecond };

struct GoingDownInput {
  NumericSubspace a = NumericSubspace::from_onb(CMatrix::Identity(1, 1));
  std::optional<SubspaceOverK> b;
  std::vector<double> y;  // y_1 >= ... >= y_h (FIRST); only its size h matters for SECOND
  double height_bound = 1;  // H
  double c = 1;
  Branch branch = Branch::kFirst;
  double target_height = 0;  // H', SECOND only
  // search controls
  long double c0 = 1;
  int max_doublings = 40;
  int max_retries = 12;
};

struct GoingDownCertificate {
  Branch branch = Branch::kFirst;
  int q = 2;
  std::size_t n = 0, d = 0, e = 0, m = 0, p = 0, h = 0;
  double y_sum = 0;

  KVector w;  // over K'
  IntVector w_coords;
  std::optional<SubspaceOverK> bm1;  // over K

  // heights
  double height_b = 0;
  double height_b_lattice = 0;
  double height_bm1 = 0;
  double height_bm1_lattice = 0;
  Rational norm_a, norm_b;

  // angles
  std::vector<double> omega_a_b;    // i = 1..h
  std::vector<double> omega_a_bm1;  // i = 1..h

  // body and W
  std::vector<double> frame_bounds;   // b_j, j = 1..h
  double residual_scale = 0;          // bound (iii) at C = 1
  double c_used = 0;
  int doublings = 0;
  std::size_t candidates = 0;
  double minkowski_c = 0;             // C at which the body volume reaches 2^{np} Delta^n
  std::vector<double> psc_y_w;        // |<Y_j, W>|
  std::vector<double> psc_bound;      // q b_j
  std::vector<double> v_norms;        // |V_j|, j = 1..p
  double v_scale = 0;                 // H^{(qy-1)/(ep)} (FIRST) or H1^{qh/(ep)} (SECOND)
  double factorization_defect = 0;    // max_j | |W^Z| - |V||Z| | / |W^Z|
  double height_product = 0;          // H(B) prod_j |V_j|

  // SECOND branch schedule
  double target_height = 0;  // H'
  double h1 = 0;
  double c9 = 0;
  int retries = 0;

  // empirical constants
  std::vector<double> y_prime;
  double ratio_c5 = 0;                // FIRST: H(Bm1) / (H(B) H^{(qy-1)/e})
  std::vector<double> ratio_c7;       // FIRST: H(Bm1) w_i^q / (c^q H'^{-(q y'_i - 1)})
  std::vector<double> ratio_c10;      // SECOND: H(Bm1) w_i^q / (H^{q y'_0} H'^{-(q y'_0 - 1)})
  double ratio_v = 0;                 // max_j |V_j| / v_scale

  // invariants
  bool hypothesis_ok = true;
  bool contained = false;
  bool dimension_ok = false;
  bool defined_over_k = false;
  bool w_independent = false;
  bool body_recheck_ok = false;
  bool psc_ok = false;
  bool ideal_norms_ok = false;
  bool factorization_ok = false;
  bool height_product_ok = false;
  bool heights_agree = false;
  bool below_target = true;  // SECOND: H(Bm1) <= H'
  std::vector<std::string> warnings;

  bool all_ok() const {
    return contained && dimension_ok && defined_over_k && w_independent && body_recheck_ok && psc_ok &&
           ideal_norms_ok && factorization_ok && height_product_ok && heights_agree && below_target;
  }
};

/// H1 from H' = C9 H H1^{qh/e}, clamped to H1 >= 1.
inline double second_branch_schedule(double height, double target, std::size_t h, std::size_t e, double measured_c,
                                     int q = 2) {
  if (!(target >= measured_c * height)) throw MathError("second branch needs H' >= C9 H");
  const double h1 = std::pow(target / (measured_c * height), static_cast<double>(e) / (q * static_cast<double>(h)));
  return std::max(1.0, h1);
}

/// W^{(j)} = U_j + V_j with U_j in span(Z^{(j)}) and V_j orthogonal to it.
struct WDecomposition {
  CVector u, v;
  double v_norm = 0;
};

inline WDecomposition decompose_w(const KVector& w, const KMatrix& zs, std::size_t j) {
  WDecomposition out;
  const CVector wj = embed(w, j);
  if (zs.empty()) {
    out.u = CVector::Zero(wj.size());
  } else {
    CMatrix z(wj.size(), static_cast<Eigen::Index>(zs.size()));
    for (std::size_t i = 0; i < zs.size(); ++i) z.col(static_cast<Eigen::Index>(i)) = embed(zs[i], j);
    out.u = z * z.colPivHouseholderQr().solve(wj);
  }
  out.v = wj - out.u;
  out.v_norm = out.v.norm();
  return out;
}

/// B^{e-1} = <W, Z_1..Z_m>^perp, as a subspace over `k` (the conjugate of W's field).
inline SubspaceOverK assemble_bm1(const KVector& w, const KMatrix& zs, const FieldPtr& k) {
  KMatrix rows{w};
  rows.insert(rows.end(), zs.begin(), zs.end());
  if (rank_over_k(rows) != rows.size()) throw MathError("W lies in the span of the Z's");
  const FieldPtr kp = w.front().field();
  // Hermitian complement over K' is phi-complement transported to K'' = K
  const KMatrix ker = kernel_over_k(kp, rows, w.size());
  KMatrix out;
  for (const auto& r : ker) out.push_back(transported(r, k));
  return SubspaceOverK(k, std::move(out));
}

namespace detail {

struct GoingDownSetup {
  FieldPtr k, kp;
  int q = 2;
  std::size_t n = 0, e = 0, m = 0, p = 0, h = 0;
  KMatrix zs;  // over K'
  EmbeddedLattice full;
  std::optional<EmbeddedLattice> perp;
  std::vector<CVector> y;  // Y_1..Y_h
  PrincipalData pd;
};

inline void validate(const GoingDownInput& in) {
  if (!in.b) throw SpecError("going-down input has no B");
  const SubspaceOverK& b = *in.b;
  const std::size_t d = in.a.dim(), e = b.dim();
  if (in.a.ambient() != b.ambient()) throw SpecError("A and B live in different dimensions");
  if (e < 2) throw SpecError("going-down needs e >= 2");
  const std::size_t h = in.y.size();
  if (h < 1 || h > std::min(d, e - 1)) throw SpecError("need 1 <= h <= min(d, e-1)");
  if (!(in.height_bound >= 1)) throw SpecError("need H >= 1");
  if (!(in.c >= 1)) throw SpecError("need c >= 1");
  const int q = b.field()->q();
  if (in.branch == Branch::kFirst) {
    for (std::size_t i = 1; i < h; ++i)
      if (in.y[i] > in.y[i - 1]) throw SpecError("y must be non-increasing");
    if (in.y.back() < 1.0 / (q * static_cast<double>(h)) - 1e-12) throw SpecError("need y_h >= 1/(qh)");
    double ysum = 0;
    for (double v : in.y) ysum += v;
    for (double v : in.y)
      if (v * e / (q * ysum + e - 1) < 1.0 / q - 1e-12) throw SpecError("need y'_i >= 1/q");
  }
  if (q == 1 && in.a.onb().imag().cwiseAbs().maxCoeff() > 1e-12) throw SpecError("real field needs a real A");
}

inline GoingDownSetup setup(const GoingDownInput& in) {
  const SubspaceOverK& b = *in.b;
  GoingDownSetup s{b.field(), b.field()->conjugate(), b.field()->q(), b.ambient(), b.dim(), b.ambient() - b.dim(),
                   b.field()->degree(), in.y.size(), {}, EmbeddedLattice::full(b.field()->conjugate(), b.ambient()),
                   std::nullopt, {}, {}};
  if (s.m > 0) {
    const SubspaceOverK z = hermitian_complement(b);
    s.zs = z.basis();
    s.perp = lll_reduce(lattice_of_subspace(z));
  }
  s.pd = principal_data(in.a, b.numeric(0));
  for (std::size_t j = 0; j < s.h; ++j) {
    CVector y = s.pd.y_basis.col(static_cast<Eigen::Index>(j));
    if (s.q == 1) {
      // the SVD may return a real vector times a phase
      Eigen::Index big = 0;
      y.cwiseAbs().maxCoeff(&big);
      y *= std::conj(y(big)) / std::abs(y(big));
      y = CVector(y.real().cast<std::complex<double>>()).normalized();
    }
    s.y.push_back(std::move(y));
  }
  return s;
}

/// Frame vectors in E^{np} (rho taken over K'): block 0 (and 1 when q = 2).
inline LMatrix frames(const GoingDownSetup& s) {
  const auto n = static_cast<Eigen::Index>(s.n);
  LMatrix f = LMatrix::Zero(static_cast<Eigen::Index>(s.q * s.h), static_cast<Eigen::Index>(s.n * s.p));
  for (std::size_t j = 0; j < s.h; ++j) {
    const CVector& y = s.y[j];
    for (Eigen::Index k = 0; k < n; ++k) {
      const long double re = y(k).real(), im = y(k).imag();
      if (s.q == 2) {
        // Y^{[1]} = Re Y, Y^{[2]} = -Im Y
        f(static_cast<Eigen::Index>(2 * j), k) = re;
        f(static_cast<Eigen::Index>(2 * j), n + k) = -im;
        f(static_cast<Eigen::Index>(2 * j + 1), k) = im;
        f(static_cast<Eigen::Index>(2 * j + 1), n + k) = re;
      } else {
        f(static_cast<Eigen::Index>(j), k) = re;
      }
    }
  }
  return f;
}

inline BodySpec make_body(const GoingDownSetup& s, const std::vector<double>& bounds, double residual) {
  BodySpec body;
  if (s.perp) body.pi_basis = s.perp->images();
  else body.pi_basis = LMatrix(0, static_cast<Eigen::Index>(s.n * s.p));
  body.frame = frames(s);
  for (std::size_t j = 0; j < s.h; ++j)
    for (int t = 0; t < s.q; ++t) body.frame_bounds.push_back(bounds[j]);
  body.residual_bound = residual;
  return body;
}

/// Searches W, builds B^{e-1} and fills every measured field except the branch ratios.
inline GoingDownCertificate construct(const GoingDownInput& in, const GoingDownSetup& s,
                                      const std::vector<double>& bounds, double residual) {
  const SubspaceOverK& b = *in.b;
  GoingDownCertificate cert;
  cert.branch = in.branch;
  cert.q = s.q;
  cert.n = s.n;
  cert.d = in.a.dim();
  cert.e = s.e;
  cert.m = s.m;
  cert.p = s.p;
  cert.h = s.h;
  for (double v : in.y) cert.y_sum += v;
  cert.frame_bounds = bounds;
  cert.residual_scale = residual;

  const BodySpec body = make_body(s, bounds, residual);
  const std::size_t dim = s.n * s.p;
  const std::size_t rest = dim - static_cast<std::size_t>(body.pi_basis.rows() + body.frame.rows());
  const double vol1 = body_volume(body, dim, 1);
  const double target_vol = std::pow(2.0, static_cast<double>(dim)) * std::pow(s.k->delta(), static_cast<double>(s.n));
  cert.minkowski_c = rest > 0 ? std::pow(target_vol / vol1, 1.0 / static_cast<double>(rest)) : 0.0;

  SearchOptions opt;
  opt.c0 = in.c0;
  opt.max_doublings = in.max_doublings;
  const FieldPtr kp = s.kp;
  const KMatrix& zs = s.zs;
  const EmbeddedLattice& full = s.full;
  opt.accept = [&](const IntVector& z) {
    KMatrix rows{full.to_kvector(z)};
    rows.insert(rows.end(), zs.begin(), zs.end());
    return rank_over_k(rows) == rows.size();
  };
  const SearchResult found = find_point_in_body(s.full, body, opt);
  cert.w_coords = found.point;
  cert.w = s.full.to_kvector(found.point);
  cert.c_used = static_cast<double>(found.c);
  cert.doublings = found.doublings;
  cert.candidates = found.candidates;
  cert.body_recheck_ok = judge(body, decompose_independent(body, s.full.image(found.point)), found.c).ok();

  KMatrix wz{cert.w};
  wz.insert(wz.end(), zs.begin(), zs.end());
  cert.w_independent = rank_over_k(wz) == wz.size();
  cert.bm1 = assemble_bm1(cert.w, zs, s.k);
  const SubspaceOverK& bm1 = *cert.bm1;

  cert.contained = b.contains(bm1);
  cert.dimension_ok = bm1.dim() == s.e - 1;
  cert.defined_over_k = bm1.field()->same_as(*s.k);

  // |<Y_j, W>|
  const CVector w1 = embed(cert.w, 0);
  cert.psc_ok = true;
  for (std::size_t j = 0; j < s.h; ++j) {
    const double v = std::abs(w1.dot(s.y[j]));  // <Y_j, W> up to conjugation
    cert.psc_y_w.push_back(v);
    cert.psc_bound.push_back(s.q * bounds[j]);
    if (v > s.q * bounds[j] * (1 + 1e-9)) cert.psc_ok = false;
  }

  // V_j and the height factorization
  const ExactMultiVector wzp = plucker(wz);
  cert.norm_b = ideal_norm(wzp.coords());
  cert.norm_a = zs.empty() ? Rational(1) : ideal_norm(plucker(zs).coords());
  cert.ideal_norms_ok = cert.norm_b >= cert.norm_a;
  cert.height_b = height_ideal(b);
  cert.height_b_lattice = height_lattice(b);
  cert.factorization_ok = true;
  long double vprod = 1;
  for (std::size_t j = 0; j < s.p; ++j) {
    const WDecomposition dec = decompose_w(cert.w, zs, j);
    cert.v_norms.push_back(dec.v_norm);
    vprod *= dec.v_norm;
    const long double lhs = embedded_norm(wzp, j);
    const long double zn = zs.empty() ? 1.0L : embedded_norm(plucker(zs), j);
    const double defect = static_cast<double>(std::fabs(lhs - dec.v_norm * zn) / lhs);
    cert.factorization_defect = std::max(cert.factorization_defect, defect);
  }
  if (cert.factorization_defect > 1e-9) cert.factorization_ok = false;
  cert.height_product = static_cast<double>(cert.height_b * vprod);
  cert.height_bm1 = height_ideal(bm1);
  cert.height_bm1_lattice = height_lattice(bm1);
  cert.height_product_ok = cert.height_bm1 <= cert.height_product * (1 + 1e-6);
  cert.heights_agree = std::fabs(cert.height_bm1 - cert.height_bm1_lattice) <= 1e-6 * cert.height_bm1 &&
                       std::fabs(cert.height_b - cert.height_b_lattice) <= 1e-6 * cert.height_b;

  const PrincipalData after = principal_data(in.a, bm1.numeric(0));
  for (std::size_t i = 0; i < s.h; ++i) {
    cert.omega_a_b.push_back(s.pd.omegas[i]);
    cert.omega_a_bm1.push_back(after.omegas[i]);
  }
  return cert;
}

}  // namespace detail

inline GoingDownCertificate going_down(const GoingDownInput& in) {
  detail::validate(in);
  const detail::GoingDownSetup s = detail::setup(in);
  const double hh = in.height_bound;
  const double q = s.q, e = static_cast<double>(s.e), p = static_cast<double>(s.p), h = static_cast<double>(s.h);
  const double height_b = height_ideal(*in.b);
  if (height_b > hh * (1 + 1e-9)) throw SpecError("need H(B) <= H");

  if (in.branch == Branch::kFirst) {
    double y = 0;
    for (double v : in.y) y += v;
    std::vector<double> bounds;
    for (double yj : in.y)
      bounds.push_back(std::pow(hh, -(yj - (q * y - 1) / (e * p))) * std::pow(hh / height_b, 1 / (q * h)));
    const double residual = std::pow(hh, (q * y - 1) / (e * p));
    GoingDownCertificate cert = detail::construct(in, s, bounds, residual);
    for (std::size_t i = 0; i < s.h; ++i) {
      const double lhs = height_b * std::pow(s.pd.omegas[i], q);
      if (lhs > std::pow(in.c, q) * std::pow(hh, -(q * in.y[i] - 1)) * (1 + 1e-9)) {
        cert.hypothesis_ok = false;
        cert.warnings.push_back("hypothesis H(B) w_" + std::to_string(i + 1) + "^q <= c^q H^{-(q y_i - 1)} fails");
      }
    }
    cert.v_scale = residual;
    const double target = std::pow(hh, (e + q * y - 1) / e);
    cert.target_height = target;
    cert.ratio_c5 = cert.height_bm1 / (height_b * std::pow(hh, (q * y - 1) / e));
    for (std::size_t i = 0; i < s.h; ++i) {
      const double yp = in.y[i] * e / (q * y + e - 1);
      cert.y_prime.push_back(yp);
      cert.ratio_c7.push_back(cert.height_bm1 * std::pow(cert.omega_a_bm1[i], q) /
                              (std::pow(in.c, q) * std::pow(target, -(q * yp - 1))));
    }
    for (double v : cert.v_norms) cert.ratio_v = std::max(cert.ratio_v, v / cert.v_scale);
    return cert;
  }

  // SECOND branch
  const double target = in.target_height;
  for (std::size_t i = 0; i < s.h; ++i)
    if (s.pd.omegas[i] > 1e-9) throw SpecError("second branch needs w_i(A, B) = 0 for i <= h");
  const double yp0 = e / (q * h);
  const auto run = [&](double h1) {
    std::vector<double> bounds(s.h, std::pow(h1, -(1 - q * h / (e * p))));
    return detail::construct(in, s, bounds, std::pow(h1, q * h / (e * p)));
  };
  // calibration run with C9 = 1, then C9 := measured inflation H(Bm1) / (H(B) H1^{qh/e})
  double h1 = second_branch_schedule(hh, std::max(target, hh), s.h, s.e, 1.0, s.q);
  GoingDownCertificate cert = run(h1);
  const double c9 = std::max(1.0, cert.height_bm1 / (height_b * std::pow(h1, q * h / e)));
  int retries = 0;
  if (cert.height_bm1 > target) {
    h1 = target >= c9 * hh ? second_branch_schedule(hh, target, s.h, s.e, c9, s.q) : 1.0;
    cert = run(h1);
    while (cert.height_bm1 > target && retries < in.max_retries && h1 > 1.0) {
      h1 = std::max(1.0, 0.8 * h1);
      cert = run(h1);
      ++retries;
    }
  }
  cert.c9 = c9;
  cert.h1 = h1;
  cert.retries = retries;
  cert.target_height = target;
  cert.below_target = cert.height_bm1 <= target * (1 + 1e-9);
  if (!cert.below_target) cert.warnings.push_back("retry cap exhausted with H(Bm1) > H'");
  cert.v_scale = std::pow(h1, q * h / (e * p));
  cert.y_prime.assign(s.h, yp0);
  for (std::size_t i = 0; i < s.h; ++i)
    cert.ratio_c10.push_back(cert.height_bm1 * std::pow(cert.omega_a_bm1[i], q) /
                             (std::pow(hh, q * yp0) * std::pow(target, -(q * yp0 - 1))));
  for (double v : cert.v_norms) cert.ratio_v = std::max(cert.ratio_v, v / cert.v_scale);
  return cert;
}

}  // namespace sh
