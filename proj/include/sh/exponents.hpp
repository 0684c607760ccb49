#pragma once

// Approximation exponents omega_{j,K}(u), omega-hat_{j,K}(u): record curves of
// (H(S), H(S) w_1^q(u, S)) over K-subspaces S of dimension j+1, slope estimates,
// the transference chain and the going-down transfer experiment.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sh/errors.hpp"
#include "sh/geometry.hpp"
#include "sh/goingdown.hpp"
#include "sh/height.hpp"
#include "sh/lattice.hpp"
#include "sh/subspace.hpp"

namespace sh {

using LComplex = std::complex<long double>;
using LCVector = Eigen::Matrix<LComplex, Eigen::Dynamic, 1>;
using LCMatrix = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;

/// Target point u in C^{n+1}, kept as given (only its line matters); `exact` is set when
/// u is sigma_1 of a vector of K^{n+1}.
struct Target {
  CVector u;
  std::optional<KVector> exact;
};

inline Target numeric_target(CVector u) {
  if (u.size() < 2 || !(u.norm() > 0)) throw SpecError("target needs n+1 >= 2 coordinates, not all zero");
  return {std::move(u), std::nullopt};
}

inline Target algebraic_target(const KVector& x) {
  Target t{embed(x, 0), x};
  if (t.u.size() < 2 || !(t.u.norm() > 0)) throw SpecError("target needs n+1 >= 2 coordinates, not all zero");
  return t;
}

struct Record {
  double height = 0;
  double value = 0;  // H(S) w_1^q(u, S)
  bool exact_zero = false;
  KMatrix basis;     // basis of S over K
  std::string key;   // normalized exact Plucker coordinates
};

struct RecordCurve {
  std::size_t j = 0;
  std::size_t ambient = 0;  // n + 1
  int q = 2;
  double qmax = 0;
  std::string method;          // line-sweep, hyperplane-sweep or generic
  bool complete = false;       // every S with H(S) <= qmax was considered
  double coverage_radius = 0;  // generic: rho-norm bound of the spanning vectors
  std::size_t visited = 0;     // subspaces evaluated
  bool precision_floor = false;
  bool exact_zero = false;
  std::vector<Record> records;  // Pareto frontier, heights increasing, values decreasing

  /// Index of the best record with H <= q (the staircase at q).
  std::optional<std::size_t> best_at(double q) const {
    std::optional<std::size_t> out;
    for (std::size_t i = 0; i < records.size() && records[i].height <= q * (1 + 1e-12); ++i) out = i;
    return out;
  }
};

/// Pareto-minimal subset of (height, value), ties broken by key.
inline std::vector<Record> pareto(std::vector<Record> cands) {
  std::sort(cands.begin(), cands.end(), [](const Record& a, const Record& b) {
    if (a.height != b.height) return a.height < b.height;
    if (a.value != b.value) return a.value < b.value;
    return a.key < b.key;
  });
  std::vector<Record> out;
  for (auto& r : cands) {
    if (!out.empty() && !(r.value < out.back().value)) continue;
    const bool zero = r.exact_zero;
    out.push_back(std::move(r));
    if (zero) break;
  }
  return out;
}

inline std::string projective_key(const KMatrix& rows) { return key(normalized(plucker(rows))); }

struct EnumerationResult {
  std::vector<SubspaceOverK> subspaces;  // sorted by (height, key)
  std::vector<double> heights;
  double radius = 0;
  bool complete = false;
  std::size_t vectors = 0;
};

namespace detail {

/// Distinct projective classes of nonzero vectors of O_K^N with |rho| <= radius, by (norm, key).
inline std::vector<std::pair<long double, KVector>> short_classes(const FieldPtr& k, std::size_t n_amb, long double radius,
                                                                  std::size_t max_points) {
  const EmbeddedLattice full = EmbeddedLattice::full(k, n_amb);
  const EmbeddedLattice red = lll_reduce(full);
  std::vector<EnumeratedPoint> pts;
  try {
    pts = enumerate_ball(red.images(), radius * radius * (1 + 1e-12L), max_points);
  } catch (const NotFound&) {
    throw MathError("subspace enumeration exceeded its point budget; lower qmax");
  }
  std::vector<std::pair<long double, KVector>> all;
  for (const auto& p : pts) all.emplace_back(p.norm2, full.to_kvector(red.combine(p.coeffs)));
  std::vector<std::tuple<long double, std::string, std::size_t>> order;
  for (std::size_t i = 0; i < all.size(); ++i) order.emplace_back(all[i].first, projective_key(KMatrix{all[i].second}), i);
  std::sort(order.begin(), order.end());
  std::set<std::string> seen;
  std::vector<std::pair<long double, KVector>> out;
  for (const auto& [n2, key_, i] : order)
    if (seen.insert(key_).second) out.push_back(std::move(all[i]));
  return out;
}

}  // namespace detail

/// K-subspaces of K^N of dimension `dim` with H <= qmax, one per subspace.
/// dim = 1 over Q or an imaginary quadratic field is complete (H = |x|^p on primitive x);
/// otherwise spans of the shortest vectors with |rho| <= kappa qmax^{1/(dim p)} are used.
inline EnumerationResult enumerate_subspaces(const FieldPtr& k, std::size_t n_amb, std::size_t dim, double qmax,
                                             double kappa = 4, std::size_t max_vectors = 60,
                                             std::size_t max_points = 200000) {
  if (dim < 1 || dim >= n_amb) throw SpecError("enumeration needs 1 <= dim <= n");
  if (!(qmax >= 1)) throw SpecError("enumeration needs qmax >= 1");
  const double p = static_cast<double>(k->degree());
  EnumerationResult res;
  res.complete = dim == 1 && k->degree() == static_cast<std::size_t>(k->q());
  res.radius = res.complete ? std::pow(qmax, 1 / p) : kappa * std::pow(qmax, 1 / (static_cast<double>(dim) * p));
  std::vector<std::pair<long double, KVector>> classes;
  for (;;) {
    try {
      classes = detail::short_classes(k, n_amb, res.radius, max_points);
      break;
    } catch (const MathError&) {
      // spans of short vectors are a heuristic anyway: cover less, and say so
      if (res.complete || res.radius < 1) throw;
      res.radius *= 0.8;
    }
  }
  res.vectors = classes.size();
  std::vector<std::pair<double, std::string>> order;
  std::map<std::string, SubspaceOverK> found;
  auto consider = [&](KMatrix rows) {
    if (rank_over_k(rows) != rows.size()) return;
    const std::string kk = projective_key(rows);
    if (found.count(kk)) return;
    SubspaceOverK s(k, std::move(rows));
    const double h = height_ideal(s);
    if (h > qmax * (1 + 1e-9)) return;
    order.emplace_back(h, kk);
    found.emplace(kk, std::move(s));
  };
  if (dim == 1) {
    for (auto& c : classes) consider(KMatrix{c.second});
  } else {
    if (classes.size() > max_vectors) classes.resize(max_vectors);
    std::vector<std::size_t> idx(dim);
    for (std::size_t i = 0; i < dim; ++i) idx[i] = i;
    while (classes.size() >= dim) {
      KMatrix rows;
      for (std::size_t i : idx) rows.push_back(classes[i].second);
      consider(std::move(rows));
      // next combination
      std::size_t t = dim;
      while (t > 0 && idx[t - 1] == classes.size() - dim + t - 1) --t;
      if (t == 0) break;
      ++idx[t - 1];
      for (std::size_t i = t; i < dim; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  std::sort(order.begin(), order.end());
  for (const auto& [h, kk] : order) {
    res.heights.push_back(h);
    res.subspaces.push_back(found.at(kk));
  }
  return res;
}

/// w_1(span u, S) for a line S = K x, in long double.
inline long double omega_line(const LCVector& u, const LCVector& x) {
  const LCVector r = x - u * u.dot(x);
  return r.norm() / x.norm();
}

/// w_1(span u, S) for the hyperplane S = {z : sum z_k x_k = 0}, in long double.
inline long double omega_hyperplane(const LCVector& u, const LCVector& x) {
  return std::abs(u.cwiseProduct(x).sum()) / x.norm();
}

inline LCVector embed_ld(const KVector& x, std::size_t j) {
  LCVector out(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) out(static_cast<Eigen::Index>(i)) = embed_ld(x[i], j);
  return out;
}

struct CurveOptions {
  double kappa = 4;
  std::size_t max_vectors = 60;
  std::size_t max_points = 200000;
  bool force_generic = false;
};

namespace detail {

/// Exact dyadic sweep for lines (hyperplane = false) or hyperplanes when p = q.
/// At scale R every primitive x with |x| <= R and small-part <= delta is listed, delta^q being
/// the best value among |x| <= R/2; since then H = |x|^p and value = small^q, no record is missed.
inline RecordCurve sweep(const Target& t, const FieldPtr& k, std::size_t j, double qmax, bool hyperplane,
                         std::size_t max_points) {
  const std::size_t n_amb = static_cast<std::size_t>(t.u.size());
  const std::size_t p = k->degree();
  const int q = k->q();
  const auto dd = static_cast<Eigen::Index>(n_amb * p);
  RecordCurve curve;
  curve.j = j;
  curve.ambient = n_amb;
  curve.q = q;
  curve.qmax = qmax;
  curve.method = hyperplane ? "hyperplane-sweep" : "line-sweep";
  curve.complete = true;

  LCVector u = t.u.cast<LComplex>();
  u /= u.norm();
  const EmbeddedLattice full = EmbeddedLattice::full(k, n_amb);
  const LMatrix& g = full.generator_image_matrix();
  LCMatrix sig(dd, static_cast<Eigen::Index>(n_amb));  // row gen -> sigma_1(gen)
  sig.setZero();
  for (std::size_t kk = 0; kk < n_amb; ++kk)
    for (std::size_t b = 0; b < p; ++b)
      sig(static_cast<Eigen::Index>(kk * p + b), static_cast<Eigen::Index>(kk)) = embed_ld(k->basis_element(b), 0);
  const LCMatrix m = g.cast<LComplex>().inverse() * sig;  // rho (row) -> sigma_1 (row)
  LCMatrix small;                                         // sigma_1 (column) -> small part
  if (hyperplane) small = u.transpose();
  else small = LCMatrix::Identity(static_cast<Eigen::Index>(n_amb), static_cast<Eigen::Index>(n_amb)) - u * u.adjoint();
  const LCMatrix ms = m * small.transpose();  // rho (row) -> small part (row)

  const double r_final = std::pow(qmax, 1.0 / static_cast<double>(p)) * (1 + 1e-9);
  std::optional<double> best;
  std::set<std::string> seen;
  std::vector<Record> cands;
  for (double r = 1;; r *= 2) {
    const double rc = std::min(r, r_final);
    double delta = rc;
    if (best) {
      delta = std::pow(*best, 1.0 / q) * (1 + 1e-9);
      if (delta < 1e-16 * rc) {
        curve.precision_floor = true;
        curve.complete = false;
        break;
      }
    }
    LMatrix w(dd, dd + 2 * ms.cols());
    w.leftCols(dd) = LMatrix::Identity(dd, dd) / static_cast<long double>(rc);
    w.middleCols(dd, ms.cols()) = ms.real() / static_cast<long double>(delta);
    w.rightCols(ms.cols()) = ms.imag() / static_cast<long double>(delta);
    const EmbeddedLattice red = lll_reduce(full, w);
    std::vector<EnumeratedPoint> pts;
    try {
      pts = enumerate_ball(red.images() * w, 2 * (1 + 1e-9L), max_points);
    } catch (const NotFound&) {
      throw MathError("record sweep exceeded its point budget at R = " + std::to_string(rc));
    }
    bool zero = false;
    for (const auto& pt : pts) {
      const KVector x = full.to_kvector(red.combine(pt.coeffs));
      const std::string kk = projective_key(KMatrix{x});
      if (!seen.insert(kk).second) continue;
      ++curve.visited;
      const SubspaceOverK line(k, KMatrix{x});
      const double h = height_ideal(line);
      if (h > qmax * (1 + 1e-9)) continue;
      const LCVector sx = embed_ld(x, 0);
      const long double om = hyperplane ? omega_hyperplane(u, sx) : omega_line(u, sx);
      Record rec;
      rec.height = h;
      rec.value = static_cast<double>(h * std::pow(om, static_cast<long double>(q)));
      rec.key = kk;
      rec.basis = KMatrix{x};  // the normal vector for hyperplanes, replaced below
      if (t.exact && om <= 1e-9L) {
        rec.exact_zero = hyperplane ? phi(*t.exact, x).is_zero() : rank_over_k(KMatrix{x, *t.exact}) == 1;
        if (rec.exact_zero) {
          rec.value = 0;
          zero = true;
        }
      }
      cands.push_back(std::move(rec));
    }
    for (const auto& c : cands)
      if (c.height <= std::pow(rc, static_cast<double>(p)) * (1 + 1e-9) && (!best || c.value < *best)) best = c.value;
    if (zero) {
      curve.exact_zero = true;
      break;
    }
    if (rc >= r_final) break;
  }
  curve.records = pareto(std::move(cands));
  if (hyperplane)
    for (auto& r : curve.records) r.basis = kernel_over_k(k, r.basis, n_amb);
  return curve;
}

}  // namespace detail

/// Record curve for dimension j+1 subspaces up to height qmax.
inline RecordCurve record_curve(const Target& t, const FieldPtr& k, std::size_t j, double qmax,
                                const CurveOptions& opt = {}) {
  const std::size_t n_amb = static_cast<std::size_t>(t.u.size());
  if (j + 1 >= n_amb) throw SpecError("record curve needs 0 <= j <= n-1");
  if (!(qmax >= 1)) throw SpecError("record curve needs qmax >= 1");
  if (t.exact && (t.exact->size() != n_amb || !t.exact->front().field()->same_as(*k)))
    throw SpecError("exact target over another field or of another length");
  if (k->q() == 1 && t.u.imag().cwiseAbs().maxCoeff() > 0) throw SpecError("real field needs a real target");
  const bool pq = k->degree() == static_cast<std::size_t>(k->q());
  if (pq && !opt.force_generic) {
    if (j == 0) return detail::sweep(t, k, j, qmax, false, opt.max_points);
    if (j + 2 == n_amb) return detail::sweep(t, k, j, qmax, true, opt.max_points);
  }
  RecordCurve curve;
  curve.j = j;
  curve.ambient = n_amb;
  curve.q = k->q();
  curve.qmax = qmax;
  curve.method = "generic";
  const EnumerationResult en = enumerate_subspaces(k, n_amb, j + 1, qmax, opt.kappa, opt.max_vectors, opt.max_points);
  curve.complete = en.complete;
  curve.coverage_radius = en.radius;
  const NumericSubspace a = NumericSubspace::from_vectors({t.u});
  std::vector<Record> cands;
  for (std::size_t i = 0; i < en.subspaces.size(); ++i) {
    const SubspaceOverK& s = en.subspaces[i];
    Record rec;
    rec.height = en.heights[i];
    rec.key = projective_key(s.basis());
    rec.basis = s.basis();
    if (t.exact && s.contains(*t.exact)) {
      rec.exact_zero = true;
      rec.value = 0;
      curve.exact_zero = true;
    } else {
      rec.value = rec.height * std::pow(principal_data(a, s.numeric(0)).omegas[0], curve.q);
    }
    cands.push_back(std::move(rec));
    ++curve.visited;
  }
  curve.records = pareto(std::move(cands));
  return curve;
}

struct ExponentEstimate {
  double omega = 0;
  double omega_hat = 0;
  bool infinite = false;
  std::size_t records = 0;
  // stability: the same estimates on the records with H <= qmax / 10
  double omega_prev = 0;
  double omega_hat_prev = 0;
};

struct EstimateOptions {
  double pair_ratio = 10;      // omega: pairs of records at least a decade apart
  double window_decades = 2;   // omega-hat: staircase window [qmax 10^{-w}, qmax]
  std::size_t min_records = 5;
};

namespace detail {

inline double omega_pairs(const std::vector<Record>& rs, double ratio) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < rs.size(); ++a)
    for (std::size_t b = a + 1; b < rs.size(); ++b) {
      if (rs[b].height < ratio * rs[a].height) continue;
      const double s = -(std::log(rs[b].value) - std::log(rs[a].value)) / (std::log(rs[b].height) - std::log(rs[a].height));
      best = std::max(best, s);
    }
  return best;
}

inline double omega_hat_staircase(const std::vector<Record>& rs, double qmax, double decades) {
  const double lo = std::max(qmax * std::pow(10.0, -decades), 1.0 + 1e-9);
  std::vector<double> qs{lo, qmax};
  for (const auto& r : rs)
    if (r.height > lo && r.height <= qmax) qs.push_back(r.height * (1 - 1e-12));
  double best = std::numeric_limits<double>::infinity();
  for (double qq : qs) {
    double f = std::numeric_limits<double>::infinity();
    for (const auto& r : rs)
      if (r.height <= qq) f = std::min(f, r.value);
    if (!std::isfinite(f)) return -std::numeric_limits<double>::infinity();
    best = std::min(best, -std::log(f) / std::log(qq));
  }
  return best;
}

}  // namespace detail

/// omega: largest log-log decay slope between records a decade or more apart;
/// omega-hat: worst -log f(Q) / log Q of the staircase f over the top decades.
inline ExponentEstimate estimate_exponents(const RecordCurve& curve, const EstimateOptions& opt = {}) {
  ExponentEstimate est;
  est.records = curve.records.size();
  if (curve.exact_zero) {
    est.infinite = true;
    est.omega = est.omega_hat = est.omega_prev = est.omega_hat_prev = std::numeric_limits<double>::infinity();
    return est;
  }
  if (curve.records.size() < opt.min_records) throw MathError("too few records to estimate exponents");
  est.omega = detail::omega_pairs(curve.records, opt.pair_ratio);
  est.omega_hat = detail::omega_hat_staircase(curve.records, curve.qmax, opt.window_decades);
  std::vector<Record> prev;
  for (const auto& r : curve.records)
    if (r.height <= curve.qmax / 10) prev.push_back(r);
  est.omega_prev = detail::omega_pairs(prev, opt.pair_ratio);
  est.omega_hat_prev = detail::omega_hat_staircase(prev, curve.qmax / 10, opt.window_decades);
  return est;
}

struct ChainCheck {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool pass = false;
};

struct ChainReport {
  std::vector<ChainCheck> checks;
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const ChainCheck& c) { return c.pass; });
  }
};

/// Left bound of omega_{j-1} in terms of omega_j (equal to j when omega_j is infinite).
inline double chain_lower(double wj, std::size_t j) {
  if (std::isinf(wj)) return static_cast<double>(j);
  return j * wj / (wj + j + 1);
}

/// Right bound of omega_{j-1} in terms of omega_j.
inline double chain_upper(double wj, std::size_t j, std::size_t n) {
  if (std::isinf(wj)) return std::numeric_limits<double>::infinity();
  return ((n - j) * wj - 1) / static_cast<double>(n - j + 1);
}

/// Checks the transference chain on estimates omega_0..omega_{n-1}, each with additive `margin`.
inline ChainReport check_chain(const std::vector<double>& w, std::size_t n, double margin = 0.15) {
  if (w.empty() || w.size() > n) throw SpecError("chain needs estimates for j = 0..k, k <= n-1");
  ChainReport rep;
  const auto le = [margin](double a, double b) { return std::isinf(b) ? b > 0 : !std::isinf(a) && a <= b + margin; };
  rep.checks.push_back({"omega_0 >= 1/n", 1.0 / n, w[0], le(1.0 / n, w[0])});
  for (std::size_t j = 1; j < w.size(); ++j) {
    const double lo = chain_lower(w[j], j), hi = chain_upper(w[j], j, n);
    const std::string jj = std::to_string(j);
    rep.checks.push_back({"lower bound of omega_" + std::to_string(j - 1) + " from omega_" + jj, lo, w[j - 1], le(lo, w[j - 1])});
    rep.checks.push_back({"upper bound of omega_" + std::to_string(j - 1) + " from omega_" + jj, w[j - 1], hi, le(w[j - 1], hi)});
    rep.checks.push_back({"bounds from omega_" + jj + " are consistent", lo, hi, le(lo, hi)});
  }
  return rep;
}

struct TransferStep {
  double q = 0;
  double witness_height = 0;
  double witness_value = 0;
  bool witness_ok = false;  // H(S) w^q <= Q^{-(q y_1 - 1)}
  double q_prime = 0;       // Q^{(q y_1 + j)/(j+1)}
  std::size_t dim_out = 0;
  double height_out = 0;
  double omega_out = 0;
  double value_out = 0;     // H(S') w_1^q(u, S')
  bool certificate_ok = false;
  bool trivial = false;     // exact zero carried over
  double ratio_c7 = 0;
};

struct TransferReport {
  std::size_t j = 0;
  int q = 2;
  double y1 = 0;
  double y1_prime = 0;
  std::vector<TransferStep> steps;
  double exponent = 0;  // minus the slope of log value_out against log Q'
  bool dims_ok = false;
  bool witnesses_ok = false;
  bool certificates_ok = false;
  bool slope_ok = false;
  bool ok() const { return dims_ok && witnesses_ok && certificates_ok && slope_ok; }
};

inline double regression_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw MathError("slope needs two points or more");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0) throw MathError("slope of a vertical point set");
  return sxy / sxx;
}

/// Going-down (d = h = 1, c = 1, e = j+1) applied to the record witness at each Q of the grid.
inline TransferReport transfer_experiment(const Target& t, const FieldPtr& k, std::size_t j,
                                          const std::vector<double>& q_grid, double y1, double margin = 0.1,
                                          const CurveOptions& copt = {}) {
  if (j < 1) throw SpecError("transfer needs j >= 1");
  if (q_grid.size() < 2) throw SpecError("transfer needs a grid of two Q values or more");
  const int q = k->q();
  if (y1 < 1.0 / q) throw SpecError("transfer needs y_1 >= 1/q");
  TransferReport rep;
  rep.j = j;
  rep.q = q;
  rep.y1 = y1;
  rep.y1_prime = y1 * (j + 1) / (q * y1 + j);
  const RecordCurve curve = record_curve(t, k, j, *std::max_element(q_grid.begin(), q_grid.end()), copt);
  const NumericSubspace a = NumericSubspace::from_vectors({t.u});
  rep.dims_ok = rep.witnesses_ok = rep.certificates_ok = true;
  bool all_trivial = true;
  std::vector<double> xs, ys;
  for (double qq : q_grid) {
    TransferStep st;
    st.q = qq;
    st.q_prime = std::pow(qq, (q * y1 + j) / static_cast<double>(j + 1));
    const auto wi = curve.best_at(qq);
    if (!wi) throw MathError("no record witness below Q = " + std::to_string(qq));
    const Record& w = curve.records[*wi];
    st.witness_height = w.height;
    st.witness_value = w.value;
    st.witness_ok = w.value <= std::pow(qq, -(q * y1 - 1)) * (1 + 1e-9);
    if (w.exact_zero) {
      // S' = span(u, j-1 basis vectors of S): still contains u
      KMatrix rows{*t.exact};
      for (const auto& b : w.basis) {
        if (rows.size() == j) break;
        KMatrix trial = rows;
        trial.push_back(b);
        if (rank_over_k(trial) == trial.size()) rows = std::move(trial);
      }
      const SubspaceOverK s(k, std::move(rows));
      st.trivial = st.certificate_ok = true;
      st.dim_out = s.dim();
      st.height_out = height_ideal(s);
    } else {
      all_trivial = false;
      GoingDownInput in;
      in.a = a;
      in.b = SubspaceOverK(k, w.basis);
      in.y = {y1};
      in.height_bound = qq;
      in.c = 1;
      const GoingDownCertificate cert = going_down(in);
      st.dim_out = cert.bm1->dim();
      st.height_out = cert.height_bm1;
      st.omega_out = cert.omega_a_bm1[0];
      st.value_out = st.height_out * std::pow(st.omega_out, q);
      st.certificate_ok = cert.all_ok();
      st.ratio_c7 = cert.ratio_c7[0];
      xs.push_back(std::log(st.q_prime));
      ys.push_back(std::log(st.value_out));
    }
    rep.dims_ok = rep.dims_ok && st.dim_out == j;
    rep.witnesses_ok = rep.witnesses_ok && st.witness_ok;
    rep.certificates_ok = rep.certificates_ok && st.certificate_ok;
    rep.steps.push_back(st);
  }
  if (all_trivial) {
    rep.exponent = std::numeric_limits<double>::infinity();
  } else if (xs.size() >= 2) {
    rep.exponent = -regression_slope(xs, ys);
  } else {
    rep.exponent = -std::numeric_limits<double>::infinity();
  }
  rep.slope_ok = rep.exponent >= q * rep.y1_prime - 1 - margin;
  return rep;
}

}  // namespace sh
