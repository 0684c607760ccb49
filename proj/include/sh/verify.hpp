#pragma once

// The invariant suite behind `sh verify` and the acceptance binary. Every job is
// deterministic (fixed seeds, portable RNG mappings); jobs may run on several
// threads but results are stored by job index, so the report does not depend on
// the thread count.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sh/config.hpp"
#include "sh/exponents.hpp"
#include "sh/goingdown.hpp"
#include "sh/height.hpp"
#include "sh/instances.hpp"
#include "sh/io.hpp"

namespace sh::verify {

struct Options {
  Tolerances tol;            // 1e-9 family; the fixed 1e-6 / 1e-3 tolerances are not rescaled
  std::size_t jobs = 1;
};

struct Check {
  int criterion = 0;  // 0: module suite
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Job {
  int criterion = 0;
  std::string name;
  std::function<std::vector<Check>(const Options&)> run;
};

struct Outcome {
  std::vector<std::vector<Check>> checks;  // per job
  std::vector<double> seconds;             // per job (not part of the report)

  bool all_pass() const {
    for (const auto& js : checks)
      for (const auto& c : js)
        if (!c.pass) return false;
    return true;
  }
};

namespace detail {

using io::format_number;

inline std::string fmt(double x) { return format_number(x); }

inline CVector random_cvector(std::size_t n, std::mt19937_64& rng, bool complex = true) {
  CVector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = {unit_real(rng), complex ? unit_real(rng) : 0.0};
  return v;
}

inline NumericSubspace random_numeric(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  std::vector<CVector> vs;
  for (std::size_t i = 0; i < d; ++i) vs.push_back(random_cvector(n, rng));
  return NumericSubspace::from_vectors(vs);
}

inline CMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  CMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j) = random_cvector(n, rng);
  const Eigen::HouseholderQR<CMatrix> qr(m);
  return qr.householderQ() * CMatrix::Identity(m.rows(), m.cols());
}

inline double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }

/// The 200-subspace sample of criteria 1 and 2: n in 2..5, d in 1..n-1, entries in [-3, 3].
inline std::vector<SubspaceOverK> height_sample(const FieldPtr& k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SubspaceOverK> out;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 4;
    const std::size_t d = 1 + rng() % (n - 1);
    out.push_back(random_integral_subspace(k, n, d, rng));
  }
  return out;
}

inline const std::vector<std::string>& bridge_fields() {
  static const std::vector<std::string> f{"Q", "Q(i)", "Q(sqrt2)", "Q(zeta3)"};
  return f;
}

inline std::uint64_t field_seed(const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : name) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
  return h;
}

// ---------------------------------------------------------------- module suite

inline std::vector<Check> module_numberfield(const Options& opt) {
  double worst_disc = 0, worst_poly = 0;
  bool norms_ok = true;
  for (const auto& name : builtin_field_names()) {
    const FieldPtr k = builtin_field(name);
    const std::size_t p = k->degree();
    // disc = det(sigma_i(w_b))^2
    Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic> m(p, p);
    for (std::size_t b = 0; b < p; ++b)
      for (std::size_t i = 0; i < p; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) = embed_ld(k->basis_element(b), i);
    const std::complex<long double> det = m.determinant();
    worst_disc = std::max(worst_disc, rel(static_cast<double>((det * det).real()), k->disc().get_d()));
    for (std::size_t i = 0; i < p; ++i) {
      std::complex<long double> v = 0, pw = 1;
      for (const auto& c : k->min_poly()) {
        v += static_cast<long double>(c.get_d()) * pw;
        pw *= k->roots()[i];
      }
      worst_poly = std::max(worst_poly, static_cast<double>(std::abs(v)));
    }
    std::mt19937_64 rng(field_seed(name));
    for (int t = 0; t < 20; ++t) {
      RationalVector a, b;
      for (std::size_t i = 0; i < p; ++i) a.emplace_back(small_int(rng, 5)), b.emplace_back(small_int(rng, 5));
      const FieldElement x = k->element(a), y = k->element(b);
      if (norm_elem(x * y) != norm_elem(x) * norm_elem(y)) norms_ok = false;
    }
  }
  return {{0, "numberfield: discriminant from embeddings", worst_disc <= opt.tol.rel * 1e3,
           "max rel diff " + fmt(worst_disc)},
          {0, "numberfield: roots of the minimal polynomials", worst_poly <= opt.tol.rel * 1e3,
           "max |f(root)| " + fmt(worst_poly)},
          {0, "numberfield: norm is multiplicative (exact)", norms_ok, norms_ok ? "140 products" : "mismatch"}};
}

inline std::vector<Check> module_exterior(const Options& opt) {
  std::mt19937_64 rng(41);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 5;
    const std::size_t m = 1 + rng() % n;
    std::vector<Eigen::VectorXcd> xs;
    CMatrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      xs.push_back(random_cvector(n, rng));
      a.col(static_cast<Eigen::Index>(i)) = xs.back();
    }
    const double g = (a.adjoint() * a).determinant().real();
    const double d = gen_det(xs);
    worst = std::max(worst, rel(d * d, g));
  }
  return {{0, "exterior: gen_det^2 = det Gram", worst <= opt.tol.rel, "max rel diff " + fmt(worst)}};
}

inline std::vector<Check> module_lattice(const Options& opt) {
  std::mt19937_64 rng(42);
  double worst = 0;
  bool same = true;
  for (const char* name : {"Q(i)", "Q(sqrt2)", "Q(zeta3)"}) {
    const FieldPtr k = builtin_field(name);
    for (int t = 0; t < 10; ++t) {
      const std::size_t n = 3 + rng() % 2;
      const SubspaceOverK s = random_integral_subspace(k, n, 1 + rng() % (n - 1), rng);
      const EmbeddedLattice l = lattice_of_subspace(s);
      const EmbeddedLattice r = lll_reduce(l);
      if (hermite_form(l.basis()) != hermite_form(r.basis())) same = false;
      worst = std::max(worst, rel(det_lattice(l), det_lattice(r)));
    }
  }
  return {{0, "lattice: LLL keeps the lattice (HNF) and its covolume", same && worst <= opt.tol.rel,
           std::string(same ? "HNF equal" : "HNF differs") + ", max covolume rel diff " + fmt(worst)}};
}

// ---------------------------------------------------------------- criteria 1-3

inline std::vector<Check> height_bridge(const std::string& name) {
  const FieldPtr k = builtin_field(name);
  double worst = 0;
  for (const auto& s : height_sample(k, field_seed(name))) worst = std::max(worst, rel(height_ideal(s), height_lattice(s)));
  return {{1, "height_ideal = height_lattice over " + name + " (200 subspaces)", worst <= 1e-6, "max rel diff " + fmt(worst)}};
}

inline std::vector<Check> duality(const std::string& name) {
  const FieldPtr k = builtin_field(name);
  double w_phi = 0, w_herm = 0;
  for (const auto& s : height_sample(k, field_seed(name))) {
    const double h = height_ideal(s);
    w_phi = std::max(w_phi, rel(h, height_ideal(phi_complement(s))));
    w_herm = std::max(w_herm, rel(h, height_ideal(hermitian_complement(s))));
  }
  return {{2, "H(S) = H(S^{phi,perp}) over " + name, w_phi <= 1e-6, "max rel diff " + fmt(w_phi)},
          {2, "H(S) = H(S^perp) over " + name, w_herm <= 1e-6, "max rel diff " + fmt(w_herm)}};
}

inline std::vector<Check> geometry(const Options& opt) {
  std::vector<Check> out;
  std::mt19937_64 rng(31);
  double comp = 0, muw = 0, inv = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 5;
    const std::size_t e = 1 + rng() % (n - 1);
    const NumericSubspace b = random_numeric(n, e, rng);
    const CVector x = random_cvector(n, rng);
    const double w1 = dist_point_subspace(x, b), w2 = dist_point_subspace(x, orth_complement(b));
    comp = std::max(comp, std::fabs(w1 * w1 + w2 * w2 - 1));

    const std::size_t d = 1 + rng() % (n - 1);
    const std::size_t f = 1 + rng() % (n - d);
    std::vector<CVector> xa, xb;
    for (std::size_t i = 0; i < d; ++i) xa.push_back(random_cvector(n, rng));
    for (std::size_t i = 0; i < f; ++i) xb.push_back(random_cvector(n, rng));
    const NumericSubspace a = NumericSubspace::from_vectors(xa), bb = NumericSubspace::from_vectors(xb);
    muw = std::max(muw, std::fabs(mu(a, bb) - mu_wedge(xa, xb)));

    const CMatrix u = random_unitary(n, rng);
    const auto ua = NumericSubspace::from_basis(u * a.onb()), ub = NumericSubspace::from_basis(u * b.onb());
    const auto wa = principal_data(a, b).omegas, wu = principal_data(ua, ub).omegas;
    for (std::size_t i = 0; i < wa.size(); ++i) inv = std::max(inv, std::fabs(wa[i] - wu[i]));
  }
  out.push_back({3, "omega(X,B)^2 + omega(X,B^perp)^2 = 1", comp <= opt.tol.rel, "max defect " + fmt(comp)});
  out.push_back({3, "mu product = mu wedge (d+e <= n)", muw <= 10 * opt.tol.rel, "max diff " + fmt(muw)});
  out.push_back({3, "unitary invariance of omega_i", inv <= opt.tol.rel, "max diff " + fmt(inv)});

  // inf-sup oracle: over unit x = cos t a1 + e^{i s} sin t a2 of A, omega_1 = min and omega_2 = max of omega(x, B)
  double grid = 0;
  for (int t = 0; t < 10; ++t) {
    const NumericSubspace a = random_numeric(4, 2, rng), b = random_numeric(4, 2, rng);
    double lo = 1, hi = 0;
    const int nt = 200, ns = 400;
    for (int i = 0; i <= nt; ++i)
      for (int j = 0; j < ns; ++j) {
        const double th = std::numbers::pi / 2 * i / nt, ph = 2 * std::numbers::pi * j / ns;
        const CVector x = std::cos(th) * a.vector(0) + std::polar(std::sin(th), ph) * a.vector(1);
        const double w = dist_point_subspace(x, b);
        lo = std::min(lo, w);
        hi = std::max(hi, w);
      }
    const auto pd = principal_data(a, b);
    grid = std::max({grid, std::fabs(pd.omegas[0] - lo), std::fabs(pd.omegas[1] - hi)});
  }
  out.push_back({3, "omega_i by SVD = inf-sup grid oracle (d=e=2, n=4)", grid <= 1e-3, "max diff " + fmt(grid)});
  return out;
}

// ---------------------------------------------------------------- criteria 4-6

struct Family {
  std::string field;
  std::size_t n, e;
};

inline std::vector<Family> families() {
  std::vector<Family> out;
  for (const char* f : {"Q", "Q(i)"})
    for (std::size_t n : {3u, 4u})
      for (std::size_t e : {2u, 3u})
        if (e < n) out.push_back({f, n, e});
  return out;
}

inline const std::vector<double>& h_grid() {
  static const std::vector<double> g{1e2, 1e3, 1e4};
  return g;
}

inline std::vector<Check> going_down_family(const Family& fam) {
  const std::string tag = fam.field + " n=" + std::to_string(fam.n) + " e=" + std::to_string(fam.e);
  const int seeds = 10;
  const std::size_t structural = 5;  // seeds 1..5 at H = 1e3 form the criterion 4 sample
  std::size_t struct_ok = 0, bad = 0;
  std::vector<double> lh, lhp, lprod, lhm1, vmax;
  double yp = 0, expo = 0, q = 0;
  for (double hh : h_grid()) {
    double sp = 0, sh = 0, shp = 0, vm = 0;
    for (int seed = 1; seed <= seeds; ++seed) {
      InstanceSpec spec;
      spec.field = fam.field;
      spec.n = fam.n;
      spec.e = fam.e;
      spec.seed = static_cast<std::uint64_t>(seed);
      spec.height = hh;
      const GoingDownCertificate c = going_down(make_instance(spec));
      if (hh == 1e3 && seed <= static_cast<int>(structural) && c.contained && c.dimension_ok && c.defined_over_k &&
          c.body_recheck_ok)
        ++struct_ok;
      if (!c.all_ok()) ++bad;
      q = c.q;
      yp = c.y_prime[0];
      expo = (static_cast<double>(c.e) + c.q * c.y_sum - 1) / static_cast<double>(c.e);
      sp += std::log(c.height_bm1 * std::pow(c.omega_a_bm1[0], c.q)) / seeds;
      sh += std::log(c.height_bm1) / seeds;
      shp += std::log(c.target_height) / seeds;
      vm = std::max(vm, c.ratio_v);
    }
    lh.push_back(std::log(hh));
    lhp.push_back(shp);
    lprod.push_back(sp);
    lhm1.push_back(sh);
    vmax.push_back(std::log(vm));
  }
  const double s_prod = regression_slope(lhp, lprod), s_h = regression_slope(lh, lhm1);
  const double need_prod = -(q * yp - 1) + 0.1, need_h = expo + 0.05;
  const double s_v = regression_slope(lh, vmax);
  const double vconst = std::exp(*std::max_element(vmax.begin(), vmax.end()));
  return {{4, "structural certificates " + tag, struct_ok == structural,
           std::to_string(struct_ok) + "/" + std::to_string(structural) + " pass containment, dimension, K, body"},
          {5, "slope of log H(B')w^q vs log H' " + tag, s_prod <= need_prod && bad == 0,
           fmt(s_prod) + " <= " + fmt(need_prod) + ", invalid certificates " + std::to_string(bad)},
          {5, "slope of log H(B') vs log H " + tag, s_h <= need_h, fmt(s_h) + " <= " + fmt(need_h)},
          {6, "|V_j| / H^{(qy-1)/(ep)} bounded " + tag, s_v <= 0.05,
           "constant " + fmt(vconst) + ", growth slope " + fmt(s_v) + " <= 0.05"}};
}

// ---------------------------------------------------------------- criterion 7

inline std::vector<Check> golden_ratio() {
  const double phi = (1 + std::sqrt(5.0)) / 2;
  CVector u(2);
  u << 1, phi;
  const double qmax = 1e5;
  const RecordCurve c = record_curve(numeric_target(u), builtin_field("Q"), 0, qmax);
  const ExponentEstimate e = estimate_exponents(c);
  // oracle: records are the lines through (F_k, F_{k+1}), k >= 0
  const long double lphi = phi, s = std::sqrt(1 + lphi * lphi);
  std::vector<std::pair<long, long>> fib;
  for (long a = 0, b = 1; std::hypot(static_cast<double>(a), static_cast<double>(b)) <= qmax; b += a, a = b - a)
    fib.emplace_back(a, b);
  bool equal = c.complete && c.records.size() == fib.size();
  double worst = 0;
  for (std::size_t i = 0; equal && i < fib.size(); ++i) {
    const auto [a, b] = fib[i];
    const KVector& x = c.records[i].basis.front();
    if (x[0].coeffs()[0] * b != x[1].coeffs()[0] * a) equal = false;
    const long double h = std::sqrt(static_cast<long double>(a * a + b * b));
    // a phi - b exactly (phi as the double in u), then one rounding
    const Rational diff = Rational(a) * Rational(phi) - Rational(b);
    const long double v = std::fabs(static_cast<long double>(diff.get_d())) / s;
    worst = std::max({worst, rel(c.records[i].height, static_cast<double>(h)), rel(c.records[i].value, static_cast<double>(v))});
  }
  equal = equal && worst <= 1e-9;
  return {{7, "golden ratio record curve = continued-fraction oracle", equal,
           std::to_string(c.records.size()) + " records vs " + std::to_string(fib.size()) + ", max rel diff " + fmt(worst)},
          {7, "golden ratio omega_0 in [0.9, 1.1]", e.omega >= 0.9 && e.omega <= 1.1,
           "omega " + fmt(e.omega) + ", omega_hat " + fmt(e.omega_hat)}};
}

/// Qmax per (K, n, j): hyperplanes of Q^3 reach the long double floor above 1e4.
inline double dirichlet_qmax(const std::string& field, std::size_t n, std::size_t j) {
  return field == "Q" && n == 2 && j == 1 ? 1e4 : 1e6;
}

inline std::vector<Check> dirichlet(const std::string& field, std::size_t n, std::size_t j) {
  const FieldPtr k = builtin_field(field);
  std::mt19937_64 rng(100 + n * 10 + j + (k->q() == 2 ? 1000 : 0));
  const double bound = (j + 1.0) / static_cast<double>(n - j);
  const double qmax = dirichlet_qmax(field, n, j);
  double worst = 1e300;
  int fails = 0, floors = 0;
  for (int t = 0; t < 50; ++t) {
    const CVector u = random_cvector(n + 1, rng, k->q() == 2);
    const RecordCurve c = record_curve(numeric_target(u), k, j, qmax);
    const double w = estimate_exponents(c).omega_hat;
    worst = std::min(worst, w);
    if (c.precision_floor) ++floors;
    if (w < bound - 0.15) ++fails;
  }
  return {{7, "omega_hat >= (j+1)/(n-j) - 0.15, " + field + " n=" + std::to_string(n) + " j=" + std::to_string(j) +
               " (50 targets, Qmax " + fmt(qmax) + ")",
           fails == 0, "worst " + fmt(worst) + " vs " + fmt(bound - 0.15) + ", precision floors " + std::to_string(floors)}};
}

inline std::vector<Check> exact_targets() {
  const FieldPtr q = builtin_field("Q"), qi = builtin_field("Q(i)");
  auto el = [](const FieldPtr& k, long re, long im = 0) {
    return k->degree() == 1 ? k->element({Rational(re)}) : k->element({Rational(re), Rational(im)});
  };
  struct Case {
    std::string name;
    Target t;
    FieldPtr k;
    std::size_t j;
    bool generic;
  };
  std::vector<Case> cases{
      {"Q n=1 (2,3)", algebraic_target({el(q, 2), el(q, 3)}), q, 0, false},
      {"Q(i) n=2 j=0 (1,i,2)", algebraic_target({el(qi, 1), el(qi, 0, 1), el(qi, 2)}), qi, 0, false},
      {"Q(i) n=2 j=1 (1,i,2)", algebraic_target({el(qi, 1), el(qi, 0, 1), el(qi, 2)}), qi, 1, false},
      {"Q(i) n=3 j=1 generic (1,1+i,0,0)", algebraic_target({el(qi, 1), el(qi, 1, 1), el(qi, 0), el(qi, 0)}), qi, 1, true},
  };
  std::vector<Check> out;
  for (const auto& cs : cases) {
    CurveOptions opt;
    opt.force_generic = cs.generic;
    const RecordCurve c = record_curve(cs.t, cs.k, cs.j, cs.generic ? 30 : 100, opt);
    const ExponentEstimate e = estimate_exponents(c);
    out.push_back({7, "exact target gives omega = inf: " + cs.name, c.exact_zero && e.infinite && std::isinf(e.omega),
                   "exact_zero " + std::string(c.exact_zero ? "yes" : "no") + ", omega " + fmt(e.omega)});
  }
  return out;
}

// ---------------------------------------------------------------- criterion 8

inline const std::vector<double>& transfer_grid() {
  static const std::vector<double> g{1e2, 1e3, 1e4, 1e5};
  return g;
}

inline std::vector<Check> transfer(const std::string& field) {
  const FieldPtr k = builtin_field(field);
  const double y1 = k->q() == 2 ? 2.0 : 3.5;
  const auto& grid = transfer_grid();
  const int seeds = 10;
  std::vector<double> mean(grid.size(), 0.0), xs;
  int bad = 0;
  double need = 0;
  std::size_t dim_out = 0;
  for (int seed = 1; seed <= seeds; ++seed) {
    const NearTarget nt = near_subspace_target(field, 3, 2, y1, grid.back(), static_cast<std::uint64_t>(seed));
    const TransferReport rep = transfer_experiment(numeric_target(nt.u), k, 1, grid, y1);
    if (!(rep.dims_ok && rep.witnesses_ok && rep.certificates_ok)) ++bad;
    for (std::size_t i = 0; i < grid.size(); ++i) mean[i] += std::log(rep.steps[i].value_out) / seeds;
    need = rep.q * rep.y1_prime - 1 - 0.1;
    dim_out = rep.steps.front().dim_out;
  }
  for (double g : grid) xs.push_back(std::log(std::pow(g, (k->q() * y1 + 1) / 2)));
  const double expo = -regression_slope(xs, mean);
  return {{8, "transfer bookkeeping " + field + " (j=1, 10 targets)", bad == 0 && dim_out == 1,
           "output dimension " + std::to_string(dim_out) + ", failed runs " + std::to_string(bad)},
          {8, "transfer slope " + field, expo >= need, fmt(expo) + " >= " + fmt(need)}};
}

}  // namespace detail

/// All jobs in report order.
inline std::vector<Job> suite() {
  using namespace detail;
  std::vector<Job> jobs;
  jobs.push_back({0, "numberfield", module_numberfield});
  jobs.push_back({0, "exterior", module_exterior});
  jobs.push_back({0, "lattice", module_lattice});
  for (const auto& f : bridge_fields()) jobs.push_back({1, "bridge " + f, [f](const Options&) { return height_bridge(f); }});
  for (const auto& f : bridge_fields()) jobs.push_back({2, "duality " + f, [f](const Options&) { return duality(f); }});
  jobs.push_back({3, "geometry", geometry});
  for (const auto& fam : families()) {
    jobs.push_back({4, "going-down " + fam.field + " n=" + std::to_string(fam.n) + " e=" + std::to_string(fam.e),
                    [fam](const Options&) { return going_down_family(fam); }});
  }
  jobs.push_back({7, "golden ratio", [](const Options&) { return golden_ratio(); }});
  for (const char* f : {"Q", "Q(i)"})
    for (std::size_t n : {1u, 2u})
      for (std::size_t j = 0; j < n; ++j) {
        const std::string name = std::string("dirichlet ") + f + " n=" + std::to_string(n) + " j=" + std::to_string(j);
        jobs.push_back({7, name, [f, n, j](const Options&) { return dirichlet(f, n, j); }});
      }
  jobs.push_back({7, "exact targets", [](const Options&) { return exact_targets(); }});
  for (const char* f : {"Q(i)", "Q"}) jobs.push_back({8, std::string("transfer ") + f, [f](const Options&) { return transfer(f); }});
  return jobs;
}

/// Runs `jobs` on opt.jobs threads; a job that throws becomes one failed check.
inline Outcome run(const std::vector<Job>& jobs, const Options& opt) {
  Outcome out;
  out.checks.resize(jobs.size());
  out.seconds.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        out.checks[i] = jobs[i].run(opt);
      } catch (const std::exception& e) {
        out.checks[i] = {{jobs[i].criterion, jobs[i].name, false, std::string("error: ") + e.what()}};
      }
      out.seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(opt.jobs, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

/// Plain-text table; identical for identical outcomes.
inline std::string report(const Outcome& o) {
  std::ostringstream out;
  std::size_t total = 0, passed = 0;
  out << "crit  result  check  (detail)\n";
  for (const auto& js : o.checks)
    for (const auto& c : js) {
      ++total;
      passed += c.pass ? 1 : 0;
      out << (c.criterion == 0 ? std::string("mod") : std::to_string(c.criterion));
      out << std::string(c.criterion == 0 ? 3 : 5, ' ') << (c.pass ? "PASS" : "FAIL") << "    " << c.name << "  ("
          << c.detail << ")\n";
    }
  out << passed << "/" << total << " checks passed\n";
  return out.str();
}

}  // namespace sh::verify
