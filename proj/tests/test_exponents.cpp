#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "sh/exponents.hpp"
#include "sh/instances.hpp"
#include "support.hpp"

namespace sh {
namespace {

using testing::kvec;

const double kPhi = (1 + std::sqrt(5.0)) / 2;

CVector golden() {
  CVector u(2);
  u << 1, kPhi;
  return u;
}

CVector random_target(std::size_t n_amb, int q, std::mt19937_64& rng) {
  CVector u(static_cast<Eigen::Index>(n_amb));
  for (auto& x : u) x = {unit_real(rng), q == 2 ? unit_real(rng) : 0.0};
  return u;
}

TEST(Enumerate, RationalLinesMatchBruteForce) {
  const FieldPtr q = builtin_field("Q");
  const EnumerationResult en = enumerate_subspaces(q, 2, 1, 5);
  EXPECT_TRUE(en.complete);
  // oracle: primitive (a, b) with a > 0, or a = 0 and b = 1, and a^2 + b^2 <= 25
  std::multiset<double> expected;
  for (long a = 0; a <= 5; ++a)
    for (long b = -5; b <= 5; ++b) {
      if (a == 0 && b != 1) continue;
      if (std::gcd(a, b) != 1) continue;
      if (a * a + b * b <= 25) expected.insert(std::sqrt(static_cast<double>(a * a + b * b)));
    }
  ASSERT_EQ(en.subspaces.size(), expected.size());
  std::set<std::string> keys;
  auto it = expected.begin();
  for (std::size_t i = 0; i < en.subspaces.size(); ++i, ++it) {
    EXPECT_NEAR(en.heights[i], *it, 1e-12);
    EXPECT_TRUE(keys.insert(projective_key(en.subspaces[i].basis())).second);
  }
}

TEST(Enumerate, ProjectiveDedup) {
  const FieldPtr q = builtin_field("Q");
  const std::string k1 = projective_key({kvec(q, {{3}, {4}})});
  EXPECT_EQ(k1, projective_key({kvec(q, {{-3}, {-4}})}));
  EXPECT_EQ(k1, projective_key({kvec(q, {{6}, {8}})}));
  const FieldPtr qi = builtin_field("Q(i)");
  EXPECT_EQ(projective_key({kvec(qi, {{1}, {0, 1}})}), projective_key({kvec(qi, {{0, 1}, {-1}})}));
}

TEST(Enumerate, GaussianPlanesHaveExactHeights) {
  const FieldPtr qi = builtin_field("Q(i)");
  const EnumerationResult en = enumerate_subspaces(qi, 3, 2, 6);
  EXPECT_FALSE(en.complete);
  ASSERT_FALSE(en.subspaces.empty());
  EXPECT_NEAR(en.heights.front(), 1.0, 1e-12);  // coordinate planes
  for (std::size_t i = 0; i < en.subspaces.size(); ++i) {
    EXPECT_LE(en.heights[i], 6 * (1 + 1e-9));
    EXPECT_NEAR(height_lattice(en.subspaces[i]) / en.heights[i], 1.0, 1e-6);
    if (i > 0) EXPECT_LE(en.heights[i - 1], en.heights[i]);
  }
}

// records of u = (1, phi) by brute force over all (a, b) with b next to a * phi
std::vector<std::pair<long double, long double>> golden_oracle(double qmax) {
  const long double u1 = kPhi;
  const long double s = std::sqrt(1 + u1 * u1);
  std::vector<std::tuple<long double, long double>> cands{{1.0L, 1.0L / s}};  // (0, 1)
  for (long a = 1; a <= static_cast<long>(qmax); ++a)
    for (long b = static_cast<long>(std::floor(a * u1)) - 1; b <= static_cast<long>(std::ceil(a * u1)) + 1; ++b) {
      if (std::gcd(a, b) != 1) continue;
      const long double h = std::sqrt(static_cast<long double>(a) * a + static_cast<long double>(b) * b);
      if (h > qmax) continue;
      cands.emplace_back(h, std::fabs(a * u1 - b) / s);
    }
  std::sort(cands.begin(), cands.end());
  std::vector<std::pair<long double, long double>> out;
  for (const auto& [h, v] : cands)
    if (out.empty() || v < out.back().second) out.emplace_back(h, v);
  return out;
}

TEST(RecordCurve, GoldenRatioMatchesBruteForceAndConvergents) {
  const double qmax = 1e5;
  const RecordCurve c = record_curve(numeric_target(golden()), builtin_field("Q"), 0, qmax);
  EXPECT_TRUE(c.complete);
  const auto oracle = golden_oracle(qmax);
  ASSERT_EQ(c.records.size(), oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    EXPECT_NEAR(c.records[i].height, static_cast<double>(oracle[i].first), 1e-9 * c.records[i].height);
    EXPECT_NEAR(c.records[i].value, static_cast<double>(oracle[i].second), 1e-9);
    EXPECT_NEAR(c.records[i].value / static_cast<double>(oracle[i].second), 1.0, 1e-9);
  }
  // from H = 1.41 on, the records are the lines through (F_k, F_{k+1})
  long f0 = 1, f1 = 1;
  for (std::size_t i = 1; i < c.records.size(); ++i) {
    const KVector& x = c.records[i].basis.front();
    const Rational ratio = x[1].coeffs()[0] / x[0].coeffs()[0];
    EXPECT_EQ(ratio, Rational(f1, f0)) << i;
    const long f2 = f0 + f1;
    f0 = f1;
    f1 = f2;
  }
}

TEST(RecordCurve, ContinuedFractionOracleOnOtherIrrationals) {
  // u = (1, sqrt 2): records are the convergents of sqrt 2 with both p, q in range
  CVector u(2);
  u << 1, std::sqrt(2.0);
  const RecordCurve c = record_curve(numeric_target(u), builtin_field("Q"), 0, 1e4);
  // convergents of sqrt 2 = [1; 2, 2, ...]
  std::set<std::pair<long, long>> conv;
  long p0 = 1, q0 = 0, p1 = 1, q1 = 1;
  while (std::hypot(static_cast<double>(p1), static_cast<double>(q1)) <= 1e4) {
    conv.insert({q1, p1});
    const long p2 = 2 * p1 + p0, q2 = 2 * q1 + q0;
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
  }
  std::size_t matched = 0;
  for (const auto& r : c.records) {
    const KVector& x = r.basis.front();
    if (x[0].is_zero()) continue;
    const Rational t = x[1].coeffs()[0] / x[0].coeffs()[0];
    matched += conv.count({t.get_den().get_si(), t.get_num().get_si()});
  }
  EXPECT_GE(matched + 1, c.records.size() - 1);  // all but possibly the first step
  EXPECT_GE(matched, conv.size() - 1);
}

TEST(RecordCurve, ClosedFormOmegaAgreesWithPrincipalAngles) {
  std::mt19937_64 rng(8);
  for (const char* name : {"Q", "Q(i)"}) {
    const FieldPtr k = builtin_field(name);
    for (std::size_t j : {0u, 1u}) {
      const CVector u = random_target(3, k->q(), rng);
      const RecordCurve c = record_curve(numeric_target(u), k, j, 200);
      EXPECT_EQ(c.method, j == 0 ? "line-sweep" : "hyperplane-sweep");
      const NumericSubspace a = NumericSubspace::from_vectors({u});
      for (const auto& r : c.records) {
        const SubspaceOverK s(k, r.basis);
        EXPECT_EQ(s.dim(), j + 1);
        const double w = principal_data(a, s.numeric(0)).omegas[0];
        EXPECT_NEAR(r.value, r.height * std::pow(w, k->q()), 1e-9 * std::max(1.0, r.value));
        EXPECT_NEAR(r.height / height_ideal(s), 1.0, 1e-9);
      }
    }
  }
}

TEST(RecordCurve, LineAndHyperplaneSweepsAgreeInTheDimensionTwoCase) {
  // in K^2 a line is a hyperplane: two independent code paths, one answer
  std::mt19937_64 rng(9);
  for (const char* name : {"Q", "Q(i)"}) {
    const FieldPtr k = builtin_field(name);
    for (int t = 0; t < 5; ++t) {
      const Target tg = numeric_target(random_target(2, k->q(), rng));
      const RecordCurve a = detail::sweep(tg, k, 0, 1e4, false, 200000);
      const RecordCurve b = detail::sweep(tg, k, 0, 1e4, true, 200000);
      ASSERT_EQ(a.records.size(), b.records.size());
      for (std::size_t i = 0; i < a.records.size(); ++i) {
        EXPECT_NEAR(a.records[i].height, b.records[i].height, 1e-9 * a.records[i].height);
        EXPECT_NEAR(a.records[i].value / b.records[i].value, 1.0, 1e-6);
        EXPECT_TRUE(SubspaceOverK(k, a.records[i].basis).same_as(SubspaceOverK(k, b.records[i].basis)));
      }
    }
  }
}

TEST(RecordCurve, SweepAgreesWithCompleteGenericEnumeration) {
  std::mt19937_64 rng(10);
  for (const char* name : {"Q", "Q(i)"}) {
    const FieldPtr k = builtin_field(name);
    const Target tg = numeric_target(random_target(3, k->q(), rng));
    const double qmax = k->q() == 1 ? 30 : 20;
    CurveOptions generic;
    generic.force_generic = true;
    const RecordCurve a = record_curve(tg, k, 0, qmax);
    const RecordCurve b = record_curve(tg, k, 0, qmax, generic);
    EXPECT_EQ(b.method, "generic");
    EXPECT_TRUE(b.complete);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      EXPECT_EQ(a.records[i].key, b.records[i].key);
      EXPECT_NEAR(a.records[i].value, b.records[i].value, 1e-9);
    }
  }
}

TEST(RecordCurve, FrontierIsStrictlyMonotone) {
  std::mt19937_64 rng(12);
  const FieldPtr k = builtin_field("Q(i)");
  for (std::size_t j : {0u, 1u}) {
    const RecordCurve c = record_curve(numeric_target(random_target(3, 2, rng)), k, j, 1e4);
    for (std::size_t i = 1; i < c.records.size(); ++i) {
      EXPECT_LT(c.records[i - 1].height, c.records[i].height);
      EXPECT_GT(c.records[i - 1].value, c.records[i].value);
    }
  }
}

TEST(RecordCurve, ExactTargetsGiveExactZero) {
  const FieldPtr q = builtin_field("Q");
  const RecordCurve c = record_curve(algebraic_target(kvec(q, {{2}, {3}})), q, 0, 100);
  EXPECT_TRUE(c.exact_zero);
  EXPECT_TRUE(c.records.back().exact_zero);
  EXPECT_EQ(c.records.back().value, 0.0);
  EXPECT_NEAR(c.records.back().height, std::sqrt(13.0), 1e-12);
  const ExponentEstimate e = estimate_exponents(c);
  EXPECT_TRUE(e.infinite);
  EXPECT_TRUE(std::isinf(e.omega) && std::isinf(e.omega_hat));

  const FieldPtr qi = builtin_field("Q(i)");
  const Target t = algebraic_target(kvec(qi, {{1}, {0, 1}, {2}}));
  EXPECT_TRUE(record_curve(t, qi, 1, 100).exact_zero);
  EXPECT_TRUE(record_curve(t, qi, 0, 100).exact_zero);
  CurveOptions generic;
  generic.force_generic = true;
  const Target t4 = algebraic_target(kvec(qi, {{1}, {1, 1}, {0}, {0}}));
  EXPECT_TRUE(record_curve(t4, qi, 1, 30, generic).exact_zero);
}

TEST(Estimate, GoldenRatio) {
  const RecordCurve c = record_curve(numeric_target(golden()), builtin_field("Q"), 0, 1e5);
  const ExponentEstimate e = estimate_exponents(c);
  EXPECT_GE(e.omega, 0.9);
  EXPECT_LE(e.omega, 1.1);
  EXPECT_GE(e.omega_hat, 0.9);
  EXPECT_LE(e.omega_hat, 1.1);
  EXPECT_NEAR(e.omega, e.omega_prev, 0.05);
}

TEST(Estimate, TooFewRecords) {
  RecordCurve c;
  c.qmax = 10;
  c.records.resize(3);
  EXPECT_THROW(estimate_exponents(c), MathError);
}

TEST(Estimate, OmegaIsMonotoneInQmax) {
  std::mt19937_64 rng(13);
  for (const char* name : {"Q", "Q(i)"}) {
    const FieldPtr k = builtin_field(name);
    for (int t = 0; t < 5; ++t) {
      const Target tg = numeric_target(random_target(3, k->q(), rng));
      double last = -1e300;
      for (double qmax : {1e4, 3e4, 1e5}) {
        const ExponentEstimate e = estimate_exponents(record_curve(tg, k, 0, qmax));
        EXPECT_GE(e.omega, last);
        last = e.omega;
      }
    }
  }
}

TEST(Estimate, DirichletLowerBoundOnRandomTargets) {
  std::mt19937_64 rng(14);
  for (const char* name : {"Q", "Q(i)"}) {
    const FieldPtr k = builtin_field(name);
    for (std::size_t j : {0u, 1u}) {
      const double bound = (j + 1.0) / (2.0 - j);
      for (int t = 0; t < 5; ++t) {
        const RecordCurve c = record_curve(numeric_target(random_target(3, k->q(), rng)), k, j, 1e4);
        EXPECT_FALSE(c.precision_floor);
        EXPECT_GE(estimate_exponents(c).omega_hat, bound - 0.15) << name << " j=" << j;
      }
    }
  }
}

TEST(Chain, Examples) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_DOUBLE_EQ(chain_lower(inf, 1), 1.0);
  EXPECT_DOUBLE_EQ(chain_lower(2, 1), 0.5);
  EXPECT_DOUBLE_EQ(chain_upper(2, 1, 2), 0.5);
  EXPECT_TRUE(std::isinf(chain_upper(inf, 1, 2)));

  // omega_1 = 2 pins omega_0 = 1/2 (n = 2)
  EXPECT_TRUE(check_chain({0.5, 2}, 2, 0).all_pass());
  EXPECT_FALSE(check_chain({0.6, 2}, 2, 0).all_pass());
  // omega_1 = 1.5 is below the Dirichlet value 2 and its bounds cross
  const ChainReport bad = check_chain({0.3, 1.5}, 2, 0);
  EXPECT_FALSE(bad.all_pass());
  EXPECT_FALSE(bad.checks.back().pass);
  // omega_1 infinite: omega_0 >= 1
  EXPECT_FALSE(check_chain({0.9, inf}, 2, 0).all_pass());
  EXPECT_TRUE(check_chain({inf, inf}, 2, 0).all_pass());
  // n = 1: only omega_0 >= 1
  const ChainReport one = check_chain({1.02}, 1);
  EXPECT_EQ(one.checks.size(), 1u);
  EXPECT_TRUE(one.all_pass());
}

TEST(Transfer, SyntheticTargetNearGaussianPlane) {
  std::vector<double> mean(3, 0), xs;
  const std::vector<double> grid{1e2, 1e3, 1e4};
  double need = 0;
  for (int seed = 1; seed <= 5; ++seed) {
    const NearTarget nt = near_subspace_target("Q(i)", 3, 2, 2.0, 1e4, seed);
    const TransferReport rep = transfer_experiment(numeric_target(nt.u), builtin_field("Q(i)"), 1, grid, 2.0);
    EXPECT_TRUE(rep.dims_ok && rep.witnesses_ok && rep.certificates_ok);
    for (std::size_t i = 0; i < grid.size(); ++i) mean[i] += std::log(rep.steps[i].value_out) / 5;
    // B itself is the witness throughout
    for (const auto& st : rep.steps) EXPECT_NEAR(st.witness_height, height_ideal(*nt.b), 1e-9);
    need = 2 * rep.y1_prime - 1 - 0.1;
  }
  for (double g : grid) xs.push_back(std::log(std::pow(g, (2 * 2.0 + 1) / 2)));
  EXPECT_GE(-regression_slope(xs, mean), need);
}

TEST(Transfer, RationalRunUsesRealExponents) {
  const NearTarget nt = near_subspace_target("Q", 3, 2, 3.5, 1e4, 2);
  const TransferReport rep = transfer_experiment(numeric_target(nt.u), builtin_field("Q"), 1, {1e2, 1e3, 1e4}, 3.5);
  EXPECT_EQ(rep.q, 1);
  EXPECT_NEAR(rep.y1_prime, 3.5 * 2 / 4.5, 1e-12);
  EXPECT_TRUE(rep.dims_ok && rep.witnesses_ok && rep.certificates_ok);
}

TEST(Transfer, ExactTargetStaysExact) {
  const FieldPtr qi = builtin_field("Q(i)");
  const Target t = algebraic_target(kvec(qi, {{1}, {0, 1}, {2}}));
  const TransferReport rep = transfer_experiment(t, qi, 1, {1e2, 1e3}, 2.0);
  for (const auto& st : rep.steps) {
    EXPECT_TRUE(st.trivial);
    EXPECT_EQ(st.value_out, 0.0);
    EXPECT_EQ(st.dim_out, 1u);
  }
  EXPECT_TRUE(std::isinf(rep.exponent));
  EXPECT_TRUE(rep.ok());
}

}  // namespace
}  // namespace sh
