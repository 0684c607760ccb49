#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sh/geometry.hpp"

namespace sh {
namespace {

using C = std::complex<double>;

CVector v(std::initializer_list<C> xs) {
  CVector out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (C x : xs) out(i++) = x;
  return out;
}

CVector unit(std::size_t n, std::size_t i) {
  CVector out = CVector::Zero(static_cast<Eigen::Index>(n));
  out(static_cast<Eigen::Index>(i)) = 1;
  return out;
}

CVector random_vec(std::size_t n, std::mt19937_64& rng, bool complex = true) {
  std::normal_distribution<double> g;
  CVector out(static_cast<Eigen::Index>(n));
  for (auto& x : out) x = C(g(rng), complex ? g(rng) : 0.0);
  return out;
}

NumericSubspace random_subspace(std::size_t n, std::size_t d, std::mt19937_64& rng, bool complex = true) {
  std::vector<CVector> vs;
  for (std::size_t i = 0; i < d; ++i) vs.push_back(random_vec(n, rng, complex));
  return NumericSubspace::from_vectors(vs);
}

CMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  CMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j) = random_vec(n, rng);
  Eigen::HouseholderQR<CMatrix> qr(m);
  return qr.householderQ() * CMatrix::Identity(m.rows(), m.cols());
}

constexpr double kPi = std::numbers::pi;

TEST(Geometry, ProjDistExamples) {
  EXPECT_EQ(proj_dist(unit(2, 0), unit(2, 0)), 0.0);
  EXPECT_DOUBLE_EQ(proj_dist(unit(2, 0), unit(2, 1)), 1.0);
  EXPECT_NEAR(proj_dist(unit(2, 0), v({std::cos(kPi / 6), std::sin(kPi / 6)})), 0.5, 1e-15);
  EXPECT_THROW(proj_dist(CVector::Zero(2), unit(2, 0)), MathError);
}

TEST(Geometry, ProjDistMatchesWedge) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 100; ++t) {
    const CVector x = random_vec(4, rng), y = random_vec(4, rng);
    EXPECT_NEAR(proj_dist(x, y), gen_det({x, y}) / (x.norm() * y.norm()), 1e-12);
    EXPECT_NEAR(proj_dist(x, y), proj_dist(y, x), 1e-12);
    EXPECT_NEAR(proj_dist(x, C(0.3, -2.0) * x), 0.0, 1e-12);
  }
}

TEST(Geometry, TriangleInequality) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 300; ++t) {
    const CVector x = random_vec(3, rng), y = random_vec(3, rng), z = random_vec(3, rng);
    EXPECT_LE(proj_dist(x, z), proj_dist(x, y) + proj_dist(y, z) + 1e-12);
  }
}

TEST(Geometry, DistPointSubspaceExamples) {
  const auto b = NumericSubspace::from_vectors({v({1, 1})});
  EXPECT_NEAR(dist_point_subspace(unit(2, 0), b), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(dist_point_subspace(v({2, 2}), b), 0.0, 1e-15);
  EXPECT_NEAR(dist_point_subspace(v({1, -1}), b), 1.0, 1e-15);
  EXPECT_THROW(dist_point_subspace(CVector::Zero(2), b), MathError);
}

// Oracle: minimum of proj_dist over a dense grid of unit vectors of a real plane.
TEST(Geometry, DistPointSubspaceGridOracle) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    const auto b = random_subspace(4, 2, rng, false);
    const CVector x = random_vec(4, rng, false);
    double best = 1.0;
    for (int k = 0; k < 20000; ++k) {
      const double s = kPi * k / 20000;
      best = std::min(best, proj_dist(x, std::cos(s) * b.vector(0) + std::sin(s) * b.vector(1)));
    }
    EXPECT_NEAR(dist_point_subspace(x, b), best, 1e-3);
  }
}

TEST(Geometry, PrincipalDataExamples) {
  std::mt19937_64 rng(24);
  const auto a = random_subspace(5, 2, rng);
  const auto same = principal_data(a, a);
  for (double l : same.lambdas) EXPECT_NEAR(l, 1.0, 1e-12);
  for (double w : same.omegas) EXPECT_NEAR(w, 0.0, 1e-12);

  const auto e12 = NumericSubspace::from_vectors({unit(4, 0), unit(4, 1)});
  const auto e34 = NumericSubspace::from_vectors({unit(4, 2), unit(4, 3)});
  for (double w : principal_data(e12, e34).omegas) EXPECT_NEAR(w, 1.0, 1e-15);

  const auto l1 = NumericSubspace::from_vectors({unit(2, 0)});
  const auto l2 = NumericSubspace::from_vectors({v({std::cos(kPi / 6), std::sin(kPi / 6)})});
  EXPECT_NEAR(omega_i(l1, l2, 1), 0.5, 1e-15);
  EXPECT_THROW(omega_i(l1, l2, 2), MathError);
  EXPECT_THROW(omega_i(l1, l2, 0), MathError);
}

TEST(Geometry, PrincipalDataInvariants) {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 3 + rng() % 4;
    const auto a = random_subspace(n, 1 + rng() % (n - 1), rng);
    const auto b = random_subspace(n, 1 + rng() % (n - 1), rng);
    const auto pd = principal_data(a, b);
    const std::size_t f = std::min(a.dim(), b.dim());
    ASSERT_EQ(pd.omegas.size(), f);
    for (std::size_t i = 0; i < f; ++i) {
      // squared form: near lambda = 1 omega comes from the residual route
      EXPECT_NEAR(pd.omegas[i] * pd.omegas[i], 1 - pd.lambdas[i] * pd.lambdas[i], 1e-12);
      if (i > 0) {
        EXPECT_LE(pd.omegas[i - 1], pd.omegas[i] + 1e-15);
      }
    }
    const CMatrix g = pd.x_basis.adjoint() * pd.y_basis;
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      for (Eigen::Index j = 0; j < g.cols(); ++j)
        EXPECT_NEAR(std::abs(g(i, j) - (i == j ? C(pd.lambdas[static_cast<std::size_t>(i)]) : C(0))), 0.0, 1e-9);
  }
}

TEST(Geometry, ResidualRouteNearCoincidence) {
  // Two lines at angle 1e-9: the cosine route would lose every digit.
  const double eps = 1e-9;
  const auto a = NumericSubspace::from_vectors({unit(3, 0)});
  const auto b = NumericSubspace::from_vectors({v({std::cos(eps), std::sin(eps), 0})});
  EXPECT_NEAR(omega_i(a, b, 1) / std::sin(eps), 1.0, 1e-6);
}

TEST(Geometry, UnitaryInvariance) {
  std::mt19937_64 rng(26);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_subspace(5, 2, rng), b = random_subspace(5, 3, rng);
    const CMatrix u = random_unitary(5, rng);
    const auto ua = NumericSubspace::from_basis(u * a.onb()), ub = NumericSubspace::from_basis(u * b.onb());
    const auto w = principal_data(a, b).omegas, uw = principal_data(ua, ub).omegas;
    for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(w[i], uw[i], 1e-9);
  }
}

// Oracle for the inf-sup definition at d = e = 2, n = 4 on real subspaces:
// omega_1 = min over lines of A, omega_2 = max over unit vectors of A.
TEST(Geometry, InfSupGridOracle) {
  std::mt19937_64 rng(27);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_subspace(4, 2, rng, false), b = random_subspace(4, 2, rng, false);
    double lo = 1.0, hi = 0.0;
    for (int k = 0; k < 20000; ++k) {
      const double s = kPi * k / 20000;
      const double w = dist_point_subspace(std::cos(s) * a.vector(0) + std::sin(s) * a.vector(1), b);
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
    const auto pd = principal_data(a, b);
    EXPECT_NEAR(pd.omegas[0], lo, 1e-3);
    EXPECT_NEAR(pd.omegas[1], hi, 1e-3);
  }
}

TEST(Geometry, MuExamples) {
  const auto e1 = NumericSubspace::from_vectors({unit(3, 0)});
  const auto e2 = NumericSubspace::from_vectors({unit(3, 1)});
  EXPECT_NEAR(mu(e1, e2), 1.0, 1e-15);
  EXPECT_NEAR(mu_wedge({unit(3, 0)}, {unit(3, 1)}), 1.0, 1e-15);
  const auto e12 = NumericSubspace::from_vectors({unit(4, 0), unit(4, 1)});
  const auto e1_4 = NumericSubspace::from_vectors({unit(4, 0)});
  EXPECT_NEAR(mu(e1_4, e12), 0.0, 1e-15);
  EXPECT_NEAR(mu_wedge({unit(4, 0)}, {unit(4, 0), unit(4, 1)}), 0.0, 1e-15);
  EXPECT_THROW(mu_wedge({unit(2, 0)}, {unit(2, 0), unit(2, 1)}), MathError);
}

TEST(Geometry, MuProductMatchesWedge) {
  std::mt19937_64 rng(28);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 5;
    const std::size_t d = 1 + rng() % (n - 1);
    const std::size_t e = 1 + rng() % (n - d);
    std::vector<CVector> xa, xb;
    for (std::size_t i = 0; i < d; ++i) xa.push_back(random_vec(n, rng, t % 2 == 0));
    for (std::size_t i = 0; i < e; ++i) xb.push_back(random_vec(n, rng, t % 2 == 0));
    const auto a = NumericSubspace::from_vectors(xa), b = NumericSubspace::from_vectors(xb);
    EXPECT_NEAR(mu(a, b), mu_wedge(xa, xb), 1e-8);
  }
}

TEST(Geometry, OrthComplement) {
  const auto b = NumericSubspace::from_vectors({unit(3, 0)});
  const auto c = orth_complement(b);
  EXPECT_EQ(c.dim(), 2u);
  EXPECT_NEAR(c.onb().row(0).norm(), 0.0, 1e-15);
  EXPECT_THROW(orth_complement(NumericSubspace::from_vectors({unit(2, 0), unit(2, 1)})), MathError);

  std::mt19937_64 rng(29);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng() % 5;
    const auto s = random_subspace(n, 1 + rng() % (n - 1), rng);
    const auto sc = orth_complement(s);
    EXPECT_EQ(sc.dim(), n - s.dim());
    EXPECT_LE((s.onb().adjoint() * sc.onb()).cwiseAbs().maxCoeff(), 1e-12);
    // involution
    for (double w : principal_data(orth_complement(sc), s).omegas) EXPECT_NEAR(w, 0.0, 1e-7);
    // complement identity
    const CVector x = random_vec(n, rng);
    const double w1 = dist_point_subspace(x, s), w2 = dist_point_subspace(x, sc);
    EXPECT_NEAR(w1 * w1 + w2 * w2, 1.0, 1e-9);
  }
  const auto d = NumericSubspace::from_vectors({v({1, 1})});
  const double w1 = dist_point_subspace(unit(2, 0), d), w2 = dist_point_subspace(unit(2, 0), orth_complement(d));
  EXPECT_NEAR(w1 * w1, 0.5, 1e-15);
  EXPECT_NEAR(w2 * w2, 0.5, 1e-15);
}

}  // namespace
}  // namespace sh
