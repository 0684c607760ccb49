#include <gtest/gtest.h>

#include <random>

#include "sh/exterior.hpp"

namespace sh {
namespace {

using C = std::complex<double>;

Eigen::VectorXcd vec(std::initializer_list<C> xs) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (C x : xs) v(i++) = x;
  return v;
}

ComplexMultiVector e(std::size_t n, std::size_t i) {
  std::vector<C> v(n, 0.0);
  v[i] = 1.0;
  return ComplexMultiVector::from_vector(v);
}

TEST(Exterior, WedgeExamples) {
  const auto w = wedge(e(3, 0), e(3, 1));
  ASSERT_EQ(w.grade(), 2u);
  EXPECT_EQ(w.at(0b011), C(1));
  EXPECT_EQ(w.at(0b101), C(0));
  EXPECT_EQ(w.at(0b110), C(0));
  EXPECT_EQ(wedge(e(3, 1), e(3, 0)).at(0b011), C(-1));

  const auto x = ComplexMultiVector::from_vector({C(1), C(2), C(-3)});
  EXPECT_EQ(norm(wedge(x, x)), 0.0);

  const auto y = ComplexMultiVector::from_vector({C(3), C(4)});
  const auto z = wedge(y, e(2, 1));
  EXPECT_EQ(z.at(0b11), C(3));
}

TEST(Exterior, WedgeErrors) {
  EXPECT_THROW(wedge(e(2, 0), wedge(e(2, 0), e(2, 1))), MathError);
  EXPECT_THROW(wedge(e(2, 0), e(3, 0)), MathError);
  EXPECT_THROW(ComplexMultiVector(17, 1, C(0)), MathError);
  EXPECT_THROW(inner(e(3, 0), wedge(e(3, 0), e(3, 1))), MathError);
}

TEST(Exterior, LexicographicIndexSets) {
  const ComplexMultiVector w(4, 2, C(0));
  std::vector<std::vector<std::size_t>> sets;
  for (std::size_t r = 0; r < w.size(); ++r) sets.push_back(w.index_set(r));
  const std::vector<std::vector<std::size_t>> expected = {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
  EXPECT_EQ(sets, expected);
}

TEST(Exterior, InnerAndNorm) {
  const auto w = wedge(e(3, 0), e(3, 1));
  EXPECT_EQ(inner(w, w), C(1));
  EXPECT_DOUBLE_EQ(gen_det({vec({1, 0}), vec({0, 1})}), 1.0);
  // Lagrange: |X|^2|Y|^2 - |<X,Y>|^2 = |X^Y|^2 = 4
  const auto x = vec({1, 2}), y = vec({3, 4});
  const double lhs = x.squaredNorm() * y.squaredNorm() - std::norm(y.dot(x));
  EXPECT_NEAR(lhs, 4.0, 1e-12);
  EXPECT_NEAR(std::pow(gen_det({x, y}), 2), 4.0, 1e-12);
}

TEST(Exterior, GenDetExamples) {
  EXPECT_DOUBLE_EQ(gen_det({vec({3, 4})}), 5.0);
  EXPECT_EQ(gen_det({vec({1, 2}), vec({2, 4})}), 0.0);
}

Eigen::VectorXcd random_vec(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = C(g(rng), g(rng));
  return v;
}

TEST(Exterior, GenDetSquaredIsGramDeterminant) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 5;
    const std::size_t m = 1 + rng() % n;
    std::vector<Eigen::VectorXcd> xs;
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      xs.push_back(random_vec(n, rng));
      a.col(static_cast<Eigen::Index>(i)) = xs.back();
    }
    const double gram = (a.adjoint() * a).determinant().real();
    EXPECT_NEAR(std::pow(gen_det(xs), 2), gram, 1e-9 * std::max(1.0, gram));
  }
}

TEST(Exterior, HadamardBound) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    const auto x = random_vec(4, rng), y = random_vec(4, rng);
    EXPECT_LE(gen_det({x, y}), x.norm() * y.norm() * (1 + 1e-12));
  }
}

TEST(Exterior, WedgeIsAssociativeAndGradedAnticommutative) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const auto a = ComplexMultiVector::from_vector(to_std(random_vec(5, rng)));
    const auto b = ComplexMultiVector::from_vector(to_std(random_vec(5, rng)));
    const auto c = ComplexMultiVector::from_vector(to_std(random_vec(5, rng)));
    const auto l = wedge(wedge(a, b), c), r = wedge(a, wedge(b, c));
    const auto ab = wedge(a, b), ba = wedge(b, a);
    for (std::size_t i = 0; i < l.size(); ++i) EXPECT_NEAR(std::abs(l[i] - r[i]), 0.0, 1e-12);
    for (std::size_t i = 0; i < ab.size(); ++i) EXPECT_NEAR(std::abs(ab[i] + ba[i]), 0.0, 1e-12);
    // grade 2 ^ grade 1 commutes with sign (+1)
    const auto abc = wedge(ab, c), cab = wedge(c, ab);
    for (std::size_t i = 0; i < abc.size(); ++i) EXPECT_NEAR(std::abs(abc[i] - cab[i]), 0.0, 1e-12);
  }
}

TEST(Exterior, PluckerExamples) {
  const auto p = plucker({vec({1, 0, 0}), vec({0, 1, 0})});
  EXPECT_EQ(p[0], C(1));
  EXPECT_EQ(p[1], C(0));
  EXPECT_EQ(p[2], C(0));
  EXPECT_THROW(plucker({vec({1, 2}), vec({2, 4})}), MathError);

  const FieldPtr q = builtin_field("Q");
  const auto pq = plucker(std::vector<std::vector<FieldElement>>{{q->from_rational(3), q->from_rational(4)}});
  const auto nq = normalized(pq);
  EXPECT_EQ(nq[0], q->one());
  EXPECT_EQ(nq[1], q->from_rational(Rational(4, 3)));

  const FieldPtr qi = builtin_field("Q(i)");
  const auto pi = normalized(plucker(std::vector<std::vector<FieldElement>>{{qi->one(), qi->theta()}}));
  EXPECT_EQ(pi[0], qi->one());
  EXPECT_EQ(pi[1], qi->theta());
}

// Two random bases of one subspace over K give proportional Plucker vectors.
TEST(Exterior, PluckerIsBasisIndependentUpToScalar) {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<int> d(-4, 4);
  for (const char* name : {"Q", "Q(i)", "Q(sqrt2)", "Q(zeta5)"}) {
    const FieldPtr k = builtin_field(name);
    auto rnd = [&] {
      RationalVector c;
      for (std::size_t i = 0; i < k->degree(); ++i) c.emplace_back(d(rng));
      return k->element(c);
    };
    for (int t = 0; t < 5; ++t) {
      std::vector<std::vector<FieldElement>> rows(2, std::vector<FieldElement>(4, k->zero()));
      for (auto& r : rows)
        for (auto& x : r) x = rnd();
      ExactMultiVector p1(4, 2, k->zero());
      try {
        p1 = plucker(rows);
      } catch (const MathError&) {
        continue;
      }
      // new basis: (a r0 + b r1, c r0 + d r1)
      FieldElement a = rnd(), b = rnd(), c = rnd(), dd = rnd();
      if ((a * dd - b * c).is_zero()) continue;
      std::vector<std::vector<FieldElement>> rows2(2, std::vector<FieldElement>(4, k->zero()));
      for (std::size_t j = 0; j < 4; ++j) {
        rows2[0][j] = a * rows[0][j] + b * rows[1][j];
        rows2[1][j] = c * rows[0][j] + dd * rows[1][j];
      }
      EXPECT_EQ(key(normalized(plucker(rows2))), key(normalized(p1))) << name;
    }
  }
}

}  // namespace
}  // namespace sh
