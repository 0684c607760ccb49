#include <gtest/gtest.h>

#include <random>

#include "sh/exact.hpp"

namespace sh {
namespace {

IntMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
  IntMatrix m;
  for (auto r : rows) {
    IntVector v;
    for (long x : r) v.emplace_back(x);
    m.push_back(v);
  }
  return m;
}

TEST(Exact, ParseRational) {
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(parse_rational("-5"), Rational(-5));
  EXPECT_EQ(to_string(Rational(3, 2)), "3/2");
  EXPECT_THROW(parse_rational("abc"), SpecError);
  EXPECT_THROW(parse_rational("1/0"), SpecError);
}

TEST(Exact, LatticeIndex) {
  EXPECT_EQ(*lattice_index(mat({{2, 0}, {0, 3}}), 2), 6);
  EXPECT_EQ(*lattice_index(mat({{6}, {10}}), 1), 2);
  EXPECT_EQ(*lattice_index(mat({{2, 0}, {0, 2}, {1, 1}, {-1, 1}}), 2), 2);
  EXPECT_FALSE(lattice_index(mat({{1, 2}, {2, 4}}), 2).has_value());
}

TEST(Exact, IntegerKernelIsSaturated) {
  // 2x + 4y - 6z = 0 : kernel lattice has index 1 in its span
  const IntMatrix m = mat({{2, 4, -6}});
  const IntMatrix k = integer_kernel(m, 3);
  ASSERT_EQ(k.size(), 2u);
  for (const auto& v : k) EXPECT_EQ(2 * v[0] + 4 * v[1] - 6 * v[2], 0);
  const IntVector d = smith_diagonal(k);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0], 1);
  EXPECT_EQ(d[1], 1);
}

TEST(Exact, SmithDiagonal) {
  const IntVector d = smith_diagonal(mat({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}));
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[0], 2);
  EXPECT_EQ(d[1], 6);
  EXPECT_EQ(d[2], 12);
}

// Determinant of a random integer matrix equals the HNF index (up to sign).
TEST(Exact, HermiteIndexMatchesDeterminant) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dist(-9, 9);
  for (int trial = 0; trial < 50; ++trial) {
    IntMatrix m(4, IntVector(4));
    RationalMatrix r(4, RationalVector(4));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        m[i][j] = dist(rng);
        r[i][j] = m[i][j];
      }
    const Rational det = rational_det(r);
    const auto idx = lattice_index(m, 4);
    if (is_zero(det)) {
      EXPECT_FALSE(idx.has_value());
    } else {
      ASSERT_TRUE(idx.has_value());
      EXPECT_EQ(Rational(*idx), abs(det));
    }
  }
}

TEST(Exact, RationalSolve) {
  const RationalMatrix m = {{Rational(2), Rational(1)}, {Rational(1), Rational(3)}};
  const RationalVector x = rational_solve(m, {Rational(3), Rational(5)});
  EXPECT_EQ(x[0], Rational(4, 5));
  EXPECT_EQ(x[1], Rational(7, 5));
  EXPECT_THROW(rational_solve({{Rational(1), Rational(2)}, {Rational(2), Rational(4)}}, {Rational(1), Rational(1)}), MathError);
}

}  // namespace
}  // namespace sh
