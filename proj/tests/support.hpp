#pragma once

#include <random>
#include <string>
#include <vector>

#include "sh/subspace.hpp"

namespace sh::testing {

inline FieldElement random_element(const FieldPtr& k, std::mt19937_64& rng, int range = 3) {
  std::uniform_int_distribution<int> d(-range, range);
  RationalVector c;
  for (std::size_t i = 0; i < k->degree(); ++i) c.emplace_back(d(rng));
  return k->element(std::move(c));
}

inline KVector random_kvector(const FieldPtr& k, std::size_t n, std::mt19937_64& rng, int range = 3) {
  KVector v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(random_element(k, rng, range));
  return v;
}

/// Random d-dimensional subspace with small integral basis entries.
inline SubspaceOverK random_subspace(const FieldPtr& k, std::size_t n, std::size_t d, std::mt19937_64& rng,
                                     int range = 3) {
  for (;;) {
    KMatrix rows;
    for (std::size_t i = 0; i < d; ++i) rows.push_back(random_kvector(k, n, rng, range));
    if (rank_over_k(rows) == d) return SubspaceOverK(k, std::move(rows));
  }
}

inline KVector kvec(const FieldPtr& k, const std::vector<std::vector<long>>& entries) {
  KVector v;
  for (const auto& e : entries) {
    RationalVector c;
    for (long x : e) c.emplace_back(x);
    c.resize(k->degree(), Rational(0));
    v.push_back(k->element(std::move(c)));
  }
  return v;
}

}  // namespace sh::testing
