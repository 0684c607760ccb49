#pragma once

// Reproducible going-down instances: B random with small integral entries,
// A = span(Y + eps N) with Y in B, N orthogonal to B, and eps tuned so the
// FIRST-branch hypothesis holds with margin 1/2.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sh/goingdown.hpp"

namespace sh {

/// Portable integer in [-range, range] (std distributions differ across libraries).
inline long small_int(std::mt19937_64& rng, int range) {
  return static_cast<long>(rng() % static_cast<std::uint64_t>(2 * range + 1)) - range;
}

/// Portable real in [-1, 1).
inline double unit_real(std::mt19937_64& rng) { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; }

inline SubspaceOverK random_integral_subspace(const FieldPtr& k, std::size_t n, std::size_t d, std::mt19937_64& rng,
                                              int range = 3) {
  for (;;) {
    KMatrix rows;
    for (std::size_t i = 0; i < d; ++i) {
      KVector v;
      for (std::size_t j = 0; j < n; ++j) {
        RationalVector c;
        for (std::size_t t = 0; t < k->degree(); ++t) c.emplace_back(small_int(rng, range));
        v.push_back(k->element(std::move(c)));
      }
      rows.push_back(std::move(v));
    }
    if (rank_over_k(rows) == d) return SubspaceOverK(k, std::move(rows));
  }
}

/// Basis [I_e | M] with entries of M in {-1, 0, 1} (real and imaginary parts): small height.
inline SubspaceOverK low_height_subspace(const FieldPtr& k, std::size_t n, std::size_t e, std::mt19937_64& rng) {
  KMatrix rows;
  for (std::size_t i = 0; i < e; ++i) {
    KVector v(n, k->zero());
    v[i] = k->one();
    for (std::size_t j = e; j < n; ++j) {
      RationalVector c;
      for (std::size_t t = 0; t < k->degree(); ++t) c.emplace_back(small_int(rng, 1));
      v[j] = k->element(std::move(c));
    }
    rows.push_back(std::move(v));
  }
  return SubspaceOverK(k, std::move(rows));
}

struct InstanceSpec {
  std::string field = "Q(i)";
  std::size_t n = 4;
  std::size_t e = 3;
  double height = 100;  // H
  std::uint64_t seed = 1;
  double margin = 0.5;
};

/// y_1 used by the instance family: 1 over complex fields, 3/2 over real ones.
inline double family_y(int q) { return q == 2 ? 1.0 : 1.5; }

/// FIRST-branch instance with d = h = 1. B depends only on (field, n, e, seed), so
/// sweeping H keeps B fixed and only moves A towards it.
inline GoingDownInput make_instance(const InstanceSpec& spec) {
  const FieldPtr k = builtin_field(spec.field);
  std::mt19937_64 rng(spec.seed);
  SubspaceOverK b = low_height_subspace(k, spec.n, spec.e, rng);
  const int q = k->q();
  const double y = family_y(q);
  const double hb = height_ideal(b);
  const double hh = std::max(spec.height, hb);

  // Y generic in sigma_1(B): a Y defined over K makes the bodies degenerate
  CVector yv = CVector::Zero(static_cast<Eigen::Index>(spec.n));
  const auto emb = b.embedded_basis(0);
  for (const auto& v : emb) {
    const std::complex<double> t(unit_real(rng), q == 2 ? unit_real(rng) : 0.0);
    yv += t * v;
  }
  yv.normalize();
  CVector nv = CVector::Zero(static_cast<Eigen::Index>(spec.n));
  if (spec.e < spec.n) {
    const SubspaceOverK z = hermitian_complement(b);
    nv = embed(z.basis()[rng() % z.dim()], 0).normalized();
  }
  const double eps = std::pow(spec.margin * std::pow(hh, -(q * y - 1)) / hb, 1.0 / q);

  GoingDownInput in;
  in.a = NumericSubspace::from_vectors({CVector(yv + eps * nv)});
  in.b = std::move(b);
  in.y = {y};
  in.height_bound = hh;
  in.c = 1;
  in.branch = Branch::kFirst;
  return in;
}

/// u = Y + eps N near the K-subspace B (dim e of K^{n_amb}), with H(B) w^q(u, B) about
/// margin * qtop^{-(q y_1 - 1)}: B then witnesses level y_1 for every Q <= qtop.
struct NearTarget {
  CVector u;
  std::optional<SubspaceOverK> b;
};

inline NearTarget near_subspace_target(const std::string& field, std::size_t n_amb, std::size_t e, double y1,
                                       double qtop, std::uint64_t seed, double margin = 0.5) {
  const FieldPtr k = builtin_field(field);
  std::mt19937_64 rng(seed);
  SubspaceOverK b = low_height_subspace(k, n_amb, e, rng);
  const int q = k->q();
  CVector yv = CVector::Zero(static_cast<Eigen::Index>(n_amb));
  for (const auto& v : b.embedded_basis(0)) yv += std::complex<double>(unit_real(rng), q == 2 ? unit_real(rng) : 0.0) * v;
  yv.normalize();
  const SubspaceOverK z = hermitian_complement(b);
  const CVector nv = embed(z.basis()[rng() % z.dim()], 0).normalized();
  const double eps = std::pow(margin * std::pow(qtop, -(q * y1 - 1)) / height_ideal(b), 1.0 / q);
  return {CVector(yv + eps * nv), std::move(b)};
}

}  // namespace sh
