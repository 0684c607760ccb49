#pragma once

// Heights of K-defined subspaces: the ideal-norm formula and the lattice
// covolume formula.

#include <cmath>
#include <cstddef>
#include <vector>

#include "sh/exact.hpp"
#include "sh/exterior.hpp"
#include "sh/lattice.hpp"
#include "sh/numberfield.hpp"
#include "sh/subspace.hpp"

namespace sh {

struct HeightParts {
  Rational ideal_norm;      // N(a), a = ideal of the Plucker coordinates
  long double archimedean;  // prod_j |sigma_j(X_1 ^ ... ^ X_d)|
  double value;             // archimedean / N(a)
};

/// |sigma_j(w)| for an exact multivector w.
inline long double embedded_norm(const ExactMultiVector& w, std::size_t j) {
  long double acc = 0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += std::norm(embed_ld(w[i], j));
  return std::sqrt(acc);
}

inline HeightParts height_parts(const SubspaceOverK& s) {
  const ExactMultiVector& w = s.plucker_coords();
  HeightParts out;
  out.ideal_norm = ideal_norm(w.coords());
  out.archimedean = 1;
  for (std::size_t j = 0; j < s.field()->degree(); ++j) out.archimedean *= embedded_norm(w, j);
  out.value = static_cast<double>(out.archimedean / (static_cast<long double>(out.ideal_norm.get_num().get_d()) /
                                                     static_cast<long double>(out.ideal_norm.get_den().get_d())));
  return out;
}

/// H(S) = N(a)^{-1} prod_j |X_1^{(j)} ^ ... ^ X_d^{(j)}|.
inline double height_ideal(const SubspaceOverK& s) { return height_parts(s).value; }

/// H(S) = Delta^{-d} d(Lambda(S)).
inline double height_lattice(const SubspaceOverK& s) {
  const EmbeddedLattice l = lll_reduce(lattice_of_subspace(s));
  return det_lattice(l) / std::pow(s.field()->delta(), static_cast<double>(s.dim()));
}

}  // namespace sh
