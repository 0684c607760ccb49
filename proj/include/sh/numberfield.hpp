#pragma once

// Number fields given by a monic minimal polynomial, with exact element
// arithmetic in the power basis, ordered complex embeddings and ideal norms.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sh/errors.hpp"
#include "sh/exact.hpp"

namespace sh {

class NumberField;
class FieldElement;
using FieldPtr = std::shared_ptr<const NumberField>;

/// How embedding index i contributes to the real coordinates x^{[i]}.
enum class EmbeddingKind {
  kReal,        // x^{[i]} = x^{(i)}
  kPairFirst,   // x^{[i]} = Re x^{(i)}; index i+1 holds the conjugate embedding
  kPairSecond,  // x^{[i]} = Im x^{(i)}
};

class NumberField : public std::enable_shared_from_this<NumberField> {
 public:
  /// `min_poly` holds c_0..c_{p-1}, 1 (monic, low degree first); columns of
  /// `integral_basis` are the integral basis in the power basis of theta.
  /// `hint` selects the distinguished root sigma_1(theta) (nearest root wins);
  /// without it the root of largest imaginary part (then largest real part) is used.
  static FieldPtr create(RationalVector min_poly, RationalMatrix integral_basis, Integer disc,
                         std::optional<std::complex<double>> hint = std::nullopt,
                         std::string name = {}) {
    FieldPtr k(new NumberField(min_poly, integral_basis, disc, hint, name));
    if (k->q() == 2) {
      // K' is built once and linked both ways (weakly back, to avoid a cycle)
      std::shared_ptr<NumberField> kc(new NumberField(std::move(min_poly), std::move(integral_basis), std::move(disc),
                                                      std::conj(k->root(0)), name.empty() ? name : name + "'"));
      kc->conj_back_ = k;
      std::const_pointer_cast<NumberField>(k)->conj_ = std::move(kc);
    }
    return k;
  }

  std::size_t degree() const { return p_; }
  const RationalVector& min_poly() const { return min_poly_; }
  const RationalMatrix& integral_basis() const { return integral_basis_; }
  const Integer& disc() const { return disc_; }
  std::size_t r1() const { return r1_; }
  std::size_t r2() const { return r2_; }
  const std::string& name() const { return name_; }
  const std::vector<std::complex<long double>>& roots() const { return roots_; }
  std::complex<double> root(std::size_t i) const {
    return {static_cast<double>(roots_.at(i).real()), static_cast<double>(roots_.at(i).imag())};
  }
  EmbeddingKind kind(std::size_t i) const { return kinds_.at(i); }

  /// Delta = 2^{-r2} |disc|^{1/2}.
  double delta() const {
    return std::ldexp(std::sqrt(std::fabs(disc_.get_d())), -static_cast<int>(r2_));
  }
  /// 1 when the distinguished embedding is real, 2 otherwise.
  int q() const { return kinds_[0] == EmbeddingKind::kReal ? 1 : 2; }

  /// Same polynomial, same distinguished root.
  bool same_as(const NumberField& o) const {
    if (this == &o) return true;
    return min_poly_ == o.min_poly_ && std::abs(roots_[0] - o.roots_[0]) < 1e-12L;
  }

  FieldElement element(RationalVector coeffs) const;
  FieldElement from_rational(const Rational& r) const;
  FieldElement zero() const;
  FieldElement one() const;
  FieldElement theta() const;
  /// b-th integral basis element.
  FieldElement basis_element(std::size_t b) const;

  /// Coordinates of a power-basis vector in the integral basis.
  RationalVector to_integral_coords(const RationalVector& power) const {
    RationalVector out(p_, Rational(0));
    for (std::size_t i = 0; i < p_; ++i)
      for (std::size_t j = 0; j < p_; ++j) out[i] += inverse_basis_[i][j] * power[j];
    return out;
  }

  /// Complex conjugate field K': same polynomial, distinguished root conjugated.
  /// Returns this field itself when the distinguished root is real.
  FieldPtr conjugate() const {
    if (q() == 1) return shared_from_this();
    if (conj_) return conj_;
    if (auto back = conj_back_.lock()) return back;
    return create(min_poly_, integral_basis_, disc_, std::conj(root(0)),
                  name_.empty() ? std::string{} : name_ + "'");
  }

 private:
  NumberField(RationalVector min_poly, RationalMatrix integral_basis, Integer disc,
              std::optional<std::complex<double>> hint, std::string name)
      : min_poly_(std::move(min_poly)),
        integral_basis_(std::move(integral_basis)),
        disc_(std::move(disc)),
        name_(std::move(name)) {
    if (min_poly_.size() < 2 || min_poly_.back() != 1) throw SpecError("min_poly must be monic of degree >= 1");
    p_ = min_poly_.size() - 1;
    if (integral_basis_.size() != p_) throw SpecError("integral_basis must be p x p");
    for (const auto& row : integral_basis_)
      if (row.size() != p_) throw SpecError("integral_basis must be p x p");
    if (is_zero(rational_det(integral_basis_))) throw SpecError("integral_basis is singular");
    // inverse of the basis matrix, column by column
    inverse_basis_.assign(p_, RationalVector(p_));
    for (std::size_t j = 0; j < p_; ++j) {
      RationalVector e(p_, Rational(0));
      e[j] = 1;
      const RationalVector col = rational_solve(integral_basis_, e);
      for (std::size_t i = 0; i < p_; ++i) inverse_basis_[i][j] = col[i];
    }
    compute_roots(hint);
    check_discriminant();
  }

  std::complex<long double> eval_poly(std::complex<long double> z) const {
    std::complex<long double> acc = 0;
    for (std::size_t k = min_poly_.size(); k-- > 0;) acc = acc * z + static_cast<long double>(min_poly_[k].get_d());
    return acc;
  }
  std::complex<long double> eval_deriv(std::complex<long double> z) const {
    std::complex<long double> acc = 0;
    for (std::size_t k = min_poly_.size(); k-- > 1;)
      acc = acc * z + static_cast<long double>(k) * static_cast<long double>(min_poly_[k].get_d());
    return acc;
  }

  void compute_roots(std::optional<std::complex<double>> hint) {
    std::vector<std::complex<long double>> raw;
    if (p_ == 1) {
      raw.push_back(-static_cast<long double>(min_poly_[0].get_d()));
    } else {
      Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p_), static_cast<Eigen::Index>(p_));
      for (std::size_t i = 1; i < p_; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
      for (std::size_t i = 0; i < p_; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p_ - 1)) = -min_poly_[i].get_d();
      Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const auto ev = es.eigenvalues()(i);
        raw.emplace_back(ev.real(), ev.imag());
      }
      for (auto& z : raw) {
        for (int it = 0; it < 60; ++it) {
          const auto d = eval_deriv(z);
          if (std::abs(d) == 0.0L) break;
          const auto step = eval_poly(z) / d;
          z -= step;
          if (std::abs(step) < 1e-30L * std::max(1.0L, std::abs(z))) break;
        }
      }
    }
    std::vector<long double> reals;
    std::vector<std::complex<long double>> upper;  // roots with Im > 0
    for (const auto& z : raw) {
      const long double scale = std::max(1.0L, std::abs(z));
      if (std::fabs(z.imag()) < 1e-9L * scale) {
        reals.push_back(z.real());
      } else if (z.imag() > 0) {
        upper.push_back(z);
      }
    }
    r1_ = reals.size();
    r2_ = upper.size();
    if (r1_ + 2 * r2_ != p_) throw SpecError("min_poly roots could not be paired into conjugates");
    std::sort(reals.begin(), reals.end(), std::greater<>());
    std::sort(upper.begin(), upper.end(), [](const auto& a, const auto& b) {
      return a.imag() != b.imag() ? a.imag() > b.imag() : a.real() > b.real();
    });
    // distinguished root: nearest to the hint, else first in the canonical order
    std::complex<long double> chosen = upper.empty() ? std::complex<long double>(reals.front(), 0) : upper.front();
    if (hint) {
      const std::complex<long double> h(hint->real(), hint->imag());
      long double best = -1;
      for (const auto& z : raw) {
        const long double dist = std::abs(z - h);
        if (best < 0 || dist < best) {
          best = dist;
          chosen = z;
        }
      }
    }
    const long double cscale = std::max(1.0L, std::abs(chosen));
    const bool chosen_real = std::fabs(chosen.imag()) < 1e-9L * cscale;
    auto push_pair = [this](std::complex<long double> z) {
      roots_.push_back(z);
      kinds_.push_back(EmbeddingKind::kPairFirst);
      roots_.push_back(std::conj(z));
      kinds_.push_back(EmbeddingKind::kPairSecond);
    };
    if (chosen_real) {
      // real distinguished embedding first, then the other real ones, then pairs
      const long double cr = chosen.real();
      std::size_t idx = 0;
      for (std::size_t i = 1; i < reals.size(); ++i)
        if (std::fabs(reals[i] - cr) < std::fabs(reals[idx] - cr)) idx = i;
      roots_.emplace_back(reals[idx], 0);
      kinds_.push_back(EmbeddingKind::kReal);
      for (std::size_t i = 0; i < reals.size(); ++i) {
        if (i == idx) continue;
        roots_.emplace_back(reals[i], 0);
        kinds_.push_back(EmbeddingKind::kReal);
      }
      for (const auto& z : upper) push_pair(z);
    } else {
      push_pair(chosen);
      for (const auto& z : upper) {
        const auto zz = chosen.imag() > 0 ? chosen : std::conj(chosen);
        if (std::abs(z - zz) < 1e-9L * cscale) continue;
        push_pair(z);
      }
      for (long double r : reals) {
        roots_.emplace_back(r, 0);
        kinds_.push_back(EmbeddingKind::kReal);
      }
    }
  }

  void check_discriminant() const {
    // |det(sigma_j(omega_b))|^2 == |disc|
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(p_), static_cast<Eigen::Index>(p_));
    for (std::size_t j = 0; j < p_; ++j) {
      for (std::size_t b = 0; b < p_; ++b) {
        std::complex<long double> acc = 0;
        for (std::size_t k = p_; k-- > 0;) acc = acc * roots_[j] + static_cast<long double>(integral_basis_[k][b].get_d());
        m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b)) = std::complex<double>(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
      }
    }
    const double d2 = std::norm(m.determinant());
    const double target = std::fabs(disc_.get_d());
    if (std::fabs(d2 - target) > 1e-8 * std::max(1.0, target)) {
      throw SpecError("discriminant " + disc_.get_str() + " does not match the integral basis (|det|^2 = " +
                      std::to_string(d2) + ")");
    }
  }

  RationalVector min_poly_;
  RationalMatrix integral_basis_;
  RationalMatrix inverse_basis_;
  Integer disc_;
  std::string name_;
  std::size_t p_ = 0;
  std::size_t r1_ = 0;
  std::size_t r2_ = 0;
  std::vector<std::complex<long double>> roots_;
  std::vector<EmbeddingKind> kinds_;
  FieldPtr conj_;                              // set on fields with q = 2 built by create()
  std::weak_ptr<const NumberField> conj_back_;  // set on that K'
};

/// Element of K as exact rational coordinates in the power basis of theta.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldPtr field, RationalVector coeffs) : field_(std::move(field)), c_(std::move(coeffs)) {
    if (!field_) throw MathError("field element without a field");
    if (c_.size() != field_->degree()) throw MathError("coefficient vector has wrong length");
  }

  const FieldPtr& field() const { return field_; }
  const RationalVector& coeffs() const { return c_; }
  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return sgn(x) == 0; });
  }
  bool is_rational() const {
    return std::all_of(c_.begin() + 1, c_.end(), [](const Rational& x) { return sgn(x) == 0; });
  }

  /// Same coefficients, read in another field with the same polynomial.
  FieldElement transported(const FieldPtr& target) const {
    if (target->min_poly() != field_->min_poly()) throw MathError("transport between unrelated fields");
    return FieldElement(target, c_);
  }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    RationalVector c(a.c_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.c_[i] + b.c_[i];
    return FieldElement(a.field_, std::move(c));
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    RationalVector c(a.c_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.c_[i] - b.c_[i];
    return FieldElement(a.field_, std::move(c));
  }
  FieldElement operator-() const {
    RationalVector c(c_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = -c_[i];
    return FieldElement(field_, std::move(c));
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    const std::size_t p = a.c_.size();
    RationalVector prod(2 * p - 1, Rational(0));
    for (std::size_t i = 0; i < p; ++i) {
      if (sgn(a.c_[i]) == 0) continue;
      for (std::size_t j = 0; j < p; ++j) prod[i + j] += a.c_[i] * b.c_[j];
    }
    const RationalVector& f = a.field_->min_poly();
    for (std::size_t k = prod.size(); k-- > p;) {
      if (sgn(prod[k]) == 0) continue;
      const Rational lead = prod[k];
      for (std::size_t j = 0; j < p; ++j) prod[k - p + j] -= lead * f[j];
      prod[k] = 0;
    }
    prod.resize(p);
    return FieldElement(a.field_, std::move(prod));
  }
  friend FieldElement operator*(const Rational& r, const FieldElement& a) {
    RationalVector c(a.c_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = r * a.c_[i];
    return FieldElement(a.field_, std::move(c));
  }
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_->same_as(*b.field_) && a.c_ == b.c_;
  }

  /// Matrix of x -> this * x in the power basis (column k = this * theta^k).
  RationalMatrix multiplication_matrix() const {
    const std::size_t p = c_.size();
    RationalMatrix m(p, RationalVector(p));
    FieldElement col = *this;
    const FieldElement th = field_->theta();
    for (std::size_t k = 0; k < p; ++k) {
      for (std::size_t i = 0; i < p; ++i) m[i][k] = col.c_[i];
      if (k + 1 < p) col = col * th;
    }
    return m;
  }

  FieldElement inverse() const {
    if (is_zero()) throw MathError("division by zero in number field");
    RationalVector e(c_.size(), Rational(0));
    e[0] = 1;
    return FieldElement(field_, rational_solve(multiplication_matrix(), e));
  }

  /// Canonical text form, used as an exact hash key.
  std::string key() const {
    std::string s;
    for (const Rational& x : c_) {
      s += x.get_str();
      s += ',';
    }
    return s;
  }

 private:
  static void check_same(const FieldElement& a, const FieldElement& b) {
    if (a.field_ != b.field_ && !a.field_->same_as(*b.field_)) throw MathError("mixing elements of different fields");
  }

  FieldPtr field_;
  RationalVector c_;
};

inline bool is_zero(const FieldElement& x) { return x.is_zero(); }
inline FieldElement inverse(const FieldElement& x) { return x.inverse(); }

inline FieldElement NumberField::element(RationalVector coeffs) const {
  return FieldElement(shared_from_this(), std::move(coeffs));
}
inline FieldElement NumberField::from_rational(const Rational& r) const {
  RationalVector c(p_, Rational(0));
  c[0] = r;
  return element(std::move(c));
}
inline FieldElement NumberField::zero() const { return from_rational(0); }
inline FieldElement NumberField::one() const { return from_rational(1); }
inline FieldElement NumberField::theta() const {
  RationalVector c(p_, Rational(0));
  if (p_ == 1) {
    c[0] = -min_poly_[0];
  } else {
    c[1] = 1;
  }
  return element(std::move(c));
}
inline FieldElement NumberField::basis_element(std::size_t b) const {
  RationalVector c(p_);
  for (std::size_t i = 0; i < p_; ++i) c[i] = integral_basis_[i].at(b);
  return element(std::move(c));
}

/// sigma_i(x) for the 0-based embedding index i (0 is the distinguished one).
inline std::complex<double> embed(const FieldElement& x, std::size_t i) {
  const NumberField& k = *x.field();
  if (i >= k.degree()) throw MathError("embedding index out of range");
  const std::complex<long double> z = k.roots()[i];
  std::complex<long double> acc = 0;
  const auto& c = x.coeffs();
  for (std::size_t j = c.size(); j-- > 0;) acc = acc * z + static_cast<long double>(c[j].get_d());
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

/// sigma_i(x) evaluated in extended precision.
inline std::complex<long double> embed_ld(const FieldElement& x, std::size_t i) {
  const NumberField& k = *x.field();
  if (i >= k.degree()) throw MathError("embedding index out of range");
  const std::complex<long double> z = k.roots()[i];
  std::complex<long double> acc = 0;
  const auto& c = x.coeffs();
  for (std::size_t j = c.size(); j-- > 0;) {
    const long double cj = static_cast<long double>(c[j].get_num().get_d()) / static_cast<long double>(c[j].get_den().get_d());
    acc = acc * z + cj;
  }
  return acc;
}

/// real_coords in extended precision.
inline std::vector<long double> real_coords_ld(const FieldElement& x) {
  const NumberField& k = *x.field();
  std::vector<long double> out(k.degree());
  for (std::size_t i = 0; i < k.degree(); ++i) {
    const std::complex<long double> z = embed_ld(x, i);
    out[i] = k.kind(i) == EmbeddingKind::kPairSecond ? z.imag() : z.real();
  }
  return out;
}

/// (x^{[1]}, ..., x^{[p]}): Re / Im of conjugate pairs, real embeddings as is.
inline std::vector<double> real_coords(const FieldElement& x) {
  const NumberField& k = *x.field();
  std::vector<double> out(k.degree());
  for (std::size_t i = 0; i < k.degree(); ++i) {
    const std::complex<double> z = embed(x, i);
    switch (k.kind(i)) {
      case EmbeddingKind::kReal: out[i] = z.real(); break;
      case EmbeddingKind::kPairFirst: out[i] = z.real(); break;
      case EmbeddingKind::kPairSecond: out[i] = z.imag(); break;
    }
  }
  return out;
}

/// N_{K/Q}(x), exactly (determinant of the multiplication map, which equals
/// the resultant of the minimal polynomial and the coordinate polynomial).
inline Rational norm_elem(const FieldElement& x) { return rational_det(x.multiplication_matrix()); }

/// Norm of the fractional ideal generated by `gens`, via an exact HNF index.
inline Rational ideal_norm(const std::vector<FieldElement>& gens) {
  if (gens.empty()) throw MathError("ideal_norm needs at least one generator");
  const FieldPtr& k = gens.front().field();
  const std::size_t p = k->degree();
  std::vector<FieldElement> products;
  for (const FieldElement& g : gens) {
    if (g.is_zero()) continue;
    for (std::size_t b = 0; b < p; ++b) products.push_back(g * k->basis_element(b));
  }
  if (products.empty()) throw MathError("ideal generated by zero elements");
  std::vector<RationalVector> coords;
  Integer denom = 1;
  for (const FieldElement& x : products) {
    coords.push_back(k->to_integral_coords(x.coeffs()));
    const Integer l = lcm_of_denominators(coords.back());
    mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), l.get_mpz_t());
  }
  IntMatrix rows;
  for (const auto& c : coords) {
    IntVector row(p);
    for (std::size_t i = 0; i < p; ++i) {
      const Rational scaled = c[i] * denom;
      row[i] = scaled.get_num();
    }
    rows.push_back(std::move(row));
  }
  const auto index = lattice_index(rows, p);
  if (!index) throw MathError("ideal module is not of full rank");
  Integer dp = 1;
  for (std::size_t i = 0; i < p; ++i) dp *= denom;
  Rational n(*index, dp);
  n.canonicalize();
  return n;
}

/// K' together with the coefficient-preserving map K -> K'.
struct ConjugateField {
  FieldPtr field;
  FieldElement map(const FieldElement& x) const { return x.transported(field); }
};

inline ConjugateField conjugate_field(const FieldPtr& k) { return ConjugateField{k->conjugate()}; }

namespace detail {
inline RationalVector ints(std::initializer_list<long> v) {
  RationalVector out;
  for (long x : v) out.emplace_back(x);
  return out;
}
inline RationalMatrix identity(std::size_t p) {
  RationalMatrix m(p, RationalVector(p, Rational(0)));
  for (std::size_t i = 0; i < p; ++i) m[i][i] = 1;
  return m;
}
}  // namespace detail

/// Names accepted by builtin_field.
inline std::vector<std::string> builtin_field_names() {
  return {"Q", "Q(i)", "Q(sqrt-2)", "Q(zeta3)", "Q(sqrt2)", "Q(sqrt5)", "Q(zeta5)"};
}

/// Registry of the built-in fields. All use Z[theta] as the ring of integers.
inline FieldPtr builtin_field(const std::string& name) {
  using detail::identity;
  using detail::ints;
  if (name == "Q") return NumberField::create(ints({0, 1}), identity(1), Integer(1), std::nullopt, "Q");
  if (name == "Q(i)") return NumberField::create(ints({1, 0, 1}), identity(2), Integer(-4), std::complex<double>(0, 1), "Q(i)");
  if (name == "Q(sqrt-2)")
    return NumberField::create(ints({2, 0, 1}), identity(2), Integer(-8), std::complex<double>(0, std::sqrt(2.0)), "Q(sqrt-2)");
  if (name == "Q(zeta3)")
    return NumberField::create(ints({1, 1, 1}), identity(2), Integer(-3), std::complex<double>(-0.5, std::sqrt(3.0) / 2), "Q(zeta3)");
  if (name == "Q(sqrt2)") return NumberField::create(ints({-2, 0, 1}), identity(2), Integer(8), std::complex<double>(std::sqrt(2.0), 0), "Q(sqrt2)");
  // theta = golden ratio, Z[theta] is the maximal order of Q(sqrt5)
  if (name == "Q(sqrt5)")
    return NumberField::create(ints({-1, -1, 1}), identity(2), Integer(5), std::complex<double>((1 + std::sqrt(5.0)) / 2, 0), "Q(sqrt5)");
  if (name == "Q(zeta5)")
    return NumberField::create(ints({1, 1, 1, 1, 1}), identity(4), Integer(125),
                               std::complex<double>(std::cos(2 * M_PI / 5), std::sin(2 * M_PI / 5)), "Q(zeta5)");
  throw SpecError("unknown builtin field '" + name + "'");
}

}  // namespace sh
