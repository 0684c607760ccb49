#pragma once

// JSON/CSV I/O. Numbers are written with 12 significant digits; parse errors
// carry the JSON path of the offending value.

#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sh/exponents.hpp"
#include "sh/goingdown.hpp"

namespace sh::io {

using Json = nlohmann::ordered_json;

/// %.12g, with inf / -inf / nan spelled out.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Like format_number but keeps trailing zeros ("5.00000000000"), for plain-text reports.
inline std::string format_fixed(double x) {
  if (!std::isfinite(x)) return format_number(x);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%#.12g", x);
  return buf;
}

/// JSON number rounded to 12 significant digits; non-finite values become strings.
inline Json number(double x) {
  if (!std::isfinite(x)) return format_number(x);
  return std::strtod(format_number(x).c_str(), nullptr);
}

inline Json numbers(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

// ---------------------------------------------------------------- reading

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError("'" + path + "': " + e.what());
  }
}

/// A JSON value with the path that led to it.
struct Node {
  const Json& j;
  std::string path;

  [[noreturn]] void fail(const std::string& what) const { throw SpecError((path.empty() ? "/" : path) + ": " + what); }

  bool has(const std::string& key) const { return j.is_object() && j.contains(key); }
  Node at(const std::string& key) const {
    if (!j.is_object()) fail("expected an object");
    if (!j.contains(key)) fail("missing key '" + key + "'");
    return {j.at(key), path + "/" + key};
  }
  Node at(std::size_t i) const { return {j.at(i), path + "/" + std::to_string(i)}; }
  std::size_t size() const {
    if (!j.is_array()) fail("expected an array");
    return j.size();
  }
  std::string str() const {
    if (!j.is_string()) fail("expected a string");
    return j.get<std::string>();
  }
  double real() const {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
      const std::string s = j.get<std::string>();
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (!s.empty() && *end == '\0') return v;
    }
    fail("expected a number");
  }
  std::size_t count() const {
    if (!j.is_number_integer() || j.get<long long>() < 0) fail("expected a non-negative integer");
    return j.get<std::size_t>();
  }
  /// "a/b" string or JSON integer.
  Rational rational() const {
    if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()), 10);
    if (!j.is_string()) fail("expected a rational \"num/den\"");
    try {
      return parse_rational(j.get<std::string>());
    } catch (const SpecError& e) {
      fail(e.what());
    }
  }
  /// Real number or [re, im].
  std::complex<double> complex() const {
    if (j.is_array()) {
      if (j.size() != 2) fail("expected [re, im]");
      return {at(0).real(), at(1).real()};
    }
    return real();
  }
};

/// { "builtin": name }, a bare name, or { "min_poly", "integral_basis", "disc" }.
inline FieldPtr parse_field(const Node& nd) {
  try {
    if (nd.j.is_string()) return builtin_field(nd.str());
    if (nd.has("builtin")) return builtin_field(nd.at("builtin").str());
  } catch (const SpecError& e) {
    if (nd.j.is_string()) nd.fail(e.what());
    nd.at("builtin").fail(e.what());
  }
  const Node mp = nd.at("min_poly");
  RationalVector poly;
  for (std::size_t i = 0; i < mp.size(); ++i) poly.push_back(mp.at(i).rational());
  if (poly.size() < 2) mp.fail("polynomial of degree >= 1 expected");
  const std::size_t p = poly.size() - 1;
  RationalMatrix basis;
  if (nd.has("integral_basis")) {
    const Node ib = nd.at("integral_basis");
    if (ib.size() != p) ib.fail("expected " + std::to_string(p) + " rows");
    for (std::size_t i = 0; i < p; ++i) {
      const Node row = ib.at(i);
      if (row.size() != p) row.fail("expected " + std::to_string(p) + " entries");
      RationalVector r;
      for (std::size_t t = 0; t < p; ++t) r.push_back(row.at(t).rational());
      basis.push_back(std::move(r));
    }
  } else {
    basis = detail::identity(p);
  }
  const Rational disc = nd.at("disc").rational();
  if (disc.get_den() != 1) nd.at("disc").fail("discriminant must be an integer");
  std::optional<std::complex<double>> hint;
  if (nd.has("root")) hint = nd.at("root").complex();
  const std::string name = nd.has("name") ? nd.at("name").str() : std::string();
  try {
    return NumberField::create(std::move(poly), std::move(basis), disc.get_num(), hint, name);
  } catch (const Error& e) {
    nd.fail(e.what());
  }
}

/// Power-basis coefficients [c_0, ..., c_{p-1}], or a single rational.
inline FieldElement parse_element(const FieldPtr& k, const Node& nd) {
  if (!nd.j.is_array()) return k->from_rational(nd.rational());
  if (nd.size() != k->degree()) nd.fail("expected " + std::to_string(k->degree()) + " coefficients");
  RationalVector c;
  for (std::size_t i = 0; i < k->degree(); ++i) c.push_back(nd.at(i).rational());
  return k->element(std::move(c));
}

inline KVector parse_kvector(const FieldPtr& k, const Node& nd) {
  KVector v;
  for (std::size_t i = 0; i < nd.size(); ++i) v.push_back(parse_element(k, nd.at(i)));
  return v;
}

/// { "field", "n", "basis": [[entry, ...], ...] }; `k` overrides a missing field.
inline SubspaceOverK parse_subspace(const Node& nd, FieldPtr k = nullptr) {
  if (nd.has("field")) k = parse_field(nd.at("field"));
  if (!k) nd.fail("missing key 'field'");
  const Node b = nd.at("basis");
  KMatrix rows;
  for (std::size_t i = 0; i < b.size(); ++i) rows.push_back(parse_kvector(k, b.at(i)));
  if (rows.empty()) b.fail("empty basis");
  if (nd.has("n") && nd.at("n").count() != rows.front().size()) nd.at("n").fail("does not match the basis length");
  try {
    return SubspaceOverK(k, std::move(rows));
  } catch (const MathError& e) {
    b.fail(e.what());
  }
}

/// Spanning vectors (rows) of a numeric subspace of C^n.
inline std::vector<CVector> parse_vectors(const Node& nd) {
  std::vector<CVector> out;
  for (std::size_t i = 0; i < nd.size(); ++i) {
    const Node row = nd.at(i);
    CVector v(static_cast<Eigen::Index>(row.size()));
    for (std::size_t t = 0; t < row.size(); ++t) v(static_cast<Eigen::Index>(t)) = row.at(t).complex();
    if (!out.empty() && v.size() != out.front().size()) row.fail("rows of different lengths");
    out.push_back(std::move(v));
  }
  if (out.empty()) nd.fail("no vectors");
  return out;
}

inline NumericSubspace parse_numeric_subspace(const Node& nd) {
  try {
    return NumericSubspace::from_vectors(parse_vectors(nd));
  } catch (const MathError& e) {
    nd.fail(e.what());
  }
}

/// Going-down instance: field, A (rows), B (subspace spec), y (or h), H, c, branch, H'.
inline GoingDownInput parse_goingdown(const Node& nd) {
  GoingDownInput in;
  const FieldPtr k = parse_field(nd.at("field"));
  in.a = parse_numeric_subspace(nd.at("A"));
  in.b = parse_subspace(nd.at("B"), k);
  const std::string branch = nd.has("branch") ? nd.at("branch").str() : "first";
  if (branch == "first") {
    in.branch = Branch::kFirst;
  } else if (branch == "second") {
    in.branch = Branch::kSecond;
  } else {
    nd.at("branch").fail("expected \"first\" or \"second\"");
  }
  if (nd.has("y")) {
    const Node y = nd.at("y");
    for (std::size_t i = 0; i < y.size(); ++i) in.y.push_back(y.at(i).real());
  }
  if (nd.has("h")) {
    const std::size_t h = nd.at("h").count();
    if (in.y.empty()) in.y.assign(h, 0.0);
    if (in.y.size() != h) nd.at("h").fail("does not match the length of y");
  }
  if (in.y.empty()) nd.fail("missing key 'y' (or 'h')");
  in.height_bound = nd.at("H").real();
  if (nd.has("c")) in.c = nd.at("c").real();
  if (nd.has("H_prime")) in.target_height = nd.at("H_prime").real();
  if (nd.has("c0")) in.c0 = nd.at("c0").real();
  if (nd.has("max_doublings")) in.max_doublings = static_cast<int>(nd.at("max_doublings").count());
  return in;
}

// ---------------------------------------------------------------- writing

inline Json to_json(const Rational& r) { return to_string(r); }

inline Json to_json(const FieldElement& x) {
  Json a = Json::array();
  for (const auto& c : x.coeffs()) a.push_back(to_string(c));
  return a;
}

inline Json to_json(const KVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline Json to_json(const KMatrix& m) {
  Json a = Json::array();
  for (const auto& v : m) a.push_back(to_json(v));
  return a;
}

inline Json complex_json(std::complex<double> z) { return Json::array({number(z.real()), number(z.imag())}); }

inline Json field_json(const FieldPtr& k) {
  Json j;
  j["name"] = k->name();
  j["degree"] = k->degree();
  j["r1"] = k->r1();
  j["r2"] = k->r2();
  j["q"] = k->q();
  Json mp = Json::array();
  for (const auto& c : k->min_poly()) mp.push_back(to_string(c));
  j["min_poly"] = mp;
  Json ib = Json::array();
  for (const auto& row : k->integral_basis()) {
    Json r = Json::array();
    for (const auto& c : row) r.push_back(to_string(c));
    ib.push_back(r);
  }
  j["integral_basis"] = ib;
  j["disc"] = k->disc().get_str();
  j["Delta"] = number(k->delta());
  Json roots = Json::array();
  for (std::size_t i = 0; i < k->degree(); ++i) roots.push_back(complex_json(k->root(i)));
  j["embeddings"] = roots;
  return j;
}

inline Json certificate_json(const GoingDownCertificate& c) {
  Json j;
  j["branch"] = c.branch == Branch::kFirst ? "first" : "second";
  j["q"] = c.q;
  j["n"] = c.n;
  j["d"] = c.d;
  j["e"] = c.e;
  j["m"] = c.m;
  j["p"] = c.p;
  j["h"] = c.h;
  j["W"] = to_json(c.w);
  Json wc = Json::array();
  for (const auto& z : c.w_coords) wc.push_back(z.get_str());
  j["W_coords"] = wc;
  if (c.bm1) j["B_minus_1"] = to_json(c.bm1->basis());
  Json h;
  h["B"] = number(c.height_b);
  h["B_lattice"] = number(c.height_b_lattice);
  h["B_minus_1"] = number(c.height_bm1);
  h["B_minus_1_lattice"] = number(c.height_bm1_lattice);
  h["target"] = number(c.target_height);
  h["product"] = number(c.height_product);
  j["heights"] = h;
  j["ideal_norms"] = {{"Z", to_json(c.norm_a)}, {"W_Z", to_json(c.norm_b)}};
  j["omega_A_B"] = numbers(c.omega_a_b);
  j["omega_A_B_minus_1"] = numbers(c.omega_a_bm1);
  Json body;
  body["frame_bounds"] = numbers(c.frame_bounds);
  body["residual_scale"] = number(c.residual_scale);
  body["C"] = number(c.c_used);
  body["doublings"] = c.doublings;
  body["candidates"] = c.candidates;
  body["minkowski_C"] = number(c.minkowski_c);
  j["body"] = body;
  j["Y_W"] = numbers(c.psc_y_w);
  j["Y_W_bound"] = numbers(c.psc_bound);
  j["V_norms"] = numbers(c.v_norms);
  j["V_scale"] = number(c.v_scale);
  j["factorization_defect"] = number(c.factorization_defect);
  if (c.branch == Branch::kSecond) j["schedule"] = {{"H1", number(c.h1)}, {"C9", number(c.c9)}, {"retries", c.retries}};
  Json k;
  k["y_prime"] = numbers(c.y_prime);
  if (c.branch == Branch::kFirst) {
    k["C5"] = number(c.ratio_c5);
    k["C7"] = numbers(c.ratio_c7);
  } else {
    k["C10"] = numbers(c.ratio_c10);
  }
  k["V"] = number(c.ratio_v);
  j["constants"] = k;
  Json inv;
  inv["hypothesis"] = c.hypothesis_ok;
  inv["contained"] = c.contained;
  inv["dimension"] = c.dimension_ok;
  inv["defined_over_K"] = c.defined_over_k;
  inv["W_independent"] = c.w_independent;
  inv["body_recheck"] = c.body_recheck_ok;
  inv["Y_W_bound"] = c.psc_ok;
  inv["ideal_norms"] = c.ideal_norms_ok;
  inv["factorization"] = c.factorization_ok;
  inv["height_product"] = c.height_product_ok;
  inv["heights_agree"] = c.heights_agree;
  inv["below_target"] = c.below_target;
  inv["all"] = c.all_ok();
  j["invariants"] = inv;
  j["warnings"] = c.warnings;
  return j;
}

/// Instance file readable by parse_goingdown. A keeps full double precision.
inline Json instance_json(const GoingDownInput& in) {
  if (!in.b) throw SpecError("instance without B");
  const FieldPtr& k = in.b->field();
  Json j;
  j["field"] = k->name().empty() ? field_json(k) : Json(k->name());
  Json a = Json::array();
  for (std::size_t i = 0; i < in.a.dim(); ++i) {
    Json row = Json::array();
    const CVector v = in.a.vector(i);
    for (const auto& z : v) row.push_back(Json::array({z.real(), z.imag()}));
    a.push_back(row);
  }
  j["A"] = a;
  j["B"] = {{"n", in.b->ambient()}, {"basis", to_json(in.b->basis())}};
  j["branch"] = in.branch == Branch::kFirst ? "first" : "second";
  j["h"] = in.y.size();
  j["y"] = in.y;
  j["H"] = in.height_bound;
  j["c"] = in.c;
  if (in.branch == Branch::kSecond) j["H_prime"] = in.target_height;
  return j;
}

/// CSV with columns H, H*omega^q, plucker (normalized exact coordinates).
inline std::string curve_csv(const RecordCurve& c) {
  std::ostringstream out;
  out << "H,H*omega^q,plucker\n";
  for (const auto& r : c.records) {
    out << format_number(r.height) << ',' << format_number(r.value) << ",\"" << r.key << "\"\n";
  }
  return out.str();
}

inline Json estimate_json(const RecordCurve& c, const ExponentEstimate& e) {
  Json j;
  j["j"] = c.j;
  j["n"] = c.ambient - 1;
  j["q"] = c.q;
  j["qmax"] = number(c.qmax);
  j["method"] = c.method;
  j["complete"] = c.complete;
  if (c.method == "generic") j["coverage_radius"] = number(c.coverage_radius);
  j["visited"] = c.visited;
  j["precision_floor"] = c.precision_floor;
  j["exact_zero"] = c.exact_zero;
  j["records"] = c.records.size();
  j["omega"] = number(e.omega);
  j["omega_hat"] = number(e.omega_hat);
  j["omega_prev"] = number(e.omega_prev);
  j["omega_hat_prev"] = number(e.omega_hat_prev);
  return j;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SpecError("cannot write '" + path + "'");
  out << text;
  if (!out) throw SpecError("write to '" + path + "' failed");
}

}  // namespace sh::io
