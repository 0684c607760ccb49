// sh_cli: field | height | angles | mu | goingdown | exponents | verify
// Exit codes: 0 ok, 1 invariant failure, 2 I/O or spec error.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "sh/sh.hpp"

namespace {

using sh::io::Json;
using sh::io::Node;

constexpr int kOk = 0;
constexpr int kInvariant = 1;
constexpr int kSpec = 2;

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    sh::io::write_file(out, text);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

sh::FieldPtr field_from(const std::string& name, const std::string& spec_file) {
  if (!spec_file.empty()) {
    const Json j = sh::io::read_json_file(spec_file);
    return sh::io::parse_field({j, ""});
  }
  return sh::builtin_field(name);
}

/// "1,1.618" (reals), "1:0,0.3:0.2" (re:im) or "algebraic:[[..], ..]" (entries over K).
sh::Target parse_target(const std::string& text, const sh::FieldPtr& k) {
  const std::string tag = "algebraic:";
  if (text.rfind(tag, 0) == 0) {
    Json j;
    try {
      j = Json::parse(text.substr(tag.size()));
    } catch (const nlohmann::json::parse_error& e) {
      throw sh::SpecError(std::string("--target: ") + e.what());
    }
    return sh::algebraic_target(sh::io::parse_kvector(k, {j, "--target"}));
  }
  std::vector<std::complex<double>> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    char* end = nullptr;
    const double re = std::strtod(item.c_str(), &end);
    double im = 0;
    const bool ok_re = end != item.c_str() && (colon == std::string::npos ? *end == '\0' : end == item.c_str() + colon);
    bool ok_im = true;
    if (colon != std::string::npos) {
      const char* s = item.c_str() + colon + 1;
      im = std::strtod(s, &end);
      ok_im = end != s && *end == '\0';
    }
    if (!ok_re || !ok_im) throw sh::SpecError("--target: malformed entry '" + item + "'");
    xs.emplace_back(re, im);
  }
  if (xs.empty()) throw sh::SpecError("--target: empty");
  sh::CVector u(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) u(static_cast<Eigen::Index>(i)) = xs[i];
  return sh::numeric_target(u);
}

struct PairInput {
  std::vector<sh::CVector> a, b;
};

PairInput read_pair(const std::string& path) {
  const Json j = sh::io::read_json_file(path);
  const Node root{j, ""};
  PairInput p{sh::io::parse_vectors(root.at("A")), sh::io::parse_vectors(root.at("B"))};
  if (p.a.front().size() != p.b.front().size()) root.at("B").fail("ambient dimension differs from A");
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heights of subspaces over number fields, principal angles, going-down and exponents"};
  app.require_subcommand(1);
  std::string out;

  // field
  auto* field = app.add_subcommand("field", "Describe a number field");
  std::string field_name = "Q(i)", field_spec;
  field->add_option("--field", field_name, "Built-in field name");
  field->add_option("--spec", field_spec, "Field spec JSON file");
  field->add_option("--out", out, "Output file (default stdout)");

  // height
  auto* height = app.add_subcommand("height", "Height of a subspace, by both definitions");
  std::string height_in;
  bool height_json = false;
  height->add_option("input", height_in, "Subspace spec JSON")->required();
  height->add_flag("--json", height_json, "JSON output");
  height->add_option("--out", out, "Output file (default stdout)");

  // angles / mu
  auto* angles = app.add_subcommand("angles", "Principal angles omega_i(A, B)");
  auto* mu = app.add_subcommand("mu", "mu(A, B), as a product and as a wedge");
  std::string pair_in;
  for (auto* sc : {angles, mu}) {
    sc->add_option("input", pair_in, "JSON with spanning rows \"A\" and \"B\"")->required();
    sc->add_option("--out", out, "Output file (default stdout)");
  }

  // goingdown
  auto* gd = app.add_subcommand("goingdown", "Run the going-down construction on an instance");
  std::string gd_in, gd_emit, gd_field = "Q(i)";
  std::size_t gd_n = 4, gd_e = 3;
  double gd_h = 100;
  std::uint64_t seed = 1;
  gd->add_option("input", gd_in, "Instance JSON");
  gd->add_option("--out", out, "Certificate output file (default stdout)");
  gd->add_option("--emit-instance", gd_emit, "Write a generated instance to this file instead of running");
  gd->add_option("--field", gd_field, "Generated instance: field");
  gd->add_option("--n", gd_n, "Generated instance: ambient dimension");
  gd->add_option("--e", gd_e, "Generated instance: dim B");
  gd->add_option("--height", gd_h, "Generated instance: H");
  gd->add_option("--seed", seed, "Generated instance: seed");

  // exponents
  auto* ex = app.add_subcommand("exponents", "Record curve and exponent estimates");
  std::string ex_field = "Q", ex_target, ex_csv;
  std::size_t ex_n = 1, ex_j = 0;
  double ex_qmax = 1e4;
  bool ex_generic = false;
  ex->add_option("--field", ex_field, "Built-in field name");
  ex->add_option("--n", ex_n, "Target lives in K^{n+1}");
  ex->add_option("--j", ex_j, "Approximating subspaces of dimension j+1");
  ex->add_option("--qmax", ex_qmax, "Height bound");
  ex->add_option("--target", ex_target, "u: \"1,1.618\", \"1:0,0.3:0.2\" or \"algebraic:[..]\"")->required();
  ex->add_option("--out", ex_csv, "CSV of the record curve (H, H*omega^q, plucker)");
  ex->add_flag("--generic", ex_generic, "Force the generic enumeration path");

  // verify
  auto* vf = app.add_subcommand("verify", "Run the invariant suite");
  std::size_t jobs = 1;
  vf->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  vf->add_option("--out", out, "Report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kSpec;
  }

  try {
    const sh::Tolerances tol = sh::Tolerances::from_env();

    if (*field) {
      emit(dump(sh::io::field_json(field_from(field_name, field_spec))), out);
      return kOk;
    }

    if (*height) {
      const Json j = sh::io::read_json_file(height_in);
      const sh::SubspaceOverK s = sh::io::parse_subspace({j, ""});
      const double hi = sh::height_ideal(s), hl = sh::height_lattice(s);
      const bool agree = std::fabs(hi - hl) <= 1e3 * tol.rel * hi;
      if (height_json) {
        Json r;
        r["height_ideal"] = sh::io::number(hi);
        r["height_lattice"] = sh::io::number(hl);
        r["ideal_norm"] = sh::to_string(sh::height_parts(s).ideal_norm);
        r["agree"] = agree;
        emit(dump(r), out);
      } else {
        emit("height_ideal   " + sh::io::format_fixed(hi) + "\nheight_lattice " + sh::io::format_fixed(hl) + "\n", out);
      }
      return agree ? kOk : kInvariant;
    }

    if (*angles) {
      const PairInput p = read_pair(pair_in);
      const auto a = sh::NumericSubspace::from_vectors(p.a), b = sh::NumericSubspace::from_vectors(p.b);
      const sh::PrincipalData pd = sh::principal_data(a, b);
      Json r;
      r["omega"] = sh::io::numbers(pd.omegas);
      r["lambda"] = sh::io::numbers(pd.lambdas);
      emit(dump(r), out);
      return kOk;
    }

    if (*mu) {
      const PairInput p = read_pair(pair_in);
      const auto a = sh::NumericSubspace::from_vectors(p.a), b = sh::NumericSubspace::from_vectors(p.b);
      const double prod = sh::mu(a, b);
      Json r;
      r["mu"] = sh::io::number(prod);
      bool ok = true;
      if (a.dim() + b.dim() <= a.ambient()) {
        const double wedge = sh::mu_wedge(p.a, p.b);
        r["mu_wedge"] = sh::io::number(wedge);
        ok = std::fabs(prod - wedge) <= 10 * tol.rel;
        r["agree"] = ok;
      }
      emit(dump(r), out);
      return ok ? kOk : kInvariant;
    }

    if (*gd) {
      if (!gd_emit.empty()) {
        sh::InstanceSpec spec;
        spec.field = gd_field;
        spec.n = gd_n;
        spec.e = gd_e;
        spec.height = gd_h;
        spec.seed = seed;
        sh::io::write_file(gd_emit, dump(sh::io::instance_json(sh::make_instance(spec))));
        return kOk;
      }
      if (gd_in.empty()) throw sh::SpecError("goingdown: an instance file or --emit-instance is required");
      const Json j = sh::io::read_json_file(gd_in);
      const sh::GoingDownCertificate c = sh::going_down(sh::io::parse_goingdown({j, ""}));
      emit(dump(sh::io::certificate_json(c)), out);
      return c.all_ok() ? kOk : kInvariant;
    }

    if (*ex) {
      const sh::FieldPtr k = sh::builtin_field(ex_field);
      const sh::Target t = parse_target(ex_target, k);
      if (static_cast<std::size_t>(t.u.size()) != ex_n + 1)
        throw sh::SpecError("--target has " + std::to_string(t.u.size()) + " entries, --n " + std::to_string(ex_n) +
                            " needs " + std::to_string(ex_n + 1));
      if (ex_j >= ex_n) throw sh::SpecError("--j must be below --n");
      sh::CurveOptions copt;
      copt.force_generic = ex_generic;
      const sh::RecordCurve curve = sh::record_curve(t, k, ex_j, ex_qmax, copt);
      if (!ex_csv.empty()) sh::io::write_file(ex_csv, sh::io::curve_csv(curve));
      Json r;
      try {
        r = sh::io::estimate_json(curve, sh::estimate_exponents(curve));
      } catch (const sh::MathError& e) {
        r = sh::io::estimate_json(curve, {});
        r["omega"] = nullptr;
        r["omega_hat"] = nullptr;
        r["omega_prev"] = nullptr;
        r["omega_hat_prev"] = nullptr;
        r["note"] = e.what();
      }
      std::cout << dump(r);
      return kOk;
    }

    if (*vf) {
      sh::verify::Options opt;
      opt.tol = tol;
      opt.jobs = jobs;
      const sh::verify::Outcome o = sh::verify::run(sh::verify::suite(), opt);
      emit(sh::verify::report(o), out);
      return o.all_pass() ? kOk : kInvariant;
    }
  } catch (const sh::NotFound& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvariant;
  } catch (const sh::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSpec;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSpec;
  }
  return kSpec;
}
