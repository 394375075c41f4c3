// Command-line front end: condition numbers, certified polynomial
// approximation, reach-based defining equations, globalization, packing
// family scans, and perturbation stability, with JSON/CSV/SVG artifacts.

#include <CLI11.hpp>
#include <cstdio>
#include <optional>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "condeg/approx.hpp"
#include "condeg/condition.hpp"
#include "condeg/expr.hpp"
#include "condeg/families.hpp"
#include "condeg/globalize.hpp"
#include "condeg/json_out.hpp"
#include "condeg/reach.hpp"
#include "condeg/topology.hpp"
#include "condeg/version.hpp"

using namespace condeg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitBudget = 3;

struct Options {
  std::string field;
  std::string surface;
  std::string disk = "0,0,1";
  std::string kind = "hypersurface";
  int ell = -1;
  double resolution = 0.0;
  double safety = 0.5;
  int dmax = 32;
  std::vector<int> m = {2, 4, 8};
  std::uint64_t seed = 1;
  double magnitude = 0.0;
  int trials = 32;
  std::string json_path;
  std::string svg_path;
  std::string csv_path;
};

Disk parse_disk(const std::string& text) {
  std::vector<double> v;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    v.push_back(std::stod(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  if (v.size() < 2 || v.size() > 4)
    throw std::invalid_argument("--disk expects cx[,cy[,cz]],R");
  int n = static_cast<int>(v.size()) - 1;
  Vec c{};
  for (int i = 0; i < n; ++i) c[i] = v[i];
  return Disk{c, v[n], n};
}

SingularityKind parse_kind(const std::string& text) {
  if (text == "hypersurface") return SingularityKind::kHypersurface;
  if (text == "critical") return SingularityKind::kCriticalPoints;
  throw std::invalid_argument("--kind must be hypersurface or critical");
}

void emit(const std::string& text, const std::string& path) {
  std::cout << text << "\n";
  if (!path.empty()) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text << "\n";
  }
}

jsonio::Object provenance(double resolution, std::uint64_t seed) {
  jsonio::Object p;
  p.add("resolution", resolution);
  p.add("seed", static_cast<long long>(seed));
  p.add("version", version());
  return p;
}

std::string argmin_json(const Vec& z, int n) {
  jsonio::Array a;
  for (int i = 0; i < n; ++i) a.push_num(z[i]);
  return a.str();
}

std::string condition_json(const ConditionReport& rep, const Disk& D,
                           std::uint64_t seed) {
  jsonio::Object o;
  o.add("delta", rep.delta);
  o.add("interior_term", rep.interior_term);
  o.add("boundary_term", rep.boundary_term);
  o.add_raw("argmin", argmin_json(rep.argmin, D.n));
  o.add("norm", rep.norm.value);
  o.add("resolution", rep.resolution);
  o.add("kappa", rep.kappa);
  o.add("kind", rep.kind == SingularityKind::kHypersurface ? "hypersurface"
                                                           : "critical");
  o.add("ell", rep.ell);
  if (rep.kind == SingularityKind::kCriticalPoints)
    o.add("boundary_unverified", rep.boundary_unverified);
  o.add_raw("provenance", provenance(rep.resolution, seed).str(2));
  return o.str();
}

void write_overlay_svg(const ContourSet& a, const ContourSet& b, const Disk& D,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  double R = D.radius;
  double scale = 400.0 / (2.0 * R);
  auto X = [&](double x) { return (x - D.center[0] + R) * scale; };
  auto Y = [&](double y) { return (D.center[1] + R - y) * scale; };
  char buf[128];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" "
         "height=\"400\" viewBox=\"0 0 400 400\">\n";
  std::snprintf(buf, sizeof(buf),
                "  <circle cx=\"200\" cy=\"200\" r=\"%.3f\" fill=\"none\" "
                "stroke=\"#bbb\"/>\n",
                R * scale);
  out << buf;
  auto paths = [&](const ContourSet& cs, const char* color) {
    for (const auto& pl : cs.contours) {
      out << "  <path fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1\" d=\"";
      for (std::size_t i = 0; i < pl.vertices.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%c%.3f %.3f", i == 0 ? 'M' : 'L',
                      X(pl.vertices[i][0]), Y(pl.vertices[i][1]));
        out << buf;
      }
      if (pl.closed) out << "Z";
      out << "\"/>\n";
    }
  };
  paths(a, "#c22");
  paths(b, "#22c");
  out << "</svg>\n";
}

int cmd_condition(const Options& opt) {
  Disk D = parse_disk(opt.disk);
  auto f = parse_field(opt.field, D.n);
  SingularityKind kind = parse_kind(opt.kind);
  double res = opt.resolution > 0 ? opt.resolution : default_resolution(D);
  int ell = opt.ell >= 0 ? opt.ell : jet_order_of(kind) + 1;
  ConditionReport rep = kappa(*f, D, ell, kind, res);
  emit(condition_json(rep, D, opt.seed), opt.json_path);
  return rep.delta > 0.0 ? kExitOk : kExitDegenerate;
}

int cmd_approximate(const Options& opt) {
  Disk D = parse_disk(opt.disk);
  FieldPtr f = opt.surface.empty()
                   ? parse_field(opt.field, D.n)
                   : defining_function(parse_surface(opt.surface));
  SingularityKind kind = parse_kind(opt.kind);
  double res = opt.resolution > 0 ? opt.resolution : default_resolution(D);
  ConditionReport dr = kind == SingularityKind::kHypersurface
                           ? delta_hypersurface(*f, D, res)
                           : delta_critical(*f, D, res);
  if (!(dr.delta > 0.0)) {
    jsonio::Object o;
    o.add("error", "degenerate input: delta = 0");
    o.add_raw("provenance", provenance(res, opt.seed).str(2));
    emit(o.str(), opt.json_path);
    return kExitDegenerate;
  }
  std::optional<ApproxResult> result;
  try {
    result = approximate_with_certificate(f, D, kind, opt.safety, opt.dmax, res);
  } catch (const ApproxBudgetError& e) {
    jsonio::Object o;
    o.add("error", "degree budget exhausted");
    jsonio::Array tr;
    for (const auto& [d, err] : e.trace) {
      jsonio::Object row;
      row.add("degree", d);
      row.add("c_error", err);
      tr.push(row.str(4));
    }
    o.add_raw("trace", tr.str());
    o.add_raw("provenance", provenance(res, opt.seed).str(2));
    emit(o.str(), opt.json_path);
    return kExitBudget;
  }

  PolynomialField pf(result->p);
  bool compared = false, equal = false;
  ContourSet cs_f, cs_p;
  try {
    cs_f = extract_zero_set(*f, D, res);
    cs_p = extract_zero_set(pf, D, res);
    equal = isotopy_signature_equal(signature(cs_f, D), signature(cs_p, D));
    compared = true;
  } catch (const std::runtime_error&) {
    // Zero set meets the boundary or is non-transverse at this grid.
  }

  jsonio::Object o;
  o.add("degree_used", result->cert.degree_used);
  o.add("measured_error", result->cert.measured_error);
  o.add("delta_used", result->cert.delta_used);
  o.add("margin", result->cert.margin);
  o.add("degree_bound_rhs", result->cert.degree_bound_rhs);
  o.add("polynomial", result->p.to_string());
  o.add("signature_compared", compared);
  o.add("signature_equal", equal);
  o.add_raw("provenance", provenance(res, opt.seed).str(2));
  emit(o.str(), opt.json_path);
  if (!opt.svg_path.empty() && compared)
    write_overlay_svg(cs_f, cs_p, D, opt.svg_path);
  if (!opt.csv_path.empty() && compared) write_csv(cs_p, opt.csv_path);
  return compared && equal ? kExitOk : kExitDegenerate;
}

int cmd_reach_eq(const Options& opt) {
  Disk D = parse_disk(opt.disk);
  SurfacePtr Z = parse_surface(opt.surface);
  double res = opt.resolution > 0 ? opt.resolution : default_resolution(D);
  ReachBoundsReport rep = verify_condition_bounds(Z, D, res);
  jsonio::Object o;
  o.add("surface", Z->describe());
  o.add("rho", rep.rho);
  o.add("delta", rep.delta);
  o.add("delta_bound", rep.delta_bound);
  o.add("delta_ok", rep.delta_ok);
  o.add("kappa1", rep.kappa1);
  o.add("kappa1_bound", rep.kappa1_bound);
  o.add("kappa1_ok", rep.kappa1_ok);
  if (rep.kappa2_checked) {
    o.add("kappa2", rep.kappa2);
    o.add("kappa2_bound", rep.kappa2_bound);
    o.add("kappa2_ok", rep.kappa2_ok);
  }
  o.add("tolerance", rep.tol);
  o.add_raw("provenance", provenance(res, opt.seed).str(2));
  emit(o.str(), opt.json_path);
  if (!opt.svg_path.empty() && D.n == 2) {
    auto f = defining_function(Z);
    write_svg(extract_zero_set(*f, D, res), D, opt.svg_path);
  }
  bool ok = rep.delta_ok && rep.kappa1_ok && (!rep.kappa2_checked || rep.kappa2_ok);
  return ok ? kExitOk : kExitDegenerate;
}

int cmd_globalize(const Options& opt) {
  Disk D = parse_disk(opt.disk);
  auto f = parse_field(opt.field, D.n);
  double res = opt.resolution > 0 ? opt.resolution : default_resolution(D);
  ConditionReport dr = delta_hypersurface(*f, D, res);
  if (!(dr.delta > 0.0)) {
    jsonio::Object o;
    o.add("error", "degenerate input: delta = 0");
    o.add_raw("provenance", provenance(res, opt.seed).str(2));
    emit(o.str(), opt.json_path);
    return kExitDegenerate;
  }
  std::optional<ApproxResult> ar;
  try {
    ar = approximate_with_certificate(f, D, SingularityKind::kHypersurface,
                                      opt.safety, opt.dmax, res);
  } catch (const ApproxBudgetError&) {
    jsonio::Object o;
    o.add("error", "degree budget exhausted");
    o.add_raw("provenance", provenance(res, opt.seed).str(2));
    emit(o.str(), opt.json_path);
    return kExitBudget;
  }
  // The agreement tolerance lives on the inner disk too.
  ContourSet cs = extract_zero_set(*f, D, res);
  double r_in = std::exp(-2.0 * tau_of(cs, D)) * D.radius;
  double delta = std::min(
      dr.delta, delta_hypersurface(*f, Disk{D.center, r_in, D.n}, res).delta);
  GlobalizeResult gr = globalize(ar->p, f, D, delta, res);

  jsonio::Object o;
  o.add("tau", gr.params.tau);
  o.add("s", gr.params.s);
  o.add("r_in", gr.params.r_in);
  o.add("a", gr.params.a);
  o.add("ell", gr.params.ell);
  o.add("degree", gr.params.degree);
  o.add("c1", gr.params.c1);
  o.add("kappa1_tilde", gr.params.kappa1_tilde);
  o.add("base_degree", ar->cert.degree_used);
  o.add("delta_used", delta);
  jsonio::Array checks;
  for (const auto& ck : gr.params.checks) {
    jsonio::Object row;
    row.add("name", ck.name);
    row.add("passed", ck.passed);
    row.add("lhs", ck.lhs);
    row.add("rhs", ck.rhs);
    checks.push(row.str(4));
  }
  o.add_raw("checks", checks.str());
  o.add_raw("provenance", provenance(res, opt.seed).str(2));
  emit(o.str(), opt.json_path);
  if (!opt.svg_path.empty() && D.n == 2)
    write_svg(extract_zero_set(PolynomialField(gr.p), D, res), D, opt.svg_path);
  return kExitOk;
}

int cmd_family_scan(const Options& opt) {
  Disk D = parse_disk(opt.disk);
  FieldPtr base =
      opt.field.empty() ? unit_circle_base() : parse_field(opt.field, D.n);
  GrowthScan scan = growth_scan(base, D, opt.m);
  jsonio::Object o;
  jsonio::Array rows;
  for (const auto& r : scan.rows) {
    jsonio::Object row;
    row.add("m", r.m);
    row.add("count", r.count);
    row.add("kappa1", r.kappa1);
    row.add("betti", r.betti);
    rows.push(row.str(4));
  }
  o.add_raw("rows", rows.str());
  o.add("slope", scan.slope);
  o.add("intercept", scan.intercept);
  o.add_raw("provenance", provenance(opt.resolution, opt.seed).str(2));
  emit(o.str(), opt.json_path);
  if (!opt.csv_path.empty()) {
    std::ofstream csv(opt.csv_path);
    if (!csv) throw std::runtime_error("cannot open " + opt.csv_path);
    csv << "m,count,kappa1,betti\n";
    char buf[96];
    for (const auto& r : scan.rows) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%d\n", r.m, r.count,
                    r.kappa1, r.betti);
      csv << buf;
    }
  }
  return kExitOk;
}

int cmd_stability_test(const Options& opt) {
  Disk D = parse_disk(opt.disk);
  auto f = parse_field(opt.field, D.n);
  SingularityKind kind = parse_kind(opt.kind);
  double res = opt.resolution > 0 ? opt.resolution : default_resolution(D);
  ConditionReport dr = kind == SingularityKind::kHypersurface
                           ? delta_hypersurface(*f, D, res)
                           : delta_critical(*f, D, res);
  if (!(dr.delta > 0.0)) {
    jsonio::Object o;
    o.add("error", "degenerate input: delta = 0");
    o.add_raw("provenance", provenance(res, opt.seed).str(2));
    emit(o.str(), opt.json_path);
    return kExitDegenerate;
  }
  double magnitude = opt.magnitude > 0 ? opt.magnitude : 0.5 * dr.delta;
  StabilityReport rep = perturbation_stability_test(f, D, kind, magnitude,
                                                    opt.trials, opt.seed, res);
  jsonio::Object o;
  o.add("trials", rep.trials);
  o.add("failures", rep.failures);
  o.add("magnitude", rep.magnitude);
  o.add("delta", rep.delta);
  jsonio::Array failed;
  for (int t : rep.failed_trials) failed.push(std::to_string(t));
  o.add_raw("failed_trials", failed.str());
  o.add_raw("provenance", provenance(res, opt.seed).str(2));
  emit(o.str(), opt.json_path);
  return rep.failures == 0 ? kExitOk : kExitDegenerate;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"condition-number-controlled polynomial topology toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--disk", opt.disk, "cx[,cy[,cz]],R");
    sub->add_option("--resolution", opt.resolution, "grid resolution");
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("--json", opt.json_path, "write JSON report here");
    sub->add_option("--svg", opt.svg_path, "write SVG plot here");
    sub->add_option("--csv", opt.csv_path, "write CSV table here");
  };

  auto* c_cond = app.add_subcommand("condition", "condition number of a field");
  c_cond->add_option("--field", opt.field)->required();
  c_cond->add_option("--kind", opt.kind);
  c_cond->add_option("--ell", opt.ell);
  add_common(c_cond);

  auto* c_appr = app.add_subcommand("approximate",
                                    "certified polynomial approximation");
  c_appr->add_option("--field", opt.field);
  c_appr->add_option("--surface", opt.surface);
  c_appr->add_option("--kind", opt.kind);
  c_appr->add_option("--safety", opt.safety);
  c_appr->add_option("--dmax", opt.dmax);
  add_common(c_appr);

  auto* c_reach = app.add_subcommand("reach-eq",
                                     "defining equation condition bounds");
  c_reach->add_option("--surface", opt.surface)->required();
  add_common(c_reach);

  auto* c_glob = app.add_subcommand("globalize",
                                    "extend a local certificate globally");
  c_glob->add_option("--field", opt.field)->required();
  c_glob->add_option("--safety", opt.safety);
  c_glob->add_option("--dmax", opt.dmax);
  add_common(c_glob);

  auto* c_fam = app.add_subcommand("family-scan",
                                   "Betti growth across packing families");
  c_fam->add_option("--field", opt.field);
  c_fam->add_option("--m", opt.m)->delimiter(',');
  add_common(c_fam);

  auto* c_stab = app.add_subcommand("stability-test",
                                    "signature invariance under perturbation");
  c_stab->add_option("--field", opt.field)->required();
  c_stab->add_option("--kind", opt.kind);
  c_stab->add_option("--magnitude", opt.magnitude);
  c_stab->add_option("--trials", opt.trials);
  add_common(c_stab);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(c_cond)) return cmd_condition(opt);
    if (app.got_subcommand(c_appr)) return cmd_approximate(opt);
    if (app.got_subcommand(c_reach)) return cmd_reach_eq(opt);
    if (app.got_subcommand(c_glob)) return cmd_globalize(opt);
    if (app.got_subcommand(c_fam)) return cmd_family_scan(opt);
    if (app.got_subcommand(c_stab)) return cmd_stability_test(opt);
  } catch (const GlobalizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const condeg::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  }
  return kExitUsage;
}
