#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "jscat/diagnostics.hpp"
#include "jscat/forward.hpp"
#include "jscat/gallery.hpp"
#include "jscat/inverse.hpp"
#include "jscat/io.hpp"

using namespace jscat;
using nlohmann::json;

namespace {

struct RunConfig {
  int grid = 1024;
  int trunc = 0;  // 0: min(256, grid / 4)
  int window = 4;
  std::string eps;  // empty: default ladder
  double tol_unitarity = 1e-10;
  double tol_roundtrip = 1e-6;
  double tol_defect = 1e-6;
  double s_floor = 1e-8;
  double log_floor = 50.0;
  std::uint64_t seed = 1;
  std::string out = ".";
  int a2_levels = 10;
  bool circle = false;
};

struct GateFailure : Error {
  using Error::Error;
};

std::vector<double> parse_eps(const std::string& s) {
  if (s.empty()) return default_eps_ladder();
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size() || !(v > 0.0)) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError("bad eps ladder entry \"" + item + "\"");
    }
  }
  if (out.empty()) throw ValidationError("empty eps ladder");
  return out;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ValidationError("bad number \"" + item + "\"");
    }
  }
  return out;
}

void validate(RunConfig& c) {
  if (c.grid < 64 || !is_power_of_two(c.grid))
    throw ValidationError("--grid must be a power of two >= 64");
  if (c.trunc == 0) c.trunc = std::min(256, c.grid / 4);
  if (c.trunc <= 0 || c.trunc > c.grid / 4) throw ValidationError("--trunc must lie in [1, grid/4]");
  if (c.window < 0) throw ValidationError("--window must be nonnegative");
  parse_eps(c.eps);
}

std::string out_path(const RunConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.out);
  return (std::filesystem::path(c.out) / name).string();
}

// Gate bookkeeping: every check lands in the report, failures flip the exit code.
struct Gates {
  json j = json::object();
  bool ok = true;
  void check(const std::string& name, double value, double tol) {
    bool pass = std::isfinite(value) && value <= tol;
    j[name] = {{"value", value}, {"tol", tol}, {"pass", pass}};
    ok = ok && pass;
  }
};

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json forward_report(const JacobiOperator& J, const JostFamily& jost, const ScatteringMatrix& sm,
                    const RunConfig& c, Gates& g) {
  json r;
  auto inv = scattering_invariants(sm);
  r["unitarity_plus"] = inv.unitarity_plus;
  r["unitarity_minus"] = inv.unitarity_minus;
  r["symmetry"] = inv.symmetry;
  r["compatibility"] = inv.compatibility;
  r["negative_mass"] = inv.negative_mass;
  auto w = wronskian_check(jost);
  r["wronskian_n_dependence"] = w.n_dependence;
  r["wronskian_vs_zprime"] = w.vs_zprime;
  r["jump_relation"] = jump_relation_residual(jost, sm);
  r["duality"] = duality_residual(jost, sm);
  r["asymptotics"] = asymptotics_residual(jost, sm);
  r["transmission_formula"] = transmission_formula_residual(jost, sm);
  r["s_at_zero"] = sm.s_at_zero;
  r["resonant_nodes"] = sm.resonant_nodes;
  r["cross_check_s"] = sm.cross_check_s;
  r["cross_check_s_plus"] = sm.cross_check_s_plus;
  ConsistencyReport cr;
  try {
    cr = density_scattering_consistency(J, jost, sm, INFINITY);
  } catch (const ConsistencyFailure&) {
  }
  r["det_relative"] = number(cr.det_relative);
  r["matrix_relative"] = number(cr.matrix_relative);
  r["matrix_imag"] = number(cr.matrix_imag);

  g.check("unitarity", std::max(inv.unitarity_plus, inv.unitarity_minus), c.tol_unitarity);
  g.check("symmetry", inv.symmetry, c.tol_unitarity);
  g.check("compatibility", inv.compatibility, c.tol_unitarity);
  g.check("wronskian", w.n_dependence, 1e-9);
  g.check("jump_relation", r["jump_relation"].get<double>(), 1e-9);
  g.check("density_det", cr.det_relative, 1e-6);
  g.check("density_matrix", cr.matrix_relative, 1e-6);
  return r;
}

int cmd_forward(const std::string& file, const RunConfig& c) {
  JacobiOperator J = read_jacobi_json(file);
  JostFamily jost = jost_solutions(J, c.grid);
  ScatteringMatrix sm = extract_scattering(jost);
  Gates g;
  json rep = forward_report(J, jost, sm, c, g);
  rep["gates"] = g.j;
  rep["pass"] = g.ok;
  write_text(out_path(c, "scattering.json"), scattering_json(scattering_file(sm)));
  write_text(out_path(c, "density.csv"),
             density_csv(spectral_density(J, interior_thetas(c.grid, 2))));
  write_text(out_path(c, "forward_report.json"), rep.dump(2) + "\n");
  std::printf("forward: %s\n", g.ok ? "all gates pass" : "gate failure");
  return g.ok ? 0 : 1;
}

json defect_json(const UniquenessDefect& u) {
  json ladder = json::array();
  for (const auto& r : u.ladder) ladder.push_back({{"M", r.M}, {"plus", r.plus}, {"minus", r.minus}});
  return {{"defect_plus", u.plus}, {"defect_minus", u.minus}, {"unique", u.unique},
          {"M_ladder", ladder}};
}

json kernel_json(const ReconstructionResult& r) {
  json arr = json::array();
  for (std::size_t i = 0; i < r.kernels.size(); ++i) {
    json tr = json::array();
    for (auto [e, v] : r.kernels[i].eps_trace) tr.push_back({e, v});
    arr.push_back({{"n", r.n_lo + static_cast<int>(i)}, {"eps_trace", tr}});
  }
  return arr;
}

InverseOptions inverse_options(const RunConfig& c) {
  InverseOptions o;
  o.N = c.window;
  o.M = c.trunc;
  o.eps = parse_eps(c.eps);
  o.s_floor = c.s_floor;
  return o;
}

int cmd_inverse(const std::string& file, const RunConfig& c) {
  ScatteringFile f = read_scattering_json(file);
  ReflectionInput in = f.input();
  InverseOptions o = inverse_options(c);
  ReconstructionResult r = reconstruct(in, o);
  std::vector<int> ladder;
  for (int M = 64; M < c.trunc; M *= 2) ladder.push_back(M);
  ladder.push_back(c.trunc);
  UniquenessDefect u = uniqueness_defect(in, ladder, c.tol_defect, o.eps);
  json rep = defect_json(u);
  rep["gram_residual"] = r.gram_residual;
  rep["kernels"] = kernel_json(r);
  Gates g;
  g.check("gram_residual", r.gram_residual, o.gram_tol);
  rep["gates"] = g.j;
  rep["pass"] = g.ok;
  write_text(out_path(c, "jacobi.json"), jacobi_json(r.J));
  write_text(out_path(c, "inverse_report.json"), rep.dump(2) + "\n");
  std::printf("inverse: defects %.3e %.3e, %s\n", u.plus, u.minus,
              u.unique ? "unique" : "NOT unique (s_+ does not determine J)");
  return g.ok ? 0 : 1;
}

int cmd_roundtrip(const std::string& file, const RunConfig& c) {
  JacobiOperator J = read_jacobi_json(file);
  JostFamily jost = jost_solutions(J, c.grid);
  ScatteringMatrix sm = extract_scattering(jost);
  Gates g;
  json rep;
  rep["forward"] = forward_report(J, jost, sm, c, g);
  RunConfig cc = c;
  cc.window = std::max({c.window, J.support_hi(), -J.support_lo()});
  ReconstructionResult r = reconstruct(ReflectionInput::from_scattering(sm), inverse_options(cc));
  double err = J.max_difference(r.J);
  rep["roundtrip_error"] = err;
  rep["gram_residual"] = r.gram_residual;
  rep["defect_plus"] = r.defect_plus;
  rep["defect_minus"] = r.defect_minus;
  g.check("roundtrip", err, c.tol_roundtrip);
  rep["gates"] = g.j;
  rep["pass"] = g.ok;
  write_text(out_path(c, "jacobi_recovered.json"), jacobi_json(r.J));
  write_text(out_path(c, "roundtrip_report.json"), rep.dump(2) + "\n");
  std::printf("roundtrip: max coefficient error %.3e, %s\n", err, g.ok ? "pass" : "gate failure");
  return g.ok ? 0 : 1;
}

struct GalleryArgs {
  std::string kind = "free";
  double c = 0.5;
  int width = 4;
  double magnitude = 0.3;
  std::string poly = "0.3,0.5,-0.2";
  double a_plus = 0.5, a_minus = 0.5;
  int delta_degree = 2;
};

int cmd_gallery(const GalleryArgs& a, const RunConfig& c) {
  json rep;
  rep["kind"] = a.kind;
  Gates g;
  if (a.kind == "free" || a.kind == "single_site" || a.kind == "random_window") {
    JacobiOperator J = a.kind == "free"          ? free_matrix()
                       : a.kind == "single_site" ? single_site(a.c)
                                                 : random_window(a.width, a.magnitude, c.seed);
    write_text(out_path(c, "jacobi.json"), jacobi_json(J));
    if (a.kind == "free") {
      // A free spec also yields the zero reflection coefficient.
      ScatteringFile f;
      f.grid_size = c.grid;
      f.s_plus = CircleFunction(c.grid);
      write_text(out_path(c, "scattering.json"), scattering_json(f));
    }
  } else if (a.kind == "bernstein_szego") {
    ReflectionInput in = bernstein_szego(parse_list(a.poly), c.grid);
    auto inv = scattering_invariants({in.s, in.s_plus, in.s_minus, in.s_at_zero, {}, 0.0, 0.0});
    SzegoCheck sz = szego_class_check(
        [&] {
          BasisDensity bd(in, c.trunc, parse_eps(c.eps));
          SpectralDensity d;
          for (double th : midpoint_thetas(c.grid / 2)) {
            d.theta.push_back(th);
            d.x.push_back(2.0 * std::cos(th));
            d.rho.push_back(bd(th));
          }
          return d;
        }(),
        c.log_floor);
    rep["szego_value"] = sz.value;
    rep["szego_pass"] = sz.pass;
    g.check("invariants", inv.max(), c.tol_unitarity);
    g.check("szego", sz.pass ? 0.0 : 1.0, 0.5);
    write_text(out_path(c, "scattering.json"), scattering_json(scattering_file(in)));
  } else if (a.kind == "example_nonunique") {
    ExampleData ex = example_nonunique(a.a_plus, a.a_minus, a.delta_degree, c.grid);
    auto inv = scattering_invariants(
        {ex.input.s, ex.input.s_plus, ex.input.s_minus, ex.input.s_at_zero, {}, 0.0, 0.0});
    rep["min_abs_s"] = ex.min_abs_s;
    rep["closed_form_residual"] = ex.closed_form_residual;
    g.check("min_abs_s", ex.min_abs_s, 1e-3);
    g.check("closed_form", ex.closed_form_residual, 1e-12);
    g.check("unitarity", std::max(inv.unitarity_plus, inv.unitarity_minus), c.tol_unitarity);
    g.check("compatibility", inv.compatibility, c.tol_unitarity);
    g.check("symmetry", inv.symmetry, c.tol_unitarity);
    write_text(out_path(c, "scattering.json"), scattering_json(scattering_file(ex.input)));
  } else {
    throw ValidationError("unknown gallery kind \"" + a.kind + "\"");
  }
  rep["gates"] = g.j;
  rep["pass"] = g.ok;
  write_text(out_path(c, "gallery_report.json"), rep.dump(2) + "\n");
  std::printf("gallery %s: %s\n", a.kind.c_str(), g.ok ? "pass" : "gate failure");
  return g.ok ? 0 : 1;
}

int cmd_diagnose(const std::string& file, const RunConfig& c) {
  std::string text = read_text(file);
  json probe;
  try {
    probe = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  if (!probe.is_object()) throw ValidationError("input must be a JSON object");
  const bool is_matrix = probe.contains("p");
  JacobiOperator J;
  ReflectionInput in;
  if (is_matrix) {
    J = parse_jacobi_json(text);
    in = ReflectionInput::from_scattering(extract_scattering(jost_solutions(J, c.grid)));
  } else {
    in = parse_scattering_json(text).input();
  }
  PanelOptions po;
  po.M_ladder.clear();
  for (int M = 64; M < c.trunc; M *= 2) po.M_ladder.push_back(M);
  po.M_ladder.push_back(c.trunc);
  po.a2.levels = c.a2_levels;
  po.reading = c.circle ? A2Reading::circle : A2Reading::interval;
  po.defect_tol = c.tol_defect;
  PanelReport p = equivalence_panel(in, is_matrix ? &J : nullptr, po);

  ThetaDensity rho;
  if (is_matrix) {
    rho = [J](double th) { return density_at(J, th); };
  } else {
    auto bd = std::make_shared<BasisDensity>(in, c.trunc);
    rho = [bd](double th) { return (*bd)(th); };
  }
  TransformInequalityReport ti = transform_inequality_estimate(rho, 8, c.seed, 512);

  json rep;
  rep["a2_level_trend"] = p.a2.level_trend;
  rep["a2_scale_trend"] = p.a2.scale_trend;
  rep["a2_Q"] = p.a2.Q;
  rep["a2_divergent"] = p.a2.divergent;
  json sig = json::array();
  for (const auto& s : p.sigma) sig.push_back({{"M", s.M}, {"plus", s.plus}, {"minus", s.minus}});
  rep["min_singular"] = sig;
  rep["invertible"] = p.invertible;
  rep["defect"] = defect_json(p.defect);
  rep["transform_inequality_C"] = number(ti.C);
  rep["coherent"] = p.coherent;
  rep["verdict"] = p.verdict;
  write_text(out_path(c, "diagnose_report.json"), rep.dump(2) + "\n");

  std::string csv = "level,Q\n";
  for (std::size_t k = 0; k < p.a2.level_trend.size(); ++k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", k, p.a2.level_trend[k]);
    csv += buf;
  }
  write_text(out_path(c, "a2_trend.csv"), csv);

  std::printf("%-22s %s\n", "A2 trend", p.a2.divergent ? "divergent" : "finite");
  std::printf("%-22s", "");
  for (double v : p.a2.level_trend) std::printf(" %.3f", v);
  std::printf("\n%-22s %s (", "I + H invertible", p.invertible ? "yes" : "no");
  for (const auto& s : p.sigma) std::printf(" M=%d: %.3f/%.3f", s.M, s.plus, s.minus);
  std::printf(" )\n%-22s %s (%.3e, %.3e)\n", "unique", p.unique ? "yes" : "no", p.defect.plus,
              p.defect.minus);
  std::printf("%-22s %.4g\n", "transform ineq. C", ti.C);
  std::printf("%-22s %s\n", "verdict", p.verdict.c_str());
  return p.coherent ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direct and inverse scattering for Jacobi matrices with spectrum [-2, 2]"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--grid", cfg.grid, "grid size N (power of two >= 64)");
    sub->add_option("--trunc", cfg.trunc, "Hankel truncation M (<= N/4, default min(256, N/4))");
    sub->add_option("--window", cfg.window, "recovered window half-width");
    sub->add_option("--eps", cfg.eps, "comma-separated eps ladder");
    sub->add_option("--tol-unitarity", cfg.tol_unitarity);
    sub->add_option("--tol-roundtrip", cfg.tol_roundtrip);
    sub->add_option("--tol-defect", cfg.tol_defect);
    sub->add_option("--tol-s-floor", cfg.s_floor);
    sub->add_option("--tol-log-floor", cfg.log_floor);
    sub->add_option("--seed", cfg.seed);
    sub->add_option("--out", cfg.out, "output directory");
  };

  std::string input;
  auto* fwd = app.add_subcommand("forward", "Jacobi coefficients -> scattering data");
  fwd->add_option("jacobi", input, "jacobi.json")->required();
  add_common(fwd);
  auto* inv = app.add_subcommand("inverse", "reflection coefficient -> Jacobi coefficients");
  inv->add_option("scattering", input, "scattering.json")->required();
  add_common(inv);
  auto* rt = app.add_subcommand("roundtrip", "forward then inverse, compare");
  rt->add_option("jacobi", input, "jacobi.json")->required();
  add_common(rt);
  GalleryArgs ga;
  auto* gal = app.add_subcommand("gallery", "write a gallery input");
  gal->add_option("--kind", ga.kind,
                  "free | single_site | random_window | bernstein_szego | example_nonunique");
  gal->add_option("--c", ga.c, "single_site: p_0");
  gal->add_option("--width", ga.width, "random_window: width");
  gal->add_option("--magnitude", ga.magnitude, "random_window: bound on |p - 1|, |q|");
  gal->add_option("--poly", ga.poly, "bernstein_szego: comma-separated coefficients");
  gal->add_option("--a-plus", ga.a_plus);
  gal->add_option("--a-minus", ga.a_minus);
  gal->add_option("--delta-degree", ga.delta_degree);
  add_common(gal);
  auto* dia = app.add_subcommand("diagnose", "A2 / invertibility / uniqueness panel");
  dia->add_option("input", input, "jacobi.json or scattering.json")->required();
  dia->add_option("--a2-levels", cfg.a2_levels, "A2 refinement levels");
  dia->add_flag("--circle", cfg.circle, "A2 on rho(z(t))|z'| over the circle");
  add_common(dia);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    validate(cfg);
    if (*fwd) return cmd_forward(input, cfg);
    if (*inv) return cmd_inverse(input, cfg);
    if (*rt) return cmd_roundtrip(input, cfg);
    if (*gal) return cmd_gallery(ga, cfg);
    if (*dia) return cmd_diagnose(input, cfg);
  } catch (const KernelFailure& e) {
    std::cerr << "error: " << e.what() << "\n  eps trace (shift " << e.shift << "):\n";
    for (auto [eps, k0] : e.trace) std::cerr << "    " << eps << "  " << k0 << "\n";
    return 1;
  } catch (const OffIntervalSpectrum& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SzegoViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SymbolAsymmetry& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GridMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
