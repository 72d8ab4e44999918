// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "jscat/diagnostics.hpp"
#include "jscat/forward.hpp"
#include "jscat/gallery.hpp"
#include "jscat/inverse.hpp"

using namespace jscat;

namespace {

using Clock = std::chrono::steady_clock;

double uniform(std::mt19937_64& rng) { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; }

CircleFunction trig_poly(int n, int kmin, const std::vector<double>& c) {
  return CircleFunction::from(n, [&](cplx t) {
    cplx v = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) v += c[i] * std::pow(t, kmin + static_cast<int>(i));
    return v;
  });
}

int window_of(const JacobiOperator& J) { return std::max(J.support_hi(), -J.support_lo()); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
  auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s  %2d  %-44s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt2(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

struct Forward {
  JacobiOperator J;
  JostFamily jost;
  ScatteringMatrix sm;
};

Forward forward(const JacobiOperator& J, int grid) {
  Forward f{J, jost_solutions(J, grid), {}};
  f.sm = extract_scattering(f.jost);
  return f;
}

std::vector<JacobiOperator> roundtrip_windows() {
  std::vector<JacobiOperator> out;
  for (int i = 0; i < 20; ++i) out.push_back(random_window(1 + i % 8, 0.3, static_cast<std::uint64_t>(i)));
  return out;
}

// Threshold for the example defect, fixed from the M-ladder run at
// M = 64, 128, 256 (defect 0.3453 at every M, both signs).
constexpr double kExampleDefectThreshold = 0.3;

}  // namespace

int main() {
  const int grid = 1024;
  const auto gallery = standard_gallery(grid);
  const auto windows = roundtrip_windows();

  criterion(1, "free matrix identities", [&] {
    auto t0 = Clock::now();
    auto f = forward(free_matrix(), grid);
    double sp = sup_norm(f.sm.s_plus), s1 = sup_norm(f.sm.s - CircleFunction(grid, 1.0));
    InverseOptions o;
    auto r = reconstruct(ReflectionInput::from_s_plus(CircleFunction(grid)), o);
    double dj = r.J.max_difference(free_matrix());
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    Outcome out;
    out.pass = sp <= 1e-12 && s1 <= 1e-12 && dj <= 1e-12 && secs < 1.0;
    out.detail = fmt2("|s+| %.1e, |s-1| %.1e", sp, s1) + fmt(", inverse %.1e", dj);
    return out;
  });

  criterion(2, "roundtrip, 20 random windows", [&] {
    auto t0 = Clock::now();
    double worst = 0.0;
    for (const auto& J : windows) {
      auto f = forward(J, 2048);
      InverseOptions o;
      o.N = window_of(J);
      o.M = 256;
      auto r = reconstruct(ReflectionInput::from_scattering(f.sm), o);
      worst = std::max(worst, r.J.max_difference(J));
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return Outcome{worst <= 1e-6 && secs < 120.0, fmt("max error %.2e", worst)};
  });

  std::vector<Forward> outputs;
  for (const auto& e : gallery)
    if (e.has_matrix) outputs.push_back(forward(e.J, grid));
  for (const auto& J : windows) outputs.push_back(forward(J, grid));

  criterion(3, "scattering invariants on every forward output", [&] {
    double u = 0.0, s = 0.0, c = 0.0;
    for (const auto& f : outputs) {
      auto inv = scattering_invariants(f.sm);
      u = std::max({u, inv.unitarity_plus, inv.unitarity_minus});
      s = std::max(s, inv.symmetry);
      c = std::max(c, inv.compatibility);
    }
    Outcome o;
    o.pass = u <= 1e-10 && s <= 1e-10 && c <= 1e-10;
    o.detail = fmt2("unitarity %.1e, symmetry %.1e", u, s) + fmt(", compatibility %.1e", c);
    return o;
  });

  criterion(4, "Wronskian n-independence on the gallery", [&] {
    double worst = 0.0;
    for (const auto& e : gallery) {
      if (e.has_matrix) {
        worst = std::max(worst, wronskian_check(jost_solutions(e.J, grid)).n_dependence);
      } else {
        // No matrix given: the recovered basis and the recovered matrix.
        InverseOptions o;
        o.N = 3;
        auto r = reconstruct(e.input, o);
        worst = std::max(worst, wronskian_check(r.basis, r.n_lo, r.J).n_dependence);
      }
    }
    return Outcome{worst <= 1e-9, fmt("max %.1e", worst)};
  });

  criterion(5, "det(2 pi p0 rho) = |s|^2 and the matrix identity", [&] {
    double det = 0.0, mat = 0.0;
    for (const auto& f : outputs) {
      auto rep = density_scattering_consistency(f.J, f.jost, f.sm, INFINITY);
      det = std::max(det, rep.det_relative);
      mat = std::max(mat, rep.matrix_relative);
    }
    return Outcome{det <= 1e-6 && mat <= 1e-6, fmt2("det %.1e, matrix %.1e", det, mat)};
  });

  criterion(6, "kernel product identity, 10 symbols", [&] {
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    bool converged = true;
    for (int i = 0; i < 10; ++i) {
      int deg = 1 + i % 6;
      std::vector<double> c(2 * deg + 1);
      for (auto& x : c) x = uniform(rng);
      auto f = trig_poly(grid, -deg, c);
      auto sp = f * cplx(0.9 / sup_norm(f));
      auto u = uniqueness_defect(ReflectionInput::from_s_plus(sp), {64, 128, 256}, 1e-6);
      worst = std::max({worst, std::abs(u.plus), std::abs(u.minus)});
      converged = converged && u.unique;
    }
    return Outcome{worst <= 1e-6 && converged,
                   fmt("max |defect| %.1e", worst) + (converged ? ", ladder converged" : ", ladder not converged")};
  });

  criterion(7, "example: invertible but not unique", [&] {
    auto ex = example_nonunique(0.5, 0.5, 2, grid);
    double sig = INFINITY;
    Coefficients ap = analyze(ex.input.s_plus), am = analyze(ex.input.s_minus);
    for (int M : {64, 128, 256})
      sig = std::min({sig, min_singular(build_hankel(ap, 0, M)), min_singular(build_hankel(am, 0, M))});
    auto u = uniqueness_defect(ex.input, {64, 128, 256});
    double defect = std::min(u.plus, u.minus);
    InverseOptions o;
    o.N = 3;
    double gap = reconstruct(ex.input, o).J.max_difference(reconstruct_dual(ex.input, o).J);
    Outcome out;
    out.pass = ex.min_abs_s < 1e-3 && sig >= 0.4 && defect > kExampleDefectThreshold &&
               kExampleDefectThreshold >= 1e-3 && gap > 1e-3;
    out.detail = fmt2("min|s| %.1e, min sigma %.3f", ex.min_abs_s, sig) +
                 fmt2(", defect %.4f > %.2f", defect, kExampleDefectThreshold) + fmt(", |J~ - J| %.3f", gap);
    return out;
  });

  criterion(8, "equivalence panel coherence on the gallery", [&] {
    std::string detail;
    bool ok = true;
    for (const auto& e : gallery) {
      PanelReport p = equivalence_panel(e.input, e.has_matrix ? &e.J : nullptr);
      bool expect_good = e.name != "example_nonunique";
      bool good = p.verdict == "A2/unique/invertible";
      bool bad = p.verdict == "not-A2/non-unique";
      ok = ok && p.coherent && (expect_good ? good : bad);
      if (!p.coherent || (expect_good ? !good : !bad)) detail += e.name + ": " + p.verdict + "; ";
    }
    return Outcome{ok, ok ? std::to_string(gallery.size()) + " cases coherent" : detail};
  });

  criterion(9, "P+ star(f t^n) = 0 for n > deg-(f)", [&] {
    std::mt19937_64 rng(99);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      int dneg = 1 + i % 5, dpos = 2 + i % 4;
      std::vector<double> c(dneg + dpos + 1);
      for (auto& x : c) x = uniform(rng);
      auto f = trig_poly(256, -dneg, c);
      for (int n = dneg + 1; n <= dneg + 5; ++n)
        worst = std::max(worst, sup_norm(riesz_project(star(f * trig_poly(256, n, {1.0})))));
    }
    return Outcome{worst <= 1e-14, fmt("max %.1e", worst)};
  });

  criterion(10, "Cauchy identity and transform inequality stability", [&] {
    double id = 0.0;
    auto zetas = default_interior_zetas();
    for (const JacobiOperator& J : {single_site(0.75), random_window(6, 0.3, 8)})
      for (int m : {-1, 0, 2}) id = std::max(id, cauchy_identity_check(J, {{m, 1.0}}, zetas).residual);
    double drift = 0.0;
    for (const auto& e : gallery) {
      if (!e.has_matrix) continue;
      JacobiOperator J = e.J;
      ThetaDensity rho = [J](double th) { return density_at(J, th); };
      double a = transform_inequality_estimate(rho, 6, 17, 512).C;
      double b = transform_inequality_estimate(rho, 6, 17, 1024).C;
      drift = std::max(drift, std::abs(b / a - 1.0));
    }
    return Outcome{id <= 1e-6 && drift <= 0.05, fmt2("identity %.1e, ratio drift %.1e", id, drift)};
  });

  criterion(11, "A2 unit checks", [&] {
    auto t0 = Clock::now();
    auto scalar = [](std::function<double(double)> w) {
      return [w](double x) {
        Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
        m(0, 0) = w(x);
        return m;
      };
    };
    double qi = q2e([](double) { return Eigen::Matrix2d::Identity().eval(); }, 2).Q;
    auto half = q2e(scalar([](double x) { return std::sqrt(std::abs(x)); }), 1);
    auto sq = q2e(scalar([](double x) { return x * x; }), 1);
    const auto& t = sq.level_trend;
    double growth = t.back() / t[t.size() - 4];

    std::mt19937_64 rng(5);
    int holds = 0, tested = 0;
    for (int w = 0; w < 20; ++w) {
      int pieces = 3 + w % 6;
      std::vector<Eigen::Matrix2d> vals(pieces), cells(512);
      for (auto& v : vals) {
        Eigen::Matrix2d A;
        A << uniform(rng), uniform(rng), uniform(rng), uniform(rng);
        v = A * A.transpose() + 0.05 * Eigen::Matrix2d::Identity();
      }
      for (int i = 0; i < 512; ++i) cells[i] = vals[i * pieces / 512];
      auto W = MatrixWeight::from_cells(cells, 2, -2.0, 2.0);
      double Q = q2e(W, 7).Q;
      for (int k = 0; k < 10; ++k) {
        double center = -1.5 + 1.5 * (1.0 + uniform(rng));
        double delta = 0.05 + 0.15 * (1.0 + uniform(rng));
        auto d = doubling_check(W, center, delta, 2.0, Q);
        if (!d.premise) continue;
        ++tested;
        holds += d.holds;
      }
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    Outcome o;
    o.pass = std::abs(qi - 1.0) <= 1e-12 && !half.divergent && sq.divergent && growth >= 1.5 &&
             tested > 0 && holds == tested && secs < 60.0;
    o.detail = fmt2("Q(I) %.12f, |x|^1/2 Q %.4f", qi, half.Q) + fmt(", x^2 growth %.2f", growth) +
               ", doubling " + std::to_string(holds) + "/" + std::to_string(tested);
    return o;
  });

  std::printf("%s: %d of 11 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
