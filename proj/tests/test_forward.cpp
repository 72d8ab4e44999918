#include <doctest.h>

#include <cmath>

#include "jscat/forward.hpp"
#include "jscat/gallery.hpp"
#include "support.hpp"

using namespace jscat;

namespace {

struct Forward {
  JostFamily jost;
  ScatteringMatrix sm;
};

Forward run(const JacobiOperator& J, int grid = 1024) {
  Forward f;
  f.jost = jost_solutions(J, grid);
  f.sm = extract_scattering(f.jost);
  return f;
}

std::vector<JacobiOperator> sample_ops() {
  std::vector<JacobiOperator> ops{single_site(0.5), single_site(0.9), JacobiOperator(-1, {0.9, 0.8}, {0.0, 0.0})};
  for (std::uint64_t seed = 0; seed < 6; ++seed) ops.push_back(random_window(1 + seed, 0.3, seed));
  return ops;
}

}  // namespace

TEST_CASE("free Jost solutions are monomials and S is the identity swap") {
  auto f = run(free_matrix(), 256);
  const auto& g = grid_of(256);
  for (int n = f.jost.n_lo(); n <= f.jost.n_hi(); ++n) {
    auto tn = CircleFunction::from(256, [n](cplx t) { return std::pow(t, n); });
    CHECK(sup_norm(f.jost.e_plus(n) - tn) < 1e-13);
    CHECK(sup_norm(f.jost.e_minus(n) - tn) < 1e-13);
  }
  CHECK(sup_norm(f.sm.s - CircleFunction(256, 1.0)) < 1e-13);
  CHECK(sup_norm(f.sm.s_plus) < 1e-13);
  CHECK(sup_norm(f.sm.s_minus) < 1e-13);
  CHECK(f.sm.s_at_zero == doctest::Approx(1.0));
  // Jump relation with S = [[0, 1], [1, 0]] and free Phi.
  CHECK(jump_relation_residual(f.jost, f.sm) < 1e-13);
  (void)g;
}

TEST_CASE("single site p0 = c against the two-step closed form") {
  // e+(0) = 1, e+(-1) = 1 / (c t), e+(-2) = z / (c t) - c. Matching
  // (1/s) t^n + (s-/s) t^{-n-1} at n = -1, -2 gives
  //   s = c (1 - t^2) / (1 - c^2 t^2), s- = (c^2 - 1) t / (1 - c^2 t^2).
  for (double c : {0.6, 0.9}) {
    auto f = run(single_site(c), 512);
    const auto& g = grid_of(512);
    double es = 0.0, esm = 0.0, ee = 0.0;
    for (int j = 0; j < 512; ++j) {
      cplx t = g.point(j);
      cplx den = 1.0 - c * c * t * t;
      es = std::max(es, std::abs(f.sm.s[j] - c * (1.0 - t * t) / den));
      esm = std::max(esm, std::abs(f.sm.s_minus[j] - (c * c - 1.0) * t / den));
      ee = std::max(ee, std::abs(f.jost.e_plus(-1)[j] - 1.0 / (c * t)));
      ee = std::max(ee, std::abs(f.jost.e_plus(-2)[j] - (joukowski(t) / (c * t) - c)));
    }
    CHECK(es < 1e-12);
    CHECK(esm < 1e-12);
    CHECK(ee < 1e-12);
    CHECK(f.sm.s_at_zero == doctest::Approx(c).epsilon(1e-12));
    CHECK(scattering_invariants(f.sm).max() < 1e-10);
  }
}

TEST_CASE("a single-site potential binds a state and is rejected") {
  JacobiOperator J(0, {1.0}, {0.7});
  CHECK_THROWS_AS(jost_solutions(J, 256), OffIntervalSpectrum);
}

TEST_CASE("jost_at matches the grid family") {
  JacobiOperator J = random_window(5, 0.3, 3);
  auto f = run(J, 128);
  const auto& g = grid_of(128);
  for (int j : {3, 40, 101}) {
    JostPoint p = jost_at(J, g.point(j));
    for (int n = p.n_lo; n <= p.n_hi; ++n) {
      CHECK(p.e_plus(n) == f.jost.e_plus(n)[j]);
      CHECK(p.e_minus(n) == f.jost.e_minus(n)[j]);
    }
  }
}

TEST_CASE("free regions and mirrored indexing") {
  JacobiOperator J = random_window(6, 0.3, 8);
  auto f = run(J, 256);
  for (int n = J.support_hi() + 1; n <= f.jost.n_hi(); ++n) {
    auto tn = CircleFunction::from(256, [n](cplx t) { return std::pow(t, n); });
    CHECK(sup_norm(f.jost.e_plus(n) - tn) < 1e-13);
  }
  // e-(n) = f(-n-1) is free while -n-1 <= support_lo - 1... i.e. n >= -support_lo.
  for (int n = -J.support_lo(); n <= f.jost.n_hi(); ++n) {
    auto tn = CircleFunction::from(256, [n](cplx t) { return std::pow(t, n); });
    CHECK(sup_norm(f.jost.e_minus(n) - tn) < 1e-13);
  }
}

TEST_CASE("recurrence, invariants and residual identities") {
  for (const auto& J : sample_ops()) {
    auto f = run(J);
    CHECK(recurrence_residual(f.jost) < 1e-12);
    auto inv = scattering_invariants(f.sm);
    CHECK(inv.unitarity_plus <= 1e-10);
    CHECK(inv.unitarity_minus <= 1e-10);
    CHECK(inv.symmetry <= 1e-10);
    CHECK(inv.compatibility <= 1e-10);
    CHECK(f.sm.s_at_zero > 0.0);
    auto w = wronskian_check(f.jost);
    CHECK(w.n_dependence <= 1e-9);
    CHECK(w.vs_zprime <= 1e-9);
    CHECK(jump_relation_residual(f.jost, f.sm) < 1e-9);
    CHECK(duality_residual(f.jost, f.sm) < 1e-9);
    CHECK(asymptotics_residual(f.jost, f.sm) < 1e-10);
    CHECK(transmission_formula_residual(f.jost, f.sm) < 1e-9);
    CHECK(f.sm.cross_check_s < 1e-9);
    CHECK(f.sm.cross_check_s_plus < 1e-9);
  }
}

TEST_CASE("Jost data conjugation symmetry") {
  JacobiOperator J = random_window(4, 0.3, 1);
  auto f = run(J, 128);
  for (int n = f.jost.n_lo(); n <= f.jost.n_hi(); ++n) {
    CHECK(symmetry_defect(f.jost.e_plus(n)) < 1e-12);
    CHECK(symmetry_defect(f.jost.e_minus(n)) < 1e-12);
  }
}

// Resonances near the circle slow the coefficient decay of s; 1024 nodes
// alias at the 1e-4 level for some windows, 16384 resolve all of them.
TEST_CASE("s is the outer function with modulus sqrt(1 - |s+|^2)") {
  for (const auto& J : sample_ops()) {
    auto f = run(J, 16384);
    CHECK(scattering_invariants(f.sm).negative_mass <= 1e-10);
    const int N = f.sm.s.size();
    CircleFunction w(N);
    for (int j = 0; j < N; ++j) w[j] = std::sqrt(std::max(0.0, 1.0 - std::norm(f.sm.s_plus[j])));
    auto o = outer_from_modulus(w);
    CHECK(sup_norm(o.boundary - f.sm.s) < 1e-8);
  }
}

TEST_CASE("product identity s(0) e+(0, 0) (t e-)(-1, 0) = 1") {
  for (const auto& J : sample_ops()) {
    auto f = run(J, 16384);
    auto a = analyze(f.jost.e_plus(0));
    auto t = CircleFunction::from(f.sm.s.size(), [](cplx x) { return x; });
    auto b = analyze(t * f.jost.e_minus(-1));
    double neg = 0.0;
    for (int k = a.kmin(); k < 0; ++k) neg = std::max({neg, std::abs(a(k)), std::abs(b(k))});
    CHECK(neg < 1e-12);
    CHECK(std::abs(f.sm.s_at_zero * a(0) * b(0) - 1.0) < 1e-7);
  }
}

TEST_CASE("nonzero windows are not reflectionless") {
  for (std::uint64_t seed = 20; seed < 30; ++seed) {
    JacobiOperator J = random_window(1 + seed % 6, 0.3, seed);
    if (J.max_difference(free_matrix()) < 1e-12) continue;
    CHECK(sup_norm(run(J, 512).sm.s_plus) > 1e-10);
  }
}

TEST_CASE("density and scattering data agree") {
  SUBCASE("free: both sides equal one") {
    auto f = run(free_matrix());
    auto rep = density_scattering_consistency(free_matrix(), f.jost, f.sm);
    for (const auto& r : rep.table) {
      CHECK(r.det_lhs == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(r.det_rhs == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  SUBCASE("sample operators") {
    for (const auto& J : sample_ops()) {
      auto f = run(J);
      auto rep = density_scattering_consistency(J, f.jost, f.sm);
      CHECK(rep.det_relative <= 1e-6);
      CHECK(rep.matrix_relative <= 1e-6);
      CHECK(rep.matrix_imag <= 1e-6);
    }
  }
  SUBCASE("one percent error in p0 is caught") {
    JacobiOperator J = random_window(4, 0.3, 5);
    auto f = run(J);
    std::vector<double> p, q;
    for (int n = J.support_lo(); n <= J.support_hi(); ++n) {
      p.push_back(n == 0 ? 1.01 * J.p(0) : J.p(n));
      q.push_back(J.q(n));
    }
    JacobiOperator bad(J.support_lo(), p, q);
    CHECK_THROWS_AS(density_scattering_consistency(bad, f.jost, f.sm), ConsistencyFailure);
  }
}

TEST_CASE("off-interval spectrum is rejected") {
  CHECK_THROWS_AS(jost_solutions(JacobiOperator(0, {1.0}, {2.5}), 256), OffIntervalSpectrum);
  CHECK_THROWS_AS(jost_solutions(single_site(1.6), 256), OffIntervalSpectrum);
}
