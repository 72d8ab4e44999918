#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "jscat/diagnostics.hpp"
#include "jscat/gallery.hpp"
#include "support.hpp"

using namespace jscat;

namespace {

cplx log_ratio(cplx z) { return std::log((z + 2.0) / (z - 2.0)); }

Eigen::Matrix2d scalar_matrix(double v) {
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  m(0, 0) = v;
  return m;
}

Eigen::Matrix2d random_psd(std::mt19937_64& rng, double floor) {
  Eigen::Matrix2d A;
  A << testing::uniform(rng), testing::uniform(rng), testing::uniform(rng), testing::uniform(rng);
  return A * A.transpose() + floor * Eigen::Matrix2d::Identity();
}

// Piecewise-constant psd weight on [-2, 2] with a few random pieces.
MatrixWeight random_piecewise(std::mt19937_64& rng, int pieces, int cells) {
  std::vector<Eigen::Matrix2d> vals(pieces);
  for (auto& v : vals) v = random_psd(rng, 0.05);
  std::vector<Eigen::Matrix2d> c(cells);
  for (int i = 0; i < cells; ++i) c[i] = vals[i * pieces / cells];
  return MatrixWeight::from_cells(c, 2, -2.0, 2.0);
}

}  // namespace

TEST_CASE("frak h of the constant function") {
  ScalarFn one = [](double) { return cplx(1.0); };
  // Midpoint rule in theta: second order, the error drops fourfold per doubling.
  for (cplx z : {cplx(3.0, 0.0), cplx(1.0, 1.0), cplx(-0.5, -0.8), cplx(0.0, 2.5)}) {
    double e1 = std::abs(frak_h(one, z, 2048) - log_ratio(z));
    double e2 = std::abs(frak_h(one, z, 4096) - log_ratio(z));
    CHECK(e1 < 1e-6);
    CHECK(e2 < e1 / 3.5);
  }
}

TEST_CASE("frak h linearity and conjugation symmetry") {
  ScalarFn a = [](double x) { return cplx(std::cos(x)); };
  ScalarFn b = [](double x) { return cplx(x * x - 0.3); };
  ScalarFn ab = [&](double x) { return 2.0 * a(x) - 0.5 * b(x); };
  for (cplx z : {cplx(0.4, 0.7), cplx(-1.0, -0.3)}) {
    CHECK(std::abs(frak_h(ab, z) - (2.0 * frak_h(a, z) - 0.5 * frak_h(b, z))) < 1e-13);
    CHECK(std::abs(frak_h(a, std::conj(z)) - std::conj(frak_h(a, z))) < 1e-13);
  }
}

TEST_CASE("frak h boundary values") {
  ScalarFn one = [](double) { return cplx(1.0); };
  ScalarFn sq = [](double x) { return cplx(x * x); };
  for (double x : {-1.3, 0.17, 1.6}) {
    // h1(x - i0) = log((x + 2) / (2 - x)) + i pi
    cplx below = frak_h_boundary(one, x, Approach::below);
    CHECK(std::abs(below - cplx(std::log((x + 2) / (2 - x)), pi)) < 1e-8);
    // int y^2 / (z - y) dy = -4 z + z^2 log((z + 2) / (z - 2))
    cplx expect = -4.0 * x + x * x * cplx(std::log((x + 2) / (2 - x)), -pi);
    CHECK(std::abs(frak_h_boundary(sq, x, Approach::above) - expect) < 1e-6);
    // jump
    cplx jump = frak_h_boundary(sq, x, Approach::below) - frak_h_boundary(sq, x, Approach::above);
    CHECK(std::abs(jump - cplx(0.0, 2 * pi * x * x)) < 1e-12);
  }
  // agreement with the interior transform close to the boundary
  ScalarFn g = [](double x) { return cplx(std::exp(-x * x)); };
  cplx lim = frak_h(g, cplx(0.5, -1e-3), 8192);
  CHECK(std::abs(lim - frak_h_boundary(g, 0.5, Approach::below)) < 1e-2);
}

TEST_CASE("Cauchy transform identity") {
  auto zetas = default_interior_zetas();
  SUBCASE("free matrix, f = e0") {
    CHECK(cauchy_identity_check(free_matrix(), {{0, 1.0}}, zetas).residual < 1e-8);
  }
  SUBCASE("random window, f = e_{-1}") {
    CHECK(cauchy_identity_check(random_window(5, 0.3, 3), {{-1, 1.0}}, zetas).residual < 1e-6);
  }
  SUBCASE("combinations") {
    auto J = random_window(6, 0.3, 1);
    CHECK(cauchy_identity_check(J, {{-1, 0.5}, {0, -1.0}, {2, 0.25}}, zetas).residual < 1e-6);
  }
}

TEST_CASE("transform inequality ratio") {
  ThetaDensity free_rho = [](double th) { return density_at(free_matrix(), th); };
  Bump b;
  b.center = 0.3;
  b.width = 0.4;
  b.xi << cplx(1.0, 0.2), cplx(-0.4, 0.5);
  double r = transform_inequality_ratio(free_rho, b, 1024);
  SUBCASE("homogeneous of degree zero") {
    Bump c = b;
    c.xi *= cplx(3.0, -2.0);
    CHECK(transform_inequality_ratio(free_rho, c, 1024) == doctest::Approx(r).epsilon(1e-12));
  }
  SUBCASE("stable under refinement") {
    CHECK(std::isfinite(r));
    CHECK(transform_inequality_ratio(free_rho, b, 2048) == doctest::Approx(r).epsilon(0.05));
    auto est = transform_inequality_estimate(free_rho, 6, 5, 512);
    auto fine = transform_inequality_estimate(free_rho, 6, 5, 1024);
    CHECK(fine.C == doctest::Approx(est.C).epsilon(0.05));
  }
  SUBCASE("identity weight") {
    ThetaDensity id = [](double) { return Eigen::Matrix2d::Identity().eval(); };
    double a = transform_inequality_ratio(id, b, 1024), c = transform_inequality_ratio(id, b, 2048);
    CHECK(c == doctest::Approx(a).epsilon(0.05));
  }
}

TEST_CASE("A2 quotient of the identity and of |x|^(1/2)") {
  auto I = MatrixWeight::sample([](double) { return Eigen::Matrix2d::Identity().eval(); }, 2, 256);
  for (double x : {-1.0, 0.0, 0.7})
    for (double d : {0.5, 0.125}) CHECK(a2_quotient(I, x, d) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a2_quotient(I, 1.9, 0.5) <= 1.0 + 1e-12);
  CHECK(q2e(I, 6).Q == doctest::Approx(1.0).epsilon(1e-12));

  // <|x|^(1/2)> = (2/3) d^(1/2), <|x|^(-1/2)> = 2 d^(-1/2) on (-d, d).
  auto W = MatrixWeight::scalar([](double x) { return std::sqrt(std::abs(x)); }, 1 << 16);
  for (double d : {0.5, 0.25, 0.0625})
    CHECK(a2_quotient(W, 0.0, d) == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(0.02));
  CHECK_THROWS_AS(a2_quotient(W, 5.0, 0.5), EmptyIntersection);
}

TEST_CASE("q2e trends") {
  A2Options opt;
  opt.levels = 8;
  auto id = q2e([](double) { return Eigen::Matrix2d::Identity().eval(); }, 2, opt);
  CHECK(id.Q == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(id.divergent);

  auto half = q2e([](double x) { return scalar_matrix(std::sqrt(std::abs(x))); }, 1, opt);
  CHECK_FALSE(half.divergent);
  CHECK(half.Q < 1.5);

  auto sq = q2e([](double x) { return scalar_matrix(x * x); }, 1, opt);
  CHECK(sq.divergent);
  const auto& t = sq.level_trend;
  CHECK(t.back() >= 1.5 * t[t.size() - 4]);

  // Singularity on a cell boundary at every level.
  const double x0 = 0.375;
  auto diag = q2e(
      [x0](double x) {
        double w = std::sqrt(std::abs(x - x0));
        Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
        m(0, 0) = w;
        m(1, 1) = 1.0 / w;
        return m;
      },
      2, opt);
  CHECK_FALSE(diag.divergent);
  CHECK(diag.level_trend.back() <= 1.05 * diag.level_trend[diag.level_trend.size() - 4]);
}

TEST_CASE("A2 quotient is at least one and monotone under pinching") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const int cells = 256;
    std::vector<Eigen::Matrix2d> w1(cells), w2(cells);
    const double c = 1.5 + trial * 0.2;
    for (int i = 0; i < cells; ++i) {
      w1[i] = random_psd(rng, 0.01);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(w1[i]);
      double lmin = es.eigenvalues()(0);
      Eigen::Vector2d u(testing::uniform(rng), testing::uniform(rng));
      u.normalize();
      double a = 0.5 * (1.0 + testing::uniform(rng));
      // W1 <= W2 <= c W1
      w2[i] = w1[i] * (1.0 + a * (c - 1.0) * 0.5) + 0.5 * (c - 1.0) * lmin * u * u.transpose();
    }
    auto W1 = MatrixWeight::from_cells(w1, 2, -2.0, 2.0);
    auto W2 = MatrixWeight::from_cells(w2, 2, -2.0, 2.0);
    auto q1 = q2e(W1, 5), q2 = q2e(W2, 5);
    CHECK(q1.Q >= 1.0 - 1e-10);
    CHECK(q2.Q >= 1.0 - 1e-10);
    CHECK(q2.Q <= c * q1.Q + 1e-12);
    for (const auto& row : q1.table) CHECK(std::isfinite(row.value));
  }
}

TEST_CASE("weighted projection norm") {
  auto id = weighted_projection_norm([](double) { return Eigen::Matrix2d::Identity().eval(); }, 2, 4.0, 512);
  CHECK(id.value <= 1.0 + 1e-6);
  auto half = [](int n) {
    return weighted_projection_norm([](double x) { return scalar_matrix(std::sqrt(std::abs(x))); }, 1, 4.0, n)
        .value;
  };
  double h1 = half(1024), h2 = half(2048);
  CHECK(h2 == doctest::Approx(h1).epsilon(0.05));
  auto sq = [](int n) {
    return weighted_projection_norm([](double x) { return scalar_matrix(x * x); }, 1, 4.0, n).value;
  };
  double s1 = sq(512), s2 = sq(1024), s4 = sq(4096);
  CHECK(s2 > s1);
  CHECK(s4 >= 2.0 * s1);
}

TEST_CASE("doubling inequality") {
  auto I = MatrixWeight::sample([](double) { return Eigen::Matrix2d::Identity().eval(); }, 2, 256);
  auto r = doubling_check(I, 0.0, 0.5, 2.0, 1.0);
  CHECK(r.premise);
  CHECK(r.holds);
  CHECK(r.factor == doctest::Approx(1.25));

  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    auto W = random_piecewise(rng, 3 + trial % 6, 512);
    double Q = q2e(W, 7).Q;
    for (int k = 0; k < 10; ++k) {
      double center = -1.5 + 3.0 * (0.5 + 0.5 * testing::uniform(rng));
      double delta = 0.05 + 0.3 * (0.5 + 0.5 * testing::uniform(rng));
      auto d = doubling_check(W, center, delta, 2.0, Q);
      if (d.premise) CHECK(d.holds);
    }
  }
}

TEST_CASE("Poisson average bound") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    auto W = random_piecewise(rng, 4, 512);
    double Q = q2e(W, 7).Q;
    for (double center : {-1.0, 0.2, 1.4}) {
      auto p = poisson_check(W, center, 0.2, Q);
      CHECK(p.holds);
      CHECK(p.C > 1.0);
    }
  }
}

TEST_CASE("equivalence panel on the free matrix and the example") {
  PanelOptions opt;
  opt.a2.levels = 8;
  auto free_in = ReflectionInput::from_s_plus(CircleFunction(1024));
  JacobiOperator J0 = free_matrix();
  auto f = equivalence_panel(free_in, &J0, opt);
  CHECK(f.coherent);
  CHECK(f.a2_finite);
  CHECK(f.unique);
  CHECK(f.invertible);
  CHECK(f.verdict == "A2/unique/invertible");

  auto ex = example_nonunique(0.5, 0.5, 2, 1024);
  PanelOptions eo;
  auto e = equivalence_panel(ex.input, nullptr, eo);
  CHECK(e.coherent);
  CHECK_FALSE(e.a2_finite);
  CHECK_FALSE(e.unique);
  CHECK(e.invertible);
  CHECK(e.verdict == "not-A2/non-unique");
}
