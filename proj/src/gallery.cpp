#include "jscat/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "jscat/forward.hpp"

namespace jscat {

namespace {

// Uniform in [-1, 1) from the top 53 bits, identical on every platform.
double symmetric_unit(std::mt19937_64& rng) {
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

}  // namespace

JacobiOperator free_matrix() { return JacobiOperator::free(); }

JacobiOperator single_site(double c) {
  if (!(c > 0.0)) throw ValidationError("p must be positive (index 0)");
  return JacobiOperator(0, {c}, {0.0});
}

JacobiOperator random_window(int width, double magnitude, std::uint64_t seed, int max_tries) {
  if (width < 1) throw ValidationError("window width must be positive");
  if (!(magnitude >= 0.0 && magnitude < 1.0)) throw ValidationError("magnitude must lie in [0, 1)");
  std::mt19937_64 rng(seed);
  const int n_min = -(width / 2);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    std::vector<double> p(width), q(width);
    for (int i = 0; i < width; ++i) {
      p[i] = 1.0 + magnitude * symmetric_unit(rng);
      q[i] = magnitude * symmetric_unit(rng);
    }
    JacobiOperator J(n_min, p, q);
    if (off_interval_eigenvalues(J).empty()) return J;
  }
  throw Error("no window without off-interval eigenvalues after " + std::to_string(max_tries) +
              " draws");
}

ReflectionInput bernstein_szego(const std::vector<double>& a, int grid) {
  if (a.empty()) throw ValidationError("empty polynomial");
  CircleFunction A = CircleFunction::from(grid, [&](cplx t) {
    cplx acc = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * t + *it;
    return acc;
  });
  CircleFunction w(grid);
  for (int j = 0; j < grid; ++j) w[j] = std::sqrt(1.0 + std::norm(A[j]));
  OuterFunction P = outer_from_modulus(w);
  CircleFunction Ab = A.reflected();
  CircleFunction sp(grid), s(grid), sm(grid);
  for (int j = 0; j < grid; ++j) {
    s[j] = 1.0 / P.boundary[j];
    sp[j] = Ab[j] / P.boundary[j];
    sm[j] = -A[j] / P.boundary[j];
  }
  ReflectionInput in = ReflectionInput::from_triple(sp, s, sm);
  in.s_at_zero = 1.0 / P.value_at_zero;
  return in;
}

cplx example_s(double ap, double am, int d, cplx t) {
  double up = std::sqrt(1.0 - ap * ap), um = std::sqrt(1.0 - am * am);
  cplx delta = std::pow(t, d), vp = ap * t, vm = am * t;
  return up * um * (1.0 - delta) / 2.0 / (1.0 - (vp + vm) * (1.0 + delta) / 2.0 + vp * vm * delta);
}

ExampleData example_nonunique(double ap, double am, int d, int grid) {
  if (!(ap > 0.0 && ap < 1.0 && am > 0.0 && am < 1.0))
    throw ValidationError("example parameters must lie in (0, 1)");
  if (d < 2) throw ValidationError("degree of Delta must be at least 2");
  const double up = std::sqrt(1.0 - ap * ap), um = std::sqrt(1.0 - am * am);
  const auto& g = grid_of(grid);
  CircleFunction sp(grid), s(grid), sm(grid);
  ExampleData ex;
  for (int j = 0; j < grid; ++j) {
    cplx t = g.point(j);
    cplx delta = std::pow(t, d);
    Eigen::Matrix2cd E, U, V, S0;
    E << (1.0 + delta) / 2.0, (1.0 - delta) / 2.0, (1.0 - delta) / 2.0, (1.0 + delta) / 2.0;
    U << um, 0.0, 0.0, up;
    V << am * t, 0.0, 0.0, ap * t;
    S0 << -am * std::conj(t), 0.0, 0.0, -ap * std::conj(t);
    Eigen::Matrix2cd S = S0 + U * E * (Eigen::Matrix2cd::Identity() - V * E).inverse() * U;
    sm[j] = S(0, 0);
    s[j] = 0.5 * (S(0, 1) + S(1, 0));
    sp[j] = S(1, 1);
    ex.closed_form_residual =
        std::max(ex.closed_form_residual, std::abs(s[j] - example_s(ap, am, d, t)));
  }
  // Exact real symmetry on the grid.
  sp = symmetrized(sp);
  sm = symmetrized(sm);
  s = symmetrized(s);
  ex.input = ReflectionInput::from_triple(sp, s, sm);
  ex.input.s_at_zero = up * um / 2.0;
  ex.a_plus = ap;
  ex.a_minus = am;
  ex.delta_degree = d;
  ex.min_abs_s = INFINITY;
  for (int j = 0; j < grid; ++j) ex.min_abs_s = std::min(ex.min_abs_s, std::abs(s[j]));
  return ex;
}

bool resolved_on_grid(const JacobiOperator& J, int grid, double tol) {
  ScatteringMatrix sm = extract_scattering(jost_solutions(J, grid));
  Coefficients a = analyze(sm.s_plus);
  double tail = 0.0;
  for (int k = grid / 4; k <= a.kmax(); ++k)
    tail = std::max({tail, std::abs(a(k)), std::abs(a(-k))});
  return tail <= tol;
}

std::vector<GalleryEntry> standard_gallery(int grid, std::uint64_t seed) {
  std::vector<GalleryEntry> out;
  auto add_matrix = [&](std::string name, const JacobiOperator& J) {
    GalleryEntry e;
    e.name = std::move(name);
    e.has_matrix = true;
    e.J = J;
    e.input = ReflectionInput::from_scattering(extract_scattering(jost_solutions(J, grid)));
    out.push_back(std::move(e));
  };
  add_matrix("free", free_matrix());
  for (double c : {0.5, 0.75, 0.9}) add_matrix("single_site(" + std::to_string(c).substr(0, 4) + ")", single_site(c));
  const int widths[3] = {4, 6, 8};
  for (int i = 0; i < 3; ++i) {
    // Windows with a near-threshold resonance have scattering data that the
    // grid cannot resolve; draw again until the data are resolved.
    std::uint64_t sd = seed + i;
    JacobiOperator J = random_window(widths[i], 0.3, sd);
    while (!resolved_on_grid(J, grid)) {
      sd += 1000;
      J = random_window(widths[i], 0.3, sd);
    }
    add_matrix("random_window(" + std::to_string(widths[i]) + ")", J);
  }
  GalleryEntry bs;
  bs.name = "bernstein_szego";
  bs.input = bernstein_szego({0.3, 0.5, -0.2}, grid);
  out.push_back(std::move(bs));
  GalleryEntry ex;
  ex.name = "example_nonunique";
  ex.input = example_nonunique(0.5, 0.5, 2, grid).input;
  out.push_back(std::move(ex));
  return out;
}

}  // namespace jscat
