#include "jscat/forward.hpp"

#include <algorithm>
#include <cmath>

namespace jscat {

JostRange jost_range(const JacobiOperator& J, int margin) {
  int r = std::max(J.support_hi(), -J.support_lo() - 1) + margin;
  return {-r - 1, r};
}

namespace {

// e+(n) for n in [lo, hi] by backward recurrence, and f(m) for m in [lo, hi]
// by forward recurrence; hi = -lo - 1 so that e-(n) = f(-n-1) covers [lo, hi].
void fill_jost(const JacobiOperator& J, cplx zeta, int lo, int hi, std::vector<cplx>& ep,
               std::vector<cplx>& f) {
  const cplx z = joukowski(zeta);
  const int m = hi - lo + 1;
  ep.assign(m, 0.0);
  f.assign(m, 0.0);
  ep[m - 1] = std::pow(zeta, hi);
  ep[m - 2] = std::pow(zeta, hi - 1);
  for (int n = hi - 1; n > lo; --n) {
    int i = n - lo;
    ep[i - 1] = ((z - J.q(n)) * ep[i] - J.p(n + 1) * ep[i + 1]) / J.p(n);
  }
  f[0] = std::pow(zeta, -lo - 1);
  f[1] = std::pow(zeta, -lo - 2);
  for (int k = lo + 1; k < hi; ++k) {
    int i = k - lo;
    f[i + 1] = ((z - J.q(k)) * f[i] - J.p(k) * f[i - 1]) / J.p(k + 1);
  }
}

void require_no_bound_states(const JacobiOperator& J) {
  auto eig = off_interval_eigenvalues(J);
  if (!eig.empty()) {
    std::string msg = "eigenvalues outside [-2,2]:";
    for (double e : eig) msg += " " + std::to_string(e);
    throw OffIntervalSpectrum(msg, eig);
  }
}

// f(0) from three symmetric neighbour pairs, exact for even sextics.
cplx even_fill(const CircleFunction& f, int j) {
  const int n = f.size();
  auto pair = [&](int k) { return 0.5 * (f[(j + k) % n] + f[(j - k + n) % n]); };
  return 1.5 * pair(1) - 0.6 * pair(2) + 0.1 * pair(3);
}

}  // namespace

JostPoint jost_at(const JacobiOperator& J, cplx zeta, int margin) {
  auto r = jost_range(J, margin);
  JostPoint out;
  out.n_lo = r.lo;
  out.n_hi = r.hi;
  std::vector<cplx> f;
  fill_jost(J, zeta, r.lo, r.hi, out.plus, f);
  const int m = r.hi - r.lo + 1;
  out.minus.resize(m);
  for (int n = r.lo; n <= r.hi; ++n) out.minus[n - r.lo] = f[(-n - 1) - r.lo];
  return out;
}

JostFamily::JostFamily(JacobiOperator J, int n_lo, int n_hi, std::vector<CircleFunction> plus,
                       std::vector<CircleFunction> minus)
    : J_(std::move(J)), n_lo_(n_lo), n_hi_(n_hi), plus_(std::move(plus)), minus_(std::move(minus)) {}

JostFamily jost_solutions(const JacobiOperator& J, int grid_size, int margin) {
  require_no_bound_states(J);
  const auto& grid = grid_of(grid_size);
  auto r = jost_range(J, margin);
  const int m = r.hi - r.lo + 1;
  std::vector<CircleFunction> plus(m, CircleFunction(grid_size)), minus(m, CircleFunction(grid_size));
  std::vector<cplx> ep, f;
  for (int j = 0; j < grid_size; ++j) {
    fill_jost(J, grid.point(j), r.lo, r.hi, ep, f);
    for (int i = 0; i < m; ++i) {
      plus[i][j] = ep[i];
      int n = r.lo + i;
      minus[i][j] = f[(-n - 1) - r.lo];
    }
  }
  return JostFamily(J, r.lo, r.hi, std::move(plus), std::move(minus));
}

double recurrence_residual(const JostFamily& jost) {
  const auto& J = jost.op();
  const auto& grid = grid_of(jost.grid_size());
  double worst = 0.0;
  for (int n = jost.n_lo() + 1; n < jost.n_hi(); ++n) {
    const auto &a = jost.e_plus(n - 1), &b = jost.e_plus(n), &c = jost.e_plus(n + 1);
    // e-(n) = f(-n-1): the recurrence of J at index k = -n-1 links
    // f(k-1) = e-(n+1), f(k) = e-(n), f(k+1) = e-(n-1).
    const auto &fa = jost.e_minus(n + 1), &fb = jost.e_minus(n), &fc = jost.e_minus(n - 1);
    int k = -n - 1;
    for (int j = 0; j < grid.size(); ++j) {
      cplx z = joukowski(grid.point(j));
      cplx r1 = z * b[j] - (J.p(n) * a[j] + J.q(n) * b[j] + J.p(n + 1) * c[j]);
      cplx r2 = z * fb[j] - (J.p(k) * fa[j] + J.q(k) * fb[j] + J.p(k + 1) * fc[j]);
      double scale = 1.0 + std::abs(b[j]) + std::abs(fb[j]);
      worst = std::max(worst, std::max(std::abs(r1), std::abs(r2)) / scale);
    }
  }
  return worst;
}

ScatteringMatrix extract_scattering(const JostFamily& jost) {
  const int N = jost.grid_size();
  const auto& grid = grid_of(N);
  const int n = jost.n_lo();
  const int m = jost.n_hi() - 1;
  // e-(n) = f(-n-1), so f(m) = e-(-m-1).
  const auto& e0 = jost.e_plus(n);
  const auto& e1 = jost.e_plus(n + 1);
  const auto& f0 = jost.e_minus(-m - 1);
  const auto& f1 = jost.e_minus(-m - 2);

  ScatteringMatrix sm;
  sm.s = CircleFunction(N);
  sm.s_plus = CircleFunction(N);
  sm.s_minus = CircleFunction(N);
  CircleFunction s_right(N), sp_right(N);
  std::vector<cplx> w_left(N), w_right(N);
  double wl_max = 0.0, wr_max = 0.0;
  for (int j = 0; j < N; ++j) {
    cplx t = grid.point(j);
    cplx wuv = 1.0 / (t * t) - 1.0;
    // Left: e+ = (1/s) t^n + (s-/s) t^{-n-1}.
    cplx u0 = std::pow(t, n), u1 = std::pow(t, n + 1);
    cplx v0 = std::pow(t, -n - 1), v1 = std::pow(t, -n - 2);
    cplx wev = e0[j] * v1 - e1[j] * v0;
    cplx wue = u0 * e1[j] - u1 * e0[j];
    w_left[j] = wev;
    wl_max = std::max(wl_max, std::abs(wev));
    sm.s[j] = wuv / wev;
    sm.s_minus[j] = wue / wev;
    // Right: f = (1/s) t^{-m-1} + (s+/s) t^m.
    cplx a0 = std::pow(t, -m - 1), a1 = std::pow(t, -m - 2);
    cplx b0 = std::pow(t, m), b1 = std::pow(t, m + 1);
    cplx wuv_r = a0 * b1 - a1 * b0;
    cplx wfv = f0[j] * b1 - f1[j] * b0;
    cplx wuf = a0 * f1[j] - a1 * f0[j];
    w_right[j] = wfv;
    wr_max = std::max(wr_max, std::abs(wfv));
    s_right[j] = wuv_r / wfv;
    sp_right[j] = wuf / wfv;
  }

  for (int j : {0, N / 2}) {
    if (std::abs(w_left[j]) < 1e-10 * wl_max || std::abs(w_right[j]) < 1e-10 * wr_max)
      sm.resonant_nodes.push_back(j);
  }
  for (int j : sm.resonant_nodes) {
    sm.s[j] = even_fill(sm.s, j);
    sm.s_minus[j] = even_fill(sm.s_minus, j);
    s_right[j] = even_fill(s_right, j);
    sp_right[j] = even_fill(sp_right, j);
  }

  for (int j = 0; j < N; ++j) {
    cplx s = sm.s[j];
    sm.s_plus[j] = std::abs(s) > 1e-6 ? -s * std::conj(sm.s_minus[j]) / std::conj(s) : sp_right[j];
    bool flagged = std::find(sm.resonant_nodes.begin(), sm.resonant_nodes.end(), j) !=
                   sm.resonant_nodes.end();
    if (!flagged) {
      sm.cross_check_s = std::max(sm.cross_check_s, std::abs(s - s_right[j]));
      sm.cross_check_s_plus = std::max(sm.cross_check_s_plus, std::abs(sm.s_plus[j] - sp_right[j]));
    }
  }
  sm.s_at_zero = analyze(sm.s)(0).real();
  return sm;
}

double ScatteringInvariants::max() const {
  return std::max({unitarity_plus, unitarity_minus, symmetry, compatibility});
}

ScatteringInvariants scattering_invariants(const ScatteringMatrix& sm) {
  ScatteringInvariants r;
  for (int j = 0; j < sm.s.size(); ++j) {
    double s2 = std::norm(sm.s[j]);
    r.unitarity_plus = std::max(r.unitarity_plus, std::abs(s2 + std::norm(sm.s_plus[j]) - 1.0));
    r.unitarity_minus = std::max(r.unitarity_minus, std::abs(s2 + std::norm(sm.s_minus[j]) - 1.0));
    r.compatibility = std::max(
        r.compatibility, std::abs(std::conj(sm.s_plus[j]) * sm.s[j] + std::conj(sm.s[j]) * sm.s_minus[j]));
  }
  r.symmetry = std::max({symmetry_defect(sm.s), symmetry_defect(sm.s_plus), symmetry_defect(sm.s_minus)});
  Coefficients c = analyze(sm.s);
  for (int k = c.kmin(); k < 0; ++k) r.negative_mass = std::max(r.negative_mass, std::abs(c(k)));
  return r;
}

WronskianReport wronskian_check(const std::vector<CircleFunction>& e_plus, int n_lo,
                                const JacobiOperator& J) {
  WronskianReport rep;
  const int N = e_plus.front().size();
  const auto& grid = grid_of(N);
  const int count = static_cast<int>(e_plus.size());
  std::vector<cplx> first(N);
  for (int i = 1; i < count; ++i) {
    int n = n_lo + i;
    const auto &en = e_plus[i], &em = e_plus[i - 1];
    for (int j = 0; j < N; ++j) {
      int r = grid.mirror(j);
      cplx t = grid.point(j);
      cplx w = std::conj(t) * J.p(n) * (en[j] * em[r] - em[j] * en[r]);
      if (i == 1) first[j] = w;
      rep.n_dependence = std::max(rep.n_dependence, std::abs(w - first[j]));
      rep.vs_zprime = std::max(rep.vs_zprime, std::abs(w - (1.0 - 1.0 / (t * t))));
    }
  }
  return rep;
}

WronskianReport wronskian_check(const JostFamily& jost) {
  std::vector<CircleFunction> fam;
  for (int n = jost.n_lo(); n <= jost.n_hi(); ++n) fam.push_back(jost.e_plus(n));
  return wronskian_check(fam, jost.n_lo(), jost.op());
}

namespace {

bool is_flagged(const ScatteringMatrix& sm, int j) {
  return std::find(sm.resonant_nodes.begin(), sm.resonant_nodes.end(), j) != sm.resonant_nodes.end();
}

}  // namespace

double jump_relation_residual(const JostFamily& jost, const ScatteringMatrix& sm) {
  const int N = jost.grid_size();
  const auto& grid = grid_of(N);
  auto phi = [&](int j) {
    Eigen::Matrix2cd P;
    P << jost.e_minus(-1)[j], -jost.e_minus(0)[j], -jost.e_plus(0)[j], jost.e_plus(-1)[j];
    return P;
  };
  double worst = 0.0;
  for (int j = 0; j < N; ++j) {
    if (is_flagged(sm, j)) continue;
    int r = grid.mirror(j);
    Eigen::Matrix2cd S;
    S << sm.s_minus[j], sm.s[j], sm.s[j], sm.s_plus[j];
    Eigen::Matrix2cd res = std::conj(grid.point(j)) * phi(r) + S * phi(j);
    worst = std::max(worst, res.cwiseAbs().maxCoeff());
  }
  return worst;
}

double duality_residual(const JostFamily& jost, const ScatteringMatrix& sm) {
  const int N = jost.grid_size();
  const auto& grid = grid_of(N);
  double worst = 0.0;
  for (int j = 0; j < N; ++j) {
    if (is_flagged(sm, j)) continue;
    int r = grid.mirror(j);
    cplx tb = grid.point(r);
    cplx s = sm.s[j];
    auto check = [&](const CircleFunction& lhs, const CircleFunction& rhs, cplx refl) {
      cplx d = s * lhs[j] - (tb * rhs[r] + refl * rhs[j]);
      worst = std::max(worst, std::abs(d));
    };
    check(jost.e_minus(0), jost.e_plus(-1), sm.s_plus[j]);
    check(jost.e_minus(-1), jost.e_plus(0), sm.s_plus[j]);
    check(jost.e_plus(0), jost.e_minus(-1), sm.s_minus[j]);
    check(jost.e_plus(-1), jost.e_minus(0), sm.s_minus[j]);
  }
  return worst;
}

double asymptotics_residual(const JostFamily& jost, const ScatteringMatrix& sm) {
  const int N = jost.grid_size();
  const auto& grid = grid_of(N);
  const auto& J = jost.op();
  double worst = 0.0;
  for (int j = 0; j < N; ++j) {
    if (is_flagged(sm, j)) continue;
    cplx t = grid.point(j);
    for (int n = jost.n_lo(); n <= J.support_lo() - 1; ++n) {
      cplx d = sm.s[j] * jost.e_plus(n)[j] - std::pow(t, n) - sm.s_minus[j] * std::pow(t, -n - 1);
      worst = std::max(worst, std::abs(d));
    }
    for (int n = jost.n_lo(); n <= -J.support_hi() - 2; ++n) {
      cplx d = sm.s[j] * jost.e_minus(n)[j] - std::pow(t, n) - sm.s_plus[j] * std::pow(t, -n - 1);
      worst = std::max(worst, std::abs(d));
    }
  }
  return worst;
}

double transmission_formula_residual(const JostFamily& jost, const ScatteringMatrix& sm) {
  const int N = jost.grid_size();
  const auto& grid = grid_of(N);
  const double p0 = jost.op().p(0);
  double worst = 0.0;
  for (int j = 0; j < N; ++j) {
    if (is_flagged(sm, j)) continue;
    cplx t = grid.point(j);
    cplx D = jost.e_minus(-1)[j] * jost.e_plus(-1)[j] - jost.e_minus(0)[j] * jost.e_plus(0)[j];
    worst = std::max(worst, std::abs(sm.s[j] * p0 * D + (1.0 - 1.0 / (t * t))));
  }
  return worst;
}

Eigen::Matrix2d density_numerator(cplx ep_m1, cplx ep_0, cplx s, cplx s_em_0, cplx s_em_m1) {
  Eigen::Vector2cd r1(ep_m1, ep_0), r2(s_em_0, s_em_m1);
  Eigen::Matrix2cd M = std::norm(s) * r1.conjugate() * r1.transpose() + r2.conjugate() * r2.transpose();
  return M.real();
}

ConsistencyReport density_scattering_consistency(const JacobiOperator& J, const JostFamily& jost,
                                                 const ScatteringMatrix& sm, double tol, int guard) {
  const int N = jost.grid_size();
  const auto& grid = grid_of(N);
  const double p0 = J.p(0);
  ConsistencyReport rep;
  for (int j = guard; j <= N / 2 - guard; ++j) {
    double theta = grid.angle(j);
    cplx t = grid.point(j);
    Eigen::Matrix2d rho = density_at(J, theta);
    double lhs = (2.0 * pi * p0 * rho).determinant();
    double rhs = std::norm(sm.s[j]);
    double rel = std::abs(lhs - rhs) / rhs;
    rep.table.push_back({theta, lhs, rhs, rel});
    rep.det_relative = std::max(rep.det_relative, rel);

    Eigen::Matrix2cd phit;
    phit << jost.e_minus(-1)[j], -jost.e_plus(0)[j], -jost.e_minus(0)[j], jost.e_plus(-1)[j];
    Eigen::Matrix2cd inv = phit.inverse();
    Eigen::Matrix2cd right = inv.adjoint() * inv * std::abs(1.0 - 1.0 / (t * t));
    Eigen::Matrix2d left = 2.0 * pi * p0 * p0 * rho;
    double scale = left.cwiseAbs().maxCoeff();
    rep.matrix_relative = std::max(rep.matrix_relative, (left - right.real()).cwiseAbs().maxCoeff() / scale);
    rep.matrix_imag = std::max(rep.matrix_imag, right.imag().cwiseAbs().maxCoeff() / scale);
  }
  if (rep.det_relative > tol || rep.matrix_relative > tol)
    throw ConsistencyFailure("density and scattering data disagree: det residual " +
                                 std::to_string(rep.det_relative) + ", matrix residual " +
                                 std::to_string(rep.matrix_relative),
                             rep.table);
  return rep;
}

}  // namespace jscat
