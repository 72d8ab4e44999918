#include "jscat/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace jscat {

namespace {

ReproducingKernel kernel_or_fail(const Coefficients& a, int shift, int M,
                                 const std::vector<double>& eps) {
  HankelOperator H = build_hankel(a, shift, M);
  try {
    return reproducing_kernel(H, eps);
  } catch (const NoConvergence& e) {
    throw KernelFailure("kernel at shift " + std::to_string(shift) + ": " + e.what(), shift,
                        e.trace);
  }
}

int effective_trunc(int n, int M) { return n < 0 ? M - 2 * n : M; }

CircleFunction z_on_grid(int n) {
  return CircleFunction::from(n, [](cplx t) { return t + std::conj(t); });
}

}  // namespace

void validate_reflection(const CircleFunction& s_plus) {
  const int n = s_plus.size();
  if (!is_power_of_two(n) || n < 16) throw ValidationError("grid size must be a power of two");
  for (int j = 0; j < n; ++j)
    if (!std::isfinite(s_plus[j].real()) || !std::isfinite(s_plus[j].imag()))
      throw ValidationError("s_+ is not finite at node " + std::to_string(j));
  double asym = symmetry_defect(s_plus);
  if (asym > 1e-10)
    throw ValidationError("s_+ is not real-symmetric (defect " + std::to_string(asym) + ")");
  double sup = sup_norm(s_plus);
  if (sup > 1.0 + 1e-9)
    throw ValidationError("sup norm of s_+ exceeds 1: " + std::to_string(sup));
}

ReflectionInput ReflectionInput::from_s_plus(const CircleFunction& s_plus, const OuterOptions& opt) {
  validate_reflection(s_plus);
  const int n = s_plus.size();
  CircleFunction w(n);
  for (int j = 0; j < n; ++j) w[j] = std::sqrt(std::max(0.0, 1.0 - std::norm(s_plus[j])));
  OuterFunction o = outer_from_modulus(w, opt);
  ReflectionInput in;
  in.s_plus = s_plus;
  in.s = o.boundary;
  in.s_minus = CircleFunction(n);
  for (int j = 0; j < n; ++j) in.s_minus[j] = -std::conj(s_plus[j]) * o.phase[j];
  in.s_at_zero = o.value_at_zero;
  in.s_zero_nodes = o.zero_nodes;
  return in;
}

ReflectionInput ReflectionInput::from_triple(const CircleFunction& s_plus, const CircleFunction& s,
                                             const CircleFunction& s_minus) {
  validate_reflection(s_plus);
  if (s.size() != s_plus.size() || s_minus.size() != s_plus.size())
    throw GridMismatch("scattering entries on different grids");
  ReflectionInput in;
  in.s_plus = s_plus;
  in.s = s;
  in.s_minus = s_minus;
  in.s_at_zero = analyze(s)(0).real();
  double smax = sup_norm(s);
  for (int j = 0; j < s.size(); ++j)
    if (std::abs(s[j]) < 1e-6 * smax) in.s_zero_nodes.push_back(j);
  return in;
}

ReflectionInput ReflectionInput::from_scattering(const ScatteringMatrix& sm) {
  ReflectionInput in = from_triple(sm.s_plus, sm.s, sm.s_minus);
  in.s_at_zero = sm.s_at_zero;
  return in;
}

KernelFamily kernel_family(const CircleFunction& symbol, int n_lo, int n_hi, int M,
                           const std::vector<double>& eps) {
  const int grid = symbol.size();
  Coefficients a = analyze(symbol);
  KernelFamily fam;
  fam.n_lo = n_lo;
  const int count = n_hi - n_lo + 1;
  fam.kernels.resize(count);
  fam.basis.resize(count);
  parallel_for(count, [&](int i) {
    int n = n_lo + i;
    int Mn = effective_trunc(n, M);
    ReproducingKernel k = kernel_or_fail(a, n, Mn, eps);
    Eigen::VectorXd K = k.normalized();
    Coefficients c(grid);
    for (int j = 0; j < Mn; ++j) {
      if (!c.in_range(n + j))
        throw ValidationError("basis degree " + std::to_string(n + j) + " exceeds grid " +
                              std::to_string(grid));
      c.at(n + j) = K(j);
    }
    fam.basis[i] = synthesize(c);
    fam.kernels[i] = std::move(k);
  });
  return fam;
}

namespace {

// Coefficients of J from z acting on an orthonormal family.
template <class Inner>
JacobiOperator coefficients_from(int N, const Inner& inner) {
  std::vector<double> p(2 * N + 1), q(2 * N + 1);
  for (int n = -N; n <= N; ++n) {
    q[n + N] = inner(n, n).real();
    p[n + N] = inner(n - 1, n).real();
    if (!(p[n + N] > 0.0))
      throw GramFailure("recovered p_" + std::to_string(n) + " = " + std::to_string(p[n + N]) +
                        " is not positive");
  }
  return JacobiOperator(-N, std::move(p), std::move(q));
}

void check_options(const InverseOptions& opt, int grid) {
  if (opt.N < 0) throw ValidationError("window half-width must be nonnegative");
  if (opt.M <= 0) throw ValidationError("truncation must be positive");
  if (8 * opt.N > opt.M)
    throw ValidationError("window half-width " + std::to_string(opt.N) + " exceeds M/8");
  if (opt.M + 3 * (opt.N + 1) > grid / 2)
    throw ValidationError("grid " + std::to_string(grid) + " too small for M = " +
                          std::to_string(opt.M));
}

}  // namespace

ReconstructionResult reconstruct(const ReflectionInput& input, const InverseOptions& opt) {
  const int grid = input.grid_size();
  check_options(opt, grid);
  const int N = opt.N;
  KernelFamily fam = kernel_family(input.s_plus, -N - 1, N + 1, opt.M, opt.eps);
  CircleFunction z = z_on_grid(grid);

  ReconstructionResult r;
  r.n_lo = fam.n_lo;
  r.kernels = std::move(fam.kernels);
  r.basis = std::move(fam.basis);
  auto e = [&](int n) -> const CircleFunction& { return r.basis[n - r.n_lo]; };
  r.J = coefficients_from(N, [&](int a, int b) {
    return szego_inner(z * e(a), e(b), input.s_plus);
  });

  const int count = static_cast<int>(r.basis.size());
  double g = 0.0;
  for (int a = 0; a < count; ++a)
    for (int b = a; b < count; ++b) {
      cplx v = szego_inner(r.basis[a], r.basis[b], input.s_plus);
      g = std::max(g, std::abs(v - (a == b ? 1.0 : 0.0)));
    }
  r.gram_residual = g;
  if (g > opt.gram_tol)
    throw GramFailure("Gram residual " + std::to_string(g) + " exceeds " +
                      std::to_string(opt.gram_tol));
  auto [dp, dm] = defects_at(input, opt.M, opt.eps);
  r.defect_plus = dp;
  r.defect_minus = dm;
  return r;
}

DualImage dual_map(const CircleFunction& f_plus, const ReflectionInput& input, double s_floor) {
  if (f_plus.size() != input.grid_size()) throw GridMismatch("dual map: grid sizes differ");
  DualImage d;
  d.s_f_minus = star(f_plus) + input.s_plus * f_plus;
  d.f_minus = CircleFunction(f_plus.size());
  for (int j = 0; j < f_plus.size(); ++j) {
    if (std::abs(input.s[j]) < s_floor)
      d.masked.push_back(j);
    else
      d.f_minus[j] = d.s_f_minus[j] / input.s[j];
  }
  return d;
}

cplx paired_inner(const CircleFunction& sf_plus, const CircleFunction& sf_minus,
                  const CircleFunction& sg_plus, const CircleFunction& sg_minus) {
  return 0.5 * (l2_inner(sf_plus, sg_plus) + l2_inner(sf_minus, sg_minus));
}

ReconstructionResult reconstruct_dual(const ReflectionInput& input, const InverseOptions& opt) {
  const int grid = input.grid_size();
  check_options(opt, grid);
  const int N = opt.N;
  KernelFamily fam = kernel_family(input.s_minus, -N - 1, N + 1, opt.M, opt.eps);
  CircleFunction z = z_on_grid(grid);

  // g_n = t^n K_{s- t^{2n}} is carried to the member of index m = -n-1;
  // its pair (s f+, s f-) is (star(g_n) + s- g_n, s g_n).
  const int count = static_cast<int>(fam.basis.size());
  const int m_lo = -(fam.n_lo + count - 1) - 1;
  std::vector<CircleFunction> sf_plus(count), sf_minus(count);
  for (int i = 0; i < count; ++i) {
    int n = fam.n_lo + i;
    int m = -n - 1;
    const CircleFunction& gn = fam.basis[i];
    sf_plus[m - m_lo] = star(gn) + input.s_minus * gn;
    sf_minus[m - m_lo] = input.s * gn;
  }
  auto inner = [&](int a, int b) {
    return paired_inner(z * sf_plus[a - m_lo], z * sf_minus[a - m_lo], sf_plus[b - m_lo],
                        sf_minus[b - m_lo]);
  };

  ReconstructionResult r;
  r.n_lo = m_lo;
  r.J = coefficients_from(N, inner);
  r.kernels.resize(count);
  r.basis.resize(count);
  for (int i = 0; i < count; ++i) {
    int m = -(fam.n_lo + i) - 1;
    r.kernels[m - m_lo] = fam.kernels[i];
    CircleFunction f(grid);
    for (int j = 0; j < grid; ++j)
      if (std::abs(input.s[j]) >= opt.s_floor) f[j] = sf_plus[m - m_lo][j] / input.s[j];
    r.basis[m - m_lo] = std::move(f);
  }
  for (int j = 0; j < grid; ++j)
    if (std::abs(input.s[j]) < opt.s_floor) r.small_s_nodes.push_back(j);

  double g = 0.0;
  for (int a = 0; a < count; ++a)
    for (int b = a; b < count; ++b) {
      cplx v = paired_inner(sf_plus[a], sf_minus[a], sf_plus[b], sf_minus[b]);
      g = std::max(g, std::abs(v - (a == b ? 1.0 : 0.0)));
    }
  r.gram_residual = g;
  if (g > opt.gram_tol)
    throw GramFailure("Gram residual " + std::to_string(g) + " exceeds " +
                      std::to_string(opt.gram_tol));
  auto [dp, dm] = defects_at(input, opt.M, opt.eps);
  r.defect_plus = dp;
  r.defect_minus = dm;
  return r;
}

std::pair<double, double> defects_at(const ReflectionInput& input, int M,
                                     const std::vector<double>& eps) {
  Coefficients ap = analyze(input.s_plus), am = analyze(input.s_minus);
  double K[4];
  const Coefficients* sym[4] = {&ap, &am, &am, &ap};
  const int shift[4] = {0, -1, 0, -1};
  parallel_for(4, [&](int i) {
    ReproducingKernel k = kernel_or_fail(*sym[i], shift[i], effective_trunc(shift[i], M), eps);
    K[i] = std::sqrt(k.value_at_zero);
  });
  double s0 = input.s_at_zero;
  return {1.0 - s0 * K[0] * K[1], 1.0 - s0 * K[2] * K[3]};
}

UniquenessDefect uniqueness_defect(const ReflectionInput& input, const std::vector<int>& M_ladder,
                                   double tol, const std::vector<double>& eps) {
  if (M_ladder.empty()) throw ValidationError("empty M ladder");
  UniquenessDefect u;
  for (int M : M_ladder) {
    auto [dp, dm] = defects_at(input, M, eps);
    u.ladder.push_back({M, dp, dm});
  }
  u.plus = u.ladder.back().plus;
  u.minus = u.ladder.back().minus;
  bool settled = std::abs(u.plus) <= tol && std::abs(u.minus) <= tol;
  for (std::size_t i = 1; i < u.ladder.size(); ++i) {
    const auto &a = u.ladder[i - 1], &b = u.ladder[i];
    if (std::abs(b.plus) > std::abs(a.plus) + 1e-9 || std::abs(b.minus) > std::abs(a.minus) + 1e-9)
      settled = false;
  }
  u.unique = settled;
  return u;
}

namespace {

double trace_inverse(const Eigen::Matrix2d& r) {
  double det = r.determinant();
  return det > 0.0 ? r.trace() / det : INFINITY;
}

}  // namespace

FiniteMass finite_mass_test(const DensityFn& rho, int base_n, int levels) {
  if (base_n < 1 || levels < 2) throw ValidationError("finite mass test needs two refinements");
  FiniteMass fm;
  for (int l = 0; l < levels; ++l) {
    const int n = base_n << l;
    std::vector<double> part(n);
    parallel_for(n, [&](int j) {
      double th = (j + 0.5) * pi / n;
      part[j] = trace_inverse(rho(th)) * 2.0 * std::sin(th);
    });
    double acc = 0.0;
    for (double v : part) acc += v;
    fm.trend.push_back(acc * pi / n);
  }
  fm.value = fm.trend.back();
  double prev = fm.trend[fm.trend.size() - 2];
  fm.integrable = std::isfinite(fm.value) && std::abs(fm.value - prev) <= 0.05 * std::abs(fm.value);
  return fm;
}

double finite_mass_value(const SpectralDensity& density) {
  const auto& th = density.theta;
  const std::size_t n = th.size();
  if (n < 2) throw ValidationError("density needs at least two nodes");
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double left = j == 0 ? th[1] - th[0] : th[j] - th[j - 1];
    double right = j + 1 == n ? th[n - 1] - th[n - 2] : th[j + 1] - th[j];
    acc += trace_inverse(density.rho[j]) * 2.0 * std::sin(th[j]) * 0.5 * (left + right);
  }
  return acc;
}

cplx TrigSeries::operator()(cplx t) const {
  cplx acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc * std::pow(t, kmin);
}

TrigSeries TrigSeries::from(const Coefficients& a, double rel_cut) {
  double big = 0.0;
  for (int k = a.kmin(); k <= a.kmax(); ++k) big = std::max(big, std::abs(a(k)));
  TrigSeries s;
  int lo = a.kmax() + 1, hi = a.kmin() - 1;
  for (int k = a.kmin(); k <= a.kmax(); ++k)
    if (std::abs(a(k)) > rel_cut * big) {
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
  if (lo > hi) return s;
  s.kmin = lo;
  for (int k = lo; k <= hi; ++k) s.c.push_back(a(k));
  return s;
}

TrigSeries TrigSeries::from_poly(const Eigen::VectorXd& coeffs, int shift, double rel_cut) {
  double big = coeffs.cwiseAbs().maxCoeff();
  int hi = static_cast<int>(coeffs.size()) - 1;
  while (hi > 0 && std::abs(coeffs(hi)) <= rel_cut * big) --hi;
  TrigSeries s;
  s.kmin = shift;
  for (int j = 0; j <= hi; ++j) s.c.push_back(coeffs(j));
  return s;
}

BasisDensity::BasisDensity(const ReflectionInput& input, int M, const std::vector<double>& eps) {
  Coefficients ap = analyze(input.s_plus);
  s_ = TrigSeries::from(analyze(input.s));
  sp_ = TrigSeries::from(ap);
  ReproducingKernel km1 = kernel_or_fail(ap, -1, effective_trunc(-1, M), eps);
  ReproducingKernel k0 = kernel_or_fail(ap, 0, M, eps);
  em1_ = TrigSeries::from_poly(km1.normalized(), -1);
  e0_ = TrigSeries::from_poly(k0.normalized(), 0);
}

Eigen::Matrix2d BasisDensity::numerator(double theta) const {
  cplx t = std::polar(1.0, theta), tb = std::conj(t);
  cplx em1 = em1_(t), e0 = e0_(t), sp = sp_(t), s = s_(t);
  cplx s_em0 = tb * em1_(tb) + sp * em1;
  cplx s_emm1 = tb * e0_(tb) + sp * e0;
  return density_numerator(em1, e0, s, s_em0, s_emm1);
}

Eigen::Matrix2d BasisDensity::operator()(double theta) const {
  return numerator(theta) / (2.0 * pi * 2.0 * std::sin(theta));
}

}  // namespace jscat
