#include "jscat/diagnostics.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "jscat/hankel.hpp"

namespace jscat {

namespace {

struct Node {
  double theta, x, w;
};

// Midpoint nodes in theta; w = 2 sin(theta) pi / n is the dx weight.
std::vector<Node> theta_nodes(int n) {
  std::vector<Node> out(n);
  for (int j = 0; j < n; ++j) {
    double th = (j + 0.5) * pi / n;
    out[j] = {th, 2.0 * std::cos(th), 2.0 * std::sin(th) * pi / n};
  }
  return out;
}

double unit01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double edge_log(double x) { return std::log((x + 2.0) / (2.0 - x)); }

Eigen::Matrix2d inverse_or_inf(const Eigen::Matrix2d& r) {
  double det = r.determinant();
  if (!(det > 0.0)) return Eigen::Matrix2d::Constant(INFINITY);
  return r.inverse();
}

double min_eig_sym(const Eigen::Matrix2d& a, int dim) {
  if (dim == 1) return a(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_abs_eig_sym(const Eigen::Matrix2d& a, int dim) {
  if (dim == 1) return std::abs(a(0, 0));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

cplx frak_h(const ScalarFn& g, cplx z, int n) {
  cplx acc = 0.0;
  for (const auto& nd : theta_nodes(n)) acc += g(nd.x) * nd.w / (z - nd.x);
  return acc;
}

Eigen::Vector2cd frak_h(const VectorFn& g, cplx z, int n) {
  Eigen::Vector2cd acc = Eigen::Vector2cd::Zero();
  for (const auto& nd : theta_nodes(n)) acc += g(nd.x) * (nd.w / (z - nd.x));
  return acc;
}

cplx frak_h_boundary(const ScalarFn& g, double x, Approach side, int n) {
  if (!(x > -2.0 && x < 2.0)) throw ValidationError("boundary point must lie inside (-2, 2)");
  const cplx gx = g(x);
  const double step = 1e-5;
  cplx pv = gx * edge_log(x);
  for (const auto& nd : theta_nodes(n)) {
    double d = x - nd.x;
    if (std::abs(d) < 1e-13)
      pv -= (g(x + step) - g(x - step)) / (2.0 * step) * nd.w;
    else
      pv += (g(nd.x) - gx) / d * nd.w;
  }
  cplx jump(0.0, pi);
  return side == Approach::below ? pv + jump * gx : pv - jump * gx;
}

std::vector<cplx> default_interior_zetas() {
  std::vector<cplx> out;
  for (double r : {0.5, 0.65, 0.8})
    for (double a : {0.7, 2.1}) out.push_back(std::polar(r, a));
  return out;
}

CauchyIdentityReport cauchy_identity_check(const JacobiOperator& J, const std::vector<std::pair<int, double>>& f,
                                   const std::vector<cplx>& zetas, int n) {
  if (f.empty()) throw ValidationError("empty vector f");
  int nmax = 0;
  for (auto [m, v] : f) nmax = std::max(nmax, m >= 0 ? m : -m - 1);
  const double p0 = J.p(0);
  auto nodes = theta_nodes(n);

  // rho f^ times the dx weight, at every node.
  std::vector<Eigen::Vector2cd> rf(n);
  parallel_for(n, [&](int j) {
    const auto& nd = nodes[j];
    PolyValues plus = orthonormal_polys(Side::plus, J, nmax, nd.x);
    PolyValues minus = orthonormal_polys(Side::minus, J, nmax, nd.x);
    Eigen::Vector2cd fh = Eigen::Vector2cd::Zero();
    for (auto [m, v] : f) {
      if (m >= 0)
        fh += v * Eigen::Vector2cd(-p0 * plus.Q[m], plus.P[m]);
      else
        fh += v * Eigen::Vector2cd(minus.P[-m - 1], -p0 * minus.Q[-m - 1]);
    }
    Eigen::Matrix2cd rho = density_at(J, nd.theta).cast<cplx>();
    rf[j] = rho * fh * nd.w;
  });

  CauchyIdentityReport rep;
  for (cplx zeta : zetas) {
    cplx z = joukowski(zeta);
    Eigen::Vector2cd h = Eigen::Vector2cd::Zero();
    for (int j = 0; j < n; ++j) h += rf[j] / (z - nodes[j].x);
    JostPoint jp = jost_at(J, zeta);
    Eigen::Matrix2cd Phi;
    Phi << jp.e_minus(-1), -jp.e_minus(0), -jp.e_plus(0), jp.e_plus(-1);
    Eigen::Vector2cd rhs = p0 * Phi * h;
    Eigen::Vector2cd lhs = Eigen::Vector2cd::Zero();
    for (auto [m, v] : f) {
      if (m >= 0)
        lhs(1) += v * jp.e_plus(m);
      else
        lhs(0) += v * jp.e_minus(-m - 1);
    }
    double rel = (lhs - rhs).norm() / std::max(lhs.norm(), 1e-300);
    rep.per_point.push_back(rel);
    rep.residual = std::max(rep.residual, rel);
  }
  return rep;
}

Eigen::Vector2cd Bump::operator()(double x) const {
  double u = (x - center) / width;
  if (std::abs(u) >= 1.0) return Eigen::Vector2cd::Zero();
  double b = 1.0 - u * u;
  return xi * (b * b);
}

Eigen::Vector2cd Bump::derivative(double x) const {
  double u = (x - center) / width;
  if (std::abs(u) >= 1.0) return Eigen::Vector2cd::Zero();
  return xi * (-4.0 * u * (1.0 - u * u) / width);
}

double transform_inequality_ratio(const ThetaDensity& rho, const Bump& g, int n) {
  auto nodes = theta_nodes(n);
  std::vector<Eigen::Vector2cd> gv(n), dg(n);
  std::vector<Eigen::Matrix2cd> rinv(n);
  for (int j = 0; j < n; ++j) {
    gv[j] = g(nodes[j].x);
    dg[j] = g.derivative(nodes[j].x);
    rinv[j] = inverse_or_inf(rho(nodes[j].theta)).cast<cplx>();
  }
  std::vector<double> num(n), den(n);
  parallel_for(n, [&](int i) {
    const double xi = nodes[i].x;
    Eigen::Vector2cd pv = gv[i] * edge_log(xi) - dg[i] * nodes[i].w;
    for (int j = 0; j < n; ++j)
      if (j != i) pv += (gv[j] - gv[i]) * (nodes[j].w / (xi - nodes[j].x));
    Eigen::Vector2cd below = pv + cplx(0.0, pi) * gv[i];
    Eigen::Vector2cd above = pv - cplx(0.0, pi) * gv[i];
    double wi = nodes[i].w;
    if (gv[i].norm() == 0.0 && pv.norm() == 0.0) return;
    num[i] = wi * (below.dot(rinv[i] * below).real() + above.dot(rinv[i] * above).real());
    den[i] = wi * gv[i].dot(rinv[i] * gv[i]).real();
  });
  double a = 0.0, b = 0.0;
  for (int i = 0; i < n; ++i) {
    a += num[i];
    b += den[i];
  }
  if (!(b > 0.0)) throw ValidationError("bump has zero weighted norm");
  return a / b;
}

TransformInequalityReport transform_inequality_estimate(const ThetaDensity& rho, int trials, std::uint64_t seed,
                                          int n) {
  if (trials <= 0) throw ValidationError("trials must be positive");
  std::mt19937_64 rng(seed);
  TransformInequalityReport rep;
  for (int t = 0; t < trials; ++t) {
    Bump b;
    b.center = -1.8 + 3.6 * unit01(rng);
    double wmax = std::min(0.5, 2.0 - std::abs(b.center) - 0.01);
    b.width = 0.05 + (wmax - 0.05) * unit01(rng);
    for (int k = 0; k < 2; ++k) b.xi(k) = cplx(2.0 * unit01(rng) - 1.0, 2.0 * unit01(rng) - 1.0);
    double r = transform_inequality_ratio(rho, b, n);
    rep.ratios.push_back(r);
    if (r > rep.C) {
      rep.C = r;
      rep.best_trial = t;
      rep.best = b;
    }
  }
  return rep;
}

MatrixWeight MatrixWeight::sample(const MatrixFn& w, int dim, int cells, double lo, double hi) {
  if (cells <= 0 || !(hi > lo)) throw ValidationError("weight needs cells on a nonempty interval");
  if (dim != 1 && dim != 2) throw ValidationError("weight dimension must be 1 or 2");
  std::vector<Eigen::Matrix2d> vals(cells);
  const double h = (hi - lo) / cells;
  parallel_for(cells, [&](int i) { vals[i] = w(lo + (i + 0.5) * h); });
  return from_cells(std::move(vals), dim, lo, hi);
}

MatrixWeight MatrixWeight::scalar(const std::function<double(double)>& w, int cells, double lo,
                                  double hi) {
  return sample(
      [&](double x) {
        Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
        m(0, 0) = w(x);
        return m;
      },
      1, cells, lo, hi);
}

MatrixWeight MatrixWeight::from_cells(std::vector<Eigen::Matrix2d> values, int dim, double lo,
                                      double hi) {
  if (values.empty() || !(hi > lo)) throw ValidationError("weight needs cells on a nonempty interval");
  if (dim != 1 && dim != 2) throw ValidationError("weight dimension must be 1 or 2");
  MatrixWeight m;
  m.dim_ = dim;
  m.lo_ = lo;
  m.hi_ = hi;
  m.h_ = (hi - lo) / values.size();
  m.W_ = std::move(values);
  m.build();
  return m;
}

void MatrixWeight::build() {
  const int n = cells();
  Winv_.resize(n);
  pre_.assign(n + 1, Eigen::Matrix<long double, 2, 2>::Zero());
  pre_inv_.assign(n + 1, Eigen::Matrix<long double, 2, 2>::Zero());
  lower_ = INFINITY;
  for (int i = 0; i < n; ++i) {
    Eigen::Matrix2d& w = W_[i];
    if (!w.allFinite()) throw ValidationError("weight is not finite at cell " + std::to_string(i));
    if (dim_ == 1) {
      w(0, 1) = w(1, 0) = w(1, 1) = 0.0;
      Winv_[i] = Eigen::Matrix2d::Zero();
      Winv_[i](0, 0) = w(0, 0) > 0.0 ? 1.0 / w(0, 0) : INFINITY;
    } else {
      if (std::abs(w(0, 1) - w(1, 0)) > 1e-12 * std::max(1.0, w.norm()))
        throw ValidationError("weight is not symmetric at cell " + std::to_string(i));
      w(0, 1) = w(1, 0) = 0.5 * (w(0, 1) + w(1, 0));
      Winv_[i] = inverse_or_inf(w);
    }
    lower_ = std::min(lower_, min_eig_sym(w, dim_));
    pre_[i + 1] = pre_[i] + w.cast<long double>();
    pre_inv_[i + 1] = pre_inv_[i] + Winv_[i].cast<long double>();
  }
  if (lower_ < 0.0) lower_ = 0.0;
}

Eigen::Matrix2d MatrixWeight::integral(double a, double b, bool inverse) const {
  a = std::max(a, lo_);
  b = std::min(b, hi_);
  if (!(b > a)) return Eigen::Matrix2d::Zero();
  const auto& pre = inverse ? pre_inv_ : pre_;
  const auto& val = inverse ? Winv_ : W_;
  const int n = cells();
  auto P = [&](double y) -> Eigen::Matrix<long double, 2, 2> {
    double u = (y - lo_) / h_;
    int i = std::clamp(static_cast<int>(std::floor(u)), 0, n);
    double frac = u - i;
    Eigen::Matrix<long double, 2, 2> out = pre[i];
    if (i < n && frac > 0.0) out += static_cast<long double>(frac) * val[i].cast<long double>();
    return out;
  };
  Eigen::Matrix<long double, 2, 2> d = P(b) - P(a);
  return (d * static_cast<long double>(h_)).cast<double>();
}

namespace {

double quotient_from(const Eigen::Matrix2d& A, const Eigen::Matrix2d& B, int dim) {
  if (dim == 1) return std::sqrt(A(0, 0) * B(0, 0));
  // AB is similar to A^{1/2} B A^{1/2}, so its eigenvalues are real and >= 0.
  Eigen::Matrix2d P = A * B;
  double tr = P.trace(), det = P.determinant();
  double lam = 0.5 * (tr + std::sqrt(std::max(tr * tr - 4.0 * det, 0.0)));
  return std::sqrt(lam);
}

}  // namespace

double a2_quotient(const MatrixWeight& W, double x, double delta) {
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  if (x + delta <= W.lo() || x - delta >= W.hi())
    throw EmptyIntersection("interval misses the support of the weight");
  Eigen::Matrix2d A = W.integral(x - delta, x + delta) / (2.0 * delta);
  Eigen::Matrix2d B = W.integral(x - delta, x + delta, true) / (2.0 * delta);
  return quotient_from(A, B, W.dim());
}

A2Report q2e(const MatrixWeight& W, int max_scale_exponent) {
  A2Report rep;
  for (int j = 0; j <= max_scale_exponent; ++j) {
    const double delta = std::ldexp(1.0, -j);
    const double step = delta / 4.0;
    const int count = static_cast<int>(std::floor((W.hi() - W.lo()) / step + 1e-9)) + 1;
    std::vector<double> q(count);
    parallel_for(count, [&](int i) { q[i] = a2_quotient(W, W.lo() + i * step, delta); });
    int best = static_cast<int>(std::max_element(q.begin(), q.end()) - q.begin());
    rep.table.push_back({W.lo() + best * step, delta, q[best]});
    rep.scale_trend.push_back(q[best]);
    rep.Q = std::max(rep.Q, q[best]);
  }
  return rep;
}

A2Report q2e(const MatrixFn& w, int dim, const A2Options& opt) {
  if (opt.levels < 0 || opt.n0 <= 0) throw ValidationError("bad A2 lattice options");
  A2Report rep;
  std::vector<double> trend;
  for (int k = 0; k <= opt.levels; ++k) {
    MatrixWeight W = MatrixWeight::sample(w, dim, opt.n0 << k, opt.lo, opt.hi);
    rep = q2e(W, k);
    trend.push_back(rep.Q);
  }
  rep.level_trend = trend;
  const int K = static_cast<int>(trend.size()) - 1;
  if (K >= opt.divergence_span) {
    double a = trend[K - opt.divergence_span], b = trend[K];
    rep.divergent = !std::isfinite(b) || b >= opt.divergence_ratio * a;
  }
  return rep;
}

namespace {

// Discrete Hilbert transform (H u)_i = sum_{j != i} u_j / (pi (i - j)) by FFT.
class DiscreteHilbert {
 public:
  explicit DiscreteHilbert(int n) : n_(n) {
    F_ = 1;
    while (F_ < 2 * n) F_ <<= 1;
    std::vector<cplx> k(F_, 0.0);
    for (int d = 1; d < n; ++d) {
      k[d] = 1.0 / (pi * d);
      k[F_ - d] = -1.0 / (pi * d);
    }
    fft_.fwd(kernel_hat_, k);
  }
  std::vector<cplx> apply(const std::vector<cplx>& u) {
    std::vector<cplx> pad(F_, 0.0), hat, out;
    std::copy(u.begin(), u.end(), pad.begin());
    fft_.fwd(hat, pad);
    for (int i = 0; i < F_; ++i) hat[i] *= kernel_hat_[i];
    fft_.inv(out, hat);
    out.resize(n_);
    return out;
  }

 private:
  int n_, F_;
  Eigen::FFT<double> fft_;
  std::vector<cplx> kernel_hat_;
};

}  // namespace

ProjectionNorm weighted_projection_norm(const MatrixFn& w, int dim, double L, int grid_n,
                                        double e_lo, double e_hi) {
  if (grid_n < 4 || !(L > 0.0)) throw ValidationError("bad projection grid");
  if (dim != 1 && dim != 2) throw ValidationError("weight dimension must be 1 or 2");
  const double h = 2.0 * L / grid_n;
  std::vector<int> on_e;
  for (int i = 0; i < grid_n; ++i) {
    double x = -L + (i + 0.5) * h;
    if (x >= e_lo && x <= e_hi) on_e.push_back(i);
  }
  const int m = static_cast<int>(on_e.size());
  if (m == 0) throw EmptyIntersection("no grid nodes inside E");
  std::vector<Eigen::Matrix2d> half(m), inv_half(m);
  parallel_for(m, [&](int k) {
    double x = -L + (on_e[k] + 0.5) * h;
    Eigen::Matrix2d W = w(x);
    if (dim == 1) {
      half[k] = Eigen::Matrix2d::Zero();
      inv_half[k] = Eigen::Matrix2d::Zero();
      half[k](0, 0) = std::sqrt(W(0, 0));
      inv_half[k](0, 0) = 1.0 / std::sqrt(W(0, 0));
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (W + W.transpose()));
      Eigen::Vector2d ev = es.eigenvalues();
      half[k] = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
      inv_half[k] = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                    es.eigenvectors().transpose();
    }
  });

  DiscreteHilbert H(grid_n);
  using Field = std::vector<std::vector<cplx>>;  // [component][node on E]
  auto multiply = [&](const Field& v, const std::vector<Eigen::Matrix2d>& A) {
    Field out(dim, std::vector<cplx>(m));
    for (int k = 0; k < m; ++k)
      for (int a = 0; a < dim; ++a) {
        cplx s = 0.0;
        for (int b = 0; b < dim; ++b) s += A[k](a, b) * v[b][k];
        out[a][k] = s;
      }
    return out;
  };
  auto project = [&](const Field& v) {
    Field out(dim, std::vector<cplx>(m));
    for (int a = 0; a < dim; ++a) {
      std::vector<cplx> full(grid_n, 0.0);
      for (int k = 0; k < m; ++k) full[on_e[k]] = v[a][k];
      std::vector<cplx> hu = H.apply(full);
      for (int k = 0; k < m; ++k)
        out[a][k] = 0.5 * (v[a][k] + cplx(0.0, 1.0) * hu[on_e[k]]);
    }
    return out;
  };
  auto norm = [&](const Field& v) {
    double s = 0.0;
    for (const auto& c : v)
      for (cplx x : c) s += std::norm(x);
    return std::sqrt(s);
  };

  std::mt19937_64 rng(1);
  Field v(dim, std::vector<cplx>(m));
  for (auto& c : v)
    for (auto& x : c) x = unit01(rng) - 0.5;
  double nv = norm(v);
  for (auto& c : v)
    for (auto& x : c) x /= nv;

  ProjectionNorm res;
  res.stalled = true;
  double prev = 0.0;
  for (int it = 1; it <= 30; ++it) {
    Field tv = multiply(project(multiply(v, inv_half)), half);
    double est = norm(tv);
    res.value = std::max(res.value, est);
    res.iterations = it;
    Field back = multiply(project(multiply(tv, half)), inv_half);
    double nb = norm(back);
    if (!(nb > 0.0)) {
      res.stalled = false;
      break;
    }
    for (auto& c : back)
      for (auto& x : c) x /= nb;
    v = std::move(back);
    if (it > 1 && std::abs(est - prev) <= 1e-6 * est) {
      res.stalled = false;
      break;
    }
    prev = est;
  }
  return res;
}

DoublingReport doubling_check(const MatrixWeight& W, double center, double delta, double lambda,
                              double Q, double eta) {
  if (!(delta > 0.0 && lambda > 1.0 && Q > 0.0 && eta > 0.0))
    throw ValidationError("doubling check needs delta > 0, lambda > 1, Q > 0, eta > 0");
  DoublingReport r;
  auto cut = [&](double a, double b) {
    return std::max(0.0, std::min(b, W.hi()) - std::max(a, W.lo()));
  };
  double inner = cut(center - delta, center + delta);
  double ring = cut(center - lambda * delta, center + lambda * delta) - inner;
  r.premise = center >= W.lo() && center <= W.hi() && ring >= inner * (1.0 - 1e-12);
  r.factor = 1.0 + eta * eta / (lambda * lambda * Q * Q);
  Eigen::Matrix2d big = W.integral(center - lambda * delta, center + lambda * delta);
  Eigen::Matrix2d small = W.integral(center - delta, center + delta);
  Eigen::Matrix2d D = big - r.factor * small;
  double scale = std::max(max_abs_eig_sym(big, W.dim()), 1e-300);
  r.min_eig = min_eig_sym(D, W.dim()) / scale;
  r.holds = r.min_eig >= -1e-12;
  return r;
}

PoissonReport poisson_check(const MatrixWeight& W, double center, double delta, double Q,
                            double eta) {
  if (!(delta > 0.0 && Q > 0.0 && eta > 0.0)) throw ValidationError("bad Poisson check arguments");
  PoissonReport r;
  const double lambda = 2.0 / eta;
  const double l2q2 = lambda * lambda * Q * Q;
  r.C = 2.0 * std::pow(lambda, 4) * std::pow(Q, 4) * (1.0 + eta * eta / l2q2) /
        (pi * std::pow(eta, 4));
  Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
  const double h = W.cell_width();
  for (int i = 0; i < W.cells(); ++i) {
    double d = W.x(i) - center;
    acc += W.W(i) * (delta / (d * d + delta * delta) * h / pi);
  }
  r.poisson_average = acc;
  r.interval_average = W.integral(center - delta, center + delta) / (2.0 * delta);
  Eigen::Matrix2d D = r.C * r.interval_average - r.poisson_average;
  double scale = std::max(max_abs_eig_sym(r.C * r.interval_average, W.dim()), 1e-300);
  r.min_eig = min_eig_sym(D, W.dim()) / scale;
  r.holds = r.min_eig >= -1e-12;
  return r;
}

MatrixFn pipeline_weight(const ThetaDensity& rho, A2Reading reading) {
  if (reading == A2Reading::interval)
    return [rho](double x) { return rho(std::acos(std::clamp(x / 2.0, -1.0, 1.0))); };
  return [rho](double theta) { return Eigen::Matrix2d(rho(theta) * (2.0 * std::sin(theta))); };
}

PanelReport equivalence_panel(const ReflectionInput& input, const JacobiOperator* J,
                            const PanelOptions& opt) {
  if (opt.M_ladder.empty()) throw ValidationError("empty M ladder");
  PanelReport rep;

  ThetaDensity rho;
  if (J) {
    JacobiOperator Jc = *J;
    rho = [Jc](double th) { return density_at(Jc, th); };
  } else {
    auto bd = std::make_shared<BasisDensity>(input, opt.M_ladder.back());
    rho = [bd](double th) { return (*bd)(th); };
  }
  A2Options a2 = opt.a2;
  if (opt.reading == A2Reading::circle) {
    a2.lo = 0.0;
    a2.hi = pi;
  }
  rep.a2 = q2e(pipeline_weight(rho, opt.reading), 2, a2);
  rep.a2_finite = !rep.a2.divergent;

  Coefficients ap = analyze(input.s_plus), am = analyze(input.s_minus);
  for (int M : opt.M_ladder)
    rep.sigma.push_back(
        {M, min_singular(build_hankel(ap, 0, M)), min_singular(build_hankel(am, 0, M))});
  const SigmaRow &first = rep.sigma.front(), &last = rep.sigma.back();
  rep.invertible = std::min(last.plus, last.minus) >= opt.sigma_floor &&
                   last.plus >= 0.5 * first.plus && last.minus >= 0.5 * first.minus;

  rep.defect = uniqueness_defect(input, opt.M_ladder, opt.defect_tol);
  rep.unique = rep.defect.unique;

  const bool good = rep.unique && rep.invertible;
  rep.coherent = rep.a2_finite == good;
  if (rep.coherent)
    rep.verdict = good ? "A2/unique/invertible" : "not-A2/non-unique";
  else
    rep.verdict = "resolution warning: indicators disagree";
  return rep;
}

}  // namespace jscat
