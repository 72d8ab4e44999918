#include "jscat/jacobi.hpp"

#include <cmath>

namespace jscat {

JacobiOperator::JacobiOperator(int n_min, std::vector<double> p, std::vector<double> q)
    : n_min_(n_min), p_(std::move(p)), q_(std::move(q)) {
  if (p_.size() != q_.size())
    throw ValidationError("p and q must have equal length (" + std::to_string(p_.size()) +
                          " vs " + std::to_string(q_.size()) + ")");
  for (size_t i = 0; i < p_.size(); ++i) {
    if (!std::isfinite(p_[i]) || !std::isfinite(q_[i]))
      throw ValidationError("coefficient at index " + std::to_string(n_min_ + int(i)) +
                            " is not finite");
    if (!(p_[i] > 0.0))
      throw ValidationError("p must be positive (index " + std::to_string(n_min_ + int(i)) + ")");
  }
}

JacobiOperator JacobiOperator::rewindowed(int lo, int hi) const {
  std::vector<double> p, q;
  for (int n = lo; n <= hi; ++n) {
    p.push_back(this->p(n));
    q.push_back(this->q(n));
  }
  return JacobiOperator(lo, std::move(p), std::move(q));
}

double JacobiOperator::max_difference(const JacobiOperator& o) const {
  int lo = std::min(support_lo(), o.support_lo()) - 1;
  int hi = std::max(support_hi(), o.support_hi()) + 1;
  double m = 0.0;
  for (int n = lo; n <= hi; ++n) {
    m = std::max(m, std::abs(p(n) - o.p(n)));
    m = std::max(m, std::abs(q(n) - o.q(n)));
  }
  return m;
}

namespace {

cplx safe_inverse(cplx d) {
  if (std::abs(d) < 1e-14) throw PoleHit("continued fraction denominator vanished");
  return 1.0 / d;
}

}  // namespace

cplx weyl_half_line(Side side, const JacobiOperator& J, cplx zeta) {
  if (std::abs(zeta) > 1.0 + 1e-12 || zeta == cplx(0.0))
    throw ValidationError("weyl_half_line needs 0 < |zeta| <= 1");
  const cplx z = joukowski(zeta);
  cplx r = -zeta;
  if (J.empty()) return r;
  if (side == Side::plus) {
    for (int k = J.n_max(); k >= 0; --k) {
      double pk1 = J.p(k + 1);
      r = safe_inverse(J.q(k) - z - pk1 * pk1 * r);
    }
  } else {
    for (int k = J.n_min(); k <= -1; ++k) {
      double pk = J.p(k);
      r = safe_inverse(J.q(k) - z - pk * pk * r);
    }
  }
  return r;
}

Eigen::Matrix2cd resolvent_2x2(const JacobiOperator& J, cplx zeta) {
  cplx rm = weyl_half_line(Side::minus, J, zeta);
  cplx rp = weyl_half_line(Side::plus, J, zeta);
  double p0 = J.p(0);
  Eigen::Matrix2cd A;
  A << safe_inverse(rm), p0, p0, safe_inverse(rp);
  cplx det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
  if (std::abs(det) < 1e-300) throw PoleHit("resolvent block is singular");
  Eigen::Matrix2cd R;
  R << A(1, 1), -A(0, 1), -A(1, 0), A(0, 0);
  return R / det;
}

Eigen::Matrix2cd resolvent_2x2_retry(const JacobiOperator& J, cplx zeta) {
  try {
    return resolvent_2x2(J, zeta);
  } catch (const PoleHit&) {
    return resolvent_2x2(J, zeta * (1.0 - 1e-9));
  }
}

Eigen::Matrix2d density_at(const JacobiOperator& J, double theta) {
  Eigen::Matrix2cd R = resolvent_2x2_retry(J, std::polar(1.0, theta));
  Eigen::Matrix2d rho = -R.imag() / pi;
  return 0.5 * (rho + rho.transpose());
}

SpectralDensity spectral_density(const JacobiOperator& J, const std::vector<double>& theta) {
  SpectralDensity d;
  d.theta = theta;
  d.x.resize(theta.size());
  d.rho.resize(theta.size());
  parallel_for(static_cast<int>(theta.size()), [&](int i) {
    d.x[i] = 2.0 * std::cos(theta[i]);
    d.rho[i] = density_at(J, theta[i]);
  });
  return d;
}

std::vector<double> interior_thetas(int n, int guard) {
  std::vector<double> out;
  for (int j = guard; j <= n / 2 - guard; ++j) out.push_back(2.0 * pi * j / n);
  return out;
}

std::vector<double> midpoint_thetas(int n) {
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = (j + 0.5) * pi / n;
  return out;
}

namespace {

template <class T>
void run_polys(Side side, const JacobiOperator& J, int n_max, T x, std::vector<T>& P,
               std::vector<T>& Q) {
  if (n_max < 0) throw ValidationError("n_max must be nonnegative");
  auto qq = [&](int n) { return side == Side::plus ? J.q(n) : J.q(-n - 1); };
  auto pp = [&](int n) { return side == Side::plus ? J.p(n) : J.p(-n); };
  P.assign(n_max + 1, T(0));
  Q.assign(n_max + 1, T(0));
  P[0] = T(1);
  if (n_max == 0) return;
  P[1] = (x - qq(0)) / pp(1);
  Q[1] = T(1) / pp(1);
  for (int n = 1; n < n_max; ++n) {
    P[n + 1] = ((x - qq(n)) * P[n] - pp(n) * P[n - 1]) / pp(n + 1);
    Q[n + 1] = ((x - qq(n)) * Q[n] - pp(n) * Q[n - 1]) / pp(n + 1);
  }
}

}  // namespace

PolyValues orthonormal_polys(Side side, const JacobiOperator& J, int n_max, double x) {
  PolyValues out;
  run_polys(side, J, n_max, x, out.P, out.Q);
  return out;
}

CPolyValues orthonormal_polys(Side side, const JacobiOperator& J, int n_max, cplx x) {
  CPolyValues out;
  run_polys(side, J, n_max, x, out.P, out.Q);
  return out;
}

SzegoCheck szego_class_check(const SpectralDensity& density, double log_floor) {
  auto mean_at = [&](double floor) {
    double acc = 0.0;
    for (const auto& r : density.rho) {
      double d = r.determinant();
      acc += d > 0.0 ? std::max(std::log(d), -floor) : -floor;
    }
    return density.rho.empty() ? -floor : acc / density.rho.size();
  };
  SzegoCheck c;
  c.value = mean_at(log_floor);
  c.value_wide = mean_at(4.0 * log_floor);
  // An integrable log det does not notice the floor moving.
  c.pass = c.value > -log_floor / 2 && c.value_wide >= c.value - 0.1;
  return c;
}

namespace {

// Wronskian p_1 (e+(0) f(1) - e+(1) f(0)) of the decaying solutions at
// real zeta, with both solutions rescaled by powers of zeta.
double jost_wronskian_real(const JacobiOperator& J, double zeta) {
  const double z = zeta + 1.0 / zeta;
  int hi = J.support_hi() + 2;
  int lo = J.support_lo() - 2;
  double a = zeta, b = 1.0;  // e+(hi+1), e+(hi) scaled by zeta^{-hi}
  for (int n = hi; n >= 1; --n) {
    double prev = ((z - J.q(n)) * b - J.p(n + 1) * a) / J.p(n);
    a = b;
    b = prev;
  }
  double ep0 = b, ep1 = a;
  double c = zeta, d = 1.0;  // f(lo-1), f(lo) scaled by zeta^{lo+1}
  for (int m = lo; m <= 0; ++m) {
    double next = ((z - J.q(m)) * d - J.p(m) * c) / J.p(m + 1);
    c = d;
    d = next;
  }
  double f0 = c, f1 = d;
  return J.p(1) * (ep0 * f1 - ep1 * f0);
}

}  // namespace

std::vector<double> off_interval_eigenvalues(const JacobiOperator& J) {
  std::vector<double> eig;
  if (J.empty()) return eig;
  double bound = 0.0;
  for (int n = J.support_lo() - 1; n <= J.support_hi() + 1; ++n)
    bound = std::max(bound, J.p(n) + std::abs(J.q(n)) + J.p(n + 1));
  if (bound <= 2.0) return eig;
  const double zmin = 0.5 * (bound - std::sqrt(bound * bound - 4.0));
  const int samples = 4000;
  const double umax = 1.0 - zmin * 0.999, umin = 1e-9;
  for (double sign : {1.0, -1.0}) {
    auto W = [&](double u) { return jost_wronskian_real(J, sign * (1.0 - u)); };
    double u_prev = umax, w_prev = W(u_prev);
    for (int i = 1; i <= samples; ++i) {
      double u = umax * std::pow(umin / umax, double(i) / samples);
      double w = W(u);
      if (w == 0.0 || (w > 0.0) != (w_prev > 0.0)) {
        double ua = u_prev, ub = u, wa = w_prev;
        for (int it = 0; it < 80 && w != 0.0; ++it) {
          double um = 0.5 * (ua + ub), wm = W(um);
          if ((wm > 0.0) == (wa > 0.0)) {
            ua = um;
            wa = wm;
          } else {
            ub = um;
          }
        }
        double zeta = sign * (1.0 - 0.5 * (ua + ub));
        eig.push_back(zeta + 1.0 / zeta);
      }
      u_prev = u;
      w_prev = w;
    }
  }
  return eig;
}

Eigen::MatrixXd dense_truncation(const JacobiOperator& J, int lo, int hi) {
  int m = hi - lo + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  for (int n = lo; n <= hi; ++n) {
    int i = n - lo;
    A(i, i) = J.q(n);
    if (n > lo) {
      A(i, i - 1) = J.p(n);
      A(i - 1, i) = J.p(n);
    }
  }
  return A;
}

}  // namespace jscat
