#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "jscat/common.hpp"

namespace jscat {

// Two-sided Jacobi matrix (J x)_n = p_n x_{n-1} + q_n x_n + p_{n+1} x_{n+1}
// with p_n = 1, q_n = 0 outside the window [n_min, n_max].
class JacobiOperator {
 public:
  JacobiOperator() = default;
  JacobiOperator(int n_min, std::vector<double> p, std::vector<double> q);

  static JacobiOperator free() { return {}; }

  int n_min() const { return n_min_; }
  int n_max() const { return n_min_ + static_cast<int>(p_.size()) - 1; }
  bool empty() const { return p_.empty(); }
  bool in_window(int n) const { return n >= n_min() && n <= n_max(); }
  double p(int n) const { return in_window(n) ? p_[n - n_min_] : 1.0; }
  double q(int n) const { return in_window(n) ? q_[n - n_min_] : 0.0; }
  const std::vector<double>& p_window() const { return p_; }
  const std::vector<double>& q_window() const { return q_; }

  // Smallest window [lo, hi] containing every non-free coefficient and 0.
  int support_lo() const { return empty() ? 0 : std::min(n_min(), 0); }
  int support_hi() const { return empty() ? 0 : std::max(n_max(), 0); }

  // Copy with window [lo, hi] (coefficients outside the old window are free).
  JacobiOperator rewindowed(int lo, int hi) const;

  // Largest |p - 1|, |q| difference to another operator over both windows.
  double max_difference(const JacobiOperator& other) const;

 private:
  int n_min_ = 0;
  std::vector<double> p_;
  std::vector<double> q_;
};

enum class Side { plus, minus };

inline cplx joukowski(cplx zeta) { return zeta + 1.0 / zeta; }

// r_+ = <(J_+ - z)^{-1} e_0, e_0>, r_- = <(J_- - z)^{-1} e_{-1}, e_{-1}>,
// z = zeta + 1/zeta, by the finite continued fraction with tail -zeta.
cplx weyl_half_line(Side side, const JacobiOperator& J, cplx zeta);

// Block of (J - z)^{-1} on span(e_{-1}, e_0).
Eigen::Matrix2cd resolvent_2x2(const JacobiOperator& J, cplx zeta);

// Same, shifting zeta radially inward by 1e-9 after a PoleHit.
Eigen::Matrix2cd resolvent_2x2_retry(const JacobiOperator& J, cplx zeta);

struct SpectralDensity {
  std::vector<double> theta;
  std::vector<double> x;
  std::vector<Eigen::Matrix2d> rho;
};

// rho(2 cos theta) = -Im R(z(e^{i theta})) / pi for theta in (0, pi).
Eigen::Matrix2d density_at(const JacobiOperator& J, double theta);
SpectralDensity spectral_density(const JacobiOperator& J, const std::vector<double>& theta);

// theta_j = 2 pi j / n for j in [guard, n/2 - guard].
std::vector<double> interior_thetas(int n, int guard = 2);
// Midpoint nodes (j + 1/2) pi / n, j = 0..n-1.
std::vector<double> midpoint_thetas(int n);

struct PolyValues {
  std::vector<double> P;
  std::vector<double> Q;
};

// Orthonormal polynomials P_0..P_nmax and second-kind Q_0..Q_nmax of the
// half-line matrix. The minus side runs over e_{-1}, e_{-2}, ... with
// q^-_n = q_{-n-1}, p^-_n = p_{-n}.
PolyValues orthonormal_polys(Side side, const JacobiOperator& J, int n_max, double x);
struct CPolyValues {
  std::vector<cplx> P;
  std::vector<cplx> Q;
};
CPolyValues orthonormal_polys(Side side, const JacobiOperator& J, int n_max, cplx x);

struct SzegoCheck {
  bool pass = false;
  double value = 0.0;          // clipped mean of log det rho over the nodes
  double value_wide = 0.0;     // same with four times the floor
};

// Nodes are assumed uniform in theta over (0, pi).
SzegoCheck szego_class_check(const SpectralDensity& density, double log_floor = 50.0);

// Eigenvalues of J outside [-2, 2], located as zeros of the Jost Wronskian
// at real zeta in (-1, 1).
std::vector<double> off_interval_eigenvalues(const JacobiOperator& J);

// Dense truncation of J on indices [lo, hi].
Eigen::MatrixXd dense_truncation(const JacobiOperator& J, int lo, int hi);

}  // namespace jscat
