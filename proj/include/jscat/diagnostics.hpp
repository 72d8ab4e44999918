#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "jscat/forward.hpp"
#include "jscat/inverse.hpp"
#include "jscat/jacobi.hpp"

namespace jscat {

using MatrixFn = std::function<Eigen::Matrix2d(double x)>;
using ScalarFn = std::function<cplx(double x)>;
using VectorFn = std::function<Eigen::Vector2cd(double x)>;

// (h g)(z) = int_{-2}^{2} g(x) / (z - x) dx for z off [-2, 2], midpoint rule
// in x = 2 cos(theta) with n nodes.
cplx frak_h(const ScalarFn& g, cplx z, int n = 2048);
Eigen::Vector2cd frak_h(const VectorFn& g, cplx z, int n = 2048);

enum class Approach { below, above };  // x - i0, x + i0

// Boundary value PV int g(y)/(x - y) dy +- i pi g(x) (+ for x - i0).
cplx frak_h_boundary(const ScalarFn& g, double x, Approach side, int n = 2048);

// Residual of [F- f-; F+ f+](zeta) = p0 Phi(zeta) h(rho f^)(z(zeta)) for
// f = sum_m f[m] e_m, at each zeta in the list. Returns the largest
// relative difference.
struct CauchyIdentityReport {
  double residual = 0.0;
  std::vector<double> per_point;
};
CauchyIdentityReport cauchy_identity_check(const JacobiOperator& J, const std::vector<std::pair<int, double>>& f,
                                   const std::vector<cplx>& zetas, int n = 4096);
// Interior sample points used by default.
std::vector<cplx> default_interior_zetas();

// Density as a function of theta, rho(2 cos theta).
using ThetaDensity = std::function<Eigen::Matrix2d(double theta)>;

struct Bump {
  double center = 0.0;
  double width = 0.1;
  Eigen::Vector2cd xi = Eigen::Vector2cd::Zero();
  Eigen::Vector2cd operator()(double x) const;
  Eigen::Vector2cd derivative(double x) const;
};

// [int (h g)^* rho^{-1} (h g)(x - i0) + same at x + i0] / int g^* rho^{-1} g.
double transform_inequality_ratio(const ThetaDensity& rho, const Bump& g, int n = 1024);

struct TransformInequalityReport {
  double C = 0.0;
  int best_trial = -1;
  Bump best;
  std::vector<double> ratios;
};
// Random bumps inside (-2, 2); the same seed gives the same bumps at any n.
TransformInequalityReport transform_inequality_estimate(const ThetaDensity& rho, int trials, std::uint64_t seed,
                                          int n = 1024);

// Piecewise-constant samples of a weight on cells of [lo, hi]. dim 1 weights
// live in the (0, 0) entry.
class MatrixWeight {
 public:
  static MatrixWeight sample(const MatrixFn& w, int dim, int cells, double lo = -2.0, double hi = 2.0);
  static MatrixWeight scalar(const std::function<double(double)>& w, int cells, double lo = -2.0,
                             double hi = 2.0);
  // From values on the cells directly.
  static MatrixWeight from_cells(std::vector<Eigen::Matrix2d> values, int dim, double lo, double hi);

  int dim() const { return dim_; }
  int cells() const { return static_cast<int>(W_.size()); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double cell_width() const { return h_; }
  double x(int i) const { return lo_ + (i + 0.5) * h_; }
  const Eigen::Matrix2d& W(int i) const { return W_[i]; }
  const Eigen::Matrix2d& W_inv(int i) const { return Winv_[i]; }
  // smallest eigenvalue over the cells
  double lower_bound() const { return lower_; }

  // int over (a, b) intersected with [lo, hi] of W (or W^{-1}).
  Eigen::Matrix2d integral(double a, double b, bool inverse = false) const;

 private:
  void build();
  int dim_ = 1;
  double lo_ = -2.0, hi_ = 2.0, h_ = 0.0, lower_ = 0.0;
  std::vector<Eigen::Matrix2d> W_, Winv_;
  std::vector<Eigen::Matrix<long double, 2, 2>> pre_, pre_inv_;
};

// || <W>^{1/2} <W^{-1}>^{1/2} || over I = (x - delta, x + delta), averages
// taken as (1 / |I|) int_{I cap E}.
double a2_quotient(const MatrixWeight& W, double x, double delta);

struct A2Row {
  double x;
  double delta;
  double value;
};

struct A2Options {
  int n0 = 64;           // cells at level 0
  int levels = 10;       // refinements; level k has n0 2^k cells and scales 2^0..2^-k
  double lo = -2.0;
  double hi = 2.0;
  double divergence_ratio = 1.5;
  int divergence_span = 3;
};

struct A2Report {
  double Q = 0.0;                    // at the finest level
  std::vector<A2Row> table;          // largest quotient per scale at the finest level
  std::vector<double> scale_trend;   // Q restricted to delta = 2^-j, finest level
  std::vector<double> level_trend;   // Q per refinement level
  bool divergent = false;            // level_trend grew by divergence_ratio over the span
};

// Lattice: centers spaced delta / 4 from lo, scales delta = 2^-j.
A2Report q2e(const MatrixFn& w, int dim, const A2Options& opt = {});
// Single level on an already sampled weight.
A2Report q2e(const MatrixWeight& W, int max_scale_exponent);

struct ProjectionNorm {
  double value = 0.0;
  int iterations = 0;
  bool stalled = false;  // 30 iterations without 1e-6 stagnation
};

// || chi_E W^{1/2} P+ W^{-1/2} chi_E || with P+ = (I + i H) / 2, H the discrete
// Hilbert transform on grid_n midpoints of [-L, L]; W is the identity off E.
ProjectionNorm weighted_projection_norm(const MatrixFn& w, int dim, double L, int grid_n,
                                        double e_lo = -2.0, double e_hi = 2.0);

struct DoublingReport {
  bool holds = false;
  bool premise = false;  // I centered in E and |(lambda I \ I) cap E| >= |I cap E|
  double factor = 0.0;   // 1 + eta^2 / (lambda^2 Q^2)
  double min_eig = 0.0;  // of W(lambda I) - factor W(I), relative to |W(lambda I)|
};

// W(lambda I) >= (1 + eta^2 / (lambda^2 Q^2)) W(I), W(I) = int_{I cap E} W.
DoublingReport doubling_check(const MatrixWeight& W, double center, double delta, double lambda,
                              double Q, double eta = 1.0);

struct PoissonReport {
  bool holds = false;
  double C = 0.0;
  double min_eig = 0.0;  // of C <W>_I - <W>_{z0}, relative
  Eigen::Matrix2d poisson_average;
  Eigen::Matrix2d interval_average;
};

// <W>_{z0} <= C <W>_I with z0 = center + i delta and
// C = 2 lambda^4 Q^4 (1 + eta^2 / (lambda^2 Q^2)) / (pi eta^4), lambda = 2 / eta.
PoissonReport poisson_check(const MatrixWeight& W, double center, double delta, double Q,
                            double eta = 0.5);

enum class A2Reading { interval, circle };

struct PanelOptions {
  std::vector<int> M_ladder{64, 128, 256};
  A2Options a2{};
  A2Reading reading = A2Reading::interval;
  double sigma_floor = 0.05;
  double defect_tol = 1e-6;
};

struct SigmaRow {
  int M;
  double plus;
  double minus;
};

struct PanelReport {
  A2Report a2;
  bool a2_finite = false;
  std::vector<SigmaRow> sigma;
  bool invertible = false;
  UniquenessDefect defect;
  bool unique = false;
  bool coherent = false;
  std::string verdict;  // "A2/unique/invertible", "not-A2/non-unique", or a warning
};

// Weight rho(x) on [-2, 2] (interval reading) or rho(2 cos theta) 2 sin theta
// on [0, pi] (circle reading).
MatrixFn pipeline_weight(const ThetaDensity& rho, A2Reading reading);

// J may be null; the density then comes from the kernel basis of s_+.
PanelReport equivalence_panel(const ReflectionInput& input, const JacobiOperator* J,
                            const PanelOptions& opt = {});

}  // namespace jscat
