#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "jscat/forward.hpp"
#include "jscat/hankel.hpp"
#include "jscat/harmonic.hpp"
#include "jscat/jacobi.hpp"

namespace jscat {

struct ReflectionInput {
  CircleFunction s_plus;
  CircleFunction s;
  CircleFunction s_minus;
  double s_at_zero = 0.0;
  std::vector<int> s_zero_nodes;

  int grid_size() const { return s_plus.size(); }

  // s is the outer function with |s|^2 = 1 - |s_+|^2, s_- = -conj(s_+) s / conj(s).
  static ReflectionInput from_s_plus(const CircleFunction& s_plus, const OuterOptions& opt = {});
  // All three entries given; s(0) is read off the Fourier coefficients of s.
  static ReflectionInput from_triple(const CircleFunction& s_plus, const CircleFunction& s,
                                     const CircleFunction& s_minus);
  static ReflectionInput from_scattering(const ScatteringMatrix& sm);
};

// Throws ValidationError unless s_+ is real-symmetric with sup norm <= 1.
void validate_reflection(const CircleFunction& s_plus);

struct InverseOptions {
  int N = 4;        // recovered window [-N, N]
  int M = 256;      // Hankel truncation; negative shifts n use M + 2|n|
  std::vector<double> eps = default_eps_ladder();
  double gram_tol = 1e-4;
  double s_floor = 1e-8;
};

struct ReconstructionResult {
  JacobiOperator J;
  int n_lo = 0;  // basis index of kernels.front()
  std::vector<ReproducingKernel> kernels;
  std::vector<CircleFunction> basis;  // e+(n) = t^n K(t) on the grid
  double gram_residual = 0.0;
  double defect_plus = 0.0;
  double defect_minus = 0.0;
  std::vector<int> small_s_nodes;  // |s| < s_floor (dual reconstruction only)

  const CircleFunction& e(int n) const { return basis.at(n - n_lo); }
  const ReproducingKernel& kernel(int n) const { return kernels.at(n - n_lo); }
};

// Kernels of s t^{2n} for n in [n_lo, n_hi] and the functions t^n K on the grid.
struct KernelFamily {
  int n_lo = 0;
  std::vector<ReproducingKernel> kernels;
  std::vector<CircleFunction> basis;
};
KernelFamily kernel_family(const CircleFunction& symbol, int n_lo, int n_hi, int M,
                           const std::vector<double>& eps);

ReconstructionResult reconstruct(const ReflectionInput& input, const InverseOptions& opt = {});

struct DualImage {
  CircleFunction f_minus;    // zero at masked nodes
  CircleFunction s_f_minus;  // conj(t) f+(conj t) + s_+ f+, no division
  std::vector<int> masked;   // nodes with |s| < s_floor
};

// f- = (conj(t) f+(conj t) + s_+ f+) / s.
DualImage dual_map(const CircleFunction& f_plus, const ReflectionInput& input, double s_floor = 1e-8);

// ||f||^2 in the s-metric from the pair (s f+, s f-): (||s f+||^2 + ||s f-||^2) / 2.
cplx paired_inner(const CircleFunction& sf_plus, const CircleFunction& sf_minus,
                  const CircleFunction& sg_plus, const CircleFunction& sg_minus);

// Reconstruction from the basis built on s_- and mapped into L^2_{s+}.
ReconstructionResult reconstruct_dual(const ReflectionInput& input, const InverseOptions& opt = {});

struct DefectRow {
  int M;
  double plus;
  double minus;
};

struct UniquenessDefect {
  double plus = 0.0;   // 1 - s(0) K_{s+}(0) K_{s- t^-2}(0)
  double minus = 0.0;  // 1 - s(0) K_{s-}(0) K_{s+ t^-2}(0)
  std::vector<DefectRow> ladder;
  bool unique = false;  // both <= tol at the last M and not growing along the ladder
};

UniquenessDefect uniqueness_defect(const ReflectionInput& input,
                                   const std::vector<int>& M_ladder = {64, 128, 256},
                                   double tol = 1e-6,
                                   const std::vector<double>& eps = default_eps_ladder());

// Single-M defects.
std::pair<double, double> defects_at(const ReflectionInput& input, int M,
                                     const std::vector<double>& eps = default_eps_ladder());

struct FiniteMass {
  bool integrable = false;
  double value = 0.0;           // last refinement
  std::vector<double> trend;    // one entry per refinement
};

using DensityFn = std::function<Eigen::Matrix2d(double theta)>;

// int_E trace rho^{-1}(x) dx by the midpoint rule in theta at base_n, 2 base_n, ...
// Integrable when the last refinement changes the value by less than 5%.
FiniteMass finite_mass_test(const DensityFn& rho, int base_n = 256, int levels = 4);
// Single value from nodes assumed uniform in theta over (0, pi).
double finite_mass_value(const SpectralDensity& density);

// Trimmed two-sided series for evaluation at arbitrary points.
struct TrigSeries {
  int kmin = 0;
  std::vector<cplx> c;
  cplx operator()(cplx t) const;
  static TrigSeries from(const Coefficients& a, double rel_cut = 1e-17);
  static TrigSeries from_poly(const Eigen::VectorXd& coeffs, int shift, double rel_cut = 1e-17);
};

// Spectral density from the kernel basis of s_+:
//   2 pi |z'| rho(z(t)) = |s|^2 r1^* r1 + (s r2)^* (s r2)
// with r1 = [e+(-1), e+(0)] and s r2 obtained through the dual map.
class BasisDensity {
 public:
  BasisDensity(const ReflectionInput& input, int M = 256,
               const std::vector<double>& eps = default_eps_ladder());
  Eigen::Matrix2d operator()(double theta) const;
  Eigen::Matrix2d numerator(double theta) const;

 private:
  TrigSeries s_, sp_, em1_, e0_;
};

}  // namespace jscat
