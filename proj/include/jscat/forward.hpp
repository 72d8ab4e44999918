#pragma once

#include <Eigen/Dense>
#include <vector>

#include "jscat/harmonic.hpp"
#include "jscat/jacobi.hpp"

namespace jscat {

// Jost solutions at one point zeta.
//   e+(n) = zeta^n for n beyond the right edge of the window,
//   e-(n) = zeta^n for n beyond the left edge, in the mirrored indexing
//   e-(n) = f(-n-1) where f solves the recurrence of J.
struct JostPoint {
  int n_lo = 0;
  int n_hi = 0;
  std::vector<cplx> plus;   // e+(n), n in [n_lo, n_hi]
  std::vector<cplx> minus;  // e-(n), n in [n_lo, n_hi]
  cplx e_plus(int n) const { return plus.at(n - n_lo); }
  cplx e_minus(int n) const { return minus.at(n - n_lo); }
};

// Index range used for a Jacobi operator: the support with a margin.
struct JostRange {
  int lo;
  int hi;
};
JostRange jost_range(const JacobiOperator& J, int margin = 3);

JostPoint jost_at(const JacobiOperator& J, cplx zeta, int margin = 3);

class JostFamily {
 public:
  JostFamily() = default;
  JostFamily(JacobiOperator J, int n_lo, int n_hi, std::vector<CircleFunction> plus,
             std::vector<CircleFunction> minus);

  const JacobiOperator& op() const { return J_; }
  int n_lo() const { return n_lo_; }
  int n_hi() const { return n_hi_; }
  int grid_size() const { return plus_.front().size(); }
  const CircleFunction& e_plus(int n) const { return plus_.at(n - n_lo_); }
  const CircleFunction& e_minus(int n) const { return minus_.at(n - n_lo_); }

 private:
  JacobiOperator J_;
  int n_lo_ = 0, n_hi_ = 0;
  std::vector<CircleFunction> plus_, minus_;
};

// Throws OffIntervalSpectrum when J has eigenvalues outside [-2, 2].
JostFamily jost_solutions(const JacobiOperator& J, int grid_size, int margin = 3);

// Max pointwise residual of z e+(n) = p_n e+(n-1) + q_n e+(n) + p_{n+1} e+(n+1),
// and the mirrored relation for e-, over the interior of the range.
double recurrence_residual(const JostFamily& jost);

struct ScatteringMatrix {
  CircleFunction s;
  CircleFunction s_plus;
  CircleFunction s_minus;
  double s_at_zero = 0.0;
  // Nodes at t = +-1 where both Wronskians vanished and values were
  // interpolated from neighbours.
  std::vector<int> resonant_nodes;
  // Max difference between s (resp. s_+) from the left-side and right-side solves.
  double cross_check_s = 0.0;
  double cross_check_s_plus = 0.0;
};

ScatteringMatrix extract_scattering(const JostFamily& jost);

struct ScatteringInvariants {
  double unitarity_plus = 0.0;   // max | |s|^2 + |s+|^2 - 1 |
  double unitarity_minus = 0.0;  // max | |s|^2 + |s-|^2 - 1 |
  double symmetry = 0.0;         // max symmetry defect of s, s+, s-
  double compatibility = 0.0;    // max | conj(s+) s + conj(s) s- |
  double negative_mass = 0.0;    // largest |c_k(s)| for k < 0
  double max() const;
};

ScatteringInvariants scattering_invariants(const ScatteringMatrix& sm);

struct WronskianReport {
  double n_dependence = 0.0;  // max_n,t |W_n(t) - W_{n_lo+1}(t)|
  double vs_zprime = 0.0;     // max_n,t |W_n(t) - (1 - t^{-2})|
};

// W_n(t) = conj(t) p_n {e+(n,t) e+(n-1,conj t) - e+(n-1,t) e+(n,conj t)}.
WronskianReport wronskian_check(const JostFamily& jost);

// Same form for an arbitrary family of functions indexed n in [n_lo, n_hi],
// with p supplied by a Jacobi operator.
WronskianReport wronskian_check(const std::vector<CircleFunction>& e_plus, int n_lo,
                                const JacobiOperator& J);

// Phi(t) = [[e-(-1), -e-(0)], [-e+(0), e+(-1)]],
// max over nodes of |conj(t) Phi(conj t) + S(t) Phi(t)|.
double jump_relation_residual(const JostFamily& jost, const ScatteringMatrix& sm);

// s e-/+(0) = conj(t) e+/-(-1, conj t) + s+/- e+/-(-1), and the n = -1 analogue.
double duality_residual(const JostFamily& jost, const ScatteringMatrix& sm);

// max_n |s e+(n) - t^n - s- t^{-n-1}| over n left of the window, and the
// mirrored statement for e-.
double asymptotics_residual(const JostFamily& jost, const ScatteringMatrix& sm);

// max |s + z' / (p0 {e-(-1) e+(-1) - e-(0) e+(0)})|
double transmission_formula_residual(const JostFamily& jost, const ScatteringMatrix& sm);

struct ConsistencyReport {
  double det_relative = 0.0;   // max |det(2 pi p0 rho) - |s|^2| / |s|^2
  double matrix_relative = 0.0;  // 2 pi p0^2 rho vs Re(PhiT^{-1*} PhiT^{-1} |z'|)
  double matrix_imag = 0.0;      // size of the imaginary part of the right side
  std::vector<ConsistencyFailure::Row> table;
};

// Compares the resolvent density of J at interior grid nodes with the
// scattering data. Throws ConsistencyFailure when either residual exceeds tol.
ConsistencyReport density_scattering_consistency(const JacobiOperator& J, const JostFamily& jost,
                                                 const ScatteringMatrix& sm, double tol = 1e-6,
                                                 int guard = 2);

// Density numerator 2 pi |z'| rho(z(t)) from e+(-1), e+(0), s, s e-(0), s e-(-1):
//   |s|^2 r1^* r1 + (s r2)^* (s r2),  r1 = [e+(-1), e+(0)], r2 = [e-(0), e-(-1)].
Eigen::Matrix2d density_numerator(cplx ep_m1, cplx ep_0, cplx s, cplx s_em_0, cplx s_em_m1);

}  // namespace jscat
