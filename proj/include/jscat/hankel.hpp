#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "jscat/harmonic.hpp"

namespace jscat {

// Truncated Hankel matrix of the symbol s_+ t^{2 shift}:
// entry (j, k) = a_{-(j+k+1) - 2 shift}, a the coefficients of s_+.
struct HankelOperator {
  int shift = 0;
  int trunc = 0;
  Eigen::MatrixXd matrix;
};

HankelOperator build_hankel(const Coefficients& s_plus, int shift, int M);
HankelOperator build_hankel(const CircleFunction& s_plus, int shift, int M);

const std::vector<double>& default_eps_ladder();

struct ReproducingKernel {
  Eigen::VectorXd coeffs;  // k = (I + H)^{-1} 1 in the monomial basis
  double value_at_zero = 0.0;
  std::vector<std::pair<double, double>> eps_trace;  // (eps, k(0))
  // k / sqrt(k(0)), the normalized kernel K.
  Eigen::VectorXd normalized() const { return coeffs / std::sqrt(value_at_zero); }
};

// Solves ((1 + eps) I + H) x = e_0 along the ladder, then at eps = 0 when
// I + H factors and the result agrees with the ladder.
// Throws NoConvergence unless the last two k(0) agree to rel_tol.
ReproducingKernel reproducing_kernel(const HankelOperator& H,
                                     const std::vector<double>& eps_ladder = default_eps_ladder(),
                                     double rel_tol = 1e-7);

// Smallest singular value of I + H at the stored truncation.
double min_singular(const HankelOperator& H);

}  // namespace jscat
