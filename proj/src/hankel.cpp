#include "jscat/hankel.hpp"

#include <cmath>
#include <string>

namespace jscat {

HankelOperator build_hankel(const Coefficients& a, int shift, int M) {
  if (M <= 0) throw ValidationError("truncation must be positive");
  // Coefficients beyond the grid's range count as zero.
  if (M > a.size() / 2)
    throw ValidationError("truncation " + std::to_string(M) + " exceeds half the grid size " +
                          std::to_string(a.size()));
  std::vector<double> diag(2 * M - 1);
  for (int d = 0; d < 2 * M - 1; ++d) {
    cplx c = a(-(d + 1) - 2 * shift);
    if (std::abs(c.imag()) > 1e-10)
      throw SymbolAsymmetry("symbol coefficient a_" + std::to_string(-(d + 1) - 2 * shift) +
                            " has imaginary part " + std::to_string(c.imag()));
    diag[d] = c.real();
  }
  HankelOperator H;
  H.shift = shift;
  H.trunc = M;
  H.matrix.resize(M, M);
  for (int j = 0; j < M; ++j)
    for (int k = 0; k < M; ++k) H.matrix(j, k) = diag[j + k];
  return H;
}

HankelOperator build_hankel(const CircleFunction& s_plus, int shift, int M) {
  return build_hankel(analyze(s_plus), shift, M);
}

const std::vector<double>& default_eps_ladder() {
  static const std::vector<double> ladder{1e-2, 1e-4, 1e-6, 1e-8, 1e-10};
  return ladder;
}

ReproducingKernel reproducing_kernel(const HankelOperator& H, const std::vector<double>& eps_ladder,
                                     double rel_tol) {
  if (eps_ladder.empty()) throw ValidationError("empty eps ladder");
  const int M = H.trunc;
  Eigen::MatrixXd A = H.matrix + Eigen::MatrixXd::Identity(M, M);
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(M);
  e0(0) = 1.0;
  ReproducingKernel k;
  for (double eps : eps_ladder) {
    Eigen::MatrixXd B = A;
    B.diagonal().array() += eps;
    Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() != Eigen::Success) {
      k.eps_trace.emplace_back(eps, NAN);
      throw NoConvergence("I + H + eps is not positive definite at eps = " + std::to_string(eps),
                          k.eps_trace);
    }
    k.coeffs = llt.solve(e0);
    k.value_at_zero = k.coeffs(0);
    k.eps_trace.emplace_back(eps, k.value_at_zero);
  }
  // Limit step: take the unregularized solve when I + H factors and agrees
  // with the ladder.
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd x = llt.solve(e0);
    if (x.allFinite() && x(0) > 0.0 && std::abs(x(0) - k.value_at_zero) <= 1e-6 * x(0)) {
      k.coeffs = x;
      k.value_at_zero = x(0);
      k.eps_trace.emplace_back(0.0, x(0));
    }
  }
  if (k.eps_trace.size() >= 2) {
    double a = k.eps_trace[k.eps_trace.size() - 2].second, b = k.value_at_zero;
    if (!(std::abs(b - a) <= rel_tol * std::abs(b)))
      throw NoConvergence("k(0) did not stabilize along the eps ladder", k.eps_trace);
  }
  if (!(k.value_at_zero > 0.0)) throw NoConvergence("k(0) is not positive", k.eps_trace);
  return k;
}

double min_singular(const HankelOperator& H) {
  Eigen::MatrixXd A = H.matrix + Eigen::MatrixXd::Identity(H.trunc, H.trunc);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().minCoeff();
}

}  // namespace jscat
