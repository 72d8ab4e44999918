#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jscat {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct SzegoViolation : Error { using Error::Error; };
struct PoleHit : Error { using Error::Error; };
struct OffIntervalSpectrum : Error {
  OffIntervalSpectrum(const std::string& what, std::vector<double> eig)
      : Error(what), eigenvalues(std::move(eig)) {}
  std::vector<double> eigenvalues;
};
struct SymbolAsymmetry : Error { using Error::Error; };
struct NoConvergence : Error {
  NoConvergence(const std::string& what, std::vector<std::pair<double, double>> tr)
      : Error(what), trace(std::move(tr)) {}
  std::vector<std::pair<double, double>> trace;  // (eps, k(0))
};
struct KernelFailure : Error {
  KernelFailure(const std::string& what, int sh, std::vector<std::pair<double, double>> tr)
      : Error(what), shift(sh), trace(std::move(tr)) {}
  int shift;
  std::vector<std::pair<double, double>> trace;
};
struct GramFailure : Error { using Error::Error; };
struct ConsistencyFailure : Error {
  struct Row { double theta; double det_lhs; double det_rhs; double rel; };
  ConsistencyFailure(const std::string& what, std::vector<Row> t)
      : Error(what), table(std::move(t)) {}
  std::vector<Row> table;
};
struct SmallDenominator : Error {
  SmallDenominator(const std::string& what, std::vector<int> n)
      : Error(what), nodes(std::move(n)) {}
  std::vector<int> nodes;
};
struct EmptyIntersection : Error { using Error::Error; };

// Worker count: SCATTER_NUM_THREADS if set, else hardware concurrency.
int thread_count();

// Runs body(i) for i in [0, n). Each index must write only its own output.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace jscat
