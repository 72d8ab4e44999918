#pragma once

#include <optional>
#include <string>

#include "jscat/forward.hpp"
#include "jscat/inverse.hpp"
#include "jscat/jacobi.hpp"

namespace jscat {

// {"n_min": int, "p": [...], "q": [...]}
JacobiOperator parse_jacobi_json(const std::string& text);
JacobiOperator read_jacobi_json(const std::string& path);
std::string jacobi_json(const JacobiOperator& J);

// {"grid_size": N, "coeffs_s_plus": [[k, v], ...]} with optional
// "coeffs_s" and "coeffs_s_minus" in the same form; values are real.
struct ScatteringFile {
  int grid_size = 0;
  CircleFunction s_plus;
  std::optional<CircleFunction> s;
  std::optional<CircleFunction> s_minus;
  std::optional<double> s_at_zero;

  ReflectionInput input() const;
};

ScatteringFile parse_scattering_json(const std::string& text);
ScatteringFile read_scattering_json(const std::string& path);
std::string scattering_json(const ScatteringFile& f);
ScatteringFile scattering_file(const ScatteringMatrix& sm);
ScatteringFile scattering_file(const ReflectionInput& in);

// x, rho11, Re rho12, Im rho12, rho22
std::string density_csv(const SpectralDensity& d);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace jscat
