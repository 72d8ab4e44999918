#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jscat/inverse.hpp"
#include "jscat/jacobi.hpp"

namespace jscat {

JacobiOperator free_matrix();

// p_0 = c, all other coefficients free. No eigenvalues off [-2, 2] for 0 < c <= 1.
JacobiOperator single_site(double c);

// Window of the given width centred near 0 with |p - 1|, |q| <= magnitude,
// resampled until no eigenvalue lies off [-2, 2]. Throws Error after max_tries.
JacobiOperator random_window(int width, double magnitude, std::uint64_t seed, int max_tries = 10000);

// s_+ = A(conj t) / P, s = 1 / P with P outer, |P|^2 = 1 + |A|^2, A real polynomial.
ReflectionInput bernstein_szego(const std::vector<double>& poly_coeffs, int grid);

struct ExampleData {
  ReflectionInput input;
  double a_plus = 0.0;
  double a_minus = 0.0;
  int delta_degree = 0;
  double min_abs_s = 0.0;
  // max |s - closed form| over the grid
  double closed_form_residual = 0.0;
};

// v_+- = a_+- t, u_+- = sqrt(1 - a_+-^2), s0_+- = -a_+- conj(t), Delta = t^d,
// S = diag(s0_-, s0_+) + U E (I - V E)^{-1} U.
ExampleData example_nonunique(double a_plus, double a_minus, int delta_degree, int grid);

// Closed form of the transmission coefficient of the example.
cplx example_s(double a_plus, double a_minus, int delta_degree, cplx t);

// Fourier coefficients of s_+ beyond a quarter of the grid are below tol.
bool resolved_on_grid(const JacobiOperator& J, int grid, double tol = 1e-10);

struct GalleryEntry {
  std::string name;
  bool has_matrix = false;
  JacobiOperator J;       // when has_matrix
  ReflectionInput input;  // always filled (from the forward map for matrices)
};

// free, three single-site, three random windows, Bernstein-Szego, example.
std::vector<GalleryEntry> standard_gallery(int grid, std::uint64_t seed = 7);

}  // namespace jscat
