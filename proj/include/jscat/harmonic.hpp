#pragma once

#include <vector>

#include "jscat/common.hpp"

namespace jscat {

// Uniform grid t_j = exp(2 pi i j / N) on the unit circle, N a power of two.
// Points are mirrored so that conj(t_j) == t_{N-j} holds bit for bit.
class CircleGrid {
 public:
  explicit CircleGrid(int n);

  int size() const { return n_; }
  cplx point(int j) const { return points_[j]; }
  double angle(int j) const { return 2.0 * pi * j / n_; }
  int mirror(int j) const { return (n_ - j) & (n_ - 1); }
  const std::vector<cplx>& points() const { return points_; }

 private:
  int n_;
  std::vector<cplx> points_;
};

// Shared immutable grid of a given size.
const CircleGrid& grid_of(int n);

bool is_power_of_two(int n);

class CircleFunction {
 public:
  CircleFunction() = default;
  explicit CircleFunction(int n, cplx fill = 0.0);
  explicit CircleFunction(std::vector<cplx> values);

  template <class F>
  static CircleFunction from(int n, F&& f) {
    CircleFunction out(n);
    const auto& g = grid_of(n);
    for (int j = 0; j < n; ++j) out.v_[j] = f(g.point(j));
    return out;
  }

  int size() const { return static_cast<int>(v_.size()); }
  const CircleGrid& grid() const { return grid_of(size()); }
  cplx operator[](int j) const { return v_[j]; }
  cplx& operator[](int j) { return v_[j]; }
  const std::vector<cplx>& values() const { return v_; }

  CircleFunction conj() const;
  // f(conj t) at every node.
  CircleFunction reflected() const;

  CircleFunction& operator+=(const CircleFunction& o);
  CircleFunction& operator-=(const CircleFunction& o);
  CircleFunction& operator*=(const CircleFunction& o);
  CircleFunction& operator*=(cplx a);

 private:
  std::vector<cplx> v_;
};

CircleFunction operator+(CircleFunction a, const CircleFunction& b);
CircleFunction operator-(CircleFunction a, const CircleFunction& b);
CircleFunction operator*(CircleFunction a, const CircleFunction& b);
CircleFunction operator*(CircleFunction a, cplx s);
CircleFunction operator*(cplx s, CircleFunction a);

// Two-sided coefficients c_k, k in [-N/2, N/2).
class Coefficients {
 public:
  Coefficients() = default;
  explicit Coefficients(int n) : n_(n), c_(n, 0.0) {}

  int size() const { return n_; }
  int kmin() const { return -n_ / 2; }
  int kmax() const { return n_ / 2 - 1; }
  bool in_range(int k) const { return k >= kmin() && k <= kmax(); }
  cplx operator()(int k) const { return in_range(k) ? c_[k + n_ / 2] : cplx(0.0); }
  cplx& at(int k);
  const std::vector<cplx>& raw() const { return c_; }
  std::vector<cplx>& raw() { return c_; }

 private:
  int n_ = 0;
  std::vector<cplx> c_;
};

Coefficients analyze(const CircleFunction& f);
CircleFunction synthesize(const Coefficients& c);

// Sum of c_k t^k at an arbitrary point (direct evaluation).
cplx evaluate(const Coefficients& c, cplx t);

CircleFunction riesz_project(const CircleFunction& f);

// t -> conj(t) f(conj t); on coefficients c_k -> c_{-k-1}.
CircleFunction star(const CircleFunction& f);

double sup_norm(const CircleFunction& f);
// max |f(conj t) - conj f(t)|
double symmetry_defect(const CircleFunction& f);
// Replaces f by (f + conj f(conj t)) / 2.
CircleFunction symmetrized(const CircleFunction& f);

cplx l2_inner(const CircleFunction& f, const CircleFunction& g);
double l2_norm(const CircleFunction& f);

// (1/N) sum [f + star(s f)] conj(g)
cplx szego_inner(const CircleFunction& f, const CircleFunction& g, const CircleFunction& s_sym);

struct OuterOptions {
  double log_floor = 50.0;
  // A node is treated as an isolated zero when w_j < zero_rel * max w
  // and w_j < zero_drop * min(neighbours).
  bool factor_zeros = true;
  double zero_rel = 1e-6;
  double zero_drop = 0.01;
};

struct OuterFunction {
  CircleFunction boundary;
  double value_at_zero = 0.0;
  // Grid nodes where w vanished and a factor (1 - conj(t_j) t) was split off.
  std::vector<int> zero_nodes;
  // boundary / conj(boundary), finite also at the zero nodes.
  CircleFunction phase;
};

OuterFunction outer_from_modulus(const CircleFunction& w, const OuterOptions& opt = {});

// Mean of max(log w, -floor) over the grid.
double clipped_log_mean(const CircleFunction& w, double log_floor);

}  // namespace jscat
