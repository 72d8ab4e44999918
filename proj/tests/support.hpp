#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "jscat/harmonic.hpp"

namespace testing {

using jscat::cplx;

// Uniform in [-1, 1) from a fixed engine, identical on every platform.
inline double uniform(std::mt19937_64& rng) {
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

// Real-coefficient trig polynomial sum_{k=kmin}^{kmax} c_k t^k on a grid.
inline jscat::CircleFunction trig_poly(int n, int kmin, const std::vector<double>& c) {
  return jscat::CircleFunction::from(n, [&](cplx t) {
    cplx v = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) v += c[i] * std::pow(t, kmin + static_cast<int>(i));
    return v;
  });
}

inline std::vector<double> random_coeffs(std::mt19937_64& rng, int count, double scale = 1.0) {
  std::vector<double> c(count);
  for (auto& x : c) x = scale * uniform(rng);
  return c;
}

// Random real symmetric symbol with sup norm exactly `bound`.
inline jscat::CircleFunction random_symbol(std::mt19937_64& rng, int n, int degree, double bound) {
  auto f = trig_poly(n, -degree, random_coeffs(rng, 2 * degree + 1));
  return f * cplx(bound / jscat::sup_norm(f));
}

inline double max_abs_diff(const jscat::CircleFunction& a, const jscat::CircleFunction& b) {
  return jscat::sup_norm(a - b);
}

}  // namespace testing
