#include "jscat/harmonic.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace jscat {

namespace {

Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

void check_same(const CircleFunction& a, const CircleFunction& b) {
  if (a.size() != b.size())
    throw GridMismatch("grid sizes differ: " + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()));
}

}  // namespace

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

CircleGrid::CircleGrid(int n) : n_(n), points_(n) {
  if (n < 16 || !is_power_of_two(n))
    throw ValidationError("grid size must be a power of two >= 16, got " + std::to_string(n));
  // Fill the first octant from cos/sin and mirror, so that the symmetries
  // t_{N/4} = i, t_{N/2} = -1 and conj(t_j) = t_{N-j} are exact.
  const int q = n / 4;
  for (int j = 0; j <= q / 2; ++j) {
    double a = 2.0 * pi * j / n;
    points_[j] = {std::cos(a), std::sin(a)};
    points_[q - j] = {std::sin(a), std::cos(a)};
  }
  for (int j = 0; j <= q; ++j) points_[q + j] = points_[j] * cplx(0.0, 1.0);
  for (int j = 1; j < n / 2; ++j) points_[n - j] = std::conj(points_[j]);
  points_[0] = 1.0;
  points_[q] = cplx(0.0, 1.0);
  points_[n / 2] = -1.0;
  points_[3 * q] = cplx(0.0, -1.0);
}

const CircleGrid& grid_of(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<CircleGrid>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<CircleGrid>(n)).first;
  return *it->second;
}

CircleFunction::CircleFunction(int n, cplx fill) : v_(n, fill) { grid_of(n); }

CircleFunction::CircleFunction(std::vector<cplx> values) : v_(std::move(values)) {
  grid_of(size());
}

CircleFunction CircleFunction::conj() const {
  CircleFunction out(*this);
  for (auto& x : out.v_) x = std::conj(x);
  return out;
}

CircleFunction CircleFunction::reflected() const {
  CircleFunction out(size());
  const auto& g = grid();
  for (int j = 0; j < size(); ++j) out.v_[j] = v_[g.mirror(j)];
  return out;
}

CircleFunction& CircleFunction::operator+=(const CircleFunction& o) {
  check_same(*this, o);
  for (int j = 0; j < size(); ++j) v_[j] += o.v_[j];
  return *this;
}

CircleFunction& CircleFunction::operator-=(const CircleFunction& o) {
  check_same(*this, o);
  for (int j = 0; j < size(); ++j) v_[j] -= o.v_[j];
  return *this;
}

CircleFunction& CircleFunction::operator*=(const CircleFunction& o) {
  check_same(*this, o);
  for (int j = 0; j < size(); ++j) v_[j] *= o.v_[j];
  return *this;
}

CircleFunction& CircleFunction::operator*=(cplx a) {
  for (auto& x : v_) x *= a;
  return *this;
}

CircleFunction operator+(CircleFunction a, const CircleFunction& b) { return a += b; }
CircleFunction operator-(CircleFunction a, const CircleFunction& b) { return a -= b; }
CircleFunction operator*(CircleFunction a, const CircleFunction& b) { return a *= b; }
CircleFunction operator*(CircleFunction a, cplx s) { return a *= s; }
CircleFunction operator*(cplx s, CircleFunction a) { return a *= s; }

cplx& Coefficients::at(int k) {
  if (!in_range(k)) throw std::out_of_range("coefficient index " + std::to_string(k));
  return c_[k + n_ / 2];
}

Coefficients analyze(const CircleFunction& f) {
  const int n = f.size();
  std::vector<cplx> spec;
  fft_engine().fwd(spec, f.values());
  Coefficients c(n);
  for (int k = c.kmin(); k <= c.kmax(); ++k) c.at(k) = spec[(k + n) % n] / double(n);
  return c;
}

CircleFunction synthesize(const Coefficients& c) {
  const int n = c.size();
  std::vector<cplx> spec(n), out;
  for (int k = c.kmin(); k <= c.kmax(); ++k) spec[(k + n) % n] = c(k) * double(n);
  fft_engine().inv(out, spec);
  return CircleFunction(std::move(out));
}

cplx evaluate(const Coefficients& c, cplx t) {
  // Horner on the analytic and anti-analytic halves.
  cplx pos = 0.0, neg = 0.0;
  for (int k = c.kmax(); k >= 0; --k) pos = pos * t + c(k);
  cplx ti = 1.0 / t;
  for (int k = c.kmin(); k <= -1; ++k) neg = (neg + c(k)) * ti;
  return pos + neg;
}

CircleFunction riesz_project(const CircleFunction& f) {
  Coefficients c = analyze(f);
  for (int k = c.kmin(); k < 0; ++k) c.at(k) = 0.0;
  return synthesize(c);
}

CircleFunction star(const CircleFunction& f) {
  const auto& g = f.grid();
  CircleFunction out(f.size());
  for (int j = 0; j < f.size(); ++j) {
    int m = g.mirror(j);
    out[j] = g.point(m) * f[m];
  }
  return out;
}

double sup_norm(const CircleFunction& f) {
  double m = 0.0;
  for (int j = 0; j < f.size(); ++j) m = std::max(m, std::abs(f[j]));
  return m;
}

double symmetry_defect(const CircleFunction& f) {
  const auto& g = f.grid();
  double m = 0.0;
  for (int j = 0; j < f.size(); ++j) m = std::max(m, std::abs(f[g.mirror(j)] - std::conj(f[j])));
  return m;
}

CircleFunction symmetrized(const CircleFunction& f) {
  const auto& g = f.grid();
  CircleFunction out(f.size());
  for (int j = 0; j < f.size(); ++j) out[j] = 0.5 * (f[j] + std::conj(f[g.mirror(j)]));
  return out;
}

cplx l2_inner(const CircleFunction& f, const CircleFunction& g) {
  check_same(f, g);
  cplx acc = 0.0;
  for (int j = 0; j < f.size(); ++j) acc += f[j] * std::conj(g[j]);
  return acc / double(f.size());
}

double l2_norm(const CircleFunction& f) { return std::sqrt(std::real(l2_inner(f, f))); }

cplx szego_inner(const CircleFunction& f, const CircleFunction& g, const CircleFunction& s_sym) {
  check_same(f, g);
  check_same(f, s_sym);
  const auto& grid = f.grid();
  cplx acc = 0.0;
  for (int j = 0; j < f.size(); ++j) {
    int m = grid.mirror(j);
    cplx lhs = f[j] + grid.point(m) * s_sym[m] * f[m];
    acc += lhs * std::conj(g[j]);
  }
  return acc / double(f.size());
}

double clipped_log_mean(const CircleFunction& w, double log_floor) {
  double acc = 0.0;
  for (int j = 0; j < w.size(); ++j) {
    double a = std::abs(w[j]);
    acc += a > 0.0 ? std::max(std::log(a), -log_floor) : -log_floor;
  }
  return acc / w.size();
}

OuterFunction outer_from_modulus(const CircleFunction& w, const OuterOptions& opt) {
  const int n = w.size();
  const auto& grid = w.grid();
  std::vector<double> mod(n);
  double wmax = 0.0;
  for (int j = 0; j < n; ++j) {
    double re = w[j].real();
    if (!std::isfinite(re) || re < 0.0 || std::abs(w[j].imag()) > 1e-12 * (1.0 + std::abs(re)))
      throw ValidationError("modulus must be finite and nonnegative at node " + std::to_string(j));
    mod[j] = re;
    wmax = std::max(wmax, re);
  }
  double mean_log = clipped_log_mean(w, opt.log_floor);
  if (!(wmax > 0.0) || mean_log < -opt.log_floor / 2)
    throw SzegoViolation("clipped log integral " + std::to_string(mean_log) + " below -" +
                         std::to_string(opt.log_floor / 2));

  OuterFunction out;
  auto at = [&](int j) { return mod[(j + n) % n]; };
  if (opt.factor_zeros) {
    for (int j = 0; j < n; ++j) {
      double nb = std::min(at(j - 1), at(j + 1));
      if (mod[j] < opt.zero_rel * wmax && mod[j] < opt.zero_drop * nb) out.zero_nodes.push_back(j);
    }
  }

  // Divide out |t - t_z| and refill the zero nodes from an even fit through
  // three symmetric neighbours.
  std::vector<double> reduced(mod);
  for (int z : out.zero_nodes) {
    cplx tz = grid.point(z);
    for (int j = 0; j < n; ++j)
      if (j != z) reduced[j] /= std::abs(grid.point(j) - tz);
  }
  auto rat = [&](int j) { return reduced[(j + n) % n]; };
  for (int z : out.zero_nodes) {
    double f1 = 0.5 * (rat(z - 1) + rat(z + 1));
    double f2 = 0.5 * (rat(z - 2) + rat(z + 2));
    double f3 = 0.5 * (rat(z - 3) + rat(z + 3));
    reduced[z] = std::max(1.5 * f1 - 0.6 * f2 + 0.1 * f3, 0.0);
  }

  CircleFunction logw(n);
  for (int j = 0; j < n; ++j)
    logw[j] = reduced[j] > 0.0 ? std::max(std::log(reduced[j]), -opt.log_floor) : -opt.log_floor;
  Coefficients c = analyze(logw);
  Coefficients f(n);
  f.at(0) = c(0).real();
  for (int k = 1; k <= c.kmax(); ++k) f.at(k) = 2.0 * c(k);
  f.at(c.kmin()) = c(c.kmin()).real();
  CircleFunction F = synthesize(f);

  out.boundary = CircleFunction(n);
  out.phase = CircleFunction(n);
  for (int j = 0; j < n; ++j) {
    cplx t = grid.point(j);
    cplx b = std::exp(F[j]);
    cplx ph = std::exp(cplx(0.0, 2.0 * F[j].imag()));
    for (int z : out.zero_nodes) {
      cplx tz = grid.point(z);
      b *= 1.0 - std::conj(tz) * t;
      ph *= -t * std::conj(tz);
    }
    out.boundary[j] = b;
    out.phase[j] = ph;
  }
  out.value_at_zero = std::exp(f(0).real());
  return out;
}

}  // namespace jscat
