#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "wavepacket/errors.hpp"

namespace wavepacket {

using cplx = std::complex<double>;

// Uniform 1D grid. Also used for the radial coordinate in the partial-wave
// solver, where x plays the role of r.
struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n = 2;  // node count including both endpoints

  double dx() const { return (x_max - x_min) / static_cast<double>(n - 1); }
  double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx(); }

  std::size_t index_near(double xq) const {
    double j = (xq - x_min) / dx();
    long long k = std::llround(j);
    if (k < 0) k = 0;
    if (k >= static_cast<long long>(n)) k = static_cast<long long>(n) - 1;
    return static_cast<std::size_t>(k);
  }

  void validate() const {
    if (!(x_max > x_min)) throw ConfigError("grid: x_max must exceed x_min");
    if (n < 3) throw ConfigError("grid: need at least 3 nodes");
    if (!std::isfinite(x_min) || !std::isfinite(x_max))
      throw ConfigError("grid: non-finite extent");
  }
};

// Builds a grid whose spacing is as close as possible to dx_target while
// hitting both endpoints exactly.
inline Grid1D make_grid(double x_min, double x_max, double dx_target) {
  if (!(dx_target > 0.0)) throw ConfigError("grid: dx must be positive");
  if (!(x_max > x_min)) throw ConfigError("grid: x_max must exceed x_min");
  double span = x_max - x_min;
  auto intervals = static_cast<std::size_t>(std::llround(span / dx_target));
  if (intervals < 2) intervals = 2;
  Grid1D g{x_min, x_max, intervals + 1};
  g.validate();
  return g;
}

struct ComplexField1D {
  Grid1D grid;
  std::vector<cplx> psi;

  ComplexField1D() = default;
  explicit ComplexField1D(const Grid1D& g) : grid(g), psi(g.n, cplx{0.0, 0.0}) {}
};

inline bool all_finite(const std::vector<cplx>& v) {
  for (const cplx& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

// Trapezoidal quadrature of |psi|^2 over the grid.
inline double norm_squared(const ComplexField1D& f) {
  const std::size_t n = f.psi.size();
  double acc = 0.5 * std::norm(f.psi.front()) + 0.5 * std::norm(f.psi.back());
  for (std::size_t j = 1; j + 1 < n; ++j) acc += std::norm(f.psi[j]);
  return acc * f.grid.dx();
}

inline void scale(ComplexField1D& f, double s) {
  for (cplx& z : f.psi) z *= s;
}

// Rescales to unit L2 norm; returns the normalization constant applied.
inline double normalize(ComplexField1D& f) {
  double n2 = norm_squared(f);
  if (!(n2 > 0.0) || !std::isfinite(n2))
    throw NumericError("normalize: field has no usable norm");
  double s = 1.0 / std::sqrt(n2);
  scale(f, s);
  return s;
}

// <x> with |psi|^2 weight.
inline double centroid(const ComplexField1D& f) {
  const std::size_t n = f.psi.size();
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
    double p = w * std::norm(f.psi[j]);
    m0 += p;
    m1 += p * f.grid.x(j);
  }
  if (!(m0 > 0.0)) throw NumericError("centroid: empty field");
  return m1 / m0;
}

// rms spread sqrt(<x^2> - <x>^2).
inline double rms_width(const ComplexField1D& f) {
  const std::size_t n = f.psi.size();
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
    double p = w * std::norm(f.psi[j]);
    double x = f.grid.x(j);
    m0 += p;
    m1 += p * x;
    m2 += p * x * x;
  }
  if (!(m0 > 0.0)) throw NumericError("rms_width: empty field");
  double mean = m1 / m0;
  double var = m2 / m0 - mean * mean;
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

// <p> from the centered first difference of psi. Endpoints contribute
// nothing; fields are assumed to vanish there (hard walls).
inline double momentum_mean(const ComplexField1D& f) {
  const std::size_t n = f.psi.size();
  const double dx = f.grid.dx();
  double num = 0.0, den = 0.0;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    cplx d = (f.psi[j + 1] - f.psi[j - 1]) / (2.0 * dx);
    // Re(conj(psi) * (-i) * dpsi) = Im(conj(psi) * dpsi)
    num += std::imag(std::conj(f.psi[j]) * d);
    den += std::norm(f.psi[j]);
  }
  if (!(den > 0.0)) throw NumericError("momentum_mean: empty field");
  return num / den;
}

inline double max_abs(const ComplexField1D& f) {
  double m = 0.0;
  for (const cplx& z : f.psi) m = std::max(m, std::abs(z));
  return m;
}

inline double max_abs_diff(const ComplexField1D& a, const ComplexField1D& b) {
  double m = 0.0;
  const std::size_t n = std::min(a.psi.size(), b.psi.size());
  for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::abs(a.psi[j] - b.psi[j]));
  return m;
}

}  // namespace wavepacket
