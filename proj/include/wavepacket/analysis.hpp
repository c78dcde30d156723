#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wavepacket/errors.hpp"
#include "wavepacket/grid.hpp"

// Diagnostics extracted from |psi| profiles and time series: peak trains and
// their spacing statistics, the decaying-oscillation envelope
// A e^{-lambda |x|} sin^2(k x + phi), power-law vs exponential decay of the
// central amplitude, train centroid speed, and the standing-wave number
// inside the well.

namespace wavepacket {

struct PeakTrain {
  std::vector<double> positions;  // strictly increasing, parabola-refined
  std::vector<double> heights;
  double mean_spacing = 0.0;  // 0 when fewer than 2 peaks
  double spacing_cv = 0.0;    // std/mean of consecutive spacings

  std::size_t count() const { return positions.size(); }
};

namespace detail {

inline void check_region(double lo, double hi) {
  if (!(lo < hi)) throw ConfigError("analysis: region must have lo < hi");
}

inline std::pair<std::size_t, std::size_t> region_indices(const std::vector<double>& x,
                                                          double lo, double hi) {
  std::size_t a = 0;
  while (a < x.size() && x[a] < lo) ++a;
  std::size_t b = x.size();
  while (b > a && x[b - 1] > hi) --b;
  return {a, b};
}

}  // namespace detail

// Local maxima filtered by topographic prominence: a peak counts only if it
// rises by prominence * (regional max) above the higher of the valleys
// separating it from taller ground (or from the region edge). Positions and
// heights are refined by a parabola through the three samples at the top.
inline PeakTrain detect_peaks(const std::vector<double>& x, const std::vector<double>& y,
                              double lo, double hi, double prominence = 0.05) {
  if (x.size() != y.size()) throw ConfigError("peaks: x and y lengths differ");
  detail::check_region(lo, hi);
  if (!(prominence > 0.0 && prominence < 1.0))
    throw ConfigError("peaks: prominence must lie in (0, 1)");
  auto [a, b] = detail::region_indices(x, lo, hi);
  if (b - a < 3) throw ConfigError("peaks: region holds fewer than 3 samples");

  double peak = 0.0;
  for (std::size_t i = a; i < b; ++i) peak = std::max(peak, y[i]);
  const double floor = prominence * peak;

  PeakTrain train;
  for (std::size_t i = a + 1; i + 1 < b; ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    if (y[i] < floor) continue;

    // valley depth toward taller ground (or the edge) on each side
    double left_min = y[i];
    for (std::size_t j = i; j-- > a;) {
      left_min = std::min(left_min, y[j]);
      if (y[j] > y[i]) break;
    }
    double right_min = y[i];
    for (std::size_t j = i + 1; j < b; ++j) {
      right_min = std::min(right_min, y[j]);
      if (y[j] > y[i]) break;
    }
    if (y[i] - std::max(left_min, right_min) < floor) continue;

    // parabola through (i-1, i, i+1); uniform spacing is not assumed
    const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
    const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double curv = (d12 - d01) / (x2 - x0);
    double px = x1, ph = y1;
    if (curv < 0.0) {
      px = 0.5 * ((x0 + x1) - d01 / curv);
      ph = y1 + curv * (px - x1) * (px - x1) + (d01 + curv * (x1 - x0)) * (px - x1);
    }
    if (!(px >= x0 && px <= x2)) {
      px = x1;
      ph = y1;
    }
    train.positions.push_back(px);
    train.heights.push_back(ph);
  }

  if (train.positions.size() >= 2) {
    std::vector<double> gaps(train.positions.size() - 1);
    for (std::size_t i = 0; i + 1 < train.positions.size(); ++i)
      gaps[i] = train.positions[i + 1] - train.positions[i];
    double mean = 0.0;
    for (double g : gaps) mean += g;
    mean /= static_cast<double>(gaps.size());
    double var = 0.0;
    for (double g : gaps) var += (g - mean) * (g - mean);
    var /= static_cast<double>(gaps.size());
    train.mean_spacing = mean;
    train.spacing_cv = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
  }
  return train;
}

struct EnvelopeFit {
  double amplitude = 0.0;
  double lambda = 0.0;  // decay rate of e^{-lambda |x|}
  double k = 0.0;       // sin^2(k x + phase) wavenumber
  double phase = 0.0;
  double residual = 0.0;  // RMS misfit relative to the RMS of the data
  int iterations = 0;
};

namespace detail {

// Solve the 4x4 normal equations in place by Gaussian elimination.
inline bool solve4(std::array<std::array<double, 4>, 4>& m, std::array<double, 4>& rhs) {
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (std::abs(m[piv][c]) < 1e-300) return false;
    std::swap(m[c], m[piv]);
    std::swap(rhs[c], rhs[piv]);
    for (int r = c + 1; r < 4; ++r) {
      const double f = m[r][c] / m[c][c];
      for (int cc = c; cc < 4; ++cc) m[r][cc] -= f * m[c][cc];
      rhs[r] -= f * rhs[c];
    }
  }
  for (int c = 3; c >= 0; --c) {
    for (int cc = c + 1; cc < 4; ++cc) rhs[c] -= m[c][cc] * rhs[cc];
    rhs[c] /= m[c][c];
  }
  return true;
}

inline double envelope_model(const std::array<double, 4>& p, double x) {
  const double s = std::sin(p[2] * x + p[3]);
  return p[0] * std::exp(-p[1] * std::abs(x)) * s * s;
}

inline double envelope_cost(const std::array<double, 4>& p, const std::vector<double>& xs,
                            const std::vector<double>& ys) {
  double c = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = envelope_model(p, xs[i]) - ys[i];
    c += r * r;
  }
  return c;
}

}  // namespace detail

// Nonlinear least squares of |psi| against A e^{-lambda |x|} sin^2(kx + phi),
// seeded from the detected peak train: k from the spacing (sin^2 repeats
// every pi/k), lambda and A from a log-linear fit of peak heights, phi from
// aligning the first peak. Returns nothing when fewer than 3 peaks exist —
// that is the wide-packet regime, not an error.
inline std::optional<EnvelopeFit> fit_envelope(const std::vector<double>& x,
                                               const std::vector<double>& y, double lo,
                                               double hi, double prominence = 0.05) {
  PeakTrain peaks = detect_peaks(x, y, lo, hi, prominence);
  if (peaks.count() < 3) return std::nullopt;

  auto [a, b] = detail::region_indices(x, lo, hi);
  std::vector<double> xs(x.begin() + static_cast<std::ptrdiff_t>(a),
                         x.begin() + static_cast<std::ptrdiff_t>(b));
  std::vector<double> ys(y.begin() + static_cast<std::ptrdiff_t>(a),
                         y.begin() + static_cast<std::ptrdiff_t>(b));

  // seeds
  const double k0 = M_PI / peaks.mean_spacing;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < peaks.count(); ++i) {
    const double u = std::abs(peaks.positions[i]);
    const double v = std::log(std::max(peaks.heights[i], 1e-300));
    sx += u; sy += v; sxx += u * u; sxy += u * v;
  }
  const double n = static_cast<double>(peaks.count());
  const double denom = n * sxx - sx * sx;
  double lam0 = 1e-6, amp0 = *std::max_element(ys.begin(), ys.end());
  if (denom > 0.0) {
    const double slope = (n * sxy - sx * sy) / denom;
    const double inter = (sy - slope * sx) / n;
    // heights fall with |x|; for a region of negative x the slope in |x|
    // is -lambda directly
    lam0 = std::max(-slope, 1e-6);
    amp0 = std::exp(inter);
  }
  double phi0 = M_PI / 2.0 - k0 * peaks.positions[0];
  phi0 = std::remainder(phi0, M_PI);

  std::array<double, 4> p{amp0, lam0, k0, phi0};
  double cost = detail::envelope_cost(p, xs, ys);
  double mu = 1e-3;
  int iters = 0;
  for (; iters < 300; ++iters) {
    // accumulate J^T J and J^T r with analytic derivatives
    std::array<std::array<double, 4>, 4> h{};
    std::array<double, 4> g{};
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double xi = xs[i];
      const double e = std::exp(-p[1] * std::abs(xi));
      const double s = std::sin(p[2] * xi + p[3]);
      const double c = std::cos(p[2] * xi + p[3]);
      const double m = p[0] * e * s * s;
      const double r = m - ys[i];
      const std::array<double, 4> j{e * s * s, -std::abs(xi) * m, 2.0 * p[0] * e * s * c * xi,
                                    2.0 * p[0] * e * s * c};
      for (int u = 0; u < 4; ++u) {
        g[u] += j[u] * r;
        for (int v = u; v < 4; ++v) h[u][v] += j[u] * j[v];
      }
    }
    for (int u = 0; u < 4; ++u)
      for (int v = 0; v < u; ++v) h[u][v] = h[v][u];

    bool accepted = false;
    for (int tries = 0; tries < 12 && !accepted; ++tries) {
      auto hd = h;
      for (int u = 0; u < 4; ++u) hd[u][u] += mu * std::max(h[u][u], 1e-12);
      std::array<double, 4> step{-g[0], -g[1], -g[2], -g[3]};
      if (!detail::solve4(hd, step)) {
        mu *= 4.0;
        continue;
      }
      std::array<double, 4> q{p[0] + step[0], p[1] + step[1], p[2] + step[2], p[3] + step[3]};
      const double qc = detail::envelope_cost(q, xs, ys);
      if (std::isfinite(qc) && qc < cost) {
        const double rel = (cost - qc) / std::max(cost, 1e-300);
        p = q;
        cost = qc;
        mu = std::max(mu / 3.0, 1e-14);
        accepted = true;
        if (rel < 1e-15) iters = 300;
      } else {
        mu *= 4.0;
      }
    }
    if (!accepted) break;
  }

  // canonical orientation: positive k, phase folded to [0, pi)
  if (p[2] < 0.0) {
    p[2] = -p[2];
    p[3] = -p[3];
  }
  p[3] = std::remainder(p[3], M_PI);
  if (p[3] < 0.0) p[3] += M_PI;
  if (p[0] < 0.0) p[0] = -p[0];  // sin^2 makes the sign of A the only sign

  double yrms = 0.0;
  for (double v : ys) yrms += v * v;
  yrms = std::sqrt(yrms / static_cast<double>(ys.size()));

  EnvelopeFit fit;
  fit.amplitude = p[0];
  fit.lambda = p[1];
  fit.k = p[2];
  fit.phase = p[3];
  fit.residual = yrms > 0.0 ? std::sqrt(cost / static_cast<double>(ys.size())) / yrms : 0.0;
  fit.iterations = iters;
  return fit;
}

struct PowerLawFit {
  double exponent = 0.0;   // y = prefactor / t^exponent
  double prefactor = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  double residual = 0.0;   // RMS of log-residuals
  std::size_t samples = 0;
};

struct ExponentialFit {
  double rate = 0.0;  // y = prefactor * e^{-rate t}
  double prefactor = 0.0;
  double residual = 0.0;  // RMS of log-residuals, comparable to PowerLawFit
  std::size_t samples = 0;
};

namespace detail {

struct LogSeries {
  std::vector<double> u;  // abscissa (t or ln t)
  std::vector<double> v;  // ln y
};

inline LogSeries windowed_logs(const std::vector<double>& t, const std::vector<double>& y,
                               double t_min, double t_max, bool log_abscissa) {
  if (t.size() != y.size()) throw ConfigError("fit: series lengths differ");
  check_region(t_min, t_max);
  LogSeries out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_min || t[i] > t_max) continue;
    if (!(y[i] > 0.0))
      throw ConfigError("fit: series must be positive inside the window");
    if (log_abscissa && !(t[i] > 0.0))
      throw ConfigError("fit: log-log fit needs positive times");
    out.u.push_back(log_abscissa ? std::log(t[i]) : t[i]);
    out.v.push_back(std::log(y[i]));
  }
  if (out.u.size() < 20)
    throw ConfigError("fit: window holds fewer than 20 samples");
  return out;
}

struct Line {
  double slope = 0.0, intercept = 0.0, rms = 0.0;
};

inline Line least_squares_line(const std::vector<double>& u, const std::vector<double>& v) {
  const double n = static_cast<double>(u.size());
  double su = 0.0, sv = 0.0, suu = 0.0, suv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    su += u[i]; sv += v[i]; suu += u[i] * u[i]; suv += u[i] * v[i];
  }
  const double den = n * suu - su * su;
  if (!(std::abs(den) > 0.0)) throw NumericError("fit: degenerate abscissa");
  Line l;
  l.slope = (n * suv - su * sv) / den;
  l.intercept = (sv - l.slope * su) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = v[i] - (l.slope * u[i] + l.intercept);
    ss += r * r;
  }
  l.rms = std::sqrt(ss / n);
  return l;
}

}  // namespace detail

// Ordinary least squares of ln y against ln t over the window.
inline PowerLawFit fit_power_law(const std::vector<double>& t, const std::vector<double>& y,
                                 double t_min, double t_max) {
  auto logs = detail::windowed_logs(t, y, t_min, t_max, true);
  auto line = detail::least_squares_line(logs.u, logs.v);
  PowerLawFit fit;
  fit.exponent = -line.slope;
  fit.prefactor = std::exp(line.intercept);
  fit.t_min = t_min;
  fit.t_max = t_max;
  fit.residual = line.rms;
  fit.samples = logs.u.size();
  return fit;
}

// Same data against ln y ~ t; its residual is directly comparable with the
// power law's because both live in log space.
inline ExponentialFit fit_exponential(const std::vector<double>& t,
                                      const std::vector<double>& y, double t_min,
                                      double t_max) {
  auto logs = detail::windowed_logs(t, y, t_min, t_max, false);
  auto line = detail::least_squares_line(logs.u, logs.v);
  ExponentialFit fit;
  fit.rate = -line.slope;
  fit.prefactor = std::exp(line.intercept);
  fit.residual = line.rms;
  fit.samples = logs.u.size();
  return fit;
}

struct TrainSpeed {
  double speed = 0.0;      // centroid displacement over the time gap
  double centroid_t1 = 0.0;
  double centroid_t2 = 0.0;
  std::size_t peaks_t1 = 0;  // below 2 means the trains were not matchable
  std::size_t peaks_t2 = 0;
  std::optional<double> k_over_m;  // envelope wavenumber over mass, when fittable
};

// Speed of the |psi|^2-weighted centroid of the region between two profile
// snapshots. The envelope-based k/m companion value uses the later profile.
inline TrainSpeed train_speed(const std::vector<double>& x1, const std::vector<double>& y1,
                              double t1, const std::vector<double>& x2,
                              const std::vector<double>& y2, double t2, double lo, double hi,
                              double mass, double prominence = 0.05) {
  if (!(t2 > t1)) throw ConfigError("train speed: need t2 > t1");
  if (!(mass > 0.0)) throw ConfigError("train speed: mass must be positive");
  detail::check_region(lo, hi);

  auto centroid_of = [&](const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ConfigError("train speed: profile lengths differ");
    auto [a, b] = detail::region_indices(x, lo, hi);
    if (b - a < 2) throw ConfigError("train speed: region holds fewer than 2 samples");
    double w = 0.0, wx = 0.0;
    for (std::size_t i = a; i < b; ++i) {
      const double m = y[i] * y[i];
      w += m;
      wx += m * x[i];
    }
    if (!(w > 0.0)) throw NumericError("train speed: region carries no amplitude");
    return wx / w;
  };

  TrainSpeed out;
  out.centroid_t1 = centroid_of(x1, y1);
  out.centroid_t2 = centroid_of(x2, y2);
  out.speed = (out.centroid_t2 - out.centroid_t1) / (t2 - t1);
  out.peaks_t1 = detect_peaks(x1, y1, lo, hi, prominence).count();
  out.peaks_t2 = detect_peaks(x2, y2, lo, hi, prominence).count();
  if (auto env = fit_envelope(x2, y2, lo, hi, prominence)) out.k_over_m = env->k / mass;
  return out;
}

struct InteriorWave {
  double k_prime = 0.0;    // pi over the mean zero-crossing spacing of Re(phi)
  int n_wavelengths = 0;   // full wavelengths across the well radius: k' w / (2 pi)
  double k_squared = 0.0;  // implied free k^2 = k'^2 - 2 m V0 (sign kept)
  std::size_t crossings = 0;
};

// Standing-wave number inside the well from the zero crossings of Re(phi)
// over r in (0, 2w). Fewer than 2 crossings means no oscillation fits the
// well; that is a physical outcome, not an error.
inline std::optional<InteriorWave> interior_wavenumber(const std::vector<double>& r,
                                                       const std::vector<cplx>& phi,
                                                       double well_width, double mass,
                                                       double v0) {
  if (r.size() != phi.size()) throw ConfigError("interior wave: lengths differ");
  if (!(well_width > 0.0)) throw ConfigError("interior wave: well width must be positive");
  const double hi = 2.0 * well_width;
  auto [a, b] = detail::region_indices(r, 0.0, hi);
  if (b - a < 40) throw ConfigError("interior wave: need at least 40 samples in (0, 2w)");
  if (r[a] > 0.1 * well_width || r[b - 1] < 0.95 * hi)
    throw ConfigError("interior wave: samples must span (0, 2w)");

  std::vector<double> zeros;
  for (std::size_t i = a; i + 1 < b; ++i) {
    const double f0 = phi[i].real();
    const double f1 = phi[i + 1].real();
    if (f0 == 0.0) {
      zeros.push_back(r[i]);
      continue;
    }
    if (f0 * f1 < 0.0) zeros.push_back(r[i] - f0 * (r[i + 1] - r[i]) / (f1 - f0));
  }
  if (zeros.size() < 2) return std::nullopt;

  double mean = (zeros.back() - zeros.front()) / static_cast<double>(zeros.size() - 1);
  InteriorWave out;
  out.k_prime = M_PI / mean;
  out.n_wavelengths = static_cast<int>(std::lround(out.k_prime * well_width / (2.0 * M_PI)));
  out.k_squared = out.k_prime * out.k_prime - 2.0 * mass * v0;
  out.crossings = zeros.size();
  return out;
}

}  // namespace wavepacket
