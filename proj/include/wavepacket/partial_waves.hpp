#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "wavepacket/cayley.hpp"
#include "wavepacket/grid.hpp"
#include "wavepacket/model.hpp"

// 2D scattering of a packet on a central potential, expanded in angular
// harmonics: Phi(t,r,phi) = sum_l e^{i l phi} phi_l(r,t). The substitution
// psi_l = sqrt(r) phi_l removes the first radial derivative and leaves a
// family of independent 1D problems with an extra centrifugal-like term
// (l^2 - 1/4)/(2 m r^2), each advanced by the same Cayley stepper as the
// 1D solver. Fields follow the planar normalization
// integral |Phi|^2 r dr dphi = 2 pi, i.e. sum_l integral |psi_l|^2 dr = 1.

namespace wavepacket {

// The radial grid stores r = 0 as its first node; that node is the inner
// hard wall (psi_l ~ sqrt(r) -> 0) and never evolves, so the singular
// 1/r^2 term is only ever evaluated at r >= dr.
struct PartialWaveSet {
  Grid1D radial_grid;
  int l_max = 0;
  std::vector<ComplexField1D> waves;  // index l + l_max
  double captured_fraction = 1.0;     // angular-truncation coverage at build time

  ComplexField1D& wave(int l) {
    if (l < -l_max || l > l_max) throw ConfigError("partial waves: l out of range");
    return waves[static_cast<std::size_t>(l + l_max)];
  }
  const ComplexField1D& wave(int l) const {
    if (l < -l_max || l > l_max) throw ConfigError("partial waves: l out of range");
    return waves[static_cast<std::size_t>(l + l_max)];
  }

  std::vector<double> per_l_norms() const {
    std::vector<double> out(waves.size());
    for (std::size_t i = 0; i < waves.size(); ++i) out[i] = norm_squared(waves[i]);
    return out;
  }

  double total_norm() const {
    double s = 0.0;
    for (const auto& w : waves) s += norm_squared(w);
    return s;
  }

  void validate() const {
    radial_grid.validate();
    if (radial_grid.x_min != 0.0)
      throw ConfigError("partial waves: radial grid must start at r=0");
    if (l_max < 0) throw ConfigError("partial waves: l_max must be >= 0");
    if (waves.size() != static_cast<std::size_t>(2 * l_max + 1))
      throw ConfigError("partial waves: wave count does not match l_max");
    for (const auto& w : waves) {
      if (w.grid.n != radial_grid.n || w.grid.x_min != radial_grid.x_min ||
          w.grid.x_max != radial_grid.x_max)
        throw ConfigError("partial waves: waves do not share the radial grid");
      if (w.psi.size() != radial_grid.n)
        throw ConfigError("partial waves: wave length does not match the grid");
    }
  }
};

// V(r) plus the term produced by the sqrt(r) substitution. Attractive for
// l = 0, repulsive for |l| >= 1, singular at the origin; the grid offset
// keeps it bounded wherever it is actually evaluated.
inline double effective_potential(const PotentialSpec& pot, int l, double mass, double r) {
  if (!(r > 0.0)) throw ConfigError("effective potential: r must be positive");
  if (!(mass > 0.0)) throw ConfigError("effective potential: mass must be positive");
  const double ll = static_cast<double>(l) * static_cast<double>(l);
  return eval_potential(pot, r) + (ll - 0.25) / (2.0 * mass * r * r);
}

// Samples for the stepper; the pinned r=0 slot is never read and stays 0.
inline std::vector<double> sample_effective_potential(const PotentialSpec& pot, int l,
                                                      double mass, const Grid1D& grid) {
  grid.validate();
  std::vector<double> v(grid.n, 0.0);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double r = grid.x(j);
    if (r > 0.0) v[j] = effective_potential(pot, l, mass, r);
  }
  return v;
}

namespace detail {

// psi_l(r_j) = sqrt(r_j) * (1/n_phi) sum_k F(r_j, phi_k) e^{-i l phi_k}
// on uniform angles; spectrally accurate for smooth F.
template <typename Field2D>
std::vector<ComplexField1D> project_angular(const Field2D& field, const Grid1D& grid,
                                            int l_max, std::size_t n_phi) {
  const std::size_t n_l = static_cast<std::size_t>(2 * l_max + 1);
  std::vector<cplx> twiddle(n_l * n_phi);
  for (std::size_t li = 0; li < n_l; ++li) {
    const double l = static_cast<double>(static_cast<int>(li) - l_max);
    for (std::size_t k = 0; k < n_phi; ++k) {
      const double phi = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n_phi);
      twiddle[li * n_phi + k] = std::polar(1.0, -l * phi);
    }
  }

  std::vector<ComplexField1D> waves(n_l);
  for (auto& w : waves) {
    w.grid = grid;
    w.psi.assign(grid.n, cplx(0.0, 0.0));
  }

  std::vector<cplx> row(n_phi);
  for (std::size_t j = 1; j < grid.n; ++j) {
    const double r = grid.x(j);
    for (std::size_t k = 0; k < n_phi; ++k) {
      const double phi = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n_phi);
      row[k] = field(r, phi);
    }
    const double w = std::sqrt(r) / static_cast<double>(n_phi);
    for (std::size_t li = 0; li < n_l; ++li) {
      const cplx* tw = twiddle.data() + li * n_phi;
      cplx s(0.0, 0.0);
      for (std::size_t k = 0; k < n_phi; ++k) s += row[k] * tw[k];
      waves[li].psi[j] = w * s;
    }
  }
  return waves;
}

}  // namespace detail

// Expand a gaussian packet centered at (x0, y0) with carrier e^{i q (x - x0)}
// into angular harmonics. The captured fraction measures how much of the
// packet the truncated set holds; below 0.99 the truncation is rejected.
inline PartialWaveSet make_packet_2d(const PacketSpec& spec, const Grid1D& radial_grid,
                                     int l_max) {
  spec.validate();
  radial_grid.validate();
  if (spec.shape != PacketShape::gaussian)
    throw ConfigError("2d packet: only the gaussian shape is supported");
  if (radial_grid.x_min != 0.0)
    throw ConfigError("2d packet: radial grid must start at r=0");
  if (l_max < 0) throw ConfigError("2d packet: l_max must be >= 0");

  const double delta = spec.width;
  const double rho0 = std::hypot(spec.x0, spec.y0);
  const double r_max = radial_grid.x_max;
  if (!(rho0 < r_max)) throw ConfigError("2d packet: center lies outside the radial grid");
  const double tail = 0.5 * std::erfc((r_max - rho0) / (M_SQRT2 * delta));
  if (!(tail < 1e-8))
    throw ConfigError("2d packet: radial grid too small, tail mass beyond r_max is " +
                      std::to_string(tail));

  const double amp = 1.0 / delta;  // planar norm 2 pi
  auto field = [&](double r, double phi) -> cplx {
    const double dx0 = r * std::cos(phi) - spec.x0;
    const double dy0 = r * std::sin(phi) - spec.y0;
    const double s = (dx0 * dx0 + dy0 * dy0) / (4.0 * delta * delta);
    return std::polar(amp * std::exp(-s), spec.q * dx0);
  };

  const std::size_t n_phi = std::max<std::size_t>(256, 8 * static_cast<std::size_t>(l_max));
  PartialWaveSet set;
  set.radial_grid = radial_grid;
  set.l_max = l_max;
  set.waves = detail::project_angular(field, radial_grid, l_max, n_phi);

  const double captured = set.total_norm();
  if (!(captured >= 0.99))
    throw ConfigError("2d packet: l_max=" + std::to_string(l_max) +
                      " captures only " + std::to_string(captured) +
                      " of the packet norm; raise l_max");
  const double s = 1.0 / std::sqrt(captured);
  for (auto& w : set.waves) scale(w, s);
  set.captured_fraction = captured;
  return set;
}

struct Observer2DConfig {
  std::size_t sample_every = 100;      // step cadence for the total-norm series
  std::vector<double> snapshot_times;  // full-set copies at the nearest step
};

struct Snapshot2D {
  double t = 0.0;
  PartialWaveSet set;
};

struct Evolution2DRecord {
  ObservableSeries total_norm;
  std::vector<Snapshot2D> snapshots;
  std::vector<double> initial_per_l_norm;
  std::vector<double> final_per_l_norm;
  double norm_drift = 0.0;  // max |N(t) - N(0)|
  long long steps = 0;
  double t_final = 0.0;
};

// Advance every harmonic to t_final. The harmonics never couple; each one
// runs the Cayley step against its own effective potential, so total norm
// conservation is inherited term by term.
inline Evolution2DRecord evolve_2d(PartialWaveSet& state, const PotentialSpec& potential,
                                   const EvolutionParams& params, double t_final,
                                   const Observer2DConfig& obs = {}) {
  state.validate();
  params.validate();
  potential.validate();
  if (t_final < 0.0) throw ConfigError("2d evolution: t_final must be >= 0");

  // Round to the nearest whole step, as the 1D evolver does.
  const long long steps = std::llround(t_final / params.dt);
  if (steps <= 0 && t_final > 0.0)
    throw ConfigError("2d evolution: t_final shorter than one step");
  const std::size_t n_l = state.waves.size();

  std::vector<CayleyStepper> steppers;
  steppers.reserve(n_l);
  for (int l = -state.l_max; l <= state.l_max; ++l) {
    auto v = sample_effective_potential(potential, l, params.mass, state.radial_grid);
    steppers.emplace_back(state.radial_grid, v, params.mass, params.dt);
  }

  std::vector<std::pair<long long, double>> snaps;
  snaps.reserve(obs.snapshot_times.size());
  for (double ts : obs.snapshot_times) {
    if (ts < 0.0 || ts > t_final + 0.5 * params.dt)
      throw ConfigError("2d evolution: snapshot time outside [0, t_final]");
    long long k = std::llround(ts / params.dt);
    if (k > steps) k = steps;
    snaps.emplace_back(k, ts);
  }
  std::sort(snaps.begin(), snaps.end());

  Evolution2DRecord rec;
  rec.steps = steps;
  rec.t_final = static_cast<double>(steps) * params.dt;
  rec.initial_per_l_norm = state.per_l_norms();

  double n0 = 0.0;
  for (double v : rec.initial_per_l_norm) n0 += v;

  auto sample = [&](long long k) {
    const double t = static_cast<double>(k) * params.dt;
    double total = 0.0;
    for (const auto& w : state.waves) total += norm_squared(w);
    if (!std::isfinite(total)) {
      for (std::size_t li = 0; li < n_l; ++li)
        if (!all_finite(state.waves[li].psi))
          throw NumericError("2d evolution: wave l=" +
                             std::to_string(static_cast<int>(li) - state.l_max) +
                             " became non-finite at t=" + std::to_string(t));
      throw NumericError("2d evolution: total norm became non-finite");
    }
    rec.total_norm.t.push_back(t);
    rec.total_norm.value.push_back(total);
    const double drift = std::abs(total - n0);
    if (drift > rec.norm_drift) rec.norm_drift = drift;
  };

  std::size_t next_snap = 0;
  auto snapshot = [&](long long k) {
    while (next_snap < snaps.size() && snaps[next_snap].first == k) {
      rec.snapshots.push_back({static_cast<double>(k) * params.dt, state});
      ++next_snap;
    }
  };

  sample(0);
  snapshot(0);
  const std::size_t cadence = obs.sample_every == 0 ? 1 : obs.sample_every;
  for (long long k = 1; k <= steps; ++k) {
    for (std::size_t li = 0; li < n_l; ++li) steppers[li].step(state.waves[li].psi);
    if (static_cast<std::size_t>(k) % cadence == 0 || k == steps) sample(k);
    snapshot(k);
  }
  rec.final_per_l_norm = state.per_l_norms();
  return rec;
}

enum class ProfileField {
  sqrt_scaled,  // Psi = sqrt(r) Phi, the field the radial solver evolves
  bare          // Phi itself, recovered by dividing sqrt(r) back out
};

// A radial cut of the reconstructed field at one angle; r = 0 is excluded
// (the stored node there is the pinned inner wall, and Phi is 0/0 at it).
struct AngularProfile {
  double angle_deg = 0.0;
  double time = 0.0;
  std::vector<double> r;
  std::vector<cplx> value;

  std::vector<double> magnitudes() const {
    std::vector<double> m(value.size());
    for (std::size_t i = 0; i < value.size(); ++i) m[i] = std::abs(value[i]);
    return m;
  }
};

inline AngularProfile reconstruct_profile(const PartialWaveSet& state, double angle_deg,
                                          double time_label,
                                          ProfileField field = ProfileField::sqrt_scaled) {
  state.validate();
  const double phi = angle_deg * M_PI / 180.0;
  std::vector<cplx> phase(state.waves.size());
  for (int l = -state.l_max; l <= state.l_max; ++l)
    phase[static_cast<std::size_t>(l + state.l_max)] = std::polar(1.0, l * phi);

  AngularProfile out;
  out.angle_deg = angle_deg;
  out.time = time_label;
  const std::size_t n = state.radial_grid.n;
  out.r.reserve(n - 1);
  out.value.reserve(n - 1);
  for (std::size_t j = 1; j < n; ++j) {
    cplx s(0.0, 0.0);
    for (std::size_t li = 0; li < state.waves.size(); ++li)
      s += state.waves[li].psi[j] * phase[li];
    const double r = state.radial_grid.x(j);
    if (field == ProfileField::bare) s /= std::sqrt(r);
    out.r.push_back(r);
    out.value.push_back(s);
  }
  return out;
}

// Truncation error proxy: max | |a| - |b| | over the shared radius samples,
// relative to the larger profile peak.
inline double profile_deviation(const AngularProfile& a, const AngularProfile& b) {
  if (a.value.size() != b.value.size())
    throw ConfigError("profile deviation: profiles have different sample counts");
  double peak = 0.0, dev = 0.0;
  for (std::size_t i = 0; i < a.value.size(); ++i) {
    const double ma = std::abs(a.value[i]);
    const double mb = std::abs(b.value[i]);
    peak = std::max(peak, std::max(ma, mb));
    dev = std::max(dev, std::abs(ma - mb));
  }
  if (peak == 0.0) return 0.0;
  return dev / peak;
}

}  // namespace wavepacket
