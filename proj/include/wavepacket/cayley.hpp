#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "wavepacket/grid.hpp"

// Unitary time stepping for i d(psi)/dt = H psi with
// H = -(1/2m) d^2/dx^2 + V(x) on a hard-walled grid. One step solves
//   (1 + i H dt/2) psi_new = (1 - i H dt/2) psi_old,
// which is norm preserving and exactly time reversible for any dt.
// The stored endpoint nodes are the walls and stay pinned at zero; the
// tridiagonal system runs over the interior nodes only.

namespace wavepacket {

struct EvolutionParams {
  double mass = 20.0;
  double dt = 0.0;

  void validate() const {
    if (!(mass > 0.0)) throw ConfigError("evolution: mass must be positive");
    if (!(dt > 0.0)) throw ConfigError("evolution: dt must be positive");
  }
};

class CayleyStepper {
 public:
  // dt may be negative; a negative-dt stepper exactly undoes the positive one.
  CayleyStepper(const Grid1D& grid, const std::vector<double>& potential,
                double mass, double dt)
      : n_(grid.n) {
    if (potential.size() != grid.n)
      throw ConfigError("stepper: potential samples do not match the grid");
    if (!(mass > 0.0)) throw ConfigError("stepper: mass must be positive");
    if (dt == 0.0 || !std::isfinite(dt)) throw ConfigError("stepper: dt must be nonzero");

    const double dx = grid.dx();
    const double alpha = dt / (4.0 * mass * dx * dx);
    const cplx off_a(0.0, -alpha);  // off-diagonal of the implicit matrix

    const std::size_t m = n_ - 2;
    cp_.resize(m);
    inv_den_.resize(m);
    scratch_.resize(m);

    cplx den;
    for (std::size_t i = 0; i < m; ++i) {
      const double theta = 2.0 * alpha + 0.5 * dt * potential[i + 1];
      const cplx d(1.0, theta);
      den = (i == 0) ? d : d - off_a * cp_[i - 1];
      inv_den_[i] = 1.0 / den;
      cp_[i] = off_a * inv_den_[i];
    }
  }

  // Advance psi by one step in place. psi must sit on the construction grid.
  // The explicit matrix equals 2I minus the implicit one, so the update is
  // psi_new = chi - psi with the single solve A chi = 2 psi.
  void step(std::vector<cplx>& psi) const {
    const std::size_t m = n_ - 2;
    cplx* w = scratch_.data();
    cplx* p = psi.data();

    for (std::size_t i = 0; i < m; ++i) w[i] = 2.0 * p[i + 1] * inv_den_[i];
    for (std::size_t i = 1; i < m; ++i) w[i] -= cp_[i] * w[i - 1];
    for (std::size_t i = m - 1; i-- > 0;) w[i] -= cp_[i] * w[i + 1];
    for (std::size_t i = 0; i < m; ++i) p[i + 1] = w[i] - p[i + 1];
    p[0] = cplx(0.0, 0.0);
    p[n_ - 1] = cplx(0.0, 0.0);
  }

  std::size_t grid_size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<cplx> cp_, inv_den_;
  mutable std::vector<cplx> scratch_;
};

// Discrete energy <psi|H|psi> with the same three-point Laplacian the stepper
// uses, so the value is a conserved quantity of the evolution.
inline double energy_expectation(const ComplexField1D& f,
                                 const std::vector<double>& potential,
                                 double mass, bool normalized = true) {
  const Grid1D& g = f.grid;
  if (potential.size() != g.n)
    throw ConfigError("energy: potential samples do not match the grid");
  const double dx = g.dx();
  const double kin = 1.0 / (2.0 * mass * dx * dx);
  double e = 0.0;
  for (std::size_t j = 1; j + 1 < g.n; ++j) {
    cplx lap = f.psi[j + 1] - 2.0 * f.psi[j] + f.psi[j - 1];
    cplx h = -kin * lap + potential[j] * f.psi[j];
    e += (std::conj(f.psi[j]) * h).real();
  }
  e *= dx;
  if (normalized) {
    double p = norm_squared(f);
    if (p <= 0.0) throw NumericError("energy: field has no norm");
    e /= p;
  }
  return e;
}

struct ObservableSeries {
  std::vector<double> t;
  std::vector<double> value;
};

struct Snapshot {
  double t = 0.0;
  ComplexField1D field;
};

struct ObserverConfig {
  std::size_t sample_every = 100;      // step cadence for series and health checks
  std::vector<double> snapshot_times;  // copies of the field at the nearest step
  double probe_x = 0.0;                // where the center series reads |psi|^2
  bool record_center = false;
};

struct EvolutionRecord {
  ObservableSeries norm;    // total probability over time
  ObservableSeries energy;  // normalized <H> over time
  ObservableSeries center;  // |psi(probe_x)|^2 over time, if requested
  std::vector<Snapshot> snapshots;
  double norm_drift = 0.0;  // max |P(t) - P(0)|
  long long steps = 0;
  double t_final = 0.0;     // steps * dt actually taken
};

// Evolve the field in place to t_final, sampling observables along the way.
inline EvolutionRecord evolve(ComplexField1D& f, const std::vector<double>& potential,
                              const EvolutionParams& params, double t_final,
                              const ObserverConfig& obs = {}) {
  params.validate();
  if (!(t_final >= 0.0)) throw ConfigError("evolution: t_final must be non-negative");

  // Round to the nearest whole step; the record reports the time actually
  // reached, so an off-lattice request is honored to within half a step.
  const long long steps = std::llround(t_final / params.dt);
  if (steps <= 0 && t_final > 0.0)
    throw ConfigError("evolution: t_final shorter than one step");

  CayleyStepper stepper(f.grid, potential, params.mass, params.dt);

  // map each requested snapshot time to a step index
  std::vector<std::pair<long long, double>> snaps;
  snaps.reserve(obs.snapshot_times.size());
  for (double ts : obs.snapshot_times) {
    if (ts < 0.0 || ts > t_final + 0.5 * params.dt)
      throw ConfigError("evolution: snapshot time outside [0, t_final]");
    long long k = std::llround(ts / params.dt);
    if (k > steps) k = steps;
    snaps.emplace_back(k, ts);
  }
  std::sort(snaps.begin(), snaps.end());

  std::size_t probe = f.grid.index_near(obs.probe_x);

  EvolutionRecord rec;
  rec.steps = steps;
  rec.t_final = static_cast<double>(steps) * params.dt;

  const double p0 = norm_squared(f);
  auto sample = [&](long long k) {
    const double t = static_cast<double>(k) * params.dt;
    if (!all_finite(f.psi)) throw NumericError("evolution: field became non-finite");
    const double p = norm_squared(f);
    rec.norm.t.push_back(t);
    rec.norm.value.push_back(p);
    rec.energy.t.push_back(t);
    rec.energy.value.push_back(energy_expectation(f, potential, params.mass));
    if (obs.record_center) {
      rec.center.t.push_back(t);
      rec.center.value.push_back(std::norm(f.psi[probe]));
    }
    double drift = std::abs(p - p0);
    if (drift > rec.norm_drift) rec.norm_drift = drift;
  };

  std::size_t next_snap = 0;
  auto snapshot = [&](long long k) {
    while (next_snap < snaps.size() && snaps[next_snap].first == k) {
      rec.snapshots.push_back({static_cast<double>(k) * params.dt, f});
      ++next_snap;
    }
  };

  sample(0);
  snapshot(0);
  const std::size_t cadence = obs.sample_every == 0 ? 1 : obs.sample_every;
  for (long long k = 1; k <= steps; ++k) {
    stepper.step(f.psi);
    if (static_cast<std::size_t>(k) % cadence == 0 || k == steps) sample(k);
    snapshot(k);
  }
  return rec;
}

}  // namespace wavepacket
