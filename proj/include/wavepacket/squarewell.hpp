#pragma once

#include <cmath>
#include <vector>

#include "wavepacket/grid.hpp"

// Closed-form scattering data for the finite square well V = -v0 on
// |x| <= a. A wave of momentum p arriving from the left scatters into
//   exp(ipx) + R exp(-ipx)      left of the well,
//   alpha cos(kx) + beta sin(kx)/k   inside (k is the interior momentum),
//   T exp(ipx)                  right of the well,
// with k^2 = p^2 + 2 m v0. Everything is assembled from cos(ka) and
// sin(ka)/k, which are even in k, so all quantities are single-valued
// meromorphic functions of p: no branch cuts, only simple poles on the
// positive imaginary axis, one per bound state.

namespace wavepacket {

struct SquareWell {
  double v0 = 1.0;
  double a = 1.0;
  double mass = 20.0;

  void validate() const {
    if (!(v0 > 0.0)) throw ConfigError("square well: v0 must be positive");
    if (!(a > 0.0)) throw ConfigError("square well: half-width must be positive");
    if (!(mass > 0.0)) throw ConfigError("square well: mass must be positive");
  }
};

namespace detail {

// sin(z)/z, stable near the origin
inline cplx sinc(cplx z) {
  if (std::abs(z) < 1e-4) {
    cplx z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

struct WellTrig {
  cplx k;        // interior momentum, any square root of k2
  cplx k2;       // p^2 + 2 m v0
  cplx c1, s1;   // cos(ka), sin(ka)/k
  cplx c2, s2;   // cos(2ka), sin(2ka)/k
};

inline WellTrig well_trig(const SquareWell& w, cplx p) {
  WellTrig t;
  t.k2 = p * p + 2.0 * w.mass * w.v0;
  t.k = std::sqrt(t.k2);
  cplx ka = t.k * w.a;
  t.c1 = std::cos(ka);
  t.s1 = w.a * sinc(ka);
  t.c2 = std::cos(2.0 * ka);
  t.s2 = 2.0 * w.a * sinc(2.0 * ka);
  return t;
}

}  // namespace detail

// Denominator shared by all scattering amplitudes; its upper-half-plane
// zeros sit at p = i kappa, one for each bound state.
inline cplx well_denominator(const SquareWell& w, cplx p) {
  auto t = detail::well_trig(w, p);
  return 2.0 * p * t.c2 - cplx(0.0, 1.0) * (p * p + t.k2) * t.s2;
}

inline cplx well_denominator_prime(const SquareWell& w, cplx p) {
  auto t = detail::well_trig(w, p);
  const cplx i(0.0, 1.0);
  cplx real_part = 2.0 * t.c2 - 4.0 * w.a * p * p * t.s2;
  cplx imag_part = 4.0 * p * t.s2 +
                   (p * p + t.k2) * p * (2.0 * w.a * t.c2 - t.s2) / t.k2;
  return real_part - i * imag_part;
}

struct ScatterAmplitudes {
  cplx T;          // transmitted coefficient of exp(ipx)
  cplx R;          // reflected coefficient of exp(-ipx)
  cplx alpha;      // interior cos(kx) coefficient
  cplx beta;       // interior sin(kx)/k coefficient
  cplx k;          // interior momentum
};

inline ScatterAmplitudes scatter_amplitudes(const SquareWell& w, cplx p) {
  auto t = detail::well_trig(w, p);
  const cplx i(0.0, 1.0);
  cplx den = 2.0 * p * t.c2 - i * (p * p + t.k2) * t.s2;
  cplx phase = std::exp(-2.0 * i * p * w.a);
  ScatterAmplitudes s;
  s.T = 2.0 * p * phase / den;
  s.R = 2.0 * i * w.mass * w.v0 * t.s2 * phase / den;
  cplx edge = s.T * std::exp(i * p * w.a);
  s.alpha = edge * (t.c1 - i * p * t.s1);
  s.beta = edge * (t.k2 * t.s1 + i * p * t.c1);
  s.k = t.k;
  return s;
}

// Interior wave at position x, |x| <= a.
inline cplx interior_wave(const ScatterAmplitudes& s, double x) {
  cplx kx = s.k * x;
  return s.alpha * std::cos(kx) + s.beta * x * detail::sinc(kx);
}

// Bound-state decay constants kappa (E = -kappa^2 / 2m), deepest state
// first. Found by bisecting the even and odd matching conditions in the
// interior momentum, independently of the scattering denominator.
inline std::vector<double> bound_state_kappas(const SquareWell& w) {
  w.validate();
  const double K = std::sqrt(2.0 * w.mass * w.v0);
  auto kappa_of = [&](double kt) {
    double r = K * K - kt * kt;
    return r > 0.0 ? std::sqrt(r) : 0.0;
  };
  // even: kt sin(kt a) - kappa cos(kt a), odd: cos(kt a) + kappa a sinc(kt a)
  auto g_even = [&](double kt) {
    return kt * std::sin(kt * w.a) - kappa_of(kt) * std::cos(kt * w.a);
  };
  auto g_odd = [&](double kt) {
    double ka = kt * w.a;
    double snc = ka < 1e-8 ? 1.0 : std::sin(ka) / ka;
    return std::cos(ka) + kappa_of(kt) * w.a * snc;
  };

  std::vector<double> kappas;
  auto scan = [&](auto&& g) {
    const int cells = 4000;
    double prev_kt = K * 1e-9;
    double prev_g = g(prev_kt);
    for (int c = 1; c <= cells; ++c) {
      double kt = K * static_cast<double>(c) / cells;
      double cur = g(kt);
      if (prev_g == 0.0) prev_g = -cur;  // nudge an exact grid hit
      if ((prev_g < 0.0) != (cur < 0.0)) {
        double lo = prev_kt, hi = kt, glo = prev_g;
        for (int it = 0; it < 100; ++it) {
          double mid = 0.5 * (lo + hi);
          double gm = g(mid);
          if ((glo < 0.0) == (gm < 0.0)) {
            lo = mid;
            glo = gm;
          } else {
            hi = mid;
          }
        }
        double kappa = kappa_of(0.5 * (lo + hi));
        if (kappa > 1e-8) kappas.push_back(kappa);
      }
      prev_kt = kt;
      prev_g = cur;
    }
  };
  scan(g_even);
  scan(g_odd);
  std::sort(kappas.rbegin(), kappas.rend());
  return kappas;
}

// Residues of the scattering amplitudes at the bound-state pole p = i kappa.
struct PoleData {
  double kappa = 0.0;
  double k_interior = 0.0;  // real interior momentum at the pole
  cplx res_T, res_R, res_alpha, res_beta;
};

inline std::vector<PoleData> pole_data(const SquareWell& w) {
  std::vector<PoleData> poles;
  const cplx i(0.0, 1.0);
  for (double kappa : bound_state_kappas(w)) {
    cplx p(0.0, kappa);
    auto t = detail::well_trig(w, p);
    cplx dp = well_denominator_prime(w, p);
    // confirm the root transferred from the matching conditions
    double scale = std::abs(2.0 * p * t.c2) + std::abs((p * p + t.k2) * t.s2);
    if (std::abs(well_denominator(w, p)) > 1e-10 * scale)
      throw NumericError("square well: bound state does not match a pole");
    PoleData d;
    d.kappa = kappa;
    d.k_interior = std::sqrt(2.0 * w.mass * w.v0 - kappa * kappa);
    cplx phase = std::exp(-2.0 * i * p * w.a);
    d.res_T = 2.0 * p * phase / dp;
    d.res_R = 2.0 * i * w.mass * w.v0 * t.s2 * phase / dp;
    cplx edge = std::exp(i * p * w.a);
    d.res_alpha = edge * (t.c1 - i * p * t.s1) * d.res_T;
    d.res_beta = edge * (t.k2 * t.s1 + i * p * t.c1) * d.res_T;
    poles.push_back(d);
  }
  return poles;
}

}  // namespace wavepacket
