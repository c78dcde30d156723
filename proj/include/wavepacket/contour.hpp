#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "wavepacket/model.hpp"
#include "wavepacket/squarewell.hpp"

// Semi-analytic propagator for a square packet hitting a square well.
// The packet is expanded in the well's scattering waves,
//   psi(x,t) = integral over momentum of a(p) Phi_p(x) exp(-i p^2 t / 2m),
// taken along a contour that clears the bound-state poles of Phi_p from
// above. The integral is evaluated as the real-axis part plus -2 pi i
// times the residues at the enclosed poles, which is the same contour
// integral without ever sampling the exponentially growing off-axis
// integrand. Raising the detour height cannot change the answer because
// the pole set below it is already complete; the height is still checked
// so a contour that would clip a pole is rejected.

namespace wavepacket {

// Momentum amplitude of the square packet in the symmetric transform
// convention: the momentum density |a|^2 integrates to one.
inline cplx square_packet_amplitude(const PacketSpec& packet, cplx p) {
  const double d = packet.width;
  const double C = 1.0 / std::sqrt(2.0 * d);
  const cplx i(0.0, 1.0);
  cplx u = (p - packet.q) * d;
  return (2.0 * C / std::sqrt(2.0 * M_PI)) * std::exp(-i * p * packet.x0) * d *
         detail::sinc(u);
}

// Half-width of the ringing zone around a jump of the packet when the
// momentum integral is cut at p_max: the truncated tail contributes about
// 1 / (pi p_max dist) of the jump at distance dist, so matching a relative
// tolerance needs dist >= 1 / (pi p_max tol).
inline double gibbs_halfwidth(double p_max, double rel_tol) {
  if (!(p_max > 0.0) || !(rel_tol > 0.0))
    throw ConfigError("gibbs window: p_max and tolerance must be positive");
  return 1.0 / (M_PI * p_max * rel_tol);
}

// Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1].
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double z_old = z;
      z -= p1 / pp;
      if (std::abs(z - z_old) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

struct ContourSpec {
  double p_max = 0.0;          // momentum cutoff; 0 means q + 30/d
  double detour_height = 0.0;  // 0 means just above the deepest pole
  std::size_t n_nodes = 4096;  // initial quadrature budget, 16 per panel
  double refine_tol = 0.005;   // relative agreement between refinements
  std::size_t max_nodes = std::size_t{1} << 21;
};

class SquareWellOracle {
 public:
  SquareWellOracle(const SquareWell& well, const PacketSpec& packet,
                   ContourSpec spec = {})
      : well_(well), packet_(packet), spec_(spec) {
    well_.validate();
    packet_.validate();
    if (packet_.shape != PacketShape::square)
      throw ConfigError("oracle: packet shape must be square");
    if (packet_.x0 + packet_.width >= -well_.a)
      throw ConfigError("oracle: packet must start entirely left of the well");

    kappas_ = bound_state_kappas(well_);
    poles_ = pole_data(well_);
    double kappa_max = kappas_.empty() ? 0.0 : kappas_.front();
    if (spec_.detour_height == 0.0) spec_.detour_height = kappa_max + 1.0;
    if (spec_.detour_height <= kappa_max)
      throw ConfigError("oracle: detour height does not clear the bound-state poles");
    if (spec_.p_max == 0.0) spec_.p_max = packet_.q + 30.0 / packet_.width;
    if (!(spec_.p_max > 0.0)) throw ConfigError("oracle: p_max must be positive");
    if (spec_.n_nodes < 16) throw ConfigError("oracle: need at least one panel");
    gauss_legendre(16, glx_, glw_);
  }

  const std::vector<double>& bound_kappas() const { return kappas_; }
  double p_max() const { return spec_.p_max; }
  double detour_height() const { return spec_.detour_height; }

  // psi(x, t) at ascending sample points.
  std::vector<cplx> evaluate(const std::vector<double>& x, double t) const {
    if (x.empty()) throw ConfigError("oracle: no sample points");
    for (std::size_t k = 0; k + 1 < x.size(); ++k)
      if (!(x[k] < x[k + 1])) throw ConfigError("oracle: samples must ascend");
    if (!(t >= 0.0)) throw ConfigError("oracle: t must be non-negative");

    // panels sized so each holds about one period of the fastest phase
    const double reach = std::max(std::abs(x.front()), std::abs(x.back())) +
                         std::abs(packet_.x0) + packet_.width;
    const double total_phase = 2.0 * (reach * spec_.p_max +
                                      spec_.p_max * spec_.p_max * t / (2.0 * well_.mass));
    std::size_t n_panels = static_cast<std::size_t>(total_phase / (2.0 * M_PI)) + 1;
    n_panels = std::max(n_panels, spec_.n_nodes / 16);
    if (n_panels * 16 > spec_.max_nodes)
      throw NumericError("oracle: quadrature did not settle within the node budget");

    std::vector<cplx> prev = eval_panels(x, t, n_panels);
    for (;;) {
      if (2 * n_panels * 16 > spec_.max_nodes)
        throw NumericError("oracle: quadrature did not settle within the node budget");
      n_panels *= 2;
      std::vector<cplx> cur = eval_panels(x, t, n_panels);
      double worst = 0.0, peak = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        worst = std::max(worst, std::abs(cur[k] - prev[k]));
        peak = std::max(peak, std::abs(cur[k]));
      }
      if (worst <= spec_.refine_tol * std::max(peak, 1e-300)) return cur;
      prev = std::move(cur);
    }
  }

 private:
  std::vector<cplx> eval_panels(const std::vector<double>& x, double t,
                                std::size_t n_panels) const {
    const std::size_t n = x.size();
    const double m = well_.mass;
    const double reach = std::max(std::abs(x.front()), std::abs(x.back())) +
                         std::abs(packet_.x0) + packet_.width;

    // cumulative phase measure G(p), inverted to place panel edges
    const double g_half = reach * spec_.p_max +
                          spec_.p_max * spec_.p_max * t / (2.0 * m);
    auto edge = [&](std::size_t k) {
      double c = (2.0 * g_half) * static_cast<double>(k) / static_cast<double>(n_panels);
      double g = c - g_half;
      double mag = std::abs(g);
      double u = (t > 0.0)
                     ? 2.0 * mag / (reach + std::sqrt(reach * reach + 2.0 * mag * t / m))
                     : mag / reach;
      return g < 0.0 ? -u : u;
    };

    // region partition: left of the well, inside, right
    std::size_t left_end = 0, int_end = 0;
    while (left_end < n && x[left_end] < -well_.a) ++left_end;
    int_end = left_end;
    while (int_end < n && x[int_end] <= well_.a) ++int_end;

    bool uniform = n >= 2;
    const double h = n >= 2 ? (x.back() - x.front()) / static_cast<double>(n - 1) : 0.0;
    for (std::size_t k = 0; k + 1 < n && uniform; ++k)
      if (std::abs(x[k + 1] - x[k] - h) > 1e-9 * std::max(1.0, std::abs(h))) uniform = false;

    const cplx i(0.0, 1.0);
    const double inv_root = 1.0 / std::sqrt(2.0 * M_PI);
    std::vector<cplx> acc(n, cplx(0.0, 0.0));

    for (std::size_t pan = 0; pan < n_panels; ++pan) {
      const double pa = edge(pan), pb = edge(pan + 1);
      const double mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
      for (int j = 0; j < 16; ++j) {
        const double p = mid + half * glx_[j];
        const double wgt = half * glw_[j];
        auto amp = scatter_amplitudes(well_, cplx(p, 0.0));
        const cplx S = wgt * inv_root * square_packet_amplitude(packet_, cplx(p, 0.0)) *
                       std::exp(-i * (p * p * t / (2.0 * m)));
        const cplx SR = S * amp.R;
        const cplx ST = S * (amp.T - 1.0);

        if (uniform) {
          const cplx step_f = std::exp(i * (p * h));
          cplx ef = S * std::exp(i * (p * x.front()));
          for (std::size_t k = 0; k < n; ++k) {
            acc[k] += ef;
            ef *= step_f;
          }
          if (left_end > 0) {
            const cplx step_b = std::exp(-i * (p * h));
            cplx eb = SR * std::exp(-i * (p * x.front()));
            for (std::size_t k = 0; k < left_end; ++k) {
              acc[k] += eb;
              eb *= step_b;
            }
          }
          if (int_end < n) {
            cplx er = ST * std::exp(i * (p * x[int_end]));
            for (std::size_t k = int_end; k < n; ++k) {
              acc[k] += er;
              er *= step_f;
            }
          }
        } else {
          for (std::size_t k = 0; k < n; ++k) acc[k] += S * std::exp(i * (p * x[k]));
          for (std::size_t k = 0; k < left_end; ++k)
            acc[k] += SR * std::exp(-i * (p * x[k]));
          for (std::size_t k = int_end; k < n; ++k)
            acc[k] += ST * std::exp(i * (p * x[k]));
        }
        // interior kernel, minus the incident part already accumulated
        for (std::size_t k = left_end; k < int_end; ++k)
          acc[k] += S * (interior_wave(amp, x[k]) - std::exp(i * (p * x[k])));
      }
    }

    // minus 2 pi i times the residues enclosed by the detour
    for (const PoleData& pole : poles_) {
      const cplx p0(0.0, pole.kappa);
      const cplx factor = -i * std::sqrt(2.0 * M_PI) *
                          square_packet_amplitude(packet_, p0) *
                          std::exp(i * (pole.kappa * pole.kappa * t / (2.0 * m)));
      const double kt = pole.k_interior;
      for (std::size_t k = 0; k < left_end; ++k)
        acc[k] += factor * pole.res_R * std::exp(pole.kappa * x[k]);
      for (std::size_t k = left_end; k < int_end; ++k) {
        double snc = std::abs(kt * x[k]) < 1e-8 ? x[k] : std::sin(kt * x[k]) / kt;
        acc[k] += factor * (pole.res_alpha * std::cos(kt * x[k]) + pole.res_beta * snc);
      }
      for (std::size_t k = int_end; k < n; ++k)
        acc[k] += factor * pole.res_T * std::exp(-pole.kappa * x[k]);
    }

    return acc;
  }

  SquareWell well_;
  PacketSpec packet_;
  ContourSpec spec_;
  std::vector<double> kappas_;
  std::vector<PoleData> poles_;
  std::vector<double> glx_, glw_;
};

}  // namespace wavepacket
