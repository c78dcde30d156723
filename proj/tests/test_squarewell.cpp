#include <catch2/catch_amalgamated.hpp>

#include "wavepacket/squarewell.hpp"

using namespace wavepacket;

namespace {
const SquareWell kWell{1.0, 1.0, 20.0};  // v0=1, a=1, m=20

// residue of f at p0 by a 64-point trapezoid around a small circle,
// spectrally accurate and fully independent of the closed forms
template <typename F>
cplx circle_residue(F&& f, cplx p0, double radius = 1e-3) {
  const int n = 64;
  cplx acc(0.0, 0.0);
  for (int k = 0; k < n; ++k) {
    double th = 2.0 * M_PI * k / n;
    cplx dz = std::polar(radius, th);
    acc += f(p0 + dz) * dz;
  }
  return acc / static_cast<double>(n);
}
}  // namespace

TEST_CASE("scattering flux is conserved on the real axis") {
  for (double p = 0.05; p < 60.0; p += 0.173) {
    auto s = scatter_amplitudes(kWell, cplx(p, 0.0));
    double flux = std::norm(s.T) + std::norm(s.R);
    CHECK(flux == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("zero momentum is fully reflected") {
  auto s = scatter_amplitudes(kWell, cplx(0.0, 0.0));
  CHECK(std::abs(s.T) < 1e-15);
  CHECK(s.R.real() == Catch::Approx(-1.0).margin(1e-14));
  CHECK(s.R.imag() == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("transmission resonance where the interior wave fits exactly") {
  // interior momentum 5 pi / 2 is the first half-wave fit above threshold
  double p_res = std::sqrt(std::pow(2.5 * M_PI, 2) - 40.0);
  CHECK(p_res == Catch::Approx(4.6568).margin(5e-4));
  auto s = scatter_amplitudes(kWell, cplx(p_res, 0.0));
  CHECK(std::abs(s.T) == Catch::Approx(1.0).margin(1e-12));
  CHECK(std::abs(s.R) < 1e-12);
}

TEST_CASE("wave and slope are continuous at both well edges") {
  for (double p : {0.3, 1.0, 2.7, 4.66, 9.1}) {
    auto s = scatter_amplitudes(kWell, cplx(p, 0.0));
    const cplx i(0.0, 1.0);
    const double a = kWell.a;

    cplx left_val = std::exp(-i * p * a) + s.R * std::exp(i * p * a);
    cplx left_slope = i * p * (std::exp(-i * p * a) - s.R * std::exp(i * p * a));
    cplx right_val = s.T * std::exp(i * p * a);
    cplx right_slope = i * p * right_val;

    auto in_val = [&](double x) { return interior_wave(s, x); };
    auto in_slope = [&](double x) {
      return -s.alpha * s.k * std::sin(s.k * x) + s.beta * std::cos(s.k * x);
    };

    CHECK(std::abs(in_val(-a) - left_val) < 1e-12);
    CHECK(std::abs(in_slope(-a) - left_slope) < 1e-12);
    CHECK(std::abs(in_val(a) - right_val) < 1e-12);
    CHECK(std::abs(in_slope(a) - right_slope) < 1e-12);
  }
}

TEST_CASE("bound state count for the default well") {
  auto kappas = bound_state_kappas(kWell);
  REQUIRE(kappas.size() == 5);
  // deepest first, all inside (0, sqrt(2 m v0))
  double K = std::sqrt(40.0);
  for (std::size_t n = 0; n < kappas.size(); ++n) {
    CHECK(kappas[n] > 0.0);
    CHECK(kappas[n] < K);
    if (n > 0) CHECK(kappas[n] < kappas[n - 1]);
  }
}

TEST_CASE("bound state count for a lighter particle") {
  auto kappas = bound_state_kappas(SquareWell{1.0, 1.0, 5.0});
  CHECK(kappas.size() == 3);
}

TEST_CASE("each bound state satisfies an even or odd matching condition") {
  for (double kappa : bound_state_kappas(kWell)) {
    double kt = std::sqrt(40.0 - kappa * kappa);
    double even = kt * std::sin(kt) - kappa * std::cos(kt);
    double odd = kt * std::cos(kt) + kappa * std::sin(kt);
    CHECK(std::min(std::abs(even), std::abs(odd)) < 1e-9 * std::max(kt, kappa));
  }
}

TEST_CASE("bound states are zeros of the scattering denominator") {
  for (double kappa : bound_state_kappas(kWell)) {
    cplx p(0.0, kappa);
    double scale = std::abs(well_denominator_prime(kWell, p));
    CHECK(std::abs(well_denominator(kWell, p)) < 1e-10 * scale);
  }
}

TEST_CASE("denominator derivative agrees with a finite difference") {
  for (cplx p : {cplx(1.3, 0.0), cplx(0.0, 4.2), cplx(2.0, 1.0)}) {
    const double h = 1e-6;
    cplx fd = (well_denominator(kWell, p + h) - well_denominator(kWell, p - h)) /
              (2.0 * h);
    cplx an = well_denominator_prime(kWell, p);
    CHECK(std::abs(fd - an) < 1e-5 * std::max(1.0, std::abs(an)));
  }
}

TEST_CASE("closed-form residues match contour integrals around each pole") {
  auto poles = pole_data(kWell);
  REQUIRE(poles.size() == 5);
  for (const auto& pole : poles) {
    cplx p0(0.0, pole.kappa);
    cplx rT = circle_residue(
        [&](cplx p) { return scatter_amplitudes(kWell, p).T; }, p0);
    cplx rR = circle_residue(
        [&](cplx p) { return scatter_amplitudes(kWell, p).R; }, p0);
    CHECK(std::abs(rT - pole.res_T) < 1e-8 * std::abs(pole.res_T));
    CHECK(std::abs(rR - pole.res_R) < 1e-8 * std::abs(pole.res_R));
  }
  // interior coefficients share the pole through T
  const auto& deep = poles.front();
  cplx p0(0.0, deep.kappa);
  cplx rA = circle_residue(
      [&](cplx p) { return scatter_amplitudes(kWell, p).alpha; }, p0);
  cplx rB = circle_residue(
      [&](cplx p) { return scatter_amplitudes(kWell, p).beta; }, p0);
  // the ground state is even, so its sin coefficient residue vanishes;
  // measure both against the size of the pair
  double scale = std::max(std::abs(deep.res_alpha), std::abs(deep.res_beta));
  CHECK(std::abs(rA - deep.res_alpha) < 1e-8 * scale);
  CHECK(std::abs(rB - deep.res_beta) < 1e-8 * scale);
}

TEST_CASE("well validation rejects bad parameters") {
  CHECK_THROWS_AS((SquareWell{0.0, 1.0, 20.0}).validate(), ConfigError);
  CHECK_THROWS_AS((SquareWell{1.0, -1.0, 20.0}).validate(), ConfigError);
  CHECK_THROWS_AS((SquareWell{1.0, 1.0, 0.0}).validate(), ConfigError);
}
