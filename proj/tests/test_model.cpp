#include <catch2/catch_amalgamated.hpp>

#include "wavepacket/model.hpp"

using namespace wavepacket;

TEST_CASE("potential worked values") {
  PotentialSpec gauss{PotentialShape::gaussian, 1.0, 1.0};
  CHECK(eval_potential(gauss, 0.0) == Catch::Approx(-1.0));
  CHECK(eval_potential(gauss, 1.0) == Catch::Approx(-std::exp(-1.0)));

  PotentialSpec square{PotentialShape::square, 1.0, 1.0};
  CHECK(eval_potential(square, 0.0) == -1.0);
  CHECK(eval_potential(square, 1.0) == -1.0);  // closed interval
  CHECK(eval_potential(square, 1.0000001) == 0.0);
  CHECK(eval_potential(square, -1.0) == -1.0);

  PotentialSpec lor{PotentialShape::lorentzian, 2.0, 1.0};
  CHECK(eval_potential(lor, 0.0) == Catch::Approx(-2.0));
  CHECK(eval_potential(lor, 1.0) == Catch::Approx(-1.0));
}

TEST_CASE("potentials are attractive, even and bounded by the depth") {
  for (auto shape : {PotentialShape::gaussian, PotentialShape::square,
                     PotentialShape::lorentzian}) {
    PotentialSpec p{shape, 1.5, 0.7};
    for (double x = -5.0; x <= 5.0; x += 0.0937) {
      double v = eval_potential(p, x);
      CHECK(v <= 0.0);
      CHECK(v >= -1.5);
      CHECK(v == Catch::Approx(eval_potential(p, -x)).margin(1e-15));
    }
  }
}

TEST_CASE("sample_potential evaluates on the grid nodes") {
  PotentialSpec p{PotentialShape::gaussian, 1.0, 1.0};
  Grid1D g = make_grid(-3.0, 3.0, 0.5);
  auto v = sample_potential(p, g);
  REQUIRE(v.size() == g.n);
  for (std::size_t j = 0; j < g.n; ++j)
    CHECK(v[j] == eval_potential(p, g.x(j)));
}

TEST_CASE("cell-mean sampling averages the potential over each cell") {
  SECTION("smooth shapes stay within O(dx^2) of the node value") {
    for (auto shape : {PotentialShape::gaussian, PotentialShape::lorentzian}) {
      PotentialSpec p{shape, 1.0, 1.0};
      Grid1D g = make_grid(-3.0, 3.0, 0.01);
      auto vp = sample_potential(p, g);
      auto vc = sample_potential_cell_mean(p, g);
      REQUIRE(vc.size() == g.n);
      for (std::size_t j = 0; j < g.n; ++j)
        CHECK(vc[j] == Catch::Approx(vp[j]).margin(1e-4));
    }
  }

  SECTION("a square edge landing on a node contributes half depth") {
    PotentialSpec p{PotentialShape::square, 1.0, 1.0};
    Grid1D g = make_grid(-3.0, 3.0, 0.25);
    auto vc = sample_potential_cell_mean(p, g);
    CHECK(vc[g.index_near(-1.0)] == Catch::Approx(-0.5).margin(1e-12));
    CHECK(vc[g.index_near(1.0)] == Catch::Approx(-0.5).margin(1e-12));
    CHECK(vc[g.index_near(0.0)] == Catch::Approx(-1.0).margin(1e-12));
    CHECK(vc[g.index_near(-2.0)] == Catch::Approx(0.0).margin(1e-12));
  }

  SECTION("a square edge inside a cell contributes its covered fraction") {
    PotentialSpec p{PotentialShape::square, 1.0, 1.0};
    Grid1D g = make_grid(-3.1, 2.9, 0.25);  // nodes at ..., -1.1, -0.85, ...
    auto vc = sample_potential_cell_mean(p, g);
    // cell around -1.1 spans [-1.225, -0.975]: covered fraction 0.1
    CHECK(vc[g.index_near(-1.1)] == Catch::Approx(-0.1).margin(1e-12));
    CHECK(vc[g.index_near(-0.85)] == Catch::Approx(-1.0).margin(1e-12));
  }
}

TEST_CASE("default packet and potential parameters") {
  PacketSpec p;
  CHECK(p.shape == PacketShape::gaussian);
  CHECK(p.q == 1.0);
  CHECK(p.x0 == -10.0);
  CHECK(p.width == 0.5);
  PotentialSpec v;
  CHECK(v.shape == PotentialShape::gaussian);
  CHECK(v.v0 == 1.0);
  CHECK(v.width == 1.0);
}

TEST_CASE("gaussian packet is normalized with the right moments") {
  PacketSpec p;  // q=1, x0=-10, delta=0.5
  Grid1D g = make_grid(-30.0, 10.0, 0.01);
  auto f = make_packet_1d(p, g);
  CHECK(norm_squared(f) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(centroid(f) == Catch::Approx(-10.0).margin(1e-9));
  CHECK(rms_width(f) == Catch::Approx(0.5).epsilon(1e-6));
  CHECK(momentum_mean(f) == Catch::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("square packet has flat magnitude 1/sqrt(2d) on its support") {
  PacketSpec p{PacketShape::square, 1.0, 0.0, 0.0, 0.5};
  Grid1D g = make_grid(-10.0, 10.0, 0.005);
  auto f = make_packet_1d(p, g);
  CHECK(norm_squared(f) == Catch::Approx(1.0).epsilon(1e-12));
  double expect = 1.0 / std::sqrt(2.0 * 0.5);
  CHECK(std::abs(f.psi[g.index_near(0.0)]) == Catch::Approx(expect).epsilon(0.01));
  CHECK(std::abs(f.psi[g.index_near(0.4)]) == Catch::Approx(expect).epsilon(0.01));
  CHECK(std::abs(f.psi[g.index_near(2.0)]) == 0.0);
  // carrier phase advances as q(x - x0) across the support
  auto z1 = f.psi[g.index_near(0.0)];
  auto z2 = f.psi[g.index_near(0.3)];
  CHECK(std::arg(z2 / z1) == Catch::Approx(0.3).margin(1e-9));
}

TEST_CASE("exponential packet normalizes on a modest grid") {
  PacketSpec p{PacketShape::exponential, 1.0, 0.0, 0.0, 1.0};
  auto f = make_packet_1d(p, make_grid(-40.0, 40.0, 0.02));
  CHECK(norm_squared(f) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(centroid(f) == Catch::Approx(0.0).margin(1e-6));
}

TEST_CASE("lorentzian packet needs a very wide box for its fat tails") {
  PacketSpec p{PacketShape::lorentzian, 1.0, 0.0, 0.0, 1.0};
  // tail fraction falls like (4/3pi) S^-3, so 1e-10 needs S above ~1620
  CHECK_THROWS_AS(make_packet_1d(p, make_grid(-400.0, 400.0, 0.1)), ConfigError);
  auto f = make_packet_1d(p, make_grid(-1700.0, 1700.0, 0.1));
  CHECK(norm_squared(f) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(centroid(f) == Catch::Approx(0.0).margin(1e-6));
}

TEST_CASE("packet creation rejects a grid that clips the tails") {
  PacketSpec p;  // gaussian at -10 with delta 0.5
  CHECK_THROWS_AS(make_packet_1d(p, make_grid(-11.0, 10.0, 0.01)), ConfigError);
  // 2 widths of clearance is far too little; 20 widths is plenty
  CHECK_NOTHROW(make_packet_1d(p, make_grid(-30.0, 10.0, 0.01)));

  PacketSpec sq{PacketShape::square, 1.0, 0.0, 0.0, 1.0};
  CHECK_THROWS_AS(make_packet_1d(sq, make_grid(-0.5, 10.0, 0.01)), ConfigError);
}

TEST_CASE("packet creation rejects a center outside the grid") {
  PacketSpec p;
  p.x0 = 5.0;
  CHECK_THROWS_AS(make_packet_1d(p, make_grid(-4.0, 4.0, 0.01)), ConfigError);
}

TEST_CASE("packet validation rejects bad parameters") {
  PacketSpec p;
  p.width = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  PotentialSpec v;
  v.v0 = -1.0;
  CHECK_THROWS_AS(v.validate(), ConfigError);
  v = PotentialSpec{};
  v.width = -2.0;
  CHECK_THROWS_AS(v.validate(), ConfigError);
}
