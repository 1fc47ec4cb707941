#include <doctest.h>

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>

#include "precode/alphabet.hpp"
#include "precode/errors.hpp"
#include "precode/rng.hpp"

using namespace precode;
using cplx = std::complex<double>;

namespace {

double wrap_angle(double a) {
  while (a <= -std::numbers::pi) a += 2 * std::numbers::pi;
  while (a > std::numbers::pi) a -= 2 * std::numbers::pi;
  return a;
}

// Independent sector test: index i owns [centre - theta, centre + theta).
bool in_sector(const PskAlphabet& a, int i, double angle) {
  const double theta = std::numbers::pi / a.order();
  const double delta = wrap_angle(angle - std::arg(a.point(i)));
  return delta >= -theta && delta < theta;
}

}  // namespace

TEST_CASE("constellation points match the defining angles") {
  SUBCASE("qpsk diagonal points") {
    PskAlphabet a(4, 1.0);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(a.point(0).real() == doctest::Approx(-r).epsilon(1e-12));  // e^{j3pi/4}
    CHECK(a.point(0).imag() == doctest::Approx(r).epsilon(1e-12));
    CHECK(a.point(1).real() == doctest::Approx(-r).epsilon(1e-12));  // e^{j5pi/4}
    CHECK(a.point(1).imag() == doctest::Approx(-r).epsilon(1e-12));
    CHECK(a.point(2).real() == doctest::Approx(r).epsilon(1e-12));   // e^{j7pi/4}
    CHECK(a.point(2).imag() == doctest::Approx(-r).epsilon(1e-12));
    CHECK(a.point(3).real() == doctest::Approx(r).epsilon(1e-12));   // e^{jpi/4}
    CHECK(a.point(3).imag() == doctest::Approx(r).epsilon(1e-12));
  }
  SUBCASE("binary alphabet is {-j, +j}") {
    PskAlphabet a(2, 1.0);
    CHECK(std::abs(a.point(0) - cplx(0.0, -1.0)) < 1e-12);
    CHECK(std::abs(a.point(1) - cplx(0.0, 1.0)) < 1e-12);
  }
  SUBCASE("order three with scaled amplitude") {
    const double amp = 1.0 / std::sqrt(6.0);
    PskAlphabet a(3, amp);
    const double expected_angles[3] = {std::numbers::pi, 5.0 * std::numbers::pi / 3.0,
                                       std::numbers::pi / 3.0};
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(a.point(i)) == doctest::Approx(amp).epsilon(1e-12));
      CHECK(wrap_angle(std::arg(a.point(i)) - expected_angles[i]) == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
  SUBCASE("modulus and spacing invariants") {
    for (int order = 2; order <= 16; ++order) {
      PskAlphabet a(order, 0.7);
      for (int i = 0; i < order; ++i) {
        CHECK(std::abs(std::abs(a.point(i)) - 0.7) < 1e-12);
        const double gap = wrap_angle(std::arg(a.point((i + 1) % order)) - std::arg(a.point(i)));
        CHECK(gap == doctest::Approx(2.0 * std::numbers::pi / order).epsilon(1e-9));
      }
    }
  }
  SUBCASE("invalid parameters rejected") {
    CHECK_THROWS_AS(PskAlphabet(1, 1.0), ContractViolation);
    CHECK_THROWS_AS(PskAlphabet(4, 0.0), ContractViolation);
  }
}

TEST_CASE("phase quantizer sector membership") {
  PskAlphabet qpsk(4, 1.0);
  CHECK(qpsk.phase_quantize(cplx(0.9, 0.1)) == 3);  // arg ~ 6.3 deg in [0, 90)
  CHECK(qpsk.phase_quantize(cplx(1.0, 0.0)) == 3);  // boundary goes to the upper sector
  CHECK(qpsk.phase_quantize(cplx(0.0, 0.0)) == 3);  // r = 0 resolves to the angle-0 sector

  SUBCASE("each point is quantized to itself") {
    for (int order = 2; order <= 16; ++order) {
      PskAlphabet a(order, 1.3);
      for (int i = 0; i < order; ++i) CHECK(a.phase_quantize(a.point(i)) == i);
    }
  }
  SUBCASE("scale invariance") {
    RandomStream rng(1234);
    PskAlphabet a(8, 1.0);
    for (int t = 0; t < 1000; ++t) {
      const cplx c(rng.normal(), rng.normal());
      const double scale = std::exp(3.0 * rng.normal());
      CHECK(a.phase_quantize(c) == a.phase_quantize(scale * c));
    }
  }
  SUBCASE("exactly one sector contains each random angle") {
    RandomStream rng(77);
    for (int order : {2, 3, 4, 8, 16}) {
      PskAlphabet a(order, 1.0);
      for (int t = 0; t < 20000; ++t) {
        cplx c(rng.normal(), rng.normal());
        if (std::abs(c) == 0.0) continue;
        int hits = 0;
        int member = -1;
        for (int i = 0; i < order; ++i) {
          if (in_sector(a, i, std::arg(c))) {
            ++hits;
            member = i;
          }
        }
        REQUIRE(hits == 1);
        REQUIRE(a.phase_quantize(c) == member);
      }
    }
  }
}

TEST_CASE("nearest point agrees with brute-force distance search") {
  PskAlphabet a(4, 1.0);
  CHECK(a.nearest_point(0.5 * a.point(3)) == 3);  // colinear with e^{jpi/4}

  SUBCASE("ties break toward the smaller index") {
    PskAlphabet three(3, 1.0);
    CHECK(three.nearest_point(cplx(0.0, 0.0)) == 0);
  }
  SUBCASE("matches phase_quantize on random inputs") {
    RandomStream rng(99);
    for (int order : {3, 4, 8}) {
      PskAlphabet a2(order, 0.5);
      for (int t = 0; t < 10000; ++t) {
        const cplx c(rng.normal(), rng.normal());
        int best = 0;
        double best_d = std::abs(c - a2.point(0));
        for (int i = 1; i < order; ++i) {
          const double d = std::abs(c - a2.point(i));
          if (d < best_d) {
            best_d = d;
            best = i;
          }
        }
        CHECK(a2.nearest_point(c) == best);
        CHECK(a2.nearest_point(c) == a2.phase_quantize(c));
      }
    }
  }
}

TEST_CASE("gray labelling") {
  GrayMap g4(4);
  CHECK(g4.bits_per_symbol() == 2);
  CHECK(g4.encode(0) == 0b00);
  CHECK(g4.encode(1) == 0b01);
  CHECK(g4.encode(2) == 0b11);
  CHECK(g4.encode(3) == 0b10);

  GrayMap g8(8);
  CHECK(g8.encode(5) == 0b111);  // binary-reflected construction i ^ (i >> 1)

  SUBCASE("decode inverts encode") {
    for (int order : {2, 4, 8, 16}) {
      GrayMap g(order);
      for (int i = 0; i < order; ++i) CHECK(g.decode(g.encode(i)) == i);
    }
  }
  SUBCASE("oracle i xor (i >> 1)") {
    for (int order : {2, 4, 8, 16}) {
      GrayMap g(order);
      for (int i = 0; i < order; ++i) {
        CHECK(g.encode(i) == (static_cast<std::uint32_t>(i) ^ (static_cast<std::uint32_t>(i) >> 1)));
      }
    }
  }
  SUBCASE("angular neighbours differ in one bit, wrap included") {
    for (int order : {2, 4, 8, 16}) {
      GrayMap g(order);
      for (int i = 0; i < order; ++i) {
        const auto diff = g.encode(i) ^ g.encode((i + 1) % order);
        CHECK(std::popcount(diff) == 1);
      }
    }
  }
  SUBCASE("non-power-of-two orders unsupported") {
    CHECK_THROWS_AS(GrayMap(3), UnsupportedConfig);
    CHECK_THROWS_AS(GrayMap(6), UnsupportedConfig);
  }
}
