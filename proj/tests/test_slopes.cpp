#include "doctest.h"
#include "slopes.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace exfill;

namespace {
// Cusp data of the minimally twisted 5-chain-link exterior at the complete
// structure: shape -1/2 + i sqrt(3)/2, area 2*sqrt(3).
CuspGeometry pentagon_cusp(double shape_err = 0.0, double area_err = 0.0) {
  CuspGeometry g;
  g.shape = CMR(cplx(-0.5, std::sqrt(3.0) / 2.0), shape_err);
  g.area = MR(2.0 * std::sqrt(3.0), area_err);
  return g;
}
}  // namespace

TEST_CASE("normalize_slope produces normal forms") {
  CHECK(normalize_slope(2, 4) == ExtSlope{1, 2});
  CHECK(normalize_slope(-1, 0) == ExtSlope{1, 0});
  CHECK(normalize_slope(0, -3) == ExtSlope{0, 1});
  CHECK(normalize_slope(0, 0) == slope_empty());
  CHECK(normalize_slope(-6, -4) == ExtSlope{3, 2});
  CHECK(normalize_slope(6, -4) == ExtSlope{-3, 2});
}

TEST_CASE("slope ordering: empty < infinity < rationals by value") {
  ExtSlope e = slope_empty(), inf = slope_infinity();
  ExtSlope minus1 = normalize_slope(-1, 1), half = normalize_slope(1, 2);
  CHECK(e < inf);
  CHECK(inf < minus1);
  CHECK(minus1 < half);
  CHECK_FALSE(half < minus1);
  CHECK_FALSE(e < e);
}

TEST_CASE("slope text round-trip") {
  CHECK(slope_text(slope_empty()) == "(0,0)");
  CHECK(slope_text(slope_infinity()) == "(1,0)");
  CHECK(slope_text(normalize_slope(-1, 2)) == "(-1,2)");
  CHECK(parse_slope("(-1,2)") == normalize_slope(-1, 2));
  CHECK(parse_slope(" (4,6) ") == normalize_slope(2, 3));
  CHECK_THROWS(parse_slope("nope"));
}

TEST_CASE("slope lengths on the 5-chain cusp: l(p/q) = 2 sqrt(p^2+q^2-pq)") {
  auto g = pentagon_cusp();
  auto len = [&](std::int64_t p, std::int64_t q) {
    return slope_length(g, normalize_slope(p, q));
  };
  CHECK(len(1, 0).contains(2.0));
  CHECK(len(-2, 1).contains(2.0 * std::sqrt(7.0)));
  CHECK(len(4, 1).contains(2.0 * std::sqrt(13.0)));
  CHECK(len(4, 1).lo() > 6.0);
  CHECK_THROWS(slope_length(g, slope_empty()));
}

TEST_CASE("short-slope enumeration on the 5-chain cusp gives the 12 slopes") {
  auto g = pentagon_cusp();
  auto got = enumerate_short_slopes(g, 6.0);
  std::set<ExtSlope> expect;
  for (auto [p, q] : {std::pair<int, int>{1, 0}, {-2, 1}, {-1, 1}, {-1, 2},
                      {0, 1}, {1, 3}, {1, 2}, {2, 3}, {1, 1}, {3, 2}, {2, 1},
                      {3, 1}})
    expect.insert(normalize_slope(p, q));
  CHECK(std::set<ExtSlope>(got.begin(), got.end()) == expect);
  CHECK(got.size() == 12);

  CHECK(enumerate_short_slopes(g, 0.1).empty());

  // Widening the input intervals only adds slopes.
  auto wide = enumerate_short_slopes(pentagon_cusp(0.05, 0.05), 6.0);
  std::set<ExtSlope> wide_set(wide.begin(), wide.end());
  for (const auto& s : expect) CHECK(wide_set.count(s) == 1);
}

TEST_CASE("enumeration soundness against brute force on random geometries") {
  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    CuspGeometry g;
    g.shape = CMR(cplx(4.0 * U(rng) - 2.0, 0.3 + 2.0 * U(rng)), 0.0);
    g.area = MR(0.5 + 4.0 * U(rng), 0.0);
    double bound = 1.0 + 6.0 * U(rng);
    auto got = enumerate_short_slopes(g, bound);
    std::set<ExtSlope> got_set(got.begin(), got.end());
    double x = g.shape.m.real(), y = g.shape.m.imag(), A = g.area.m;
    for (int p = -50; p <= 50; ++p)
      for (int q = 0; q <= 50; ++q) {
        ExtSlope s = normalize_slope(p, q);
        if (s.is_empty() || s.p != p || s.q != q) continue;
        double len = std::sqrt(
            A / y * ((p + x * q) * (p + x * q) + y * q * y * q));
        if (len <= bound) {
          CHECK(got_set.count(s) == 1);
        }
      }
  }
}

TEST_CASE("slope_length interval contains a higher-precision evaluation") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    CuspGeometry g;
    g.shape = CMR(cplx(2.0 * U(rng) - 1.0, 0.2 + U(rng)), 1e-9 * U(rng));
    g.area = MR(0.5 + 2.0 * U(rng), 1e-9 * U(rng));
    ExtSlope s = normalize_slope(1 + (rng() % 7), 1 + (rng() % 5));
    // long double evaluation at the midpoint must land inside
    long double x = g.shape.m.real(), y = g.shape.m.imag(), A = g.area.m;
    long double v = sqrtl(A / y * ((s.p + x * s.q) * (s.p + x * s.q) +
                                   (y * s.q) * (y * s.q)));
    CHECK(slope_length(g, s).contains(static_cast<double>(v)));
  }
}
