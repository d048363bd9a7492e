#include "doctest.h"
#include "interval.hpp"

#include <random>

using namespace exfill;

TEST_CASE("real interval arithmetic encloses exact results") {
  MR third = mr_exact(1.0) / mr_exact(3.0);
  CHECK(third.contains(1.0 / 3.0));
  CHECK(third.r < 1e-14);
  MR one = third * mr_exact(3.0);
  CHECK(one.contains(1.0));

  MR a(2.0, 0.5);  // [1.5, 2.5]
  MR b(-1.0, 0.25);
  MR s = a + b;
  CHECK(s.contains(1.5 + (-1.25)));
  CHECK(s.contains(2.5 + (-0.75)));
  MR p = a * b;
  CHECK(p.contains(1.5 * -0.75));
  CHECK(p.contains(2.5 * -1.25));
}

TEST_CASE("real sqrt/log/exp enclose endpoint images") {
  MR a(4.0, 1.0);
  MR s = sqrt(a);
  CHECK(s.contains(std::sqrt(3.0)));
  CHECK(s.contains(std::sqrt(5.0)));
  MR l = log(a);
  CHECK(l.contains(std::log(3.0)));
  CHECK(l.contains(std::log(5.0)));
  MR e = exp(MR(0.0, 0.5));
  CHECK(e.contains(std::exp(-0.5)));
  CHECK(e.contains(std::exp(0.5)));
  CHECK_THROWS(log(MR(0.5, 1.0)));
  CHECK_THROWS(sqrt(MR(-1.0, 0.5)));
}

TEST_CASE("disc arithmetic encloses sampled points") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    CMR a(cplx(U(rng) + 2.0, U(rng)), 0.05);
    CMR b(cplx(U(rng) - 3.0, U(rng) + 1.5), 0.05);
    // sample points inside the discs
    double t1 = 0.04 * U(rng), t2 = 0.04 * U(rng);
    cplx pa = a.m + cplx(t1, 0.02 * U(rng));
    cplx pb = b.m + cplx(t2, 0.02 * U(rng));
    CHECK((a + b).contains(pa + pb));
    CHECK((a - b).contains(pa - pb));
    CHECK((a * b).contains(pa * pb));
    CHECK((a / b).contains(pa / pb));
  }
}

TEST_CASE("disc log and exp are sound away from the branch cut") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    CMR a(cplx(1.5 + U(rng), 1.5 + U(rng)), 0.02);
    cplx pa = a.m + cplx(0.015 * U(rng), 0.01 * U(rng));
    CHECK(log(a).contains(std::log(pa)));
    CHECK(exp(a).contains(std::exp(pa)));
  }
  CHECK_THROWS(log(CMR(cplx(-1.0, 0.0), 0.5)));   // disc crosses the cut
  CHECK_THROWS(log(CMR(cplx(0.01, 0.0), 0.05)));  // disc contains 0
}

TEST_CASE("certain comparisons require separated intervals") {
  CHECK(certainly_less(MR(1.0, 0.1), MR(2.0, 0.1)));
  CHECK_FALSE(certainly_less(MR(1.0, 0.6), MR(2.0, 0.6)));
  CHECK(MR(2.0, 1.9).certainly_positive());
  CHECK_FALSE(MR(2.0, 2.1).certainly_positive());
}
