#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "seba/rng.hpp"
#include "seba/stochastic.hpp"

using namespace seba;

TEST_CASE("same seed and stream reproduce the sequence") {
  rng::CounterRng a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("streams decorrelate") {
  rng::CounterRng a(42, 0), b(42, 1), c(43, 0);
  int equal_ab = 0, equal_ac = 0;
  for (int i = 0; i < 1000; ++i) {
    auto x = a.next_u64();
    if (x == b.next_u64()) ++equal_ab;
    if (x == c.next_u64()) ++equal_ac;
  }
  CHECK(equal_ab == 0);
  CHECK(equal_ac == 0);
}

TEST_CASE("uniform stays strictly inside (0,1) and has the right mean") {
  rng::CounterRng gen(1);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double u = gen.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  double mean = sum / n;
  double var = sum2 / n - mean * mean;
  CHECK(std::fabs(mean - 0.5) < 5.0 / std::sqrt(12.0 * n));
  CHECK(std::fabs(var - 1.0 / 12.0) < 0.002);
}

TEST_CASE("exponential draws pass a KS test against their law") {
  rng::CounterRng gen(2024);
  const int n = 100000;
  std::vector<double> draws(n);
  for (int i = 0; i < n; ++i) draws[i] = gen.exponential(1.0);
  auto ks = ks_exponential(draws, 1.0);
  // critical value at the 1e-3 level: sqrt(ln(2/a)/2) / sqrt(n)
  double crit = std::sqrt(std::log(2.0 / 1e-3) / 2.0) / std::sqrt(double(n));
  CHECK(ks.statistic < crit);

  double mean = 0.0;
  for (double d : draws) mean += d;
  mean /= n;
  CHECK(std::fabs(mean - 1.0) < 5.0 / std::sqrt(double(n)));
}

TEST_CASE("exponential respects the rate") {
  rng::CounterRng gen(9);
  double sum = 0.0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) sum += gen.exponential(4.0);
  CHECK(std::fabs(sum / n - 0.25) < 0.01);
}
