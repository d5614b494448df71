#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace seba {

// P(S_0) = (1 - e^{-eps}) e^{-2 eps^q}: one block of three unit-rate
// exponential gaps shaped flank / small middle / flank.
double block_event_probability(double eps, double q);

// Q(n, x) = e^{-x} sum_{k<n} x^k / k!, the chance a unit-rate Poisson path
// needs more than x to collect n points. Log-domain, safe for large x.
double regularized_gamma_q(long n, double x);

struct BlockEventParams {
  double eps = 0.05;
  double q = 0.25;
  double rho = 1.4;
  double rho_prime = 0.0;  // 0 selects the default (1 + rho) / 2
  long trials = 10000;
  std::uint64_t seed = 1;
};

struct BlockEventResult {
  double empirical_p = 0.0;     // full scan over all consecutive quadruples
  double block_p = 0.0;         // block-aligned scan only
  double analytic_lower = 0.0;  // p1 + p2 - 1
  double p1 = 0.0;              // 1 - (1 - P(S_0))^M
  double p2 = 0.0;              // P(E_N < eps^{-rho})
  double std_error = 0.0;
  long n_gaps = 0;              // N = 3M
  long m_blocks = 0;
  long trials = 0;
};

// Simulates unit-rate Poisson paths of N = 3M gaps, M = ceil(eps^{-rho'}/3),
// and scans for a quadruple with middle gap < eps, flanks > eps^q and top
// event below eps^{-rho}.
BlockEventResult mc_proposition_b2(const BlockEventParams& par);

struct GammaTailResult {
  double empirical_p = 0.0;  // P(E_n >= n^{1+alpha})
  double exact_tail = 0.0;   // Q(n, n^{1+alpha})
  double bound_scale = 0.0;  // exp(-n^{1+alpha}+n) n^{alpha(n-1)} / sqrt(2 pi (n-1))
  double std_error = 0.0;
};

GammaTailResult gamma_tail_check(long n, double alpha, long trials,
                                 std::uint64_t seed);

// One unit-rate path; for each n <= n_max, whether some quadruple below the
// ceiling n^rho has middle gap < 1/n and flanks > n^{-q}.
std::vector<std::pair<long, bool>> borel_cantelli_sequence(double q,
                                                           double rho,
                                                           long n_max,
                                                           std::uint64_t seed);

struct KsResult {
  double statistic = 0.0;
  long count = 0;
};

// Two-sided KS distance between the empirical law of the gaps and Exp(rate).
KsResult ks_exponential(const std::vector<double>& gaps, double rate);

}  // namespace seba
