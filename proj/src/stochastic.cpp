#include "seba/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "seba/errors.hpp"
#include "seba/rng.hpp"

namespace seba {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

double block_event_probability(double eps, double q) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw parameter_error("eps must lie in (0, 1)");
  if (!(q > 0.0) || !(q < 0.5))
    throw parameter_error("q must lie in (0, 1/2)");
  return -std::expm1(-eps) * std::exp(-2.0 * std::pow(eps, q));
}

double regularized_gamma_q(long n, double x) {
  if (n < 1) throw parameter_error("n must be at least 1");
  if (!(x >= 0.0)) throw parameter_error("x must be nonnegative");
  if (x == 0.0) return 1.0;

  const double lx = std::log(x);
  double lmax = -std::numeric_limits<double>::infinity();
  for (long k = 0; k < n; ++k)
    lmax = std::max(lmax, -x + k * lx - std::lgamma(k + 1.0));
  double s = 0.0;
  for (long k = 0; k < n; ++k)
    s += std::exp(-x + k * lx - std::lgamma(k + 1.0) - lmax);
  double v = std::exp(lmax) * s;
  return std::min(1.0, v);
}

BlockEventResult mc_proposition_b2(const BlockEventParams& par) {
  if (!(par.eps > 0.0) || !(par.eps < 1.0))
    throw parameter_error("eps must lie in (0, 1)");
  if (!(par.q > 0.0) || !(par.q < 0.5))
    throw parameter_error("q must lie in (0, 1/2)");
  if (!(par.rho > 1.0) || !(par.rho < 2.0 * (1.0 - par.q)))
    throw parameter_error("rho must lie in (1, 2(1-q))");
  double rho_prime = par.rho_prime == 0.0 ? 0.5 * (1.0 + par.rho)
                                          : par.rho_prime;
  if (!(rho_prime > 1.0) || !(rho_prime < par.rho))
    throw parameter_error("rho_prime must lie in (1, rho)");
  if (par.trials < 1000)
    throw parameter_error("at least 1000 trials are required");

  const long m_blocks =
      static_cast<long>(std::ceil(std::pow(par.eps, -rho_prime) / 3.0));
  const long n_gaps = 3 * m_blocks;
  if (static_cast<double>(n_gaps) * par.trials > 2e9)
    throw parameter_error("trial budget exceeded: N * trials > 2e9");

  const double ceiling = std::pow(par.eps, -par.rho);
  const double gap_q = std::pow(par.eps, par.q);

  long full_hits = 0, block_hits = 0;
  std::vector<double> gaps(static_cast<std::size_t>(n_gaps));
  std::vector<double> events(static_cast<std::size_t>(n_gaps));
  for (long t = 0; t < par.trials; ++t) {
    rng::CounterRng gen(par.seed, static_cast<std::uint64_t>(t));
    double e = 0.0;
    for (long k = 0; k < n_gaps; ++k) {
      gaps[k] = gen.exponential(1.0);
      e += gaps[k];
      events[k] = e;
    }

    bool full = false;
    for (long j = 0; j + 3 < n_gaps && !full; ++j) {
      // quadruple on events j, j+1, j+2, j+3 (0-based)
      full = gaps[j + 1] > gap_q && gaps[j + 2] < par.eps &&
             gaps[j + 3] > gap_q && events[j + 3] < ceiling;
    }
    if (full) ++full_hits;

    bool block = false;
    for (long j = 1; j < m_blocks && !block; ++j) {
      long base = 3 * j;  // gaps 3j+1, 3j+2, 3j+3 in 1-based labels
      block = gaps[base] > gap_q && gaps[base + 1] < par.eps &&
              gaps[base + 2] > gap_q && events[base + 2] < ceiling;
    }
    if (block) ++block_hits;
  }

  BlockEventResult res;
  res.trials = par.trials;
  res.n_gaps = n_gaps;
  res.m_blocks = m_blocks;
  res.empirical_p = static_cast<double>(full_hits) / par.trials;
  res.block_p = static_cast<double>(block_hits) / par.trials;
  res.p1 = 1.0 - std::pow(1.0 - block_event_probability(par.eps, par.q),
                          static_cast<double>(m_blocks));
  res.p2 = 1.0 - regularized_gamma_q(n_gaps, ceiling);
  res.analytic_lower = res.p1 + res.p2 - 1.0;
  res.std_error = std::sqrt(std::max(res.empirical_p * (1.0 - res.empirical_p),
                                     1e-12) /
                            par.trials);
  return res;
}

GammaTailResult gamma_tail_check(long n, double alpha, long trials,
                                 std::uint64_t seed) {
  if (n < 10) throw parameter_error("n must be at least 10");
  if (!(alpha > 0.0) || !(alpha <= 1.0))
    throw parameter_error("alpha must lie in (0, 1]");
  if (trials < 1000) throw parameter_error("at least 1000 trials are required");
  if (static_cast<double>(n) * trials > 2e9)
    throw parameter_error("trial budget exceeded: n * trials > 2e9");

  const double x = std::pow(static_cast<double>(n), 1.0 + alpha);
  long hits = 0;
  for (long t = 0; t < trials; ++t) {
    rng::CounterRng gen(seed, static_cast<std::uint64_t>(t));
    double e = 0.0;
    for (long k = 0; k < n; ++k) e += gen.exponential(1.0);
    if (e >= x) ++hits;
  }

  GammaTailResult res;
  res.empirical_p = static_cast<double>(hits) / trials;
  res.exact_tail = regularized_gamma_q(n, x);
  res.bound_scale = std::exp(-x + n + alpha * (n - 1) * std::log(n) -
                             0.5 * std::log(two_pi * (n - 1)));
  res.std_error = std::sqrt(std::max(res.empirical_p * (1.0 - res.empirical_p),
                                     1e-12) /
                            trials);
  if (res.empirical_p > 0.0 && res.empirical_p > 10.0 * res.bound_scale)
    throw numerical_error("gamma tail exceeds ten times the Stirling bound");
  return res;
}

std::vector<std::pair<long, bool>> borel_cantelli_sequence(double q,
                                                           double rho,
                                                           long n_max,
                                                           std::uint64_t seed) {
  if (!(q > 0.0) || !(q < 0.5))
    throw parameter_error("q must lie in (0, 1/2)");
  if (!(rho > 1.0) || !(rho < 2.0 * (1.0 - q)))
    throw parameter_error("rho must lie in (1, 2(1-q))");
  if (n_max < 2) throw parameter_error("n_max must be at least 2");
  const double top = std::pow(static_cast<double>(n_max), rho);
  if (top > 2e7) throw parameter_error("path budget exceeded: n_max^rho > 2e7");

  rng::CounterRng gen(seed);
  std::vector<double> events;
  double e = 0.0;
  while (e <= top) {
    e += gen.exponential(1.0);
    events.push_back(e);
  }
  events.pop_back();  // last point overshoots the ceiling

  std::vector<std::pair<long, bool>> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (long n = 1; n <= n_max; ++n) {
    const double eps_n = 1.0 / static_cast<double>(n);
    const double gap_q = std::pow(static_cast<double>(n), -q);
    const double ceil_n = std::pow(static_cast<double>(n), rho);
    bool found = false;
    for (std::size_t j = 0; j + 3 < events.size() && !found; ++j) {
      if (events[j + 3] >= ceil_n) break;
      found = events[j + 1] - events[j] > gap_q &&
              events[j + 2] - events[j + 1] < eps_n &&
              events[j + 3] - events[j + 2] > gap_q;
    }
    out.emplace_back(n, found);
  }
  return out;
}

KsResult ks_exponential(const std::vector<double>& gaps, double rate) {
  if (gaps.empty()) throw parameter_error("no gaps supplied");
  if (!(rate > 0.0)) throw parameter_error("rate must be positive");
  std::vector<double> sorted = gaps;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    double f = -std::expm1(-rate * sorted[i]);
    d = std::max(d, std::max(f - i / n, (i + 1) / n - f));
  }
  return {d, static_cast<long>(sorted.size())};
}

}  // namespace seba
