#include "seba/scatterer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <thread>

#include "seba/errors.hpp"
#include "seba/tolerances.hpp"

namespace seba {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inv4pi = 1.0 / (4.0 * std::numbers::pi);

// number of leading lines with E_j <= e_cutoff
std::size_t truncated_size(const Spectrum& spec, const ScattererConfig& cfg) {
  std::size_t n = spec.lines.size();
  while (n > 0 && spec.lines[n - 1].energy > cfg.e_cutoff) --n;
  return n;
}

void check_cutoff(const Spectrum& spec, const ScattererConfig& cfg) {
  if (!(cfg.e_cutoff > 0.0))
    throw parameter_error("e_cutoff must be positive");
  if (cfg.e_cutoff > spec.e_max * (1.0 + 1e-12))
    throw parameter_error("e_cutoff exceeds the spectrum ceiling e_max");
}

void check_lambda_domain(const ScattererConfig& cfg, double lambda) {
  if (cfg.tail_correction && !(lambda < cfg.e_cutoff - 1.0))
    throw parameter_error(
        "lambda must stay below e_cutoff - 1 while the tail correction is on");
}

double guard_scale(double lambda) { return std::max(1.0, std::fabs(lambda)); }

}  // namespace

double kappa_of_theta(double theta) {
  if (!(theta > 0.0) || !(theta < 2.0 * pi))
    throw parameter_error("theta must lie in (0, 2*pi)");
  if (theta == pi) return 0.0;
  double denom = 1.0 - std::cos(theta);
  if (std::fabs(denom) < tol::singular_theta)
    throw parameter_error("theta is too close to the singular coupling");
  return std::sin(theta) / denom;
}

ScattererConfig make_scatterer_config(double theta, double e_cutoff,
                                      bool tail_correction) {
  ScattererConfig cfg;
  cfg.theta = theta;
  cfg.kappa = kappa_of_theta(theta);
  cfg.e_cutoff = e_cutoff;
  cfg.tail_correction = tail_correction;
  if (!(e_cutoff > 0.0)) throw parameter_error("e_cutoff must be positive");
  return cfg;
}

double secular_value(const Spectrum& spec, const ScattererConfig& cfg,
                     double lambda) {
  check_cutoff(spec, cfg);
  check_lambda_domain(cfg, lambda);
  const double guard = tol::pole_rel * guard_scale(lambda);
  double s1 = 0.0, s2 = 0.0;
  for (const auto& ln : spec.lines) {
    if (ln.energy > cfg.e_cutoff) break;
    double d = ln.energy - lambda;
    if (std::fabs(d) < guard)
      throw numerical_error("secular evaluation too close to a pole",
                            static_cast<long>(ln.index));
    double e2 = 1.0 + ln.energy * ln.energy;
    s1 += ln.weight * (1.0 / d - ln.energy / e2);
    s2 += ln.weight / e2;
  }
  double f = s1 - cfg.kappa * s2;
  if (cfg.tail_correction) {
    const double c = cfg.e_cutoff;
    f += inv4pi * (-std::log((c - lambda) / std::sqrt(1.0 + c * c)) -
                   cfg.kappa * (pi / 2.0 - std::atan(c)));
  }
  return f;
}

double secular_derivative(const Spectrum& spec, const ScattererConfig& cfg,
                          double lambda) {
  check_cutoff(spec, cfg);
  check_lambda_domain(cfg, lambda);
  const double guard = tol::pole_rel * guard_scale(lambda);
  double s = 0.0;
  for (const auto& ln : spec.lines) {
    if (ln.energy > cfg.e_cutoff) break;
    double d = ln.energy - lambda;
    if (std::fabs(d) < guard)
      throw numerical_error("secular evaluation too close to a pole",
                            static_cast<long>(ln.index));
    s += ln.weight / (d * d);
  }
  if (cfg.tail_correction) s += inv4pi / (cfg.e_cutoff - lambda);
  return s;
}

PerturbedEigenpair eigenpair_coefficients(const Spectrum& spec,
                                          const ScattererConfig& cfg,
                                          double lambda) {
  check_cutoff(spec, cfg);
  check_lambda_domain(cfg, lambda);
  const double guard = tol::pole_rel * guard_scale(lambda);
  PerturbedEigenpair pair;
  pair.lambda = lambda;
  pair.spectrum = &spec;
  const std::size_t n = truncated_size(spec, cfg);
  pair.coefficients.reserve(n);
  double norm = 0.0;
  long gap = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ln = spec.lines[i];
    double d = ln.energy - lambda;
    if (std::fabs(d) < guard)
      throw numerical_error("eigenvalue too close to an unperturbed level",
                            static_cast<long>(ln.index));
    if (ln.energy < lambda) gap = static_cast<long>(i) + 1;
    std::complex<double> c = std::conj(ln.amplitude) / d;
    norm += std::norm(c);
    pair.coefficients.push_back(c);
  }
  if (cfg.tail_correction) norm += inv4pi / (cfg.e_cutoff - lambda);
  pair.norm_sq = norm;
  pair.gap_index = gap;
  return pair;
}

namespace {

struct Bracket {
  double lo, hi;
  long gap_index;  // 1-based left level, 0 for the segment below E_1
};

// Bisection on the strictly increasing secular function, then a few Newton
// steps to push the residual to rounding level. Returns nothing when the
// bracket shows no sign change (only legal for the segment below E_1).
std::optional<PerturbedEigenpair> root_in_bracket(const Spectrum& spec,
                                                  const ScattererConfig& cfg,
                                                  const Bracket& br,
                                                  bool demand_sign_change) {
  double width = br.hi - br.lo;
  double margin = std::max(tol::bracket_rel * width,
                           2.0 * tol::pole_rel *
                               std::max(guard_scale(br.lo), guard_scale(br.hi)));
  double a = br.lo + margin, b = br.hi - margin;
  if (!(a < b))
    throw numerical_error("gap too narrow to bracket", br.gap_index);
  double fa = secular_value(spec, cfg, a);
  double fb = secular_value(spec, cfg, b);
  if (!(fa < 0.0) || !(fb > 0.0)) {
    if (demand_sign_change)
      throw numerical_error("secular bracket failure", br.gap_index);
    return std::nullopt;
  }

  double mid = 0.5 * (a + b), fm = 0.0;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (a + b);
    if (b - a <= tol::bracket_stop_rel * guard_scale(mid)) break;
    fm = secular_value(spec, cfg, mid);
    if (std::fabs(fm) <= tol::residual) break;
    (fm < 0.0 ? a : b) = mid;
  }

  // Newton polish, clamped to the surviving bracket
  double x = mid;
  double fx = secular_value(spec, cfg, x);
  for (int it = 0; it < 4 && std::fabs(fx) > 0.0; ++it) {
    double fp = secular_derivative(spec, cfg, x);
    if (!(fp > 0.0)) break;
    double step = fx / fp;
    double next = std::clamp(x - step, a, b);
    if (next == x) break;
    double fn = secular_value(spec, cfg, next);
    if (std::fabs(fn) >= std::fabs(fx)) break;
    x = next;
    fx = fn;
  }

  PerturbedEigenpair pair = eigenpair_coefficients(spec, cfg, x);
  pair.gap_index = br.gap_index;
  pair.residual = std::fabs(fx);
  pair.bracket_width = b - a;
  if (pair.residual > tol::residual &&
      b - a > tol::bracket_stop_rel * guard_scale(x))
    throw numerical_error("secular root did not converge", br.gap_index);
  return pair;
}

}  // namespace

SolveResult solve_all_eigenvalues(const Spectrum& spec,
                                  const ScattererConfig& cfg, double lo,
                                  double hi, int threads) {
  check_cutoff(spec, cfg);
  if (!(lo < hi)) throw parameter_error("window must satisfy lo < hi");
  if (cfg.tail_correction && !(hi <= cfg.e_cutoff - 1.0))
    throw parameter_error(
        "window must stay below e_cutoff - 1 while the tail correction is on");
  if (threads < 1) throw parameter_error("threads must be at least 1");

  const std::size_t n = truncated_size(spec, cfg);
  SolveResult result;
  std::vector<Bracket> brackets;

  if (n > 0 && lo < spec.lines.front().energy) {
    double top = std::min(hi, spec.lines.front().energy);
    if (top > lo) brackets.push_back({lo, top, 0});
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double ea = spec.lines[i].energy, eb = spec.lines[i + 1].energy;
    if (ea < lo || eb > hi) continue;
    if (eb - ea < tol::min_gap) {
      result.skipped_gaps.push_back(static_cast<long>(i) + 1);
      continue;
    }
    brackets.push_back({ea, eb, static_cast<long>(i) + 1});
  }

  std::vector<std::optional<PerturbedEigenpair>> slots(brackets.size());
  std::vector<std::exception_ptr> errors(brackets.size());

  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t k = begin; k < brackets.size(); k += stride) {
      try {
        slots[k] = root_in_bracket(spec, cfg, brackets[k],
                                   brackets[k].gap_index != 0);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };

  if (threads == 1 || brackets.size() < 2) {
    work(0, 1);
  } else {
    std::size_t nt = std::min<std::size_t>(threads, brackets.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(work, t, nt);
    for (auto& th : pool) th.join();
  }

  for (std::size_t k = 0; k < brackets.size(); ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    if (slots[k]) result.pairs.push_back(std::move(*slots[k]));
  }
  return result;
}

PerturbedEigenpair solve_in_gap(const Spectrum& spec,
                                const ScattererConfig& cfg, std::size_t left) {
  check_cutoff(spec, cfg);
  const std::size_t n = truncated_size(spec, cfg);
  if (left + 1 >= n)
    throw parameter_error("gap index out of range below e_cutoff");
  double ea = spec.lines[left].energy, eb = spec.lines[left + 1].energy;
  if (eb - ea < tol::min_gap)
    throw numerical_error("gap narrower than the skip threshold",
                          static_cast<long>(left) + 1);
  if (cfg.tail_correction && !(eb <= cfg.e_cutoff - 1.0))
    throw parameter_error(
        "gap must stay below e_cutoff - 1 while the tail correction is on");
  auto pair = root_in_bracket(spec, cfg, {ea, eb, static_cast<long>(left) + 1},
                              true);
  return *pair;
}

}  // namespace seba
