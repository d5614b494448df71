#include "seba/quasimode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "seba/errors.hpp"
#include "seba/tolerances.hpp"

namespace seba {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inv4pi = 1.0 / (4.0 * std::numbers::pi);

double guard_scale(double x) { return std::max(1.0, std::fabs(x)); }

double quasi_rhs(const Spectrum& spec, const Interval& I, double sigma,
                 const ScattererConfig& cfg) {
  double s = 0.0;
  for (std::size_t i = I.first; i < I.first + I.count; ++i) {
    const auto& ln = spec.lines[i];
    s += (ln.energy - cfg.kappa) * ln.weight / (1.0 + ln.energy * ln.energy);
  }
  return sigma * s;
}

}  // namespace

Interval Interval::over(const Spectrum& spec, double lo, double hi) {
  if (!(lo < hi)) throw parameter_error("interval must satisfy lo < hi");
  Interval I;
  I.lo = lo;
  I.hi = hi;
  std::size_t i = 0;
  while (i < spec.lines.size() && spec.lines[i].energy < lo) ++i;
  I.first = i;
  while (i < spec.lines.size() && spec.lines[i].energy <= hi) ++i;
  I.count = i - I.first;
  if (I.count == 0)
    throw parameter_error("interval contains no spectrum line");
  return I;
}

double zeta(const Spectrum& spec, const Interval& I, double s, double lambda) {
  const bool integer_s = (s == std::floor(s)) && std::fabs(s) < 64.0;
  const double guard = tol::pole_rel * guard_scale(lambda);
  double acc = 0.0;
  for (std::size_t i = I.first; i < I.first + I.count; ++i) {
    const auto& ln = spec.lines[i];
    double base = ln.energy - lambda;
    if (s > 0.0 && std::fabs(base) < guard)
      throw numerical_error("zeta evaluated at a member energy",
                            static_cast<long>(ln.index));
    if (integer_s) {
      double p = 1.0;
      int k = static_cast<int>(std::fabs(s));
      for (int j = 0; j < k; ++j) p *= base;
      acc += (s >= 0.0) ? ln.weight / p : ln.weight * p;
    } else {
      if (!(base > 0.0))
        throw parameter_error(
            "non-integer zeta exponent needs E_j - lambda > 0 on the interval");
      acc += ln.weight * std::pow(base, -s);
    }
  }
  return acc;
}

TailSums tail_sums(const Spectrum& spec, const Interval& I,
                   const ScattererConfig& cfg) {
  if (!(cfg.e_cutoff > 0.0)) throw parameter_error("e_cutoff must be positive");
  if (cfg.e_cutoff > spec.e_max * (1.0 + 1e-12))
    throw parameter_error("e_cutoff exceeds the spectrum ceiling e_max");
  if (cfg.e_cutoff < 2.0 * I.hi)
    throw parameter_error("e_cutoff must be at least twice the interval top");

  TailSums t;
  const double k = cfg.kappa;
  for (std::size_t i = 0; i < spec.lines.size(); ++i) {
    const auto& ln = spec.lines[i];
    if (ln.energy > cfg.e_cutoff) break;
    if (i >= I.first && i < I.first + I.count) continue;
    double e = ln.energy;
    double den = (1.0 + e * e) * (1.0 + e * e);
    t.s_disc += (e - k) * (e - k) * ln.weight / den;
    t.a_const += (1.0 + k * e) * (1.0 + k * e) * ln.weight / den;
    t.b_lin += (1.0 + k * e) * (e - k) * ln.weight / den;
  }

  // mean-density integrals over (e_cutoff, infinity): with
  // J0 = int 1/(1+t^2)^2, J1 = int t/(1+t^2)^2, J2 = int t^2/(1+t^2)^2,
  // the S integrand is (t-k)^2/(1+t^2)^2 and the R integrand expands to a
  // quadratic in mu whose mu^2 coefficient has leading term 1/e_cutoff.
  const double c = cfg.e_cutoff;
  const double arc = pi / 2.0 - std::atan(c);
  const double frac = c / (1.0 + c * c);
  const double j0 = 0.5 * (arc - frac);
  const double j1 = 0.5 / (1.0 + c * c);
  const double j2 = 0.5 * (arc + frac);
  t.s_tail = t.s_disc + inv4pi * (j2 - 2.0 * k * j1 + k * k * j0);
  t.a_const += inv4pi * (j0 + 2.0 * k * j1 + k * k * j2);
  t.b_lin += inv4pi * (-k * j0 + (1.0 - k * k) * j1 + k * j2);
  t.mu2_corr = inv4pi * (k * k * j0 - 2.0 * k * j1 + j2);
  return t;
}

namespace {

// increasing-function bisection with Newton polish; g(mu) = zeta_1 - rhs
double quasi_root(const Spectrum& spec, const Interval& I, double rhs,
                  double lo, double hi, long tag) {
  auto g = [&](double mu) { return zeta(spec, I, 1.0, mu) - rhs; };
  auto gp = [&](double mu) { return zeta(spec, I, 2.0, mu); };

  double a = lo, b = hi;
  double ga = g(a), gb = g(b);
  if (!(ga < 0.0) || !(gb > 0.0))
    throw numerical_error("quasi-eigenvalue bracket failure", tag);

  double mid = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (a + b);
    if (b - a <= tol::bracket_stop_rel * guard_scale(mid)) break;
    double gm = g(mid);
    if (std::fabs(gm) <= tol::residual) break;
    (gm < 0.0 ? a : b) = mid;
  }

  double x = mid, gx = g(x);
  for (int it = 0; it < 4 && std::fabs(gx) > 0.0; ++it) {
    double d = gp(x);
    if (!(d > 0.0)) break;
    double next = std::clamp(x - gx / d, a, b);
    if (next == x) break;
    double gn = g(next);
    if (std::fabs(gn) >= std::fabs(gx)) break;
    x = next;
    gx = gn;
  }
  return x;
}

}  // namespace

std::vector<double> solve_quasi_eigenvalues(const Spectrum& spec,
                                            const Interval& I, double sigma,
                                            const ScattererConfig& cfg) {
  if (!(sigma >= 0.0) || !(sigma <= 1.0))
    throw parameter_error("sigma must lie in [0, 1]");
  const double rhs = quasi_rhs(spec, I, sigma, cfg);

  std::vector<double> roots;
  const double e_first = spec.lines[I.first].energy;
  const double e_last = spec.lines[I.first + I.count - 1].energy;
  const double span = std::max(1.0, e_last - e_first);

  auto margin_at = [&](double gap, double at) {
    return std::max(tol::bracket_rel * gap,
                    2.0 * tol::pole_rel * guard_scale(at));
  };

  for (std::size_t i = I.first; i + 1 < I.first + I.count; ++i) {
    double ea = spec.lines[i].energy, eb = spec.lines[i + 1].energy;
    double m = margin_at(eb - ea, eb);
    if (!(ea + m < eb - m)) continue;
    roots.push_back(quasi_root(spec, I, rhs, ea + m, eb - m,
                               static_cast<long>(i) + 1));
  }

  if (rhs > 0.0) {
    double b = e_first - margin_at(span, e_first);
    double a = e_first - span;
    int tries = 0;
    while (zeta(spec, I, 1.0, a) - rhs >= 0.0) {
      a = e_first - 2.0 * (e_first - a);
      if (++tries > 300)
        throw numerical_error("no bracket below the interval hull");
    }
    roots.push_back(quasi_root(spec, I, rhs, a, b, 0));
  } else if (rhs < 0.0) {
    double a = e_last + margin_at(span, e_last);
    double b = e_last + span;
    int tries = 0;
    while (zeta(spec, I, 1.0, b) - rhs <= 0.0) {
      b = e_last + 2.0 * (b - e_last);
      if (++tries > 300)
        throw numerical_error("no bracket above the interval hull");
    }
    roots.push_back(quasi_root(spec, I, rhs, a, b,
                               static_cast<long>(I.first + I.count)));
  }

  std::sort(roots.begin(), roots.end());
  if (roots.empty())
    throw numerical_error("interval admits no quasi-eigenvalue");
  return roots;
}

Quasimode build_quasimode(const Spectrum& spec, const Interval& I,
                          double sigma, double mu, const ScattererConfig& cfg) {
  if (!(sigma >= 0.0) || !(sigma <= 1.0))
    throw parameter_error("sigma must lie in [0, 1]");

  Quasimode qm;
  qm.interval = I;
  qm.sigma = sigma;
  qm.mu = mu;
  qm.cfg = cfg;
  qm.spectrum = &spec;
  qm.rhs = quasi_rhs(spec, I, sigma, cfg);
  if (sigma > 0.0) qm.tails = tail_sums(spec, I, cfg);

  // mu must solve the quasi-eigenvalue equation; allow the residual a root
  // solver at bracket-stop width would leave behind
  double zeta2 = zeta(spec, I, 2.0, mu);
  double g = zeta(spec, I, 1.0, mu) - qm.rhs;
  double allowed = std::max(tol::residual,
                            8.0 * zeta2 * tol::bracket_stop_rel *
                                guard_scale(mu));
  if (std::fabs(g) > allowed)
    throw parameter_error("mu does not solve the quasi-eigenvalue equation");

  const double guard = tol::pole_rel * guard_scale(mu);
  qm.in_coeffs.reserve(I.count);
  for (std::size_t i = I.first; i < I.first + I.count; ++i) {
    const auto& ln = spec.lines[i];
    double d = ln.energy - mu;
    if (std::fabs(d) < guard)
      throw numerical_error("mu too close to a member energy",
                            static_cast<long>(ln.index));
    qm.in_coeffs.push_back(std::conj(ln.amplitude) / d);
  }

  qm.norm_sq = zeta2 + sigma * sigma * qm.tails.s_tail;
  double num = (1.0 - sigma) * (1.0 - sigma) * zeta(spec, I, 0.0, mu) +
               sigma * sigma * qm.tails.r_tail(mu);
  qm.discrepancy = std::sqrt(num / qm.norm_sq);
  return qm;
}

double residual_oracle(const Spectrum& spec, const Quasimode& qm) {
  const double k = qm.cfg.kappa;
  const double s = qm.sigma;
  double num = 0.0;
  for (std::size_t i = qm.interval.first;
       i < qm.interval.first + qm.interval.count; ++i)
    num += (1.0 - s) * (1.0 - s) * spec.lines[i].weight;
  if (s > 0.0) {
    for (std::size_t i = 0; i < spec.lines.size(); ++i) {
      const auto& ln = spec.lines[i];
      if (ln.energy > qm.cfg.e_cutoff) break;
      if (i >= qm.interval.first && i < qm.interval.first + qm.interval.count)
        continue;
      double e = ln.energy;
      double t = (1.0 + e * qm.mu + k * (e - qm.mu)) / (1.0 + e * e);
      num += s * s * t * t * ln.weight;
    }
    // mean-density integral of the unexpanded R integrand
    const double c = qm.cfg.e_cutoff;
    const double arc = pi / 2.0 - std::atan(c);
    const double frac = c / (1.0 + c * c);
    const double j0 = 0.5 * (arc - frac);
    const double j1 = 0.5 / (1.0 + c * c);
    const double j2 = 0.5 * (arc + frac);
    double u = 1.0 - k * qm.mu, v = qm.mu + k;
    num += s * s * inv4pi * (u * u * j0 + 2.0 * u * v * j1 + v * v * j2);
  }
  return std::sqrt(num / qm.norm_sq);
}

std::complex<double> quasimode_inner_product(const Quasimode& q1,
                                             const Quasimode& q2) {
  if (q1.spectrum != q2.spectrum)
    throw parameter_error("quasimodes live on different spectra");
  if (q1.sigma != q2.sigma)
    throw parameter_error("quasimodes have different sigma");
  if (q1.interval.first != q2.interval.first ||
      q1.interval.count != q2.interval.count)
    throw parameter_error("quasimodes live on different intervals");

  const Spectrum& spec = *q1.spectrum;
  std::complex<double> acc = 0.0;
  for (std::size_t i = q1.interval.first;
       i < q1.interval.first + q1.interval.count; ++i) {
    double e = spec.lines[i].energy;
    acc += spec.lines[i].weight / ((e - q1.mu) * (e - q2.mu));
  }
  acc += q1.sigma * q1.sigma * q1.tails.s_tail;
  return acc;
}

double overlap(const Quasimode& qm, const PerturbedEigenpair& pair) {
  if (qm.spectrum != pair.spectrum)
    throw parameter_error("quasimode and eigenpair live on different spectra");
  const Spectrum& spec = *qm.spectrum;
  const std::size_t lo = qm.interval.first;
  const std::size_t hi = qm.interval.first + qm.interval.count;
  std::complex<double> acc = 0.0;
  if (qm.sigma == 0.0) {
    for (std::size_t i = lo; i < hi && i < pair.coefficients.size(); ++i)
      acc += std::conj(pair.coefficients[i]) * qm.in_coeffs[i - lo];
    return std::abs(acc);
  }
  const double k = qm.cfg.kappa;
  for (std::size_t i = 0; i < pair.coefficients.size(); ++i) {
    const auto& ln = spec.lines[i];
    std::complex<double> psi;
    if (i >= lo && i < hi) {
      psi = qm.in_coeffs[i - lo];
    } else {
      double e = ln.energy;
      psi = qm.sigma * (e - k) * std::conj(ln.amplitude) / (1.0 + e * e);
    }
    acc += std::conj(pair.coefficients[i]) * psi;
  }
  return std::abs(acc);
}

ProjectionCheck projection_bound_check(
    const Quasimode& qm, const std::vector<PerturbedEigenpair>& pairs,
    double M) {
  if (!(M > 0.0)) throw parameter_error("window half-width must be positive");
  if (pairs.empty()) throw parameter_error("no eigenpairs supplied");

  ProjectionCheck chk;
  const double d = qm.discrepancy;
  for (const auto& pair : pairs) {
    double dist = std::fabs(pair.lambda - qm.mu);
    chk.coverage = std::max(chk.coverage, dist);
    if (dist <= M) {
      ++chk.in_window;
      continue;
    }
    double ov = overlap(qm, pair);
    chk.lhs += (ov * ov) / pair.norm_sq;
  }
  if (!(chk.coverage > M))
    throw parameter_error(
        "supplied eigenvalues do not extend beyond the window");

  // mass past the last computed eigenvalue, charged at the projection rate
  chk.lhs += (d * d / (chk.coverage * chk.coverage)) * qm.norm_sq;
  chk.rhs = (d * d / (M * M)) * qm.norm_sq;

  if (chk.in_window == 1) {
    for (const auto& pair : pairs) {
      if (std::fabs(pair.lambda - qm.mu) > M) continue;
      double ov = overlap(qm, pair) /
                  std::sqrt(pair.norm_sq * qm.norm_sq);
      ov = std::min(ov, 1.0);
      chk.approx_lhs = std::sqrt(std::max(0.0, 2.0 * (1.0 - ov)));
      chk.approx_rhs = 2.0 * d / M;
    }
  }
  return chk;
}

std::vector<std::complex<double>> full_coefficients(const Quasimode& qm) {
  const Spectrum& spec = *qm.spectrum;
  std::vector<std::complex<double>> out;
  const std::size_t lo = qm.interval.first;
  const std::size_t hi = qm.interval.first + qm.interval.count;
  for (std::size_t i = 0; i < spec.lines.size(); ++i) {
    const auto& ln = spec.lines[i];
    if (ln.energy > qm.cfg.e_cutoff) break;
    if (i >= lo && i < hi) {
      out.push_back(qm.in_coeffs[i - lo]);
    } else {
      double e = ln.energy;
      out.push_back(qm.sigma * (e - qm.cfg.kappa) * std::conj(ln.amplitude) /
                    (1.0 + e * e));
    }
  }
  return out;
}

}  // namespace seba
