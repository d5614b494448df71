#include "seba/localisation.hpp"

#include <algorithm>
#include <cmath>

#include "seba/errors.hpp"
#include "seba/tolerances.hpp"

namespace seba {

void check_gap_exponents(double eps, double q, double rho) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw parameter_error("eps must lie in (0, 1)");
  if (!(q > 0.0) || !(q < 0.5))
    throw parameter_error("q must lie in (0, 1/2)");
  if (!(rho > 1.0) || !(rho < 2.0 * (1.0 - q)))
    throw parameter_error("rho must lie in (1, 2(1-q))");
}

std::vector<GapQuadruple> scan_quadruples(const Spectrum& spec, double eps,
                                          double q, double rho,
                                          double unfold_scale) {
  check_gap_exponents(eps, q, rho);
  if (!(unfold_scale > 0.0))
    throw parameter_error("unfold scale must be positive");

  const double gap_q = std::pow(eps, q);
  const double ceiling = std::pow(eps, -rho);
  std::vector<GapQuadruple> out;
  for (std::size_t i = 0; i + 3 < spec.lines.size(); ++i) {
    GapQuadruple quad;
    quad.a = i;
    quad.e_a = spec.lines[i].energy;
    quad.e_b = spec.lines[i + 1].energy;
    quad.e_c = spec.lines[i + 2].energy;
    quad.e_d = spec.lines[i + 3].energy;
    const double u = unfold_scale;
    quad.small_middle = u * (quad.e_c - quad.e_b) < eps;
    quad.left_gap = u * (quad.e_b - quad.e_a) > gap_q;
    quad.right_gap = u * (quad.e_d - quad.e_c) > gap_q;
    quad.below_ceiling = u * quad.e_d < ceiling;
    if (quad.satisfied()) out.push_back(quad);
  }
  return out;
}

namespace {

// sigma = 0 quasimode on the middle doublet [E_b, E_c]
Quasimode middle_doublet(const Spectrum& spec, const ScattererConfig& cfg,
                         const GapQuadruple& quad, Interval& I_out) {
  Interval I = Interval::over(spec, quad.e_b, quad.e_c);
  auto roots = solve_quasi_eigenvalues(spec, I, 0.0, cfg);
  I_out = I;
  return build_quasimode(spec, I, 0.0, roots.front(), cfg);
}

}  // namespace

Proposition3Check proposition3_check(const Spectrum& spec,
                                     const ScattererConfig& cfg,
                                     const GapQuadruple& quad) {
  Interval I;
  Quasimode qm = middle_doublet(spec, cfg, quad, I);

  Proposition3Check chk;
  chk.quad = quad;
  chk.mu = qm.mu;
  for (std::size_t k = 0; k < 3; ++k) {
    PerturbedEigenpair pair = solve_in_gap(spec, cfg, quad.a + k);
    chk.lambdas[k] = pair.lambda;
    double ov = overlap(qm, pair) / std::sqrt(pair.norm_sq);
    chk.best_overlap = std::max(chk.best_overlap, ov);
  }

  const double len = quad.e_c - quad.e_b;
  const double flank = std::min(quad.e_b - quad.e_a, quad.e_d - quad.e_c);
  double inside = 1.0 - len * len / (4.0 * flank * flank);
  chk.bound = std::sqrt(qm.norm_sq) / std::sqrt(3.0) *
              std::sqrt(std::max(0.0, inside));
  return chk;
}

Top2 top2_mass(const PerturbedEigenpair& pair) {
  if (pair.coefficients.size() < 2)
    throw parameter_error("eigenpair has fewer than two coefficients");
  const Spectrum& spec = *pair.spectrum;

  Top2 top;
  double best = -1.0;
  for (std::size_t i = 0; i + 1 < pair.coefficients.size(); ++i) {
    double mass = std::norm(pair.coefficients[i]) +
                  std::norm(pair.coefficients[i + 1]);
    if (mass > best) {
      best = mass;
      top.left = i;
    }
  }
  top.mass_fraction = best / pair.norm_sq;

  // relative sign of the doublet in the original signed mode basis; merged
  // lines already carry the canonical positive amplitude
  auto sign_of = [&](std::size_t i) {
    const auto& modes = spec.lines[i].modes;
    return (modes.size() == 1 && modes[0].amp < 0.0) ? -1.0 : 1.0;
  };
  double rel = std::real(pair.coefficients[top.left] *
                         std::conj(pair.coefficients[top.left + 1])) *
               sign_of(top.left) * sign_of(top.left + 1);
  top.beta = rel < 0.0 ? 1 : 0;
  return top;
}

Theorem7Point theorem7_point(const Spectrum& spec, const ScattererConfig& cfg,
                             double eps, double q, double rho,
                             double unfold_scale) {
  auto quads = scan_quadruples(spec, eps, q, rho, unfold_scale);
  const GapQuadruple* chosen = nullptr;
  for (const auto& quad : quads) {
    if (cfg.tail_correction && quad.e_d > cfg.e_cutoff - 2.0) continue;
    chosen = &quad;
    break;
  }
  if (!chosen)
    throw numerical_error("no usable quadruple satisfies the gap assumptions");
  const GapQuadruple& quad = *chosen;

  Interval I;
  Quasimode qm = middle_doublet(spec, cfg, quad, I);

  PerturbedEigenpair inside = solve_in_gap(spec, cfg, quad.a + 1);
  PerturbedEigenpair above = solve_in_gap(spec, cfg, quad.a + 2);
  PerturbedEigenpair below = solve_in_gap(spec, cfg, quad.a);

  Theorem7Point pt;
  pt.eps = eps;
  pt.quad = quad;
  pt.mu = qm.mu;
  pt.lambda = inside.lambda;
  double ov = overlap(qm, inside);
  pt.defect = 1.0 - (ov * ov) / (inside.norm_sq * qm.norm_sq);

  double margin = std::min(above.lambda - quad.e_c, quad.e_b - below.lambda);
  pt.gap_margin =
      margin * unfold_scale / std::pow(eps, rho / 2.0 + q);

  Top2 top = top2_mass(inside);
  pt.top2_fraction = top.mass_fraction;
  pt.beta = top.beta;
  return pt;
}

std::vector<Theorem7Point> theorem7_experiment(
    const Spectrum& spec, const ScattererConfig& cfg,
    const std::vector<double>& eps_seq, double q, double rho, double c0,
    double unfold_scale) {
  if (eps_seq.empty()) throw parameter_error("eps sequence is empty");
  for (std::size_t i = 0; i + 1 < eps_seq.size(); ++i)
    if (!(eps_seq[i + 1] < eps_seq[i]))
      throw parameter_error("eps sequence must be strictly decreasing");
  if (cfg.kappa != 0.0)
    throw parameter_error("the convergence experiment requires theta = pi");
  if (c0 > 0.0) {
    for (const auto& ln : spec.lines) {
      if (ln.energy > cfg.e_cutoff) break;
      if (ln.weight < c0)
        throw parameter_error(
            "weight audit failed: a truncated line falls below c0");
    }
  }

  std::vector<Theorem7Point> points;
  points.reserve(eps_seq.size());
  for (double eps : eps_seq)
    points.push_back(theorem7_point(spec, cfg, eps, q, rho, unfold_scale));
  return points;
}

}  // namespace seba
