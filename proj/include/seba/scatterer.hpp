#pragma once

#include <complex>
#include <vector>

#include "seba/spectrum.hpp"

namespace seba {

// Self-adjoint extension parameter theta in (0, 2pi), entering only through
// kappa = sin(theta)/(1 - cos(theta)); theta = pi is the symmetric point
// kappa = 0. e_cutoff truncates every spectral sum; tail_correction adds the
// mean-density (1/4pi) integral over the omitted levels.
struct ScattererConfig {
  double theta = 0.0;
  double kappa = 0.0;
  double e_cutoff = 0.0;
  bool tail_correction = true;
};

double kappa_of_theta(double theta);
ScattererConfig make_scatterer_config(double theta, double e_cutoff,
                                      bool tail_correction = true);

// F(lambda): strictly increasing between consecutive truncated levels, one
// simple zero per gap. Poles of the discrete sum are guarded at relative
// distance tol::pole_rel.
double secular_value(const Spectrum& spec, const ScattererConfig& cfg,
                     double lambda);
double secular_derivative(const Spectrum& spec, const ScattererConfig& cfg,
                          double lambda);

struct PerturbedEigenpair {
  double lambda = 0.0;
  long gap_index = 0;  // 1-based index of the level below lambda, 0 below E_1
  std::vector<std::complex<double>> coefficients;  // over lines E_j <= e_cutoff
  double norm_sq = 0.0;
  double residual = 0.0;
  double bracket_width = 0.0;
  const Spectrum* spectrum = nullptr;
};

// Unnormalized coefficients conj(a_j)/(E_j - lambda) plus the mean-density
// estimate of the truncated tail mass in norm_sq.
PerturbedEigenpair eigenpair_coefficients(const Spectrum& spec,
                                          const ScattererConfig& cfg,
                                          double lambda);

struct SolveResult {
  std::vector<PerturbedEigenpair> pairs;
  std::vector<long> skipped_gaps;  // gaps narrower than tol::min_gap
};

// Bisection with Newton polish in every level gap inside [lo, hi]; when
// lo < E_1 the segment below the first level is searched as well and a root is
// kept only if the secular function changes sign there. threads > 1 solves
// gaps concurrently; results are deterministic and ordered by energy.
SolveResult solve_all_eigenvalues(const Spectrum& spec,
                                  const ScattererConfig& cfg, double lo,
                                  double hi, int threads = 1);

// Single gap to the right of 0-based line index `left` (both neighbours must
// exist below e_cutoff).
PerturbedEigenpair solve_in_gap(const Spectrum& spec,
                                const ScattererConfig& cfg, std::size_t left);

}  // namespace seba
