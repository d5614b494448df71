#pragma once

#include <array>
#include <vector>

#include "seba/quasimode.hpp"
#include "seba/scatterer.hpp"
#include "seba/spectrum.hpp"

namespace seba {

// Four consecutive lines E_a < E_b < E_c < E_d screened by the gap
// assumptions: middle gap below eps, flanking gaps above eps^q, ceiling
// E_d below eps^{-rho}. Energies are stored in physical units; the tests are
// applied after multiplying by unfold_scale (1 for unit-mean-spacing spectra).
struct GapQuadruple {
  std::size_t a = 0;  // 0-based index of the first line
  double e_a = 0.0, e_b = 0.0, e_c = 0.0, e_d = 0.0;
  bool small_middle = false;
  bool left_gap = false;
  bool right_gap = false;
  bool below_ceiling = false;

  bool satisfied() const {
    return small_middle && left_gap && right_gap && below_ceiling;
  }
};

void check_gap_exponents(double eps, double q, double rho);

std::vector<GapQuadruple> scan_quadruples(const Spectrum& spec, double eps,
                                          double q, double rho,
                                          double unfold_scale = 1.0);

// Pigeonhole bound on the best eigenfunction overlap of the middle-doublet
// quasimode: at least (||psi||/sqrt(3)) (1 - l(I)^2 / (4 min_flank^2))^{1/2}
// is captured by one of the three eigenvalues inside (E_a, E_d).
struct Proposition3Check {
  GapQuadruple quad;
  double mu = 0.0;
  double best_overlap = 0.0;  // max_j |<phi_j, psi>| / ||phi_j||
  double bound = 0.0;
  std::array<double, 3> lambdas{};
};

Proposition3Check proposition3_check(const Spectrum& spec,
                                     const ScattererConfig& cfg,
                                     const GapQuadruple& quad);

// Dominant consecutive coefficient pair of a perturbed eigenfunction, its
// share of the norm, and the relative sign bit of the doublet in the original
// (signed) mode basis.
struct Top2 {
  std::size_t left = 0;  // 0-based index of the pair's lower line
  double mass_fraction = 0.0;
  int beta = 0;
};

Top2 top2_mass(const PerturbedEigenpair& pair);

struct Theorem7Point {
  double eps = 0.0;
  GapQuadruple quad;
  double mu = 0.0;
  double lambda = 0.0;
  double defect = 0.0;      // 1 - |<phi,psi>|^2 / (||phi||^2 ||psi||^2)
  double gap_margin = 0.0;  // min(lambda*-E_c, E_b-lambda**) / eps^{rho/2+q}
  double top2_fraction = 0.0;
  int beta = 0;
};

Theorem7Point theorem7_point(const Spectrum& spec, const ScattererConfig& cfg,
                             double eps, double q, double rho,
                             double unfold_scale = 1.0);

// eps_seq must be strictly decreasing and the coupling fixed at theta = pi.
// c0 > 0 audits the lower weight bound on every truncated line before any
// solve.
std::vector<Theorem7Point> theorem7_experiment(const Spectrum& spec,
                                               const ScattererConfig& cfg,
                                               const std::vector<double>& eps_seq,
                                               double q, double rho,
                                               double c0 = 0.0,
                                               double unfold_scale = 1.0);

}  // namespace seba
