#pragma once

#include <complex>
#include <vector>

#include "seba/scatterer.hpp"
#include "seba/spectrum.hpp"

namespace seba {

// Closed subinterval [lo, hi] of the energy axis together with the contiguous
// block of spectrum lines it contains.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t first = 0;  // 0-based index of the first member line
  std::size_t count = 0;

  static Interval over(const Spectrum& spec, double lo, double hi);
  double length() const { return hi - lo; }
};

// zeta_I(s, lambda) = sum over members of w_j / (E_j - lambda)^s.
// Non-integer s requires a positive base at every member.
double zeta(const Spectrum& spec, const Interval& I, double s, double lambda);

// Sums over truncated lines outside I that feed the tail of the norm and of
// the discrepancy, with the mean-density corrections for levels beyond
// e_cutoff. R_tail(mu) is kept as a quadratic form so one pass serves every mu.
struct TailSums {
  double s_tail = 0.0;    // sum (E-k)^2 w/(1+E^2)^2 outside I, plus correction
  double s_disc = 0.0;    // its discrete part
  double a_const = 0.0;   // sum (1+kE)^2 w/(1+E^2)^2 outside I, plus correction
  double b_lin = 0.0;     // sum (1+kE)(E-k) w/(1+E^2)^2 outside I, plus correction
  double mu2_corr = 0.0;  // correction part of the mu^2 coefficient

  double r_tail(double mu) const {
    return a_const + 2.0 * b_lin * mu + (s_disc + mu2_corr) * mu * mu;
  }
};

TailSums tail_sums(const Spectrum& spec, const Interval& I,
                   const ScattererConfig& cfg);

// Roots of zeta_I(1, mu) = sigma * sum_I (E_j - kappa) w_j / (1 + E_j^2):
// one per interior member gap, plus at most one outside the member hull when
// the right-hand side does not vanish. Sorted ascending.
std::vector<double> solve_quasi_eigenvalues(const Spectrum& spec,
                                            const Interval& I, double sigma,
                                            const ScattererConfig& cfg);

struct Quasimode {
  Interval interval;
  double sigma = 0.0;
  double mu = 0.0;
  std::vector<std::complex<double>> in_coeffs;  // over interval members
  double norm_sq = 0.0;
  double discrepancy = 0.0;  // d = ||(H-mu) psi|| / ||psi|| in closed form
  double rhs = 0.0;
  TailSums tails;
  ScattererConfig cfg;
  const Spectrum* spectrum = nullptr;
};

Quasimode build_quasimode(const Spectrum& spec, const Interval& I,
                          double sigma, double mu, const ScattererConfig& cfg);

// Recomputes the discrepancy by direct term-by-term summation of the defect
// vector; independent of the closed form used in build_quasimode.
double residual_oracle(const Spectrum& spec, const Quasimode& qm);

// Exact inner product of two quasimodes on the same interval and sigma
// (their tail vectors coincide, so this reduces to the member sum plus
// sigma^2 S_tail).
std::complex<double> quasimode_inner_product(const Quasimode& q1,
                                             const Quasimode& q2);

// |<phi, psi>| over the shared truncated coefficient range (unnormalized).
double overlap(const Quasimode& qm, const PerturbedEigenpair& pair);

struct ProjectionCheck {
  double lhs = 0.0;        // spectral mass outside [mu-M, mu+M]
  double rhs = 0.0;        // (d/M)^2 ||psi||^2
  double coverage = 0.0;   // max |lambda - mu| among supplied eigenvalues
  int in_window = 0;       // eigenvalues with |lambda - mu| <= M
  double approx_lhs = 0.0; // min over phases of ||psi_hat - e^{ix} phi_hat||
  double approx_rhs = 0.0; // 2 d / M, valid when in_window == 1
};

ProjectionCheck projection_bound_check(
    const Quasimode& qm, const std::vector<PerturbedEigenpair>& pairs,
    double M);

// Coefficients of the quasimode over every line with E_j <= e_cutoff
// (members first-class, tail lines carry sigma (E-k) conj(a)/(1+E^2)).
std::vector<std::complex<double>> full_coefficients(const Quasimode& qm);

}  // namespace seba
