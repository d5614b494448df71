#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "seba/quasimode.hpp"
#include "seba/scatterer.hpp"
#include "seba/spectrum.hpp"

namespace seba {

// Smoothed Dirichlet kernel delta_n(t) = (1 - e^{-int})/(pi i t), with
// delta_n(0) = n/pi. |delta_n|^2 integrates to 2n/pi.
std::complex<double> smoothed_delta(int n, double t);

// Fourier transform of the (n,m) Dirichlet mode of (0,2a) x (0,2b). It
// factorizes into smoothed deltas pinned at (+-n pi/2a, +-m pi/2b).
std::complex<double> mode_transform(const RectangleGeometry& geom, int n,
                                    int m, double qx, double qy);

struct MomentumGrid {
  double extent = 0.0;
  int resolution = 0;
  std::vector<double> density;  // row-major, index iy*resolution + ix

  double step() const { return 2.0 * extent / (resolution - 1); }
  double sample(int k) const { return -extent + k * step(); }
  double total_mass() const;  // Riemann sum with step^2 cells
};

// |phi_hat|^2 on [-extent, extent]^2 for the position-space vector
// sum_j coeffs[j] Psi_j. Lines whose coefficient falls below coeff_floor
// relative to the largest are dropped; every surviving line must carry
// lattice modes.
MomentumGrid momentum_density(const RectangleGeometry& geom,
                              const Spectrum& spec,
                              const std::vector<std::complex<double>>& coeffs,
                              double extent, int resolution,
                              double coeff_floor = 1e-6);
MomentumGrid momentum_density(const RectangleGeometry& geom,
                              const Quasimode& qm, double extent,
                              int resolution, double coeff_floor = 1e-6);
MomentumGrid momentum_density(const RectangleGeometry& geom,
                              const PerturbedEigenpair& pair, double extent,
                              int resolution, double coeff_floor = 1e-6);

// Fraction of the grid mass inside the union of disks of the given radius
// centred at the 4 lattice points of each listed (n,m): 4-point windows for
// one level, 8-point windows for a doublet. Every disk must fit inside the
// grid.
double point_mass_fraction(const MomentumGrid& grid,
                           const RectangleGeometry& geom,
                           const std::vector<std::pair<int, int>>& levels,
                           double radius);

}  // namespace seba
