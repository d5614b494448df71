#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace seba {

// One lattice mode (n,m) behind a spectral line, with the raw signed value of
// the normalized mode function at the scatterer. The reduced line only keeps
// the canonical amplitude; momentum-space reconstruction needs the members.
struct Mode {
  int n = 0;
  int m = 0;
  double amp = 0.0;
};

struct SpectralLine {
  std::size_t index = 0;  // 1-based rank in the reduced spectrum
  double energy = 0.0;
  std::complex<double> amplitude;
  double weight = 0.0;
  std::vector<Mode> modes;
};

enum class SpectrumKind { rectangle_odd, rectangle_full, poisson, file };

std::string to_string(SpectrumKind kind);
SpectrumKind spectrum_kind_from_string(const std::string& s);

// Reduced spectrum: strictly increasing energies, positive weights, canonical
// (positive real) amplitudes with weight = |amplitude|^2. e_max is the
// generation ceiling every tail correction refers back to.
struct Spectrum {
  std::vector<SpectralLine> lines;
  double e_max = 0.0;
  SpectrumKind kind = SpectrumKind::file;
  std::map<std::string, double> params;

  std::size_t size() const { return lines.size(); }
  double energy(std::size_t i) const { return lines[i].energy; }
  double weight(std::size_t i) const { return lines[i].weight; }
  double total_weight() const;
};

// Rectangle (0,2a) x (0,2b); the scatterer p = (xp, yp) lies strictly inside.
struct RectangleGeometry {
  double a = 1.0;
  double b = 1.0;
  double xp = 1.0;
  double yp = 1.0;
};

struct RawLevel {
  double energy = 0.0;
  std::complex<double> amplitude;
  std::vector<Mode> modes;
};

// Clusters raw levels whose energies agree to relative tol::degeneracy_rel,
// replaces each cluster by one line of weight sum |amp_i|^2 and canonical
// amplitude sqrt(weight), and drops lines with amplitude below
// tol::zero_amplitude. Input need not be sorted.
Spectrum reduce_multiplicities(std::vector<RawLevel> raw, double e_max,
                               SpectrumKind kind,
                               std::map<std::string, double> params);
Spectrum reduce_multiplicities(
    const std::vector<std::pair<double, std::complex<double>>>& raw);

// Odd-odd modes of the centered scatterer, E = pi^2((s+1/2)^2/a^2+(t+1/2)^2/b^2).
// Requires xp == a, yp == b.
Spectrum generate_rectangle_odd(const RectangleGeometry& geom, double e_max);

// Full Dirichlet lattice on sides (side_x, side_y) with the scatterer anywhere
// strictly inside, E = pi^2(n^2/side_x^2 + m^2/side_y^2).
Spectrum generate_rectangle_full(const RectangleGeometry& geom, double side_x,
                                 double side_y, double e_max);

// Unit-rate-style surrogate spectrum: gaps are iid exponentials of the given
// intensity, every line carries the given weight.
Spectrum generate_poisson(double intensity, double weight, double e_max,
                          std::uint64_t seed);

// N(E) = sum of weights with E_j <= E. Errors if E exceeds e_max.
double weyl_count(const Spectrum& spec, double E);

struct DiophantineRecord {
  double energy = 0.0;
  double value = 0.0;  // E^2 * weight at the record point
  int n = 0;
  int m = 0;
};

// Running minima of E_{n,m}^2 |Phi_{n,m}(p)|^2 over increasing energy for the
// lattice on sides (side_x, side_y), n,m <= n_max (odd only when requested).
std::vector<DiophantineRecord> diophantine_floor(const RectangleGeometry& geom,
                                                 double side_x, double side_y,
                                                 int n_max,
                                                 bool odd_only = false);

// Half-side geometry recovered from a generated spectrum's params; errors for
// kinds that carry no rectangle.
RectangleGeometry geometry_of(const Spectrum& spec);

}  // namespace seba
