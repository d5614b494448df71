#include "seba/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "seba/errors.hpp"

namespace seba {

namespace {
constexpr double pi = std::numbers::pi;
}

std::complex<double> smoothed_delta(int n, double t) {
  if (n < 1) throw parameter_error("smoothed_delta needs n >= 1");
  if (t == 0.0) return {n / pi, 0.0};
  double s = std::sin(n * t);
  double h = std::sin(0.5 * n * t);
  return {s / (pi * t), -2.0 * h * h / (pi * t)};
}

std::complex<double> mode_transform(const RectangleGeometry& geom, int n,
                                    int m, double qx, double qy) {
  if (n < 1 || m < 1) throw parameter_error("mode indices must be positive");
  if (!(geom.a > 0.0) || !(geom.b > 0.0))
    throw parameter_error("rectangle half-sides must be positive");
  const double tx = 2.0 * qx * geom.a / n;
  const double ty = 2.0 * qy * geom.b / m;
  std::complex<double> fx = smoothed_delta(n, tx + pi) - smoothed_delta(n, tx - pi);
  std::complex<double> fy = smoothed_delta(m, ty - pi) - smoothed_delta(m, ty + pi);
  double pref = pi * std::sqrt(geom.a * geom.b) / (2.0 * n * m);
  return pref * fx * fy;
}

double MomentumGrid::total_mass() const {
  double h = step();
  double s = 0.0;
  for (double v : density) s += v;
  return s * h * h;
}

MomentumGrid momentum_density(const RectangleGeometry& geom,
                              const Spectrum& spec,
                              const std::vector<std::complex<double>>& coeffs,
                              double extent, int resolution,
                              double coeff_floor) {
  if (resolution < 8)
    throw parameter_error("grid resolution must be at least 8");
  if (!(extent > 0.0)) throw parameter_error("grid extent must be positive");
  if (coeffs.size() > spec.lines.size())
    throw parameter_error("coefficient vector is longer than the spectrum");
  if (!(geom.a > 0.0) || !(geom.b > 0.0))
    throw parameter_error("rectangle half-sides must be positive");

  double cmax = 0.0;
  for (const auto& c : coeffs) cmax = std::max(cmax, std::abs(c));
  if (cmax == 0.0)
    throw parameter_error("all coefficients vanish");

  struct Term {
    int n, m;
    std::complex<double> eff;
  };
  std::vector<Term> terms;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (std::abs(coeffs[i]) < coeff_floor * cmax) continue;
    const auto& ln = spec.lines[i];
    if (ln.modes.empty())
      throw parameter_error(
          "momentum density needs lattice modes behind every retained line");
    for (const auto& md : ln.modes) {
      double pref = pi * std::sqrt(geom.a * geom.b) / (2.0 * md.n * md.m);
      std::complex<double> eff =
          coeffs[i] * (md.amp / std::sqrt(ln.weight)) * pref;
      terms.push_back({md.n, md.m, eff});
    }
  }

  MomentumGrid grid;
  grid.extent = extent;
  grid.resolution = resolution;
  grid.density.assign(static_cast<std::size_t>(resolution) * resolution, 0.0);

  // factor tables, one column per distinct n (x axis) and m (y axis)
  std::map<int, std::vector<std::complex<double>>> xf, yf;
  for (const auto& t : terms) {
    if (!xf.count(t.n)) {
      auto& col = xf[t.n];
      col.resize(resolution);
      for (int k = 0; k < resolution; ++k) {
        double tx = 2.0 * grid.sample(k) * geom.a / t.n;
        col[k] = smoothed_delta(t.n, tx + pi) - smoothed_delta(t.n, tx - pi);
      }
    }
    if (!yf.count(t.m)) {
      auto& col = yf[t.m];
      col.resize(resolution);
      for (int k = 0; k < resolution; ++k) {
        double ty = 2.0 * grid.sample(k) * geom.b / t.m;
        col[k] = smoothed_delta(t.m, ty - pi) - smoothed_delta(t.m, ty + pi);
      }
    }
  }

  std::vector<std::complex<double>> field(grid.density.size());
  for (const auto& t : terms) {
    const auto& xs = xf[t.n];
    const auto& ys = yf[t.m];
    for (int iy = 0; iy < resolution; ++iy) {
      std::complex<double> fy = t.eff * ys[iy];
      std::complex<double>* row = field.data() +
                                  static_cast<std::size_t>(iy) * resolution;
      for (int ix = 0; ix < resolution; ++ix) row[ix] += fy * xs[ix];
    }
  }
  for (std::size_t i = 0; i < field.size(); ++i)
    grid.density[i] = std::norm(field[i]);
  return grid;
}

MomentumGrid momentum_density(const RectangleGeometry& geom,
                              const Quasimode& qm, double extent,
                              int resolution, double coeff_floor) {
  return momentum_density(geom, *qm.spectrum, full_coefficients(qm), extent,
                          resolution, coeff_floor);
}

MomentumGrid momentum_density(const RectangleGeometry& geom,
                              const PerturbedEigenpair& pair, double extent,
                              int resolution, double coeff_floor) {
  return momentum_density(geom, *pair.spectrum, pair.coefficients, extent,
                          resolution, coeff_floor);
}

double point_mass_fraction(const MomentumGrid& grid,
                           const RectangleGeometry& geom,
                           const std::vector<std::pair<int, int>>& levels,
                           double radius) {
  if (!(radius > 0.0)) throw parameter_error("window radius must be positive");
  if (levels.empty()) throw parameter_error("no levels supplied");

  std::vector<std::pair<double, double>> centers;
  for (const auto& [n, m] : levels) {
    if (n < 1 || m < 1) throw parameter_error("mode indices must be positive");
    double cx = n * pi / (2.0 * geom.a);
    double cy = m * pi / (2.0 * geom.b);
    if (cx + radius > grid.extent || cy + radius > grid.extent)
      throw parameter_error("window disk does not fit inside the grid");
    for (double sx : {-1.0, 1.0})
      for (double sy : {-1.0, 1.0}) centers.emplace_back(sx * cx, sy * cy);
  }

  double total = 0.0, masked = 0.0;
  const double r2 = radius * radius;
  for (int iy = 0; iy < grid.resolution; ++iy) {
    double qy = grid.sample(iy);
    for (int ix = 0; ix < grid.resolution; ++ix) {
      double qx = grid.sample(ix);
      double v = grid.density[static_cast<std::size_t>(iy) * grid.resolution +
                              ix];
      total += v;
      for (const auto& [cx, cy] : centers) {
        double dx = qx - cx, dy = qy - cy;
        if (dx * dx + dy * dy <= r2) {
          masked += v;
          break;
        }
      }
    }
  }
  if (!(total > 0.0)) throw numerical_error("grid carries no mass");
  return masked / total;
}

}  // namespace seba
