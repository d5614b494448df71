#include "seba/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "seba/errors.hpp"
#include "seba/rng.hpp"
#include "seba/tolerances.hpp"

namespace seba {

namespace {
constexpr double pi = std::numbers::pi;
}

std::string to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::rectangle_odd: return "rectangle-odd";
    case SpectrumKind::rectangle_full: return "rectangle-full";
    case SpectrumKind::poisson: return "poisson";
    case SpectrumKind::file: return "file";
  }
  return "file";
}

SpectrumKind spectrum_kind_from_string(const std::string& s) {
  if (s == "rectangle-odd") return SpectrumKind::rectangle_odd;
  if (s == "rectangle-full") return SpectrumKind::rectangle_full;
  if (s == "poisson") return SpectrumKind::poisson;
  if (s == "file") return SpectrumKind::file;
  throw parameter_error("unknown spectrum kind: " + s);
}

double Spectrum::total_weight() const {
  double w = 0.0;
  for (const auto& ln : lines) w += ln.weight;
  return w;
}

Spectrum reduce_multiplicities(std::vector<RawLevel> raw, double e_max,
                               SpectrumKind kind,
                               std::map<std::string, double> params) {
  std::stable_sort(raw.begin(), raw.end(),
                   [](const RawLevel& x, const RawLevel& y) {
                     return x.energy < y.energy;
                   });

  Spectrum spec;
  spec.e_max = e_max;
  spec.kind = kind;
  spec.params = std::move(params);

  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t j = i + 1;
    double e_ref = raw[i].energy;
    while (j < raw.size()) {
      double scale = std::max({1.0, std::fabs(e_ref), std::fabs(raw[j].energy)});
      if (raw[j].energy - e_ref > tol::degeneracy_rel * scale) break;
      e_ref = raw[j].energy;
      ++j;
    }

    double e_sum = 0.0, w = 0.0;
    std::vector<Mode> modes;
    for (std::size_t k = i; k < j; ++k) {
      e_sum += raw[k].energy;
      w += std::norm(raw[k].amplitude);
      for (const auto& md : raw[k].modes) modes.push_back(md);
    }
    double amp = std::sqrt(w);
    if (amp >= tol::zero_amplitude) {
      SpectralLine ln;
      ln.energy = e_sum / static_cast<double>(j - i);
      ln.amplitude = amp;
      ln.weight = w;
      ln.modes = std::move(modes);
      spec.lines.push_back(std::move(ln));
    }
    i = j;
  }

  for (std::size_t k = 0; k < spec.lines.size(); ++k)
    spec.lines[k].index = k + 1;
  for (std::size_t k = 1; k < spec.lines.size(); ++k)
    if (!(spec.lines[k].energy > spec.lines[k - 1].energy))
      throw numerical_error("reduction produced non-increasing energies",
                            static_cast<long>(k));
  return spec;
}

Spectrum reduce_multiplicities(
    const std::vector<std::pair<double, std::complex<double>>>& raw) {
  std::vector<RawLevel> levels;
  levels.reserve(raw.size());
  double e_max = 0.0;
  for (const auto& [e, amp] : raw) {
    levels.push_back({e, amp, {}});
    e_max = std::max(e_max, e);
  }
  return reduce_multiplicities(std::move(levels), e_max, SpectrumKind::file, {});
}

namespace {

void check_geometry(const RectangleGeometry& g) {
  if (!(g.a > 0.0) || !(g.b > 0.0))
    throw parameter_error("rectangle half-sides must be positive");
  if (!(g.xp > 0.0) || !(g.xp < 2.0 * g.a) || !(g.yp > 0.0) ||
      !(g.yp < 2.0 * g.b))
    throw parameter_error("scatterer must lie strictly inside the rectangle");
}

}  // namespace

Spectrum generate_rectangle_odd(const RectangleGeometry& geom, double e_max) {
  check_geometry(geom);
  double ctr = std::max(std::fabs(geom.xp - geom.a) / geom.a,
                        std::fabs(geom.yp - geom.b) / geom.b);
  if (ctr > 1e-12)
    throw parameter_error(
        "odd-odd generator requires the scatterer at the rectangle centre");
  const double a = geom.a, b = geom.b;
  const double ground =
      pi * pi * (0.25 / (a * a) + 0.25 / (b * b));
  if (e_max < ground)
    throw parameter_error("e_max lies below the ground state");

  std::vector<RawLevel> raw;
  const double amp_abs = 1.0 / std::sqrt(a * b);
  for (int s = 0;; ++s) {
    double ex = pi * pi * (s + 0.5) * (s + 0.5) / (a * a);
    if (ex > e_max) break;
    for (int t = 0;; ++t) {
      double e = ex + pi * pi * (t + 0.5) * (t + 0.5) / (b * b);
      if (e > e_max) break;
      double amp = (((s + t) % 2) ? -amp_abs : amp_abs);
      raw.push_back({e, amp, {Mode{2 * s + 1, 2 * t + 1, amp}}});
    }
  }
  return reduce_multiplicities(std::move(raw), e_max,
                               SpectrumKind::rectangle_odd,
                               {{"a", a}, {"b", b}, {"xp", geom.xp},
                                {"yp", geom.yp}});
}

Spectrum generate_rectangle_full(const RectangleGeometry& geom, double side_x,
                                 double side_y, double e_max) {
  if (!(side_x > 0.0) || !(side_y > 0.0))
    throw parameter_error("rectangle sides must be positive");
  if (!(geom.xp > 0.0) || !(geom.xp < side_x) || !(geom.yp > 0.0) ||
      !(geom.yp < side_y))
    throw parameter_error("scatterer must lie strictly inside the rectangle");
  const double ground =
      pi * pi * (1.0 / (side_x * side_x) + 1.0 / (side_y * side_y));
  if (e_max < ground)
    throw parameter_error("e_max lies below the ground state");

  std::vector<RawLevel> raw;
  const double norm = 2.0 / std::sqrt(side_x * side_y);
  for (int n = 1;; ++n) {
    double ex = pi * pi * n * n / (side_x * side_x);
    if (ex > e_max) break;
    double sx = std::sin(n * pi * geom.xp / side_x);
    for (int m = 1;; ++m) {
      double e = ex + pi * pi * m * m / (side_y * side_y);
      if (e > e_max) break;
      double amp = norm * sx * std::sin(m * pi * geom.yp / side_y);
      raw.push_back({e, amp, {Mode{n, m, amp}}});
    }
  }
  return reduce_multiplicities(std::move(raw), e_max,
                               SpectrumKind::rectangle_full,
                               {{"side_x", side_x}, {"side_y", side_y},
                                {"xp", geom.xp}, {"yp", geom.yp}});
}

Spectrum generate_poisson(double intensity, double weight, double e_max,
                          std::uint64_t seed) {
  if (!(intensity > 0.0)) throw parameter_error("intensity must be positive");
  if (!(weight > 0.0)) throw parameter_error("weight must be positive");
  if (e_max < 0.0) throw parameter_error("e_max must be nonnegative");

  rng::CounterRng gen(seed);
  std::vector<RawLevel> raw;
  const double amp = std::sqrt(weight);
  double e = 0.0;
  for (;;) {
    e += gen.exponential(intensity);
    if (e > e_max) break;
    raw.push_back({e, amp, {}});
  }
  return reduce_multiplicities(std::move(raw), e_max, SpectrumKind::poisson,
                               {{"intensity", intensity},
                                {"weight", weight},
                                {"seed", static_cast<double>(seed)}});
}

double weyl_count(const Spectrum& spec, double E) {
  if (E > spec.e_max)
    throw parameter_error("weyl_count: E exceeds the generation ceiling");
  double n = 0.0;
  for (const auto& ln : spec.lines) {
    if (ln.energy > E) break;
    n += ln.weight;
  }
  return n;
}

std::vector<DiophantineRecord> diophantine_floor(const RectangleGeometry& geom,
                                                 double side_x, double side_y,
                                                 int n_max, bool odd_only) {
  if (!(side_x > 0.0) || !(side_y > 0.0))
    throw parameter_error("rectangle sides must be positive");
  if (n_max < 1) throw parameter_error("n_max must be at least 1");
  if (!(geom.xp > 0.0) || !(geom.xp < side_x) || !(geom.yp > 0.0) ||
      !(geom.yp < side_y))
    throw parameter_error("scatterer must lie strictly inside the rectangle");

  struct Item {
    double e, v;
    int n, m;
  };
  std::vector<Item> items;
  const double norm2 = 4.0 / (side_x * side_y);
  const int step = odd_only ? 2 : 1;
  for (int n = 1; n <= n_max; n += step) {
    double sx = std::sin(n * pi * geom.xp / side_x);
    for (int m = 1; m <= n_max; m += step) {
      double sy = std::sin(m * pi * geom.yp / side_y);
      double e = pi * pi * (static_cast<double>(n) * n / (side_x * side_x) +
                            static_cast<double>(m) * m / (side_y * side_y));
      double w = norm2 * sx * sx * sy * sy;
      items.push_back({e, e * e * w, n, m});
    }
  }
  std::sort(items.begin(), items.end(),
            [](const Item& x, const Item& y) { return x.e < y.e; });

  std::vector<DiophantineRecord> records;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& it : items) {
    if (it.v < best) {
      best = it.v;
      records.push_back({it.e, it.v, it.n, it.m});
    }
  }
  return records;
}

RectangleGeometry geometry_of(const Spectrum& spec) {
  RectangleGeometry g;
  if (spec.kind == SpectrumKind::rectangle_odd) {
    g.a = spec.params.at("a");
    g.b = spec.params.at("b");
    g.xp = spec.params.at("xp");
    g.yp = spec.params.at("yp");
    return g;
  }
  if (spec.kind == SpectrumKind::rectangle_full) {
    g.a = spec.params.at("side_x") / 2.0;
    g.b = spec.params.at("side_y") / 2.0;
    g.xp = spec.params.at("xp");
    g.yp = spec.params.at("yp");
    return g;
  }
  throw parameter_error("spectrum carries no rectangle geometry");
}

}  // namespace seba
