// seba: command-line front end for the scatterer laboratory. Every run
// writes its artifact plus a manifest echoing the resolved parameters; exit
// codes are 0 (ok), 2 (parameter error), 3 (numerical failure).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seba/errors.hpp"
#include "seba/localisation.hpp"
#include "seba/momentum.hpp"
#include "seba/quasimode.hpp"
#include "seba/scatterer.hpp"
#include "seba/serialize.hpp"
#include "seba/spectrum.hpp"
#include "seba/stochastic.hpp"
#include "seba/tolerances.hpp"

using json = nlohmann::json;
using namespace seba;

namespace {

constexpr double pi = std::numbers::pi;

// "pi", "pi/k", or a decimal
double parse_theta(const std::string& s) {
  if (s == "pi") return pi;
  if (s.rfind("pi/", 0) == 0) {
    double k = 0.0;
    try {
      k = std::stod(s.substr(3));
    } catch (const std::exception&) {
      throw parameter_error("cannot parse theta: " + s);
    }
    if (!(k > 0.0)) throw parameter_error("theta divisor must be positive");
    return pi / k;
  }
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw parameter_error("cannot parse theta: " + s);
  }
}

Spectrum load_spectrum(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw parameter_error("cannot open spectrum file: " + path);
  return read_spectrum_jsonl(is);
}

// kind-aware default: mean level density of the generated spectrum
double auto_unfold(const Spectrum& spec) {
  if (spec.kind == SpectrumKind::rectangle_odd) {
    RectangleGeometry g = geometry_of(spec);
    return g.a * g.b / (4.0 * pi);
  }
  return 1.0;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw parameter_error("cannot open output file: " + path);
  return os;
}

void write_manifest(const std::string& out_path, const std::string& override_path,
                    const std::string& command, const json& params,
                    const json& extra = json::object()) {
  json man;
  man["command"] = command;
  man["params"] = params;
  man["io"] = {{"output", out_path}};
  if (params.contains("in")) man["io"]["input"] = params["in"];
  man["precision"] = {{"residual", tol::residual},
                      {"bracket_rel", tol::bracket_rel},
                      {"degeneracy_rel", tol::degeneracy_rel},
                      {"min_gap", tol::min_gap}};
  for (auto it = extra.begin(); it != extra.end(); ++it) man[it.key()] = *it;
  std::string path = override_path.empty() ? out_path + ".manifest.json"
                                           : override_path;
  auto os = open_out(path);
  os << man.dump(2) << '\n';
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Flat key=value config support: keys name long options without the dashes.
// Explicit command-line flags win over file entries.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (path.empty()) return args;

  std::ifstream is(path);
  if (!is) throw parameter_error("cannot open config file: " + path);
  std::string line;
  while (std::getline(is, line)) {
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw parameter_error("config line is not key=value: " + line);
    auto strip = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string()
                                    : s.substr(b, e - b + 1);
    };
    std::string key = strip(line.substr(0, eq));
    std::string value = strip(line.substr(eq + 1));
    if (key.empty()) throw parameter_error("config line has no key: " + line);
    std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
    if (given) continue;
    if (value == "true") {
      args.push_back(flag);
    } else if (value == "false") {
      // flag stays off
    } else {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

struct CfgOpts {
  std::string theta = "pi";
  double cutoff = 0.0;  // 0: use the spectrum ceiling
  bool no_tail = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--theta", theta, "coupling angle: pi, pi/k, or decimal");
    cmd->add_option("--cutoff", cutoff, "series cutoff, 0 for the file e_max");
    cmd->add_flag("--no-tail", no_tail, "drop the mean-density tail term");
  }
  ScattererConfig make(const Spectrum& spec) const {
    double c = cutoff > 0.0 ? cutoff : spec.e_max;
    return make_scatterer_config(parse_theta(theta), c, !no_tail);
  }
  json echo() const {
    return {{"theta", theta}, {"cutoff", cutoff}, {"tail", !no_tail}};
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"point-scatterer spectral laboratory"};
  app.require_subcommand(1);
  std::string config_doc;  // path shown in --help; handled in expand_config

  // ---- spectrum ----------------------------------------------------------
  auto* sp = app.add_subcommand("spectrum", "generate a spectrum file");
  sp->add_option("--config", config_doc, "flat key=value config file");
  std::string sp_kind, sp_out;
  double sp_a = 1.0, sp_b = 1.0, sp_emax = 0.0;
  double sp_intensity = 1.0, sp_weight = 1.0;
  double sp_sx = 0.0, sp_sy = 0.0, sp_xp = -1.0, sp_yp = -1.0;
  std::uint64_t sp_seed = 1;
  sp->add_option("--kind", sp_kind, "rectangle-odd | rectangle-full | poisson")
      ->required();
  sp->add_option("--a", sp_a, "half side along x");
  sp->add_option("--b", sp_b, "half side along y");
  sp->add_option("--emax", sp_emax, "energy ceiling")->required();
  sp->add_option("--side-x", sp_sx, "full lattice side, default 2a");
  sp->add_option("--side-y", sp_sy, "full lattice side, default 2b");
  sp->add_option("--xp", sp_xp, "scatterer x, default centered");
  sp->add_option("--yp", sp_yp, "scatterer y, default centered");
  sp->add_option("--intensity", sp_intensity, "poisson level density");
  sp->add_option("--weight", sp_weight, "poisson line weight");
  sp->add_option("--seed", sp_seed, "poisson seed")->envname("SEBA_SEED");
  sp->add_option("--out", sp_out, "output spectrum path")->required();
  std::string sp_manifest;
  sp->add_option("--manifest", sp_manifest, "manifest path override");

  // ---- solve -------------------------------------------------------------
  auto* sv = app.add_subcommand("solve", "perturbed eigenvalues in a window");
  sv->add_option("--config", config_doc, "flat key=value config file");
  std::string sv_in, sv_out, sv_manifest;
  std::vector<double> sv_window;
  int sv_threads = 1;
  CfgOpts sv_cfg;
  sv->add_option("--in", sv_in, "spectrum file")->required();
  sv->add_option("--window", sv_window, "lo,hi energy window")
      ->delimiter(',')
      ->expected(2);
  sv->add_option("--threads", sv_threads, "gap-level parallelism")
      ->envname("SEBA_THREADS");
  sv_cfg.attach(sv);
  sv->add_option("--out", sv_out, "output eigenvalue rows")->required();
  sv->add_option("--manifest", sv_manifest, "manifest path override");

  // ---- quasimode ---------------------------------------------------------
  auto* qm = app.add_subcommand("quasimode", "interval quasimodes");
  qm->add_option("--config", config_doc, "flat key=value config file");
  std::string qm_in, qm_out, qm_manifest;
  std::vector<double> qm_window;
  double qm_sigma = 0.0;
  bool qm_coeffs = false;
  CfgOpts qm_cfg;
  qm->add_option("--in", qm_in, "spectrum file")->required();
  qm->add_option("--window", qm_window, "lo,hi interval")
      ->delimiter(',')
      ->expected(2)
      ->required();
  qm->add_option("--sigma", qm_sigma, "tail strength in [0, 1]");
  qm->add_flag("--coeffs", qm_coeffs, "include member coefficients");
  qm_cfg.attach(qm);
  qm->add_option("--out", qm_out, "output quasimode rows")->required();
  qm->add_option("--manifest", qm_manifest, "manifest path override");

  // ---- scan-gaps ---------------------------------------------------------
  auto* sg = app.add_subcommand("scan-gaps", "quadruples passing the gap tests");
  sg->add_option("--config", config_doc, "flat key=value config file");
  std::string sg_in, sg_out, sg_manifest;
  double sg_eps = 0.1, sg_q = 0.25, sg_rho = 1.4, sg_unfold = 0.0;
  sg->add_option("--in", sg_in, "spectrum file")->required();
  sg->add_option("--eps", sg_eps, "middle-gap scale");
  sg->add_option("--q", sg_q, "flank exponent");
  sg->add_option("--rho", sg_rho, "ceiling exponent");
  sg->add_option("--unfold", sg_unfold, "unfold scale, 0 for kind default");
  sg->add_option("--out", sg_out, "output quadruple rows")->required();
  sg->add_option("--manifest", sg_manifest, "manifest path override");

  // ---- localize ----------------------------------------------------------
  auto* lc = app.add_subcommand("localize", "pigeonhole capture per quadruple");
  lc->add_option("--config", config_doc, "flat key=value config file");
  std::string lc_in, lc_out, lc_manifest;
  double lc_eps = 0.1, lc_q = 0.25, lc_rho = 1.4, lc_unfold = 0.0;
  long lc_max = 0;
  CfgOpts lc_cfg;
  lc->add_option("--in", lc_in, "spectrum file")->required();
  lc->add_option("--eps", lc_eps, "middle-gap scale");
  lc->add_option("--q", lc_q, "flank exponent");
  lc->add_option("--rho", lc_rho, "ceiling exponent");
  lc->add_option("--unfold", lc_unfold, "unfold scale, 0 for kind default");
  lc->add_option("--max-quads", lc_max, "cap on checked quadruples, 0 = all");
  lc_cfg.attach(lc);
  lc->add_option("--out", lc_out, "output capture rows")->required();
  lc->add_option("--manifest", lc_manifest, "manifest path override");

  // ---- theorem7 ----------------------------------------------------------
  auto* t7 = app.add_subcommand("theorem7", "defect sweep over shrinking eps");
  t7->add_option("--config", config_doc, "flat key=value config file");
  std::string t7_in, t7_out, t7_manifest;
  std::vector<double> t7_eps{0.1, 0.05, 0.02, 0.01};
  double t7_q = 0.25, t7_rho = 1.4, t7_c0 = 0.0, t7_unfold = 0.0;
  double t7_emax = 700.0, t7_intensity = 1.0, t7_weight = 1.0;
  std::uint64_t t7_seed = 1;
  CfgOpts t7_cfg;
  t7->add_option("--in", t7_in, "spectrum file; omit to sample a surrogate");
  t7->add_option("--eps", t7_eps, "decreasing eps sweep")->delimiter(',');
  t7->add_option("--q", t7_q, "flank exponent");
  t7->add_option("--rho", t7_rho, "ceiling exponent");
  t7->add_option("--c0", t7_c0, "lower weight audit, 0 to skip");
  t7->add_option("--unfold", t7_unfold, "unfold scale, 0 for kind default");
  t7->add_option("--emax", t7_emax, "surrogate ceiling");
  t7->add_option("--intensity", t7_intensity, "surrogate level density");
  t7->add_option("--weight", t7_weight, "surrogate line weight");
  t7->add_option("--seed", t7_seed, "surrogate seed")->envname("SEBA_SEED");
  t7_cfg.attach(t7);
  t7->add_option("--out", t7_out, "output CSV")->required();
  t7->add_option("--manifest", t7_manifest, "manifest path override");

  // ---- momentum ----------------------------------------------------------
  auto* mm = app.add_subcommand("momentum", "momentum density on a grid");
  mm->add_option("--config", config_doc, "flat key=value config file");
  std::string mm_in, mm_out, mm_manifest;
  std::vector<int> mm_mode;
  long mm_gap = 0;
  double mm_extent = 0.0, mm_radius = 0.0;
  int mm_res = 256;
  CfgOpts mm_cfg;
  mm->add_option("--in", mm_in, "spectrum file")->required();
  mm->add_option("--mode", mm_mode, "single lattice mode n,m")
      ->delimiter(',')
      ->expected(2);
  mm->add_option("--gap", mm_gap,
                 "1-based line index left of the eigenvalue gap");
  mm->add_option("--extent", mm_extent, "grid half width")->required();
  mm->add_option("--resolution", mm_res, "grid points per axis");
  mm->add_option("--radius", mm_radius, "window radius, 0 skips the fraction");
  mm_cfg.attach(mm);
  mm->add_option("--out", mm_out, "output CSV qx,qy,density")->required();
  mm->add_option("--manifest", mm_manifest, "manifest path override");

  // ---- poisson-mc --------------------------------------------------------
  auto* mc = app.add_subcommand("poisson-mc", "surrogate-model Monte Carlo");
  mc->add_option("--config", config_doc, "flat key=value config file");
  std::string mc_exp, mc_out, mc_manifest;
  double mc_eps = 0.05, mc_q = 0.25, mc_rho = 1.4, mc_rho_prime = 0.0;
  double mc_alpha = 0.1;
  long mc_trials = 10000, mc_n = 10, mc_nmax = 100;
  std::uint64_t mc_seed = 1;
  mc->add_option("--experiment", mc_exp, "b2 | gamma-tail | borel-cantelli")
      ->required();
  mc->add_option("--eps", mc_eps, "middle-gap scale");
  mc->add_option("--q", mc_q, "flank exponent");
  mc->add_option("--rho", mc_rho, "ceiling exponent");
  mc->add_option("--rho-prime", mc_rho_prime, "block exponent, 0 = midpoint");
  mc->add_option("--alpha", mc_alpha, "gamma tail exponent");
  mc->add_option("--n", mc_n, "gamma sample size");
  mc->add_option("--n-max", mc_nmax, "borel-cantelli range");
  mc->add_option("--trials", mc_trials, "monte carlo trials");
  mc->add_option("--seed", mc_seed, "rng seed")->envname("SEBA_SEED");
  mc->add_option("--out", mc_out, "output JSON")->required();
  mc->add_option("--manifest", mc_manifest, "manifest path override");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));

    if (sp->parsed()) {
      Spectrum spec;
      RectangleGeometry geom{sp_a, sp_b,
                             sp_xp < 0.0 ? sp_a : sp_xp,
                             sp_yp < 0.0 ? sp_b : sp_yp};
      if (sp_kind == "rectangle-odd") {
        spec = generate_rectangle_odd(geom, sp_emax);
      } else if (sp_kind == "rectangle-full") {
        double sx = sp_sx > 0.0 ? sp_sx : 2.0 * sp_a;
        double sy = sp_sy > 0.0 ? sp_sy : 2.0 * sp_b;
        spec = generate_rectangle_full(geom, sx, sy, sp_emax);
      } else if (sp_kind == "poisson") {
        spec = generate_poisson(sp_intensity, sp_weight, sp_emax, sp_seed);
      } else {
        throw parameter_error("unknown spectrum kind: " + sp_kind);
      }
      auto os = open_out(sp_out);
      write_spectrum_jsonl(spec, os);
      json params{{"kind", sp_kind},       {"a", sp_a},
                  {"b", sp_b},             {"emax", sp_emax},
                  {"side_x", sp_sx},       {"side_y", sp_sy},
                  {"xp", geom.xp},         {"yp", geom.yp},
                  {"intensity", sp_intensity}, {"weight", sp_weight},
                  {"seed", sp_seed}};
      write_manifest(sp_out, sp_manifest, "spectrum", params,
                     {{"lines", spec.size()}});
    }

    if (sv->parsed()) {
      Spectrum spec = load_spectrum(sv_in);
      ScattererConfig cfg = sv_cfg.make(spec);
      if (sv_threads < 1) throw parameter_error("threads must be positive");
      double lo = sv_window.empty() ? 0.0 : sv_window[0];
      double hi = sv_window.empty() ? cfg.e_cutoff : sv_window[1];
      SolveResult res = solve_all_eigenvalues(spec, cfg, lo, hi, sv_threads);
      auto os = open_out(sv_out);
      for (const auto& pair : res.pairs) {
        json row{{"gap_index", pair.gap_index},
                 {"lambda", pair.lambda},
                 {"norm_sq", pair.norm_sq},
                 {"residual", pair.residual},
                 {"bracket_width", pair.bracket_width}};
        os << row.dump() << '\n';
      }
      json params = sv_cfg.echo();
      params["in"] = sv_in;
      params["window"] = {lo, hi};
      params["threads"] = sv_threads;
      write_manifest(sv_out, sv_manifest, "solve", params,
                     {{"roots", res.pairs.size()},
                      {"skipped_gaps", res.skipped_gaps}});
    }

    if (qm->parsed()) {
      Spectrum spec = load_spectrum(qm_in);
      ScattererConfig cfg = qm_cfg.make(spec);
      Interval I = Interval::over(spec, qm_window[0], qm_window[1]);
      auto roots = solve_quasi_eigenvalues(spec, I, qm_sigma, cfg);
      auto os = open_out(qm_out);
      for (double mu : roots) {
        Quasimode q = build_quasimode(spec, I, qm_sigma, mu, cfg);
        json row{{"mu", q.mu},
                 {"discrepancy", q.discrepancy},
                 {"norm_sq", q.norm_sq},
                 {"rhs", q.rhs}};
        if (qm_sigma > 0.0) row["s_tail"] = q.tails.s_tail;
        if (qm_coeffs) {
          json cs = json::array();
          for (const auto& c : q.in_coeffs)
            cs.push_back(json::array({c.real(), c.imag()}));
          row["coeffs"] = std::move(cs);
        }
        os << row.dump() << '\n';
      }
      json params = qm_cfg.echo();
      params["in"] = qm_in;
      params["window"] = {qm_window[0], qm_window[1]};
      params["sigma"] = qm_sigma;
      params["coeffs"] = qm_coeffs;
      write_manifest(qm_out, qm_manifest, "quasimode", params,
                     {{"interval_first", I.first},
                      {"interval_count", I.count},
                      {"roots", roots.size()}});
    }

    if (sg->parsed()) {
      Spectrum spec = load_spectrum(sg_in);
      double unfold = sg_unfold > 0.0 ? sg_unfold : auto_unfold(spec);
      auto quads = scan_quadruples(spec, sg_eps, sg_q, sg_rho, unfold);
      auto os = open_out(sg_out);
      for (const auto& quad : quads) {
        json row{{"a", quad.a},     {"e_a", quad.e_a}, {"e_b", quad.e_b},
                 {"e_c", quad.e_c}, {"e_d", quad.e_d}};
        os << row.dump() << '\n';
      }
      json params{{"in", sg_in}, {"eps", sg_eps},       {"q", sg_q},
                  {"rho", sg_rho}, {"unfold", unfold}};
      write_manifest(sg_out, sg_manifest, "scan-gaps", params,
                     {{"satisfied", quads.size()},
                      {"scanned", spec.size() < 4 ? 0 : spec.size() - 3}});
    }

    if (lc->parsed()) {
      Spectrum spec = load_spectrum(lc_in);
      ScattererConfig cfg = lc_cfg.make(spec);
      double unfold = lc_unfold > 0.0 ? lc_unfold : auto_unfold(spec);
      auto quads = scan_quadruples(spec, lc_eps, lc_q, lc_rho, unfold);
      auto os = open_out(lc_out);
      long violations = 0, checked = 0;
      for (const auto& quad : quads) {
        if (lc_max > 0 && checked >= lc_max) break;
        if (quad.e_d > cfg.e_cutoff - 2.0) continue;
        auto chk = proposition3_check(spec, cfg, quad);
        Top2 top = top2_mass(solve_in_gap(spec, cfg, quad.a + 1));
        bool ok = chk.best_overlap >= chk.bound * (1.0 - 1e-12);
        if (!ok) ++violations;
        ++checked;
        json row{{"a", quad.a},
                 {"mu", chk.mu},
                 {"best_overlap", chk.best_overlap},
                 {"bound", chk.bound},
                 {"ok", ok},
                 {"lambdas", {chk.lambdas[0], chk.lambdas[1], chk.lambdas[2]}},
                 {"top2_fraction", top.mass_fraction},
                 {"beta", top.beta}};
        os << row.dump() << '\n';
      }
      json params = lc_cfg.echo();
      params["in"] = lc_in;
      params["eps"] = lc_eps;
      params["q"] = lc_q;
      params["rho"] = lc_rho;
      params["unfold"] = unfold;
      params["max_quads"] = lc_max;
      write_manifest(lc_out, lc_manifest, "localize", params,
                     {{"checked", checked}, {"violations", violations}});
    }

    if (t7->parsed()) {
      Spectrum spec;
      if (t7_in.empty())
        spec = generate_poisson(t7_intensity, t7_weight, t7_emax, t7_seed);
      else
        spec = load_spectrum(t7_in);
      ScattererConfig cfg = t7_cfg.make(spec);
      double unfold = t7_unfold > 0.0 ? t7_unfold : auto_unfold(spec);
      auto pts = theorem7_experiment(spec, cfg, t7_eps, t7_q, t7_rho, t7_c0,
                                     unfold);
      auto os = open_out(t7_out);
      os << "eps,quad_index,e_a,e_b,e_c,e_d,mu,lambda,defect,gap_margin,"
            "top2_fraction,beta\n";
      for (const auto& pt : pts) {
        os << fmt(pt.eps) << ',' << pt.quad.a << ',' << fmt(pt.quad.e_a)
           << ',' << fmt(pt.quad.e_b) << ',' << fmt(pt.quad.e_c) << ','
           << fmt(pt.quad.e_d) << ',' << fmt(pt.mu) << ',' << fmt(pt.lambda)
           << ',' << fmt(pt.defect) << ',' << fmt(pt.gap_margin) << ','
           << fmt(pt.top2_fraction) << ',' << pt.beta << '\n';
      }
      json params = t7_cfg.echo();
      params["in"] = t7_in;
      params["eps"] = t7_eps;
      params["q"] = t7_q;
      params["rho"] = t7_rho;
      params["c0"] = t7_c0;
      params["unfold"] = unfold;
      params["emax"] = t7_emax;
      params["intensity"] = t7_intensity;
      params["weight"] = t7_weight;
      params["seed"] = t7_seed;
      write_manifest(t7_out, t7_manifest, "theorem7", params,
                     {{"points", pts.size()}});
    }

    if (mm->parsed()) {
      Spectrum spec = load_spectrum(mm_in);
      RectangleGeometry geom = geometry_of(spec);
      if (mm_mode.empty() == (mm_gap == 0))
        throw parameter_error("pick exactly one of --mode and --gap");
      MomentumGrid grid;
      std::vector<std::pair<int, int>> levels;
      if (!mm_mode.empty()) {
        std::size_t li = spec.size();
        for (std::size_t i = 0; i < spec.size() && li == spec.size(); ++i)
          for (const auto& md : spec.lines[i].modes)
            if (md.n == mm_mode[0] && md.m == mm_mode[1]) li = i;
        if (li == spec.size())
          throw parameter_error("mode not present in the spectrum");
        std::vector<std::complex<double>> coeffs(li + 1, 0.0);
        coeffs[li] = 1.0;
        grid = momentum_density(geom, spec, coeffs, mm_extent, mm_res);
        levels = {{mm_mode[0], mm_mode[1]}};
      } else {
        ScattererConfig cfg = mm_cfg.make(spec);
        PerturbedEigenpair pair =
            solve_in_gap(spec, cfg, static_cast<std::size_t>(mm_gap - 1));
        grid = momentum_density(geom, pair, mm_extent, mm_res);
        for (std::size_t i : {std::size_t(mm_gap - 1), std::size_t(mm_gap)})
          for (const auto& md : spec.lines[i].modes)
            levels.emplace_back(md.n, md.m);
      }
      auto os = open_out(mm_out);
      os << "qx,qy,density\n";
      for (int iy = 0; iy < grid.resolution; ++iy)
        for (int ix = 0; ix < grid.resolution; ++ix)
          os << fmt(grid.sample(ix)) << ',' << fmt(grid.sample(iy)) << ','
             << fmt(grid.density[std::size_t(iy) * grid.resolution + ix])
             << '\n';
      json extra{{"total_mass", grid.total_mass()}};
      if (mm_radius > 0.0)
        extra["window_fraction"] =
            point_mass_fraction(grid, geom, levels, mm_radius);
      json params = mm_cfg.echo();
      params["in"] = mm_in;
      params["mode"] = mm_mode;
      params["gap"] = mm_gap;
      params["extent"] = mm_extent;
      params["resolution"] = mm_res;
      params["radius"] = mm_radius;
      write_manifest(mm_out, mm_manifest, "momentum", params, extra);
    }

    if (mc->parsed()) {
      json out;
      if (mc_exp == "b2") {
        BlockEventParams par;
        par.eps = mc_eps;
        par.q = mc_q;
        par.rho = mc_rho;
        par.rho_prime = mc_rho_prime;
        par.trials = mc_trials;
        par.seed = mc_seed;
        auto res = mc_proposition_b2(par);
        out = {{"empirical_p", res.empirical_p},
               {"block_p", res.block_p},
               {"analytic_lower", res.analytic_lower},
               {"p1", res.p1},
               {"p2", res.p2},
               {"std_error", res.std_error},
               {"n_gaps", res.n_gaps},
               {"m_blocks", res.m_blocks},
               {"trials", res.trials}};
      } else if (mc_exp == "gamma-tail") {
        auto res = gamma_tail_check(mc_n, mc_alpha, mc_trials, mc_seed);
        out = {{"empirical_p", res.empirical_p},
               {"exact_tail", res.exact_tail},
               {"bound_scale", res.bound_scale},
               {"std_error", res.std_error}};
      } else if (mc_exp == "borel-cantelli") {
        auto seq = borel_cantelli_sequence(mc_q, mc_rho, mc_nmax, mc_seed);
        json found = json::array();
        long hits = 0;
        for (const auto& [n, ok] : seq) {
          found.push_back(json::array({n, ok}));
          if (ok) ++hits;
        }
        out = {{"found", std::move(found)}, {"hits", hits}};
      } else {
        throw parameter_error("unknown experiment: " + mc_exp);
      }
      auto os = open_out(mc_out);
      os << out.dump(2) << '\n';
      json params{{"experiment", mc_exp}, {"eps", mc_eps},
                  {"q", mc_q},            {"rho", mc_rho},
                  {"rho_prime", mc_rho_prime}, {"alpha", mc_alpha},
                  {"n", mc_n},            {"n_max", mc_nmax},
                  {"trials", mc_trials},  {"seed", mc_seed}};
      write_manifest(mc_out, mc_manifest, "poisson-mc", params);
    }
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const parameter_error& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical error";
    if (e.index >= 0) std::cerr << " (index " << e.index << ")";
    std::cerr << ": " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
