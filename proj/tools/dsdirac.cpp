// Batch verification front end.  Subcommands emit a single JSON or CSV
// report; exit code 0 on pass, 1 on check failure, 2 on usage errors.
// Wall time goes to stderr so the payload stays byte-stable.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "dsdirac/common.hpp"
#include "dsdirac/report.hpp"
#include "dsdirac/romanovski.hpp"
#include "dsdirac/separation.hpp"
#include "dsdirac/spectral.hpp"
#include "dsdirac/susy_angular.hpp"
#include "dsdirac/verify.hpp"

namespace {

using namespace dsdirac;

struct GlobalOpts {
  std::string out;
  std::string format = "json";
  double tol = 1.0;
  int jobs = 1;
};

int emit(const Report& rep, const GlobalOpts& g) {
  const std::string text = g.format == "csv" ? rep.to_csv() : rep.to_json();
  if (g.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(g.out, std::ios::binary);
    if (!f) {
      std::fprintf(stderr, "out: cannot open '%s' for writing\n",
                   g.out.c_str());
      return 2;
    }
    f << text;
  }
  return rep.all_pass() ? 0 : 1;
}

int run_spectrum(const GlobalOpts& g, double m, int nmax, int grid_n) {
  if (grid_n < 16) {
    std::fprintf(stderr, "grid: must be at least 16 points\n");
    return 2;
  }
  if (nmax < 0) {
    std::fprintf(stderr, "nmax: must be nonnegative\n");
    return 2;
  }
  Report rep;
  rep.command = "spectrum";
  rep.param("m", Value::of(m));
  rep.param("nmax", Value::of(nmax));
  rep.param("grid", Value::of(grid_n));
  rep.param("tol", Value::of(g.tol));

  const AngularSector sec{m};
  const Grid1D grid{0.0, pi, grid_n};
  auto t = discretize([&](double th) { return sec.v_plus(th); }, grid);
  const EigenResult er = eigen_smallest(t, nmax + 1);

  double worst_gap = 0.0;
  for (int n = 0; n <= nmax; ++n) {
    Row r;
    r.set("n", Value::of(n));
    r.set("omega2_shifted", Value::of(sec.eigenvalue(n)));
    r.set("omega2_full", Value::of((sec.A() + n) * (sec.A() + n)));
    r.set("oracle", Value::of(er.values[n]));
    r.set("oracle_error",
          Value::of(std::abs(er.values[n] - sec.eigenvalue(n))));
    if (n == 0) {
      r.set("gap", Value::null());
      r.set("gap_error", Value::null());
    } else {
      const double gap = er.values[n] - er.values[n - 1];
      const double want = 2.0 * sec.A() + 2.0 * (n - 1) + 1.0;
      r.set("gap", Value::of(gap));
      r.set("gap_error", Value::of(std::abs(gap - want)));
      worst_gap = std::max(worst_gap, std::abs(gap - want));
    }
    rep.rows.push_back(r);
  }
  rep.checks.push_back(Check::bounded("gap_law", worst_gap, 5e-4 * g.tol,
                                      "oracle gaps vs 2A+2n+1"));
  rep.checks.push_back(Check::bounded("ground_level_zero",
                                      std::abs(er.values[0]), 5e-4 * g.tol,
                                      "shifted convention ground level"));
  return emit(rep, g);
}

int run_verify(const GlobalOpts& g, const std::string& suite) {
  std::vector<std::string> names;
  if (suite == "all") {
    names = {"geometry", "susy", "romanovski", "pseudo"};
  } else if (suite == "geometry" || suite == "susy" || suite == "romanovski" ||
             suite == "pseudo") {
    names = {suite};
  } else {
    std::fprintf(stderr, "suite: unknown suite '%s'\n", suite.c_str());
    return 2;
  }

  const std::uint64_t seed = default_seed();
  std::vector<SuiteResult> slots(names.size());

  const int workers =
      std::max(1, std::min<int>(g.jobs, static_cast<int>(names.size())));
  if (workers == 1) {
    for (size_t i = 0; i < names.size(); ++i)
      slots[i] = verify_suite(names[i], seed, g.tol);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < names.size();
             i = next.fetch_add(1))
          slots[i] = verify_suite(names[i], seed, g.tol);
      });
    for (std::thread& th : pool) th.join();
  }

  Report rep;
  rep.command = "verify";
  rep.param("suite", Value::of(suite));
  rep.param("seed", Value::of(static_cast<long long>(seed)));
  rep.param("tol", Value::of(g.tol));
  for (size_t i = 0; i < names.size(); ++i) {
    for (Row r : slots[i].rows) {
      Row tagged;
      tagged.set("suite", Value::of(names[i]));
      for (auto& cell : r.cells) tagged.cells.push_back(std::move(cell));
      rep.rows.push_back(std::move(tagged));
    }
    for (Check c : slots[i].checks) {
      c.name = names[i] + "." + c.name;
      rep.checks.push_back(std::move(c));
    }
  }
  return emit(rep, g);
}

int run_romanovski_table(const GlobalOpts& g, int numax, double a, double b) {
  if (numax < 0) {
    std::fprintf(stderr, "numax: must be nonnegative\n");
    return 2;
  }
  Report rep;
  rep.command = "romanovski-table";
  rep.param("numax", Value::of(numax));
  rep.param("a", Value::of(a));
  rep.param("b", Value::of(b));
  rep.param("tol", Value::of(g.tol));

  std::vector<RomanovskiPoly> polys;
  try {
    for (int nu = 0; nu <= numax; ++nu)
      polys.push_back(romanovski_poly(nu, a, b));
  } catch (const DegeneracyError& e) {
    std::fprintf(stderr,
                 "romanovski-table: degeneracy at degree %zu (vanishing "
                 "denominator at power %d) for a=%.17g b=%.17g\n",
                 polys.size(), e.k, a, b);
    return 1;
  }

  double worst_ode = 0.0;
  for (const RomanovskiPoly& p : polys) {
    const auto res = romanovski_ode_residual<double>(p.coeffs, a, b);
    double rmax = 0.0, cmax = 0.0;
    for (double x : res) rmax = std::max(rmax, std::abs(x));
    for (double x : p.coeffs) cmax = std::max(cmax, std::abs(x));
    worst_ode = std::max(worst_ode, rmax / std::max(1.0, cmax));

    std::string coeffs = "[";
    for (size_t i = 0; i < p.coeffs.size(); ++i) {
      if (i) coeffs += ", ";
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", p.coeffs[i]);
      coeffs += buf;
    }
    coeffs += "]";
    Row r;
    r.set("nubar", Value::of(p.nubar));
    r.set("coefficients", Value::of(coeffs));
    r.set("eigen_term", Value::of(p.eigen_term()));
    r.set("ode_residual", Value::of(rmax));
    rep.rows.push_back(r);
  }

  double worst_orth = 0.0;
  for (int n1 = 0; n1 <= numax; ++n1)
    for (int n2 = n1 + 1; n2 <= numax; ++n2) {
      Row r;
      r.set("nubar", Value::null());
      r.set("pair", Value::of(std::to_string(n1) + "," + std::to_string(n2)));
      if (n1 + n2 + 2.0 * (b - 1.0) < -1.0) {
        const double v = orthogonality_integral(n1, n2, a, b);
        worst_orth = std::max(worst_orth, std::abs(v));
        r.set("orthogonality", Value::of(v));
      } else {
        r.set("orthogonality", Value::of("divergent"));
      }
      rep.rows.push_back(r);
    }

  rep.checks.push_back(Check::bounded("ode_residual", worst_ode, 1e-12 * g.tol,
                                      "relative to largest coefficient"));
  rep.checks.push_back(Check::bounded("finite_orthogonality", worst_orth,
                                      1e-8 * g.tol, "convergent pairs only"));
  return emit(rep, g);
}

int run_time_part(const GlobalOpts& g, double ellM, int eps, int numax,
                  const std::string& map_name, double zlo, double zhi,
                  int samples, double tau) {
  if (ellM == 0.0) {
    std::fprintf(stderr, "ellM: must be nonzero\n");
    return 2;
  }
  if (eps != -1 && eps != 1) {
    std::fprintf(stderr, "eps: must be -1 or 1\n");
    return 2;
  }
  if (numax < 0) {
    std::fprintf(stderr, "numax: must be nonnegative\n");
    return 2;
  }
  if (samples < 2 || !(zhi > zlo)) {
    std::fprintf(stderr, "samples/zlo/zhi: need samples >= 2 and zhi > zlo\n");
    return 2;
  }
  TauMap map;
  if (map_name == "trig") map = TauMap::trig_cot;
  else if (map_name == "hyper") map = TauMap::hyper_coth;
  else {
    std::fprintf(stderr, "map: must be 'trig' or 'hyper'\n");
    return 2;
  }
  if (map == TauMap::trig_cot ? !(tau > 0.0 && tau < pi) : !(tau > 0.0)) {
    std::fprintf(stderr, "tau: outside the domain of the chosen map\n");
    return 2;
  }

  Report rep;
  rep.command = "time-part";
  rep.param("ellM", Value::of(ellM));
  rep.param("eps", Value::of(eps));
  rep.param("numax", Value::of(numax));
  rep.param("map", Value::of(map_name));
  rep.param("zlo", Value::of(zlo));
  rep.param("zhi", Value::of(zhi));
  rep.param("samples", Value::of(samples));
  rep.param("tau", Value::of(tau));
  rep.param("tol", Value::of(g.tol));

  const ModelConstants c = model_constants(ellM, eps);
  const int k = eps == -1 ? 1 : 2;

  double worst_ode = 0.0, worst_chain = 0.0, worst_branch = 0.0;
  try {
    for (int nu = 0; nu <= numax; ++nu) {
      const TimeSolution s = time_solution(k, nu, c, map);
      double ode = 0.0, branch = 0.0;
      for (int i = 0; i < samples; ++i) {
        const double z = zlo + (zhi - zlo) * i / (samples - 1);
        ode = std::max(ode, std::abs(temporal_ode_residual(s, z)));
        branch = std::max(branch,
                          std::abs(s.branch_complex(z) - cplx(s.branch(z))));
      }
      double chain = 0.0;
      for (double z : {-3.0, -1.0, 0.5, 2.0})
        chain = std::max(chain, transform_chain_residual(s, z));
      worst_ode = std::max(worst_ode, ode);
      worst_chain = std::max(worst_chain, chain);
      worst_branch = std::max(worst_branch, branch);

      Row r;
      r.set("nubar", Value::of(nu));
      r.set("omega2", Value::of(s.omega2()));
      r.set("ode_residual", Value::of(ode));
      r.set("chain_residual", Value::of(chain));
      r.set("branch_gap", Value::of(branch));
      r.set("T_at_tau", Value::of(s.T_of_tau(tau)));
      r.set("map_covers_real_line", Value::of(s.map_covers_real_line()));
      rep.rows.push_back(r);
    }
  } catch (const DegeneracyError& e) {
    std::fprintf(stderr,
                 "time-part: polynomial degeneracy (vanishing denominator at "
                 "power %d)\n",
                 e.k);
    return 1;
  }

  const auto idr = constants_identity_residuals(c);
  rep.checks.push_back(Check::bounded("temporal_ode_residual", worst_ode,
                                      1e-8 * g.tol, "z-space equation"));
  rep.checks.push_back(Check::bounded("transform_chain", worst_chain,
                                      1e-8 * g.tol,
                                      "peeled polynomial equation"));
  rep.checks.push_back(Check::bounded("branch_product_real_form", worst_branch,
                                      1e-12 * g.tol,
                                      "complex powers vs closed form"));
  rep.checks.push_back(Check::bounded("constants_identities",
                                      std::max(idr.linear, idr.quadratic),
                                      1e-10 * g.tol,
                                      "substitution closure identities"));
  return emit(rep, g);
}

int run_partner_metric(const GlobalOpts& g, double ell, double tau,
                       double theta, double phi) {
  if (!(ell > 0.0)) {
    std::fprintf(stderr, "ell: must be positive\n");
    return 2;
  }
  if (!(tau > 0.0)) {
    std::fprintf(stderr, "tau: must be positive\n");
    return 2;
  }
  if (!(theta > 0.0 && theta < pi)) {
    std::fprintf(stderr, "theta: must lie in (0, pi)\n");
    return 2;
  }
  if (!(phi > 0.0 && phi < pi)) {
    std::fprintf(stderr, "phi: must lie in (0, pi)\n");
    return 2;
  }

  Report rep;
  rep.command = "partner-metric";
  rep.param("ell", Value::of(ell));
  rep.param("tau", Value::of(tau));
  rep.param("theta", Value::of(theta));
  rep.param("phi", Value::of(phi));
  rep.param("tol", Value::of(g.tol));

  const PartnerMetric4 pm = partner_metric(ell, tau, theta, phi);
  const double sh = std::sinh(tau);
  const double want_det = std::pow(ell, 8) * std::pow(sh, 6) *
                          std::sin(theta) * std::sin(theta) * std::sin(phi) *
                          std::sin(phi);
  const auto sig = pm.signature();
  std::string sig_text;
  for (int s : sig) sig_text += s > 0 ? '+' : (s < 0 ? '-' : '0');

  const double ratio = eta1_metric_ratio(ell, tau, theta, phi);
  const double ratio2 = eta1_metric_ratio(2.0 * ell, tau, theta, phi);
  const double ell_power = std::log(ratio2 / ratio) / std::log(2.0);
  const cplx r2 = eta2_metric_ratio(ell, tau, theta);

  Row r;
  r.set("g00", Value::of(pm.diag[0]));
  r.set("g11", Value::of(pm.diag[1]));
  r.set("g22", Value::of(pm.diag[2]));
  r.set("g33", Value::of(pm.diag[3]));
  r.set("minus_det", Value::of(pm.minus_det()));
  r.set("signature", Value::of(sig_text));
  r.set("eta1_ratio", Value::of(ratio));
  r.set("eta1_ratio_ell_power", Value::of(ell_power));
  r.set("eta2_ratio_real", Value::of(r2.real()));
  r.set("eta2_ratio_imag", Value::of(r2.imag()));
  rep.rows.push_back(r);

  rep.checks.push_back(Check::bounded(
      "minus_det_closed_form",
      std::abs(pm.minus_det() - want_det) / want_det, 1e-12 * g.tol,
      "product of diagonal entries"));
  rep.checks.push_back(Check::flag("signature", sig_text == "-+++",
                                   sig_text == "-+++" ? 0.0 : 1.0,
                                   "Lorentzian (-,+,+,+)"));
  double ratio_dev = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double t2 = 0.2 + 2.5 * i / 21.0;
    const double th2 = pi * i / 21.0;
    ratio_dev = std::max(
        ratio_dev, std::abs(eta1_metric_ratio(ell, t2, th2, phi) - ratio));
  }
  rep.checks.push_back(Check::bounded("eta1_ratio_constancy", ratio_dev,
                                      1e-10 * g.tol,
                                      "ratio independent of the point"));
  rep.checks.push_back(
      Check::bounded("eta2_ratio_real_sqrt_ell",
                     std::max(std::abs(r2.imag()),
                              std::abs(r2.real() - std::sqrt(ell))),
                     1e-12 * g.tol, "fourth roots supply the factor i"));
  return emit(rep, g);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"de Sitter Dirac verification tool"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file");
  app.allow_config_extras(CLI::config_extras_mode::error);

  GlobalOpts g;
  app.add_option("--out", g.out, "output file (default: stdout)");
  app.add_option("--format", g.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tol", g.tol, "tolerance multiplier applied to all checks");
  app.add_option("--jobs", g.jobs, "worker threads for independent sweeps");

  double sp_m = 1.0;
  int sp_nmax = 3, sp_grid = 4000;
  CLI::App* spectrum = app.add_subcommand("spectrum", "angular levels vs oracle");
  spectrum->add_option("--m", sp_m, "azimuthal parameter");
  spectrum->add_option("--nmax", sp_nmax, "highest level");
  spectrum->add_option("--grid", sp_grid, "oracle grid size");

  std::string ve_suite = "all";
  CLI::App* verify = app.add_subcommand("verify", "run module invariant suites");
  verify->add_option("--suite", ve_suite,
                     "geometry|susy|romanovski|pseudo|all");

  int ro_numax = 4;
  double ro_a = -2.0, ro_b = -4.0;
  CLI::App* rtable =
      app.add_subcommand("romanovski-table", "coefficients and orthogonality");
  rtable->add_option("--numax", ro_numax, "highest degree");
  rtable->add_option("--a", ro_a, "weight parameter a");
  rtable->add_option("--b", ro_b, "weight parameter b");

  double tp_ellM = 1.0, tp_zlo = -10.0, tp_zhi = 10.0, tp_tau = 1.0;
  int tp_eps = 1, tp_numax = 3, tp_samples = 401;
  std::string tp_map = "trig";
  CLI::App* tpart = app.add_subcommand("time-part", "temporal solutions");
  tpart->add_option("--ellM", tp_ellM, "curvature-mass product");
  tpart->add_option("--eps", tp_eps, "component sign, -1 or 1");
  tpart->add_option("--numax", tp_numax, "highest polynomial degree");
  tpart->add_option("--map", tp_map, "tau-to-z map: trig or hyper");
  tpart->add_option("--zlo", tp_zlo, "lower end of the z sweep");
  tpart->add_option("--zhi", tp_zhi, "upper end of the z sweep");
  tpart->add_option("--samples", tp_samples, "points in the z sweep");
  tpart->add_option("--tau", tp_tau, "sample point for the tau evaluator");

  double pm_ell = 1.0, pm_tau = 1.0, pm_theta = 1.0, pm_phi = 1.0;
  CLI::App* pmetric =
      app.add_subcommand("partner-metric", "generated 4D metric data");
  pmetric->add_option("--ell", pm_ell, "curvature radius");
  pmetric->add_option("--tau", pm_tau, "time coordinate");
  pmetric->add_option("--theta", pm_theta, "polar angle");
  pmetric->add_option("--phi", pm_phi, "second angle");

  // global flags are accepted on either side of the subcommand name
  for (CLI::App* sub : {spectrum, verify, rtable, tpart, pmetric})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (!(g.tol > 0.0)) {
    std::fprintf(stderr, "tol: must be positive\n");
    return 2;
  }
  if (g.jobs < 1) {
    std::fprintf(stderr, "jobs: must be at least 1\n");
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int rc = 2;
  try {
    if (spectrum->parsed()) rc = run_spectrum(g, sp_m, sp_nmax, sp_grid);
    else if (verify->parsed()) rc = run_verify(g, ve_suite);
    else if (rtable->parsed()) rc = run_romanovski_table(g, ro_numax, ro_a, ro_b);
    else if (tpart->parsed())
      rc = run_time_part(g, tp_ellM, tp_eps, tp_numax, tp_map, tp_zlo, tp_zhi,
                         tp_samples, tp_tau);
    else if (pmetric->parsed())
      rc = run_partner_metric(g, pm_ell, pm_tau, pm_theta, pm_phi);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  const auto t1 = std::chrono::steady_clock::now();
  std::fprintf(stderr, "wall_time_seconds %.3f\n",
               std::chrono::duration<double>(t1 - t0).count());
  return rc;
}
