#include "vvc/run.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>

#include "vvc/agmon.hpp"
#include "vvc/bounds.hpp"
#include "vvc/moment.hpp"
#include "vvc/sim.hpp"
#include "vvc/spectral.hpp"
#include "vvc/transport.hpp"
#include "vvc/util.hpp"

namespace vvc {

using nlohmann::json;

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

int check_assumptions_or_fail(const VectorField& field, json& manifest) {
  AssumptionReport rep = validate_assumptions(field);
  json jr;
  jr["a1"] = rep.a1.pass;
  jr["a2"] = rep.a2.pass;
  jr["a3"] = rep.a3.pass;
  jr["a4"] = rep.a4.pass;
  jr["margin"] = rep.margin;
  jr["case"] = rep.case_sign == CaseSign::increasing   ? "increasing"
               : rep.case_sign == CaseSign::decreasing ? "decreasing"
                                                       : "mixed";
  if (!rep.a3.pass) jr["a3_note"] = "V(0) = V(L): symmetric barrier tolerated";
  manifest["assumptions"] = jr;
  if (!rep.hard_pass()) {
    std::cerr << "assumption check failed: items " << rep.failing_items() << "\n";
    return kExitAssumptions;
  }
  return kExitOk;
}

double pick_eps(const RunConfig& cfg) { return cfg.eps.empty() ? 0.05 : cfg.eps.front(); }

}  // namespace

int cmd_bounds(const RunConfig& cfg) {
  VectorField field;
  try {
    field = cfg.field.build();
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kExitConfig;
  }
  json manifest = base_manifest(cfg);
  if (int rc = check_assumptions_or_fail(field, manifest); rc != kExitOk) return rc;

  BoundsReport rep = bounds_report(field, cfg.B_max);
  json jb;
  jb["E0"] = rep.E0;
  jb["Vmax"] = rep.Vmax;
  jb["T1"] = rep.T1;
  jb["T1_arg"] = rep.T1_arg;
  jb["T_limit"] = rep.T_limit;
  jb["T14"] = {{"value", rep.T14.value}, {"arg_E", rep.T14.arg_E}};
  jb["T15"] = {{"value", rep.T15.value},
               {"arg_E", rep.T15.arg_E},
               {"arg_B", rep.T15.arg_B},
               {"B_at_boundary", rep.T15.B_at_boundary}};
  jb["T16"] = rep.T16;
  jb["sup_G14"] = rep.sup_G14;
  jb["m_star"] = rep.m_star;
  jb["kappa0"] = rep.kappa0_value;
  jb["note"] = "lower-bound exponents used for all finite T (asymptotic statements extrapolated)";
  manifest["bounds"] = jb;
  write_text(out_path(cfg, "bounds.json"), manifest.dump(2) + "\n");

  // classical table and the ground-energy weight profile
  Potential pot = potential(field);
  ClassicalTable tab = build_table(pot);
  write_csv(out_path(cfg, "classical.csv"), {"E", "Phi", "T", "calT"},
            {tab.E, tab.phi, tab.period, tab.calT});
  AgmonProfile prof = weight_profiles(field, pot, pot.E0);
  std::vector<double> xs = linspace(0.0, field.L, 513);
  std::vector<double> Vv(xs.size()), dv(xs.size()), Wv(xs.size()), Wtv(xs.size());
  std::vector<double> dg = agmon_distance_grid(pot, pot.E0, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Vv[i] = field.V(xs[i]);
    dv[i] = dg[i];
    Wv[i] = 0.5 * field.f(xs[i]) + dg[i];
    Wtv[i] = 0.5 * field.f(xs[i]) - dg[i];
  }
  write_csv(out_path(cfg, "weights_E0.csv"), {"x", "V", "d", "W", "Wt"},
            {xs, Vv, dv, Wv, Wtv});
  std::cout << "bounds: T_limit=" << rep.T_limit << " T14=" << rep.T14.value
            << " T15=" << rep.T15.value << " T16=" << rep.T16 << "\n";
  return kExitOk;
}

namespace {

struct SpectrumBundle {
  OperatorDiscretization disc;
  Spectrum spec;
  std::size_t k_max = 0;
};

int solve_spectrum(const RunConfig& cfg, const VectorField& field, double eps,
                   SpectrumBundle& out) {
  Potential pot = potential(field);
  const double lam_max = cfg.lambda_max > 0.0 ? cfg.lambda_max : 4.0 * pot.Vmax;
  const std::size_t n = cfg.n_grid > 0 ? cfg.n_grid : suggested_grid(field, eps, lam_max);
  out.disc = discretize(field, eps, n);
  out.k_max = cfg.k_max;
  if (out.k_max > n / 4) {
    std::cerr << "resolution: k_max=" << out.k_max << " exceeds n/4=" << n / 4 << "\n";
    return kExitResolution;
  }
  out.spec = eigenpairs(out.disc, out.k_max);
  return kExitOk;
}

}  // namespace

int cmd_spectrum(const RunConfig& cfg) {
  VectorField field;
  try {
    field = cfg.field.build();
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kExitConfig;
  }
  json manifest = base_manifest(cfg);
  if (int rc = check_assumptions_or_fail(field, manifest); rc != kExitOk) return rc;
  Potential pot = potential(field);
  ClassicalTable tab = build_table(pot);
  std::vector<double> eps_list = cfg.eps.empty() ? std::vector<double>{0.05} : cfg.eps;

  json per_eps = json::array();
  for (double eps : eps_list) {
    SpectrumBundle bundle;
    if (int rc = solve_spectrum(cfg, field, eps, bundle); rc != kExitOk) return rc;
    const Spectrum& spec = bundle.spec;

    std::vector<double> kk(spec.lambda.size());
    for (std::size_t k = 0; k < kk.size(); ++k) kk[k] = static_cast<double>(k);
    std::vector<double> gaps(spec.lambda.size(), 0.0);
    for (std::size_t k = 0; k + 1 < spec.lambda.size(); ++k) gaps[k] = spec.gap[k];
    char name[64];
    std::snprintf(name, sizeof name, "spectrum_eps%g.csv", eps);
    write_csv(out_path(cfg, name), {"k", "lambda", "beta", "gap", "dphi0", "dphiL"},
              {kk, spec.lambda, spec.beta, gaps, spec.dphi0, spec.dphiL});

    json je;
    je["eps"] = eps;
    je["n"] = bundle.disc.n;
    je["h"] = bundle.disc.h;
    je["under_resolved"] = bundle.disc.under_resolved;
    if (!bundle.disc.qf_zero) je["note"] = "q_f != 0: outside spectral theorem hypotheses";
    if (cfg.do_weyl) {
      WeylReport wr = weyl_check(spec, pot, tab, eps);
      je["weyl"] = {{"D_fit", wr.D_fit},
                    {"C_fit", wr.C_fit},
                    {"band_violations", wr.band_violations},
                    {"k_used", wr.k_used},
                    {"k_excluded", wr.k_excluded}};
    }
    if (cfg.do_gap) {
      GapReport gr = gap_check(spec, pot, tab.T1, eps, 0.5);
      je["gap"] = {{"N_obs", gr.N_obs},
                   {"gamma_obs", gr.gamma_obs},
                   {"gamma2_obs", gr.gamma2_obs},
                   {"asymptotic_bound", gr.asymptotic_bound}};
    }
    for (std::size_t k : cfg.dump_eigenfunctions) {
      if (k >= spec.phi.size()) continue;
      char fname[64];
      std::snprintf(fname, sizeof fname, "eigenfunction_eps%g_k%zu.csv", eps, k);
      write_csv(out_path(cfg, fname), {"x", "phi"}, {spec.x, spec.phi[k]});
    }
    per_eps.push_back(je);
  }
  manifest["spectrum"] = per_eps;
  write_text(out_path(cfg, "spectrum.json"), manifest.dump(2) + "\n");
  std::cout << "spectrum: " << eps_list.size() << " viscosity value(s) processed\n";
  return kExitOk;
}

int cmd_localization(const RunConfig& cfg) {
  VectorField field;
  try {
    field = cfg.field.build();
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kExitConfig;
  }
  json manifest = base_manifest(cfg);
  if (int rc = check_assumptions_or_fail(field, manifest); rc != kExitOk) return rc;
  std::vector<double> eps_list = cfg.eps.empty() ? std::vector<double>{0.05} : cfg.eps;
  json per_eps = json::array();
  for (double eps : eps_list) {
    SpectrumBundle bundle;
    if (int rc = solve_spectrum(cfg, field, eps, bundle); rc != kExitOk) return rc;
    LocalizationReport rep = localization_check(bundle.spec, field, eps, cfg.k_set);
    json je;
    je["eps"] = eps;
    je["delta_obs"] = rep.delta_obs;
    json entries = json::array();
    for (const auto& e : rep.entries) {
      entries.push_back({{"k", e.k},
                         {"E", e.E},
                         {"slope", e.slope},
                         {"r2", e.r2},
                         {"flux0", e.flux0},
                         {"dA0", e.dA0},
                         {"delta_flux", e.delta_flux},
                         {"points", e.points},
                         {"floor_hit", e.floor_hit}});
    }
    je["entries"] = entries;
    per_eps.push_back(je);
  }
  manifest["localization"] = per_eps;
  write_text(out_path(cfg, "localization.json"), manifest.dump(2) + "\n");
  std::cout << "localization: done\n";
  return kExitOk;
}

int cmd_control(const RunConfig& cfg) {
  VectorField field;
  try {
    field = cfg.field.build();
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kExitConfig;
  }
  json manifest = base_manifest(cfg);
  if (int rc = check_assumptions_or_fail(field, manifest); rc != kExitOk) return rc;
  const double eps = pick_eps(cfg);
  Potential pot = potential(field);
  BoundsContext ctx(field);
  const double T16 = upper_bound_T16(ctx);
  const double T = cfg.T > 0.0 ? cfg.T : cfg.T_factor * T16;
  double m = cfg.m_fraction;
  if (m < 0.0) {
    m = minimize_F(2.0 * sq(ctx.T1()) / T, pot.E0 * T).m_star;
  }

  SpectrumBundle bundle;
  if (int rc = solve_spectrum(cfg, field, eps, bundle); rc != kExitOk) return rc;
  const std::size_t N_use = std::min<std::size_t>(2 * cfg.N_trunc, bundle.spec.lambda.size());

  // deterministic random initial state on the tracked modes
  std::mt19937 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v0(N_use);
  double nrm = 0.0;
  for (double& c : v0) {
    c = gauss(rng);
    nrm += c * c;
  }
  for (double& c : v0) c /= std::sqrt(nrm);

  try {
    ControlSignal sig =
        synthesize_control(bundle.spec, field, eps, T, m, v0, cfg.N_trunc, ctx.T1());
    ModalResidual ver = verify_control_modal(bundle.spec, field, eps, sig, v0);
    write_csv(out_path(cfg, "control.csv"), {"t", "h"}, {sig.t_grid, sig.h});
    std::vector<double> pred{sig.predicted_bound_noC.lg}, achv{sig.norm_sq.lg};
    write_csv(out_path(cfg, "control_cost.csv"), {"log_predicted_noC", "log_achieved"},
              {pred, achv});
    json jc;
    jc["eps"] = eps;
    jc["T"] = T;
    jc["m"] = m;
    jc["N_trunc"] = cfg.N_trunc;
    jc["modal_residual"] = ver.l2_residual_vs_init;
    jc["max_rel_vs_free"] = ver.max_rel_vs_free;
    jc["log_norm_sq"] = sig.norm_sq.lg;
    jc["log_predicted_noC"] = sig.predicted_bound_noC.lg;
    jc["family_cond"] = sig.family->sine.cond;
    jc["family_residual"] = sig.family->max_residual;
    manifest["control"] = jc;
    write_text(out_path(cfg, "control.json"), manifest.dump(2) + "\n");
    std::cout << "control: modal residual " << ver.l2_residual_vs_init << "\n";
    if (ver.l2_residual_vs_init > 1e-6) return kExitFamily;
  } catch (const IllConditionedFamily& e) {
    std::cerr << "family: " << e.what() << "\n";
    return kExitFamily;
  } catch (const InsufficientFamily& e) {
    std::cerr << "family: " << e.what() << "\n";
    return kExitFamily;
  }
  return kExitOk;
}

int cmd_cost_scan(const RunConfig& cfg) {
  VectorField field;
  try {
    field = cfg.field.build();
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kExitConfig;
  }
  if (cfg.eps.size() < 4) {
    std::cerr << "config: cost-scan needs an eps list with at least 4 values\n";
    return kExitConfig;
  }
  json manifest = base_manifest(cfg);
  if (int rc = check_assumptions_or_fail(field, manifest); rc != kExitOk) return rc;

  BoundsContext ctx(field);
  const double T14 = lower_bound_T14(ctx).value;
  const double T16 = upper_bound_T16(ctx);
  const double T = cfg.T > 0.0 ? cfg.T : 0.5 * (T14 + T16);

  CostScan scan = cost_scan(field, cfg.eps, T, cfg.K_modes);
  std::vector<double> Ts(scan.eps_list.size(), T);
  write_csv(out_path(cfg, "cost_scan.csv"), {"eps", "C0_log", "T"},
            {scan.eps_list, scan.log_C0, Ts});

  const double margin = 0.1 * ctx.pot().E0 * T + 2.0 * scan.band;
  std::string verdict;
  if (!scan.reliable) {
    verdict = "inconclusive";
  } else if (scan.rate >= scan.envelope_lower - margin &&
             scan.rate <= std::max(scan.envelope_upper, 0.0) + margin) {
    verdict = "inside envelope";
  } else {
    verdict = "outside envelope";
  }
  json js;
  js["T"] = T;
  js["K_modes"] = cfg.K_modes;
  js["rate"] = scan.rate;
  js["band"] = scan.band;
  js["r2"] = scan.r2;
  js["reliable"] = scan.reliable;
  js["envelope_lower"] = scan.envelope_lower;
  js["envelope_upper"] = scan.envelope_upper;
  js["K_doubling_shift"] = scan.K_doubling_shift;
  js["verdict"] = verdict;
  manifest["cost_scan"] = js;
  write_text(out_path(cfg, "cost_scan.json"), manifest.dump(2) + "\n");
  std::cout << "cost-scan: rate=" << scan.rate << " verdict=" << verdict << "\n";
  return kExitOk;
}

int cmd_example5(const RunConfig& cfg) {
  if (cfg.field.kind != FieldKind::closed_form_example) {
    std::cerr << "config: example5 command requires the closed-form field kind\n";
    return kExitConfig;
  }
  const double M = cfg.field.M, a = cfg.field.a, L = cfg.field.L;
  if (a <= 0.0) {
    std::cerr << "config: example5 closed forms need a > 0\n";
    return kExitConfig;
  }
  VectorField field = cfg.field.build();
  json manifest = base_manifest(cfg);
  if (int rc = check_assumptions_or_fail(field, manifest); rc != kExitOk) return rc;

  Potential pot = potential(field);
  BoundsContext ctx(field);
  const double fplus_half =
      (L / 8.0) * std::sqrt(a * a * L * L + 4.0 * M * M) +
      (M * M / (2.0 * a)) * std::asinh(a * L / (2.0 * M));

  struct Row {
    const char* name;
    double computed, closed;
  };
  const GeometricConstants gc = ctx.constants(pot.E0, 0.0);
  const bool plus = cfg.field.sign == Sign::plus;
  std::vector<Row> rows = {
      {"T_limit", limit_transport_time(field), (2.0 / a) * std::asinh(a * L / (2.0 * M))},
      {"T1", ctx.T1(), M_PI * std::sqrt(L * L + 4.0 * M * M / (a * a))},
      {"E0", pot.E0, M * M / 4.0},
      {"d_E0_at_0", agmon_distance(pot, pot.E0, 0.0), a * L * L / 16.0},
      {"G14_E0", gc.G14, plus ? 0.0 : fplus_half},
      {"G15_E0", gc.G15, plus ? a * L * L / 8.0 - fplus_half : a * L * L / 8.0},
  };
  json jt = json::array();
  bool all_ok = true;
  for (const Row& r : rows) {
    const double denom = std::max(std::fabs(r.closed), 1.0);
    const double rel = std::fabs(r.computed - r.closed) / denom;
    all_ok = all_ok && rel < 1e-8;
    jt.push_back({{"name", r.name}, {"computed", r.computed}, {"closed_form", r.closed},
                  {"rel_error", rel}});
    std::cout << r.name << ": computed " << format_double(r.computed) << " closed "
              << format_double(r.closed) << "\n";
  }
  manifest["example5"] = jt;
  manifest["all_match_1e-8"] = all_ok;
  write_text(out_path(cfg, "example5.json"), manifest.dump(2) + "\n");
  return all_ok ? kExitOk : 1;
}

int run_command(const std::string& name, const RunConfig& cfg) {
  try {
    if (name == "bounds") return cmd_bounds(cfg);
    if (name == "spectrum") return cmd_spectrum(cfg);
    if (name == "localization") return cmd_localization(cfg);
    if (name == "control") return cmd_control(cfg);
    if (name == "cost-scan") return cmd_cost_scan(cfg);
    if (name == "example5") return cmd_example5(cfg);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const AssumptionViolation& e) {
    std::cerr << e.what() << "\n";
    return kExitAssumptions;
  } catch (const IllConditionedFamily& e) {
    std::cerr << e.what() << "\n";
    return kExitFamily;
  } catch (const InsufficientFamily& e) {
    std::cerr << e.what() << "\n";
    return kExitFamily;
  }
  std::cerr << "unknown command '" << name << "'\n";
  return kExitConfig;
}

}  // namespace vvc
