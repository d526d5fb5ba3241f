#include "sladm_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "sladm/sladm.hpp"

namespace sladm::cli {

namespace {

using nlohmann::json;
using realline::dump_json;
using realline::format_double;

std::string str(realline::Grade g) { return std::string(realline::to_string(g)); }

std::vector<double> abscissae(const RunConfig& cfg) {
  if (!cfg.probes.empty()) return cfg.probes;
  std::vector<double> xs(static_cast<std::size_t>(cfg.samples));
  for (int i = 0; i < cfg.samples; ++i) {
    xs[static_cast<std::size_t>(i)] = cfg.lo + (cfg.hi - cfg.lo) * i / (cfg.samples - 1);
  }
  return xs;
}

json problem_json(const RunConfig& cfg) {
  return {{"preset", cfg.preset}, {"q", cfg.q},   {"mu", cfg.mu},
          {"theta", cfg.theta},   {"f", cfg.f},   {"p", cfg.p}};
}

json kappa_table(const localscale::Decomposition& parts, const std::vector<double>& xs) {
  json rows = json::array();
  for (double x : xs) {
    const auto k1 = localscale::kappa1(parts, x);
    const auto k2 = localscale::kappa2(parts, x);
    rows.push_back({{"x", x},
                    {"kappa1", k1.value},
                    {"kappa2", k2.value},
                    {"kappa1_sqrt1px2", k1.value * std::sqrt(1.0 + x * x)},
                    {"stable", k1.stable && k2.stable}});
  }
  return rows;
}

}  // namespace

CommandResult cmd_scale(const RunConfig& cfg) {
  const Problem pr = make_problem(cfg);
  const localscale::LocalScale scale(pr.q);
  const auto xs = abscissae(cfg);
  const auto a = numerics(cfg);

  CommandResult out;
  out.files.push_back({cfg.profile, localscale::scale_profile(scale, xs).str()});

  const auto probes = realline::default_probes(std::min(cfg.max_exponent, 20), true);
  const auto inv = localscale::check_scale_invariants(scale, probes);
  const auto h = localscale::class_H_check(scale, a.grid, cfg.tol_H);
  double dmin = INFINITY, dmax = 0.0;
  for (double x : xs) {
    dmin = std::min(dmin, scale.d(x));
    dmax = std::max(dmax, scale.d(x));
  }
  out.report = {{"command", "scale"},
                {"problem", problem_json(cfg)},
                {"d_at_0", scale.d(0.0)},
                {"d_hat_at_0", scale.d_hat(0.0)},
                {"q_star_at_0", scale.q_star(0.0)},
                {"d_min", dmin},
                {"d_max", dmax},
                {"in_H", str(h.in_H)},
                {"nu_profile", admissibility::to_json(h.abs_nu)},
                {"invariants",
                 {{"probes", inv.probes},
                  {"checks", inv.checks},
                  {"violations", inv.violations},
                  {"witnesses", inv.witnesses}}}};
  if (pr.q->decomposition()) {
    const auto asym = localscale::asymptotic_d_check(scale, probes);
    out.report["asymptotic"] = {{"ratio_min", asym.ratio_min},
                                {"ratio_max", asym.ratio_max},
                                {"violations", asym.violations}};
  }
  return out;
}

CommandResult cmd_fss(const RunConfig& cfg) {
  const Problem pr = make_problem(cfg);
  const localscale::LocalScale scale(pr.q);
  const auto fs = std::make_shared<const fss::FundamentalSystem>(
      fss::build_window(scale, cfg.lo, cfg.hi, {}, 0.5 * (cfg.lo + cfg.hi)));
  fss::FssAtlas atlas(scale);
  atlas.add(fs);

  const auto xs = abscissae(cfg);
  const auto st = fss::check_structure(atlas, xs);
  const double dh = fss::davies_harrell_check(*fs, cfg.lo, cfg.hi);

  CommandResult out;
  realline::CsvWriter csv({"x", "u", "v", "rho", "log_u", "log_v"});
  for (double x : xs) csv.add_row({x, fs->u(x), fs->v(x), fs->rho(x), fs->log_u(x), fs->log_v(x)});
  out.files.push_back({cfg.profile, csv.str()});
  out.report = {{"command", "fss"},
                {"problem", problem_json(cfg)},
                {"lo", fs->lo()},
                {"hi", fs->hi()},
                {"window_lo", fs->window_lo()},
                {"window_hi", fs->window_hi()},
                {"x0", fs->x0()},
                {"steps", fs->steps()},
                {"reduced_confidence", fs->reduced_confidence()},
                {"wronskian_residual", fs->wronskian_residual()},
                {"davies_harrell_deviation", dh},
                {"structure",
                 {{"probes", st.probes},
                  {"violations", st.violations},
                  {"rho_over_d_min", st.min_rho_over_d},
                  {"rho_over_d_max", st.max_rho_over_d},
                  {"witnesses", st.witnesses}}}};
  return out;
}

CommandResult cmd_solve(const RunConfig& cfg) {
  const Problem pr = make_problem(cfg);
  const localscale::LocalScale scale(pr.q);
  const auto fs = fss::build_window(scale, cfg.lo, cfg.hi, {}, 0.5 * (cfg.lo + cfg.hi));
  fss::GreenConfig gc;
  gc.samples = cfg.samples;
  const auto sol =
      fss::apply_green(fs, pr.f, pr.weights.p, pr.weights.mu, pr.weights.theta, *pr.q, gc);

  CommandResult out;
  out.files.push_back({cfg.profile, fss::fss_profile(fs, &sol).str()});
  auto verdict = [](realline::Verdict v) { return std::string(realline::to_string(v)); };
  out.report = {{"command", "solve"},
                {"problem", problem_json(cfg)},
                {"x0", fs.x0()},
                {"wronskian_residual", fs.wronskian_residual()},
                {"residual_sup", sol.residual_sup},
                {"f_sup", sol.f_sup},
                {"norms",
                 {{"y_mu", sol.y_norm.value},
                  {"y_mu_verdict", verdict(sol.y_norm.verdict)},
                  {"f_theta", sol.f_norm.value},
                  {"f_theta_verdict", verdict(sol.f_norm.verdict)},
                  {"ratio", sol.ratio},
                  {"f_in_space", sol.f_in_space}}},
                {"tail_model_used", sol.tail_model_used}};
  const std::size_t mid = sol.grid.size() / 2;
  out.report["y_at_centre"] = sol.y.empty() ? 0.0 : sol.y[mid];
  return out;
}

namespace {

json stability_json(const admissibility::StabilityReport& s, double bound) {
  json rows = json::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"kind", r.kind},
                    {"centre", r.centre},
                    {"width", r.width},
                    {"ratio", r.ratio},
                    {"skipped", r.skipped}});
  }
  return {{"max_ratio", s.max_ratio},
          {"bound", bound},
          {"within_bound", s.max_ratio <= bound},
          {"skipped", s.skipped},
          {"rows", rows}};
}

}  // namespace

CommandResult cmd_verdict(const RunConfig& cfg) {
  const Problem pr = make_problem(cfg);
  const localscale::LocalScale scale(pr.q);
  const auto a = numerics(cfg);
  const auto r = admissibility::verdict(scale, pr.weights, a);

  CommandResult out;
  out.report = admissibility::to_json(r);
  out.report["command"] = "verdict";
  out.report["problem"] = problem_json(cfg);
  if (cfg.stability_trials > 0 && r.verdict == admissibility::Verdict::admissible) {
    fss::FssAtlas atlas(scale, a.fss);
    const auto s =
        admissibility::stability_probe(atlas, pr.weights, cfg.stability_trials, cfg.seed);
    out.report["stability"] = stability_json(s, r.s.bound.upper * 1.05);
  }
  out.exit_code = admissibility::exit_code(r.verdict);
  return out;
}

CommandResult cmd_example6(const RunConfig& base) {
  RunConfig cfg = base;
  apply_preset(cfg, "example6");
  const Problem pr = make_problem(cfg);
  const localscale::LocalScale scale(pr.q);
  const auto a = numerics(cfg);
  const auto& parts = *pr.q->decomposition();

  json checks = json::object();
  bool all_ok = true;
  auto check = [&](const char* name, bool ok) {
    checks[name] = ok;
    all_ok = all_ok && ok;
  };

  // Claim A: the unweighted pair is not admissible.
  double sup_small = 0.0, sup_large = 0.0;
  for (double x : realline::default_probes(20, true)) {
    const double dh = scale.d_hat(x);
    if (std::fabs(x) <= 1e2) sup_small = std::max(sup_small, dh);
    if (std::fabs(x) <= 1e6) sup_large = std::max(sup_large, dh);
  }
  for (double x : {-1e2, 1e2, -1e6, 1e6}) {
    const double dh = scale.d_hat(x);
    if (std::fabs(x) <= 1e2) sup_small = std::max(sup_small, dh);
    sup_large = std::max(sup_large, dh);
  }
  const double q0_far = pr.q->integral(1e6 - 1.0, 1e6 + 1.0);
  const auto solv = admissibility::lp_solvability(scale, a);
  hardy::HardyWeights ones{[](double) { return 1.0; }, [](double) { return 1.0; }, cfg.p};
  const auto unweighted = admissibility::verdict(scale, ones, a);
  check("d_hat_growth_factor_ge_9", sup_large / sup_small >= 9.0);
  check("q0_1_at_1e6_le_1e-2", q0_far <= 1e-2);
  check("lp_solvability_fail", solv.grade == realline::Grade::fail);
  check("unweighted_not_admissible",
        unweighted.verdict == admissibility::Verdict::not_admissible);

  // Claim B: the weighted pair is admissible.
  const std::vector<double> far{1e3, 1e4, 1e5, 1e6};
  json d_table = json::array();
  double worst_ratio = 0.0;
  for (double x : far) {
    const double r = scale.d(x) * std::pow(1.0 + x * x, -0.25);
    worst_ratio = std::max(worst_ratio, std::fabs(r - 1.0));
    d_table.push_back({{"x", x}, {"d", scale.d(x)}, {"d_over_quarter_power", r}});
  }
  const json kappas = kappa_table(parts, far);
  double kappa1_scaled = 0.0;
  for (const auto& row : kappas) {
    kappa1_scaled = std::max(kappa1_scaled, row["kappa1_sqrt1px2"].get<double>());
  }
  const auto weighted = admissibility::verdict(scale, pr.weights, a);
  check("d_ratio_within_0.05", worst_ratio <= 0.05);
  check("kappa1_sqrt1px2_le_10", kappa1_scaled <= 10.0);
  check("m_in_0.5_2", weighted.m.value >= 0.5 && weighted.m.value <= 2.0);
  check("weighted_admissible", weighted.verdict == admissibility::Verdict::admissible);

  CommandResult out;
  out.report = {{"command", "example6"},
                {"problem", problem_json(cfg)},
                {"claim_A",
                 {{"d_hat_running_sup_1e2", sup_small},
                  {"d_hat_running_sup_1e6", sup_large},
                  {"growth_factor", sup_large / sup_small},
                  {"q0_1_at_1e6", q0_far},
                  {"lp_solvable", solv.grade == realline::Grade::pass},
                  {"lp_solvability", str(solv.grade)},
                  {"unweighted_verdict", std::string(admissibility::to_string(unweighted.verdict))},
                  {"unweighted_m", unweighted.m.value}}},
                {"claim_B",
                 {{"d_ratio_table", d_table},
                  {"kappa_table", kappas},
                  {"kappa_near", kappa_table(parts, {0.0, 1.0, 2.0, 4.0, 8.0})},
                  {"m_value", weighted.m.value},
                  {"verdict", std::string(admissibility::to_string(weighted.verdict))},
                  {"report", admissibility::to_json(weighted)}}},
                {"checks", checks},
                {"all_checks_pass", all_ok}};
  if (cfg.stability_trials > 0) {
    fss::FssAtlas atlas(scale, a.fss);
    const auto st =
        admissibility::stability_probe(atlas, pr.weights, cfg.stability_trials, cfg.seed);
    const double bound = weighted.s.bound.upper * 1.05;
    out.report["stability"] = stability_json(st, bound);
    check("stability_within_s_upper", st.max_ratio <= bound);
    out.report["checks"] = checks;
    out.report["all_checks_pass"] = all_ok;
  }
  out.exit_code = all_ok ? 0 : 1;
  return out;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Admissibility of weighted L_p pairs for -y'' + q y = f on the real line",
               "sladm"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir = ".", probes, preset;
  std::uint64_t seed = 0;
  bool json_only = false;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out", out_dir, "directory for CSV and JSON files");
  app.add_option("--probes", probes, "comma separated abscissae");
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomized probes");
  app.add_option("--preset", preset, "constant | quadratic | periodic | example6");
  app.add_flag("--json-only", json_only, "print the JSON report, write no files");

  using Command = CommandResult (*)(const RunConfig&);
  const std::vector<std::pair<std::string, Command>> commands{
      {"scale", cmd_scale},     {"fss", cmd_fss},           {"solve", cmd_solve},
      {"verdict", cmd_verdict}, {"example6", cmd_example6}};
  const std::vector<std::string> help{
      "local scale profile", "fundamental system on [lo, hi]", "apply the Green operator",
      "admissibility report", "run the built-in example end to end"};
  for (std::size_t i = 0; i < commands.size(); ++i) app.add_subcommand(commands[i].first, help[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    RunConfig cfg;
    if (!preset.empty()) apply_preset(cfg, preset);
    if (!config_path.empty()) cfg = load_config(config_path, cfg);
    if (!probes.empty()) cfg.probes = parse_probe_list(probes);
    if (seed_opt->count() > 0) cfg.seed = seed;

    Command run = nullptr;
    for (const auto& [name, fn] : commands) {
      if (app.got_subcommand(name)) run = fn;
    }
    CommandResult result = run(cfg);
    const std::string report = dump_json(result.report);
    if (!json_only) {
      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir);
      result.files.push_back({cfg.report, report});
      for (const auto& f : result.files) {
        std::ofstream file(dir / f.name, std::ios::binary);
        if (!file) throw ConfigError("cannot write " + (dir / f.name).string());
        file << f.content;
      }
    }
    out << report;
    return result.exit_code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace sladm::cli
