#include "commands.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>

#include "posikit/error.hpp"

namespace posikit::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) { return fmt::format("{}", v); }

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out.precision(17);
  return out;
}

void check_finite(const Field& u, double t) {
  for (double v : u.values()) {
    if (!std::isfinite(v)) throw NumericalFailure(fmt::format("non-finite solution at t = {}", t));
  }
}

void snapshot(const fs::path& dir, const std::string& name, long step, const Field& u, const Grid& g,
              double t) {
  auto out = open_output(dir / fmt::format("{}_{:06d}.txt", name, step));
  write_snapshot(out, u, g, t);
}

bool snapshot_due(long step, long total, long every) {
  return step == 0 || step == total || (every > 0 && step % every == 0);
}

// Ledgers audit the energy statements, which assume no explicit source.
bool ledger_applies(const RunConfig& cfg) { return cfg.model != ModelId::allen_cahn; }

StepOptions step_options(const RunConfig& cfg, Variant variant) {
  StepOptions o;
  o.order = cfg.order;
  o.dt = cfg.dt;
  o.variant = variant;
  o.lower_bound = cfg.lower_bound;
  o.solver = cfg.solver;
  o.secant = cfg.secant;
  return o;
}

int solve_pnp(const RunConfig& cfg, const fs::path& out) {
  const PnpModel model(cfg.pnp);
  const Grid& g = *model.grid();
  PnpState state = pnp_initial_state(model, cfg.order);
  PnpStepOptions opts{cfg.order, cfg.dt, cfg.solver, cfg.secant};
  const long steps = steps_to_reach(cfg.horizon, cfg.dt);
  const fs::path snaps = out / "snapshots";
  fs::create_directories(snaps);

  auto log = open_output(out / "run.csv");
  auto pnp_log = open_output(out / "run_pnp.csv");
  write_step_log_header(log);
  pnp_log << "t,mass_p,mass_n,min_p,min_n,max_abs_p_minus_n,mean_phi,max_abs_phi,xi_p,xi_n,"
             "active_p,active_n\n";
  auto write_pnp_row = [&](double t, double xi_p, double xi_n, std::size_t ap, std::size_t an) {
    Field diff = state.p.u();
    diff -= state.n.u();
    pnp_log << num(t) << ',' << num(mass(state.p.u(), g)) << ',' << num(mass(state.n.u(), g)) << ','
            << num(min_active(state.p.u(), g)) << ',' << num(min_active(state.n.u(), g)) << ','
            << num(max_abs_active(diff, g)) << ',' << num(mass(state.phi, g) / g.measure()) << ','
            << num(max_abs_active(state.phi, g)) << ',' << num(xi_p) << ',' << num(xi_n) << ','
            << ap << ',' << an << '\n';
  };
  write_step_log_row(log, summarize_initial(state.p.u(), g));
  write_pnp_row(0.0, 0.0, 0.0, 0, 0);
  snapshot(snaps, "p", 0, state.p.u(), g, 0.0);
  snapshot(snaps, "n", 0, state.n.u(), g, 0.0);
  snapshot(snaps, "phi", 0, state.phi, g, 0.0);

  try {
    for (long s = 1; s <= steps; ++s) {
      const PnpStepResult r = pnp_step(state, model, opts);
      check_finite(state.p.u(), r.time);
      check_finite(state.n.u(), r.time);
      StepDiagnostics d = summarize_initial(state.p.u(), g, r.time);
      d.xi = r.p.xi_next;
      d.secant_iterations = r.p.secant_iterations;
      d.active_count = r.p.active_count;
      write_step_log_row(log, d);
      write_pnp_row(r.time, r.p.xi_next, r.n.xi_next, r.p.active_count, r.n.active_count);
      if (snapshot_due(s, steps, cfg.snapshot_every)) {
        snapshot(snaps, "p", s, state.p.u(), g, r.time);
        snapshot(snaps, "n", s, state.n.u(), g, r.time);
        snapshot(snaps, "phi", s, state.phi, g, r.time);
      }
    }
  } catch (const NumericalFailure& e) {
    std::cerr << "posikit: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

struct VariantRun {
  Variant variant;
  std::vector<StepDiagnostics> rows;
  std::vector<double> errors;
  double first_negative_time = kNaN;
  double blowup_time = kNaN;
  std::string failure;
};

VariantRun run_variant(const RunConfig& cfg, const Model& model, Variant variant) {
  const Grid& g = *model.grid();
  VariantRun run{variant, {}, {}, kNaN, kNaN, {}};
  const Field u0 = model.initial_condition();
  History hist(g, u0, static_cast<std::size_t>(cfg.order));
  const StepOptions opts = step_options(cfg, variant);
  const long steps = steps_to_reach(cfg.horizon, cfg.dt);
  const double blowup_level = 1e6 * std::max(max_abs_active(u0, g), 1.0);

  auto error_at = [&](const Field& u, double t) {
    const auto exact = model.exact_solution(t);
    if (!exact) return kNaN;
    Field e = u;
    e -= *exact;
    return norm(e, g);
  };
  run.rows.push_back(summarize_initial(u0, g));
  run.errors.push_back(error_at(u0, 0.0));
  for (long s = 1; s <= steps; ++s) {
    try {
      const StepRecord rec = step(hist, model, opts);
      check_finite(rec.u_next, rec.time);
      if (max_abs_active(rec.u_next, g) > blowup_level) {
        throw NumericalFailure(fmt::format("solution exceeded {} at t = {}", blowup_level, rec.time));
      }
      run.rows.push_back(summarize(rec, g));
      run.errors.push_back(error_at(rec.u_next, rec.time));
      if (std::isnan(run.first_negative_time) && run.rows.back().min_u < 0.0) {
        run.first_negative_time = rec.time;
      }
    } catch (const NumericalFailure& e) {
      run.blowup_time = hist.time() + cfg.dt;
      run.failure = e.what();
      break;
    }
  }
  return run;
}

}  // namespace

std::unique_ptr<Model> make_model(const RunConfig& cfg) {
  switch (cfg.model) {
    case ModelId::allen_cahn:
      return std::make_unique<AllenCahnModel>(cfg.allen_cahn);
    case ModelId::pme:
      return std::make_unique<PorousMediumModel>(cfg.pme);
    case ModelId::lubrication:
      return std::make_unique<LubricationModel>(cfg.lubrication);
    case ModelId::pnp:
      break;
  }
  throw ConfigError("run.model", "the PNP system is not a single-field model");
}

int cmd_solve(const RunConfig& cfg, const fs::path& out) {
  fs::create_directories(out);
  if (cfg.model == ModelId::pnp) return solve_pnp(cfg, out);

  const auto model = make_model(cfg);
  const Grid& g = *model->grid();
  History hist(g, model->initial_condition(), static_cast<std::size_t>(cfg.order));
  const StepOptions opts = step_options(cfg, cfg.variant);
  const long steps = steps_to_reach(cfg.horizon, cfg.dt);

  std::optional<EnergyLedger> ledger;
  if (const auto kind = ledger_kind_for(cfg.variant, cfg.order); kind && ledger_applies(cfg)) {
    ledger.emplace(*kind, hist.u(), g, cfg.dt);
  }

  const fs::path snaps = out / "snapshots";
  fs::create_directories(snaps);
  auto log = open_output(out / "run.csv");
  write_step_log_header(log);
  write_step_log_row(log, summarize_initial(hist.u(), g, hist.time()));
  snapshot(snaps, "u", 0, hist.u(), g, hist.time());

  long s = 0;
  try {
    advance(hist, *model, opts, steps, [&](const StepRecord& rec, const Field& u_prev) {
      ++s;
      check_finite(rec.u_next, rec.time);
      if (ledger) ledger->update(u_prev, rec, g);
      write_step_log_row(log, summarize(rec, g, ledger ? &*ledger : nullptr));
      if (snapshot_due(s, steps, cfg.snapshot_every)) snapshot(snaps, "u", s, rec.u_next, g, rec.time);
    });
  } catch (const NumericalFailure& e) {
    log.flush();
    std::cerr << "posikit: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_convergence(const RunConfig& cfg, const fs::path& out) {
  if (cfg.model == ModelId::pnp) {
    throw ConfigError("run.model", "convergence studies need a single-field model");
  }
  if (cfg.dts.empty()) throw ConfigError("convergence.dts", "required for the convergence command");
  for (double dt : cfg.dts) {
    try {
      (void)steps_to_reach(cfg.horizon, dt);
    } catch (const InvalidArgument& e) {
      throw ConfigError("convergence.dts", e.what());
    }
  }
  fs::create_directories(out);
  const auto model = make_model(cfg);

  StepOptions ref;
  ref.order = cfg.reference.order;
  ref.dt = cfg.reference.dt;
  ref.variant = cfg.reference.variant;
  ref.lower_bound = cfg.lower_bound;
  ref.solver = cfg.solver;
  ref.secant = cfg.secant;
  try {
    const Field u_ref = run_to_horizon(*model, ref, cfg.horizon);
    for (int k : cfg.orders) {
      StudySpec study;
      study.order = k;
      study.variant = cfg.variant;
      study.dts = cfg.dts;
      study.horizon = cfg.horizon;
      study.lower_bound = cfg.lower_bound;
      study.solver = cfg.solver;
      const auto rows = convergence_study(*model, study, u_ref);
      auto csv = open_output(out / fmt::format("convergence_k{}.csv", k));
      write_convergence_csv(csv, rows);
    }
  } catch (const NumericalFailure& e) {
    std::cerr << "posikit: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg, const fs::path& out) {
  if (cfg.model == ModelId::pnp) {
    throw ConfigError("run.model", "compare needs a single-field model");
  }
  fs::create_directories(out);
  const auto model = make_model(cfg);
  std::vector<VariantRun> runs;
  for (Variant v : cfg.variants) runs.push_back(run_variant(cfg, *model, v));

  auto csv = open_output(out / "compare.csv");
  csv << "t";
  for (const auto& r : runs) {
    const auto v = to_string(r.variant);
    csv << fmt::format(",mass_{0},min_u_{0},max_u_{0},norm_u_{0},active_count_{0},l2_error_{0}", v);
  }
  csv << '\n';
  const long steps = steps_to_reach(cfg.horizon, cfg.dt);
  for (long s = 0; s <= steps; ++s) {
    csv << num(static_cast<double>(s) * cfg.dt);
    for (const auto& r : runs) {
      const auto i = static_cast<std::size_t>(s);
      if (i < r.rows.size()) {
        const auto& d = r.rows[i];
        csv << ',' << num(d.mass) << ',' << num(d.min_u) << ',' << num(d.max_u) << ','
            << num(d.norm_u) << ',' << d.active_count << ',' << num(r.errors[i]);
      } else {
        csv << ",nan,nan,nan,nan,nan,nan";
      }
    }
    csv << '\n';
  }

  auto summary = open_output(out / "compare_summary.csv");
  summary << "variant,steps_completed,first_negative_time,blowup_time,initial_mass,final_mass,"
             "final_min_u,final_l2_error\n";
  for (const auto& r : runs) {
    summary << to_string(r.variant) << ',' << r.rows.size() - 1 << ',' << num(r.first_negative_time)
            << ',' << num(r.blowup_time) << ',' << num(r.rows.front().mass) << ','
            << num(r.rows.back().mass) << ',' << num(r.rows.back().min_u) << ','
            << num(r.errors.back()) << '\n';
    if (!r.failure.empty()) {
      std::cerr << "posikit: variant " << to_string(r.variant) << " stopped: " << r.failure << '\n';
    }
  }
  return kExitOk;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Positivity-preserving time integration of parabolic PDEs"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  for (const char* name : {"solve", "convergence", "compare"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "Configuration file")->required();
    sub->add_option("--out", out_dir, "Output directory");
  }
  app.get_subcommand("solve")->description("Run one simulation and write run.csv and snapshots");
  app.get_subcommand("convergence")->description("Time-step convergence study");
  app.get_subcommand("compare")->description("Run several correction variants side by side");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const RunConfig cfg = parse_config_file(config_path);
    fs::path out = out_dir;
    if (out.empty()) {
      if (const char* env = std::getenv("POSIKIT_OUT"); env && *env) out = env;
    }
    if (out.empty()) out = cfg.out.empty() ? fs::path("out") : fs::path(cfg.out);

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "solve") return cmd_solve(cfg, out);
    if (cmd == "convergence") return cmd_convergence(cfg, out);
    return cmd_compare(cfg, out);
  } catch (const ConfigError& e) {
    std::cerr << "posikit: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "posikit: invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    std::cerr << "posikit: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "posikit: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace posikit::cli
