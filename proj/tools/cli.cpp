#include "cli.hpp"

#include "sktspec/conditions.hpp"
#include "sktspec/integrate.hpp"
#include "sktspec/json_io.hpp"
#include "sktspec/lyapunov.hpp"
#include "sktspec/model.hpp"
#include "sktspec/spectral.hpp"
#include "sktspec/sweep.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

namespace skt::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string source;
  std::string params_path;
  std::string preset_name;
  bool no_reactions = false;

  RunConfig run;
  std::string ic = "constant:0.6,0.3";
  std::string out_dir;
  double k_max = 2.0;
  double level = 10.0;
  std::size_t samples = 10000;
  int threads = 0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ModelParams resolve_params(const Options& o) {
  const int given = !o.source.empty() + !o.params_path.empty() + !o.preset_name.empty();
  if (given == 0) throw UsageError("no parameters given: pass a preset name, --preset or --params FILE");
  if (given > 1) throw UsageError("parameters given more than once");

  ModelParams p;
  if (!o.preset_name.empty()) {
    const auto pr = preset(o.preset_name);
    if (!pr) throw UsageError("unknown preset '" + o.preset_name + "'");
    p = *pr;
  } else if (!o.params_path.empty()) {
    p = load_params(o.params_path);
  } else if (const auto pr = preset(o.source)) {
    p = *pr;
  } else {
    p = load_params(o.source);
  }
  if (o.no_reactions) p = p.without_reactions();
  if (const auto errors = validate(p, !o.no_reactions); !errors.empty()) {
    std::string msg = "invalid parameters:";
    for (const auto& e : errors) msg += " " + e + ";";
    msg.pop_back();
    throw UsageError(msg);
  }
  return p;
}

void add_source(CLI::App& cmd, Options& o) {
  cmd.add_option("source", o.source, "Preset name (case1, case2) or parameter file");
  cmd.add_option("--params", o.params_path, "Parameter JSON file");
  cmd.add_option("--preset", o.preset_name, "Built-in parameter set");
  cmd.add_flag("--no-reactions", o.no_reactions, "Zero every reaction coefficient");
}

void add_run_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--n", o.run.n, "Truncation order")->capture_default_str();
  cmd.add_option("--tmax", o.run.t_max, "Final time")->capture_default_str();
  cmd.add_option("--rtol", o.run.rtol, "Relative tolerance")->capture_default_str();
  cmd.add_option("--atol", o.run.atol, "Absolute tolerance")->capture_default_str();
  cmd.add_option("--snapshot-dt", o.run.snapshot_dt, "Output interval")->capture_default_str();
  cmd.add_option("--steady-tol", o.run.steady_tol, "Steady-state threshold")->capture_default_str();
  cmd.add_option("--blowup", o.run.blowup_threshold, "Sup-norm blow-up cap")->capture_default_str();
  cmd.add_option("--max-steps", o.run.max_steps, "Step budget")->capture_default_str();
  cmd.add_option("--seed", o.run.seed, "Seed")->capture_default_str();
}

void require_valid(const RunConfig& c) {
  if (const auto errors = validate(c); !errors.empty()) throw UsageError("invalid run options: " + errors.front());
}

int outcome_exit(Outcome o) {
  switch (o) {
    case Outcome::steady_state:
    case Outcome::t_max_reached: return ok;
    case Outcome::blow_up: return blow_up;
    case Outcome::step_budget_exhausted: return budget;
  }
  return error;
}

int cmd_check(const Options& o, std::ostream& out) {
  const ConditionReport r = check_conditions(resolve_params(o));
  out << dump(to_json(r));
  return r.theorem_2_2_applies ? ok : not_satisfied;
}

int cmd_certify(const Options& o, std::ostream& out) {
  if (!(o.k_max > 1.0)) throw UsageError("--kmax must be > 1");
  const ModelParams p = resolve_params(o);
  CertificateSearchConfig cfg;
  cfg.k_max = o.k_max;
  const CertificateSearch s = find_certificate(p, cfg);
  Json j = to_json(s);
  if (s.cert) {
    const SignReport sign = check_reaction_sign(p, *s.cert, o.level, o.samples, o.run.seed);
    const Json sj = to_json(sign);
    for (const auto& [key, value] : sj.items()) j[key] = value;
  } else {
    j["feasible"] = false;
  }
  out << dump(j);
  return s.status == CertificateStatus::found ? ok : not_satisfied;
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  const ModelParams p = resolve_params(o);
  require_valid(o.run);
  const InitialPair ic = parse_initial(o.ic);
  const fs::path dir = o.out_dir.empty() ? fs::path("sktspec_run") : fs::path(o.out_dir);
  const RunResult r = run(p, o.run, ic.u, ic.v);
  write_run(dir, p, o.run, ic, r);

  Json summary;
  summary["outcome"] = to_string(r.outcome);
  summary["t_end"] = r.final_state.t;
  summary["steps"] = r.steps;
  summary["final"] = to_json(r.timeseries.back());
  if (const auto eq = coexistence_steady_state(p)) summary["deviation_from_equilibrium"] = sup_deviation(r.final_state, eq);
  summary["manifest"] = (dir / "manifest.json").string();
  out << dump(summary);
  if (!r.message.empty()) err << r.message << '\n';
  return outcome_exit(r.outcome);
}

std::string format_row(const std::string& a, const std::string& b, const std::string& c, const std::string& d) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-4s %-4s %-22s %s", a.c_str(), b.c_str(), c.c_str(), d.c_str());
  return buf;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const ModelParams p = resolve_params(o);
  require_valid(o.run);
  const fs::path dir = o.out_dir.empty() ? fs::path("sktspec_sweep") : fs::path(o.out_dir);
  const SweepResult s = sweep(p, o.run, o.threads);
  const auto& ics = canonical_ics();
  const auto descriptor = [&](const std::string& name) {
    return std::find_if(ics.begin(), ics.end(), [&](const NamedIC& n) { return n.name == name; })->descriptor;
  };

  int code = ok;
  const auto escalate = [&](int c) {
    // error outranks blow-up, which outranks budget exhaustion
    static constexpr int rank[] = {0, 3, 0, 2, 1};
    if (rank[c] > rank[code]) code = c;
  };

  Json summary;
  summary["equilibrium"] = s.equilibrium ? Json{{"u", s.equilibrium->u}, {"v", s.equilibrium->v}} : Json(nullptr);
  summary["runs"] = Json::array();
  out << format_row("u0", "v0", "outcome", "final_deviation") << '\n';
  for (const SweepEntry& e : s.entries) {
    Json row{{"u_ic", e.u_ic}, {"v_ic", e.v_ic}};
    if (e.result) {
      const InitialPair ic{descriptor(e.u_ic), descriptor(e.v_ic)};
      try {
        write_run(dir / (e.u_ic + e.v_ic), p, o.run, ic, *e.result);
      } catch (const std::exception& ex) {
        err << ex.what() << '\n';
        escalate(error);
      }
      row["outcome"] = to_string(e.result->outcome);
      row["final_deviation"] = e.final_deviation;
      row["t_end"] = e.result->final_state.t;
      row["mass_u"] = {e.result->timeseries.front().mass_u, e.result->timeseries.back().mass_u};
      row["mass_v"] = {e.result->timeseries.front().mass_v, e.result->timeseries.back().mass_v};
      char dev[32];
      std::snprintf(dev, sizeof dev, "%.3e", e.final_deviation);
      out << format_row(e.u_ic, e.v_ic, std::string(to_string(e.result->outcome)), dev) << '\n';
      escalate(outcome_exit(e.result->outcome));
    } else {
      row["outcome"] = "error";
      row["error"] = e.error;
      out << format_row(e.u_ic, e.v_ic, "error", e.error) << '\n';
      escalate(error);
    }
    summary["runs"].push_back(row);
  }

  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream f(dir / "summary.json", std::ios::trunc);
  if (!f || !(f << dump(summary))) {
    err << "cannot write " << (dir / "summary.json").string() << '\n';
    escalate(error);
  }
  return code;
}

int cmd_tensors(const Options& o, std::ostream& out) {
  if (o.run.n < 0) throw UsageError("--n must be >= 0");
  const TripleTensors t = build_tensors(o.run.n);
  Json j{{"n", t.n},
         {"modes", (t.n + 1) * (t.n + 1)},
         {"mass3_nonzeros", t.mass3.nonzeros()},
         {"mass3_expected", mass3_nonzero_count(t.n)},
         {"stiff3_nonzeros", t.stiff3.nonzeros()}};
  if (!o.out_dir.empty()) {
    write_tensor_cache(o.out_dir, t);
    j["cache"] = o.out_dir;
  }
  out << dump(j);
  return ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-diffusion predator-prey toolkit: conditions, certificates and spectral runs", "sktspec"};
  app.require_subcommand(1);
  Options o;

  auto* check = app.add_subcommand("check", "Evaluate the closed-form global-existence conditions");
  add_source(*check, o);

  auto* certify = app.add_subcommand("certify", "Search for a Lyapunov certificate");
  add_source(*certify, o);
  certify->add_option("--kmax", o.k_max, "Largest K searched")->capture_default_str();
  certify->add_option("--level", o.level, "Level C0 for the reaction-sign sampler")->capture_default_str();
  certify->add_option("--samples", o.samples, "Reaction-sign samples")->capture_default_str();
  certify->add_option("--seed", o.run.seed, "Sampler seed")->capture_default_str();

  auto* run_cmd = app.add_subcommand("run", "Integrate one initial condition");
  add_source(*run_cmd, o);
  add_run_options(*run_cmd, o);
  run_cmd->add_option("--ic", o.ic, "Initial condition descriptor")->capture_default_str();
  run_cmd->add_option("--out", o.out_dir, "Output directory (default sktspec_run)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run all nine built-in initial-condition pairs");
  add_source(*sweep_cmd, o);
  add_run_options(*sweep_cmd, o);
  sweep_cmd->add_option("--out", o.out_dir, "Output directory (default sktspec_sweep)");
  sweep_cmd->add_option("--threads", o.threads, "Parallel runs (default SKTSPEC_THREADS or all cores)");

  auto* tensors = app.add_subcommand("tensors", "Build the triple-product tensors");
  tensors->add_option("--n", o.run.n, "Truncation order")->capture_default_str();
  tensors->add_option("--out", o.out_dir, "Write a binary cache to this file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return error;
  }

  try {
    if (check->parsed()) return cmd_check(o, out);
    if (certify->parsed()) return cmd_certify(o, out);
    if (run_cmd->parsed()) return cmd_run(o, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(o, out, err);
    if (tensors->parsed()) return cmd_tensors(o, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return error;
  }
  return error;
}

}  // namespace skt::cli
