// pwrcap: run capacity experiments, sweep saved scenarios, run the theorem
// and lemma checks, and audit slot traces.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pwrcap/checks.hpp"
#include "pwrcap/experiment.hpp"
#include "pwrcap/io.hpp"

using namespace pwrcap;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct RunFlags {
  std::string target;
  std::string manifest_in;
  std::vector<std::string> schedulers;
  std::string routing;
  std::vector<double> ranges;
  std::int64_t seed = -1;
  std::size_t reps = 0;
  std::size_t workload = 0;
  std::string out;
  std::string manifest_out;
  std::string trace;
  unsigned jobs = 1;
};

void add_common(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--scheduler", f.schedulers, "cs, cen, opt (repeatable or comma separated)")->delimiter(',');
  cmd->add_option("--routing", f.routing, "routing (hop)");
  cmd->add_option("--r", f.ranges, "transmission ranges in meters, ascending")->delimiter(',');
  cmd->add_option("--seed", f.seed, "base seed");
  cmd->add_option("--reps", f.reps, "repetitions (topologies)");
  cmd->add_option("--workload", f.workload, "packets per flow");
  cmd->add_option("--out", f.out, "CSV output path (stdout if omitted)");
  cmd->add_option("--manifest-out", f.manifest_out, "write the replay manifest here");
  cmd->add_option("--trace", f.trace, "write a JSON-lines slot trace here");
  cmd->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
}

void apply_flags(ExperimentSpec& s, const RunFlags& f) {
  if (!f.schedulers.empty()) s.schedulers = f.schedulers;
  if (!f.routing.empty()) s.routing = f.routing;
  if (!f.ranges.empty()) s.ladder = f.ranges;
  if (f.seed >= 0) {
    s.base_seed = static_cast<std::uint64_t>(f.seed);
    s.seeds.clear();
  }
  if (f.reps) {
    s.reps = f.reps;
    s.seeds.clear();
  }
  if (f.workload) s.workload = f.workload;
  if (!f.out.empty()) s.csv = f.out;
  if (!f.manifest_out.empty()) s.manifest = f.manifest_out;
  if (!f.trace.empty()) s.trace = f.trace;
  s.validate();
}

int execute(const ExperimentSpec& spec, unsigned jobs) {
  RunOptions opts;
  opts.jobs = jobs;
  std::ofstream trace;
  if (!spec.trace.empty()) {
    trace.open(spec.trace);
    if (!trace) throw std::runtime_error("cannot write " + spec.trace);
    opts.trace = &trace;
  }
  const auto res = run_experiment(spec, opts);
  const std::string csv = to_csv(res.rows);
  if (spec.csv.empty()) {
    std::cout << csv;
  } else {
    write_file(spec.csv, csv);
    std::cout << summary_table(summarize(res.rows));
  }
  if (!spec.manifest.empty()) {
    json m = manifest_json(res);
    write_file(spec.manifest, m.dump(2) + "\n");
  }
  return 0;
}

int print_check(const CheckResult& c) {
  std::printf("%-9s %s  %s\n", c.name.c_str(), c.passed ? "PASS" : "FAIL", c.detail.c_str());
  return c.passed ? 0 : 1;
}

int audit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  const auto audit = audit_trace(in);
  std::printf("runs %zu, slots %zu, lemma1 violations %zu, sinr violations %zu, half-duplex violations %zu\n",
              audit.runs, audit.slots, audit.lemma1_violations, audit.sinr_violations,
              audit.half_duplex_violations);
  if (audit.first_violation) std::printf("first violation: %s\n", audit.first_violation->c_str());
  std::printf("%s\n", audit.ok() ? "PASS" : "FAIL");
  return audit.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TDMA capacity simulator and verification suite"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunFlags runf;
  auto* run_cmd = app.add_subcommand("run", "run a built-in experiment, a spec file, or a manifest");
  run_cmd->add_option("target", runf.target, "built-in name (exp1, exp2, exp3, fig1, star, theorem2) or spec JSON");
  run_cmd->add_option("--manifest", runf.manifest_in, "replay a manifest written by a previous run");
  add_common(run_cmd, runf);

  RunFlags sweepf;
  std::string scenario_path;
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep a saved scenario over a range ladder");
  sweep_cmd->add_option("scenario", scenario_path, "scenario JSON (nodes, area, flows)")->required();
  add_common(sweep_cmd, sweepf);

  std::string gen_name, gen_out;
  std::uint64_t gen_seed = 1;
  auto* gen_cmd = app.add_subcommand("scenario", "write the first resolved scenario of an experiment as JSON");
  gen_cmd->add_option("name", gen_name, "built-in name or spec JSON")->required();
  gen_cmd->add_option("--seed", gen_seed, "base seed");
  gen_cmd->add_option("--out", gen_out, "output path (stdout if omitted)");

  std::string which = "all";
  std::size_t m = 2, instances = 50, sets = 500, networks = 20, pairs = 100, n_nodes = 2000;
  std::uint64_t check_seed = 1;
  std::string check_trace;
  auto* checks_cmd = app.add_subcommand("checks", "theorem and lemma checks with fixed seeds");
  checks_cmd->add_option("which", which, "theorem1, theorem2, lemma1, lemma2, lemma3 or all")
      ->check(CLI::IsMember({"theorem1", "theorem2", "lemma1", "lemma2", "lemma3", "all"}));
  checks_cmd->add_option("--m", m, "theorem2 construction size")->check(CLI::PositiveNumber);
  checks_cmd->add_option("--instances", instances, "theorem1 random instances");
  checks_cmd->add_option("--sets", sets, "lemma2 random maximal sets");
  checks_cmd->add_option("--networks", networks, "lemma3 networks");
  checks_cmd->add_option("--pairs", pairs, "lemma3 pairs per network");
  checks_cmd->add_option("--nodes", n_nodes, "lemma3 nodes per network");
  checks_cmd->add_option("--seed", check_seed, "seed");
  checks_cmd->add_option("--trace", check_trace, "lemma1: audit this trace instead of simulating");

  std::string verify_trace;
  auto* verify_cmd = app.add_subcommand("verify", "audit a JSON-lines slot trace; nonzero exit on any violation");
  verify_cmd->add_option("--trace", verify_trace, "trace path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      ExperimentSpec spec;
      if (!runf.manifest_in.empty()) {
        spec = spec_from_json(read_json_file(runf.manifest_in));
        spec.csv.clear();
        spec.manifest.clear();
        spec.trace.clear();
      } else if (runf.target.empty()) {
        throw std::invalid_argument("run: give a built-in name, a spec file, or --manifest");
      } else if (runf.target.ends_with(".json")) {
        spec = spec_from_json(read_json_file(runf.target));
      } else {
        spec = builtin_experiment(runf.target);
      }
      apply_flags(spec, runf);
      return execute(spec, runf.jobs);
    }
    if (*sweep_cmd) {
      ExperimentSpec spec;
      spec.name = "sweep";
      spec.topology = "scenario";
      spec.scenario = read_json_file(scenario_path);
      spec.reps = 1;
      apply_flags(spec, sweepf);
      return execute(spec, sweepf.jobs);
    }
    if (*gen_cmd) {
      ExperimentSpec spec =
          gen_name.ends_with(".json") ? spec_from_json(read_json_file(gen_name)) : builtin_experiment(gen_name);
      spec.base_seed = gen_seed;
      spec.seeds.clear();
      spec.reps = 1;
      const auto inst = resolve_instances(spec);
      const std::string text = to_json(inst.front().scenario).dump() + "\n";
      if (gen_out.empty()) std::cout << text;
      else write_file(gen_out, text);
      return 0;
    }
    if (*checks_cmd) {
      int status = 0;
      const bool all = which == "all";
      if (all || which == "theorem2") status |= print_check(run_theorem2_check(m));
      if (all || which == "theorem1") status |= print_check(run_theorem1_suite(instances, check_seed));
      if (all || which == "lemma1") {
        if (!check_trace.empty()) {
          status |= audit_file(check_trace);
        } else {
          std::size_t slots = 0, violations = 0;
          for (const char* name : {"fig1", "star", "theorem2", "exp2"}) {
            auto spec = builtin_experiment(name);
            spec.base_seed = check_seed;
            spec.reps = 1;
            for (const auto& inst : resolve_instances(spec))
              for (const auto& sched : {"cs", "cen"})
                for (double r : spec.ladder) {
                  SimConfig cfg{inst.scenario.network, inst.scenario.flows, scheduler_kind(sched), r, spec.params};
                  cfg.seed = inst.seed;
                  const auto a = audit_lemma1(cfg);
                  slots += a.slots;
                  violations += a.violations;
                }
          }
          status |= print_check({"lemma1", violations == 0,
                                 format("%zu slots audited, %zu violations", slots, violations)});
        }
      }
      if (all || which == "lemma2") status |= print_check(run_lemma2_suite(sets, check_seed));
      if (all || which == "lemma3") status |= print_check(run_lemma3_suite(networks, pairs, n_nodes, check_seed));
      return status;
    }
    if (*verify_cmd) return audit_file(verify_trace);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
