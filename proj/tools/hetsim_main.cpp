// Command-line front end: single runs, V/policy sweeps, solver-vs-reference
// gap checks and config validation. Outputs are deterministic CSVs; the same
// invocation always produces byte-identical files.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "hetsim/csv.hpp"
#include "hetsim/engine.hpp"
#include "hetsim/oracle.hpp"
#include "hetsim/pairing.hpp"
#include "hetsim/rng.hpp"

namespace fs = std::filesystem;
using namespace hetsim;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitConfig = 65;
constexpr int kExitRuntime = 70;

std::string default_out_dir() {
  const char* env = std::getenv("HETSIM_OUT_DIR");
  return env && *env ? env : "out";
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos < csv.size()) {
    const size_t comma = csv.find(',', pos);
    const std::string tok =
        csv.substr(pos, comma == std::string::npos ? csv.size() - pos : comma - pos);
    out.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<PolicyKind> parse_policy_list(const std::string& csv) {
  std::vector<PolicyKind> out;
  size_t pos = 0;
  while (pos < csv.size()) {
    const size_t comma = csv.find(',', pos);
    const std::string tok =
        csv.substr(pos, comma == std::string::npos ? csv.size() - pos : comma - pos);
    out.push_back(parse_policy(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

int cmd_validate(const std::string& config_path) {
  Scenario sc = load_config(config_path);
  for (const auto& w : sc.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  std::printf("ok: %d SBSs, %d subchannels, %d SUEs\n", sc.network.n_sbs,
              sc.network.n_subchannels, sc.dims().total_sues);
  return 0;
}

int cmd_run(const std::string& config_path, double v, std::int64_t slots,
            std::uint64_t seed, int n_seeds, const std::string& policy_name_arg,
            const std::string& out_dir, bool warmup, bool dump_states,
            bool diagnostics, bool estimate_cmin) {
  Scenario sc = load_config(config_path);
  for (const auto& w : sc.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  const PolicyKind policy = parse_policy(policy_name_arg);
  fs::create_directories(out_dir);

  if (estimate_cmin) {
    const auto cmin = estimate_c_min(sc, seed, slots);
    for (size_t n = 0; n < cmin.size(); ++n)
      std::printf("c_min estimate (nsra profit) sbs=%zu: %.17g\n", n, cmin[n]);
    sc.economic.c_min = cmin;
  }

  CsvWriter summary((fs::path(out_dir) / "summary.csv").string());
  write_summary_header(summary);
  for (int k = 0; k < n_seeds; ++k) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
    RunOptions opts;
    char name[128];
    std::snprintf(name, sizeof(name), "slots_v%g_%s_seed%llu.csv", v,
                  policy_name(policy).c_str(), static_cast<unsigned long long>(s));
    opts.slots_csv_path = (fs::path(out_dir) / name).string();
    if (dump_states) {
      std::snprintf(name, sizeof(name), "states_seed%llu.csv",
                    static_cast<unsigned long long>(s));
      opts.states_csv_path = (fs::path(out_dir) / name).string();
    }
    if (diagnostics) {
      std::snprintf(name, sizeof(name), "pairs_seed%llu.csv",
                    static_cast<unsigned long long>(s));
      opts.pairs_csv_path = (fs::path(out_dir) / name).string();
      std::snprintf(name, sizeof(name), "solver_seed%llu.csv",
                    static_cast<unsigned long long>(s));
      opts.solver_csv_path = (fs::path(out_dir) / name).string();
    }
    const RunSummary r = run(sc, policy, s, slots, v, opts);
    write_summary_row(summary, r, std::to_string(s));
    std::printf("run policy=%s v=%g seed=%llu slots=%lld backlog=%.6g profit=%.6g "
                "f_bar=%.6g grid_overrides=%d\n",
                r.policy.c_str(), r.v, static_cast<unsigned long long>(r.seed),
                static_cast<long long>(r.slots),
                warmup ? r.avg_backlog_steady : r.avg_backlog_bits,
                warmup ? r.total_profit_steady : r.total_profit, r.f_bar,
                r.grid_overrides);
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& v_csv,
              const std::string& policy_csv, std::uint64_t seed_base, int n_seeds,
              std::int64_t slots, const std::string& out_dir, int jobs) {
  Scenario sc = load_config(config_path);
  const std::vector<double> v_list = parse_double_list(v_csv);
  const std::vector<PolicyKind> policies = parse_policy_list(policy_csv);
  if (v_list.empty() || policies.empty() || n_seeds < 1)
    throw CLI::ValidationError("sweep", "need nonempty V list, policies and seeds");
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < n_seeds; ++k) seeds.push_back(seed_base + k);
  fs::create_directories(out_dir);

  SweepOptions opts;
  opts.jobs = jobs;
  opts.summary_csv_path = (fs::path(out_dir) / "sweep_summary.csv").string();
  const auto results = sweep_v(sc, v_list, policies, seeds, slots, opts);
  std::printf("sweep: %zu runs -> %s\n", results.size(), opts.summary_csv_path.c_str());
  return 0;
}

int cmd_oracle_check(std::uint64_t seed, int cases, const std::string& out_dir) {
  // Small pair instances against the exhaustive reference, one CSV row each.
  Scenario sc = default_scenario();
  sc.network.n_sbs = 2;
  sc.network.users_per_sbs = {1, 1};
  sc.network.n_subchannels = 3;
  sc.network.subchannel_bandwidth_hz.assign(3, 10e6);
  sc.network.initial_band_hz = {20e6, 10e6};
  sc.network.sbs_positions_m = {{0.0, 200.0}, {0.0, -200.0}};
  sc.network.sue_positions_m = {{{30.0, 200.0}}, {{-30.0, -200.0}}};
  sc.economic.mu_max.clear();
  sc.economic.price_cap_per_hz.clear();
  sc.economic.c_min.clear();
  validate(sc);
  const NetDims dims = sc.dims();

  fs::create_directories(out_dir);
  CsvWriter w((fs::path(out_dir) / "oracle_gaps.csv").string());
  w << "case,seed,solver_objective,oracle_objective,relative_gap";
  w.end_row();

  double max_gap = -1e300;
  std::vector<double> gaps;
  for (int k = 0; k < cases; ++k) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
    SlotSampler sampler(sc, s);
    const SlotState slot = sampler.state(0);
    QueueState q = QueueState::zeros(dims, derive_perturbations(sc.energy, dims.n_sbs));
    Rng rng(mix_seed(s, 0x0c4a5e, 1));
    for (auto& qv : q.q_bits)
      qv = rng.uniform() < 0.2 ? 0.0 : rng.uniform(2000.0, 60000.0);
    if (q.q_bits[0] == 0.0 && q.q_bits[1] == 0.0)
      q.q_bits[0] = rng.uniform(2000.0, 60000.0);
    for (size_t n = 0; n < q.y.size(); ++n) {
      q.y[n] = rng.uniform(0.0, 50.0);
      q.z[n] = rng.uniform(0.0, 5.0);
      q.s_energy[n] = quantize_energy_floor(rng.uniform(300.0, 500.0));
    }
    const PairPrices pr = pricing(q.w(0), q.w(1), sc.q_max(0), sc.q_max(1));
    const AllocProblem problem = build_problem(
        sc, slot, q, {{0, pr.alpha_i, pr.beta_i}, {1, pr.alpha_j, pr.beta_j}}, {0, 1, 2});
    const AllocationDecision a = solve(problem);
    const AllocationDecision o = brute_force_allocation(problem, {});
    const double gap =
        (o.objective - a.objective) / std::max(std::abs(o.objective), 1e-12);
    gaps.push_back(gap);
    max_gap = std::max(max_gap, gap);
    w << static_cast<std::int64_t>(k) << s << a.objective << o.objective << gap;
    w.end_row();
  }
  std::sort(gaps.begin(), gaps.end());
  std::printf("oracle-check: %d cases, median gap %.3g, max gap %.3g\n", cases,
              gaps[gaps.size() / 2], max_gap);
  return max_gap <= 0.05 ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-slotted HetNet spectrum-sharing and energy-management simulator"};
  app.require_subcommand(1);

  std::string config_path = "default";
  std::string out_dir = default_out_dir();
  std::string policy = "proposed";
  std::string v_csv = "10";
  std::string policy_csv = "proposed,nsra,tdraa";
  double v = 10.0;
  std::int64_t slots = 1000;
  std::uint64_t seed = 1;
  int n_seeds = 1;
  int jobs = 1;
  int cases = 100;
  bool warmup = false;
  bool dump_states = false;
  bool diagnostics = false;
  bool estimate_cmin = false;

  auto* run_cmd = app.add_subcommand("run", "run one experiment (per-slot CSV + summary)");
  run_cmd->add_option("--config", config_path, "config file path or 'default'");
  run_cmd->add_option("--v", v, "Lyapunov tradeoff parameter V");
  run_cmd->add_option("--slots", slots, "number of time slots");
  run_cmd->add_option("--seed", seed, "base RNG seed");
  run_cmd->add_option("--seeds", n_seeds, "number of seeds (seed..seed+k-1)");
  run_cmd->add_option("--policy", policy, "proposed|nsra|tdraa");
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_flag("--warmup", warmup, "report steady-state averages (drop first 10%)");
  run_cmd->add_flag("--dump-states", dump_states, "also dump the raw slot-state trace");
  run_cmd->add_flag("--diagnostics", diagnostics,
                    "also write pairing-trace and solver-diagnostics CSVs");
  run_cmd->add_flag("--estimate-cmin", estimate_cmin,
                    "calibrate C_min from an NSRA run first");

  auto* sweep_cmd = app.add_subcommand("sweep", "sweep V x policy x seeds");
  sweep_cmd->add_option("--config", config_path, "config file path or 'default'");
  sweep_cmd->add_option("--v", v_csv, "comma-separated V list");
  sweep_cmd->add_option("--policy", policy_csv, "comma-separated policy list");
  sweep_cmd->add_option("--seed", seed, "base RNG seed");
  sweep_cmd->add_option("--seeds", n_seeds, "number of seeds");
  sweep_cmd->add_option("--slots", slots, "number of time slots");
  sweep_cmd->add_option("--out", out_dir, "output directory");
  sweep_cmd->add_option("--jobs", jobs, "parallel runs (1 = serial)");

  auto* oracle_cmd = app.add_subcommand("oracle-check",
                                        "solver vs exhaustive search on small instances");
  oracle_cmd->add_option("--seed", seed, "base RNG seed");
  oracle_cmd->add_option("--cases", cases, "number of random instances");
  oracle_cmd->add_option("--out", out_dir, "output directory");

  auto* validate_cmd = app.add_subcommand("validate", "parse and validate a config file");
  validate_cmd->add_option("--config", config_path, "config file path or 'default'")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand(validate_cmd)) return cmd_validate(config_path);
    if (app.got_subcommand(run_cmd))
      return cmd_run(config_path, v, slots, seed, n_seeds, policy, out_dir, warmup,
                     dump_states, diagnostics, estimate_cmin);
    if (app.got_subcommand(sweep_cmd))
      return cmd_sweep(config_path, v_csv, policy_csv, seed, n_seeds, slots, out_dir,
                       jobs);
    if (app.got_subcommand(oracle_cmd)) return cmd_oracle_check(seed, cases, out_dir);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
