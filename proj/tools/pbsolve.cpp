// Copyright 2026 The pbsolve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// pbsolve command line: solve, verify and bench subcommands.

#include <csignal>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <unistd.h>

#include "CLI11.hpp"
#include "pbsolve/bench.hpp"
#include "pbsolve/search.hpp"
#include "pbsolve/verify.hpp"

namespace {

using namespace pbsolve;

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

void install_signals() {
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::signal(SIGALRM, on_signal);
}

constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitOpt = 30;
constexpr int kExitUnknown = 0;
constexpr int kExitParse = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitInvalid = 1;

void add_config_options(CLI::App* app, SolverConfig& cfg, std::string& mode) {
  app->add_option("--time-limit", cfg.time_limit, "Seconds, 0 for none")->envname("PBSOLVE_TIME_LIMIT")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--node-limit", cfg.node_limit, "Search nodes, 0 for none")->envname("PBSOLVE_NODE_LIMIT");
  app->add_option("--seed", cfg.seed, "Random seed")->envname("PBSOLVE_SEED");
  app->add_option("--mode", mode, "default, aggressive-heur or sat-like")
      ->envname("PBSOLVE_MODE")
      ->check(CLI::IsMember({"default", "aggressive-heur", "sat-like"}));
  auto off = [&](const char* name, const char* env, bool& field) {
    app->add_flag_callback(name, [&field] { field = false; }, "Disable the feature")->envname(env);
  };
  off("--no-flower", "PBSOLVE_NO_FLOWER", cfg.flower);
  off("--no-rlt", "PBSOLVE_NO_RLT", cfg.rlt);
  off("--no-symmetry", "PBSOLVE_NO_SYMMETRY", cfg.symmetry);
  off("--no-conflict-pb", "PBSOLVE_NO_CONFLICT_PB", cfg.conflict_pb);
  off("--no-fjump", "PBSOLVE_NO_FJUMP", cfg.fjump);
  off("--no-restarts", "PBSOLVE_NO_RESTARTS", cfg.restarts);
  app->add_option("--portfolio", cfg.portfolio, "Worker threads")
      ->envname("PBSOLVE_PORTFOLIO")
      ->check(CLI::Range(1, 64));
  app->add_option("--mcap", cfg.mcap, "Largest big-M used in indicator LP rows")
      ->envname("PBSOLVE_MCAP")
      ->check(CLI::PositiveNumber);
  app->add_option("--ftol", cfg.ftol, "Rounding tolerance for LP points")
      ->envname("PBSOLVE_FTOL")
      ->check(CLI::Range(0.0, 0.49));
}

// CLI11 drops environment values that fail validation; report them instead.
bool env_values_ok(const CLI::App* app) {
  bool ok = true;
  for (const CLI::Option* opt : app->get_options()) {
    std::string env = opt->get_envname();
    if (env.empty() || opt->count() > 0) continue;
    const char* value = std::getenv(env.c_str());
    if (value && *value) {
      std::cerr << "error: invalid value '" << value << "' in " << env << '\n';
      ok = false;
    }
  }
  return ok;
}

int run_solve(const std::string& file, SolverConfig cfg) {
  Instance inst;
  try {
    inst = parse_opb_file(file);
  } catch (const UnsupportedIntsize& e) {
    std::cerr << "error: " << e.what() << '\n';
    emit_comment("rejected: " + std::string(e.what()), std::cout);
    return kExitUnsupported;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  emit_comment("variables " + std::to_string(inst.n_vars) + " constraints " + std::to_string(inst.constraints.size()) +
                   " intsize " + std::to_string(inst.intsize),
               std::cout);
  cfg.stop = &g_stop;
  if (cfg.time_limit > 0) alarm(static_cast<unsigned>(std::ceil(cfg.time_limit)) + 1);
  EngineProblem p = linearize(inst);
  SolveResult r = cfg.portfolio > 1 ? solve_portfolio(p, cfg) : solve(p, cfg);
  alarm(0);

  SolveStatus status = r.status;
  std::optional<std::vector<int>> model;
  std::optional<Int128> obj;
  if (r.incumbent) {
    VerifyReport rep = verify_solution(inst, r.incumbent->values);
    if (rep.valid) {
      model = r.incumbent->values;
      if (inst.has_objective()) obj = rep.objective;
    } else {
      std::cerr << "error: internal check rejected the final solution\n";
      status = SolveStatus::kUnknown;
    }
  }
  if (!model && (status == SolveStatus::kSatisfiable || status == SolveStatus::kOptimum))
    status = SolveStatus::kUnknown;

  const SolveStats& s = r.stats;
  std::ostringstream st;
  st << "nodes " << s.nodes << " conflicts " << s.conflicts << " learned " << s.learned << " lp_iterations "
     << s.lp_iterations << " restarts " << s.restarts << " fj_flips " << s.fj_flips;
  emit_comment(st.str(), std::cout);
  std::ostringstream ct;
  ct << "cuts";
  for (int k = 0; k < 5; ++k) ct << ' ' << cut_kind_name(static_cast<CutKind>(k)) << ' ' << s.cuts[k];
  emit_comment(ct.str(), std::cout);
  emit_comment("generators " + std::to_string(s.generators) + " lex_fixings " + std::to_string(s.lex_fixings) +
                   " orbital_fixings " + std::to_string(s.orbital_fixings),
               std::cout);
  if (r.incumbent) emit_comment("solution from " + std::string(provenance_name(r.incumbent->provenance)), std::cout);
  emit_result(status, obj, model, std::cout);
  switch (status) {
    case SolveStatus::kSatisfiable:
      return kExitSat;
    case SolveStatus::kOptimum:
      return kExitOpt;
    case SolveStatus::kUnsatisfiable:
      return kExitUnsat;
    case SolveStatus::kUnknown:
      break;
  }
  return kExitUnknown;
}

// The solution argument is either a v line or a file containing one (other
// lines such as "s" and "o" are skipped).
std::string solution_text(const std::string& arg) {
  std::ifstream in(arg);
  if (!in) return arg;
  std::string line, all;
  while (std::getline(in, line))
    if (line.size() >= 1 && line[0] == 'v') all += line.substr(1) + ' ';
  return all;
}

int run_verify(const std::string& file, const std::string& solution) {
  Instance inst;
  try {
    inst = parse_opb_file(file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  std::vector<int> x;
  try {
    x = parse_v_line(solution_text(solution), inst.n_vars);
  } catch (const std::exception& e) {
    std::cout << "INVALID\n";
    std::cout << "c " << e.what() << '\n';
    return kExitInvalid;
  }
  VerifyReport rep = verify_solution(inst, x);
  std::cout << (rep.valid ? "VALID" : "INVALID") << '\n';
  for (const std::string& d : rep.diagnostics) std::cout << "c " << d << '\n';
  if (rep.objective) std::cout << "c objective " << int128_to_string(*rep.objective) << '\n';
  return rep.valid ? 0 : kExitInvalid;
}

bool write_bench(const std::vector<BenchRow>& rows, const std::string& csv, const std::string& plot) {
  std::ofstream out(csv);
  if (!out) {
    std::cerr << "error: cannot write " << csv << '\n';
    return false;
  }
  write_csv(rows, out);
  if (!plot.empty()) {
    std::ofstream pl(plot);
    if (!pl) {
      std::cerr << "error: cannot write " << plot << '\n';
      return false;
    }
    write_plot_data(rows, pl);
  }
  return true;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  auto dot = path.rfind('.');
  if (dot == std::string::npos || path.find('/', dot) != std::string::npos) return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

int run_bench_cmd(const std::string& dir, SolverConfig cfg, const std::string& csv, const std::string& plot,
                  const std::string& ablate) {
  cfg.stop = &g_stop;
  std::vector<std::string> files;
  try {
    files = list_instances(dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  if (ablate.empty()) {
    auto rows = run_bench(dir, cfg);
    return write_bench(rows, csv, plot) ? 0 : kExitParse;
  }
  SolverConfig off = cfg;
  if (!set_feature(off, ablate, false) || !set_feature(cfg, ablate, true)) {
    std::cerr << "error: unknown feature " << ablate << '\n';
    return kExitParse;
  }
  auto on_rows = run_bench(dir, cfg);
  auto off_rows = run_bench(dir, off);
  bool ok = write_bench(on_rows, with_suffix(csv, "_on"), plot.empty() ? "" : with_suffix(plot, "_on")) &&
            write_bench(off_rows, with_suffix(csv, "_off"), plot.empty() ? "" : with_suffix(plot, "_off"));
  return ok ? 0 : kExitParse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact pseudo-Boolean solver"};
  app.require_subcommand(1);

  SolverConfig solve_cfg, bench_cfg;
  std::string solve_mode = "default", bench_mode = "default";
  std::string solve_file, verify_file, verify_solution_arg, bench_dir;
  std::string bench_csv = "bench.csv", bench_plot, bench_ablate;

  auto* solve_cmd = app.add_subcommand("solve", "Solve an .opb or .wbo file");
  solve_cmd->add_option("file", solve_file, "Instance")->required()->check(CLI::ExistingFile);
  add_config_options(solve_cmd, solve_cfg, solve_mode);

  auto* verify_cmd = app.add_subcommand("verify", "Check a solution exactly");
  verify_cmd->add_option("file", verify_file, "Instance")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("solution", verify_solution_arg, "v line, or a file with v lines")->required();

  auto* bench_cmd = app.add_subcommand("bench", "Run every .opb/.wbo file of a directory");
  bench_cmd->add_option("dir", bench_dir, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  bench_cmd->add_option("--csv", bench_csv, "Output CSV")->envname("PBSOLVE_BENCH_CSV");
  bench_cmd->add_option("--plot", bench_plot, "Sorted runtime data file")->envname("PBSOLVE_BENCH_PLOT");
  bench_cmd->add_option("--ablate", bench_ablate,
                        "Run twice with the feature on and off (flower, rlt, symmetry, conflict-pb, fjump, restarts)")
      ->check(CLI::IsMember({"flower", "rlt", "symmetry", "conflict-pb", "fjump", "restarts"}));
  add_config_options(bench_cmd, bench_cfg, bench_mode);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // CLI11 prints help on stdout and errors on stderr.
    return app.exit(e) == 0 ? 0 : 1;
  }
  for (const CLI::App* sub : {solve_cmd, bench_cmd})
    if (*sub && !env_values_ok(sub)) return 1;
  install_signals();
  if (*solve_cmd) {
    solve_cfg.mode = *parse_mode(solve_mode);
    return run_solve(solve_file, solve_cfg);
  }
  if (*verify_cmd) return run_verify(verify_file, verify_solution_arg);
  bench_cfg.mode = *parse_mode(bench_mode);
  return run_bench_cmd(bench_dir, bench_cfg, bench_csv, bench_plot, bench_ablate);
}
