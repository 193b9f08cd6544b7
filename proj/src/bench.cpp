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


#include "pbsolve/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "pbsolve/verify.hpp"

namespace pbsolve {

std::string_view intsize_bucket(int intsize) {
  if (intsize <= 32) return "0-32";
  if (intsize <= 47) return "33-47";
  if (intsize <= 49) return "48-49";
  return "50+";
}

std::vector<std::string> list_instances(const std::string& dir) {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension().string();
    if (ext == ".opb" || ext == ".wbo") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

BenchRow bench_one(const std::string& path, const SolverConfig& config) {
  BenchRow row;
  row.instance = std::filesystem::path(path).filename().string();
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  try {
    Instance inst = parse_opb_file(path);
    row.intsize = inst.intsize;
    row.bucket = intsize_bucket(inst.intsize);
    SolveResult r = config.portfolio > 1 ? solve_portfolio(linearize(inst), config) : solve(linearize(inst), config);
    row.status = r.status == SolveStatus::kOptimum ? "OPTIMUM" : std::string(status_name(r.status));
    if (r.incumbent) {
      // Re-checked independently before it is reported.
      VerifyReport rep = verify_solution(inst, r.incumbent->values);
      if (!rep.valid) {
        row.status = "ERROR";
        row.error = "solver returned an invalid solution";
      } else if (rep.objective) {
        row.objective = int128_to_string(*rep.objective);
      }
    }
    row.nodes = r.stats.nodes;
    row.cuts = std::accumulate(r.stats.cuts.begin(), r.stats.cuts.end(), std::uint64_t{0});
  } catch (const UnsupportedIntsize& e) {
    row.status = "REJECTED";
    row.intsize = e.intsize();
    row.bucket = intsize_bucket(e.intsize());
    row.error = e.what();
  } catch (const std::exception& e) {
    row.status = "ERROR";
    row.error = e.what();
  }
  row.time = elapsed();
  return row;
}

std::vector<BenchRow> run_bench(const std::string& dir, const SolverConfig& config) {
  std::vector<BenchRow> rows;
  for (const std::string& f : list_instances(dir)) rows.push_back(bench_one(f, config));
  return rows;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

bool solved(const BenchRow& r) {
  return r.status == "OPTIMUM" || r.status == "SATISFIABLE" || r.status == "UNSATISFIABLE";
}

}  // namespace

void write_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "instance,status,objective,time,nodes,cuts,intsize,intsize_bucket,error\n";
  for (const BenchRow& r : rows) {
    std::ostringstream t;
    t << std::fixed << std::setprecision(3) << r.time;
    out << csv_field(r.instance) << ',' << r.status << ',' << r.objective << ',' << t.str() << ',' << r.nodes << ','
        << r.cuts << ',' << r.intsize << ',' << r.bucket << ',' << csv_field(r.error) << '\n';
  }
}

void write_plot_data(const std::vector<BenchRow>& rows, std::ostream& out) {
  std::vector<double> times;
  for (const BenchRow& r : rows)
    if (solved(r)) times.push_back(r.time);
  std::sort(times.begin(), times.end());
  out << "# rank log10_seconds\n";
  for (size_t i = 0; i < times.size(); ++i)
    out << i + 1 << ' ' << std::fixed << std::setprecision(4) << std::log10(std::max(times[i], 1e-3)) << '\n';
}

bool set_feature(SolverConfig& config, std::string_view feature, bool on) {
  if (feature == "flower") config.flower = on;
  else if (feature == "rlt") config.rlt = on;
  else if (feature == "symmetry") config.symmetry = on;
  else if (feature == "conflict-pb") config.conflict_pb = on;
  else if (feature == "fjump") config.fjump = on;
  else if (feature == "restarts") config.restarts = on;
  else return false;
  return true;
}

}  // namespace pbsolve
