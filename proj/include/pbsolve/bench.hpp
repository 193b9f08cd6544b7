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


// Batch runs over a directory of .opb/.wbo files with CSV output.

#ifndef PBSOLVE_BENCH_HPP_
#define PBSOLVE_BENCH_HPP_

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "pbsolve/search.hpp"

namespace pbsolve {

struct BenchRow {
  std::string instance;  // file name
  std::string status;    // OPTIMUM, SATISFIABLE, UNSATISFIABLE, UNKNOWN, REJECTED, ERROR
  std::string objective;
  double time = 0.0;
  std::uint64_t nodes = 0;
  std::uint64_t cuts = 0;
  int intsize = 0;
  std::string bucket;
  std::string error;
};

/// "0-32", "33-47", "48-49" or "50+".
std::string_view intsize_bucket(int intsize);

/// .opb and .wbo files of `dir`, sorted by name.
std::vector<std::string> list_instances(const std::string& dir);

BenchRow bench_one(const std::string& path, const SolverConfig& config);
std::vector<BenchRow> run_bench(const std::string& dir, const SolverConfig& config);

void write_csv(const std::vector<BenchRow>& rows, std::ostream& out);
/// "rank log10_seconds" for every solved row, fastest first.
void write_plot_data(const std::vector<BenchRow>& rows, std::ostream& out);

/// Feature names: flower, rlt, symmetry, conflict-pb, fjump, restarts.
bool set_feature(SolverConfig& config, std::string_view feature, bool on);

}  // namespace pbsolve

#endif  // PBSOLVE_BENCH_HPP_
