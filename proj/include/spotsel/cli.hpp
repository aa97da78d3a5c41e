//------------------------------------------------------------------------------
//
//   Copyright 2026 The spotsel Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "spotsel/overlay.hpp"
#include "spotsel/params.hpp"

namespace spotsel::cli {

/// Everything a run needs. Zero for K, trials and k_bar means "derive from
/// the other fields" (N / 2k, the grid trial count, ceil(2k/3)).
struct ExperimentConfig {
  SelectionParams selection;
  ThreatParams threat;
  OverlayConfig overlay;
  std::uint64_t n_committees = 0;
  std::uint64_t trials = 0;
  double trial_multiplier = 1.0;
  std::uint64_t master_seed = 42;
  std::string format = "csv";
  std::string out;
  unsigned workers = 1;

  bool compare_strategies = false;
  bool fixed_universe = false;
  std::vector<std::uint64_t> ns;
  std::vector<int> gammas;
  double target = 0.0;
  int gamma_max = 64;
  std::size_t samples = 200;
  bool drop_adversarial = false;
  std::uint64_t shard = 0;
  std::uint64_t round = 0;
  std::string dump_committees;
  std::string dump_universe;
};

/// Parses a flat `key = value` file. Blank lines and lines starting with '#'
/// are skipped. Throws std::runtime_error with the line number on bad input.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Checks every (N, gamma) combination the command will touch. Throws
/// std::invalid_argument naming the field.
void validate(const std::string& command, const ExperimentConfig& config);

/// Entry point. args excludes the program name. Returns 0 on success, 1 on
/// run-time failure, 2 on invalid usage or configuration.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spotsel::cli
