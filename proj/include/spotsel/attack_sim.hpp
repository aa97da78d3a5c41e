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
#include <vector>

#include "spotsel/params.hpp"
#include "spotsel/population.hpp"
#include "spotsel/selection.hpp"

namespace spotsel {

/// Per-committee results of one round of K selections.
struct RoundOutcome {
  std::vector<std::size_t> bad_counts;
  std::vector<std::size_t> sizes;
  bool bad_round = false;
  std::size_t bad_committees = 0;
  /// Committees with |C| < k.
  std::size_t undersized_count = 0;
  std::size_t spots = 0;
  /// Spots whose candidate count (before capping) fell below l.
  std::size_t short_spots = 0;
};

RoundOutcome run_round(const Universe& universe, const RoundSeed& seed, std::uint64_t round,
                       const SelectionParams& params, std::uint64_t n_committees,
                       const ThreatParams& threat);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval for successes out of trials at z = 1.96.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

struct TrialReport {
  SelectionParams params;
  ThreatParams threat;
  std::uint64_t n_committees = 0;
  std::uint64_t trials = 0;
  std::uint64_t bad_rounds = 0;
  double p_hat = 0.0;
  Interval ci_95;
  /// size_histogram[s] = number of committees of size s.
  std::vector<std::uint64_t> size_histogram;
  std::uint64_t committees = 0;
  std::uint64_t bad_committees = 0;
  std::uint64_t undersized_committees = 0;
  double undersized_rate = 0.0;
  double mean_size = 0.0;
  std::uint64_t spots = 0;
  std::uint64_t short_spots = 0;
  std::uint64_t master_seed = 0;
  bool fixed_universe = false;

  double per_committee_bad_rate() const;
  double short_spot_rate() const;
};

struct RunOptions {
  bool fixed_universe = false;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned workers = 1;
};

/// Monte Carlo estimate of P[some committee of a round is bad]. Trial t uses
/// derive_seed(master_seed, Trial, t) for its universe and round seed, so the
/// result does not depend on the worker count.
TrialReport estimate_attack_probability(const SelectionParams& params, std::uint64_t n_committees,
                                        const ThreatParams& threat, std::uint64_t trials,
                                        std::uint64_t master_seed, RunOptions options = {});

/// Empirical committee-size distribution and P[|C| < k]; same machinery.
TrialReport committee_size_stats(const SelectionParams& params, std::uint64_t n_committees,
                                 const ThreatParams& threat, std::uint64_t trials,
                                 std::uint64_t master_seed, RunOptions options = {});

struct Table1Cell {
  std::uint64_t n_nodes = 0;
  int gamma = 0;
  TrialReport report;
};

/// Experiment preset: k = 20, alpha = 3, rho = 0.9, m = 200 adversarial nodes on
/// top of N honest ones, k_bar = ceil(2k/3), stratified clusters.
SelectionParams table1_params(std::uint64_t n_nodes, int gamma);
ThreatParams table1_threat(int k = 20);
std::uint64_t table1_committees(std::uint64_t n_nodes, int k = 20);
std::uint64_t table1_trials(std::uint64_t n_nodes, int gamma, double trial_multiplier);

/// The 3 x 5 grid N in {1000, 3000, 10000}, gamma in {1..5}, row-major.
std::vector<Table1Cell> table1(std::uint64_t master_seed, double trial_multiplier,
                               RunOptions options = {},
                               std::vector<std::uint64_t> ns = {1000, 3000, 10000},
                               std::vector<int> gammas = {1, 2, 3, 4, 5});

struct StrategyResult {
  PlacementStrategy strategy;
  TrialReport report;
};

/// Runs every placement strategy with the same master seed.
std::vector<StrategyResult> strategy_comparison(const SelectionParams& params,
                                                std::uint64_t n_committees, ThreatParams threat,
                                                std::uint64_t trials, std::uint64_t master_seed,
                                                RunOptions options = {});

}  // namespace spotsel
