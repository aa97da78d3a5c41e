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

#include "spotsel/attack_sim.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "spotsel/rng.hpp"

namespace spotsel {

namespace {

RoundOutcome run_round_with(const Universe& universe, const RoundSeed& seed, std::uint64_t round,
                            const SelectionParams& params, const SpotGeometry& geometry,
                            std::uint64_t n_committees, const ThreatParams& threat) {
  RoundOutcome out;
  out.bad_counts.reserve(n_committees);
  out.sizes.reserve(n_committees);
  for (std::uint64_t i = 0; i < n_committees; ++i) {
    const Committee c = select_committee(universe, seed, CommitteeId{i, round}, params, geometry);
    const std::size_t bad = c.bad_count();
    out.bad_counts.push_back(bad);
    out.sizes.push_back(c.members.size());
    if (bad >= static_cast<std::size_t>(threat.k_bar)) {
      ++out.bad_committees;
    }
    if (c.members.size() < static_cast<std::size_t>(params.k)) {
      ++out.undersized_count;
    }
    for (const auto& spot : c.spots) {
      ++out.spots;
      if (static_cast<double>(spot.candidates) < geometry.cap_real) {
        ++out.short_spots;
      }
    }
  }
  out.bad_round = out.bad_committees > 0;
  return out;
}

/// Integer-only partial sums; merging is associative and commutative, so the
/// totals are identical for any split of trials across workers.
struct Accumulator {
  std::uint64_t bad_rounds = 0;
  std::uint64_t committees = 0;
  std::uint64_t bad_committees = 0;
  std::uint64_t undersized = 0;
  std::uint64_t spots = 0;
  std::uint64_t short_spots = 0;
  std::uint64_t size_sum = 0;
  std::vector<std::uint64_t> histogram;

  void add(const RoundOutcome& r) {
    bad_rounds += r.bad_round ? 1 : 0;
    committees += r.sizes.size();
    bad_committees += r.bad_committees;
    undersized += r.undersized_count;
    spots += r.spots;
    short_spots += r.short_spots;
    for (const std::size_t s : r.sizes) {
      if (s >= histogram.size()) {
        histogram.resize(s + 1, 0);
      }
      ++histogram[s];
      size_sum += s;
    }
  }

  void merge(const Accumulator& o) {
    bad_rounds += o.bad_rounds;
    committees += o.committees;
    bad_committees += o.bad_committees;
    undersized += o.undersized;
    spots += o.spots;
    short_spots += o.short_spots;
    size_sum += o.size_sum;
    if (o.histogram.size() > histogram.size()) {
      histogram.resize(o.histogram.size(), 0);
    }
    for (std::size_t i = 0; i < o.histogram.size(); ++i) {
      histogram[i] += o.histogram[i];
    }
  }
};

unsigned resolve_workers(unsigned requested) {
  if (requested != 0) {
    return requested;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

RoundOutcome run_round(const Universe& universe, const RoundSeed& seed, std::uint64_t round,
                       const SelectionParams& params, std::uint64_t n_committees,
                       const ThreatParams& threat) {
  threat.validate();
  return run_round_with(universe, seed, round, params, SpotGeometry::of(params), n_committees, threat);
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) {
    return {0.0, 1.0};
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  const double low = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double high = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {low, high};
}

double TrialReport::per_committee_bad_rate() const {
  return committees == 0 ? 0.0 : static_cast<double>(bad_committees) / static_cast<double>(committees);
}

double TrialReport::short_spot_rate() const {
  return spots == 0 ? 0.0 : static_cast<double>(short_spots) / static_cast<double>(spots);
}

TrialReport estimate_attack_probability(const SelectionParams& params, std::uint64_t n_committees,
                                        const ThreatParams& threat, std::uint64_t trials,
                                        std::uint64_t master_seed, RunOptions options) {
  params.validate();
  threat.validate();
  if (trials < 1) {
    throw std::invalid_argument("trials must be >= 1");
  }
  if (threat.accounting == SybilAccounting::WithinN && threat.m > params.n_nodes) {
    throw std::invalid_argument("m exceeds N");
  }
  const SpotGeometry geometry = SpotGeometry::of(params);
  Universe shared;
  if (options.fixed_universe) {
    shared = build_universe(params, threat.m, threat.strategy,
                            derive_seed(master_seed, SeedPurpose::Universe), threat.accounting);
  }

  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(options.workers), trials));
  std::vector<Accumulator> partial(workers);
  std::atomic<std::uint64_t> next{0};
  auto work = [&](Accumulator& acc) {
    for (std::uint64_t t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
      const std::uint64_t trial_seed = derive_seed(master_seed, SeedPurpose::Trial, t);
      const RoundSeed round_seed =
          RoundSeed::from_rng_seed(derive_seed(trial_seed, SeedPurpose::Round));
      if (options.fixed_universe) {
        acc.add(run_round_with(shared, round_seed, t, params, geometry, n_committees, threat));
      } else {
        const Universe universe =
            build_universe(params, threat.m, threat.strategy,
                           derive_seed(trial_seed, SeedPurpose::Universe), threat.accounting);
        acc.add(run_round_with(universe, round_seed, t, params, geometry, n_committees, threat));
      }
    }
  };
  if (workers == 1) {
    work(partial[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(work, std::ref(partial[w]));
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  Accumulator total;
  for (const auto& acc : partial) {
    total.merge(acc);
  }

  TrialReport r;
  r.params = params;
  r.threat = threat;
  r.n_committees = n_committees;
  r.trials = trials;
  r.bad_rounds = total.bad_rounds;
  r.p_hat = static_cast<double>(total.bad_rounds) / static_cast<double>(trials);
  r.ci_95 = wilson_interval(total.bad_rounds, trials);
  r.size_histogram = std::move(total.histogram);
  r.committees = total.committees;
  r.bad_committees = total.bad_committees;
  r.undersized_committees = total.undersized;
  r.undersized_rate =
      total.committees == 0 ? 0.0 : static_cast<double>(total.undersized) / total.committees;
  r.mean_size = total.committees == 0 ? 0.0 : static_cast<double>(total.size_sum) / total.committees;
  r.spots = total.spots;
  r.short_spots = total.short_spots;
  r.master_seed = master_seed;
  r.fixed_universe = options.fixed_universe;
  return r;
}

TrialReport committee_size_stats(const SelectionParams& params, std::uint64_t n_committees,
                                 const ThreatParams& threat, std::uint64_t trials,
                                 std::uint64_t master_seed, RunOptions options) {
  return estimate_attack_probability(params, n_committees, threat, trials, master_seed, options);
}

SelectionParams table1_params(std::uint64_t n_nodes, int gamma) {
  SelectionParams p;
  p.k = 20;
  p.alpha = 3.0;
  p.gamma = gamma;
  p.rho = 0.9;
  p.bits = 64;
  p.n_nodes = n_nodes;
  p.lookahead_e = 1;
  return p;
}

ThreatParams table1_threat(int k) {
  ThreatParams t;
  t.m = 200;
  t.k_bar = default_k_bar(k);
  t.strategy = PlacementStrategy::ClusteredStratified;
  t.accounting = SybilAccounting::OnTopOfN;
  return t;
}

std::uint64_t table1_committees(std::uint64_t n_nodes, int k) {
  return n_nodes / (2 * static_cast<std::uint64_t>(k));
}

std::uint64_t table1_trials(std::uint64_t n_nodes, int gamma, double trial_multiplier) {
  if (!(trial_multiplier > 0.0)) {
    throw std::invalid_argument("trial multiplier must be positive");
  }
  const double base = static_cast<double>(n_nodes) * gamma / 10.0;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(base * trial_multiplier - 1e-9)));
}

std::vector<Table1Cell> table1(std::uint64_t master_seed, double trial_multiplier, RunOptions options,
                               std::vector<std::uint64_t> ns, std::vector<int> gammas) {
  std::vector<Table1Cell> cells;
  const ThreatParams threat = table1_threat();
  for (const std::uint64_t n : ns) {
    for (const int gamma : gammas) {
      const SelectionParams params = table1_params(n, gamma);
      Table1Cell cell{n, gamma,
                      estimate_attack_probability(params, table1_committees(n), threat,
                                                  table1_trials(n, gamma, trial_multiplier),
                                                  master_seed, options)};
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::vector<StrategyResult> strategy_comparison(const SelectionParams& params,
                                                std::uint64_t n_committees, ThreatParams threat,
                                                std::uint64_t trials, std::uint64_t master_seed,
                                                RunOptions options) {
  std::vector<StrategyResult> out;
  for (const auto s : {PlacementStrategy::ClusteredEven, PlacementStrategy::ClusteredStratified,
                       PlacementStrategy::UniformRandom}) {
    threat.strategy = s;
    out.push_back({s, estimate_attack_probability(params, n_committees, threat, trials, master_seed,
                                                  options)});
  }
  return out;
}

}  // namespace spotsel
