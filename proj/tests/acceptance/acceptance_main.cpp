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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spotsel/attack_sim.hpp"
#include "spotsel/bounds.hpp"
#include "spotsel/cli.hpp"
#include "spotsel/overlay.hpp"
#include "spotsel/rng.hpp"
#include "spotsel/selection.hpp"

namespace {

using namespace spotsel;

constexpr std::uint64_t kSeed = 42;
constexpr double kTrialMultiplier = 10.0;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) {
      detail += "; ";
    }
    detail += why;
  }
  void note(const std::string& what) {
    if (!detail.empty()) {
      detail += "; ";
    }
    detail += what;
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string cell_name(std::uint64_t n, int gamma) {
  return "N=" + std::to_string(n) + ",g=" + std::to_string(gamma);
}

const Table1Cell& cell(const std::vector<Table1Cell>& grid, std::uint64_t n, int gamma) {
  for (const auto& c : grid) {
    if (c.n_nodes == n && c.gamma == gamma) {
      return c;
    }
  }
  throw std::logic_error("missing cell " + cell_name(n, gamma));
}

void expect_range(Outcome& o, const std::vector<Table1Cell>& grid, std::uint64_t n, int gamma,
                  double lo, double hi) {
  const double p = cell(grid, n, gamma).report.p_hat;
  const std::string s = cell_name(n, gamma) + " p=" + fmt("%.4f", p);
  if (p < lo || p > hi) {
    o.fail(s + " outside [" + fmt("%.3f", lo) + "," + fmt("%.3f", hi) + "]");
  } else {
    o.note(s);
  }
}

Outcome criterion1(const std::vector<Table1Cell>& grid) {
  Outcome o;
  expect_range(o, grid, 1000, 1, 0.70, 0.90);
  expect_range(o, grid, 3000, 1, 0.71, 0.91);
  return o;
}

Outcome criterion2(const std::vector<Table1Cell>& grid) {
  Outcome o;
  expect_range(o, grid, 1000, 5, 0.0, 0.02);
  expect_range(o, grid, 10000, 2, 0.026 - 0.02, 0.026 + 0.02);
  expect_range(o, grid, 3000, 5, 0.0, 0.005);
  expect_range(o, grid, 10000, 5, 0.0, 0.005);
  return o;
}

Outcome criterion3(const std::vector<Table1Cell>& grid) {
  Outcome o;
  double worst = -1e9;
  for (const auto& a : grid) {
    for (const auto& b : grid) {
      if (a.n_nodes != b.n_nodes || b.gamma <= a.gamma) {
        continue;
      }
      const double n1 = static_cast<double>(a.report.trials);
      const double n2 = static_cast<double>(b.report.trials);
      const double pooled =
          static_cast<double>(a.report.bad_rounds + b.report.bad_rounds) / (n1 + n2);
      const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2));
      const double rise = b.report.p_hat - a.report.p_hat;
      worst = std::max(worst, se > 0 ? rise / se : (rise > 0 ? 1e9 : -1e9));
      if (rise > 2.0 * se) {
        o.fail(cell_name(a.n_nodes, a.gamma) + " -> g=" + std::to_string(b.gamma) + " rises by " +
               fmt("%.4f", rise) + " > 2se=" + fmt("%.4f", 2 * se));
      }
    }
  }
  o.note("largest rise " + fmt("%.2f", worst) + " se");
  return o;
}

Outcome criterion4(const std::vector<Table1Cell>& grid) {
  Outcome o;
  const ThreatParams threat = table1_threat();
  int checked = 0;
  for (const auto& c : grid) {
    const SelectionParams p = table1_params(c.n_nodes, c.gamma);
    const std::uint64_t k_committees = table1_committees(c.n_nodes);
    const bounds::BoundReport b = bounds::chernoff_attack_bound(p, threat, k_committees);
    // oracle: P[X >= z_bar], X ~ Binomial(gamma, p_exact), by direct summation
    double tail = 0.0;
    for (std::uint64_t x = b.z_bar; x <= static_cast<std::uint64_t>(c.gamma); ++x) {
      double choose = 1.0;
      for (std::uint64_t i = 0; i < x; ++i) {
        choose = choose * static_cast<double>(c.gamma - static_cast<int>(i)) / static_cast<double>(i + 1);
      }
      tail += choose * std::pow(b.p_exact, static_cast<double>(x)) *
              std::pow(1.0 - b.p_exact, static_cast<double>(c.gamma) - static_cast<double>(x));
    }
    const double emp = c.report.per_committee_bad_rate();
    const double n = static_cast<double>(c.report.committees);
    const double se = std::sqrt(emp * (1.0 - emp) / n);
    const std::string name = cell_name(c.n_nodes, c.gamma);
    if (std::abs(tail - b.exact_tail) > 1e-12 + 1e-9 * tail) {
      o.fail(name + " library tail " + fmt("%.6g", b.exact_tail) + " != oracle " + fmt("%.6g", tail));
    }
    if (emp - 3.0 * se > tail) {
      o.fail(name + " empirical " + fmt("%.5f", emp) + " (se " + fmt("%.5f", se) + ") > exact tail " +
             fmt("%.5f", tail));
    }
    if (tail > b.per_committee_bound * (1.0 + 1e-12)) {
      o.fail(name + " exact tail " + fmt("%.5g", tail) + " > chernoff " + fmt("%.5g", b.per_committee_bound));
    }
    ++checked;
  }
  o.note(std::to_string(checked) + " cells");
  return o;
}

Outcome criterion5(const std::vector<Table1Cell>& grid) {
  Outcome o;
  ThreatParams honest = table1_threat();
  honest.m = 0;
  double worst_gap = 0.0;
  double worst_z = 0.0;
  for (const auto& c : grid) {
    const SelectionParams p = table1_params(c.n_nodes, c.gamma);
    const std::string name = cell_name(c.n_nodes, c.gamma);
    const double approx = bounds::robustness_shortfall(p);
    const double exact = bounds::exact_spot_shortfall(p);
    worst_gap = std::max(worst_gap, std::abs(approx - exact));
    if (std::abs(approx - exact) > 0.05) {
      o.fail(name + " |phi - exact| = " + fmt("%.4f", std::abs(approx - exact)));
    }
    // honest-only universes: spot populations are exactly Binomial(N, radius / 2^b)
    const TrialReport r = committee_size_stats(p, table1_committees(c.n_nodes), honest,
                                               table1_trials(c.n_nodes, c.gamma, 1.0),
                                               derive_seed(kSeed, SeedPurpose::Trial, c.n_nodes * 10 + c.gamma),
                                               {false, 0});
    const double n = static_cast<double>(r.spots);
    const double se = std::sqrt(exact * (1.0 - exact) / n);
    const double gap = std::abs(r.short_spot_rate() - exact);
    if (se > 0) {
      worst_z = std::max(worst_z, gap / se);
    }
    if (gap > 3.0 * se) {
      o.fail(name + " short-spot rate " + fmt("%.5f", r.short_spot_rate()) + " vs exact " + fmt("%.5f", exact) +
             " (se " + fmt("%.5f", se) + ")");
    }
  }
  o.note("max |phi-exact| " + fmt("%.4f", worst_gap) + ", max empirical gap " + fmt("%.2f", worst_z) + " se");
  return o;
}

// Linear-scan reference: every node inside the radius, closest first, capped.
std::vector<Kid> oracle_spot(const Universe& u, Kid center, u128 radius, std::size_t cap,
                             std::size_t& candidates) {
  std::vector<std::pair<u128, Kid>> inside;
  for (const auto& n : u.nodes()) {
    const u128 d = n.kid.value ^ center.value;
    if (d < radius) {
      inside.emplace_back(d, n.kid);
    }
  }
  std::sort(inside.begin(), inside.end());
  candidates = inside.size();
  std::vector<Kid> out;
  for (std::size_t i = 0; i < inside.size() && i < cap; ++i) {
    out.push_back(inside[i].second);
  }
  return out;
}

Outcome criterion6() {
  Outcome o;
  Rng rng(derive_seed(kSeed, SeedPurpose::Trial, 6));
  const double alphas[] = {1.25, 1.5, 2.0, 3.0, 4.0, 5.0};
  const double rhos[] = {0.3, 0.5, 0.75, 0.9};
  const PlacementStrategy strategies[] = {PlacementStrategy::ClusteredEven, PlacementStrategy::ClusteredStratified,
                                          PlacementStrategy::UniformRandom};
  std::uint64_t draws = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t spots = 0;
  while (draws < 10000) {
    SelectionParams p;
    p.bits = 8 + static_cast<int>(rng.below(3));
    const std::uint64_t space = std::uint64_t{1} << p.bits;
    p.n_nodes = 8 + rng.below(space / 2 - 8);
    p.k = 1 + static_cast<int>(rng.below(24));
    p.alpha = alphas[rng.below(6)];
    p.gamma = 1 + static_cast<int>(rng.below(6));
    p.rho = rhos[rng.below(4)];
    Universe u;
    try {
      p.validate();
      spot_radius(p);
      spot_cap(p);
      const std::uint64_t m = rng.below(p.n_nodes / 3 + 1);
      u = build_universe(p, m, strategies[rng.below(3)], rng.next_u64());
    } catch (const std::exception&) {
      continue;
    }
    ++draws;
    const u128 radius = spot_radius(p);
    const std::size_t cap = spot_cap(p);
    const RoundSeed seed = RoundSeed::from_rng_seed(rng.next_u64());
    const CommitteeId id{rng.below(64), rng.below(8)};
    const Committee c = select_committee(u, seed, id, p);
    const std::vector<Kid> centers = derive_centers(seed, id, p);
    bool same = c.spots.size() == centers.size();
    std::set<Kid> expected_union;
    for (std::size_t j = 0; same && j < centers.size(); ++j) {
      std::size_t candidates = 0;
      const std::vector<Kid> want = oracle_spot(u, centers[j], radius, cap, candidates);
      const Spot& got = c.spots[j];
      same = got.center == centers[j] && got.candidates == candidates && got.members.size() == want.size();
      for (std::size_t i = 0; same && i < want.size(); ++i) {
        same = got.members[i].kid == want[i];
      }
      // the single-spot entry point must agree as well
      const Spot alone = select_spot(u, centers[j], p);
      same = same && alone.members.size() == got.members.size() &&
             std::equal(alone.members.begin(), alone.members.end(), got.members.begin(),
                        [](const Node& a, const Node& b) { return a.kid == b.kid; });
      expected_union.insert(want.begin(), want.end());
      ++spots;
    }
    same = same && c.members.size() == expected_union.size() &&
           std::equal(c.members.begin(), c.members.end(), expected_union.begin(),
                      [](const Node& a, Kid b) { return a.kid == b; });
    mismatches += !same;
  }
  if (mismatches > 0) {
    o.fail(std::to_string(mismatches) + " of " + std::to_string(draws) + " committee draws differ from the scan");
  } else {
    o.note(std::to_string(draws) + " committee draws (" + std::to_string(spots) + " spots) identical");
  }

  // Ball decomposition against enumeration, every (center, radius) at b = 8 and 9.
  std::uint64_t balls = 0;
  std::uint64_t bad_balls = 0;
  for (int bits : {8, 9}) {
    const KidSpace space(bits);
    const std::uint64_t size = std::uint64_t{1} << bits;
    for (std::uint64_t v = 0; v < size; ++v) {
      for (std::uint64_t q = 0; q <= size; ++q) {
        std::vector<std::uint8_t> covered(size, 0);
        bool ok = true;
        std::uint64_t total = 0;
        for (const AlignedBlock& blk : xor_ball_blocks(space, Kid{v}, q)) {
          for (u128 x = blk.start.value; x <= blk.last().value; ++x) {
            ok = ok && covered[static_cast<std::size_t>(x)] == 0;
            covered[static_cast<std::size_t>(x)] = 1;
            ++total;
          }
        }
        for (std::uint64_t x = 0; ok && x < size; ++x) {
          ok = (covered[x] != 0) == ((x ^ v) < q);
        }
        ok = ok && total == q;
        ++balls;
        bad_balls += !ok;
      }
    }
  }
  if (bad_balls > 0) {
    o.fail(std::to_string(bad_balls) + " of " + std::to_string(balls) + " balls wrong");
  } else {
    o.note(std::to_string(balls) + " balls exact");
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  SelectionParams p;
  p.bits = 16;
  p.n_nodes = 512;
  const std::uint64_t rounds = 10000;
  const std::size_t n = p.n_nodes;
  std::vector<std::uint64_t> counts(n, 0);
  std::uint64_t total = 0;
  for (std::uint64_t r = 0; r < rounds; ++r) {
    const std::uint64_t s = derive_seed(kSeed, SeedPurpose::Trial, 7000000 + r);
    const Universe u = build_universe(p, 0, PlacementStrategy::UniformRandom, derive_seed(s, SeedPurpose::Universe));
    const Committee c = select_committee(u, RoundSeed::from_rng_seed(derive_seed(s, SeedPurpose::Round)), {0, r}, p);
    for (const Node& m : c.members) {
      ++counts[m.index];
      ++total;
    }
  }
  const double expected = static_cast<double>(total) / static_cast<double>(n);
  double chi2 = 0.0;
  for (const auto x : counts) {
    chi2 += (static_cast<double>(x) - expected) * (static_cast<double>(x) - expected) / expected;
  }
  const boost::math::chi_squared dist(static_cast<double>(n - 1));
  const double critical = boost::math::quantile(dist, 0.99);
  const double pvalue = boost::math::cdf(boost::math::complement(dist, chi2));
  const std::string s = "chi2=" + fmt("%.1f", chi2) + " df=" + std::to_string(n - 1) + " crit=" +
                        fmt("%.1f", critical) + " p=" + fmt("%.3f", pvalue) + " selections=" +
                        std::to_string(total);
  if (chi2 > critical) {
    o.fail(s);
  } else {
    o.note(s);
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  for (std::uint64_t n : {500u, 1000u, 2000u, 4000u}) {
    for (int gamma : {1, 3}) {
      SelectionParams p = table1_params(n, gamma);
      const std::uint64_t s = derive_seed(kSeed, SeedPurpose::Trial, 8000 + n + static_cast<std::uint64_t>(gamma));
      const Universe u = build_universe(p, 0, PlacementStrategy::UniformRandom, derive_seed(s, SeedPurpose::Universe));
      const Overlay overlay = build_overlay(u, {}, derive_seed(s, SeedPurpose::Overlay));
      const RouteProfile r = route_cost_profile(overlay, p, 200, derive_seed(s, SeedPurpose::Sample));
      const double limit = 1.5 * std::log2(static_cast<double>(n));
      const std::string name = cell_name(n, gamma) + " hops " + fmt("%.2f", r.mean_hops) + " cov " +
                               fmt("%.4f", r.coverage);
      if (r.mean_hops > limit || r.coverage < 0.99) {
        o.fail(name + " (limit " + fmt("%.2f", limit) + ")");
      } else {
        o.note(name);
      }
    }
  }
  return o;
}

Outcome criterion9() {
  Outcome o;
  const std::vector<std::vector<std::string>> commands = {
      {"table1", "--ns", "1000,3000", "--gammas", "1,3", "--trial-multiplier", "0.5"},
      {"table1", "--ns", "1000", "--gammas", "2", "--fixed-universe"},
      {"attack", "--N", "2000", "--gamma", "2", "--trials", "120", "--strategy", "all"},
      {"attack", "--N", "1000", "--gamma", "1", "--trials", "80", "--accounting", "within"},
      {"bounds", "--N", "3000", "--gammas", "1,2,3,4,5", "--target", "0.01"},
      {"route", "--N", "500,1000", "--gamma", "2", "--samples", "60"},
      {"select", "--N", "1000", "--gamma", "3", "--shard", "4", "--round", "7"},
  };
  int identical = 0;
  for (const auto& cmd : commands) {
    std::string reference;
    bool ok = true;
    for (const char* workers : {"1", "2", "5"}) {
      std::vector<std::string> args = {"--seed", "1234", "--workers", workers, "--format", "csv"};
      args.insert(args.end(), cmd.begin(), cmd.end());
      std::ostringstream out;
      std::ostringstream err;
      const int code = cli::run(args, out, err);
      if (code != 0) {
        o.fail(cmd[0] + " exited " + std::to_string(code) + ": " + err.str());
        ok = false;
        break;
      }
      if (reference.empty()) {
        reference = out.str();
      } else if (out.str() != reference) {
        o.fail(cmd[0] + " output differs at --workers " + workers);
        ok = false;
      }
    }
    if (ok && reference.empty()) {
      o.fail(cmd[0] + " produced no output");
      ok = false;
    }
    identical += ok;
  }
  o.note(std::to_string(identical) + "/" + std::to_string(commands.size()) + " commands byte-identical");
  return o;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  std::fprintf(stderr, "running the grid at %gx trials...\n", kTrialMultiplier);
  const std::vector<Table1Cell> grid = table1(kSeed, kTrialMultiplier, {false, 0});
  std::fprintf(stderr, "grid done in %.0f s\n", std::chrono::duration<double>(clock::now() - t0).count());

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"table1 high-probability cells", [&] { return criterion1(grid); }},
      {"table1 decay cells", [&] { return criterion2(grid); }},
      {"monotone in gamma", [&] { return criterion3(grid); }},
      {"empirical <= exact tail <= chernoff", [&] { return criterion4(grid); }},
      {"robustness approximation", [&] { return criterion5(grid); }},
      {"oracle equivalence", criterion6},
      {"selection uniformity", criterion7},
      {"routing cost and coverage", criterion8},
      {"determinism across workers", criterion9},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
