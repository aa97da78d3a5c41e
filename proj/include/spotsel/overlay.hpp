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
#include <span>
#include <vector>

#include "spotsel/params.hpp"
#include "spotsel/population.hpp"
#include "spotsel/selection.hpp"

namespace spotsel {

struct OverlayConfig {
  std::size_t bucket_capacity = 20;
  std::size_t lookup_parallelism = 3;
  /// Maximum lookup rounds; 0 means 4 * b.
  int hop_limit = 0;
};

/// Kademlia routing table. Bucket t holds contacts sharing exactly t leading
/// bits with the owner. Contacts are positions in the overlay's universe.
class RoutingTable {
 public:
  RoutingTable() = default;
  RoutingTable(Kid owner, std::vector<std::vector<std::uint32_t>> buckets);

  Kid owner() const { return owner_; }
  const std::vector<std::vector<std::uint32_t>>& buckets() const { return buckets_; }
  /// All contacts, sorted by position.
  std::span<const std::uint32_t> contacts() const { return all_; }
  std::size_t size() const { return all_.size(); }
  bool knows(std::uint32_t position) const;

 private:
  Kid owner_;
  std::vector<std::vector<std::uint32_t>> buckets_;
  std::vector<std::uint32_t> all_;
};

/// Immutable simulated overlay over a universe.
class Overlay {
 public:
  Overlay(Universe universe, OverlayConfig config, std::vector<RoutingTable> tables);

  const Universe& universe() const { return universe_; }
  const OverlayConfig& config() const { return config_; }
  int hop_limit() const;
  const RoutingTable& table(std::size_t position) const { return tables_[position]; }
  /// Position of kid in the universe; throws if absent.
  std::size_t position_of(Kid kid) const;

 private:
  Universe universe_;
  OverlayConfig config_;
  std::vector<RoutingTable> tables_;
};

/// Idealized steady-state tables: each bucket gets up to bucket_capacity
/// uniformly sampled eligible peers. Deterministic per seed.
Overlay build_overlay(Universe universe, OverlayConfig config, std::uint64_t seed);

struct LookupStats {
  int hops = 0;
  std::uint64_t messages = 0;
  std::vector<Kid> contacted;
};

struct LookupResult {
  /// False when the hop limit stopped the lookup before convergence.
  bool ok = true;
  /// Up to bucket_capacity closest discovered positions, closest first.
  std::vector<std::uint32_t> closest;
  LookupStats stats;
};

/// Iterative FIND_NODE. Each round queries the lookup_parallelism closest
/// unqueried nodes of the shortlist; a round that brings nothing closer is
/// followed by a round querying every unqueried node among the
/// bucket_capacity closest. Ends once those are all queried. Each query
/// counts two messages.
LookupResult iterative_find_node(const Overlay& overlay, Kid origin, Kid target);

struct GossipResult {
  /// Honest spot members holding the message at fixpoint.
  std::vector<Kid> reached;
  int rounds = 0;
  std::uint64_t messages = 0;
};

/// Synchronous flooding within one spot: every newly informed member forwards
/// once to each spot member in its routing table. Adversarial members do not
/// forward when drop_by_adversarial is set.
GossipResult gossip_within_spot(const Overlay& overlay, const Node& entry, const Spot& spot,
                                bool drop_by_adversarial);

struct SpotDelivery {
  Kid center;
  bool lookup_ok = true;
  bool entry_found = false;
  Kid entry;
  int hops = 0;
  int gossip_rounds = 0;
  std::size_t honest_reached = 0;
  std::size_t honest_total = 0;
};

struct DeliveryReport {
  std::vector<SpotDelivery> spots;
  std::uint64_t messages = 0;
  int max_hops = 0;
  std::size_t honest_reached = 0;
  std::size_t honest_total = 0;
  /// Non-empty spots whose entry could not be reached.
  std::size_t failures = 0;

  double coverage() const;
};

/// gamma lookups toward the centers, entry = closest true spot member found,
/// then gossip inside each spot.
DeliveryReport deliver_to_committee(const Overlay& overlay, Kid origin, const CommitteeId& id,
                                    const RoundSeed& seed, const SelectionParams& params,
                                    bool drop_by_adversarial = false);

struct ExchangeReport {
  std::uint64_t messages = 0;
  std::uint64_t inter_spot_messages = 0;
  /// Ordered spot pairs (a, b), a != b, for which a roster was sent.
  std::uint64_t spot_pairs = 0;
  /// knowledge[i][j]: honest member i (in committee.members order restricted
  /// to honest nodes) holds the roster of spot j.
  std::vector<Kid> honest_members;
  std::vector<std::vector<bool>> knowledge;
  std::size_t full_roster_members = 0;
};

/// Pre-consensus roster exchange: for each spot, its honest member closest to
/// the center gossips the spot roster inside its own spot and sends it to
/// every other spot (lookup + delivery + gossip there).
ExchangeReport exchange_member_lists(const Overlay& overlay, const Committee& committee,
                                     bool drop_by_adversarial = false);

struct RouteProfile {
  std::vector<int> lookup_hops;
  std::vector<std::uint64_t> delivery_messages;
  std::size_t honest_reached = 0;
  std::size_t honest_total = 0;
  std::size_t failures = 0;
  double mean_hops = 0.0;
  int p99_hops = 0;
  int max_hops = 0;
  double mean_messages = 0.0;
  double coverage = 1.0;
};

/// Random (honest origin, committee) deliveries. Sample s uses
/// derive_seed(seed, Sample, s) for its origin, round seed and shard.
RouteProfile route_cost_profile(const Overlay& overlay, const SelectionParams& params,
                                std::size_t samples, std::uint64_t seed,
                                bool drop_by_adversarial = false);

}  // namespace spotsel
