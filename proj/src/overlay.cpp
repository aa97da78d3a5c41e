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

#include "spotsel/overlay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "spotsel/rng.hpp"

namespace spotsel {

RoutingTable::RoutingTable(Kid owner, std::vector<std::vector<std::uint32_t>> buckets)
    : owner_(owner), buckets_(std::move(buckets)) {
  for (const auto& bucket : buckets_) {
    all_.insert(all_.end(), bucket.begin(), bucket.end());
  }
  std::sort(all_.begin(), all_.end());
}

bool RoutingTable::knows(std::uint32_t position) const {
  return std::binary_search(all_.begin(), all_.end(), position);
}

Overlay::Overlay(Universe universe, OverlayConfig config, std::vector<RoutingTable> tables)
    : universe_(std::move(universe)), config_(config), tables_(std::move(tables)) {
  if (tables_.size() != universe_.size()) {
    throw std::invalid_argument("one routing table per node required");
  }
  if (config_.bucket_capacity == 0 || config_.lookup_parallelism == 0) {
    throw std::invalid_argument("bucket capacity and lookup parallelism must be positive");
  }
}

int Overlay::hop_limit() const {
  return config_.hop_limit > 0 ? config_.hop_limit : 4 * universe_.space().bits();
}

std::size_t Overlay::position_of(Kid kid) const {
  const std::size_t pos = universe_.find(kid);
  if (pos == universe_.size()) {
    throw std::invalid_argument("kid " + to_hex(universe_.space(), kid) + " is not in the overlay");
  }
  return pos;
}

Overlay build_overlay(Universe universe, OverlayConfig config, std::uint64_t seed) {
  Rng rng(derive_seed(seed, SeedPurpose::Overlay));
  const int b = universe.space().bits();
  const auto nodes = universe.nodes();
  std::vector<RoutingTable> tables;
  tables.reserve(nodes.size());
  std::vector<std::uint32_t> pool;
  for (const Node& self : nodes) {
    std::vector<std::vector<std::uint32_t>> buckets(static_cast<std::size_t>(b));
    for (int t = 0; t < b; ++t) {
      // Peers sharing exactly t leading bits: flip bit (b - 1 - t), rest free.
      const int level = b - 1 - t;
      const u128 start = ((self.kid.value >> level) ^ 1) << level;
      const auto [first, last] = universe.range_of(AlignedBlock{Kid{start}, level});
      const std::size_t eligible = last - first;
      auto& bucket = buckets[static_cast<std::size_t>(t)];
      if (eligible <= config.bucket_capacity) {
        for (std::size_t i = first; i < last; ++i) {
          bucket.push_back(static_cast<std::uint32_t>(i));
        }
        continue;
      }
      // Partial Fisher-Yates over the eligible range.
      pool.resize(eligible);
      std::iota(pool.begin(), pool.end(), static_cast<std::uint32_t>(first));
      for (std::size_t i = 0; i < config.bucket_capacity; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(eligible - i));
        std::swap(pool[i], pool[j]);
        bucket.push_back(pool[i]);
      }
      std::sort(bucket.begin(), bucket.end());
    }
    tables.emplace_back(self.kid, std::move(buckets));
  }
  return Overlay(std::move(universe), config, std::move(tables));
}

namespace {

struct Candidate {
  Distance distance;
  std::uint32_t position;
  bool queried = false;
};

/// Up to `count` contacts of `position` closest to target, plus itself.
std::vector<std::uint32_t> closest_known(const Overlay& overlay, std::uint32_t position, Kid target,
                                         std::size_t count) {
  const auto nodes = overlay.universe().nodes();
  std::vector<std::uint32_t> known(overlay.table(position).contacts().begin(),
                                   overlay.table(position).contacts().end());
  known.push_back(position);
  auto by_distance = [&](std::uint32_t a, std::uint32_t b) {
    return xor_distance(nodes[a].kid, target) < xor_distance(nodes[b].kid, target);
  };
  if (known.size() > count) {
    std::partial_sort(known.begin(), known.begin() + static_cast<std::ptrdiff_t>(count), known.end(),
                      by_distance);
    known.resize(count);
  } else {
    std::sort(known.begin(), known.end(), by_distance);
  }
  return known;
}

}  // namespace

LookupResult iterative_find_node(const Overlay& overlay, Kid origin, Kid target) {
  const auto nodes = overlay.universe().nodes();
  const std::size_t k = overlay.config().bucket_capacity;
  const std::size_t alpha = overlay.config().lookup_parallelism;
  const auto origin_pos = static_cast<std::uint32_t>(overlay.position_of(origin));

  std::vector<Candidate> shortlist;
  std::unordered_set<std::uint32_t> seen;
  auto learn = [&](std::uint32_t pos) {
    if (seen.insert(pos).second) {
      shortlist.push_back(Candidate{xor_distance(nodes[pos].kid, target), pos});
    }
  };
  auto order = [&] {
    std::sort(shortlist.begin(), shortlist.end(),
              [](const Candidate& a, const Candidate& b) { return a.distance < b.distance; });
  };

  for (const std::uint32_t pos : closest_known(overlay, origin_pos, target, k)) {
    learn(pos);
  }
  for (auto& c : shortlist) {
    c.queried = c.position == origin_pos;
  }
  order();

  LookupResult result;
  if (origin == target) {
    // The origin is the closest possible node.
    for (std::size_t i = 0; i < std::min(k, shortlist.size()); ++i) {
      result.closest.push_back(shortlist[i].position);
    }
    return result;
  }

  bool widen = false;
  while (true) {
    const std::size_t top = std::min(k, shortlist.size());
    std::vector<std::size_t> batch;
    const std::size_t width = widen ? k : alpha;
    for (std::size_t i = 0; i < top && batch.size() < width; ++i) {
      if (!shortlist[i].queried) {
        batch.push_back(i);
      }
    }
    if (batch.empty()) {
      break;
    }
    if (result.stats.hops >= overlay.hop_limit()) {
      result.ok = false;
      break;
    }
    ++result.stats.hops;
    const Distance best_before = shortlist.front().distance;
    std::vector<std::uint32_t> asked;
    for (const std::size_t i : batch) {
      shortlist[i].queried = true;
      asked.push_back(shortlist[i].position);
    }
    for (const std::uint32_t pos : asked) {
      result.stats.messages += 2;
      result.stats.contacted.push_back(nodes[pos].kid);
      for (const std::uint32_t reply : closest_known(overlay, pos, target, k)) {
        learn(reply);
      }
    }
    order();
    widen = !(shortlist.front().distance < best_before);
  }

  for (std::size_t i = 0; i < std::min(k, shortlist.size()); ++i) {
    result.closest.push_back(shortlist[i].position);
  }
  return result;
}

GossipResult gossip_within_spot(const Overlay& overlay, const Node& entry, const Spot& spot,
                                bool drop_by_adversarial) {
  const auto nodes = overlay.universe().nodes();
  std::vector<std::uint32_t> members;
  members.reserve(spot.members.size());
  for (const Node& m : spot.members) {
    members.push_back(static_cast<std::uint32_t>(overlay.position_of(m.kid)));
  }
  const auto entry_pos = static_cast<std::uint32_t>(overlay.position_of(entry.kid));
  if (std::find(members.begin(), members.end(), entry_pos) == members.end()) {
    throw std::invalid_argument("gossip entry is not a spot member");
  }

  GossipResult out;
  std::vector<std::uint32_t> informed{entry_pos};
  std::vector<std::uint32_t> frontier{entry_pos};
  auto is_informed = [&](std::uint32_t p) {
    return std::find(informed.begin(), informed.end(), p) != informed.end();
  };
  while (!frontier.empty()) {
    std::vector<std::uint32_t> next;
    for (const std::uint32_t sender : frontier) {
      if (drop_by_adversarial && nodes[sender].adversarial()) {
        continue;
      }
      const RoutingTable& table = overlay.table(sender);
      for (const std::uint32_t peer : members) {
        if (peer == sender || !table.knows(peer)) {
          continue;
        }
        ++out.messages;
        if (!is_informed(peer) &&
            std::find(next.begin(), next.end(), peer) == next.end()) {
          next.push_back(peer);
        }
      }
    }
    if (next.empty()) {
      break;
    }
    ++out.rounds;
    informed.insert(informed.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  for (const std::uint32_t p : informed) {
    if (!nodes[p].adversarial()) {
      out.reached.push_back(nodes[p].kid);
    }
  }
  std::sort(out.reached.begin(), out.reached.end());
  return out;
}

double DeliveryReport::coverage() const {
  return honest_total == 0 ? 1.0 : static_cast<double>(honest_reached) / static_cast<double>(honest_total);
}

namespace {

std::size_t honest_in(const Spot& spot) {
  return static_cast<std::size_t>(std::count_if(spot.members.begin(), spot.members.end(),
                                                [](const Node& n) { return !n.adversarial(); }));
}

/// Closest true spot member among lookup results, if any.
const Node* pick_entry(const Overlay& overlay, const LookupResult& lookup, const Spot& spot) {
  const auto nodes = overlay.universe().nodes();
  for (const std::uint32_t pos : lookup.closest) {
    for (const Node& m : spot.members) {
      if (m.kid == nodes[pos].kid) {
        return &m;
      }
    }
  }
  return nullptr;
}

struct SpotSend {
  SpotDelivery delivery;
  GossipResult gossip;
  std::uint64_t messages = 0;
};

SpotSend send_to_spot(const Overlay& overlay, Kid origin, const Spot& spot, bool drop) {
  SpotSend out;
  out.delivery.center = spot.center;
  out.delivery.honest_total = honest_in(spot);
  const LookupResult lookup = iterative_find_node(overlay, origin, spot.center);
  out.delivery.lookup_ok = lookup.ok;
  out.delivery.hops = lookup.stats.hops;
  out.messages += lookup.stats.messages;
  if (const Node* entry = pick_entry(overlay, lookup, spot)) {
    out.delivery.entry_found = true;
    out.delivery.entry = entry->kid;
    if (entry->kid != origin) {
      ++out.messages;
    }
    out.gossip = gossip_within_spot(overlay, *entry, spot, drop);
    out.delivery.gossip_rounds = out.gossip.rounds;
    out.delivery.honest_reached = out.gossip.reached.size();
    out.messages += out.gossip.messages;
  }
  return out;
}

}  // namespace

DeliveryReport deliver_to_committee(const Overlay& overlay, Kid origin, const CommitteeId& id,
                                    const RoundSeed& seed, const SelectionParams& params,
                                    bool drop_by_adversarial) {
  overlay.position_of(origin);
  const Committee committee = select_committee(overlay.universe(), seed, id, params);
  DeliveryReport report;
  for (const Spot& spot : committee.spots) {
    const SpotSend sent = send_to_spot(overlay, origin, spot, drop_by_adversarial);
    report.messages += sent.messages;
    report.max_hops = std::max(report.max_hops, sent.delivery.hops);
    report.honest_reached += sent.delivery.honest_reached;
    report.honest_total += sent.delivery.honest_total;
    if (!spot.members.empty() && !sent.delivery.entry_found) {
      ++report.failures;
    }
    report.spots.push_back(sent.delivery);
  }
  return report;
}

ExchangeReport exchange_member_lists(const Overlay& overlay, const Committee& committee,
                                     bool drop_by_adversarial) {
  ExchangeReport report;
  const std::size_t gamma = committee.spots.size();
  for (const Node& m : committee.members) {
    if (!m.adversarial()) {
      report.honest_members.push_back(m.kid);
    }
  }
  report.knowledge.assign(report.honest_members.size(), std::vector<bool>(gamma, false));
  auto learn = [&](const std::vector<Kid>& reached, std::size_t roster) {
    for (const Kid kid : reached) {
      const auto it = std::lower_bound(report.honest_members.begin(), report.honest_members.end(), kid);
      if (it != report.honest_members.end() && *it == kid) {
        report.knowledge[static_cast<std::size_t>(it - report.honest_members.begin())][roster] = true;
      }
    }
  };

  std::vector<bool> roster_needed(gamma, false);
  for (std::size_t a = 0; a < gamma; ++a) {
    const Spot& spot = committee.spots[a];
    roster_needed[a] = !spot.members.empty();
    const auto sender = std::find_if(spot.members.begin(), spot.members.end(),
                                     [](const Node& n) { return !n.adversarial(); });
    if (sender == spot.members.end()) {
      continue;
    }
    const GossipResult own = gossip_within_spot(overlay, *sender, spot, drop_by_adversarial);
    report.messages += own.messages;
    learn(own.reached, a);
    for (std::size_t b = 0; b < gamma; ++b) {
      if (b == a) {
        continue;
      }
      ++report.spot_pairs;
      const SpotSend sent = send_to_spot(overlay, sender->kid, committee.spots[b], drop_by_adversarial);
      report.messages += sent.messages;
      report.inter_spot_messages += sent.messages;
      learn(sent.gossip.reached, a);
    }
  }
  for (const auto& row : report.knowledge) {
    bool full = true;
    for (std::size_t j = 0; j < gamma; ++j) {
      if (roster_needed[j] && !row[j]) {
        full = false;
      }
    }
    if (full) {
      ++report.full_roster_members;
    }
  }
  return report;
}

RouteProfile route_cost_profile(const Overlay& overlay, const SelectionParams& params,
                                std::size_t samples, std::uint64_t seed, bool drop_by_adversarial) {
  RouteProfile profile;
  const auto nodes = overlay.universe().nodes();
  std::vector<std::uint32_t> honest;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].adversarial()) {
      honest.push_back(static_cast<std::uint32_t>(i));
    }
  }
  if (honest.empty() || samples == 0) {
    return profile;
  }
  const std::uint64_t committees =
      std::max<std::uint64_t>(1, params.n_nodes / (2 * static_cast<std::uint64_t>(params.k)));
  double message_sum = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::uint64_t sample_seed = derive_seed(seed, SeedPurpose::Sample, s);
    Rng rng(sample_seed);
    const Kid origin = nodes[honest[rng.below(honest.size())]].kid;
    const CommitteeId id{rng.below(committees), s};
    const RoundSeed round = RoundSeed::from_rng_seed(rng.next_u64());
    const DeliveryReport report =
        deliver_to_committee(overlay, origin, id, round, params, drop_by_adversarial);
    for (const auto& spot : report.spots) {
      profile.lookup_hops.push_back(spot.hops);
      if (!spot.lookup_ok) {
        ++profile.failures;
      }
    }
    profile.failures += report.failures;
    profile.delivery_messages.push_back(report.messages);
    message_sum += static_cast<double>(report.messages);
    profile.honest_reached += report.honest_reached;
    profile.honest_total += report.honest_total;
  }
  if (!profile.lookup_hops.empty()) {
    std::vector<int> sorted = profile.lookup_hops;
    std::sort(sorted.begin(), sorted.end());
    profile.mean_hops = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
    const auto idx = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(sorted.size()))) - 1;
    profile.p99_hops = sorted[std::min(idx, sorted.size() - 1)];
    profile.max_hops = sorted.back();
  }
  profile.mean_messages = message_sum / static_cast<double>(samples);
  profile.coverage = profile.honest_total == 0
                         ? 1.0
                         : static_cast<double>(profile.honest_reached) / static_cast<double>(profile.honest_total);
  return profile;
}

}  // namespace spotsel
