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

#include "spotsel/population.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "spotsel/rng.hpp"

namespace spotsel {

namespace {

constexpr int kRetryBudget = 64;

bool kid_less(const Node& a, const Node& b) { return a.kid < b.kid; }

/// floor(2^b / z) without overflowing at b = 128.
u128 slice_width(const KidSpace& space, u128 z) {
  if (space.bits() < 128) {
    return space.size() / z;
  }
  const u128 all = ~u128{0};
  return all / z + ((all % z) == z - 1 ? 1 : 0);
}

class Occupancy {
 public:
  explicit Occupancy(std::span<const Node> fixed) : fixed_(fixed) {}

  bool block_free(const AlignedBlock& block) const {
    auto lo = std::lower_bound(fixed_.begin(), fixed_.end(), block.start,
                               [](const Node& n, Kid k) { return n.kid < k; });
    if (lo != fixed_.end() && lo->kid <= block.last()) {
      return false;
    }
    auto it = placed_.lower_bound(block.start.value);
    return it == placed_.end() || *it > block.last().value;
  }

  bool kid_free(Kid k) const { return block_free(AlignedBlock{k, 0}); }

  void take(Kid k) { placed_.insert(k.value); }

 private:
  std::span<const Node> fixed_;
  std::set<u128> placed_;
};

}  // namespace

Universe::Universe(KidSpace space, std::vector<Node> nodes) : space_(space), nodes_(std::move(nodes)) {
  if (!std::is_sorted(nodes_.begin(), nodes_.end(), kid_less)) {
    std::sort(nodes_.begin(), nodes_.end(), kid_less);
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    space_.check(nodes_[i].kid);
    if (i > 0 && nodes_[i - 1].kid == nodes_[i].kid) {
      throw PlacementError("duplicate kid " + to_hex(space_, nodes_[i].kid) + " in universe");
    }
    if (nodes_[i].adversarial()) {
      ++n_bad_;
    }
  }
}

std::size_t Universe::find(Kid kid) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), kid,
                             [](const Node& n, Kid k) { return n.kid < k; });
  if (it == nodes_.end() || it->kid != kid) {
    return nodes_.size();
  }
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::pair<std::size_t, std::size_t> Universe::range_of(const AlignedBlock& block) const {
  return range_of(block, 0, nodes_.size());
}

std::pair<std::size_t, std::size_t> Universe::range_of(const AlignedBlock& block, std::size_t lo,
                                                       std::size_t hi) const {
  const Node* base = nodes_.data();
  const Node* first = std::lower_bound(base + lo, base + hi, block.start,
                                       [](const Node& n, Kid k) { return n.kid < k; });
  const Node* last = std::upper_bound(first, base + hi, block.last(),
                                      [](Kid k, const Node& n) { return k < n.kid; });
  return {static_cast<std::size_t>(first - base), static_cast<std::size_t>(last - base)};
}

std::vector<Node> generate_honest(const KidSpace& space, std::uint64_t count, std::uint64_t seed) {
  if (space.bits() < 128 && static_cast<u128>(count) > space.size()) {
    throw PlacementError("cannot place " + std::to_string(count) + " distinct kids in a " +
                         std::to_string(space.bits()) + "-bit space");
  }
  Rng rng(seed);
  std::vector<u128> kids;
  kids.reserve(count);
  while (kids.size() < count) {
    const std::size_t before = kids.size();
    for (std::size_t i = before; i < count; ++i) {
      kids.push_back(rng.uniform_kid(space).value);
    }
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
  }
  std::vector<Node> nodes;
  nodes.reserve(count);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    nodes.push_back(Node{Kid{kids[i]}, Allegiance::Honest, static_cast<std::uint32_t>(i)});
  }
  return nodes;
}

AlignedBlock cluster_block(Kid anchor, std::uint64_t cluster_size) {
  const int level = std::bit_width(std::bit_ceil(cluster_size)) - 1;
  return AlignedBlock{Kid{(anchor.value >> level) << level}, level};
}

std::vector<Node> place_adversary(const KidSpace& space, std::uint64_t m, std::uint64_t cluster_size,
                                  PlacementStrategy strategy, std::uint64_t seed,
                                  std::span<const Node> occupied, std::uint32_t first_index) {
  if (cluster_size == 0) {
    throw std::invalid_argument("cluster_size must be at least 1");
  }
  std::vector<Node> out;
  if (m == 0) {
    return out;
  }
  Rng rng(seed);
  Occupancy occupancy(occupied);
  std::uint32_t next_index = first_index;
  auto emit = [&](Kid k) {
    occupancy.take(k);
    out.push_back(Node{k, Allegiance::Adversarial, next_index++});
  };

  const bool clustered = strategy != PlacementStrategy::UniformRandom;
  const std::uint64_t z = clustered ? m / cluster_size : 0;
  const std::uint64_t leftovers = m - z * cluster_size;

  if (z > 0) {
    const u128 block_len = std::bit_ceil(cluster_size);
    if (space.bits() < 128 && static_cast<u128>(z) > space.size() / block_len) {
      throw PlacementError("too many clusters for the kid space");
    }
    const u128 width = slice_width(space, z);
    auto anchor_for = [&](std::uint64_t i, u128 offset) -> Kid {
      if (strategy == PlacementStrategy::ClusteredEven) {
        return Kid{(offset + width * i) & space.max_value()};
      }
      return Kid{width * i + rng.below128(width)};
    };

    if (strategy == PlacementStrategy::ClusteredEven) {
      // One global offset; on any collision the whole lattice is redrawn.
      bool placed = false;
      for (int attempt = 0; attempt < kRetryBudget && !placed; ++attempt) {
        const u128 offset = rng.uniform_kid(space).value;
        std::vector<AlignedBlock> blocks;
        blocks.reserve(z);
        placed = true;
        for (std::uint64_t i = 0; i < z; ++i) {
          const AlignedBlock block = cluster_block(anchor_for(i, offset), cluster_size);
          const bool repeats = !blocks.empty() && blocks.back().start == block.start;
          if (repeats || !occupancy.block_free(block)) {
            placed = false;
            break;
          }
          blocks.push_back(block);
        }
        if (placed) {
          for (const auto& block : blocks) {
            for (std::uint64_t c = 0; c < cluster_size; ++c) {
              emit(Kid{block.start.value + c});
            }
          }
        }
      }
      if (!placed) {
        throw PlacementError("evenly spaced clusters collide after retry budget");
      }
    } else {
      for (std::uint64_t i = 0; i < z; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < kRetryBudget && !placed; ++attempt) {
          const AlignedBlock block = cluster_block(anchor_for(i, 0), cluster_size);
          if (occupancy.block_free(block)) {
            for (std::uint64_t c = 0; c < cluster_size; ++c) {
              emit(Kid{block.start.value + c});
            }
            placed = true;
          }
        }
        if (!placed) {
          throw PlacementError("cluster " + std::to_string(i) + " collides after retry budget");
        }
      }
    }
  }

  for (std::uint64_t i = 0; i < leftovers; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kRetryBudget && !placed; ++attempt) {
      const Kid k = rng.uniform_kid(space);
      if (occupancy.kid_free(k)) {
        emit(k);
        placed = true;
      }
    }
    if (!placed) {
      throw PlacementError("adversarial node collides after retry budget");
    }
  }
  return out;
}

Universe build_universe(const SelectionParams& params, std::uint64_t m, PlacementStrategy strategy,
                        std::uint64_t seed, SybilAccounting accounting) {
  params.validate();
  const bool within = accounting == SybilAccounting::WithinN;
  if (within && m > params.n_nodes) {
    throw std::invalid_argument("m exceeds N");
  }
  const KidSpace space = params.space();
  const std::uint64_t honest_count = within ? params.n_nodes - m : params.n_nodes;
  std::vector<Node> honest =
      generate_honest(space, honest_count, derive_seed(seed, SeedPurpose::Honest));
  std::vector<Node> bad =
      place_adversary(space, m, spot_cap(params), strategy, derive_seed(seed, SeedPurpose::Adversary),
                      honest, static_cast<std::uint32_t>(honest_count));
  std::sort(bad.begin(), bad.end(), kid_less);
  std::vector<Node> all;
  all.reserve(honest.size() + bad.size());
  std::merge(honest.begin(), honest.end(), bad.begin(), bad.end(), std::back_inserter(all), kid_less);
  return Universe(space, std::move(all));
}

void write_universe(std::ostream& out, const Universe& universe) {
  for (const auto& node : universe.nodes()) {
    out << to_hex(universe.space(), node.kid) << ','
        << (node.adversarial() ? "adversarial" : "honest") << ',' << node.index << '\n';
  }
}

Universe read_universe(std::istream& in, const KidSpace& space) {
  std::vector<Node> nodes;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::istringstream fields(line);
    std::string hex, allegiance, index;
    if (!std::getline(fields, hex, ',') || !std::getline(fields, allegiance, ',') ||
        !std::getline(fields, index)) {
      throw std::invalid_argument("malformed universe line '" + line + "'");
    }
    Node node;
    node.kid = kid_from_hex(space, hex);
    if (allegiance == "honest") {
      node.allegiance = Allegiance::Honest;
    } else if (allegiance == "adversarial") {
      node.allegiance = Allegiance::Adversarial;
    } else {
      throw std::invalid_argument("unknown allegiance '" + allegiance + "'");
    }
    node.index = static_cast<std::uint32_t>(std::stoul(index));
    nodes.push_back(node);
  }
  return Universe(space, std::move(nodes));
}

}  // namespace spotsel
