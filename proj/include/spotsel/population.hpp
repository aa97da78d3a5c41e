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
#include <span>
#include <stdexcept>
#include <vector>

#include "spotsel/kid_space.hpp"
#include "spotsel/params.hpp"

namespace spotsel {

enum class Allegiance : std::uint8_t { Honest, Adversarial };

struct Node {
  Kid kid;
  Allegiance allegiance = Allegiance::Honest;
  std::uint32_t index = 0;

  bool adversarial() const { return allegiance == Allegiance::Adversarial; }
};

/// Raised when Kid placement cannot avoid collisions within the retry budget,
/// or when the space cannot hold the requested node count.
class PlacementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The node universe, sorted ascending by Kid with pairwise distinct Kids.
class Universe {
 public:
  Universe() : space_(64) {}
  /// Takes ownership of nodes; sorts them and validates distinctness.
  Universe(KidSpace space, std::vector<Node> nodes);

  const KidSpace& space() const { return space_; }
  std::span<const Node> nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t n_bad() const { return n_bad_; }
  std::size_t n_honest() const { return nodes_.size() - n_bad_; }
  bool empty() const { return nodes_.empty(); }

  /// Position of the node holding kid, or size() if absent.
  std::size_t find(Kid kid) const;
  bool contains(Kid kid) const { return find(kid) != size(); }
  /// Index range [first, last) of nodes whose Kids fall inside the block.
  std::pair<std::size_t, std::size_t> range_of(const AlignedBlock& block) const;
  std::pair<std::size_t, std::size_t> range_of(const AlignedBlock& block, std::size_t lo,
                                               std::size_t hi) const;

 private:
  KidSpace space_;
  std::vector<Node> nodes_;
  std::size_t n_bad_ = 0;
};

/// count honest nodes with independent uniform, pairwise distinct Kids.
/// Nodes are returned sorted by Kid and indexed 0..count-1 in that order.
std::vector<Node> generate_honest(const KidSpace& space, std::uint64_t count, std::uint64_t seed);

/// Places m adversarial nodes. Clustered strategies build floor(m / cluster_size)
/// clusters of cluster_size consecutive Kids inside the aligned block of size
/// 2^ceil(log2 cluster_size) containing each anchor; leftovers are uniform.
/// Kids in `occupied` (sorted) are avoided. Indices start at first_index.
std::vector<Node> place_adversary(const KidSpace& space, std::uint64_t m, std::uint64_t cluster_size,
                                  PlacementStrategy strategy, std::uint64_t seed,
                                  std::span<const Node> occupied = {},
                                  std::uint32_t first_index = 0);

/// The aligned block of size 2^ceil(log2 cluster_size) holding the cluster
/// anchored at `anchor`. Cluster members fill it from its start.
AlignedBlock cluster_block(Kid anchor, std::uint64_t cluster_size);

/// Honest nodes (N - m, or N when accounting is OnTopOfN) plus m adversarial
/// nodes placed with cluster size floor(l).
Universe build_universe(const SelectionParams& params, std::uint64_t m, PlacementStrategy strategy,
                        std::uint64_t seed,
                        SybilAccounting accounting = SybilAccounting::WithinN);

/// Writes `kid_hex,allegiance,index` lines.
void write_universe(std::ostream& out, const Universe& universe);
Universe read_universe(std::istream& in, const KidSpace& space);

}  // namespace spotsel
