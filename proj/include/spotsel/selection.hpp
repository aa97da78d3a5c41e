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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "spotsel/kid_space.hpp"
#include "spotsel/params.hpp"
#include "spotsel/population.hpp"

namespace spotsel {

/// Committee identifier <i, r>.
struct CommitteeId {
  std::uint64_t shard = 0;
  std::uint64_t round = 0;
};

/// 32 bytes of public round randomness.
struct RoundSeed {
  std::array<std::uint8_t, 32> bytes{};

  static RoundSeed from_rng_seed(std::uint64_t seed);
};

struct Spot {
  Kid center;
  u128 radius = 0;
  /// Sorted by distance to center, at most the cap.
  std::vector<Node> members;
  /// Nodes within the radius before truncation to the cap.
  std::size_t candidates = 0;
  bool truncated = false;
};

struct Committee {
  CommitteeId id;
  std::vector<Spot> spots;
  /// Union of spot members, deduplicated and sorted by Kid.
  std::vector<Node> members;

  std::size_t bad_count() const;
};

/// Byte encoding hashed for center j of committee i: R (32 bytes) || i || j,
/// with i and j as 8-byte big-endian integers.
std::array<std::uint8_t, 48> center_preimage(const RoundSeed& seed, std::uint64_t shard,
                                             std::uint64_t j);

/// Centers j = 1..gamma of committee id: kid_from_digest(sha256(preimage)).
std::vector<Kid> derive_centers(const RoundSeed& seed, const CommitteeId& id,
                                const SelectionParams& params);

/// Nodes within the spot radius of center, closest first, capped.
Spot select_spot(const Universe& universe, Kid center, const SelectionParams& params);
Spot select_spot(const Universe& universe, Kid center, const SpotGeometry& geometry);

Committee select_committee(const Universe& universe, const RoundSeed& seed, const CommitteeId& id,
                           const SelectionParams& params);
Committee select_committee(const Universe& universe, const RoundSeed& seed, const CommitteeId& id,
                           const SelectionParams& params, const SpotGeometry& geometry);

/// Local check: d(kid, center) < spot radius. Proves candidacy only.
bool verify_spot_membership(Kid kid, Kid center, const SelectionParams& params);

enum class MembershipVerdict { Member, NotMember, InconsistentClaim };

/// Checks kid against claimed per-spot member sets (one per center, in order).
/// A claimed set is inconsistent if any entry lies outside its radius or the
/// set exceeds the cap. Omitted closer nodes cannot be detected locally.
MembershipVerdict verify_committee_membership(Kid kid, const CommitteeId& id, const RoundSeed& seed,
                                              const SelectionParams& params,
                                              std::span<const std::vector<Kid>> spot_member_kids);

/// Maps a payload to a committee index in [0, n_committees) via FNV-1a.
std::uint64_t assign_to_committee(std::span<const std::uint8_t> payload, std::uint64_t n_committees);

}  // namespace spotsel
