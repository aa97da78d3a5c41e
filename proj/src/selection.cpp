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

#include "spotsel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include <boost/multiprecision/cpp_int.hpp>

#include "spotsel/digest.hpp"
#include "spotsel/rng.hpp"

namespace spotsel {

namespace mp = boost::multiprecision;

double SelectionParams::beta() const { return k * (1.0 + alpha) / (2.0 * gamma); }

double SelectionParams::cap_real() const { return k / std::pow(static_cast<double>(gamma), rho); }

void SelectionParams::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (k < 1) fail("k must be >= 1");
  if (!(alpha > 1.0) || !std::isfinite(alpha)) fail("alpha must be > 1");
  if (gamma < 1) fail("gamma must be >= 1");
  if (!(rho > 0.0 && rho < 1.0)) fail("rho must be in (0, 1)");
  if (bits < KidSpace::kMinBits || bits > KidSpace::kMaxBits) fail("bits must be in [8, 128]");
  if (n_nodes < 1) fail("N must be >= 1");
  if (lookahead_e < 0) fail("lookahead e must be >= 0");
  if (beta() < 1.0) fail("beta = k(1+alpha)/(2 gamma) must be >= 1");
  if (beta() >= static_cast<double>(n_nodes)) fail("beta must be < N");
}

u128 spot_radius(const SelectionParams& params) {
  params.validate();
  // 1 + alpha as an exact dyadic rational mant * 2^exp.
  int exp = 0;
  const double frac = std::frexp(params.alpha, &exp);
  const auto alpha_mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
  exp -= 53;
  mp::cpp_int one_plus_alpha = alpha_mant;
  int scale = exp;
  if (scale < 0) {
    one_plus_alpha += mp::cpp_int(1) << -scale;
  } else {
    one_plus_alpha = (one_plus_alpha << scale) + 1;
    scale = 0;
  }
  mp::cpp_int num = mp::cpp_int(params.k) * one_plus_alpha;
  mp::cpp_int den = mp::cpp_int(2) * params.gamma * params.n_nodes;
  const int shift = params.bits + scale;
  if (shift >= 0) {
    num <<= shift;
  } else {
    den <<= -shift;
  }
  const mp::cpp_int r = num / den;
  if (r == 0) {
    throw std::invalid_argument("spot radius is 0");
  }
  const auto lo = static_cast<std::uint64_t>(r & mp::cpp_int(~std::uint64_t{0}));
  const auto hi = static_cast<std::uint64_t>(r >> 64);
  return (static_cast<u128>(hi) << 64) | lo;
}

std::size_t spot_cap(const SelectionParams& params) {
  params.validate();
  const double l = params.cap_real();
  const auto cap = static_cast<std::size_t>(std::floor(l));
  if (cap == 0) {
    throw std::invalid_argument("spot cap floor(k / gamma^rho) is 0");
  }
  return cap;
}

SpotGeometry SpotGeometry::of(const SelectionParams& params) {
  return SpotGeometry{params.space(), spot_radius(params), spot_cap(params), params.cap_real(),
                      params.beta()};
}

std::string to_string(PlacementStrategy s) {
  switch (s) {
    case PlacementStrategy::ClusteredEven: return "even";
    case PlacementStrategy::ClusteredStratified: return "stratified";
    case PlacementStrategy::UniformRandom: return "uniform";
  }
  return "?";
}

PlacementStrategy parse_strategy(const std::string& name) {
  if (name == "even" || name == "ClusteredEven") return PlacementStrategy::ClusteredEven;
  if (name == "stratified" || name == "ClusteredStratified") return PlacementStrategy::ClusteredStratified;
  if (name == "uniform" || name == "UniformRandom") return PlacementStrategy::UniformRandom;
  throw std::invalid_argument("unknown placement strategy '" + name + "'");
}

std::string to_string(SybilAccounting a) {
  return a == SybilAccounting::WithinN ? "within" : "on-top";
}

SybilAccounting parse_accounting(const std::string& name) {
  if (name == "within") return SybilAccounting::WithinN;
  if (name == "on-top") return SybilAccounting::OnTopOfN;
  throw std::invalid_argument("unknown sybil accounting '" + name + "'");
}

void ThreatParams::validate() const {
  if (k_bar < 1) {
    throw std::invalid_argument("k_bar must be >= 1");
  }
}

int default_k_bar(int k) { return (2 * k + 2) / 3; }

RoundSeed RoundSeed::from_rng_seed(std::uint64_t seed) {
  Rng rng(seed);
  RoundSeed out;
  for (std::size_t w = 0; w < 4; ++w) {
    const std::uint64_t x = rng.next_u64();
    for (std::size_t b = 0; b < 8; ++b) {
      out.bytes[w * 8 + b] = static_cast<std::uint8_t>(x >> (56 - 8 * b));
    }
  }
  return out;
}

std::size_t Committee::bad_count() const {
  return static_cast<std::size_t>(
      std::count_if(members.begin(), members.end(), [](const Node& n) { return n.adversarial(); }));
}

std::array<std::uint8_t, 48> center_preimage(const RoundSeed& seed, std::uint64_t shard,
                                             std::uint64_t j) {
  std::array<std::uint8_t, 48> buf{};
  std::copy(seed.bytes.begin(), seed.bytes.end(), buf.begin());
  for (std::size_t b = 0; b < 8; ++b) {
    buf[32 + b] = static_cast<std::uint8_t>(shard >> (56 - 8 * b));
    buf[40 + b] = static_cast<std::uint8_t>(j >> (56 - 8 * b));
  }
  return buf;
}

std::vector<Kid> derive_centers(const RoundSeed& seed, const CommitteeId& id,
                                const SelectionParams& params) {
  const KidSpace space = params.space();
  std::vector<Kid> centers;
  centers.reserve(static_cast<std::size_t>(params.gamma));
  for (int j = 1; j <= params.gamma; ++j) {
    const auto pre = center_preimage(seed, id.shard, static_cast<std::uint64_t>(j));
    const auto digest = sha256(pre);
    centers.push_back(kid_from_digest(digest, space));
  }
  return centers;
}

Spot select_spot(const Universe& universe, Kid center, const SelectionParams& params) {
  return select_spot(universe, center, SpotGeometry::of(params));
}

Spot select_spot(const Universe& universe, Kid center, const SpotGeometry& geometry) {
  Spot spot;
  spot.center = center;
  spot.radius = geometry.radius;
  if (universe.empty()) {
    return spot;
  }
  const auto blocks = xor_ball_blocks(geometry.space, center, geometry.radius);
  // The first block is the largest; all blocks sit inside the aligned block
  // of size bit_ceil(radius) around the center, so narrow the search there.
  const int outer_level = blocks.front().level + (blocks.size() > 1 ? 1 : 0);
  std::size_t lo = 0;
  std::size_t hi = universe.size();
  if (outer_level < geometry.space.bits()) {
    const AlignedBlock outer{Kid{(center.value >> outer_level) << outer_level}, outer_level};
    std::tie(lo, hi) = universe.range_of(outer);
  }
  const auto nodes = universe.nodes();
  for (const auto& block : blocks) {
    const auto [first, last] = universe.range_of(block, lo, hi);
    for (std::size_t i = first; i < last; ++i) {
      spot.members.push_back(nodes[i]);
    }
  }
  spot.candidates = spot.members.size();
  auto by_distance = [center](const Node& a, const Node& b) {
    return xor_distance(a.kid, center) < xor_distance(b.kid, center);
  };
  if (spot.members.size() > geometry.cap) {
    std::partial_sort(spot.members.begin(),
                      spot.members.begin() + static_cast<std::ptrdiff_t>(geometry.cap),
                      spot.members.end(), by_distance);
    spot.members.resize(geometry.cap);
    spot.truncated = true;
  } else {
    std::sort(spot.members.begin(), spot.members.end(), by_distance);
  }
  return spot;
}

Committee select_committee(const Universe& universe, const RoundSeed& seed, const CommitteeId& id,
                           const SelectionParams& params) {
  return select_committee(universe, seed, id, params, SpotGeometry::of(params));
}

Committee select_committee(const Universe& universe, const RoundSeed& seed, const CommitteeId& id,
                           const SelectionParams& params, const SpotGeometry& geometry) {
  Committee committee;
  committee.id = id;
  for (const Kid center : derive_centers(seed, id, params)) {
    committee.spots.push_back(select_spot(universe, center, geometry));
  }
  for (const auto& spot : committee.spots) {
    committee.members.insert(committee.members.end(), spot.members.begin(), spot.members.end());
  }
  std::sort(committee.members.begin(), committee.members.end(),
            [](const Node& a, const Node& b) { return a.kid < b.kid; });
  committee.members.erase(std::unique(committee.members.begin(), committee.members.end(),
                                      [](const Node& a, const Node& b) { return a.kid == b.kid; }),
                          committee.members.end());
  return committee;
}

bool verify_spot_membership(Kid kid, Kid center, const SelectionParams& params) {
  return xor_distance(kid, center).value < spot_radius(params);
}

MembershipVerdict verify_committee_membership(Kid kid, const CommitteeId& id, const RoundSeed& seed,
                                              const SelectionParams& params,
                                              std::span<const std::vector<Kid>> spot_member_kids) {
  const auto geometry = SpotGeometry::of(params);
  const auto centers = derive_centers(seed, id, params);
  if (spot_member_kids.size() != centers.size()) {
    return MembershipVerdict::InconsistentClaim;
  }
  bool found = false;
  for (std::size_t j = 0; j < centers.size(); ++j) {
    const auto& claimed = spot_member_kids[j];
    if (claimed.size() > geometry.cap) {
      return MembershipVerdict::InconsistentClaim;
    }
    std::vector<Kid> sorted = claimed;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      return MembershipVerdict::InconsistentClaim;
    }
    for (const Kid member : claimed) {
      if (!geometry.space.valid(member) || xor_distance(member, centers[j]).value >= geometry.radius) {
        return MembershipVerdict::InconsistentClaim;
      }
    }
    if (std::find(claimed.begin(), claimed.end(), kid) == claimed.end()) {
      continue;
    }
    const Distance own = xor_distance(kid, centers[j]);
    const auto closer = std::count_if(claimed.begin(), claimed.end(), [&](Kid other) {
      return xor_distance(other, centers[j]) < own;
    });
    if (static_cast<std::size_t>(closer) < geometry.cap) {
      found = true;
    }
  }
  return found ? MembershipVerdict::Member : MembershipVerdict::NotMember;
}

std::uint64_t assign_to_committee(std::span<const std::uint8_t> payload, std::uint64_t n_committees) {
  if (n_committees == 0) {
    throw std::invalid_argument("number of committees must be >= 1");
  }
  return fnv1a64(payload) % n_committees;
}

}  // namespace spotsel
