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

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace spotsel {

using u128 = unsigned __int128;

/// A b-bit identifier in the kademlia identifier space.
struct Kid {
  u128 value = 0;

  friend constexpr auto operator<=>(Kid, Kid) = default;
};

/// XOR distance between two Kids, interpreted as an unsigned integer.
struct Distance {
  u128 value = 0;

  friend constexpr auto operator<=>(Distance, Distance) = default;
};

/// A dyadically aligned range of Kids: [start, start + 2^level).
struct AlignedBlock {
  Kid start;
  int level = 0;

  u128 length() const { return u128{1} << level; }
  /// Last Kid of the block (inclusive).
  Kid last() const { return Kid{start.value + (length() - 1)}; }
  bool contains(Kid k) const { return (k.value >> level) == (start.value >> level); }
};

/// The identifier space of a fixed bit-width b (8 <= b <= 128).
///
/// Ball sizes q are passed as u128 and must satisfy q <= 2^b. For b = 128
/// the value 2^128 is not representable, so the largest expressible ball
/// there is 2^128 - 1 Kids; use whole_space() for the full space.
class KidSpace {
 public:
  static constexpr int kMinBits = 8;
  static constexpr int kMaxBits = 128;

  explicit KidSpace(int bits = 64);

  int bits() const { return bits_; }
  /// Largest valid Kid value, 2^b - 1.
  u128 max_value() const { return mask_; }
  /// 2^b, or 0 when b = 128 (wraps; callers should use is_full_size()).
  u128 size() const { return bits_ == 128 ? u128{0} : (u128{1} << bits_); }
  bool valid(Kid k) const { return (k.value & ~mask_) == 0; }
  void check(Kid k) const;
  /// Validates q <= 2^b.
  void check_ball_size(u128 q) const;

  AlignedBlock whole_space() const { return AlignedBlock{Kid{0}, bits_}; }

  /// Number of hex digits used when printing a Kid of this space.
  int hex_digits() const { return (bits_ + 3) / 4; }

  friend bool operator==(const KidSpace&, const KidSpace&) = default;

 private:
  int bits_;
  u128 mask_;
};

constexpr Distance xor_distance(Kid a, Kid b) { return Distance{a.value ^ b.value}; }

/// Number of Kids u with d(u, v) < q. Always q, checked by exhaustive counting
/// in the tests rather than assumed here.
u128 count_within(const KidSpace& space, Kid v, u128 q);

/// Decomposes the ball {u : d(u, v) < q} into disjoint aligned blocks, one per
/// set bit of q, ordered by decreasing block size.
std::vector<AlignedBlock> xor_ball_blocks(const KidSpace& space, Kid v, u128 q);

/// Takes the b most significant bits of a big-endian digest.
Kid kid_from_digest(std::span<const std::uint8_t> digest, const KidSpace& space);

/// Length of the common bit prefix of a and b within a b-bit space.
int shared_prefix_length(const KidSpace& space, Kid a, Kid b);

std::string to_hex(const KidSpace& space, Kid k);
std::string to_hex(u128 value, int digits);
/// Parses a hexadecimal string (no prefix) into a Kid; throws on bad input.
Kid kid_from_hex(const KidSpace& space, const std::string& hex);

/// Decimal rendering of a 128-bit unsigned value.
std::string to_decimal(u128 value);

}  // namespace spotsel
