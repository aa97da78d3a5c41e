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

#include "spotsel/kid_space.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace spotsel {

KidSpace::KidSpace(int bits) : bits_(bits) {
  if (bits < kMinBits || bits > kMaxBits) {
    throw std::invalid_argument("kid bit-width must be in [8, 128], got " + std::to_string(bits));
  }
  mask_ = bits == 128 ? ~u128{0} : ((u128{1} << bits) - 1);
}

void KidSpace::check(Kid k) const {
  if (!valid(k)) {
    throw std::invalid_argument("kid " + to_hex(k.value, 32) + " exceeds " + std::to_string(bits_) +
                                "-bit space");
  }
}

void KidSpace::check_ball_size(u128 q) const {
  if (bits_ < 128 && q > (u128{1} << bits_)) {
    throw std::invalid_argument("ball size exceeds 2^" + std::to_string(bits_));
  }
}

u128 count_within(const KidSpace& space, Kid v, u128 q) {
  space.check(v);
  space.check_ball_size(q);
  u128 total = 0;
  for (const auto& block : xor_ball_blocks(space, v, q)) {
    total += block.length();
  }
  return total;
}

std::vector<AlignedBlock> xor_ball_blocks(const KidSpace& space, Kid v, u128 q) {
  space.check(v);
  space.check_ball_size(q);
  std::vector<AlignedBlock> blocks;
  if (q == 0) {
    return blocks;
  }
  const int b = space.bits();
  if (b < 128 && q == (u128{1} << b)) {
    blocks.push_back(space.whole_space());
    return blocks;
  }
  // Distances d < q split by the highest bit i where d has 0 and q has 1:
  // d agrees with q above i, and bits below i are free. XOR with v maps each
  // such distance range onto an aligned Kid block of size 2^i.
  for (int i = b - 1; i >= 0; --i) {
    if (((q >> i) & 1) == 0) {
      continue;
    }
    const u128 high = (i + 1 >= 128) ? u128{0} : ((q >> (i + 1)) << (i + 1));
    const u128 start = ((v.value ^ high) >> i) << i;
    blocks.push_back(AlignedBlock{Kid{start}, i});
  }
  return blocks;
}

Kid kid_from_digest(std::span<const std::uint8_t> digest, const KidSpace& space) {
  const std::size_t need = static_cast<std::size_t>((space.bits() + 7) / 8);
  if (digest.size() < need) {
    throw std::invalid_argument("digest has " + std::to_string(digest.size()) + " bytes, need " +
                                std::to_string(need));
  }
  u128 acc = 0;
  for (std::size_t i = 0; i < need; ++i) {
    acc = (acc << 8) | digest[i];
  }
  const int excess = static_cast<int>(need * 8) - space.bits();
  return Kid{acc >> excess};
}

int shared_prefix_length(const KidSpace& space, Kid a, Kid b) {
  const u128 d = a.value ^ b.value;
  if (d == 0) {
    return space.bits();
  }
  const auto hi = static_cast<std::uint64_t>(d >> 64);
  const auto lo = static_cast<std::uint64_t>(d);
  const int leading = hi != 0 ? std::countl_zero(hi) : 64 + std::countl_zero(lo);
  return leading - (128 - space.bits());
}

std::string to_hex(u128 value, int digits) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(static_cast<std::size_t>(digits), '0');
  for (int i = digits - 1; i >= 0 && value != 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[static_cast<unsigned>(value & 0xF)];
    value >>= 4;
  }
  return out;
}

std::string to_hex(const KidSpace& space, Kid k) { return to_hex(k.value, space.hex_digits()); }

Kid kid_from_hex(const KidSpace& space, const std::string& hex) {
  if (hex.empty() || hex.size() > 32) {
    throw std::invalid_argument("bad kid hex '" + hex + "'");
  }
  u128 acc = 0;
  for (char c : hex) {
    int digit;
    if (c >= '0' && c <= '9') {
      digit = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      digit = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      digit = c - 'A' + 10;
    } else {
      throw std::invalid_argument("bad kid hex '" + hex + "'");
    }
    acc = (acc << 4) | static_cast<u128>(digit);
  }
  Kid k{acc};
  space.check(k);
  return k;
}

std::string to_decimal(u128 value) {
  if (value == 0) {
    return "0";
  }
  std::string out;
  while (value != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace spotsel
