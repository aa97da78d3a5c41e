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
#include <random>

#include "spotsel/kid_space.hpp"

namespace spotsel {

/// Independent streams derived from one master seed. Each purpose tag keeps
/// sub-experiments replayable in isolation.
enum class SeedPurpose : std::uint64_t {
  Trial = 1,
  Universe = 2,
  Honest = 3,
  Adversary = 4,
  Round = 5,
  Overlay = 6,
  Sample = 7,
};

/// derive_seed(parent, purpose, index) = splitmix64 chain over the three inputs.
std::uint64_t derive_seed(std::uint64_t parent, SeedPurpose purpose, std::uint64_t index = 0);

/// Portable random stream: the raw mt19937_64 sequence is fixed by the
/// standard, and all reductions below are implemented here rather than via
/// the implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [0, bound); bound > 0.
  u128 below128(u128 bound);
  /// Uniform b-bit value.
  Kid uniform_kid(const KidSpace& space);
  /// Uniform double in [0, 1).
  double unit();

 private:
  std::mt19937_64 engine_;
};

}  // namespace spotsel
