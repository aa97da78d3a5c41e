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

#include "spotsel/rng.hpp"

#include <stdexcept>

namespace spotsel {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t parent, SeedPurpose purpose, std::uint64_t index) {
  std::uint64_t h = splitmix64(parent);
  h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  return splitmix64(h ^ index);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("Rng::below bound must be positive");
  }
  // Rejection sampling on the largest multiple of bound.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

u128 Rng::below128(u128 bound) {
  if (bound == 0) {
    throw std::invalid_argument("Rng::below128 bound must be positive");
  }
  if ((bound >> 64) == 0) {
    return below(static_cast<std::uint64_t>(bound));
  }
  const u128 limit = ~u128{0} - (~u128{0} % bound);
  u128 x;
  do {
    x = (static_cast<u128>(engine_()) << 64) | engine_();
  } while (x >= limit);
  return x % bound;
}

Kid Rng::uniform_kid(const KidSpace& space) {
  u128 v = engine_();
  if (space.bits() > 64) {
    v = (v << 64) | engine_();
  }
  return Kid{v & space.max_value()};
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

}  // namespace spotsel
