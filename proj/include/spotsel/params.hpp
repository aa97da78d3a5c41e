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

#include <cstddef>
#include <cstdint>
#include <string>

#include "spotsel/kid_space.hpp"

namespace spotsel {

/// Parameters driving committee selection.
///
/// beta = k(1 + alpha) / (2 gamma) is the expected spot population, and
/// l = k / gamma^rho caps how many members a single spot contributes.
struct SelectionParams {
  int k = 20;
  double alpha = 3.0;
  int gamma = 1;
  double rho = 0.9;
  int bits = 64;
  std::uint64_t n_nodes = 1000;
  int lookahead_e = 1;

  double beta() const;
  /// Real-valued cap l before flooring.
  double cap_real() const;
  KidSpace space() const { return KidSpace(bits); }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// floor(2^b * beta / N), computed exactly from the binary value of alpha.
/// Throws when the result is 0.
u128 spot_radius(const SelectionParams& params);

/// floor(k / gamma^rho). Throws when the result is 0.
std::size_t spot_cap(const SelectionParams& params);

/// Values derived once per parameter set and shared by every spot selection.
struct SpotGeometry {
  KidSpace space;
  u128 radius = 0;
  std::size_t cap = 0;
  double cap_real = 0.0;
  double beta = 0.0;

  static SpotGeometry of(const SelectionParams& params);
};

enum class PlacementStrategy { ClusteredEven, ClusteredStratified, UniformRandom };

std::string to_string(PlacementStrategy s);
/// Accepts "even", "stratified", "uniform" and the enumerator names.
PlacementStrategy parse_strategy(const std::string& name);

/// How the m adversarial nodes relate to N.
///   WithinN:  the universe holds N nodes, m of them adversarial.
///   OnTopOfN: N honest nodes plus m adversarial ones (|U| = N + m); the
///             spot radius still uses N.
enum class SybilAccounting { WithinN, OnTopOfN };

std::string to_string(SybilAccounting a);
/// Accepts "within" and "on-top".
SybilAccounting parse_accounting(const std::string& name);

/// Adversary description: m Sybil nodes, bad-committee threshold k_bar.
struct ThreatParams {
  std::uint64_t m = 200;
  int k_bar = 14;
  PlacementStrategy strategy = PlacementStrategy::ClusteredStratified;
  SybilAccounting accounting = SybilAccounting::WithinN;

  void validate() const;
};

/// ceil(2k/3), the default bad-committee threshold.
int default_k_bar(int k);

}  // namespace spotsel
