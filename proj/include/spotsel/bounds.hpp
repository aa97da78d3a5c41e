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
#include <optional>
#include <string>

#include "spotsel/params.hpp"

namespace spotsel::bounds {

/// Standard normal CDF.
double normal_cdf(double x);

/// log of the Binomial(n, p) probability mass at x.
double log_binomial_pmf(std::uint64_t n, double p, std::uint64_t x);
/// P[X <= x] for X ~ Binomial(n, p), summed in log space.
double binomial_cdf(std::uint64_t n, double p, std::uint64_t x);
/// P[X >= x] for X ~ Binomial(n, p), summed in log space.
double binomial_upper_tail(std::uint64_t n, double p, std::uint64_t x);

/// Normal approximation of P[Y < l] for the uncapped spot population
/// Y ~ Binomial(N, beta/N): Phi((l - beta) / sqrt(beta (1 - beta/N))).
double robustness_shortfall(const SelectionParams& params);

/// Exact P[Y < l] with Y ~ Binomial(N, radius / 2^b), radius the integer
/// spot radius actually used by selection.
double exact_spot_shortfall(const SelectionParams& params);

/// Probability that one random spot fully contains some adversary cluster.
struct CaptureProbability {
  /// z (floor(2^b beta / N) - floor(l)) / 2^b
  double exact = 0.0;
  /// z beta / N
  double approx_z_beta = 0.0;
  /// m (1 + alpha) / (2 N gamma^(1 - rho))
  double approx_asymptotic = 0.0;
  /// |approx_asymptotic - exact| / exact, 0 when exact is 0.
  double relative_gap = 0.0;
  std::uint64_t clusters = 0;
};

CaptureProbability spot_capture_probability(const SelectionParams& params, const ThreatParams& threat);

/// Chernoff bound on the per-committee count X ~ Binomial(gamma, p) of
/// cluster-capturing spots reaching z_bar = ceil(k_bar / floor(l)), and the
/// union bound Pi = n_committees * tail over all committees of a round.
struct BoundReport {
  double p_exact = 0.0;
  double p_approx = 0.0;
  double mu = 0.0;
  double delta = 0.0;
  std::uint64_t z_bar = 0;
  /// Chernoff tail bound for one committee; 1 when vacuous.
  double per_committee_bound = 1.0;
  /// Direct summation of P[X >= z_bar].
  double exact_tail = 0.0;
  /// n_committees * per_committee_bound; may exceed 1.
  double total = 0.0;
  bool vacuous = false;
  /// Quantities of the asymptotic argument: q = 2 k_bar / (m k (1 + alpha)),
  /// s = m (1 + alpha) q / 2.
  double q = 0.0;
  double s = 0.0;
  std::string approximation_notes;

  double value() const { return total; }
};

BoundReport chernoff_attack_bound(const SelectionParams& params, const ThreatParams& threat,
                                  std::uint64_t n_committees_total);

/// Smallest gamma in [1, gamma_max] with min(1, Pi) <= target; nullopt when
/// none qualifies or the parameters become degenerate first.
std::optional<int> required_gamma(SelectionParams params_template, const ThreatParams& threat,
                                  std::uint64_t n_committees_total, double target, int gamma_max = 64);

}  // namespace spotsel::bounds
