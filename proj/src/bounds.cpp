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

#include "spotsel/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace spotsel::bounds {

namespace {

double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

/// radius / 2^b as a double.
double radius_fraction(const SelectionParams& params, u128 radius) {
  return std::ldexp(static_cast<double>(radius), -params.bits);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double log_binomial_pmf(std::uint64_t n, double p, std::uint64_t x) {
  if (x > n) {
    return -std::numeric_limits<double>::infinity();
  }
  if (p <= 0.0) {
    return x == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  if (p >= 1.0) {
    return x == n ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  const double nd = static_cast<double>(n);
  const double xd = static_cast<double>(x);
  return std::lgamma(nd + 1.0) - std::lgamma(xd + 1.0) - std::lgamma(nd - xd + 1.0) +
         xd * std::log(p) + (nd - xd) * std::log1p(-p);
}

double binomial_cdf(std::uint64_t n, double p, std::uint64_t x) {
  if (x >= n) {
    return 1.0;
  }
  double acc = -std::numeric_limits<double>::infinity();
  for (std::uint64_t y = 0; y <= x; ++y) {
    acc = log_sum_exp(acc, log_binomial_pmf(n, p, y));
  }
  return std::min(1.0, std::exp(acc));
}

double binomial_upper_tail(std::uint64_t n, double p, std::uint64_t x) {
  if (x == 0) {
    return 1.0;
  }
  double acc = -std::numeric_limits<double>::infinity();
  for (std::uint64_t y = x; y <= n; ++y) {
    acc = log_sum_exp(acc, log_binomial_pmf(n, p, y));
  }
  return std::min(1.0, std::exp(acc));
}

double robustness_shortfall(const SelectionParams& params) {
  params.validate();
  const double beta = params.beta();
  const double n = static_cast<double>(params.n_nodes);
  const double sigma = std::sqrt(beta * (1.0 - beta / n));
  return normal_cdf((params.cap_real() - beta) / sigma);
}

double exact_spot_shortfall(const SelectionParams& params) {
  const u128 radius = spot_radius(params);
  const double l = params.cap_real();
  // Y < l  <=>  Y <= ceil(l) - 1 for integer Y.
  const double below = std::ceil(l) - 1.0;
  if (below < 0.0) {
    return 0.0;
  }
  return binomial_cdf(params.n_nodes, radius_fraction(params, radius),
                      static_cast<std::uint64_t>(below));
}

CaptureProbability spot_capture_probability(const SelectionParams& params, const ThreatParams& threat) {
  threat.validate();
  const u128 radius = spot_radius(params);
  const std::size_t cap = spot_cap(params);
  if (radius <= cap) {
    throw std::invalid_argument("spot radius does not exceed the cap; capture probability degenerate");
  }
  CaptureProbability out;
  out.clusters = threat.m / cap;
  const double z = static_cast<double>(out.clusters);
  const double n = static_cast<double>(params.n_nodes);
  out.exact = z * radius_fraction(params, radius - static_cast<u128>(cap));
  out.approx_z_beta = z * params.beta() / n;
  out.approx_asymptotic = static_cast<double>(threat.m) * (1.0 + params.alpha) /
                          (2.0 * n * std::pow(static_cast<double>(params.gamma), 1.0 - params.rho));
  out.relative_gap = out.exact > 0.0 ? std::abs(out.approx_asymptotic - out.exact) / out.exact : 0.0;
  return out;
}

BoundReport chernoff_attack_bound(const SelectionParams& params, const ThreatParams& threat,
                                  std::uint64_t n_committees_total) {
  const CaptureProbability capture = spot_capture_probability(params, threat);
  const std::size_t cap = spot_cap(params);
  BoundReport r;
  r.p_exact = capture.exact;
  r.p_approx = capture.approx_asymptotic;
  r.z_bar = (static_cast<std::uint64_t>(threat.k_bar) + cap - 1) / cap;
  const double p = std::min(1.0, r.p_exact);
  const double gamma = params.gamma;
  r.mu = gamma * p;
  const double zbar = static_cast<double>(r.z_bar);
  r.exact_tail = binomial_upper_tail(static_cast<std::uint64_t>(params.gamma), p, r.z_bar);

  std::ostringstream notes;
  if (r.mu <= 0.0) {
    // No complete cluster fits: the tail and its bound are both 0.
    r.delta = std::numeric_limits<double>::infinity();
    r.per_committee_bound = 0.0;
    notes << "no clusters (z=0); ";
  } else if (zbar <= r.mu) {
    r.delta = zbar / r.mu - 1.0;
    r.per_committee_bound = 1.0;
    r.vacuous = true;
    notes << "bound vacuous: z_bar <= mu; ";
  } else {
    r.delta = zbar / r.mu - 1.0;
    // mu (delta - (1 + delta) ln(1 + delta)), with (1 + delta) mu = z_bar.
    const double log_bound = (zbar - r.mu) - zbar * std::log(zbar / r.mu);
    r.per_committee_bound = std::exp(log_bound);
  }
  r.total = static_cast<double>(n_committees_total) * r.per_committee_bound;

  const double m = static_cast<double>(threat.m);
  if (threat.m > 0) {
    r.q = 2.0 * threat.k_bar / (m * params.k * (1.0 + params.alpha));
    r.s = m * (1.0 + params.alpha) * r.q / 2.0;
  }
  if (r.p_exact > 1.0) {
    notes << "p_exact > 1 clamped for the binomial; ";
  }
  notes << "p uses the exact spot-count form; union bound over " << n_committees_total
        << " committees; q=" << r.q << " s=" << r.s;
  r.approximation_notes = notes.str();
  return r;
}

std::optional<int> required_gamma(SelectionParams params, const ThreatParams& threat,
                                  std::uint64_t n_committees_total, double target, int gamma_max) {
  if (!(target > 0.0 && target <= 1.0)) {
    throw std::invalid_argument("target must be in (0, 1]");
  }
  for (int gamma = 1; gamma <= gamma_max; ++gamma) {
    params.gamma = gamma;
    BoundReport report;
    try {
      report = chernoff_attack_bound(params, threat, n_committees_total);
    } catch (const std::invalid_argument&) {
      // Larger gamma only shrinks beta and the cap further.
      return std::nullopt;
    }
    if (std::min(1.0, report.total) <= target) {
      return gamma;
    }
  }
  return std::nullopt;
}

}  // namespace spotsel::bounds
