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

#include "spotsel/report_io.hpp"

#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

namespace spotsel::io {

const std::vector<std::string>& attack_columns() {
  static const std::vector<std::string> cols = {
      "N",      "K",          "k",          "alpha",   "gamma",   "rho",
      "m",      "k_bar",      "strategy",   "trials",  "bad_rounds", "p_hat",
      "ci_low", "ci_high",    "undersized_rate", "mean_size", "master_seed"};
  return cols;
}

const std::vector<std::string>& bounds_columns() {
  static const std::vector<std::string> cols = {
      "N",     "K",       "k",     "alpha",  "gamma",          "rho",
      "m",     "k_bar",   "robustness_shortfall", "exact_spot_shortfall",
      "p_exact", "p_approx", "mu", "delta", "z_bar", "per_committee_bound", "exact_tail", "Pi",
      "vacuous"};
  return cols;
}

const std::vector<std::string>& route_columns() {
  static const std::vector<std::string> cols = {
      "N",         "gamma",         "bucket_capacity", "lookup_parallelism", "mean_hops",
      "p99_hops",  "mean_messages", "coverage",        "failures",           "seed"};
  return cols;
}

Json attack_row(const TrialReport& r) {
  Json row;
  row["N"] = r.params.n_nodes;
  row["K"] = r.n_committees;
  row["k"] = r.params.k;
  row["alpha"] = r.params.alpha;
  row["gamma"] = r.params.gamma;
  row["rho"] = r.params.rho;
  row["m"] = r.threat.m;
  row["k_bar"] = r.threat.k_bar;
  row["strategy"] = to_string(r.threat.strategy);
  row["trials"] = r.trials;
  row["bad_rounds"] = r.bad_rounds;
  row["p_hat"] = r.p_hat;
  row["ci_low"] = r.ci_95.low;
  row["ci_high"] = r.ci_95.high;
  row["undersized_rate"] = r.undersized_rate;
  row["mean_size"] = r.mean_size;
  row["master_seed"] = r.master_seed;
  return row;
}

Json bounds_row(const SelectionParams& params, const ThreatParams& threat, std::uint64_t n_committees,
                const bounds::BoundReport& bound) {
  Json row;
  row["N"] = params.n_nodes;
  row["K"] = n_committees;
  row["k"] = params.k;
  row["alpha"] = params.alpha;
  row["gamma"] = params.gamma;
  row["rho"] = params.rho;
  row["m"] = threat.m;
  row["k_bar"] = threat.k_bar;
  row["robustness_shortfall"] = bounds::robustness_shortfall(params);
  row["exact_spot_shortfall"] = bounds::exact_spot_shortfall(params);
  row["p_exact"] = bound.p_exact;
  row["p_approx"] = bound.p_approx;
  row["mu"] = bound.mu;
  row["delta"] = bound.delta;
  row["z_bar"] = bound.z_bar;
  row["per_committee_bound"] = bound.per_committee_bound;
  row["exact_tail"] = bound.exact_tail;
  row["Pi"] = bound.total;
  row["vacuous"] = bound.vacuous;
  return row;
}

Json route_row(const SelectionParams& params, const OverlayConfig& overlay, const RouteProfile& profile,
               std::uint64_t seed) {
  Json row;
  row["N"] = params.n_nodes;
  row["gamma"] = params.gamma;
  row["bucket_capacity"] = overlay.bucket_capacity;
  row["lookup_parallelism"] = overlay.lookup_parallelism;
  row["mean_hops"] = profile.mean_hops;
  row["p99_hops"] = profile.p99_hops;
  row["mean_messages"] = profile.mean_messages;
  row["coverage"] = profile.coverage;
  row["failures"] = profile.failures;
  row["seed"] = seed;
  return row;
}

std::string format_cell(const Json& value) {
  if (value.is_string()) {
    return value.get<std::string>();
  }
  if (value.is_boolean()) {
    return value.get<bool>() ? "true" : "false";
  }
  if (value.is_number_unsigned()) {
    return std::to_string(value.get<std::uint64_t>());
  }
  if (value.is_number_integer()) {
    return std::to_string(value.get<std::int64_t>());
  }
  if (value.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", value.get<double>());
    return buf;
  }
  if (value.is_null()) {
    return "";
  }
  return value.dump();
}

void write_csv(std::ostream& out, const Provenance& provenance, const Table& table) {
  for (const auto& [key, value] : provenance) {
    out << "# " << key << '=' << value << '\n';
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      out << (i ? "," : "");
      if (row.contains(table.columns[i])) {
        out << format_cell(row.at(table.columns[i]));
      }
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const Provenance& provenance, const Table& table) {
  Json doc;
  Json config = Json::object();
  for (const auto& [key, value] : provenance) {
    config[key] = value;
  }
  doc["config"] = config;
  doc["rows"] = Json::array();
  for (const auto& row : table.rows) {
    Json ordered;
    for (const auto& col : table.columns) {
      if (row.contains(col)) {
        ordered[col] = row.at(col);
      }
    }
    doc["rows"].push_back(ordered);
  }
  out << doc.dump(2) << '\n';
}

void write_committee(std::ostream& out, const KidSpace& space, const Committee& committee) {
  for (std::size_t j = 0; j < committee.spots.size(); ++j) {
    const Spot& spot = committee.spots[j];
    out << committee.id.shard << ',' << committee.id.round << ',' << (j + 1) << ','
        << to_hex(space, spot.center);
    for (const Node& m : spot.members) {
      out << ',' << to_hex(space, m.kid);
    }
    out << '\n';
  }
}

std::string format_grid(const std::vector<Table1Cell>& cells) {
  std::map<std::uint64_t, std::map<int, double>> grid;
  std::map<int, bool> gammas;
  for (const auto& c : cells) {
    grid[c.n_nodes][c.gamma] = c.report.p_hat;
    gammas[c.gamma] = true;
  }
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%8s", "N\\gamma");
  os << buf;
  for (const auto& [g, _] : gammas) {
    std::snprintf(buf, sizeof buf, "%10d", g);
    os << buf;
  }
  os << '\n';
  for (const auto& [n, row] : grid) {
    std::snprintf(buf, sizeof buf, "%8llu", static_cast<unsigned long long>(n));
    os << buf;
    for (const auto& [g, _] : gammas) {
      const auto it = row.find(g);
      if (it == row.end()) {
        std::snprintf(buf, sizeof buf, "%10s", "-");
      } else {
        std::snprintf(buf, sizeof buf, "%10.4f", it->second);
      }
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace spotsel::io
