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

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spotsel/attack_sim.hpp"
#include "spotsel/bounds.hpp"
#include "spotsel/overlay.hpp"

namespace spotsel::io {

using Json = nlohmann::ordered_json;
/// Resolved configuration echoed at the top of every artifact.
using Provenance = std::vector<std::pair<std::string, std::string>>;

/// Rows keyed by column name; cell values are JSON scalars.
struct Table {
  std::vector<std::string> columns;
  std::vector<Json> rows;
};

const std::vector<std::string>& attack_columns();
const std::vector<std::string>& bounds_columns();
const std::vector<std::string>& route_columns();

Json attack_row(const TrialReport& report);
Json bounds_row(const SelectionParams& params, const ThreatParams& threat, std::uint64_t n_committees,
                const bounds::BoundReport& bound);
Json route_row(const SelectionParams& params, const OverlayConfig& overlay, const RouteProfile& profile,
               std::uint64_t seed);

/// Deterministic text for a scalar cell: integers verbatim, reals with %.10g.
std::string format_cell(const Json& value);

/// `# key=value` provenance lines, a header row, then one line per row.
void write_csv(std::ostream& out, const Provenance& provenance, const Table& table);
/// {"config": {...}, "rows": [...]}.
void write_json(std::ostream& out, const Provenance& provenance, const Table& table);

/// One `i,r,j,center_hex,member_kid_hex...` line per spot.
void write_committee(std::ostream& out, const KidSpace& space, const Committee& committee);

/// Fixed-width text rendering of the Table-1 grid.
std::string format_grid(const std::vector<Table1Cell>& cells);

}  // namespace spotsel::io
