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

#include "spotsel/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "spotsel/attack_sim.hpp"
#include "spotsel/bounds.hpp"
#include "spotsel/population.hpp"
#include "spotsel/report_io.hpp"
#include "spotsel/rng.hpp"

namespace spotsel::cli {
namespace {

const std::vector<std::string> kCommands = {"table1", "attack", "bounds", "route", "select"};

struct RunError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    os << (i ? "," : "") << xs[i];
  }
  return os.str();
}

// Raw flag values; resolved into ExperimentConfig after parsing.
struct Flags {
  std::string strategy = "stratified";
  std::string accounting = "on-top";
  std::string config_path;
};

SelectionParams params_for(const ExperimentConfig& cfg, std::uint64_t n, int gamma) {
  SelectionParams p = cfg.selection;
  p.n_nodes = n;
  p.gamma = gamma;
  return p;
}

ThreatParams threat_for(const ExperimentConfig& cfg) {
  ThreatParams t = cfg.threat;
  if (t.k_bar == 0) {
    t.k_bar = default_k_bar(cfg.selection.k);
  }
  return t;
}

std::uint64_t committees_for(const ExperimentConfig& cfg, const SelectionParams& p) {
  if (cfg.n_committees != 0) {
    return cfg.n_committees;
  }
  return std::max<std::uint64_t>(1, p.n_nodes / (2 * static_cast<std::uint64_t>(p.k)));
}

std::uint64_t trials_for(const ExperimentConfig& cfg, const SelectionParams& p) {
  if (cfg.trials != 0) {
    return cfg.trials;
  }
  return table1_trials(p.n_nodes, p.gamma, cfg.trial_multiplier);
}

// (N, gamma) pairs a command will run.
std::vector<std::pair<std::uint64_t, int>> cells(const std::string& command, const ExperimentConfig& cfg) {
  std::vector<std::pair<std::uint64_t, int>> out;
  if (command == "table1") {
    for (auto n : cfg.ns) {
      for (int g : cfg.gammas) {
        out.emplace_back(n, g);
      }
    }
  } else if (command == "bounds") {
    for (int g : cfg.gammas) {
      out.emplace_back(cfg.selection.n_nodes, g);
    }
  } else if (command == "route") {
    for (auto n : cfg.ns) {
      out.emplace_back(n, cfg.selection.gamma);
    }
  } else {
    out.emplace_back(cfg.selection.n_nodes, cfg.selection.gamma);
  }
  return out;
}

io::Provenance provenance(const std::string& command, const ExperimentConfig& cfg) {
  const ThreatParams t = threat_for(cfg);
  io::Provenance p;
  p.emplace_back("command", command);
  p.emplace_back("master_seed", std::to_string(cfg.master_seed));
  if (command == "table1" || command == "route") {
    p.emplace_back("N", join(cfg.ns));
  } else {
    p.emplace_back("N", std::to_string(cfg.selection.n_nodes));
  }
  p.emplace_back("k", std::to_string(cfg.selection.k));
  p.emplace_back("alpha", real(cfg.selection.alpha));
  if (command == "table1" || command == "bounds") {
    p.emplace_back("gamma", join(cfg.gammas));
  } else {
    p.emplace_back("gamma", std::to_string(cfg.selection.gamma));
  }
  p.emplace_back("rho", real(cfg.selection.rho));
  p.emplace_back("bits", std::to_string(cfg.selection.bits));
  p.emplace_back("e", std::to_string(cfg.selection.lookahead_e));
  p.emplace_back("m", std::to_string(t.m));
  p.emplace_back("k_bar", std::to_string(t.k_bar));
  p.emplace_back("strategy", cfg.compare_strategies ? "all" : to_string(t.strategy));
  p.emplace_back("accounting", to_string(t.accounting));
  p.emplace_back("K", cfg.n_committees ? std::to_string(cfg.n_committees) : "N/(2k)");
  if (command == "table1" || command == "attack") {
    p.emplace_back("trials", cfg.trials ? std::to_string(cfg.trials) : "ceil(N*gamma/10*multiplier)");
    p.emplace_back("trial_multiplier", real(cfg.trial_multiplier));
    p.emplace_back("fixed_universe", cfg.fixed_universe ? "true" : "false");
  }
  if (command == "bounds") {
    p.emplace_back("target", real(cfg.target));
    p.emplace_back("gamma_max", std::to_string(cfg.gamma_max));
  }
  if (command == "route") {
    p.emplace_back("bucket_capacity", std::to_string(cfg.overlay.bucket_capacity));
    p.emplace_back("lookup_parallelism", std::to_string(cfg.overlay.lookup_parallelism));
    p.emplace_back("samples", std::to_string(cfg.samples));
    p.emplace_back("drop_adversarial", cfg.drop_adversarial ? "true" : "false");
  }
  if (command == "select") {
    p.emplace_back("shard", std::to_string(cfg.shard));
    p.emplace_back("round", std::to_string(cfg.round));
  }
  return p;
}

std::unique_ptr<std::ofstream> open_file(const std::string& path) {
  auto f = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*f) {
    throw RunError("cannot open " + path + " for writing");
  }
  return f;
}

void finish(std::ostream& os, const std::string& path) {
  os.flush();
  if (!os) {
    throw RunError("write to " + (path.empty() ? std::string("stdout") : path) + " failed");
  }
}

void emit(const ExperimentConfig& cfg, std::ostream& out, const io::Provenance& prov,
          const io::Table& table) {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &out;
  if (!cfg.out.empty()) {
    file = open_file(cfg.out);
    os = file.get();
  }
  if (cfg.format == "json") {
    io::write_json(*os, prov, table);
  } else {
    io::write_csv(*os, prov, table);
  }
  finish(*os, cfg.out);
}

void dump_universe(const std::string& path, const io::Provenance& prov, const Universe& universe) {
  auto f = open_file(path);
  for (const auto& [k, v] : prov) {
    *f << "# " << k << '=' << v << '\n';
  }
  write_universe(*f, universe);
  finish(*f, path);
}

void dump_committees(const std::string& path, const io::Provenance& prov, const Universe& universe,
                     const RoundSeed& seed, std::uint64_t round, const SelectionParams& params,
                     std::uint64_t n_committees) {
  auto f = open_file(path);
  for (const auto& [k, v] : prov) {
    *f << "# " << k << '=' << v << '\n';
  }
  const SpotGeometry geometry = SpotGeometry::of(params);
  for (std::uint64_t i = 0; i < n_committees; ++i) {
    io::write_committee(*f, universe.space(),
                        select_committee(universe, seed, {i, round}, params, geometry));
  }
  finish(*f, path);
}

int cmd_table1(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto prov = provenance("table1", cfg);
  const ThreatParams threat = threat_for(cfg);
  io::Table table{io::attack_columns(), {}};
  std::vector<Table1Cell> grid;
  RunOptions options{cfg.fixed_universe, cfg.workers};
  for (auto n : cfg.ns) {
    for (int g : cfg.gammas) {
      const SelectionParams p = params_for(cfg, n, g);
      Table1Cell cell{n, g,
                      estimate_attack_probability(p, committees_for(cfg, p), threat, trials_for(cfg, p),
                                                  cfg.master_seed, options)};
      table.rows.push_back(io::attack_row(cell.report));
      grid.push_back(std::move(cell));
    }
  }
  emit(cfg, out, prov, table);
  (cfg.out.empty() ? err : out) << io::format_grid(grid);
  return 0;
}

int cmd_attack(const ExperimentConfig& cfg, std::ostream& out) {
  const auto prov = provenance("attack", cfg);
  const SelectionParams p = cfg.selection;
  const ThreatParams threat = threat_for(cfg);
  const std::uint64_t n_committees = committees_for(cfg, p);
  const std::uint64_t trials = trials_for(cfg, p);
  RunOptions options{cfg.fixed_universe, cfg.workers};
  io::Table table{io::attack_columns(), {}};
  if (cfg.compare_strategies) {
    for (const auto& r : strategy_comparison(p, n_committees, threat, trials, cfg.master_seed, options)) {
      table.rows.push_back(io::attack_row(r.report));
    }
  } else {
    table.rows.push_back(
        io::attack_row(estimate_attack_probability(p, n_committees, threat, trials, cfg.master_seed, options)));
  }
  emit(cfg, out, prov, table);

  if (!cfg.dump_committees.empty() || !cfg.dump_universe.empty()) {
    // Trial 0 exactly as the estimator saw it.
    const std::uint64_t trial_seed = derive_seed(cfg.master_seed, SeedPurpose::Trial, 0);
    const std::uint64_t universe_seed = cfg.fixed_universe
                                            ? derive_seed(cfg.master_seed, SeedPurpose::Universe)
                                            : derive_seed(trial_seed, SeedPurpose::Universe);
    const Universe universe =
        build_universe(p, threat.m, threat.strategy, universe_seed, threat.accounting);
    if (!cfg.dump_universe.empty()) {
      dump_universe(cfg.dump_universe, prov, universe);
    }
    if (!cfg.dump_committees.empty()) {
      dump_committees(cfg.dump_committees, prov, universe,
                      RoundSeed::from_rng_seed(derive_seed(trial_seed, SeedPurpose::Round)), 0, p,
                      n_committees);
    }
  }
  return 0;
}

int cmd_bounds(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  auto prov = provenance("bounds", cfg);
  const ThreatParams threat = threat_for(cfg);
  io::Table table{io::bounds_columns(), {}};
  for (int g : cfg.gammas) {
    const SelectionParams p = params_for(cfg, cfg.selection.n_nodes, g);
    const std::uint64_t n_committees = committees_for(cfg, p);
    const bounds::BoundReport b = bounds::chernoff_attack_bound(p, threat, n_committees);
    if (b.vacuous) {
      err << "gamma=" << g << ": bound is vacuous (z_bar <= mu)\n";
    }
    table.rows.push_back(io::bounds_row(p, threat, n_committees, b));
  }
  if (cfg.target > 0.0) {
    const SelectionParams p = cfg.selection;
    const auto g = bounds::required_gamma(p, threat, committees_for(cfg, p), cfg.target, cfg.gamma_max);
    prov.emplace_back("required_gamma", g ? std::to_string(*g) : "none");
  }
  emit(cfg, out, prov, table);
  return 0;
}

int cmd_route(const ExperimentConfig& cfg, std::ostream& out) {
  const auto prov = provenance("route", cfg);
  const ThreatParams threat = threat_for(cfg);
  io::Table table{io::route_columns(), {}};
  for (std::size_t i = 0; i < cfg.ns.size(); ++i) {
    const SelectionParams p = params_for(cfg, cfg.ns[i], cfg.selection.gamma);
    Universe universe = build_universe(p, threat.m, threat.strategy,
                                       derive_seed(cfg.master_seed, SeedPurpose::Universe, i),
                                       threat.accounting);
    if (i == 0 && !cfg.dump_universe.empty()) {
      dump_universe(cfg.dump_universe, prov, universe);
    }
    if (i == 0 && !cfg.dump_committees.empty()) {
      dump_committees(cfg.dump_committees, prov, universe,
                      RoundSeed::from_rng_seed(derive_seed(cfg.master_seed, SeedPurpose::Round)), 0, p,
                      committees_for(cfg, p));
    }
    const Overlay overlay =
        build_overlay(std::move(universe), cfg.overlay, derive_seed(cfg.master_seed, SeedPurpose::Overlay, i));
    const RouteProfile profile = route_cost_profile(
        overlay, p, cfg.samples, derive_seed(cfg.master_seed, SeedPurpose::Sample, i), cfg.drop_adversarial);
    table.rows.push_back(io::route_row(p, cfg.overlay, profile, cfg.master_seed));
  }
  emit(cfg, out, prov, table);
  return 0;
}

int cmd_select(const ExperimentConfig& cfg, std::ostream& out) {
  const auto prov = provenance("select", cfg);
  const SelectionParams p = cfg.selection;
  const ThreatParams threat = threat_for(cfg);
  const Universe universe = build_universe(p, threat.m, threat.strategy,
                                           derive_seed(cfg.master_seed, SeedPurpose::Universe),
                                           threat.accounting);
  if (!cfg.dump_universe.empty()) {
    dump_universe(cfg.dump_universe, prov, universe);
  }
  const RoundSeed seed = RoundSeed::from_rng_seed(derive_seed(cfg.master_seed, SeedPurpose::Round, cfg.round));
  const Committee committee = select_committee(universe, seed, {cfg.shard, cfg.round}, p);

  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &out;
  if (!cfg.out.empty()) {
    file = open_file(cfg.out);
    os = file.get();
  }
  const KidSpace space = p.space();
  if (cfg.format == "json") {
    io::Json doc;
    io::Json config = io::Json::object();
    for (const auto& [k, v] : prov) {
      config[k] = v;
    }
    doc["config"] = config;
    doc["spots"] = io::Json::array();
    for (std::size_t j = 0; j < committee.spots.size(); ++j) {
      const Spot& s = committee.spots[j];
      io::Json spot;
      spot["i"] = cfg.shard;
      spot["r"] = cfg.round;
      spot["j"] = j + 1;
      spot["center"] = to_hex(space, s.center);
      spot["candidates"] = s.candidates;
      spot["members"] = io::Json::array();
      for (const Node& m : s.members) {
        spot["members"].push_back(to_hex(space, m.kid));
      }
      doc["spots"].push_back(spot);
    }
    doc["size"] = committee.members.size();
    doc["bad"] = committee.bad_count();
    *os << doc.dump(2) << '\n';
  } else {
    for (const auto& [k, v] : prov) {
      *os << "# " << k << '=' << v << '\n';
    }
    io::write_committee(*os, space, committee);
  }
  finish(*os, cfg.out);
  return 0;
}

void add_selection(CLI::App* sub, ExperimentConfig& cfg, bool scalar_n) {
  if (scalar_n) {
    sub->add_option("--N", cfg.selection.n_nodes, "network size");
  }
  sub->add_option("--k", cfg.selection.k, "target committee size");
  sub->add_option("--alpha", cfg.selection.alpha, "spot size slack");
  sub->add_option("--gamma", cfg.selection.gamma, "spots per committee");
  sub->add_option("--rho", cfg.selection.rho, "spot cap exponent");
  sub->add_option("--bits", cfg.selection.bits, "Kid width in bits")->check(CLI::Range(8, 128));
  sub->add_option("--e", cfg.selection.lookahead_e, "lookahead rounds");
}

void add_threat(CLI::App* sub, ExperimentConfig& cfg, Flags& flags, bool allow_all) {
  sub->add_option("--m", cfg.threat.m, "adversarial nodes");
  sub->add_option("--k-bar", cfg.threat.k_bar, "bad-committee threshold (0: ceil(2k/3))");
  std::vector<std::string> names = {"even", "stratified", "uniform"};
  if (allow_all) {
    names.push_back("all");
  }
  sub->add_option("--strategy", flags.strategy, "adversary placement")->check(CLI::IsMember(names));
  sub->add_option("--accounting", flags.accounting, "Sybils within N or on top of N")
      ->check(CLI::IsMember({"within", "on-top"}));
}

bool given(const std::vector<std::string>& args, const std::string& name) {
  const std::string flag = "--" + name;
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Appends config-file entries not already present on the command line.
std::vector<std::string> merge_config(CLI::App& app, const std::vector<std::string>& args,
                                      const std::string& path) {
  std::string command;
  for (const auto& a : args) {
    if (std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end()) {
      command = a;
      break;
    }
  }
  std::vector<std::string> merged = args;
  for (const auto& [key, value] : read_config_file(path)) {
    const std::string flag = "--" + key;
    CLI::Option* opt = app.get_option_no_throw(flag);
    if (opt == nullptr && !command.empty()) {
      opt = app.get_subcommand(command)->get_option_no_throw(flag);
    }
    if (opt == nullptr) {
      bool known = false;
      for (const auto& c : kCommands) {
        known = known || app.get_subcommand(c)->get_option_no_throw(flag) != nullptr;
      }
      if (!known) {
        throw CLI::ValidationError(path, "unknown key '" + key + "'");
      }
      continue;
    }
    if (key == "config" || given(args, key)) {
      continue;
    }
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1") {
        merged.push_back(flag);
      } else if (value != "false" && value != "0") {
        throw CLI::ValidationError(path, key + " expects true or false, got '" + value + "'");
      }
    } else {
      merged.push_back(flag);
      merged.push_back(value);
    }
  }
  return merged;
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read config file " + path);
  }
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') {
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(t.substr(0, eq));
    if (key.rfind("--", 0) == 0) {
      key = key.substr(2);
    }
    if (key.empty()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty key");
    }
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

void validate(const std::string& command, const ExperimentConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json") {
    throw std::invalid_argument("format must be csv or json");
  }
  if (cfg.trial_multiplier <= 0.0) {
    throw std::invalid_argument("trial-multiplier must be positive");
  }
  if (command == "table1" && (cfg.ns.empty() || cfg.gammas.empty())) {
    throw std::invalid_argument("table1 needs at least one N and one gamma");
  }
  if (command == "route" && cfg.ns.empty()) {
    throw std::invalid_argument("route needs at least one N");
  }
  if (command == "route") {
    if (cfg.overlay.bucket_capacity < 1) {
      throw std::invalid_argument("bucket-capacity must be >= 1");
    }
    if (cfg.overlay.lookup_parallelism < 1) {
      throw std::invalid_argument("lookup-parallelism must be >= 1");
    }
    if (cfg.samples < 1) {
      throw std::invalid_argument("samples must be >= 1");
    }
  }
  if (command == "bounds") {
    if (cfg.target < 0.0 || cfg.target > 1.0) {
      throw std::invalid_argument("target must lie in (0, 1]");
    }
    if (cfg.gamma_max < 1) {
      throw std::invalid_argument("gamma-max must be >= 1");
    }
  }
  for (const auto& [n, g] : cells(command, cfg)) {
    const SelectionParams p = params_for(cfg, n, g);
    p.validate();
    spot_radius(p);
    spot_cap(p);
  }
  const ThreatParams threat = threat_for(cfg);
  threat.validate();
  for (const auto& [n, g] : cells(command, cfg)) {
    const SelectionParams p = params_for(cfg, n, g);
    if (threat.accounting == SybilAccounting::WithinN && threat.m > n) {
      throw std::invalid_argument("m exceeds N=" + std::to_string(n) + " with accounting=within");
    }
    const std::uint64_t universe_size =
        threat.accounting == SybilAccounting::WithinN ? n : n + threat.m;
    const KidSpace space = p.space();
    if (space.size() != 0 && universe_size > space.size()) {
      throw std::invalid_argument("bits too small for " + std::to_string(universe_size) + " nodes");
    }
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  cfg.threat.k_bar = 0;
  cfg.threat.accounting = SybilAccounting::OnTopOfN;
  Flags flags;

  CLI::App app{"Spot-based committee selection simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", cfg.master_seed, "master seed");
  app.add_option("--config", flags.config_path, "flat key = value file; flags override it");
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--workers", cfg.workers, "worker threads (0: all cores)");

  auto* table1 = app.add_subcommand("table1", "attack probability grid for the experiment preset");
  table1->add_option("--ns", cfg.ns, "network sizes")->delimiter(',');
  table1->add_option("--gammas", cfg.gammas, "spot counts")->delimiter(',');
  table1->add_option("--trial-multiplier", cfg.trial_multiplier, "scale the default trial counts");
  table1->add_option("--bits", cfg.selection.bits, "Kid width in bits")->check(CLI::Range(8, 128));
  table1->add_flag("--fixed-universe", cfg.fixed_universe, "reuse one universe for every trial");
  add_threat(table1, cfg, flags, false);

  auto* attack = app.add_subcommand("attack", "one Monte Carlo attack estimate");
  add_selection(attack, cfg, true);
  add_threat(attack, cfg, flags, true);
  attack->add_option("--K", cfg.n_committees, "committees per round (0: N/(2k))");
  attack->add_option("--trials", cfg.trials, "Monte Carlo trials (0: ceil(N*gamma/10*multiplier))");
  attack->add_option("--trial-multiplier", cfg.trial_multiplier, "scale the default trial count");
  attack->add_flag("--fixed-universe", cfg.fixed_universe, "reuse one universe for every trial");
  attack->add_option("--dump-committees", cfg.dump_committees, "write trial 0 committees here");
  attack->add_option("--dump-universe", cfg.dump_universe, "write trial 0 universe here");

  auto* bnds = app.add_subcommand("bounds", "analytic shortfall and attack bounds");
  add_selection(bnds, cfg, true);
  add_threat(bnds, cfg, flags, false);
  bnds->add_option("--K", cfg.n_committees, "committees per round (0: N/(2k))");
  bnds->add_option("--gammas", cfg.gammas, "gamma sweep (default: --gamma)")->delimiter(',');
  bnds->add_option("--target", cfg.target, "report the smallest gamma with Pi <= target");
  bnds->add_option("--gamma-max", cfg.gamma_max, "search limit for --target");

  auto* route = app.add_subcommand("route", "lookup and delivery cost on a simulated overlay");
  route->add_option("--N", cfg.ns, "network sizes")->delimiter(',');
  add_selection(route, cfg, false);
  add_threat(route, cfg, flags, false);
  route->add_option("--K", cfg.n_committees, "committees per round (0: N/(2k))");
  route->add_option("--bucket-capacity", cfg.overlay.bucket_capacity, "k-bucket size");
  route->add_option("--lookup-parallelism", cfg.overlay.lookup_parallelism, "lookup alpha");
  route->add_option("--samples", cfg.samples, "deliveries per N");
  route->add_flag("--drop-adversarial", cfg.drop_adversarial, "adversarial members do not forward");
  route->add_option("--dump-committees", cfg.dump_committees, "write round 0 committees of the first N");
  route->add_option("--dump-universe", cfg.dump_universe, "write the universe of the first N");

  auto* select = app.add_subcommand("select", "dump one committee");
  add_selection(select, cfg, true);
  add_threat(select, cfg, flags, false);
  select->add_option("--shard", cfg.shard, "committee index i");
  select->add_option("--round", cfg.round, "round r");
  select->add_option("--dump-universe", cfg.dump_universe, "write the universe here");

  std::vector<std::string> argv_store;
  try {
    argv_store = args;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] == "--config") {
        argv_store = merge_config(app, args, args[i + 1]);
      } else if (args[i].rfind("--config=", 0) == 0) {
        argv_store = merge_config(app, args, args[i].substr(9));
      }
    }
    if (!args.empty() && args.back().rfind("--config=", 0) == 0) {
      argv_store = merge_config(app, args, args.back().substr(9));
    }
    std::vector<char*> argv;
    std::string prog = "spotsel";
    argv.push_back(prog.data());
    for (auto& a : argv_store) {
      argv.push_back(a.data());
    }
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  auto* sub = app.get_subcommand(command);
  try {
    cfg.compare_strategies = flags.strategy == "all";
    cfg.threat.strategy = parse_strategy(cfg.compare_strategies ? "stratified" : flags.strategy);
    cfg.threat.accounting = parse_accounting(flags.accounting);
    if (command == "table1") {
      if (cfg.ns.empty()) {
        cfg.ns = {1000, 3000, 10000};
      }
      if (cfg.gammas.empty()) {
        cfg.gammas = {1, 2, 3, 4, 5};
      }
    }
    if (command == "bounds" && cfg.gammas.empty()) {
      cfg.gammas = {cfg.selection.gamma};
    }
    if (command == "route") {
      if (cfg.ns.empty()) {
        cfg.ns = {1000};
      }
      if (sub->get_option("--m")->count() == 0) {
        cfg.threat.m = 0;
      }
    }
    validate(command, cfg);
  } catch (const std::exception& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return 2;
  }

  try {
    if (command == "table1") {
      return cmd_table1(cfg, out, err);
    }
    if (command == "attack") {
      return cmd_attack(cfg, out);
    }
    if (command == "bounds") {
      return cmd_bounds(cfg, out, err);
    }
    if (command == "route") {
      return cmd_route(cfg, out);
    }
    return cmd_select(cfg, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace spotsel::cli
