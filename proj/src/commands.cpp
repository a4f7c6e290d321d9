// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "ceerbench/commands.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "ceerbench/fixtures.hpp"
#include "ceerbench/hsf.hpp"
#include "ceerbench/t21.hpp"
#include "ceerbench/t39.hpp"

namespace ceerbench {

namespace {

int run_t21_scenario(const RunConfig& config, std::ostream& log) {
  OracleFamily fam = load_family(config.family_path);
  T21Options opts;
  opts.k_bound = config.k_bound;
  opts.free_parity = config.free_parity;
  T21PriorityList priority = t21_default_priority(fam, config.k_bound);
  T21State state = t21_init(std::move(fam), priority, opts);
  t21_run(state, config.stages);
  state.trace().save(config.output_path);
  log << "t21: " << config.stages << " stages, " << state.events().size() << " events -> "
      << config.output_path << "\n";
  return kExitOk;
}

int run_t39_scenario(const RunConfig& config, std::ostream& log) {
  if (config.num_ceers < 1) {
    log << "config error: need at least one ceer\n";
    return kExitConfigError;
  }
  OracleFamily fam = load_family(config.family_path);
  CeerEnumeration a_enum = config.base_ceer_path.empty()
                               ? CeerEnumeration{"Id", {}}
                               : load_ceer_enumeration(config.base_ceer_path);
  CeerEnumeration t_enum = config.universal_ceer_path.empty()
                               ? CeerEnumeration{"Id", {}}
                               : load_ceer_enumeration(config.universal_ceer_path);
  T39Options opts;
  opts.k_bound = config.k_bound;
  T39PriorityList priority = t39_default_priority(fam, config.num_ceers, config.k_bound);
  T39State state = t39_init(std::move(a_enum), std::move(t_enum), std::move(fam),
                            config.num_ceers, priority, opts);
  t39_run(state, config.stages);
  state.trace().save(config.output_path);
  log << "t39: " << config.stages << " stages, " << state.events().size() << " events -> "
      << config.output_path << "\n";
  return kExitOk;
}

}  // namespace

std::vector<std::uint64_t> parse_sample_spec(const std::string& spec) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(std::stoull(item));
    } else {
      std::uint64_t lo = std::stoull(item.substr(0, dash));
      std::uint64_t hi = std::stoull(item.substr(dash + 1));
      if (hi < lo) throw std::invalid_argument("bad range in sample spec: " + item);
      for (std::uint64_t n = lo; n <= hi; ++n) out.push_back(n);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int cmd_run(const RunConfig& config, std::ostream& log) {
  try {
    if (config.output_path.empty() && config.scenario != "hsf") {
      log << "config error: --out is required\n";
      return kExitConfigError;
    }
    if (config.scenario == "t21") return run_t21_scenario(config, log);
    if (config.scenario == "t39") return run_t39_scenario(config, log);
    if (config.scenario == "hsf") {
      return cmd_analyze(config.reduction_path, config.sample_spec, config.horizon, log,
                         config.output_path);
    }
    log << "config error: unknown scenario '" << config.scenario << "'\n";
    return kExitConfigError;
  } catch (const FixtureError& e) {
    log << "fixture error: " << e.what() << "\n";
    return kExitFixtureError;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

int cmd_verify(const std::string& trace_path, std::ostream& out) {
  TraceDocument doc;
  try {
    doc = TraceDocument::load(trace_path);
  } catch (const std::exception& e) {
    out << "fixture error: " << e.what() << "\n";
    return kExitFixtureError;
  }
  Report report;
  try {
    if (doc.scenario == "t21") {
      report = verify_t21_trace(doc);
    } else if (doc.scenario == "t39") {
      report = verify_t39_trace(doc);
    } else {
      out << "fixture error: unknown scenario '" << doc.scenario << "'\n";
      return kExitFixtureError;
    }
  } catch (const std::exception& e) {
    out << "fixture error: trace replay failed: " << e.what() << "\n";
    return kExitFixtureError;
  }
  out << report.to_text();
  return report.all_passed() ? kExitOk : kExitVerificationFailure;
}

int cmd_analyze(const std::string& reduction_path, const std::string& sample_spec,
                std::uint64_t horizon, std::ostream& out, const std::string& output_path) {
  ReductionTable table;
  std::vector<std::uint64_t> sample;
  try {
    table = load_reduction_table(reduction_path);
    sample = parse_sample_spec(sample_spec);
  } catch (const FixtureError& e) {
    out << "fixture error: " << e.what() << "\n";
    return kExitFixtureError;
  } catch (const std::exception& e) {
    out << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  std::vector<std::uint64_t> even_sources;  // itinerary sources n for codes 2n
  std::vector<std::uint64_t> even_codes;
  for (std::uint64_t code : sample) {
    if (code % 2 == 0) {
      even_sources.push_back(code / 2);
      even_codes.push_back(code);
    }
  }

  json_t report;
  report["reduction"] = reduction_path;
  report["horizon"] = horizon;
  report["sample"] = json_t(sample);

  out << "itineraries (horizon " << horizon << "):\n";
  json_t words = json_t::array();
  for (std::uint64_t n : even_sources) {
    TauWord word = tau_prefix(table, n, horizon);
    auto period = detect_period(word);
    out << "  2n=" << 2 * n << "  " << word.letters << (word.truncated() ? " (truncated)" : "");
    json_t wj{{"code", 2 * n}, {"word", word.letters}, {"truncated", word.truncated()}};
    if (period && !word.truncated()) {
      out << "  preperiod=" << period->preperiod_len << " period=" << period->period_len;
      wj["preperiod"] = period->preperiod_len;
      wj["period"] = period->period_len;
    }
    out << "\n";
    words.push_back(std::move(wj));
  }
  report["words"] = std::move(words);

  IterationExponents exps = compute_iteration_exponents(table, even_sources, horizon);
  out << "exponents: n1=" << exps.n1 << " n2=" << exps.n2;
  if (!exps.undetermined.empty()) {
    out << "  (undetermined sources:";
    for (std::uint64_t n : exps.undetermined) out << " " << n;
    out << ")";
  }
  out << "\n";
  report["n1"] = exps.n1;
  report["n2"] = exps.n2;
  report["undetermined_sources"] = json_t(exps.undetermined);

  ReductionTable f1 = iterate(table, exps.n1);
  ReductionTable f2 = iterate(f1, exps.n2);
  ClassSplit split = classify_cx_cy(f2, even_codes, horizon);
  out << "split: cx=" << split.cx.size() << " cy=" << split.cy.size()
      << " undecided=" << split.undecided.size() << "\n";
  report["cx"] = json_t(split.cx);
  report["cy"] = json_t(split.cy);
  report["undecided"] = json_t(split.undecided);

  InducedReduction gx = g_from_cx(f2, split);
  out << "even-side map: " << gx.g.size() << " entries";
  if (!gx.omitted.empty()) out << ", " << gx.omitted.size() << " omitted";
  out << "\n";
  json_t gxj = json_t::array();
  for (const auto& [n, e] : gx.g.entries()) gxj.push_back(json_t::array({n, e.value}));
  report["g_from_cx"] = std::move(gxj);
  report["g_from_cx_omitted"] = json_t(gx.omitted);

  OntoYResult gy = g_onto_y(f2);
  out << "odd-side map: " << gy.g.size() << " entries";
  if (!gy.omitted.empty()) out << ", " << gy.omitted.size() << " with short orbits";
  if (!gy.parity_violations.empty()) {
    out << ", parity violations at:";
    for (std::uint64_t n : gy.parity_violations) out << " " << n;
  }
  out << "\n";
  json_t gyj = json_t::array();
  for (const auto& [n, e] : gy.g.entries()) gyj.push_back(json_t::array({n, e.value}));
  report["g_onto_y"] = std::move(gyj);
  report["g_onto_y_omitted"] = json_t(gy.omitted);
  report["g_onto_y_parity_violations"] = json_t(gy.parity_violations);

  if (!output_path.empty()) save_json_file(report, output_path);
  return kExitOk;
}

int cmd_validate(const std::string& family_path, std::ostream& out) {
  OracleFamily fam;
  try {
    fam = family_from_json(load_json_file(family_path));
  } catch (const std::exception& e) {
    out << "fixture error: " << e.what() << "\n";
    return kExitFixtureError;
  }
  Verdict verdict = validate_family(fam);
  out << "family '" << fam.name << "': " << verdict.to_string() << "\n";
  for (const auto& w : verdict.warnings) out << "warning: " << w << "\n";
  return verdict.holds() ? kExitOk : kExitFixtureError;
}

}  // namespace ceerbench
