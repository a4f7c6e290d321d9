// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Regenerates the shipped injected-violation traces under fixtures/traces/.
// Each fixture starts from a clean reference run and inserts one event that
// makes exactly one verifier check fail; the tool asserts that property
// before writing anything.

#include <iostream>
#include <map>
#include <set>
#include <string>

#include "ceerbench/fixtures.hpp"
#include "ceerbench/t21.hpp"
#include "ceerbench/t39.hpp"

using namespace ceerbench;

namespace {

std::string g_fixtures_dir;

OracleFamily fixture_family(const std::string& name) {
  return load_family(g_fixtures_dir + "/families/" + name + ".json");
}

// Append `ev` right after the last event of `stage` (or at the very end),
// keeping times strictly increasing without renumbering anything.
TraceDocument inject_after_stage(const TraceDocument& doc, std::uint64_t stage, TraceEvent ev) {
  TraceDocument out = doc;
  std::size_t pos = out.events.size();
  TimePoint at{stage, 1};
  for (std::size_t i = 0; i < out.events.size(); ++i) {
    if (out.events[i].time.stage <= stage) {
      pos = i + 1;
      at = out.events[i].time.next_tick();
    }
  }
  ev.time = at;
  out.events.insert(out.events.begin() + pos, ev);
  return out;
}

TraceEvent collapse_event(std::uint64_t a, std::uint64_t b, const std::string& by) {
  TraceEvent ev;
  ev.kind = "collapse";
  ev.by = by;
  ev.data = json_t{{"pairs", json_t::array({json_t::array({a, b})})},
                   {"merged", json_t::array({json_t::array({a, b})})}};
  return ev;
}

TraceEvent collapse_event_t39(std::uint64_t ceer, std::uint64_t a, std::uint64_t b,
                              const std::string& by) {
  TraceEvent ev = collapse_event(a, b, by);
  ev.data["ceer"] = ceer;
  return ev;
}

void require(bool cond, const std::string& what) {
  if (!cond) {
    std::cerr << "fixture generation failed: " << what << "\n";
    std::exit(1);
  }
}

void assert_exactly_fails(const TraceDocument& doc, const std::string& check_name) {
  Report report = doc.scenario == "t21" ? verify_t21_trace(doc) : verify_t39_trace(doc);
  for (const auto& check : report.checks) {
    if (check.name == check_name) {
      require(!check.passed, check_name + " should fail in its fixture");
    } else {
      require(check.passed, check.name + " unexpectedly fails in the " + check_name + " fixture");
    }
  }
}

void write(const TraceDocument& doc, const std::string& name, const std::string& check_name) {
  assert_exactly_fails(doc, check_name);
  std::string path = g_fixtures_dir + "/traces/" + name + ".json";
  doc.save(path);
  std::cout << name << " -> fails exactly " << check_name << "\n";
}

T21State run_t21_scenario(const std::string& family, std::uint64_t stages) {
  OracleFamily fam = fixture_family(family);
  T21PriorityList priority = t21_default_priority(fam, 2);
  T21State state = t21_init(std::move(fam), priority);
  t21_run(state, stages);
  return state;
}

// --------------------------------------------------------------------------
// t21 fixtures
// --------------------------------------------------------------------------

void make_t21_disjoint() {
  T21State state = run_t21_scenario("empty", 30);
  TraceDocument doc = state.trace();
  // Point a waiting substitute at a number that is already an image value:
  // side Y, so the coded number is 2v+1.
  std::optional<std::uint64_t> odd_image;
  for (std::uint64_t v : state.f().values()) {
    if (v % 2 == 1) odd_image = v;
  }
  require(odd_image.has_value(), "no odd image value in the empty run");
  std::optional<std::string> target;
  for (const auto& r : state.requirements()) {
    if (r.side == Side::Y && r.phase == T21Phase::Case2Step0Wait) target = r.name();
  }
  require(target.has_value(), "no side-Y substitute waiter in the empty run");

  TraceEvent ev;
  ev.kind = "param-assign";
  ev.by = "injected";
  ev.data = json_t{{"param", "k_prime"}, {"req", *target}, {"value", (*odd_image - 1) / 2}};
  write(inject_after_stage(doc, state.stage(), ev), "t21_dei_disjoint", "dei-disjoint");
}

void make_t21_justified() {
  T21State state = run_t21_scenario("successor", 60);
  TraceDocument doc = state.trace();

  // Find a stage whose end has some diagonal witness waiting for its image,
  // and an image value of the same parity in a singleton class with no image
  // of its own.
  for (std::uint64_t stage = 1; stage <= state.stage(); ++stage) {
    TraceDocument prefix = doc;
    prefix.events.clear();
    for (const auto& ev : doc.events) {
      if (ev.time.stage <= stage) prefix.events.push_back(ev);
    }
    T21ReplayState rs = t21_replay(prefix);
    for (const auto& r : rs.reqs) {
      if (r.phase != T21Phase::DiagStep3Wait || !r.diag_w) continue;
      std::uint64_t wt = t21_code(r.side, *r.diag_w);
      if (rs.z.class_members(wt).size() != 1) continue;
      for (std::uint64_t y : rs.f.values()) {
        if (y % 2 != wt % 2 || y == wt) continue;
        if (rs.f.defined(y)) continue;  // y must stay out of f's domain
        if (rs.z.class_members(y).size() != 1) continue;
        TraceDocument candidate =
            inject_after_stage(doc, stage, collapse_event(wt, y, "injected"));
        Report report = verify_t21_trace(candidate);
        bool only_justified = true;
        for (const auto& check : report.checks) {
          bool should_fail = check.name == "dei-collapse-justified";
          if (check.passed == should_fail) only_justified = false;
        }
        if (only_justified) {
          write(candidate, "t21_dei_justified", "dei-collapse-justified");
          return;
        }
      }
    }
  }
  require(false, "no usable diagonal-witness window found");
}

void make_t21_parity() {
  T21State state = run_t21_scenario("empty", 30);
  TraceDocument doc = state.trace();
  std::uint64_t base = state.z().allocated_max() + 2;
  write(inject_after_stage(doc, state.stage(), collapse_event(base, base + 1, "injected")),
        "t21_parity", "no-cross-parity-collapse");
}

void make_t21_reduction() {
  T21State state = run_t21_scenario("empty", 30);
  TraceDocument doc = state.trace();
  // Pull an even image value with no image of its own into the class of 0.
  std::optional<std::uint64_t> even_tip;
  for (std::uint64_t v : state.f().values()) {
    if (v % 2 == 0 && !state.f().defined(v) && state.z().class_members(v).size() == 1) {
      even_tip = v;
    }
  }
  require(even_tip.has_value(), "no even image tip in the empty run");
  write(inject_after_stage(doc, state.stage(), collapse_event(0, *even_tip, "injected")),
        "t21_reduction", "f-reduction-and-zero-class");
}

void make_t21_single_actor() {
  T21State state = run_t21_scenario("empty", 30);
  TraceDocument doc = state.trace();
  // Stage 2 already has a genuine actor; let the lowest-priority requirement
  // "re-announce" its current phase there.
  const T21Requirement& low = state.requirements().back();
  TraceEvent ev;
  ev.kind = "phase-change";
  ev.by = low.name();
  ev.data = json_t{{"req", low.name()}, {"from", "Initialized"}, {"to", "Initialized"}};
  write(inject_after_stage(doc, 2, ev), "t21_single_actor", "single-actor-per-stage");
}

// --------------------------------------------------------------------------
// t39 fixtures
// --------------------------------------------------------------------------

T39State run_t39_identity(std::uint64_t stages) {
  OracleFamily fam = fixture_family("identity");
  T39PriorityList priority = t39_default_priority(fam, 2, 1);
  T39State state = t39_init(CeerEnumeration{"Id", {}}, CeerEnumeration{"Id", {}}, fam, 2, priority);
  t39_run(state, stages);
  return state;
}

const T39Requirement& req_named(const T39State& state, const std::string& name) {
  for (const auto& r : state.requirements()) {
    if (r.name() == name) return r;
  }
  throw std::runtime_error("no requirement " + name);
}

void make_t39_cross() {
  // Identity functions plus one enumerated pair: the watching requirement
  // holds a witness in ceer 0 forever, next to another requirement's
  // permanent image parameters.
  OracleFamily fam = fixture_family("identity");
  fam.wes.resize(1);
  fam.wes[0].elems.push_back({pair_code(4, 8), 1});
  T39PriorityList priority = t39_default_priority(fam, 2, 1);
  T39State state = t39_init(CeerEnumeration{"Id", {}}, CeerEnumeration{"Id", {}}, fam, 2, priority);
  t39_run(state, 10);

  const T39Requirement& ccr = req_named(state, "CCR:0:0");
  require(ccr.ccr_xyz.has_value(), "watching requirement lost its witness");
  std::uint64_t z = (*ccr.ccr_xyz)[2];
  const T39Requirement& d10 = req_named(state, "D:0:1:0");
  require(d10.d_cd.has_value(), "D:0:1:0 has no image parameters");
  std::uint64_t c = d10.d_cd->first;

  TraceDocument doc = state.trace();
  write(inject_after_stage(doc, state.stage(), collapse_event_t39(0, z, c, "injected")),
        "t39_cross", "witness-separation-cross");
}

void make_t39_mirror() {
  T39State state = run_t39_identity(10);
  TraceDocument doc = state.trace();
  // At the end of stage 3 both diagonal witnesses of D:0:0:1 are still
  // restrained; the universal stand-in (Id) never relates their indices.
  T39State probe = run_t39_identity(3);
  const T39Requirement& d01 = req_named(probe, "D:0:0:1");
  require(d01.d_params.size() == 2, "D:0:0:1 should hold two witnesses at stage 3");
  write(inject_after_stage(doc, 3,
                           collapse_event_t39(0, d01.d_params[0], d01.d_params[1], "injected")),
        "t39_mirror", "witness-separation-t-mirror");
}

void make_t39_evens() {
  T39State state = run_t39_identity(10);
  TraceDocument doc = state.trace();
  T39State probe = run_t39_identity(3);
  const T39Requirement& d01 = req_named(probe, "D:0:0:1");
  require(d01.d_params.size() == 2, "D:0:0:1 should hold two witnesses at stage 3");
  write(inject_after_stage(doc, 3, collapse_event_t39(0, d01.d_params[0], 2, "injected")),
        "t39_evens", "witness-separation-evens");
}

void make_t39_coding() {
  T39State state = run_t39_identity(10);
  TraceDocument doc = state.trace();
  write(inject_after_stage(doc, state.stage(), collapse_event_t39(0, 4, 6, "injected")),
        "t39_coding", "even-coding-reduction");
}

void make_t39_respect() {
  T39State state = run_t39_identity(10);
  TraceDocument doc = state.trace();
  // A lower-priority requirement merges a fresh number into a class that a
  // higher-priority requirement restrains.
  const T39Requirement& d10 = req_named(state, "D:0:1:0");
  require(d10.d_cd.has_value(), "D:0:1:0 has no image parameters");
  std::uint64_t c = d10.d_cd->first;
  std::uint64_t loose = 101;
  write(inject_after_stage(doc, state.stage(), collapse_event_t39(0, loose, c, "D:0:0:1")),
        "t39_respect", "restraint-respect");
}

}  // namespace

int main(int argc, char** argv) {
  g_fixtures_dir = argc > 1 ? argv[1] : "fixtures";
  make_t21_disjoint();
  make_t21_justified();
  make_t21_parity();
  make_t21_reduction();
  make_t21_single_actor();
  make_t39_cross();
  make_t39_mirror();
  make_t39_evens();
  make_t39_coding();
  make_t39_respect();
  std::cout << "all violation fixtures written\n";
  return 0;
}
