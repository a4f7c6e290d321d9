// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "ceerbench/algebra.hpp"
#include "ceerbench/fixtures.hpp"
#include "ceerbench/t39.hpp"

using namespace ceerbench;

namespace {

OracleFamily fixture_family(const std::string& name) {
  return load_family(std::string(CEERBENCH_FIXTURES) + "/families/" + name + ".json");
}

CeerEnumeration id_enum() { return CeerEnumeration{"Id", {}}; }

T39State run_scenario(const OracleFamily& fam, CeerEnumeration a, CeerEnumeration t,
                      std::uint64_t num_ceers, std::uint64_t stages, std::uint64_t k_bound = 1) {
  T39Options opts;
  opts.k_bound = k_bound;
  T39PriorityList priority = t39_default_priority(fam, num_ceers, k_bound);
  T39State state = t39_init(std::move(a), std::move(t), fam, num_ceers, priority, opts);
  t39_run(state, stages);
  return state;
}

const T39Requirement& req_named(const T39State& state, const std::string& name) {
  for (const auto& r : state.requirements()) {
    if (r.name() == name) return r;
  }
  throw std::runtime_error("no requirement " + name);
}

}  // namespace

TEST_CASE("init starts from identity ceers with no restraints") {
  OracleFamily fam = fixture_family("empty");
  T39State a = run_scenario(fam, id_enum(), id_enum(), 2, 0);
  T39State b = run_scenario(fam, id_enum(), id_enum(), 2, 0);
  CHECK(a == b);
  CHECK(a.restraints().empty());
  for (const auto& ceer : a.ceers()) CHECK(ceer.census().empty());
  CHECK(verify_t39(a).all_passed());

  CHECK_THROWS_AS(t39_init(id_enum(), id_enum(), fam, 0, {}), std::invalid_argument);
  CHECK_THROWS_AS(t39_init(id_enum(), id_enum(), fam, 2, {}), std::invalid_argument);
}

TEST_CASE("empty family: witnesses freeze while images diverge") {
  OracleFamily fam = fixture_family("empty");
  T39State state = run_scenario(fam, id_enum(), id_enum(), 2, 50);
  for (const auto& r : state.requirements()) {
    if (r.kind != T39Kind::D) continue;
    CHECK(r.phase_name() == "Running");
    CHECK(r.d_params.size() == 2);
  }
  // Only witness appointments ever happened: no ceer gained a collapse.
  for (const auto& ceer : state.ceers()) CHECK(ceer.census().empty());
  CHECK(verify_t39(state).all_passed());
}

TEST_CASE("identity family: the diagonal lands in one ceer only") {
  OracleFamily fam = fixture_family("identity");
  T39State state = run_scenario(fam, id_enum(), id_enum(), 2, 200);
  const T39Requirement& d01 = req_named(state, "D:0:0:1");
  CHECK(d01.phase_name() == "SatisfiedWith");
  REQUIRE(d01.d_params.size() >= 2);
  std::uint64_t a0 = d01.d_params[0];
  std::uint64_t a1 = d01.d_params[1];
  CHECK(state.ceers()[0].related(a0, a1));
  CHECK_FALSE(state.ceers()[1].related(a0, a1));
  CHECK(verify_t39(state).all_passed());
}

TEST_CASE("the base enumeration is injected into even codes") {
  OracleFamily fam = fixture_family("empty");
  CeerEnumeration a = load_ceer_enumeration(std::string(CEERBENCH_FIXTURES) + "/ceers/a_simple.json");
  T39State state = run_scenario(fam, a, id_enum(), 2, 10);
  for (const auto& ceer : state.ceers()) {
    CHECK(ceer.related(0, 2));
    // Forced exactly at stage 3 by the enumeration stamp.
    CHECK_FALSE(ceer.related_at(0, 2, TimePoint{2, 1000000}));
  }
  CHECK(verify_t39(state).all_passed());

  // Evens code the base exactly: doubling is a reduction on the fragment.
  ReductionTable doubling;
  for (std::uint64_t n = 0; n <= 4; ++n) doubling.define(n, 2 * n, TimePoint{0, n});
  Verdict verdict = check_reduction(doubling, CeerView::direct(state.base()),
                                    CeerView::direct(state.ceers()[0]), {0, 1, 2, 3, 4});
  CHECK(verdict.holds());
}

TEST_CASE("a CCR requirement waits on its witness pair") {
  OracleFamily fam;
  fam.name = "ccr-probe";
  fam.phis.resize(0);
  fam.wes.resize(1);
  fam.wes[0].elems.push_back({pair_code(4, 8), 1});
  fam.wes[0].elems.push_back({pair_code(8, 9), 3});

  T39State state = run_scenario(fam, id_enum(), id_enum(), 1, 2, 0);
  const T39Requirement* ccr = &req_named(state, "CCR:0:0");
  REQUIRE(ccr->ccr_xyz.has_value());
  CHECK((*ccr->ccr_xyz)[0] == 4);
  CHECK((*ccr->ccr_xyz)[1] == 8);
  std::uint64_t z = (*ccr->ccr_xyz)[2];
  CHECK(z % 2 == 1);
  CHECK(state.restraints().contains(Restraint{0, 0, z}));

  t39_run(state, 2);  // the second pair appears at stage 3
  ccr = &req_named(state, "CCR:0:0");
  CHECK(ccr->phase_name() == "Done");
  CHECK(state.ceers()[0].related(8, z));
  CHECK_FALSE(state.ceers()[0].related(4, z));
  CHECK(state.restraints().empty());
  CHECK(verify_t39(state).all_passed());
}

TEST_CASE("an SF requirement avoids restrained classes and collapses into the target") {
  OracleFamily fam;
  fam.name = "sf-probe";
  fam.wes.resize(1);
  // One odd element; the pair it codes keeps the CCR requirement waiting.
  fam.wes[0].elems.push_back({11, 2});

  T39State state = run_scenario(fam, id_enum(), id_enum(), 1, 6, 1);
  const T39Requirement& ccr = req_named(state, "CCR:0:0");
  CHECK(ccr.phase_name() == "WaitingPairZ");
  const T39Requirement& sf0 = req_named(state, "SF:0:0:0");
  CHECK(sf0.phase_name() == "Done");
  CHECK(sf0.sf_witness == 11);
  CHECK(state.ceers()[0].related(11, 0));

  // The second target class never gets a witness: 11 is now even-related.
  const T39Requirement& sf1 = req_named(state, "SF:0:1:0");
  CHECK(sf1.phase_name() == "Initialized");
  CHECK(verify_t39(state).all_passed());
}

TEST_CASE("a watcher made obsolete by the base drops its restraint at the next scan") {
  OracleFamily fam;
  fam.name = "ccr-obsolete";
  fam.wes.resize(1);
  fam.wes[0].elems.push_back({pair_code(0, 4), 1});  // an even-coded pair
  CeerEnumeration a{"A", {{0, 2, 4}}};  // relates the pair's codes at stage 4

  T39State state = run_scenario(fam, a, id_enum(), 1, 3, 0);
  const T39Requirement* ccr = &req_named(state, "CCR:0:0");
  REQUIRE(ccr->ccr_xyz.has_value());
  std::uint64_t z = (*ccr->ccr_xyz)[2];
  CHECK(state.restraints().contains(Restraint{0, 0, z}));

  t39_run(state, 1);  // the stage-4 injection relates 0 and 4
  ccr = &req_named(state, "CCR:0:0");
  CHECK(state.ceers()[0].related(0, 4));
  CHECK(ccr->phase_name() == "Done");
  CHECK(state.restraints().empty());
  CHECK(state.ceers()[0].class_members(z) == std::vector<std::uint64_t>{z});
  CHECK(verify_t39(state).all_passed());
}

TEST_CASE("a higher-priority action cancels parameters, restraints and satisfaction") {
  OracleFamily fam = fixture_family("identity");
  fam.wes.resize(1);
  fam.wes[0].elems.push_back({pair_code(4, 8), 6});

  T39State state = run_scenario(fam, id_enum(), id_enum(), 2, 5, 0);
  CHECK(req_named(state, "D:0:1:0").phase_name() == "SatisfiedWith");
  CHECK(req_named(state, "D:0:0:1").phase_name() == "SatisfiedWith");

  t39_run(state, 1);  // stage 6: the CCR pair appears and the CCR acts
  CHECK(req_named(state, "CCR:0:0").phase_name() == "WaitingPairZ");
  for (const std::string name : {"D:0:1:0", "D:0:0:1"}) {
    const T39Requirement& d = req_named(state, name);
    CHECK(d.phase_name() == "Initialized");
    CHECK(d.d_params.empty());
    CHECK_FALSE(d.d_cd.has_value());
  }
  // Only the CCR witness is still restrained.
  CHECK(state.restraints().size() == 1);
  CHECK(verify_t39(state).all_passed());

  // The injured requirements start over afterwards.
  t39_run(state, 6);
  CHECK(req_named(state, "D:0:1:0").phase_name() == "SatisfiedWith");
  CHECK(verify_t39(state).all_passed());
}

TEST_CASE("runs compose and traces replay") {
  OracleFamily fam = fixture_family("identity");
  T39PriorityList priority = t39_default_priority(fam, 2, 1);
  T39State whole = t39_init(id_enum(), id_enum(), fam, 2, priority);
  t39_run(whole, 24);
  T39State split = t39_init(id_enum(), id_enum(), fam, 2, priority);
  t39_run(split, 9);
  t39_run(split, 15);
  CHECK(whole == split);

  TraceDocument doc = whole.trace();
  CHECK(t39_replay_summary(doc) == doc.summary);
  TraceDocument parsed = TraceDocument::from_json(doc.to_json());
  CHECK(t39_replay_summary(parsed) == doc.summary);

  T39State again = t39_init(id_enum(), id_enum(), fam, 2, priority);
  t39_run(again, 24);
  CHECK(again.trace().to_json() == doc.to_json());
}

TEST_CASE("verify flags a watched witness collapsed into an even class") {
  OracleFamily fam;
  fam.name = "ccr-probe";
  fam.wes.resize(1);
  fam.wes[0].elems.push_back({pair_code(4, 8), 1});
  T39State state = run_scenario(fam, id_enum(), id_enum(), 1, 4, 0);
  std::uint64_t z = (*req_named(state, "CCR:0:0").ccr_xyz)[2];
  REQUIRE(state.restraints().contains(Restraint{0, 0, z}));

  TraceDocument doc = state.trace();
  TraceEvent ev;
  ev.time = TimePoint{doc.events.back().time.stage, doc.events.back().time.tick + 1};
  ev.kind = "collapse";
  ev.by = "injected";
  ev.data = json_t{{"ceer", 0},
                   {"pairs", json_t::array({json_t::array({z, 6})})},
                   {"merged", json_t::array({json_t::array({z, 6})})}};
  doc.events.push_back(ev);

  Report report = verify_t39_trace(doc);
  CHECK_FALSE(report.check("witness-separation-evens")->passed);
  CHECK(report.check("witness-separation-cross")->passed);
  CHECK(report.check("witness-separation-t-mirror")->passed);
  CHECK(report.check("even-coding-reduction")->passed);
  CHECK(report.check("restraint-respect")->passed);
}

TEST_CASE("verify flags an injected cross-requirement collapse") {
  OracleFamily fam = fixture_family("identity");
  T39State state = run_scenario(fam, id_enum(), id_enum(), 2, 3);
  // Stage 3: D:0:1:0 already satisfied with c,d restrained in ceer 0;
  // D:0:0:1 holds fresh witnesses restrained in ceer 0.
  std::uint64_t c = req_named(state, "D:0:1:0").d_cd->first;
  std::uint64_t a0 = req_named(state, "D:0:0:1").d_params[0];

  TraceDocument doc = state.trace();
  TraceEvent ev;
  ev.time = TimePoint{doc.events.back().time.stage, doc.events.back().time.tick + 1};
  ev.kind = "collapse";
  ev.by = "injected";
  ev.data = json_t{{"ceer", 0},
                   {"pairs", json_t::array({json_t::array({c, a0})})},
                   {"merged", json_t::array({json_t::array({c, a0})})}};
  doc.events.push_back(ev);

  Report report = verify_t39_trace(doc);
  CHECK_FALSE(report.all_passed());
  CHECK_FALSE(report.check("witness-separation-cross")->passed);
  CHECK(report.check("witness-separation-t-mirror")->passed);
  CHECK(report.check("witness-separation-evens")->passed);
  CHECK(report.check("even-coding-reduction")->passed);
  CHECK(report.check("restraint-respect")->passed);
}
