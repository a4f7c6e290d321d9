// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "ceerbench/commands.hpp"
#include "ceerbench/fixtures.hpp"
#include "ceerbench/hsf.hpp"
#include "ceerbench/t21.hpp"
#include "ceerbench/t39.hpp"
#include "helpers.hpp"

using namespace ceerbench;
using ceerbench::testing::BruteCloser;
using ceerbench::testing::random_pairs;

namespace {

const std::string kFixtures = CEERBENCH_FIXTURES;

struct Criterion {
  int number;
  std::string name;
  bool passed = true;
  std::ostringstream detail;
  double seconds = 0.0;

  void fail(const std::string& why) {
    passed = false;
    if (detail.tellp() == 0) detail << why;
  }
};

int g_failures = 0;

template <typename Fn>
void criterion(int number, const std::string& name, Fn&& body) {
  Criterion c{number, name};
  auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.fail(std::string("exception: ") + e.what());
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%d/9] %-28s %s  (%.2fs)%s%s\n", c.number, c.name.c_str(),
              c.passed ? "PASS" : "FAIL", c.seconds,
              c.passed || c.detail.str().empty() ? "" : "  -- ", c.detail.str().c_str());
  if (!c.passed) ++g_failures;
}

OracleFamily fixture_family(const std::string& name) {
  return load_family(kFixtures + "/families/" + name + ".json");
}

T21State run_t21_scenario(const std::string& family, std::uint64_t stages) {
  OracleFamily fam = fixture_family(family);
  T21PriorityList priority = t21_default_priority(fam, 2);
  T21State state = t21_init(std::move(fam), priority);
  t21_run(state, stages);
  return state;
}

T39State run_t39_scenario(const std::string& family, std::uint64_t stages) {
  OracleFamily fam = fixture_family(family);
  T39PriorityList priority = t39_default_priority(fam, 2, 1);
  T39State state = t39_init(CeerEnumeration{"Id", {}}, CeerEnumeration{"Id", {}}, fam, 2, priority);
  t39_run(state, stages);
  return state;
}

// 1. Kernel vs. a from-scratch closure: 1000 random logs over 0..31.
void kernel_oracle_equivalence(Criterion& c) {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(0xACCE55ED);
  std::uniform_int_distribution<std::size_t> count(0, 10);
  for (int round = 0; round < 1000; ++round) {
    auto pairs = random_pairs(rng, 31, count(rng));
    StageCeer ceer = StageCeer::identity();
    for (const auto& [a, b] : pairs) ceer.collapse({{a, b}}, "acceptance");
    BruteCloser oracle(31);
    oracle.add_pairs(pairs);
    for (std::uint64_t x = 0; x <= 31; ++x) {
      for (std::uint64_t y = 0; y <= 31; ++y) {
        if (ceer.related(x, y) != oracle.related(x, y)) {
          c.fail("mismatch in round " + std::to_string(round));
          return;
        }
      }
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > 5.0) c.fail("exceeded the five-second budget");
}

// 2. Join/restrict round-trips and the reduction checker vs. its oracle.
void algebra_roundtrips(Criterion& c) {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(0x5EED);
  for (int round = 0; round < 100; ++round) {
    auto r = ceerbench::testing::random_ceer(rng, 64, 8);
    auto s = ceerbench::testing::random_ceer(rng, 64, 8);
    CeerView rv = CeerView::direct(r.ceer);
    CeerView sv = CeerView::direct(s.ceer);
    CeerView z = uniform_join(rv, sv);
    CeerView re = restrict_half(z, Parity::Even);
    CeerView so = restrict_half(z, Parity::Odd);
    for (std::uint64_t x = 0; x <= 64; ++x) {
      for (std::uint64_t y = 0; y <= 64; ++y) {
        if (re.related(x, y) != rv.related(x, y) || so.related(x, y) != sv.related(x, y) ||
            z.related(2 * x, 2 * y + 1)) {
          c.fail("round-trip or parity separation broke");
          return;
        }
      }
    }
  }
  std::uniform_int_distribution<std::uint64_t> val(0, 9);
  for (int round = 0; round < 1000; ++round) {
    auto r = ceerbench::testing::random_ceer(rng, 9, 6);
    auto s = ceerbench::testing::random_ceer(rng, 9, 6);
    ReductionTable f;
    for (std::uint64_t x = 0; x <= 5; ++x) f.define(x, val(rng), TimePoint{0, x});
    std::vector<std::uint64_t> domain{0, 1, 2, 3, 4, 5};
    bool oracle_holds = true;
    for (std::uint64_t x : domain) {
      for (std::uint64_t y : domain) {
        if (r.oracle.related(x, y) != s.oracle.related(*f.value(x), *f.value(y))) {
          oracle_holds = false;
        }
      }
    }
    Verdict verdict =
        check_reduction(f, CeerView::direct(r.ceer), CeerView::direct(s.ceer), domain);
    if (verdict.holds() != oracle_holds) {
      c.fail("check_reduction disagrees with the exhaustive oracle");
      return;
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > 10.0) c.fail("exceeded the ten-second budget");
}

// 3. The three shipped scenarios keep every invariant at every stage.
void t21_invariant_suite(Criterion& c) {
  for (const std::string family : {"empty", "successor", "identity"}) {
    auto start = std::chrono::steady_clock::now();
    T21State state = run_t21_scenario(family, 200);
    Report report = verify_t21(state);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!report.all_passed()) {
      for (const auto& check : report.checks) {
        if (!check.passed) c.fail(family + ": " + check.name + ": " + check.witness);
      }
      return;
    }
    if (secs > 10.0) {
      c.fail(family + " exceeded its time budget");
      return;
    }
  }
}

// 4. The diagonalization lands: replayed from the trace document.
void t21_diagonal_outcome(Criterion& c) {
  T21State state = run_t21_scenario("successor", 200);
  TraceDocument doc = state.trace();
  T21ReplayState rs = t21_replay(doc);
  const T21Requirement* top = nullptr;
  for (const auto& r : rs.reqs) {
    if (r.name() == "SFX:0:0") top = &r;
  }
  if (top == nullptr || top->phase != T21Phase::Satisfied) {
    c.fail("the top requirement did not reach satisfaction");
    return;
  }
  if (!top->diag_z || !top->diag_w) {
    c.fail("no diagonal pair recorded");
    return;
  }
  OracleFamily fam = family_from_json(doc.config.at("family"));
  std::uint64_t z = *top->diag_z;
  std::uint64_t w = *top->diag_w;
  auto pz = phi_at(fam, 0, z, rs.stage);
  auto pw = phi_at(fam, 0, w, rs.stage);
  if (!pz || !pw) {
    c.fail("images of the diagonal pair diverge");
    return;
  }
  bool pair_related = rs.z.related(2 * z, 2 * w);
  bool images_related = rs.z.related(2 * *pz, 2 * *pw);
  if (pair_related == images_related) c.fail("diagonal outcome does not separate the images");
}

// 5. Each shipped corrupted trace makes exactly its own check fail.
void mutation_sensitivity(Criterion& c) {
  const std::vector<std::pair<std::string, std::string>> fixtures = {
      {"t21_dei_disjoint", "dei-disjoint"},
      {"t21_dei_justified", "dei-collapse-justified"},
      {"t21_parity", "no-cross-parity-collapse"},
      {"t21_reduction", "f-reduction-and-zero-class"},
      {"t21_single_actor", "single-actor-per-stage"},
      {"t39_cross", "witness-separation-cross"},
      {"t39_mirror", "witness-separation-t-mirror"},
      {"t39_evens", "witness-separation-evens"},
      {"t39_coding", "even-coding-reduction"},
      {"t39_respect", "restraint-respect"},
  };
  for (const auto& [name, check_name] : fixtures) {
    TraceDocument doc = TraceDocument::load(kFixtures + "/traces/" + name + ".json");
    Report report = doc.scenario == "t21" ? verify_t21_trace(doc) : verify_t39_trace(doc);
    for (const auto& check : report.checks) {
      if (check.name == check_name) {
        if (check.passed) c.fail(name + ": " + check_name + " unexpectedly passes");
        if (!check.passed && check.witness.empty()) c.fail(name + ": no concrete witness");
      } else if (!check.passed) {
        c.fail(name + ": " + check.name + " also fails");
      }
    }
  }
}

// 6. The covering construction keeps witness separation, the even coding and
//    restraint respect; the identity scenario lands its diagonal.
void t39_invariant_suite(Criterion& c) {
  for (const std::string family : {"empty", "identity"}) {
    auto start = std::chrono::steady_clock::now();
    T39State state = run_t39_scenario(family, 200);
    Report report = verify_t39(state);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!report.all_passed()) {
      for (const auto& check : report.checks) {
        if (!check.passed) c.fail(family + ": " + check.name + ": " + check.witness);
      }
      return;
    }
    if (secs > 10.0) {
      c.fail(family + " exceeded its time budget");
      return;
    }
    if (family == "identity") {
      const T39Requirement* d01 = nullptr;
      for (const auto& r : state.requirements()) {
        if (r.name() == "D:0:0:1") d01 = &r;
      }
      if (d01 == nullptr || !d01->d_satisfied || d01->d_params.size() < 2) {
        c.fail("D:0:0:1 did not reach its diagonal");
        return;
      }
      std::uint64_t a0 = d01->d_params[0];
      std::uint64_t a1 = d01->d_params[1];
      if (!state.ceers()[0].related(a0, a1) || state.ceers()[1].related(a0, a1)) {
        c.fail("the diagonal pair is not separated across the ceers");
      }
    }
  }
}

// 7. Orbit analysis: period detector round-trip, iterate compositionality,
//    the class split partition, and the induced maps on shipped fixtures.
void hsf_pipeline(Criterion& c) {
  auto start = std::chrono::steady_clock::now();
  std::vector<std::string> rhos{""};
  for (std::size_t len = 1; len <= 4; ++len) {
    for (std::uint64_t bits = 0; bits < (1ull << len); ++bits) {
      std::string s;
      for (std::size_t i = 0; i < len; ++i) s.push_back(bits & (1ull << i) ? 'Y' : 'X');
      rhos.push_back(s);
    }
  }
  for (const auto& rho : rhos) {
    for (const auto& sigma : rhos) {
      if (sigma.empty()) continue;
      std::string word = rho;
      while (word.size() < 32) word += sigma;
      word.resize(32);
      auto dec = detect_period(word);
      if (!dec) {
        c.fail("no decomposition for a periodic word");
        return;
      }
      for (std::size_t i = 0; i < word.size(); ++i) {
        char expected = i < dec->preperiod_len
                            ? word[i]
                            : word[dec->preperiod_len + (i - dec->preperiod_len) % dec->period_len];
        if (word[i] != expected) {
          c.fail("decomposition does not reproduce " + word);
          return;
        }
      }
    }
  }
  double roundtrip_secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (roundtrip_secs > 1.0) {
    c.fail("period round-trip exceeded one second");
    return;
  }

  std::mt19937_64 rng(0x17E7A7E);
  std::uniform_int_distribution<std::uint64_t> val(0, 24);
  for (int round = 0; round < 200; ++round) {
    ReductionTable f;
    for (std::uint64_t x = 0; x <= 24; ++x) {
      if (rng() % 4 != 0) f.define(x, val(rng), TimePoint{0, x});
    }
    std::uint64_t a = rng() % 4;
    std::uint64_t b = rng() % 4;
    ReductionTable fa = iterate(f, a);
    ReductionTable fb = iterate(f, b);
    ReductionTable fab = iterate(f, a + b);
    for (std::uint64_t x = 0; x <= 24; ++x) {
      auto mid = fa.value(x);
      auto via = mid ? fb.value(*mid) : std::nullopt;
      if (via && fab.defined(x) && *fab.value(x) != *via) {
        c.fail("iterate compositionality broke");
        return;
      }
    }
    std::vector<std::uint64_t> sample{0, 2, 4, 6, 8, 10};
    ClassSplit split = classify_cx_cy(f, sample, 6);
    std::set<std::uint64_t> seen;
    for (const auto* bucket : {&split.cx, &split.cy, &split.undecided}) {
      for (std::uint64_t n : *bucket) {
        if (!seen.insert(n).second) {
          c.fail("class split is not a partition");
          return;
        }
      }
    }
    if (seen.size() != sample.size()) {
      c.fail("class split dropped an element");
      return;
    }
  }

  ReductionTable f2 = load_reduction_table(kFixtures + "/reductions/odd_chains.json");
  if (!check_reduction(f2, CeerView::identity(), CeerView::identity(), f2.domain()).holds()) {
    c.fail("the shipped fixture is not a reduction");
    return;
  }
  ClassSplit split = classify_cx_cy(f2, {0, 2, 4, 6, 8, 10, 12}, 6);
  InducedReduction gx = g_from_cx(f2, split);
  if (!check_reduction(gx.g, CeerView::identity(), CeerView::identity(), {0, 1, 2, 3, 4, 5, 6})
           .holds()) {
    c.fail("the even-side induced map is not a reduction");
    return;
  }
  OntoYResult gy = g_onto_y(f2);
  if (!gy.parity_violations.empty() ||
      !check_reduction(gy.g, CeerView::identity(), CeerView::identity(), gy.g.domain()).holds()) {
    c.fail("the odd-side induced map is not a reduction");
  }
}

// 8. The search embedding of the identity into a complement relation.
void coceer_embedding(Criterion& c) {
  OracleFamily ident = fixture_family("v_identity");
  CoceerEmbedding embed = id_to_coceer(ident.wes[0], 20, 64);
  if (embed.stalled() || embed.values.size() != 21) {
    c.fail("the identity-complement search did not produce 21 values");
    return;
  }
  for (std::size_t i = 0; i < embed.values.size(); ++i) {
    for (std::size_t j = i + 1; j < embed.values.size(); ++j) {
      if (v_related(ident, 0, embed.values[i], embed.values[j], 64)) {
        c.fail("two embedded values fell into one complement class");
        return;
      }
    }
  }
  OracleFamily two = fixture_family("v_two_class");
  CoceerEmbedding stalled = id_to_coceer(two.wes[0], 5, 64);
  if (!stalled.stalled() || *stalled.stalled_at != 2) {
    c.fail("the two-class search did not stall at index 2");
  }
}

// 9. Scenario runs are bit-for-bit reproducible.
void determinism(Criterion& c) {
  struct Scenario {
    std::string name;
    RunConfig config;
  };
  std::vector<Scenario> scenarios;
  for (const std::string family : {"empty", "successor", "identity"}) {
    RunConfig config;
    config.scenario = "t21";
    config.family_path = kFixtures + "/families/" + family + ".json";
    config.stages = 120;
    scenarios.push_back({"t21-" + family, config});
  }
  for (const std::string family : {"empty", "identity"}) {
    RunConfig config;
    config.scenario = "t39";
    config.family_path = kFixtures + "/families/" + family + ".json";
    config.stages = 120;
    config.num_ceers = 2;
    config.k_bound = 1;
    scenarios.push_back({"t39-" + family, config});
  }
  for (auto& [name, config] : scenarios) {
    std::string path_a = "acceptance_" + name + "_a.json";
    std::string path_b = "acceptance_" + name + "_b.json";
    std::ostringstream sink;
    config.output_path = path_a;
    if (cmd_run(config, sink) != kExitOk) {
      c.fail(name + ": first run failed");
      return;
    }
    config.output_path = path_b;
    if (cmd_run(config, sink) != kExitOk) {
      c.fail(name + ": second run failed");
      return;
    }
    std::ifstream a(path_a, std::ios::binary);
    std::ifstream b(path_b, std::ios::binary);
    std::string bytes_a((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string bytes_b((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    std::remove(path_a.c_str());
    std::remove(path_b.c_str());
    if (bytes_a.empty() || bytes_a != bytes_b) {
      c.fail(name + ": traces differ between runs");
      return;
    }
  }
}

}  // namespace

int main() {
  criterion(1, "kernel-oracle-equivalence", kernel_oracle_equivalence);
  criterion(2, "algebra-roundtrips", algebra_roundtrips);
  criterion(3, "t21-invariant-suite", t21_invariant_suite);
  criterion(4, "t21-diagonal-outcome", t21_diagonal_outcome);
  criterion(5, "mutation-sensitivity", mutation_sensitivity);
  criterion(6, "t39-invariant-suite", t39_invariant_suite);
  criterion(7, "hsf-pipeline", hsf_pipeline);
  criterion(8, "coceer-embedding", coceer_embedding);
  criterion(9, "determinism", determinism);
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
