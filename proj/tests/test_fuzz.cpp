// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Randomized scenario audit: arbitrary small oracle tables and base
// enumerations must never break a verifier check, and every trace must
// replay to its own summary.

#include <doctest.h>

#include <random>
#include <set>

#include "ceerbench/t21.hpp"
#include "ceerbench/t39.hpp"

using namespace ceerbench;

namespace {

OracleFamily random_family(std::mt19937_64& rng) {
  OracleFamily fam;
  fam.name = "fuzz";
  std::uniform_int_distribution<std::uint64_t> small(0, 15), stage(1, 20), count(0, 12);
  fam.phis.resize(1 + rng() % 2);
  for (auto& phi : fam.phis) {
    std::set<std::uint64_t> used;
    std::uint64_t n = count(rng);
    for (std::uint64_t i = 0; i < n; ++i) {
      std::uint64_t input = small(rng);
      if (!used.insert(input).second) continue;
      phi.triples.push_back({input, small(rng), stage(rng)});
    }
  }
  fam.wes.resize(rng() % 2);
  for (auto& we : fam.wes) {
    std::set<std::uint64_t> used;
    std::uint64_t n = count(rng);
    for (std::uint64_t i = 0; i < n; ++i) {
      std::uint64_t e = rng() % 2 ? pair_code(small(rng), small(rng)) : small(rng);
      if (!used.insert(e).second) continue;
      we.elems.push_back({e, stage(rng)});
    }
  }
  return fam;
}

CeerEnumeration random_enumeration(std::mt19937_64& rng, const char* name) {
  std::uniform_int_distribution<std::uint64_t> tiny(0, 6), stage(1, 20);
  CeerEnumeration out{name, {}};
  for (int i = 0; i < static_cast<int>(rng() % 5); ++i) {
    out.collapses.push_back({tiny(rng), tiny(rng), stage(rng)});
  }
  return out;
}

}  // namespace

TEST_CASE("random scenarios keep every invariant and replay exactly") {
  std::mt19937_64 rng(20260808);
  for (int round = 0; round < 80; ++round) {
    OracleFamily fam = random_family(rng);

    T21Options opts;
    opts.k_bound = rng() % 3;
    opts.free_parity = rng() % 2 ? Parity::Odd : Parity::Even;
    T21State st21 = t21_init(fam, t21_default_priority(fam, opts.k_bound), opts);
    t21_run(st21, 60);
    Report rep21 = verify_t21(st21);
    if (!rep21.all_passed()) {
      CAPTURE(round);
      CAPTURE(rep21.to_text());
      REQUIRE(rep21.all_passed());
    }
    TraceDocument doc21 = st21.trace();
    REQUIRE(t21_replay_summary(doc21) == doc21.summary);

    CeerEnumeration a = random_enumeration(rng, "A");
    CeerEnumeration t = random_enumeration(rng, "T");
    OracleFamily fam39 = fam;
    if (fam39.wes.empty()) fam39.wes.resize(1);
    T39Options opts39;
    opts39.k_bound = rng() % 2;
    T39State st39 =
        t39_init(a, t, fam39, 2, t39_default_priority(fam39, 2, opts39.k_bound), opts39);
    t39_run(st39, 60);
    Report rep39 = verify_t39(st39);
    if (!rep39.all_passed()) {
      CAPTURE(round);
      CAPTURE(rep39.to_text());
      REQUIRE(rep39.all_passed());
    }
    TraceDocument doc39 = st39.trace();
    REQUIRE(t39_replay_summary(doc39) == doc39.summary);
  }
}
