// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "ceerbench/hsf.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace ceerbench {

TauWord tau_prefix(const ReductionTable& f, std::uint64_t n, std::uint64_t h) {
  TauWord word;
  word.source = n;
  word.horizon = h;
  std::uint64_t cur = 2 * n;
  for (std::uint64_t k = 0; k < h; ++k) {
    word.letters.push_back(cur % 2 == 0 ? 'X' : 'Y');
    if (k + 1 == h) break;
    auto next = f.value(cur);
    if (!next) break;  // truncated orbit
    cur = *next;
  }
  return word;
}

std::vector<std::vector<std::uint64_t>> approx_simf_classes(const ReductionTable& f,
                                                            const std::vector<std::uint64_t>& sample,
                                                            std::uint64_t h) {
  std::vector<std::uint64_t> sorted(sample);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::map<std::string, std::vector<std::uint64_t>> blocks;
  for (std::uint64_t n : sorted) {
    blocks[tau_prefix(f, n, h).letters].push_back(n);
  }
  std::vector<std::vector<std::uint64_t>> out;
  for (auto& [_, members] : blocks) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

std::optional<PeriodDecomposition> detect_period(const std::string& letters) {
  const std::size_t len = letters.size();
  if (len == 0) return std::nullopt;

  auto valid = [&](std::size_t p, std::size_t q) {
    for (std::size_t i = p; i < len; ++i) {
      if (letters[i] != letters[p + (i - p) % q]) return false;
    }
    return true;
  };

  // Minimize |rho| + |sigma|; break ties toward the shorter period.
  std::optional<PeriodDecomposition> best;
  for (std::size_t p = 0; p < len; ++p) {
    for (std::size_t q = 1; p + q <= len; ++q) {
      if (!valid(p, q)) continue;
      if (!best || p + q < best->preperiod_len + best->period_len ||
          (p + q == best->preperiod_len + best->period_len && q < best->period_len)) {
        best = PeriodDecomposition{p, q, len};
      }
      break;  // larger q for this p cannot improve p+q
    }
  }
  return best;
}

std::optional<PeriodDecomposition> detect_period(const TauWord& w) {
  return detect_period(w.letters);
}

ReductionTable iterate(const ReductionTable& f, std::uint64_t n) {
  std::set<std::uint64_t> candidates;
  for (std::uint64_t x : f.domain()) candidates.insert(x);
  for (std::uint64_t v : f.values()) candidates.insert(v);
  ReductionTable out;
  std::uint64_t tick = 0;
  for (std::uint64_t x : candidates) {
    auto end = f.orbit(x, n);
    if (end) out.define(x, *end, TimePoint{0, tick++});
  }
  return out;
}

ClassSplit classify_cx_cy(const ReductionTable& f2, const std::vector<std::uint64_t>& sample,
                          std::uint64_t h) {
  ClassSplit split;
  std::vector<std::uint64_t> sorted(sample);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (std::uint64_t code : sorted) {
    if (code % 2 != 0) {
      split.undecided.push_back(code);
      continue;
    }
    TauWord word = tau_prefix(f2, code / 2, h);
    if (word.truncated()) {
      split.undecided.push_back(code);
      continue;
    }
    bool all_x = word.letters.find('Y') == std::string::npos;
    bool x_then_y = word.letters.size() >= 2 && word.letters[0] == 'X' &&
                    word.letters.find('X', 1) == std::string::npos;
    if (all_x) {
      split.cx.push_back(code);
    } else if (x_then_y) {
      split.cy.push_back(code);
    } else {
      split.undecided.push_back(code);
    }
  }
  return split;
}

InducedReduction g_from_cx(const ReductionTable& f2, const ClassSplit& split) {
  InducedReduction out;
  std::map<std::uint64_t, std::uint64_t> entries;
  for (std::uint64_t code : split.cx) {
    auto image = f2.value(code);
    if (!image || *image % 2 != 0) {
      out.omitted.push_back(code);
      out.notes.push_back("cx element " + std::to_string(code) + " has no even image");
      continue;
    }
    entries[code / 2] = *image / 2;
  }
  for (std::uint64_t code : split.cy) entries[code / 2] = code / 2;
  for (std::uint64_t code : split.undecided) out.omitted.push_back(code);
  std::uint64_t tick = 0;
  for (const auto& [n, v] : entries) out.g.define(n, v, TimePoint{0, tick++});
  std::sort(out.omitted.begin(), out.omitted.end());
  return out;
}

OntoYResult g_onto_y(const ReductionTable& f2) {
  OntoYResult out;
  std::map<std::uint64_t, std::uint64_t> entries;
  for (std::uint64_t arg : f2.domain()) {
    if (arg % 2 == 0) continue;
    std::uint64_t n = (arg - 1) / 2;
    std::uint64_t first = *f2.value(arg);
    if (first % 2 == 1) {
      entries[n] = (first - 1) / 2;
      continue;
    }
    auto second = f2.value(first);
    if (!second) {
      out.omitted.push_back(n);
      continue;
    }
    if (*second % 2 == 0) {
      out.parity_violations.push_back(n);
      continue;
    }
    entries[n] = (*second - 1) / 2;
  }
  std::uint64_t tick = 0;
  for (const auto& [n, v] : entries) out.g.define(n, v, TimePoint{0, tick++});
  return out;
}

IterationExponents compute_iteration_exponents(const ReductionTable& f,
                                               const std::vector<std::uint64_t>& sample,
                                               std::uint64_t h) {
  IterationExponents exps;
  std::uint64_t max_preperiod = 0;
  for (std::uint64_t n : sample) {
    TauWord word = tau_prefix(f, n, h);
    if (word.truncated()) {
      exps.undetermined.push_back(n);
      continue;
    }
    auto period = detect_period(word);
    if (!period) continue;
    exps.n1 = std::lcm(exps.n1, period->period_len);
    max_preperiod = std::max(max_preperiod, period->preperiod_len);
  }
  exps.n2 = max_preperiod + 1;
  return exps;
}

CoceerEmbedding id_to_coceer(const CeSetTable& w, std::uint64_t n, std::uint64_t stage_budget) {
  CoceerEmbedding out;
  for (std::uint64_t m = 0; m <= n; ++m) {
    if (m == 0) {
      // The condition is vacuous: the least <x,s> is code 0, i.e. (0,0).
      out.values.push_back(0);
      continue;
    }
    // Candidate x must have every <f(i),x> enumerated; s_min(x) is the stage
    // by which they all appear. The least valid Cantor code is then
    // min over x of <x, s_min(x)>.
    std::optional<std::uint64_t> best_code;
    std::optional<std::uint64_t> best_x;
    std::set<std::uint64_t> candidates;
    for (const auto& e : w.elems) {
      auto [a, b] = unpair_code(e.element);
      if (a == out.values[0]) candidates.insert(b);
    }
    for (std::uint64_t x : candidates) {
      std::uint64_t s_min = 0;
      bool ok = true;
      for (std::uint64_t i = 0; i < m; ++i) {
        auto stamp = w.enumerated_at(pair_code(out.values[i], x));
        if (!stamp || *stamp > stage_budget) {
          ok = false;
          break;
        }
        s_min = std::max(s_min, *stamp);
      }
      if (!ok) continue;
      std::uint64_t code = pair_code(x, s_min);
      if (!best_code || code < *best_code) {
        best_code = code;
        best_x = x;
      }
    }
    if (!best_x) {
      out.stalled_at = m;
      return out;
    }
    out.values.push_back(*best_x);
  }
  return out;
}

}  // namespace ceerbench
