// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "ceerbench/oracles.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ceerbench {

std::optional<std::uint64_t> CeSetTable::enumerated_at(std::uint64_t element) const {
  std::optional<std::uint64_t> best;
  for (const auto& e : elems) {
    if (e.element == element && (!best || e.enumerated_at < *best)) best = e.enumerated_at;
  }
  return best;
}

std::optional<std::uint64_t> phi_at(const OracleFamily& fam, std::size_t j, std::uint64_t x,
                                    std::uint64_t s) {
  if (j >= fam.phis.size()) throw std::out_of_range("phi_at: index out of range");
  const PartialFnTable& table = fam.phis[j];
  const PartialFnTable::Triple* best = nullptr;
  for (const auto& t : table.triples) {
    if (t.input != x || t.converges_at > s) continue;
    if (best == nullptr || t.converges_at < best->converges_at) best = &t;
  }
  if (best == nullptr) return std::nullopt;
  return best->output;
}

std::vector<std::uint64_t> we_at(const OracleFamily& fam, std::size_t i, std::uint64_t s) {
  if (i >= fam.wes.size()) throw std::out_of_range("we_at: index out of range");
  std::vector<std::uint64_t> out;
  for (const auto& e : fam.wes[i].elems) {
    if (e.enumerated_at <= s) out.push_back(e.element);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool we_contains(const OracleFamily& fam, std::size_t i, std::uint64_t element, std::uint64_t s) {
  if (i >= fam.wes.size()) throw std::out_of_range("we_contains: index out of range");
  for (const auto& e : fam.wes[i].elems) {
    if (e.element == element && e.enumerated_at <= s) return true;
  }
  return false;
}

bool v_related(const OracleFamily& fam, std::size_t j, std::uint64_t x, std::uint64_t y,
               std::uint64_t s) {
  if (x == y) return true;
  // Symmetrized on read; fixtures need not list both orientations.
  return !we_contains(fam, j, pair_code(x, y), s) && !we_contains(fam, j, pair_code(y, x), s);
}

std::uint64_t pair_code(std::uint64_t x, std::uint64_t y) {
  std::uint64_t w = x + y;
  return w * (w + 1) / 2 + y;
}

std::pair<std::uint64_t, std::uint64_t> unpair_code(std::uint64_t n) {
  std::uint64_t w = 0;
  while ((w + 1) * (w + 2) / 2 <= n) ++w;
  std::uint64_t t = w * (w + 1) / 2;
  std::uint64_t y = n - t;
  return {w - y, y};
}

Verdict validate_family(const OracleFamily& fam) {
  Verdict verdict;
  for (std::size_t j = 0; j < fam.phis.size(); ++j) {
    std::set<std::uint64_t> inputs;
    for (const auto& t : fam.phis[j].triples) {
      if (t.converges_at == 0) {
        verdict.status = Verdict::Status::FailsAt;
        verdict.witness_element = t.input;
        std::ostringstream os;
        os << "phi[" << j << "]: convergence stage must be >= 1";
        verdict.reason = os.str();
        return verdict;
      }
      if (!inputs.insert(t.input).second) {
        verdict.status = Verdict::Status::FailsAt;
        verdict.witness_element = t.input;
        std::ostringstream os;
        os << "phi[" << j << "]: duplicate input " << t.input;
        verdict.reason = os.str();
        return verdict;
      }
    }
  }
  for (std::size_t i = 0; i < fam.wes.size(); ++i) {
    std::set<std::uint64_t> elems;
    for (const auto& e : fam.wes[i].elems) {
      if (!elems.insert(e.element).second) {
        verdict.status = Verdict::Status::FailsAt;
        verdict.witness_element = e.element;
        std::ostringstream os;
        os << "W[" << i << "]: duplicate element " << e.element;
        verdict.reason = os.str();
        return verdict;
      }
    }
  }
  // V_j must look like an equivalence relation; tables cannot certify
  // transitivity of the complement, so only warn when the finite fragment
  // already breaks it.
  for (std::size_t j = 0; j < fam.wes.size(); ++j) {
    std::uint64_t top = 0;
    std::uint64_t horizon = 0;
    bool any = false;
    for (const auto& e : fam.wes[j].elems) {
      auto [a, b] = unpair_code(e.element);
      top = std::max({top, a, b});
      horizon = std::max(horizon, e.enumerated_at);
      any = true;
    }
    if (!any || top > 40) continue;  // keep validation cheap on big fixtures
    std::vector<std::uint64_t> universe;
    for (std::uint64_t n = 0; n <= top; ++n) universe.push_back(n);
    for (std::uint64_t x : universe) {
      for (std::uint64_t y : universe) {
        for (std::uint64_t z : universe) {
          if (v_related(fam, j, x, y, horizon) && v_related(fam, j, y, z, horizon) &&
              !v_related(fam, j, x, z, horizon)) {
            std::ostringstream os;
            os << "V[" << j << "] fragment is not transitive at (" << x << "," << y << "," << z
               << ")";
            verdict.warnings.push_back(os.str());
          }
        }
      }
    }
  }
  return verdict;
}

ReductionTable to_reduction_table(const PartialFnTable& table) {
  std::vector<PartialFnTable::Triple> sorted = table.triples;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return std::tie(a.converges_at, a.input) < std::tie(b.converges_at, b.input);
  });
  ReductionTable out;
  std::uint64_t tick = 0;
  for (const auto& t : sorted) {
    out.define(t.input, t.output, TimePoint{t.converges_at, tick++});
  }
  return out;
}

}  // namespace ceerbench
