// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "ceerbench/kernel.hpp"

#include <algorithm>
#include <stdexcept>

namespace ceerbench {

std::uint64_t StageCeer::find(std::uint64_t x) const {
  auto it = parent_.find(x);
  if (it == parent_.end()) return x;
  std::uint64_t root = x;
  while (true) {
    auto jt = parent_.find(root);
    if (jt == parent_.end() || jt->second == root) break;
    root = jt->second;
  }
  // Path compression.
  std::uint64_t cur = x;
  while (cur != root) {
    auto jt = parent_.find(cur);
    std::uint64_t next = jt->second;
    jt->second = root;
    cur = next;
  }
  return root;
}

void StageCeer::unite(std::uint64_t a, std::uint64_t b) {
  std::uint64_t ra = find(a);
  std::uint64_t rb = find(b);
  if (ra == rb) return;
  std::uint64_t sa = size_.at(ra);
  std::uint64_t sb = size_.at(rb);
  // Deterministic tie-break: the smaller root wins.
  if (sa < sb || (sa == sb && rb < ra)) {
    std::swap(ra, rb);
    std::swap(sa, sb);
  }
  parent_[rb] = ra;
  size_[ra] = sa + sb;
}

void StageCeer::touch(std::uint64_t n) {
  if (!parent_.contains(n)) {
    parent_[n] = n;
    size_[n] = 1;
  }
  allocated_max_ = std::max(allocated_max_, n);
}

CollapseReport StageCeer::collapse(
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs, std::string cause) {
  return collapse_at(pairs, std::move(cause), clock_.next_tick());
}

CollapseReport StageCeer::collapse_at(
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs, std::string cause,
    TimePoint at) {
  if (!events_.empty() && !(events_.back().time < at)) {
    throw std::logic_error("collapse_at: time must be strictly increasing");
  }
  CollapseReport report{at, {}};
  for (const auto& [a, b] : pairs) {
    touch(a);
    touch(b);
    if (find(a) != find(b)) {
      unite(a, b);
      report.merged.emplace_back(a, b);
    }
  }
  events_.push_back(CollapseEvent{at, pairs, std::move(cause)});
  clock_ = at;
  return report;
}

bool StageCeer::related(std::uint64_t x, std::uint64_t y) const {
  if (x == y) return true;
  return find(x) == find(y);
}

bool StageCeer::related_at(std::uint64_t x, std::uint64_t y, TimePoint at) const {
  if (x == y) return true;
  // Replay the log prefix into a scratch union-find.
  std::map<std::uint64_t, std::uint64_t> parent;
  auto root = [&parent](std::uint64_t n) {
    while (true) {
      auto it = parent.find(n);
      if (it == parent.end() || it->second == n) return n;
      n = it->second;
    }
  };
  for (const auto& ev : events_) {
    if (at < ev.time) break;
    for (const auto& [a, b] : ev.pairs) {
      std::uint64_t ra = root(a);
      std::uint64_t rb = root(b);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
  }
  return root(x) == root(y);
}

std::vector<std::uint64_t> StageCeer::class_members(std::uint64_t x) const {
  std::vector<std::uint64_t> out;
  std::uint64_t rx = find(x);
  bool saw_x = false;
  for (const auto& [n, _] : parent_) {
    if (find(n) == rx) {
      out.push_back(n);
      saw_x |= (n == x);
    }
  }
  if (!saw_x) out.push_back(x);
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t StageCeer::fresh(Parity parity, std::uint64_t stage) {
  std::uint64_t candidate = std::max(stage + 1, allocated_max_) + 1;
  switch (parity) {
    case Parity::Even:
      if (candidate % 2 != 0) ++candidate;
      break;
    case Parity::Odd:
      if (candidate % 2 == 0) ++candidate;
      break;
    case Parity::Any:
      break;
  }
  touch(candidate);
  return candidate;
}

std::vector<std::uint64_t> StageCeer::allocated() const {
  std::vector<std::uint64_t> out;
  out.reserve(parent_.size());
  for (const auto& [n, _] : parent_) out.push_back(n);
  return out;
}

std::vector<std::vector<std::uint64_t>> StageCeer::census() const {
  std::map<std::uint64_t, std::vector<std::uint64_t>> classes;
  for (const auto& [n, _] : parent_) classes[find(n)].push_back(n);
  std::vector<std::vector<std::uint64_t>> out;
  for (auto& [root, members] : classes) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

}  // namespace ceerbench
