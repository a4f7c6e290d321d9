// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "ceerbench/algebra.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ceerbench {

CeerView CeerView::direct(const StageCeer& base) {
  auto node = std::make_shared<Node>();
  node->lens = Lens::Direct;
  node->base = &base;
  return CeerView(std::move(node));
}

CeerView CeerView::evens(CeerView of) {
  auto node = std::make_shared<Node>();
  node->lens = Lens::Evens;
  node->left = std::move(of.node_);
  return CeerView(std::move(node));
}

CeerView CeerView::odds(CeerView of) {
  auto node = std::make_shared<Node>();
  node->lens = Lens::Odds;
  node->left = std::move(of.node_);
  return CeerView(std::move(node));
}

CeerView CeerView::join(CeerView left, CeerView right) {
  auto node = std::make_shared<Node>();
  node->lens = Lens::Join;
  node->left = std::move(left.node_);
  node->right = std::move(right.node_);
  return CeerView(std::move(node));
}

CeerView CeerView::finite_k(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("finite_k: k must be >= 1");
  auto node = std::make_shared<Node>();
  node->lens = Lens::FiniteK;
  node->k = k;
  return CeerView(std::move(node));
}

CeerView CeerView::identity() {
  auto node = std::make_shared<Node>();
  node->lens = Lens::Identity;
  return CeerView(std::move(node));
}

CeerView::Lens CeerView::lens() const { return node_->lens; }

bool CeerView::related_impl(const Node& node, std::uint64_t x, std::uint64_t y,
                            const std::optional<TimePoint>& at) {
  switch (node.lens) {
    case Lens::Direct:
      return at ? node.base->related_at(x, y, *at) : node.base->related(x, y);
    case Lens::Evens:
      return related_impl(*node.left, 2 * x, 2 * y, at);
    case Lens::Odds:
      return related_impl(*node.left, 2 * x + 1, 2 * y + 1, at);
    case Lens::Join:
      if (x % 2 != y % 2) return false;
      if (x % 2 == 0) return related_impl(*node.left, x / 2, y / 2, at);
      return related_impl(*node.right, (x - 1) / 2, (y - 1) / 2, at);
    case Lens::FiniteK:
      return x % node.k == y % node.k;
    case Lens::Identity:
      return x == y;
  }
  return x == y;
}

bool CeerView::related(std::uint64_t x, std::uint64_t y) const {
  return related_impl(*node_, x, y, std::nullopt);
}

bool CeerView::related_at(std::uint64_t x, std::uint64_t y, TimePoint at) const {
  return related_impl(*node_, x, y, at);
}

CeerView uniform_join(CeerView r, CeerView s) { return CeerView::join(std::move(r), std::move(s)); }

CeerView restrict_half(CeerView z, Parity parity) {
  switch (parity) {
    case Parity::Even:
      return CeerView::evens(std::move(z));
    case Parity::Odd:
      return CeerView::odds(std::move(z));
    case Parity::Any:
      break;
  }
  throw std::invalid_argument("restrict_half: parity must be Even or Odd");
}

CeerView id_k(std::uint64_t k) { return CeerView::finite_k(k); }

std::string Verdict::to_string() const {
  std::ostringstream os;
  switch (status) {
    case Status::Holds:
      os << "holds";
      break;
    case Status::FailsAt:
      os << "fails at ";
      if (witness_pair) os << "(" << witness_pair->first << "," << witness_pair->second << ")";
      if (witness_element) os << "element " << *witness_element;
      break;
    case Status::Undetermined:
      os << "undetermined";
      break;
  }
  if (!reason.empty()) os << ": " << reason;
  return os.str();
}

void ReductionTable::define(std::uint64_t arg, std::uint64_t value, TimePoint at) {
  auto it = entries_.find(arg);
  if (it != entries_.end()) {
    if (it->second.value != value) {
      throw std::logic_error("ReductionTable: entry redefined with a different value");
    }
    return;
  }
  if (any_ && at < last_defined_at_) {
    throw std::logic_error("ReductionTable: defined_at must be nondecreasing");
  }
  entries_.emplace(arg, Entry{value, at});
  last_defined_at_ = at;
  any_ = true;
}

std::optional<std::uint64_t> ReductionTable::value(std::uint64_t arg) const {
  auto it = entries_.find(arg);
  if (it == entries_.end()) return std::nullopt;
  return it->second.value;
}

std::optional<std::uint64_t> ReductionTable::preimage(std::uint64_t value) const {
  for (const auto& [arg, entry] : entries_) {
    if (entry.value == value) return arg;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> ReductionTable::orbit(std::uint64_t start, std::uint64_t steps) const {
  std::uint64_t cur = start;
  for (std::uint64_t i = 0; i < steps; ++i) {
    auto next = value(cur);
    if (!next) return std::nullopt;
    cur = *next;
  }
  return cur;
}

std::vector<std::uint64_t> ReductionTable::domain() const {
  std::vector<std::uint64_t> out;
  out.reserve(entries_.size());
  for (const auto& [arg, _] : entries_) out.push_back(arg);
  return out;
}

std::vector<std::uint64_t> ReductionTable::values() const {
  std::vector<std::uint64_t> out;
  out.reserve(entries_.size());
  for (const auto& [_, entry] : entries_) out.push_back(entry.value);
  return out;
}

Verdict check_reduction(const ReductionTable& f, const CeerView& r, const CeerView& s,
                        const std::vector<std::uint64_t>& domain) {
  Verdict verdict;
  std::vector<std::uint64_t> sorted(domain);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  verdict.checked_domain = sorted;

  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      std::uint64_t x = sorted[i];
      std::uint64_t y = sorted[j];
      auto fx = f.value(x);
      auto fy = f.value(y);
      if (!fx || !fy) continue;
      if (r.related(x, y) != s.related(*fx, *fy)) {
        verdict.status = Verdict::Status::FailsAt;
        verdict.witness_pair = {x, y};
        verdict.reason = "biconditional fails";
        return verdict;
      }
    }
  }
  for (std::uint64_t x : sorted) {
    if (!f.defined(x)) verdict.undefined.push_back(x);
  }
  if (!verdict.undefined.empty()) {
    verdict.status = Verdict::Status::Undetermined;
    verdict.reason = "table undefined on part of the domain";
  }
  return verdict;
}

Verdict check_transversal(const std::vector<std::uint64_t>& w, const CeerView& r) {
  Verdict verdict;
  std::vector<std::uint64_t> sorted(w);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  verdict.checked_domain = sorted;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (r.related(sorted[i], sorted[j])) {
        verdict.status = Verdict::Status::FailsAt;
        verdict.witness_pair = {sorted[i], sorted[j]};
        verdict.reason = "distinct members related";
        return verdict;
      }
    }
  }
  return verdict;
}

ClassHitReport class_hit_report(const ReductionTable& f, const CeerView& r, std::uint64_t bound) {
  ClassHitReport report;
  report.bound = bound;
  std::vector<std::uint64_t> values = f.values();

  std::set<std::uint64_t> seen;
  for (std::uint64_t n = 0; n <= bound; ++n) {
    bool is_rep = true;
    for (std::uint64_t m = 0; m < n; ++m) {
      if (r.related(m, n)) {
        is_rep = false;
        break;
      }
    }
    if (!is_rep) continue;
    bool hit = false;
    for (std::uint64_t v : values) {
      if (r.related(v, n)) {
        hit = true;
        break;
      }
    }
    (hit ? report.hit : report.missed).push_back(n);
  }
  return report;
}

}  // namespace ceerbench
