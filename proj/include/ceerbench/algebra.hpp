// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ceerbench/kernel.hpp"

namespace ceerbench {

/// A lens over ceers: either a StageCeer directly, one half of a uniform
/// join, a join of two views, a fixed finite-class ceer, or Id. Views are
/// cheap immutable values; Direct nodes borrow the StageCeer, which must
/// outlive the view.
class CeerView {
 public:
  enum class Lens { Direct, Evens, Odds, Join, FiniteK, Identity };

  static CeerView direct(const StageCeer& base);
  static CeerView evens(CeerView of);
  static CeerView odds(CeerView of);
  static CeerView join(CeerView left, CeerView right);
  static CeerView finite_k(std::uint64_t k);
  static CeerView identity();

  bool related(std::uint64_t x, std::uint64_t y) const;
  bool related_at(std::uint64_t x, std::uint64_t y, TimePoint at) const;

  Lens lens() const;

 private:
  struct Node {
    Lens lens;
    const StageCeer* base = nullptr;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
    std::uint64_t k = 0;
  };

  explicit CeerView(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static bool related_impl(const Node& node, std::uint64_t x, std::uint64_t y,
                           const std::optional<TimePoint>& at);

  std::shared_ptr<const Node> node_;
};

// R (+) S: R on even codes, S on odd codes, mixed parities never related.
CeerView uniform_join(CeerView r, CeerView s);

// Even half: x ~ y iff Z relates 2x,2y. Odd half: iff Z relates 2x+1,2y+1.
CeerView restrict_half(CeerView z, Parity parity);

// Residues mod k; k >= 1.
CeerView id_k(std::uint64_t k);

/// Three-valued result of a finite-fragment check. Undetermined is not a
/// failure: it means the table under test was partial on the sampled domain.
struct Verdict {
  enum class Status { Holds, FailsAt, Undetermined };

  Status status = Status::Holds;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> witness_pair;
  std::optional<std::uint64_t> witness_element;
  std::vector<std::uint64_t> undefined;  // elements where the table was partial
  std::string reason;
  std::vector<std::uint64_t> checked_domain;
  std::vector<std::string> warnings;

  bool holds() const { return status == Status::Holds; }
  std::string to_string() const;
};

/// Partial map omega -> omega with per-entry definition times. Entries are
/// write-once; insertion order must carry nondecreasing times.
class ReductionTable {
 public:
  struct Entry {
    std::uint64_t value = 0;
    TimePoint defined_at{};

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  void define(std::uint64_t arg, std::uint64_t value, TimePoint at = {});
  bool defined(std::uint64_t arg) const { return entries_.contains(arg); }
  std::optional<std::uint64_t> value(std::uint64_t arg) const;

  /// Unique preimage of a value, when values are pairwise distinct (the
  /// constructions always choose fresh values). Returns the least preimage
  /// otherwise.
  std::optional<std::uint64_t> preimage(std::uint64_t value) const;

  /// f^(steps)(start), when the whole orbit is defined.
  std::optional<std::uint64_t> orbit(std::uint64_t start, std::uint64_t steps) const;

  std::vector<std::uint64_t> domain() const;
  std::vector<std::uint64_t> values() const;
  const std::map<std::uint64_t, Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  friend bool operator==(const ReductionTable&, const ReductionTable&) = default;

 private:
  std::map<std::uint64_t, Entry> entries_;
  TimePoint last_defined_at_{};
  bool any_ = false;
};

/// Does f carry R to S on the sampled domain? Holds / first violating pair /
/// Undetermined listing the elements where f is undefined.
Verdict check_reduction(const ReductionTable& f, const CeerView& r, const CeerView& s,
                        const std::vector<std::uint64_t>& domain);

/// Are the members of w pairwise non-R-related?
Verdict check_transversal(const std::vector<std::uint64_t>& w, const CeerView& r);

struct ClassHitReport {
  std::uint64_t bound = 0;
  // Least-member representatives of classes over 0..bound.
  std::vector<std::uint64_t> hit;
  std::vector<std::uint64_t> missed;
};

/// For every class with a representative <= bound, does some defined f-value
/// land in it? A finite-stage witness, never a proof.
ClassHitReport class_hit_report(const ReductionTable& f, const CeerView& r, std::uint64_t bound);

}  // namespace ceerbench
