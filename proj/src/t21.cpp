// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "ceerbench/t21.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ceerbench/fixtures.hpp"

namespace ceerbench {

namespace {

BoundTag own_tag(Side s) { return s == Side::X ? BoundTag::XBound : BoundTag::YBound; }
BoundTag other_tag(Side s) { return s == Side::X ? BoundTag::YBound : BoundTag::XBound; }

Parity side_parity(Side s) { return s == Side::X ? Parity::Even : Parity::Odd; }

bool code_on_side(Side s, std::uint64_t code) {
  return (code % 2 == 0) == (s == Side::X);
}

std::uint64_t side_index(Side s, std::uint64_t code) {
  return s == Side::X ? code / 2 : (code - 1) / 2;
}

}  // namespace

std::uint64_t t21_code(Side side, std::uint64_t u) {
  return side == Side::X ? 2 * u : 2 * u + 1;
}

std::string to_string(Side side) { return side == Side::X ? "X" : "Y"; }

std::string to_string(T21Phase phase) {
  switch (phase) {
    case T21Phase::Initialized: return "Initialized";
    case T21Phase::Case1Wait: return "Case1Wait";
    case T21Phase::Case2Step0Wait: return "Case2Step0Wait";
    case T21Phase::DiagStep1Wait: return "DiagStep1Wait";
    case T21Phase::DiagStep3Wait: return "DiagStep3Wait";
    case T21Phase::Satisfied: return "Satisfied";
  }
  return "?";
}

std::string to_string(BoundTag tag) {
  switch (tag) {
    case BoundTag::Free: return "free";
    case BoundTag::XBound: return "X";
    case BoundTag::YBound: return "Y";
  }
  return "?";
}

std::string T21Requirement::name() const {
  std::ostringstream os;
  os << "SF" << to_string(side) << ":" << j << ":" << k;
  return os.str();
}

T21PriorityList t21_default_priority(const OracleFamily& fam, std::uint64_t k_bound) {
  struct Keyed {
    std::uint64_t key;
    std::tuple<Side, std::uint64_t, std::uint64_t> req;
  };
  std::vector<Keyed> keyed;
  for (std::uint64_t j = 0; j < fam.phis.size(); ++j) {
    for (std::uint64_t k = 0; k <= k_bound; ++k) {
      keyed.push_back({2 * pair_code(j, k) + 0, {Side::X, j, k}});
      keyed.push_back({2 * pair_code(j, k) + 1, {Side::Y, j, k}});
    }
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) { return a.key < b.key; });
  T21PriorityList out;
  out.reserve(keyed.size());
  for (const auto& kd : keyed) out.push_back(kd.req);
  return out;
}

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

struct T21State::Impl {
  T21State& st;

  explicit Impl(T21State& s) : st(s) {}

  TimePoint next_time() {
    st.cursor_.tick += 1;
    return st.cursor_;
  }

  void emit(const std::string& kind, const std::string& by, json_t data, TimePoint at) {
    st.events_.push_back(TraceEvent{at, kind, by, std::move(data)});
  }

  void emit(const std::string& kind, const std::string& by, json_t data) {
    emit(kind, by, std::move(data), next_time());
  }

  // Mark a number as used; traced only when it raises the high-water mark.
  void mention(std::uint64_t code, const std::string& by) {
    bool raises = code > st.z_.allocated_max();
    st.z_.touch(code);
    if (raises) {
      emit("param-assign", by, json_t{{"param", "mention"}, {"numbers", json_t::array({code})}});
    }
  }

  std::uint64_t fresh_code(Parity parity) { return st.z_.fresh(parity, st.stage_); }

  void do_collapse(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs,
                   const std::string& by) {
    TimePoint at = next_time();
    CollapseReport report = st.z_.collapse_at(pairs, by, at);
    json_t jpairs = json_t::array();
    for (const auto& [a, b] : pairs) jpairs.push_back(json_t::array({a, b}));
    json_t jmerged = json_t::array();
    for (const auto& [a, b] : report.merged) jmerged.push_back(json_t::array({a, b}));
    emit("collapse", by, json_t{{"pairs", jpairs}, {"merged", jmerged}}, at);
  }

  bool side_related(Side side, std::uint64_t u, std::uint64_t v) const {
    return st.z_.related(t21_code(side, u), t21_code(side, v));
  }

  // Effective assertion with its owner, if any.
  std::optional<std::pair<std::size_t, BoundTag>> effective_assertion(std::uint64_t n) const {
    auto it = st.assertions_.find(n);
    if (it == st.assertions_.end() || it->second.empty()) return std::nullopt;
    const auto& by_owner = it->second;
    return std::make_pair(by_owner.begin()->first, by_owner.begin()->second);
  }

  void assert_bound_single(std::size_t rank, std::uint64_t n, BoundTag tag,
                           const std::string& by) {
    const std::string owner = st.reqs_[rank].name();
    auto& slot = st.assertions_[n][rank];
    if (slot != tag) {
      slot = tag;
      emit("param-assign", by,
           json_t{{"param", "bound"}, {"req", owner}, {"number", n}, {"tag", to_string(tag)}});
    }
  }

  // Assert `tag` along the whole f-orbit of n, owned by `rank`.
  void assert_bound_orbit(std::size_t rank, std::uint64_t n, BoundTag tag) {
    const std::string by = st.reqs_[rank].name();
    std::uint64_t cur = n;
    while (true) {
      assert_bound_single(rank, cur, tag, by);
      auto next = st.f_.value(cur);
      if (!next) break;
      cur = *next;
    }
  }

  void define_f(std::uint64_t arg, std::uint64_t value, const std::string& by) {
    TimePoint at = next_time();
    st.f_.define(arg, value, at);
    emit("f-extend", by, json_t{{"arg", arg}, {"value", value}}, at);
  }

  // Copy the parity pattern of src's orbit onto a fresh orbit rooted at dst.
  void mirror_orbit(std::uint64_t src, std::uint64_t dst, const std::string& by) {
    std::uint64_t cur_src = src;
    std::uint64_t cur_dst = dst;
    while (true) {
      auto next_src = st.f_.value(cur_src);
      if (!next_src) break;
      std::uint64_t next_dst = fresh_code(*next_src % 2 == 0 ? Parity::Even : Parity::Odd);
      define_f(cur_dst, next_dst, by);
      cur_src = *next_src;
      cur_dst = next_dst;
    }
  }

  void set_phase(std::size_t rank, T21Phase to, const std::string& note = "") {
    T21Requirement& r = st.reqs_[rank];
    json_t data{{"req", r.name()}, {"from", to_string(r.phase)}, {"to", to_string(to)}};
    if (!note.empty()) data["note"] = note;
    r.phase = to;
    if (!note.empty()) r.note = note;
    emit("phase-change", r.name(), std::move(data));
  }

  void assign_param(std::size_t rank, const std::string& param, json_t value) {
    emit("param-assign", st.reqs_[rank].name(),
         json_t{{"param", param}, {"req", st.reqs_[rank].name()}, {"value", std::move(value)}});
  }

  // Re-initialization unassigns parameters and reverts the phase. Bound tags
  // are deliberately permanent: once two numbers are related their orbits
  // must keep extending with matching parities, or the end-of-stage closure
  // would relate an even with an odd number.
  void initialize_lower(std::size_t actor_rank) {
    for (std::size_t rank = actor_rank + 1; rank < st.reqs_.size(); ++rank) {
      T21Requirement& r = st.reqs_[rank];
      bool has_state = r.phase != T21Phase::Initialized || r.k_prime || r.diag_x || r.diag_z ||
                       r.diag_w || !r.diag_iterates.empty();
      if (!has_state) continue;
      r.phase = T21Phase::Initialized;
      r.k_prime.reset();
      r.diag_x.reset();
      r.diag_iterates.clear();
      r.diag_z.reset();
      r.diag_w.reset();
      r.note.clear();
      emit("param-cancel", st.reqs_[actor_rank].name(), json_t{{"req", r.name()}});
    }
  }

  // Iterate indices n with f^(n) of the code defined and on the side's own
  // parity (n = 0 always qualifies).
  std::vector<std::uint64_t> own_side_iterates(Side side, std::uint64_t code) const {
    std::vector<std::uint64_t> out;
    std::uint64_t cur = code;
    std::uint64_t n = 0;
    while (true) {
      if (code_on_side(side, cur)) out.push_back(n);
      auto next = st.f_.value(cur);
      if (!next) break;
      cur = *next;
      ++n;
    }
    return out;
  }

  // Side index of f^(n) of x's code (n taken from the stored iterate set).
  std::uint64_t hat_iterate(Side side, std::uint64_t x, std::uint64_t n) const {
    auto code = st.f_.orbit(t21_code(side, x), n);
    if (!code || !code_on_side(side, *code)) {
      throw std::logic_error("hat_iterate: orbit left the expected half");
    }
    return side_index(side, *code);
  }

  bool requires_attention(const T21Requirement& r, std::uint64_t stage) const {
    switch (r.phase) {
      case T21Phase::Initialized:
        return true;
      case T21Phase::Case1Wait: {
        auto v = phi_at(st.fam_, r.j, r.k, stage);
        return v && !side_related(r.side, *v, r.k);
      }
      case T21Phase::Case2Step0Wait:
        return phi_at(st.fam_, r.j, *r.k_prime, stage).has_value();
      case T21Phase::DiagStep1Wait: {
        for (std::uint64_t n : r.diag_iterates) {
          std::uint64_t cand = hat_iterate(r.side, *r.diag_x, n);
          if (!phi_at(st.fam_, r.j, cand, stage)) return false;
        }
        return true;
      }
      case T21Phase::DiagStep3Wait:
        return phi_at(st.fam_, r.j, *r.diag_w, stage).has_value();
      case T21Phase::Satisfied:
        return false;
    }
    return false;
  }

  void diag_step3(std::size_t rank, std::uint64_t z_index) {
    T21Requirement& r = st.reqs_[rank];
    r.diag_z = z_index;
    assign_param(rank, "diag_z", z_index);
    std::uint64_t w_code = fresh_code(side_parity(r.side));
    std::uint64_t w_index = side_index(r.side, w_code);
    r.diag_w = w_index;
    assign_param(rank, "diag_w", w_index);
    mirror_orbit(t21_code(r.side, z_index), w_code, r.name());
    assert_bound_orbit(rank, w_code, other_tag(r.side));
    set_phase(rank, T21Phase::DiagStep3Wait);
  }

  void diag_step1(std::size_t rank, std::uint64_t x_index, std::uint64_t stage) {
    T21Requirement& r = st.reqs_[rank];
    r.diag_x = x_index;
    assign_param(rank, "diag_x", x_index);
    r.diag_iterates = own_side_iterates(r.side, t21_code(r.side, x_index));
    assign_param(rank, "diag_s", json_t(r.diag_iterates));

    std::uint64_t px = *phi_at(st.fam_, r.j, x_index, stage);
    mention(t21_code(r.side, px), r.name());
    bool clear = true;
    for (std::uint64_t n : r.diag_iterates) {
      if (side_related(r.side, px, hat_iterate(r.side, x_index, n))) {
        clear = false;
        break;
      }
    }
    if (clear) {
      diag_step3(rank, x_index);
    } else {
      set_phase(rank, T21Phase::DiagStep1Wait);
    }
  }

  void diag_step2(std::size_t rank, std::uint64_t stage) {
    T21Requirement& r = st.reqs_[rank];
    std::uint64_t x = *r.diag_x;
    for (std::uint64_t n : r.diag_iterates) {
      std::uint64_t cand = hat_iterate(r.side, x, n);
      std::uint64_t pc = *phi_at(st.fam_, r.j, cand, stage);
      mention(t21_code(r.side, pc), r.name());
      bool ok = true;
      for (std::uint64_t p : r.diag_iterates) {
        if (p < n) continue;
        if (side_related(r.side, pc, hat_iterate(r.side, x, p))) {
          ok = false;
          break;
        }
      }
      if (ok) {
        diag_step3(rank, cand);
        return;
      }
    }
    // No qualifying iterate: the images already witness a range hit or a
    // reduction failure on the candidate set.
    bool range_hit = false;
    for (std::uint64_t n : r.diag_iterates) {
      std::uint64_t cand = hat_iterate(r.side, x, n);
      std::uint64_t pc = *phi_at(st.fam_, r.j, cand, stage);
      if (side_related(r.side, pc, x)) {
        range_hit = true;
        break;
      }
    }
    set_phase(rank, T21Phase::Satisfied,
              range_hit ? "range-hit-on-candidates" : "reduction-failure-on-candidates");
  }

  void act(std::size_t rank, std::uint64_t stage) {
    T21Requirement& r = st.reqs_[rank];
    switch (r.phase) {
      case T21Phase::Initialized: {
        std::uint64_t kt = t21_code(r.side, r.k);
        mention(kt, r.name());
        auto assertion = effective_assertion(kt);
        BoundTag tag = assertion ? assertion->second : BoundTag::Free;
        if (tag == own_tag(r.side)) {
          // Case 2 Step 0: substitute a fresh element whose orbit mirrors kt.
          std::uint64_t kp_code = fresh_code(side_parity(r.side));
          std::uint64_t kp = side_index(r.side, kp_code);
          r.k_prime = kp;
          assign_param(rank, "k_prime", kp);
          mirror_orbit(kt, kp_code, r.name());
          assert_bound_orbit(rank, kp_code, own_tag(r.side));
          set_phase(rank, T21Phase::Case2Step0Wait);
        } else {
          // Case 1: pin kt to the other half (if nobody pins it yet) and wait.
          if (tag == BoundTag::Free) assert_bound_orbit(rank, kt, other_tag(r.side));
          set_phase(rank, T21Phase::Case1Wait);
        }
        break;
      }
      case T21Phase::Case1Wait:
        diag_step1(rank, r.k, stage);
        break;
      case T21Phase::Case2Step0Wait: {
        std::uint64_t kp = *r.k_prime;
        std::uint64_t v = *phi_at(st.fam_, r.j, kp, stage);
        mention(t21_code(r.side, v), r.name());
        if (side_related(r.side, v, kp)) {
          // Collapsing and satisfying are one action: leave the waiting
          // outcome before the collapse lands.
          set_phase(rank, T21Phase::Satisfied, "substitute-hit-own-class");
          do_collapse({{t21_code(r.side, kp), t21_code(r.side, r.k)}}, r.name());
        } else {
          assert_bound_orbit(rank, t21_code(r.side, kp), other_tag(r.side));
          diag_step1(rank, kp, stage);
        }
        break;
      }
      case T21Phase::DiagStep1Wait:
        diag_step2(rank, stage);
        break;
      case T21Phase::DiagStep3Wait: {
        std::uint64_t z_index = *r.diag_z;
        std::uint64_t w_index = *r.diag_w;
        std::uint64_t pz = *phi_at(st.fam_, r.j, z_index, stage);
        std::uint64_t pw = *phi_at(st.fam_, r.j, w_index, stage);
        mention(t21_code(r.side, pz), r.name());
        mention(t21_code(r.side, pw), r.name());
        if (side_related(r.side, pz, pw)) {
          set_phase(rank, T21Phase::Satisfied, "images-already-related");
        } else {
          set_phase(rank, T21Phase::Satisfied, "diagonal-collapse");
          do_collapse({{t21_code(r.side, z_index), t21_code(r.side, w_index)}}, r.name());
        }
        break;
      }
      case T21Phase::Satisfied:
        break;
    }
  }

  void extend_f() {
    std::uint64_t v = 0;
    while (st.f_.defined(v)) ++v;
    st.z_.touch(v);
    auto assertion = effective_assertion(v);
    BoundTag tag = assertion ? assertion->second : BoundTag::Free;
    Parity parity;
    switch (tag) {
      case BoundTag::XBound: parity = Parity::Even; break;
      case BoundTag::YBound: parity = Parity::Odd; break;
      default: parity = st.opts_.free_parity; break;
    }
    std::uint64_t value = fresh_code(parity);
    define_f(v, value, "stage");
    if (assertion) assert_bound_single(assertion->first, value, assertion->second, "stage");
  }

  void close_under_f() {
    const auto domain = st.f_.domain();
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < domain.size(); ++i) {
        for (std::size_t j = i + 1; j < domain.size(); ++j) {
          std::uint64_t p = domain[i];
          std::uint64_t q = domain[j];
          if (!st.z_.related(p, q)) continue;
          std::uint64_t fp = *st.f_.value(p);
          std::uint64_t fq = *st.f_.value(q);
          if (!st.z_.related(fp, fq)) {
            do_collapse({{fp, fq}}, "f-closure");
            changed = true;
          }
        }
      }
    }
  }

  void run_stage() {
    st.stage_ += 1;
    st.cursor_ = TimePoint{st.stage_, 0};
    std::optional<std::size_t> actor;
    for (std::size_t rank = 0; rank < st.reqs_.size(); ++rank) {
      if (requires_attention(st.reqs_[rank], st.stage_)) {
        actor = rank;
        break;
      }
    }
    if (actor) {
      initialize_lower(*actor);
      act(*actor, st.stage_);
    }
    extend_f();
    close_under_f();
  }
};

T21State t21_init(OracleFamily fam, const T21PriorityList& priority, T21Options opts) {
  std::set<std::tuple<int, std::uint64_t, std::uint64_t>> expected;
  for (std::uint64_t j = 0; j < fam.phis.size(); ++j) {
    for (std::uint64_t k = 0; k <= opts.k_bound; ++k) {
      expected.insert({0, j, k});
      expected.insert({1, j, k});
    }
  }
  std::set<std::tuple<int, std::uint64_t, std::uint64_t>> given;
  for (const auto& [side, j, k] : priority) {
    if (!given.insert({side == Side::X ? 0 : 1, j, k}).second) {
      throw std::invalid_argument("t21_init: duplicate requirement in priority list");
    }
  }
  if (given != expected) {
    throw std::invalid_argument("t21_init: priority list must cover exactly the configured requirements");
  }

  T21State state;
  state.z_ = StageCeer::identity();
  state.fam_ = std::move(fam);
  state.opts_ = opts;
  for (const auto& [side, j, k] : priority) {
    T21Requirement r;
    r.side = side;
    r.j = j;
    r.k = k;
    state.reqs_.push_back(std::move(r));
  }
  return state;
}

void t21_stage(T21State& state) {
  T21State::Impl impl(state);
  impl.run_stage();
}

void t21_run(T21State& state, std::uint64_t stages) {
  for (std::uint64_t i = 0; i < stages; ++i) t21_stage(state);
}

BoundTag T21State::effective_tag(std::uint64_t n) const {
  auto it = assertions_.find(n);
  if (it == assertions_.end() || it->second.empty()) return BoundTag::Free;
  return it->second.begin()->second;
}

namespace {

json_t build_t21_summary(const StageCeer& z, const ReductionTable& f,
                         const std::map<std::uint64_t, std::map<std::size_t, BoundTag>>& assertions,
                         const std::vector<T21Requirement>& reqs, const OracleFamily& fam,
                         std::uint64_t stage, TimePoint clock) {
  json_t j;
  j["stage"] = stage;
  j["clock"] = time_to_json(clock);
  j["allocated_max"] = z.allocated_max();
  json_t census = json_t::array();
  for (const auto& cls : z.census()) census.push_back(json_t(cls));
  j["census"] = std::move(census);
  json_t ftab = json_t::array();
  for (const auto& [arg, entry] : f.entries()) ftab.push_back(json_t::array({arg, entry.value}));
  j["f"] = std::move(ftab);
  json_t bounds = json_t::array();
  for (const auto& [n, owners] : assertions) {
    if (owners.empty()) continue;
    bounds.push_back(json_t::array(
        {n, to_string(owners.begin()->second), reqs[owners.begin()->first].name()}));
  }
  j["bounds"] = std::move(bounds);
  json_t rj = json_t::array();
  for (const auto& r : reqs) {
    json_t one;
    one["name"] = r.name();
    one["phase"] = to_string(r.phase);
    if (r.k_prime) one["k_prime"] = *r.k_prime;
    if (r.diag_x) one["diag_x"] = *r.diag_x;
    if (!r.diag_iterates.empty()) one["diag_s"] = json_t(r.diag_iterates);
    if (r.diag_z) one["diag_z"] = *r.diag_z;
    if (r.diag_w) one["diag_w"] = *r.diag_w;
    if (!r.note.empty()) one["note"] = r.note;
    // A waiter whose value already landed in its own class never fires; the
    // wait itself is the satisfaction, so surface it without a phase change.
    if (r.phase == T21Phase::Case1Wait) {
      auto v = phi_at(fam, r.j, r.k, stage);
      if (v && z.related(t21_code(r.side, *v), t21_code(r.side, r.k))) {
        one["de_facto_satisfied"] = true;
      }
    }
    rj.push_back(std::move(one));
  }
  j["requirements"] = std::move(rj);
  return j;
}

json_t t21_config_echo(const OracleFamily& fam, const std::vector<T21Requirement>& reqs,
                       const T21Options& opts, std::uint64_t stages) {
  json_t cfg;
  cfg["stages"] = stages;
  cfg["k_bound"] = opts.k_bound;
  cfg["free_parity"] = opts.free_parity == Parity::Odd ? "odd" : "even";
  json_t prio = json_t::array();
  for (const auto& r : reqs) {
    prio.push_back(json_t{{"name", r.name()},
                          {"side", to_string(r.side)},
                          {"j", r.j},
                          {"k", r.k}});
  }
  cfg["requirements"] = std::move(prio);
  cfg["family"] = family_to_json(fam);
  return cfg;
}

}  // namespace

json_t T21State::summary() const {
  TimePoint clock = events_.empty() ? TimePoint{stage_, 0} : events_.back().time;
  return build_t21_summary(z_, f_, assertions_, reqs_, fam_, stage_, clock);
}

// ---------------------------------------------------------------------------
// Trace document + replay
// ---------------------------------------------------------------------------

TraceDocument T21State::trace() const {
  TraceDocument doc;
  doc.scenario = "t21";
  doc.config = t21_config_echo(fam_, reqs_, opts_, stage_);
  doc.events = events_;
  doc.summary = summary();
  return doc;
}

namespace {

Side side_from_string(const std::string& s) { return s == "X" ? Side::X : Side::Y; }

T21Phase phase_from_string(const std::string& s) {
  if (s == "Initialized") return T21Phase::Initialized;
  if (s == "Case1Wait") return T21Phase::Case1Wait;
  if (s == "Case2Step0Wait") return T21Phase::Case2Step0Wait;
  if (s == "DiagStep1Wait") return T21Phase::DiagStep1Wait;
  if (s == "DiagStep3Wait") return T21Phase::DiagStep3Wait;
  if (s == "Satisfied") return T21Phase::Satisfied;
  throw std::runtime_error("unknown phase: " + s);
}

BoundTag tag_from_string(const std::string& s) {
  if (s == "free") return BoundTag::Free;
  if (s == "X") return BoundTag::XBound;
  return BoundTag::YBound;
}

}  // namespace

T21ReplayState t21_replay(const TraceDocument& doc) {
  T21ReplayState rs;
  rs.z = StageCeer::identity();
  std::map<std::string, std::size_t> rank_of;
  for (const auto& rj : doc.config.at("requirements")) {
    T21Requirement r;
    r.side = side_from_string(rj.at("side").get<std::string>());
    r.j = rj.at("j").get<std::uint64_t>();
    r.k = rj.at("k").get<std::uint64_t>();
    rank_of[r.name()] = rs.reqs.size();
    rs.reqs.push_back(std::move(r));
  }

  for (const auto& ev : doc.events) {
    rs.stage = std::max(rs.stage, ev.time.stage);
    rs.clock = ev.time;
    if (ev.kind == "collapse") {
      std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
      for (const auto& pj : ev.data.at("pairs")) {
        pairs.emplace_back(pj.at(0).get<std::uint64_t>(), pj.at(1).get<std::uint64_t>());
      }
      rs.z.collapse_at(pairs, ev.by, ev.time);
    } else if (ev.kind == "f-extend") {
      std::uint64_t arg = ev.data.at("arg").get<std::uint64_t>();
      std::uint64_t value = ev.data.at("value").get<std::uint64_t>();
      rs.z.touch(arg);
      rs.z.touch(value);
      rs.f.define(arg, value, ev.time);
    } else if (ev.kind == "param-assign") {
      const std::string param = ev.data.at("param").get<std::string>();
      if (param == "mention") {
        for (const auto& nj : ev.data.at("numbers")) rs.z.touch(nj.get<std::uint64_t>());
      } else if (param == "bound") {
        std::size_t rank = rank_of.at(ev.data.at("req").get<std::string>());
        rs.assertions[ev.data.at("number").get<std::uint64_t>()][rank] =
            tag_from_string(ev.data.at("tag").get<std::string>());
        rs.z.touch(ev.data.at("number").get<std::uint64_t>());
      } else {
        std::size_t rank = rank_of.at(ev.data.at("req").get<std::string>());
        T21Requirement& r = rs.reqs[rank];
        if (param == "k_prime") {
          r.k_prime = ev.data.at("value").get<std::uint64_t>();
          rs.z.touch(t21_code(r.side, *r.k_prime));
        } else if (param == "diag_x") {
          r.diag_x = ev.data.at("value").get<std::uint64_t>();
        } else if (param == "diag_s") {
          r.diag_iterates = ev.data.at("value").get<std::vector<std::uint64_t>>();
        } else if (param == "diag_z") {
          r.diag_z = ev.data.at("value").get<std::uint64_t>();
        } else if (param == "diag_w") {
          r.diag_w = ev.data.at("value").get<std::uint64_t>();
          rs.z.touch(t21_code(r.side, *r.diag_w));
        }
      }
    } else if (ev.kind == "param-cancel") {
      std::size_t rank = rank_of.at(ev.data.at("req").get<std::string>());
      T21Requirement& r = rs.reqs[rank];
      r.phase = T21Phase::Initialized;
      r.k_prime.reset();
      r.diag_x.reset();
      r.diag_iterates.clear();
      r.diag_z.reset();
      r.diag_w.reset();
      r.note.clear();
    } else if (ev.kind == "phase-change") {
      std::size_t rank = rank_of.at(ev.data.at("req").get<std::string>());
      rs.reqs[rank].phase = phase_from_string(ev.data.at("to").get<std::string>());
      if (ev.data.contains("note")) rs.reqs[rank].note = ev.data.at("note").get<std::string>();
    }
  }
  std::uint64_t configured_stages = doc.config.value("stages", rs.stage);
  rs.stage = std::max(rs.stage, configured_stages);
  return rs;
}

json_t t21_replay_summary(const TraceDocument& doc) {
  T21ReplayState rs = t21_replay(doc);
  OracleFamily fam = family_from_json(doc.config.at("family"));
  return build_t21_summary(rs.z, rs.f, rs.assertions, rs.reqs, fam, rs.stage, rs.clock);
}

ActiveSets t21_active_sets(const T21State& state, TimePoint at) {
  TimePoint last = state.events().empty() ? TimePoint{state.stage(), 0} : state.events().back().time;
  if (TimePoint{state.stage(), 0} < at && last < at) {
    throw std::out_of_range("t21_active_sets: time out of range");
  }
  TraceDocument doc;
  doc.scenario = "t21";
  doc.config = state.trace().config;
  for (const auto& ev : state.events()) {
    if (at < ev.time) break;
    doc.events.push_back(ev);
  }
  T21ReplayState rs = t21_replay(doc);
  ActiveSets sets;
  for (const auto& r : rs.reqs) {
    if (r.phase == T21Phase::DiagStep3Wait && r.diag_w) {
      sets.d.push_back(t21_code(r.side, *r.diag_w));
    }
    if (r.phase == T21Phase::Case2Step0Wait && r.k_prime) {
      sets.e.push_back(t21_code(r.side, *r.k_prime));
    }
  }
  for (std::uint64_t v : rs.f.values()) sets.i.push_back(v);
  std::sort(sets.d.begin(), sets.d.end());
  std::sort(sets.e.begin(), sets.e.end());
  std::sort(sets.i.begin(), sets.i.end());
  return sets;
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

namespace {

// Scratch union-find that also tracks class parity purity.
struct AuditUf {
  std::map<std::uint64_t, std::uint64_t> parent;
  std::map<std::uint64_t, int> parities;  // root -> 0 even-only, 1 odd-only, 2 mixed

  std::uint64_t find(std::uint64_t x) {
    auto it = parent.find(x);
    if (it == parent.end()) return x;
    std::uint64_t root = x;
    while (true) {
      auto jt = parent.find(root);
      if (jt == parent.end() || jt->second == root) break;
      root = jt->second;
    }
    std::uint64_t cur = x;
    while (cur != root) {
      auto jt = parent.find(cur);
      std::uint64_t nxt = jt->second;
      jt->second = root;
      cur = nxt;
    }
    return root;
  }

  int parity_of(std::uint64_t root) {
    auto it = parities.find(root);
    if (it != parities.end()) return it->second;
    return root % 2 == 0 ? 0 : 1;
  }

  // Returns true when the union mixed parities.
  bool unite(std::uint64_t a, std::uint64_t b) {
    std::uint64_t ra = find(a);
    std::uint64_t rb = find(b);
    if (ra == rb) return false;
    int pa = parity_of(ra);
    int pb = parity_of(rb);
    std::uint64_t root = std::min(ra, rb);
    std::uint64_t child = std::max(ra, rb);
    parent.try_emplace(root, root);
    parent[child] = root;
    parities[root] = (pa == pb) ? pa : 2;
    return pa != 2 && pb != 2 && pa != pb;
  }
};

struct CheckAcc {
  CheckResult result;

  explicit CheckAcc(std::string name) { result.name = std::move(name); }

  void fail(const std::string& witness) {
    result.passed = false;
    result.violations += 1;
    if (result.witness.empty()) result.witness = witness;
  }
};

std::string fmt_time(TimePoint t) {
  std::ostringstream os;
  os << "(" << t.stage << "," << t.tick << ")";
  return os.str();
}

}  // namespace

Report verify_t21_trace(const TraceDocument& doc) {
  CheckAcc disjoint("dei-disjoint");
  CheckAcc justified("dei-collapse-justified");
  CheckAcc parity("no-cross-parity-collapse");
  CheckAcc reduction("f-reduction-and-zero-class");
  CheckAcc single_actor("single-actor-per-stage");

  struct ReqView {
    Side side;
    T21Phase phase = T21Phase::Initialized;
    std::optional<std::uint64_t> k_prime;
    std::optional<std::uint64_t> diag_w;
  };
  std::map<std::string, std::size_t> rank_of;
  std::vector<ReqView> reqs;
  std::set<std::string> req_names;
  for (const auto& rj : doc.config.at("requirements")) {
    ReqView rv;
    rv.side = side_from_string(rj.at("side").get<std::string>());
    std::string name = rj.at("name").get<std::string>();
    rank_of[name] = reqs.size();
    req_names.insert(name);
    reqs.push_back(rv);
  }

  AuditUf uf;
  std::map<std::uint64_t, std::uint64_t> f;     // arg -> value
  std::map<std::uint64_t, std::uint64_t> finv;  // value -> arg
  std::set<std::string> stage_actors;
  std::uint64_t current_stage = 0;

  auto end_stage = [&]() {
    if (stage_actors.size() > 1) {
      std::ostringstream os;
      os << "stage " << current_stage << " has actors:";
      for (const auto& a : stage_actors) os << " " << a;
      single_actor.fail(os.str());
    }
    stage_actors.clear();
    // f must be a reduction on its defined domain at every stage boundary.
    std::vector<std::uint64_t> dom;
    dom.reserve(f.size());
    for (const auto& [arg, _] : f) dom.push_back(arg);
    for (std::size_t a = 0; a < dom.size(); ++a) {
      for (std::size_t b = a + 1; b < dom.size(); ++b) {
        bool args_rel = uf.find(dom[a]) == uf.find(dom[b]);
        bool imgs_rel = uf.find(f[dom[a]]) == uf.find(f[dom[b]]);
        if (args_rel != imgs_rel) {
          std::ostringstream os;
          os << "stage " << current_stage << ": f not a reduction on (" << dom[a] << "," << dom[b]
             << ")";
          reduction.fail(os.str());
        }
      }
    }
  };

  auto tick_checks = [&](TimePoint at) {
    // Gather D, E from phases and I from f's image.
    std::vector<std::pair<std::uint64_t, char>> dei;  // number, which set
    for (const auto& rv : reqs) {
      if (rv.phase == T21Phase::DiagStep3Wait && rv.diag_w) {
        dei.emplace_back(t21_code(rv.side, *rv.diag_w), 'D');
      }
      if (rv.phase == T21Phase::Case2Step0Wait && rv.k_prime) {
        dei.emplace_back(t21_code(rv.side, *rv.k_prime), 'E');
      }
    }
    std::size_t params = dei.size();
    for (std::size_t a = 0; a < params; ++a) {
      for (std::size_t b = a + 1; b < params; ++b) {
        if (dei[a].first == dei[b].first) {
          std::ostringstream os;
          os << fmt_time(at) << ": " << dei[a].first << " is in " << dei[a].second << " and "
             << dei[b].second;
          disjoint.fail(os.str());
        }
      }
    }
    for (std::size_t a = 0; a < params; ++a) {
      if (finv.contains(dei[a].first)) {
        std::ostringstream os;
        os << fmt_time(at) << ": " << dei[a].first << " is in " << dei[a].second << " and I";
        disjoint.fail(os.str());
      }
    }
    for (const auto& [value, _] : finv) dei.emplace_back(value, 'I');

    // Any two distinct related numbers inside D+E+I must both be f-values
    // with related preimages; the class of 0 must miss I.
    std::map<std::uint64_t, std::set<std::uint64_t>> groups;
    for (const auto& member : dei) groups[uf.find(member.first)].insert(member.first);
    std::uint64_t zero_root = uf.find(0);
    for (const auto& [root, numbers] : groups) {
      if (root == zero_root) {
        for (std::uint64_t n : numbers) {
          if (finv.contains(n)) {
            std::ostringstream os;
            os << fmt_time(at) << ": class of 0 contains image value " << n;
            reduction.fail(os.str());
          }
        }
      }
      if (numbers.size() < 2) continue;
      bool all_images = true;
      for (std::uint64_t n : numbers) all_images &= finv.contains(n);
      if (!all_images) {
        std::ostringstream os;
        os << fmt_time(at) << ": related active numbers not all inside I:";
        for (std::uint64_t n : numbers) os << " " << n;
        justified.fail(os.str());
        continue;
      }
      std::optional<std::uint64_t> pre_root;
      for (std::uint64_t n : numbers) {
        std::uint64_t pre = uf.find(finv.at(n));
        if (!pre_root) {
          pre_root = pre;
        } else if (*pre_root != pre) {
          std::ostringstream os;
          os << fmt_time(at) << ": image values related but preimages are not (value " << n << ")";
          justified.fail(os.str());
        }
      }
    }
  };

  for (const auto& ev : doc.events) {
    if (ev.time.stage != current_stage) {
      end_stage();
      current_stage = ev.time.stage;
    }
    if (req_names.contains(ev.by)) stage_actors.insert(ev.by);

    if (ev.kind == "collapse") {
      for (const auto& pj : ev.data.at("pairs")) {
        std::uint64_t a = pj.at(0).get<std::uint64_t>();
        std::uint64_t b = pj.at(1).get<std::uint64_t>();
        if (uf.unite(a, b)) {
          std::ostringstream os;
          os << fmt_time(ev.time) << ": collapse relates " << a << " and " << b
             << " across parities";
          parity.fail(os.str());
        }
      }
    } else if (ev.kind == "f-extend") {
      std::uint64_t arg = ev.data.at("arg").get<std::uint64_t>();
      std::uint64_t value = ev.data.at("value").get<std::uint64_t>();
      f[arg] = value;
      finv[value] = arg;
    } else if (ev.kind == "param-assign") {
      const std::string param = ev.data.at("param").get<std::string>();
      if (param != "mention" && param != "bound") {
        std::size_t rank = rank_of.at(ev.data.at("req").get<std::string>());
        if (param == "k_prime") reqs[rank].k_prime = ev.data.at("value").get<std::uint64_t>();
        if (param == "diag_w") reqs[rank].diag_w = ev.data.at("value").get<std::uint64_t>();
      }
    } else if (ev.kind == "param-cancel") {
      std::size_t rank = rank_of.at(ev.data.at("req").get<std::string>());
      reqs[rank].phase = T21Phase::Initialized;
      reqs[rank].k_prime.reset();
      reqs[rank].diag_w.reset();
    } else if (ev.kind == "phase-change") {
      std::size_t rank = rank_of.at(ev.data.at("req").get<std::string>());
      reqs[rank].phase = phase_from_string(ev.data.at("to").get<std::string>());
    }
    tick_checks(ev.time);
  }
  end_stage();

  Report report;
  report.checks = {disjoint.result, justified.result, parity.result, reduction.result,
                   single_actor.result};
  return report;
}

Report verify_t21(const T21State& state) { return verify_t21_trace(state.trace()); }

}  // namespace ceerbench
