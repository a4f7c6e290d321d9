// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "ceerbench/t39.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ceerbench {

std::string to_string(T39Kind kind) {
  switch (kind) {
    case T39Kind::CCR: return "CCR";
    case T39Kind::SF: return "SF";
    case T39Kind::D: return "D";
  }
  return "?";
}

std::string T39Requirement::name() const {
  std::ostringstream os;
  switch (kind) {
    case T39Kind::CCR: os << "CCR:" << l << ":" << j; break;
    case T39Kind::SF: os << "SF:" << i << ":" << k << ":" << l; break;
    case T39Kind::D: os << "D:" << j << ":" << l << ":" << lp; break;
  }
  return os.str();
}

std::string T39Requirement::phase_name() const {
  switch (kind) {
    case T39Kind::CCR:
      if (ccr_done) return "Done";
      return ccr_xyz ? "WaitingPairZ" : "Initialized";
    case T39Kind::SF:
      return sf_witness ? "Done" : "Initialized";
    case T39Kind::D:
      if (d_satisfied) return "SatisfiedWith";
      return d_params.empty() ? "Initialized" : "Running";
  }
  return "?";
}

T39PriorityList t39_default_priority(const OracleFamily& fam, std::uint64_t num_ceers,
                                     std::uint64_t k_bound) {
  struct Keyed {
    std::uint64_t key;
    T39Requirement req;
  };
  std::vector<Keyed> keyed;
  for (std::uint64_t l = 0; l < num_ceers; ++l) {
    for (std::uint64_t j = 0; j < fam.wes.size(); ++j) {
      T39Requirement r;
      r.kind = T39Kind::CCR;
      r.l = l;
      r.j = j;
      keyed.push_back({3 * pair_code(j, l) + 0, std::move(r)});
    }
  }
  for (std::uint64_t i = 0; i < fam.wes.size(); ++i) {
    for (std::uint64_t k = 0; k <= k_bound; ++k) {
      for (std::uint64_t l = 0; l < num_ceers; ++l) {
        T39Requirement r;
        r.kind = T39Kind::SF;
        r.i = i;
        r.k = k;
        r.l = l;
        keyed.push_back({3 * pair_code(i, pair_code(k, l)) + 1, std::move(r)});
      }
    }
  }
  for (std::uint64_t j = 0; j < fam.phis.size(); ++j) {
    for (std::uint64_t l = 0; l < num_ceers; ++l) {
      for (std::uint64_t lp = 0; lp < num_ceers; ++lp) {
        if (l == lp) continue;
        T39Requirement r;
        r.kind = T39Kind::D;
        r.j = j;
        r.l = l;
        r.lp = lp;
        keyed.push_back({3 * pair_code(j, pair_code(l, lp)) + 2, std::move(r)});
      }
    }
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) { return a.key < b.key; });
  T39PriorityList out;
  out.reserve(keyed.size());
  for (auto& kd : keyed) out.push_back(std::move(kd.req));
  return out;
}

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

struct T39State::Impl {
  T39State& st;

  explicit Impl(T39State& s) : st(s) {}

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

  void mention(std::uint64_t ceer, std::uint64_t n, const std::string& by) {
    bool raises = n > st.amax_;
    st.amax_ = std::max(st.amax_, n);
    st.e_[ceer].touch(n);
    if (raises) {
      emit("param-assign", by,
           json_t{{"param", "mention"}, {"ceer", ceer}, {"numbers", json_t::array({n})}});
    }
  }

  std::uint64_t fresh_odd() {
    std::uint64_t c = std::max(st.stage_ + 1, st.amax_) + 1;
    if (c % 2 == 0) ++c;
    st.amax_ = c;
    return c;
  }

  // Collapse in E_l; the event is always recorded for requirement actions,
  // even when idempotent.
  void do_collapse(std::uint64_t l, std::uint64_t a, std::uint64_t b, const std::string& by) {
    st.amax_ = std::max({st.amax_, a, b});
    TimePoint at = next_time();
    CollapseReport report = st.e_[l].collapse_at({{a, b}}, by, at);
    json_t jmerged = json_t::array();
    for (const auto& [x, y] : report.merged) jmerged.push_back(json_t::array({x, y}));
    emit("collapse", by,
         json_t{{"ceer", l}, {"pairs", json_t::array({json_t::array({a, b})})}, {"merged", jmerged}},
         at);
  }

  void add_restraint(std::size_t rank, std::uint64_t l, std::uint64_t number) {
    if (st.restraints_.insert(Restraint{rank, l, number}).second) {
      emit("restraint", st.reqs_[rank].name(),
           json_t{{"req", st.reqs_[rank].name()},
                  {"ceer", l},
                  {"number", number},
                  {"action", "add"}});
    }
  }

  void drop_restraint(std::size_t rank, std::uint64_t l, std::uint64_t number,
                      const std::string& by) {
    if (st.restraints_.erase(Restraint{rank, l, number}) > 0) {
      emit("restraint", by,
           json_t{{"req", st.reqs_[rank].name()},
                  {"ceer", l},
                  {"number", number},
                  {"action", "drop"}});
    }
  }

  void drop_all_restraints(std::size_t rank, const std::string& by) {
    std::vector<Restraint> owned;
    for (const auto& r : st.restraints_) {
      if (r.owner == rank) owned.push_back(r);
    }
    for (const auto& r : owned) drop_restraint(rank, r.ceer, r.number, by);
  }

  void assign_param(std::size_t rank, const std::string& param, json_t value) {
    emit("param-assign", st.reqs_[rank].name(),
         json_t{{"param", param}, {"req", st.reqs_[rank].name()}, {"value", std::move(value)}});
  }

  void set_phase(std::size_t rank, const std::string& from, const std::string& to,
                 const std::string& note = "") {
    json_t data{{"req", st.reqs_[rank].name()}, {"from", from}, {"to", to}};
    if (!note.empty()) data["note"] = note;
    emit("phase-change", st.reqs_[rank].name(), std::move(data));
  }

  void initialize_lower(std::size_t actor_rank) {
    for (std::size_t rank = actor_rank + 1; rank < st.reqs_.size(); ++rank) {
      T39Requirement& r = st.reqs_[rank];
      if (r.kind == T39Kind::SF) continue;  // initializing an SF does nothing
      bool owns = false;
      for (const auto& res : st.restraints_) owns |= (res.owner == rank);
      bool has_state = r.ccr_xyz || r.ccr_done || !r.d_params.empty() || r.d_satisfied ||
                       r.d_cd || owns;
      if (!has_state) continue;
      drop_all_restraints(rank, st.reqs_[actor_rank].name());
      r.ccr_xyz.reset();
      r.ccr_done = false;
      r.d_params.clear();
      r.d_satisfied = false;
      r.d_cd.reset();
      emit("param-cancel", st.reqs_[actor_rank].name(), json_t{{"req", r.name()}});
    }
  }

  bool related_to_even(std::uint64_t l, std::uint64_t n) const {
    for (std::uint64_t m : st.e_[l].class_members(n)) {
      if (m % 2 == 0) return true;
    }
    return false;
  }

  bool related_to_higher_restrained(std::uint64_t l, std::uint64_t n, std::size_t rank) const {
    for (const auto& res : st.restraints_) {
      if (res.owner < rank && res.ceer == l && st.e_[l].related(n, res.number)) return true;
    }
    return false;
  }

  // Advance the base/universal replays and inject the base relation into the
  // even codes of every ceer.
  void stage_opening() {
    while (st.a_applied_ < st.a_enum_.collapses.size() &&
           st.a_enum_.collapses[st.a_applied_][2] <= st.stage_) {
      const auto& [x, y, _] = st.a_enum_.collapses[st.a_applied_];
      st.a_state_.collapse({{x, y}}, "enumeration");
      for (std::uint64_t l = 0; l < st.e_.size(); ++l) {
        std::uint64_t a = 2 * x;
        std::uint64_t b = 2 * y;
        if (!st.e_[l].related(a, b)) {
          st.amax_ = std::max({st.amax_, a, b});
          TimePoint at = next_time();
          CollapseReport report = st.e_[l].collapse_at({{a, b}}, "A-injection", at);
          json_t jmerged = json_t::array();
          for (const auto& [p, q] : report.merged) jmerged.push_back(json_t::array({p, q}));
          emit("collapse", "A-injection",
               json_t{{"ceer", l},
                      {"pairs", json_t::array({json_t::array({a, b})})},
                      {"merged", jmerged}},
               at);
        } else {
          // Idempotent injection: the numbers still count as mentioned.
          mention(l, a, "A-injection");
          mention(l, b, "A-injection");
        }
      }
      ++st.a_applied_;
    }
    while (st.t_applied_ < st.t_enum_.collapses.size() &&
           st.t_enum_.collapses[st.t_applied_][2] <= st.stage_) {
      const auto& [x, y, _] = st.t_enum_.collapses[st.t_applied_];
      st.t_state_.collapse({{x, y}}, "enumeration");
      ++st.t_applied_;
    }
  }

  // Scan one requirement; returns true when it acted and stopped the stage.
  bool scan_ccr(std::size_t rank) {
    T39Requirement& r = st.reqs_[rank];
    // Already satisfied: some enumerated pair is related. Drop the restraint
    // and move on.
    bool already = false;
    std::uint64_t stage = st.stage_;
    for (const auto& e : st.fam_.wes[r.j].elems) {
      if (e.enumerated_at > stage) continue;
      auto [w, z] = unpair_code(e.element);
      if (st.e_[r.l].related(w, z)) {
        already = true;
        break;
      }
    }
    if (already) {
      if (!r.ccr_done) {
        drop_all_restraints(rank, r.name());
        r.ccr_done = true;
        set_phase(rank, r.ccr_xyz ? "WaitingPairZ" : "Initialized", "Done", "already-satisfied");
      }
      return false;
    }
    if (r.ccr_done) return false;
    if (!r.ccr_xyz) {
      // Watch the least enumerated pair, if any.
      std::optional<std::uint64_t> least;
      for (const auto& e : st.fam_.wes[r.j].elems) {
        if (e.enumerated_at <= stage && (!least || e.element < *least)) least = e.element;
      }
      if (!least) return false;
      auto [x, y] = unpair_code(*least);
      mention(r.l, x, r.name());
      mention(r.l, y, r.name());
      std::uint64_t z = fresh_odd();
      st.e_[r.l].touch(z);
      r.ccr_xyz = {{x, y, z}};
      assign_param(rank, "ccr", json_t::array({x, y, z}));
      add_restraint(rank, r.l, z);
      set_phase(rank, "Initialized", "WaitingPairZ");
      return true;
    }
    const auto [x, y, z] = *r.ccr_xyz;
    bool seen_xz = we_contains(st.fam_, r.j, pair_code(x, z), stage) ||
                   we_contains(st.fam_, r.j, pair_code(z, x), stage);
    bool seen_yz = we_contains(st.fam_, r.j, pair_code(y, z), stage) ||
                   we_contains(st.fam_, r.j, pair_code(z, y), stage);
    if (!seen_xz && !seen_yz) return false;
    drop_restraint(rank, r.l, z, r.name());
    if (seen_xz) {
      do_collapse(r.l, x, z, r.name());
    } else {
      do_collapse(r.l, y, z, r.name());
    }
    r.ccr_done = true;
    set_phase(rank, "WaitingPairZ", "Done", "collapsed");
    return true;
  }

  bool scan_sf(std::size_t rank) {
    T39Requirement& r = st.reqs_[rank];
    if (r.sf_witness) return false;
    std::uint64_t stage = st.stage_;
    // Already satisfied: W_i already meets the class of k.
    for (std::uint64_t x : we_at(st.fam_, r.i, stage)) {
      if (st.e_[r.l].related(x, r.k)) return false;
    }
    for (std::uint64_t x : we_at(st.fam_, r.i, stage)) {
      if (x % 2 == 0) continue;
      if (related_to_even(r.l, x)) continue;
      if (related_to_higher_restrained(r.l, x, rank)) continue;
      r.sf_witness = x;
      assign_param(rank, "sf_witness", x);
      do_collapse(r.l, x, r.k, r.name());
      set_phase(rank, "Initialized", "Done", "witness-collapsed");
      return true;
    }
    return false;
  }

  bool scan_d(std::size_t rank) {
    T39Requirement& r = st.reqs_[rank];
    if (r.d_satisfied) return false;
    std::uint64_t stage = st.stage_;
    if (r.d_params.empty()) {
      std::uint64_t a0 = fresh_odd();
      st.e_[r.l].touch(a0);
      std::uint64_t a1 = fresh_odd();
      st.e_[r.l].touch(a1);
      r.d_params = {a0, a1};
      assign_param(rank, "a", json_t::array({a0, a1}));
      add_restraint(rank, r.l, a0);
      add_restraint(rank, r.l, a1);
      set_phase(rank, "Initialized", "Running");
      return true;
    }
    const std::size_t m = r.d_params.size();
    // Mirror the universal enumeration onto the witnesses.
    bool caused = false;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = i + 1; k < m; ++k) {
        if (st.t_state_.related(i, k) && !st.e_[r.l].related(r.d_params[i], r.d_params[k])) {
          do_collapse(r.l, r.d_params[i], r.d_params[k], r.name());
          caused = true;
        }
      }
    }
    // Converged images, in witness order.
    std::vector<std::optional<std::uint64_t>> images(m);
    for (std::size_t i = 0; i < m; ++i) {
      images[i] = phi_at(st.fam_, r.j, r.d_params[i], stage);
      if (images[i]) mention(r.lp, *images[i], r.name());
    }
    // Case 1: a pair of images free of even classes and higher restraints,
    // and not related to each other.
    for (std::size_t i = 0; i < m; ++i) {
      if (!images[i]) continue;
      for (std::size_t k = i + 1; k < m; ++k) {
        if (!images[k]) continue;
        std::uint64_t ci = *images[i];
        std::uint64_t ck = *images[k];
        if (related_to_even(r.lp, ci) || related_to_even(r.lp, ck)) continue;
        if (related_to_higher_restrained(r.lp, ci, rank) ||
            related_to_higher_restrained(r.lp, ck, rank)) {
          continue;
        }
        if (st.e_[r.lp].related(ci, ck)) continue;
        do_collapse(r.l, r.d_params[i], r.d_params[k], r.name());
        // Witness restraints give way to the permanent image restraints.
        drop_all_restraints(rank, r.name());
        r.d_cd = {ci, ck};
        assign_param(rank, "cd", json_t::array({ci, ck}));
        add_restraint(rank, r.lp, ci);
        add_restraint(rank, r.lp, ck);
        r.d_satisfied = true;
        set_phase(rank, "Running", "SatisfiedWith", "diagonal-collapse");
        return true;
      }
    }
    // Case 2: every image converged and the pattern matches; extend.
    bool all_converged = true;
    for (std::size_t i = 0; i < m; ++i) all_converged &= images[i].has_value();
    if (all_converged) {
      bool pattern = true;
      for (std::size_t i = 0; i < m && pattern; ++i) {
        for (std::size_t k = i + 1; k < m && pattern; ++k) {
          bool wit = st.e_[r.l].related(r.d_params[i], r.d_params[k]);
          bool img = st.e_[r.lp].related(*images[i], *images[k]);
          if (wit != img) pattern = false;
        }
      }
      if (pattern) {
        std::uint64_t am = fresh_odd();
        st.e_[r.l].touch(am);
        r.d_params.push_back(am);
        assign_param(rank, "a", json_t(r.d_params));
        add_restraint(rank, r.l, am);
        return true;
      }
    }
    // Case 3: stop only if the mirroring collapsed something new.
    return caused;
  }

  void run_stage() {
    st.stage_ += 1;
    st.cursor_ = TimePoint{st.stage_, 0};
    stage_opening();
    for (std::size_t rank = 0; rank < st.reqs_.size(); ++rank) {
      bool acted = false;
      switch (st.reqs_[rank].kind) {
        case T39Kind::CCR: acted = scan_ccr(rank); break;
        case T39Kind::SF: acted = scan_sf(rank); break;
        case T39Kind::D: acted = scan_d(rank); break;
      }
      if (acted) {
        initialize_lower(rank);
        break;
      }
    }
  }
};

T39State t39_init(CeerEnumeration a_enum, CeerEnumeration t_enum, OracleFamily fam,
                  std::uint64_t num_ceers, const T39PriorityList& priority, T39Options opts) {
  if (num_ceers < 1) throw std::invalid_argument("t39_init: need at least one ceer");

  auto spec_key = [](const T39Requirement& r) {
    return std::make_tuple(static_cast<int>(r.kind), r.j, r.k, r.i, r.l, r.lp);
  };
  std::set<std::tuple<int, std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>>
      expected;
  for (const auto& r : t39_default_priority(fam, num_ceers, opts.k_bound)) {
    expected.insert(spec_key(r));
  }
  std::set<std::tuple<int, std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>>
      given;
  for (const auto& r : priority) {
    if (!given.insert(spec_key(r)).second) {
      throw std::invalid_argument("t39_init: duplicate requirement in priority list");
    }
  }
  if (given != expected) {
    throw std::invalid_argument("t39_init: priority list must cover exactly the configured requirements");
  }

  T39State state;
  state.e_.assign(num_ceers, StageCeer::identity());
  state.a_enum_ = std::move(a_enum);
  state.t_enum_ = std::move(t_enum);
  std::sort(state.a_enum_.collapses.begin(), state.a_enum_.collapses.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a[2], a[0], a[1]) < std::tie(b[2], b[0], b[1]);
            });
  std::sort(state.t_enum_.collapses.begin(), state.t_enum_.collapses.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a[2], a[0], a[1]) < std::tie(b[2], b[0], b[1]);
            });
  state.a_state_ = StageCeer::identity();
  state.t_state_ = StageCeer::identity();
  state.fam_ = std::move(fam);
  state.opts_ = opts;
  for (const auto& r : priority) {
    T39Requirement fresh;
    fresh.kind = r.kind;
    fresh.j = r.j;
    fresh.k = r.k;
    fresh.i = r.i;
    fresh.l = r.l;
    fresh.lp = r.lp;
    state.reqs_.push_back(std::move(fresh));
  }
  return state;
}

void t39_stage(T39State& state) {
  T39State::Impl impl(state);
  impl.run_stage();
}

void t39_run(T39State& state, std::uint64_t stages) {
  for (std::uint64_t i = 0; i < stages; ++i) t39_stage(state);
}

// ---------------------------------------------------------------------------
// Summary, trace, replay
// ---------------------------------------------------------------------------

namespace {

json_t build_t39_summary(const std::vector<StageCeer>& e, const std::set<Restraint>& restraints,
                         const std::vector<T39Requirement>& reqs, std::uint64_t amax,
                         std::uint64_t stage, TimePoint clock) {
  json_t j;
  j["stage"] = stage;
  j["clock"] = time_to_json(clock);
  j["mentioned_max"] = amax;
  json_t ceers = json_t::array();
  for (const auto& ceer : e) {
    json_t census = json_t::array();
    for (const auto& cls : ceer.census()) census.push_back(json_t(cls));
    ceers.push_back(std::move(census));
  }
  j["ceers"] = std::move(ceers);
  json_t res = json_t::array();
  for (const auto& r : restraints) {
    res.push_back(json_t::array({reqs[r.owner].name(), r.ceer, r.number}));
  }
  j["restraints"] = std::move(res);
  json_t rj = json_t::array();
  for (const auto& r : reqs) {
    json_t one;
    one["name"] = r.name();
    one["phase"] = r.phase_name();
    if (r.ccr_xyz) one["ccr"] = json_t::array({(*r.ccr_xyz)[0], (*r.ccr_xyz)[1], (*r.ccr_xyz)[2]});
    if (r.sf_witness) one["sf_witness"] = *r.sf_witness;
    if (!r.d_params.empty()) one["a"] = json_t(r.d_params);
    if (r.d_cd) one["cd"] = json_t::array({r.d_cd->first, r.d_cd->second});
    rj.push_back(std::move(one));
  }
  j["requirements"] = std::move(rj);
  return j;
}

T39Kind kind_from_string(const std::string& s) {
  if (s == "CCR") return T39Kind::CCR;
  if (s == "SF") return T39Kind::SF;
  return T39Kind::D;
}

}  // namespace

json_t T39State::summary() const {
  TimePoint clock = events_.empty() ? TimePoint{stage_, 0} : events_.back().time;
  return build_t39_summary(e_, restraints_, reqs_, amax_, stage_, clock);
}

TraceDocument T39State::trace() const {
  TraceDocument doc;
  doc.scenario = "t39";
  json_t cfg;
  cfg["stages"] = stage_;
  cfg["num_ceers"] = e_.size();
  cfg["k_bound"] = opts_.k_bound;
  json_t prio = json_t::array();
  for (const auto& r : reqs_) {
    prio.push_back(json_t{{"name", r.name()},
                          {"kind", to_string(r.kind)},
                          {"j", r.j},
                          {"k", r.k},
                          {"i", r.i},
                          {"l", r.l},
                          {"lp", r.lp}});
  }
  cfg["requirements"] = std::move(prio);
  cfg["family"] = family_to_json(fam_);
  cfg["base_ceer"] = ceer_enumeration_to_json(a_enum_);
  cfg["universal_ceer"] = ceer_enumeration_to_json(t_enum_);
  doc.config = std::move(cfg);
  doc.events = events_;
  doc.summary = summary();
  return doc;
}

T39ReplayState t39_replay(const TraceDocument& doc) {
  T39ReplayState rs;
  rs.e.assign(doc.config.at("num_ceers").get<std::size_t>(), StageCeer::identity());
  std::map<std::string, std::size_t> rank_of;
  for (const auto& rj : doc.config.at("requirements")) {
    T39Requirement r;
    r.kind = kind_from_string(rj.at("kind").get<std::string>());
    r.j = rj.at("j").get<std::uint64_t>();
    r.k = rj.at("k").get<std::uint64_t>();
    r.i = rj.at("i").get<std::uint64_t>();
    r.l = rj.at("l").get<std::uint64_t>();
    r.lp = rj.at("lp").get<std::uint64_t>();
    rank_of[r.name()] = rs.reqs.size();
    rs.reqs.push_back(std::move(r));
  }

  for (const auto& ev : doc.events) {
    rs.stage = std::max(rs.stage, ev.time.stage);
    rs.clock = ev.time;
    if (ev.kind == "collapse") {
      std::uint64_t l = ev.data.at("ceer").get<std::uint64_t>();
      std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
      for (const auto& pj : ev.data.at("pairs")) {
        pairs.emplace_back(pj.at(0).get<std::uint64_t>(), pj.at(1).get<std::uint64_t>());
        rs.amax = std::max({rs.amax, pairs.back().first, pairs.back().second});
      }
      rs.e[l].collapse_at(pairs, ev.by, ev.time);
    } else if (ev.kind == "restraint") {
      std::size_t rank = rank_of.at(ev.data.at("req").get<std::string>());
      Restraint res{rank, ev.data.at("ceer").get<std::uint64_t>(),
                    ev.data.at("number").get<std::uint64_t>()};
      if (ev.data.at("action").get<std::string>() == "add") {
        rs.restraints.insert(res);
      } else {
        rs.restraints.erase(res);
      }
    } else if (ev.kind == "param-assign") {
      const std::string param = ev.data.at("param").get<std::string>();
      if (param == "mention") {
        std::uint64_t l = ev.data.at("ceer").get<std::uint64_t>();
        for (const auto& nj : ev.data.at("numbers")) {
          std::uint64_t n = nj.get<std::uint64_t>();
          rs.e[l].touch(n);
          rs.amax = std::max(rs.amax, n);
        }
        continue;
      }
      std::size_t rank = rank_of.at(ev.data.at("req").get<std::string>());
      T39Requirement& r = rs.reqs[rank];
      if (param == "ccr") {
        const auto& v = ev.data.at("value");
        r.ccr_xyz = {{v.at(0).get<std::uint64_t>(), v.at(1).get<std::uint64_t>(),
                      v.at(2).get<std::uint64_t>()}};
        for (const auto& nj : v) {
          rs.amax = std::max(rs.amax, nj.get<std::uint64_t>());
          rs.e[r.l].touch(nj.get<std::uint64_t>());
        }
      } else if (param == "sf_witness") {
        r.sf_witness = ev.data.at("value").get<std::uint64_t>();
        rs.amax = std::max(rs.amax, *r.sf_witness);
      } else if (param == "a") {
        r.d_params = ev.data.at("value").get<std::vector<std::uint64_t>>();
        for (std::uint64_t n : r.d_params) {
          rs.amax = std::max(rs.amax, n);
          rs.e[r.l].touch(n);
        }
      } else if (param == "cd") {
        const auto& v = ev.data.at("value");
        r.d_cd = {v.at(0).get<std::uint64_t>(), v.at(1).get<std::uint64_t>()};
        rs.amax = std::max({rs.amax, r.d_cd->first, r.d_cd->second});
      }
    } else if (ev.kind == "param-cancel") {
      std::size_t rank = rank_of.at(ev.data.at("req").get<std::string>());
      T39Requirement& r = rs.reqs[rank];
      r.ccr_xyz.reset();
      r.ccr_done = false;
      r.d_params.clear();
      r.d_satisfied = false;
      r.d_cd.reset();
    } else if (ev.kind == "phase-change") {
      std::size_t rank = rank_of.at(ev.data.at("req").get<std::string>());
      T39Requirement& r = rs.reqs[rank];
      const std::string to = ev.data.at("to").get<std::string>();
      if (r.kind == T39Kind::CCR && to == "Done") r.ccr_done = true;
      if (r.kind == T39Kind::D && to == "SatisfiedWith") r.d_satisfied = true;
    }
  }
  std::uint64_t configured_stages = doc.config.value("stages", rs.stage);
  rs.stage = std::max(rs.stage, configured_stages);
  return rs;
}

json_t t39_replay_summary(const TraceDocument& doc) {
  T39ReplayState rs = t39_replay(doc);
  return build_t39_summary(rs.e, rs.restraints, rs.reqs, rs.amax, rs.stage, rs.clock);
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

namespace {

struct VerifyUf {
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

  bool related(std::uint64_t a, std::uint64_t b) { return find(a) == find(b); }

  void unite(std::uint64_t a, std::uint64_t b) {
    std::uint64_t ra = find(a);
    std::uint64_t rb = find(b);
    if (ra == rb) return;
    int pa = parity_of(ra);
    int pb = parity_of(rb);
    std::uint64_t root = std::min(ra, rb);
    std::uint64_t child = std::max(ra, rb);
    parent.try_emplace(root, root);
    parent[child] = root;
    parities[root] = (pa == pb) ? pa : 2;
  }

  bool class_has_even(std::uint64_t n) { return parity_of(find(n)) != 1; }
};

struct CheckAcc39 {
  CheckResult result;

  explicit CheckAcc39(std::string name) { result.name = std::move(name); }

  void fail(const std::string& witness) {
    result.passed = false;
    result.violations += 1;
    if (result.witness.empty()) result.witness = witness;
  }
};

}  // namespace

Report verify_t39_trace(const TraceDocument& doc) {
  CheckAcc39 cross("witness-separation-cross");
  CheckAcc39 mirror("witness-separation-t-mirror");
  CheckAcc39 evens("witness-separation-evens");
  CheckAcc39 coding("even-coding-reduction");
  CheckAcc39 respect("restraint-respect");

  const std::size_t num_ceers = doc.config.at("num_ceers").get<std::size_t>();
  CeerEnumeration a_enum = ceer_enumeration_from_json(doc.config.at("base_ceer"));
  CeerEnumeration t_enum = ceer_enumeration_from_json(doc.config.at("universal_ceer"));
  std::sort(a_enum.collapses.begin(), a_enum.collapses.end(), [](const auto& a, const auto& b) {
    return std::tie(a[2], a[0], a[1]) < std::tie(b[2], b[0], b[1]);
  });
  std::sort(t_enum.collapses.begin(), t_enum.collapses.end(), [](const auto& a, const auto& b) {
    return std::tie(a[2], a[0], a[1]) < std::tie(b[2], b[0], b[1]);
  });

  struct ReqView {
    T39Kind kind;
    std::uint64_t l = 0;
    std::vector<std::uint64_t> d_params;
  };
  std::map<std::string, std::size_t> rank_of;
  std::vector<ReqView> reqs;
  for (const auto& rj : doc.config.at("requirements")) {
    ReqView rv;
    rv.kind = kind_from_string(rj.at("kind").get<std::string>());
    rv.l = rj.at("l").get<std::uint64_t>();
    rank_of[rj.at("name").get<std::string>()] = reqs.size();
    reqs.push_back(rv);
  }

  std::vector<VerifyUf> uf(num_ceers);
  VerifyUf a_uf;
  VerifyUf t_uf;
  std::set<Restraint> restraints;
  std::vector<std::uint64_t> even_bound(num_ceers, 0);  // max even/2 seen per ceer
  std::uint64_t a_bound = 0;

  const std::uint64_t total_stages =
      std::max<std::uint64_t>(doc.config.value("stages", std::uint64_t{0}),
                              doc.events.empty() ? 0 : doc.events.back().time.stage);

  auto end_stage = [&](std::uint64_t stage) {
    // Witness separation over the currently restrained numbers.
    for (std::uint64_t l = 0; l < num_ceers; ++l) {
      std::vector<const Restraint*> active;
      for (const auto& r : restraints) {
        if (r.ceer == l) active.push_back(&r);
      }
      for (std::size_t a = 0; a < active.size(); ++a) {
        for (std::size_t b = a + 1; b < active.size(); ++b) {
          if (active[a]->number == active[b]->number) continue;
          if (!uf[l].related(active[a]->number, active[b]->number)) continue;
          if (active[a]->owner != active[b]->owner) {
            std::ostringstream os;
            os << "stage " << stage << " ceer " << l << ": witnesses " << active[a]->number
               << " and " << active[b]->number << " of different requirements are related";
            cross.fail(os.str());
            continue;
          }
          // Same owner: must be two a-witnesses whose indices the universal
          // enumeration already relates.
          const ReqView& owner = reqs[active[a]->owner];
          auto idx_of = [&owner](std::uint64_t n) -> std::optional<std::size_t> {
            for (std::size_t idx = 0; idx < owner.d_params.size(); ++idx) {
              if (owner.d_params[idx] == n) return idx;
            }
            return std::nullopt;
          };
          auto ia = idx_of(active[a]->number);
          auto ib = idx_of(active[b]->number);
          if (owner.kind != T39Kind::D || !ia || !ib ||
              !t_uf.related(static_cast<std::uint64_t>(*ia), static_cast<std::uint64_t>(*ib))) {
            std::ostringstream os;
            os << "stage " << stage << " ceer " << l << ": related witnesses " << active[a]->number
               << "," << active[b]->number << " are not mirror-justified";
            mirror.fail(os.str());
          }
        }
      }
      for (const auto* r : active) {
        if (uf[l].class_has_even(r->number)) {
          std::ostringstream os;
          os << "stage " << stage << " ceer " << l << ": witness " << r->number
             << " is related to an even number";
          evens.fail(os.str());
        }
      }
    }
    // Even-coding: 2x ~ 2y in every ceer exactly when the base relates x,y.
    for (std::uint64_t l = 0; l < num_ceers; ++l) {
      std::uint64_t bound = std::max(a_bound, even_bound[l]);
      for (std::uint64_t x = 0; x <= bound; ++x) {
        for (std::uint64_t y = x + 1; y <= bound; ++y) {
          bool in_a = a_uf.related(x, y);
          bool in_e = uf[l].related(2 * x, 2 * y);
          if (in_a != in_e) {
            std::ostringstream os;
            os << "stage " << stage << " ceer " << l << ": even coding broken at (" << x << ","
               << y << "): base " << (in_a ? "relates" : "separates") << ", ceer "
               << (in_e ? "relates" : "separates");
            coding.fail(os.str());
          }
        }
      }
    }
  };

  std::size_t ev_idx = 0;
  std::size_t a_idx = 0;
  std::size_t t_idx = 0;
  for (std::uint64_t stage = 1; stage <= total_stages; ++stage) {
    while (a_idx < a_enum.collapses.size() && a_enum.collapses[a_idx][2] <= stage) {
      a_uf.unite(a_enum.collapses[a_idx][0], a_enum.collapses[a_idx][1]);
      a_bound = std::max({a_bound, a_enum.collapses[a_idx][0], a_enum.collapses[a_idx][1]});
      ++a_idx;
    }
    while (t_idx < t_enum.collapses.size() && t_enum.collapses[t_idx][2] <= stage) {
      t_uf.unite(t_enum.collapses[t_idx][0], t_enum.collapses[t_idx][1]);
      ++t_idx;
    }
    for (; ev_idx < doc.events.size() && doc.events[ev_idx].time.stage == stage; ++ev_idx) {
      const TraceEvent& ev = doc.events[ev_idx];
      if (ev.kind == "collapse") {
        std::uint64_t l = ev.data.at("ceer").get<std::uint64_t>();
        auto actor = rank_of.find(ev.by);
        for (const auto& pj : ev.data.at("pairs")) {
          std::uint64_t a = pj.at(0).get<std::uint64_t>();
          std::uint64_t b = pj.at(1).get<std::uint64_t>();
          if (actor != rank_of.end()) {
            // A requirement must not enlarge a class restrained by a
            // strictly-higher-priority requirement.
            std::uint64_t ra = uf[l].find(a);
            std::uint64_t rb = uf[l].find(b);
            if (ra != rb) {
              for (const auto& res : restraints) {
                if (res.ceer != l || res.owner >= actor->second) continue;
                std::uint64_t rr = uf[l].find(res.number);
                if (rr == ra || rr == rb) {
                  std::ostringstream os;
                  os << "stage " << stage << " ceer " << l << ": " << ev.by
                     << " merges the class of " << res.number << " restrained by higher priority";
                  respect.fail(os.str());
                }
              }
            }
          }
          uf[l].unite(a, b);
          if (a % 2 == 0) even_bound[l] = std::max(even_bound[l], a / 2);
          if (b % 2 == 0) even_bound[l] = std::max(even_bound[l], b / 2);
        }
      } else if (ev.kind == "restraint") {
        std::size_t rank = rank_of.at(ev.data.at("req").get<std::string>());
        Restraint res{rank, ev.data.at("ceer").get<std::uint64_t>(),
                      ev.data.at("number").get<std::uint64_t>()};
        if (ev.data.at("action").get<std::string>() == "add") {
          restraints.insert(res);
        } else {
          restraints.erase(res);
        }
      } else if (ev.kind == "param-assign") {
        const std::string param = ev.data.at("param").get<std::string>();
        if (param == "a") {
          std::size_t rank = rank_of.at(ev.data.at("req").get<std::string>());
          reqs[rank].d_params = ev.data.at("value").get<std::vector<std::uint64_t>>();
        }
      } else if (ev.kind == "param-cancel") {
        std::size_t rank = rank_of.at(ev.data.at("req").get<std::string>());
        reqs[rank].d_params.clear();
      }
    }
    end_stage(stage);
  }

  Report report;
  report.checks = {cross.result, mirror.result, evens.result, coding.result, respect.result};
  return report;
}

Report verify_t39(const T39State& state) { return verify_t39_trace(state.trace()); }

}  // namespace ceerbench
