// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "ceerbench/commands.hpp"
#include "ceerbench/fixtures.hpp"
#include "ceerbench/hsf.hpp"
#include "ceerbench/t21.hpp"
#include "ceerbench/t39.hpp"

namespace py = pybind11;
using namespace ceerbench;

namespace {

Parity parity_of(const std::string& s) {
  if (s == "even") return Parity::Even;
  if (s == "odd") return Parity::Odd;
  if (s == "any") return Parity::Any;
  throw std::invalid_argument("parity must be even, odd or any");
}

ReductionTable table_from_pairs(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& entries) {
  ReductionTable f;
  std::uint64_t tick = 0;
  for (const auto& [arg, value] : entries) f.define(arg, value, TimePoint{0, tick++});
  return f;
}

std::string run_t21_json(const std::string& family_json, std::uint64_t stages,
                         std::uint64_t k_bound, const std::string& free_parity) {
  OracleFamily fam = family_from_json(json_t::parse(family_json));
  T21Options opts;
  opts.k_bound = k_bound;
  opts.free_parity = parity_of(free_parity);
  T21PriorityList priority = t21_default_priority(fam, k_bound);
  T21State state = t21_init(std::move(fam), priority, opts);
  t21_run(state, stages);
  return state.trace().to_json().dump();
}

std::string run_t39_json(const std::string& family_json, const std::string& base_json,
                         const std::string& universal_json, std::uint64_t stages,
                         std::uint64_t num_ceers, std::uint64_t k_bound) {
  OracleFamily fam = family_from_json(json_t::parse(family_json));
  CeerEnumeration a = ceer_enumeration_from_json(json_t::parse(base_json));
  CeerEnumeration t = ceer_enumeration_from_json(json_t::parse(universal_json));
  T39Options opts;
  opts.k_bound = k_bound;
  T39PriorityList priority = t39_default_priority(fam, num_ceers, k_bound);
  T39State state = t39_init(std::move(a), std::move(t), std::move(fam), num_ceers, priority, opts);
  t39_run(state, stages);
  return state.trace().to_json().dump();
}

std::string verify_trace_json(const std::string& trace_json) {
  TraceDocument doc = TraceDocument::from_json(json_t::parse(trace_json));
  Report report = doc.scenario == "t21" ? verify_t21_trace(doc) : verify_t39_trace(doc);
  return report.to_json().dump();
}

}  // namespace

PYBIND11_MODULE(ceerbench, m) {
  m.doc() = "workbench for stage-built equivalence relations and their reductions";

  py::class_<StageCeer>(m, "StageCeer")
      .def(py::init(&StageCeer::identity))
      .def("collapse",
           [](StageCeer& c, const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs,
              const std::string& cause) {
             CollapseReport report = c.collapse(pairs, cause);
             return report.merged;
           },
           py::arg("pairs"), py::arg("cause") = "python")
      .def("related", [](const StageCeer& c, std::uint64_t x, std::uint64_t y) { return c.related(x, y); })
      .def("related_at",
           [](const StageCeer& c, std::uint64_t x, std::uint64_t y, std::uint64_t stage,
              std::uint64_t tick) { return c.related_at(x, y, TimePoint{stage, tick}); },
           py::arg("x"), py::arg("y"), py::arg("stage"), py::arg("tick") = 0)
      .def("class_members", &StageCeer::class_members)
      .def("fresh",
           [](StageCeer& c, const std::string& parity, std::uint64_t stage) {
             return c.fresh(parity_of(parity), stage);
           },
           py::arg("parity"), py::arg("stage"))
      .def("census", &StageCeer::census)
      .def_property_readonly("allocated_max", &StageCeer::allocated_max);

  py::class_<CeerView>(m, "CeerView")
      .def_static("identity", &CeerView::identity)
      .def_static("of", [](const StageCeer& c) { return CeerView::direct(c); }, py::keep_alive<0, 1>())
      .def_static("finite_k", &CeerView::finite_k)
      .def("related", &CeerView::related);

  m.def("uniform_join", &uniform_join);
  m.def("restrict_half",
        [](CeerView z, const std::string& parity) { return restrict_half(z, parity_of(parity)); });
  m.def("id_k", &id_k);

  m.def("pair", &pair_code);
  m.def("unpair", &unpair_code);

  py::class_<ReductionTable>(m, "ReductionTable")
      .def(py::init(&table_from_pairs), py::arg("entries"))
      .def("value", [](const ReductionTable& f, std::uint64_t x) { return f.value(x); })
      .def("domain", &ReductionTable::domain)
      .def("__len__", &ReductionTable::size);

  m.def("check_reduction",
        [](const ReductionTable& f, const CeerView& r, const CeerView& s,
           const std::vector<std::uint64_t>& domain) {
          return check_reduction(f, r, s, domain).to_string();
        });

  m.def("tau_prefix",
        [](const ReductionTable& f, std::uint64_t n, std::uint64_t h) {
          return tau_prefix(f, n, h).letters;
        });
  m.def("detect_period",
        [](const std::string& word) -> std::optional<std::pair<std::uint64_t, std::uint64_t>> {
          auto dec = detect_period(word);
          if (!dec) return std::nullopt;
          return std::make_pair(dec->preperiod_len, dec->period_len);
        });
  m.def("iterate", [](const ReductionTable& f, std::uint64_t n) { return iterate(f, n); });
  m.def("classify_cx_cy",
        [](const ReductionTable& f2, const std::vector<std::uint64_t>& sample, std::uint64_t h) {
          ClassSplit split = classify_cx_cy(f2, sample, h);
          py::dict out;
          out["cx"] = split.cx;
          out["cy"] = split.cy;
          out["undecided"] = split.undecided;
          return out;
        });
  m.def("id_to_coceer",
        [](const std::vector<std::pair<std::uint64_t, std::uint64_t>>& elems, std::uint64_t n,
           std::uint64_t budget) {
          CeSetTable w;
          for (const auto& [element, stage] : elems) w.elems.push_back({element, stage});
          CoceerEmbedding embed = id_to_coceer(w, n, budget);
          py::dict out;
          out["values"] = embed.values;
          out["stalled_at"] = embed.stalled_at;
          return out;
        },
        py::arg("elements"), py::arg("n"), py::arg("stage_budget"));

  m.def("run_t21", &run_t21_json, py::arg("family_json"), py::arg("stages"),
        py::arg("k_bound") = 2, py::arg("free_parity") = "odd");
  m.def("run_t39", &run_t39_json, py::arg("family_json"), py::arg("base_json") = "{}",
        py::arg("universal_json") = "{}", py::arg("stages") = 100, py::arg("num_ceers") = 2,
        py::arg("k_bound") = 1);
  m.def("verify_trace", &verify_trace_json, py::arg("trace_json"));
}
