// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "ceerbench/trace.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ceerbench {

json_t time_to_json(TimePoint t) { return json_t::array({t.stage, t.tick}); }

TimePoint time_from_json(const json_t& j) {
  return TimePoint{j.at(0).get<std::uint64_t>(), j.at(1).get<std::uint64_t>()};
}

json_t TraceEvent::to_json() const {
  json_t j;
  j["time"] = time_to_json(time);
  j["kind"] = kind;
  j["by"] = by;
  j["data"] = data;
  return j;
}

TraceEvent TraceEvent::from_json(const json_t& j) {
  TraceEvent ev;
  ev.time = time_from_json(j.at("time"));
  ev.kind = j.at("kind").get<std::string>();
  ev.by = j.at("by").get<std::string>();
  ev.data = j.at("data");
  return ev;
}

json_t TraceDocument::to_json() const {
  json_t j;
  j["format_version"] = format_version;
  j["scenario"] = scenario;
  j["config"] = config;
  json_t evs = json_t::array();
  for (const auto& ev : events) evs.push_back(ev.to_json());
  j["events"] = std::move(evs);
  j["summary"] = summary;
  return j;
}

TraceDocument TraceDocument::from_json(const json_t& j) {
  TraceDocument doc;
  doc.format_version = j.at("format_version").get<int>();
  if (doc.format_version != kTraceFormatVersion) {
    throw std::runtime_error("unsupported trace format version");
  }
  doc.scenario = j.at("scenario").get<std::string>();
  doc.config = j.at("config");
  for (const auto& ej : j.at("events")) doc.events.push_back(TraceEvent::from_json(ej));
  doc.summary = j.at("summary");
  return doc;
}

void TraceDocument::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << to_json().dump(1) << "\n";
}

TraceDocument TraceDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json_t j;
  in >> j;
  return from_json(j);
}

bool Report::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

const CheckResult* Report::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string Report::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "PASS" : "FAIL") << "  " << c.name;
    if (!c.passed) os << "  [" << c.violations << " violation(s); first: " << c.witness << "]";
    os << "\n";
  }
  return os.str();
}

json_t Report::to_json() const {
  json_t j;
  j["all_passed"] = all_passed();
  json_t arr = json_t::array();
  for (const auto& c : checks) {
    json_t cj;
    cj["name"] = c.name;
    cj["passed"] = c.passed;
    cj["violations"] = c.violations;
    cj["witness"] = c.witness;
    arr.push_back(std::move(cj));
  }
  j["checks"] = std::move(arr);
  return j;
}

}  // namespace ceerbench
