// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "ceerbench/fixtures.hpp"

#include <algorithm>
#include <fstream>

namespace ceerbench {

StageCeer CeerEnumeration::replay_to(std::uint64_t stage) const {
  StageCeer ceer = StageCeer::identity();
  for (const auto& [x, y, st] : collapses) {
    if (st <= stage) ceer.collapse({{x, y}}, "enumeration");
  }
  return ceer;
}

std::uint64_t CeerEnumeration::mentioned_max(std::uint64_t stage) const {
  std::uint64_t out = 0;
  for (const auto& [x, y, st] : collapses) {
    if (st <= stage) out = std::max({out, x, y});
  }
  return out;
}

json_t load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FixtureError("cannot open: " + path);
  json_t j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw FixtureError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

void save_json_file(const json_t& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FixtureError("cannot open for writing: " + path);
  out << j.dump(1) << "\n";
}

json_t family_to_json(const OracleFamily& fam) {
  json_t j;
  j["name"] = fam.name;
  j["phi_count"] = fam.phis.size();
  j["we_count"] = fam.wes.size();
  json_t phis = json_t::array();
  for (std::size_t idx = 0; idx < fam.phis.size(); ++idx) {
    for (const auto& t : fam.phis[idx].triples) {
      phis.push_back(json_t::array({idx, t.input, t.output, t.converges_at}));
    }
  }
  j["phis"] = std::move(phis);
  json_t wes = json_t::array();
  for (std::size_t idx = 0; idx < fam.wes.size(); ++idx) {
    for (const auto& e : fam.wes[idx].elems) {
      wes.push_back(json_t::array({idx, e.element, e.enumerated_at}));
    }
  }
  j["wes"] = std::move(wes);
  return j;
}

OracleFamily family_from_json(const json_t& j) {
  try {
    OracleFamily fam;
    fam.name = j.value("name", "");
    std::size_t phi_count = 0;
    std::size_t we_count = 0;
    for (const auto& row : j.value("phis", json_t::array())) {
      phi_count = std::max<std::size_t>(phi_count, row.at(0).get<std::size_t>() + 1);
    }
    for (const auto& row : j.value("wes", json_t::array())) {
      we_count = std::max<std::size_t>(we_count, row.at(0).get<std::size_t>() + 1);
    }
    phi_count = std::max<std::size_t>(phi_count, j.value("phi_count", std::size_t{0}));
    we_count = std::max<std::size_t>(we_count, j.value("we_count", std::size_t{0}));
    fam.phis.resize(phi_count);
    fam.wes.resize(we_count);
    for (const auto& row : j.value("phis", json_t::array())) {
      fam.phis[row.at(0).get<std::size_t>()].triples.push_back(
          {row.at(1).get<std::uint64_t>(), row.at(2).get<std::uint64_t>(),
           row.at(3).get<std::uint64_t>()});
    }
    for (const auto& row : j.value("wes", json_t::array())) {
      fam.wes[row.at(0).get<std::size_t>()].elems.push_back(
          {row.at(1).get<std::uint64_t>(), row.at(2).get<std::uint64_t>()});
    }
    return fam;
  } catch (const FixtureError&) {
    throw;
  } catch (const std::exception& e) {
    throw FixtureError(std::string("malformed family: ") + e.what());
  }
}

OracleFamily load_family(const std::string& path) {
  OracleFamily fam = family_from_json(load_json_file(path));
  Verdict verdict = validate_family(fam);
  if (!verdict.holds()) throw FixtureError("invalid family " + path + ": " + verdict.to_string());
  return fam;
}

void save_family(const OracleFamily& fam, const std::string& path) {
  save_json_file(family_to_json(fam), path);
}

json_t ceer_enumeration_to_json(const CeerEnumeration& ce) {
  json_t j;
  j["name"] = ce.name;
  json_t rows = json_t::array();
  for (const auto& [x, y, st] : ce.collapses) rows.push_back(json_t::array({x, y, st}));
  j["collapses"] = std::move(rows);
  return j;
}

CeerEnumeration ceer_enumeration_from_json(const json_t& j) {
  try {
    CeerEnumeration ce;
    ce.name = j.value("name", "");
    for (const auto& row : j.value("collapses", json_t::array())) {
      ce.collapses.push_back({row.at(0).get<std::uint64_t>(), row.at(1).get<std::uint64_t>(),
                              row.at(2).get<std::uint64_t>()});
    }
    return ce;
  } catch (const std::exception& e) {
    throw FixtureError(std::string("malformed ceer enumeration: ") + e.what());
  }
}

CeerEnumeration load_ceer_enumeration(const std::string& path) {
  return ceer_enumeration_from_json(load_json_file(path));
}

void save_ceer_enumeration(const CeerEnumeration& ce, const std::string& path) {
  save_json_file(ceer_enumeration_to_json(ce), path);
}

ReductionTable reduction_table_from_json(const json_t& j) {
  try {
    PartialFnTable table;
    for (const auto& row : j.value("entries", json_t::array())) {
      table.triples.push_back({row.at(0).get<std::uint64_t>(), row.at(1).get<std::uint64_t>(),
                               row.at(2).get<std::uint64_t>()});
    }
    return to_reduction_table(table);
  } catch (const std::exception& e) {
    throw FixtureError(std::string("malformed reduction table: ") + e.what());
  }
}

json_t reduction_table_to_json(const ReductionTable& table, const std::string& name) {
  json_t j;
  j["name"] = name;
  json_t rows = json_t::array();
  for (const auto& [arg, entry] : table.entries()) {
    rows.push_back(json_t::array({arg, entry.value, entry.defined_at.stage}));
  }
  j["entries"] = std::move(rows);
  return j;
}

ReductionTable load_reduction_table(const std::string& path) {
  return reduction_table_from_json(load_json_file(path));
}

}  // namespace ceerbench
