// Copyright 2026 The ceerbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ceerbench/commands.hpp"

int main(int argc, char** argv) {
  using namespace ceerbench;

  CLI::App app{"ceerbench: run, verify and analyze stage constructions over ceers"};
  app.require_subcommand(1);

  RunConfig config;
  std::string free_parity = "odd";

  CLI::App* run = app.add_subcommand("run", "run a construction scenario and write its trace");
  run->add_option("--scenario", config.scenario, "t21 | t39 | hsf")->required();
  run->add_option("--family", config.family_path, "oracle family fixture (t21/t39)");
  run->add_option("--stages", config.stages, "stages to run")->capture_default_str();
  run->add_option("--out", config.output_path, "output trace path");
  run->add_option("--k-bound", config.k_bound, "largest class index per requirement family")
      ->capture_default_str();
  run->add_option("--free-parity", free_parity, "image parity for untagged arguments (t21)")
      ->check(CLI::IsMember({"odd", "even"}))
      ->capture_default_str();
  run->add_option("--base-ceer", config.base_ceer_path, "base ceer enumeration (t39)");
  run->add_option("--universal-ceer", config.universal_ceer_path,
                  "universal-ceer stand-in enumeration (t39)");
  run->add_option("--num-ceers", config.num_ceers, "how many ceers to build (t39)")
      ->capture_default_str();
  run->add_option("--reduction", config.reduction_path, "reduction table fixture (hsf)");
  run->add_option("--sample", config.sample_spec, "sample spec, e.g. 0-16 (hsf)")
      ->capture_default_str();
  run->add_option("--horizon", config.horizon, "itinerary horizon (hsf)")->capture_default_str();

  std::string trace_path;
  CLI::App* verify = app.add_subcommand("verify", "replay a trace and audit its invariants");
  verify->add_option("trace", trace_path, "trace file to verify")->required();

  std::string reduction_path;
  std::string sample_spec = "0-16";
  std::uint64_t horizon = 16;
  std::string analyze_out;
  CLI::App* analyze = app.add_subcommand("analyze", "orbit analysis of a reduction table");
  analyze->add_option("--reduction", reduction_path, "reduction table fixture")->required();
  analyze->add_option("--sample", sample_spec, "sample spec, e.g. 0-16")->capture_default_str();
  analyze->add_option("--horizon", horizon, "itinerary horizon")->capture_default_str();
  analyze->add_option("--out", analyze_out, "also write a JSON report here");

  std::string family_path;
  CLI::App* validate = app.add_subcommand("validate", "check an oracle family fixture");
  validate->add_option("--family", family_path, "family fixture")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  config.free_parity = free_parity == "even" ? Parity::Even : Parity::Odd;

  if (run->parsed()) return cmd_run(config, std::cout);
  if (verify->parsed()) return cmd_verify(trace_path, std::cout);
  if (analyze->parsed()) return cmd_analyze(reduction_path, sample_spec, horizon, std::cout, analyze_out);
  if (validate->parsed()) return cmd_validate(family_path, std::cout);
  return kExitConfigError;
}
