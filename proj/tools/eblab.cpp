#include <iostream>

#include <CLI11.hpp>

#include "eblab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Error-bound regularity lab: estimators and equivalence checks on test fixtures"};
  app.require_subcommand(1);

  std::string config;
  std::uint64_t seed = 0;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "Run every estimator and claim check for a configuration");
  run->add_option("config", config, "Configuration file")->required();
  auto* run_seed = run->add_option("--seed", seed, "Override the sampling seed");
  auto* run_out = run->add_option("--out", out_dir, "Override the output directory");

  auto* trace = app.add_subcommand("trace", "Run only the proximal-gradient solver and write its trace");
  trace->add_option("config", config, "Configuration file")->required();
  auto* trace_seed = trace->add_option("--seed", seed, "Override the sampling seed");
  auto* trace_out = trace->add_option("--out", out_dir, "Override the output directory");

  app.add_subcommand("list-fixtures", "List registered fixtures");

  CLI11_PARSE(app, argc, argv);

  eblab::RunOverrides overrides;
  auto collect = [&](CLI::Option* s, CLI::Option* o) {
    if (s->count()) overrides.seed = seed;
    if (o->count()) overrides.output_dir = out_dir;
  };
  if (run->parsed()) {
    collect(run_seed, run_out);
    return eblab::run_experiment(config, overrides, std::cout, std::cerr);
  }
  if (trace->parsed()) {
    collect(trace_seed, trace_out);
    return eblab::run_trace(config, overrides, std::cout, std::cerr);
  }
  eblab::list_fixtures(std::cout);
  return 0;
}
