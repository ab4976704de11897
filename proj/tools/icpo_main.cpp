#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "icpo/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ICPO/GRPO reward-advantage pipeline and desk-scale trainer"};
  app.require_subcommand(1);

  auto* replay = app.add_subcommand(
      "replay-appendix", "replay the bundled worked examples against their "
                         "reference values");

  std::string score_in, score_out;
  double delta = 0.4, tau = 2.0, omega = 1.0;
  auto* score = app.add_subcommand(
      "score", "score line-delimited response groups (preference scores, "
               "fused rewards, advantages)");
  score->add_option("-i,--input", score_in, "input JSONL file")->required();
  score->add_option("-o,--output", score_out, "output JSONL file")->required();
  score->add_option("--delta", delta, "preference temperature (default 0.4)");
  score->add_option("--tau", tau, "bonus clip divisor (default 2.0)");
  score->add_option("--omega", omega, "bonus weight (default 1.0)");

  std::string config_path, output_dir;
  bool log_rollouts = false;
  auto* train = app.add_subcommand("train", "run a training loop from a config file");
  train->add_option("config", config_path, "key = value config file")->required();
  train->add_flag("--log-rollouts", log_rollouts, "also write rollouts.jsonl");
  train->add_option("--output-dir", output_dir, "override the config's output_dir");

  std::string perturb_in, perturb_out;
  double fraction = 0.4, magnitude = 0.3;
  std::uint64_t seed = 1;
  auto* perturb = app.add_subcommand(
      "perturb", "apply reward noise to a score-format JSONL file");
  perturb->add_option("-i,--input", perturb_in, "input JSONL file")->required();
  perturb->add_option("-o,--output", perturb_out, "output JSONL file")->required();
  perturb->add_option("--fraction", fraction, "selection probability (default 0.4)");
  perturb->add_option("--magnitude", magnitude, "perturbation size (default 0.3)");
  perturb->add_option("--seed", seed, "noise stream seed (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (replay->parsed()) return icpo::cli_replay_appendix(std::cout);
  if (score->parsed()) {
    return icpo::cli_score(score_in, score_out, delta, tau, omega, std::cerr);
  }
  if (train->parsed()) {
    return icpo::cli_train(config_path, log_rollouts, output_dir, std::cerr);
  }
  if (perturb->parsed()) {
    return icpo::cli_perturb(perturb_in, perturb_out, fraction, magnitude,
                             seed, std::cerr);
  }
  return 2;
}
