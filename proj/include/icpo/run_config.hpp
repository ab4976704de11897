#pragma once

#include <cstdint>
#include <string>

#include "icpo/reward_fusion.hpp"

namespace icpo {

// Flat run configuration; field names double as config-file keys.
struct RunConfig {
  std::string algorithm = "grpo";  // grpo | icpo
  std::string task = "modsum";     // modsum | multipath
  std::string scenario = "none";   // none | coarse | noisy
  int group_size = 5;
  long long steps = 100;
  std::uint64_t seed = 1;
  double delta = 0.4;
  double tau = 2.0;
  std::string omega_schedule = "warmup_decay";
  double omega_peak = 1.0;
  double omega_floor = 0.0;
  double omega_end = 0.1;
  double warmup_fraction = 0.4;
  double eps_clip = 0.2;
  double beta = 0.001;
  // Plain ascent on tabular logits; the surrogate averages per token, per
  // response and per group, so the step size is large by neural-net habits.
  double learning_rate = 5.0;
  double temperature = 1.0;
  int vocab_size = 8;
  int max_len = 6;
  int num_prompts = 32;
  double noise_fraction = 0.4;
  double noise_magnitude = 0.3;
  int inner_passes = 1;
  int mini_batches = 4;
  bool log_rollouts = false;
  std::string output_dir = ".";
};

// Throws ConfigError naming the offending field.
void validate_config(const RunConfig& cfg);

ScheduleSpec schedule_from(const RunConfig& cfg);

}  // namespace icpo
