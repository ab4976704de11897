#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "icpo/run_config.hpp"
#include "icpo/trainer.hpp"

namespace icpo {

// Flat `key = value` text with `#` comments. Unknown keys and malformed
// values raise ConfigError naming the key.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

// Every key spelled out (defaults included), parse-back stable at full
// precision.
std::string resolved_config_text(const RunConfig& cfg);

// Header `step,omega,mean_reward,accuracy,entropy,kl,mean_abs_advantage`,
// one row per step, doubles at 17 significant digits.
std::string format_metrics_csv(const RunMetrics& metrics);

std::string format_rollout_json(const RolloutRecord& rr);

// Exit codes: 0 success, 1 validation failure (usage errors are the CLI
// wrapper's concern).
int cli_replay_appendix(std::ostream& out);

int cli_score(const std::string& input_path, const std::string& output_path,
              double delta, double tau, double omega, std::ostream& err);

int cli_train(const std::string& config_path, bool force_log_rollouts,
              const std::string& output_dir_override, std::ostream& err);

int cli_perturb(const std::string& input_path, const std::string& output_path,
                double fraction, double magnitude, std::uint64_t seed,
                std::ostream& err);

}  // namespace icpo
