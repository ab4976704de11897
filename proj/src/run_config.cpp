#include "icpo/run_config.hpp"

#include <cmath>

namespace icpo {

ScheduleSpec schedule_from(const RunConfig& cfg) {
  ScheduleSpec s;
  s.kind = schedule_kind_from_string(cfg.omega_schedule);
  s.omega_peak = cfg.omega_peak;
  s.omega_floor = cfg.omega_floor;
  s.omega_end = cfg.omega_end;
  s.warmup_fraction = cfg.warmup_fraction;
  s.total_steps = cfg.steps > 0 ? cfg.steps : 1;
  return s;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.algorithm != "grpo" && cfg.algorithm != "icpo") {
    throw ConfigError("algorithm", "must be grpo or icpo, got '" +
                                       cfg.algorithm + "'");
  }
  if (cfg.task != "modsum" && cfg.task != "multipath") {
    throw ConfigError("task", "must be modsum or multipath, got '" + cfg.task +
                                  "'");
  }
  if (cfg.scenario != "none" && cfg.scenario != "coarse" &&
      cfg.scenario != "noisy") {
    throw ConfigError("scenario", "must be none, coarse or noisy, got '" +
                                      cfg.scenario + "'");
  }
  if (cfg.group_size < 2) throw ConfigError("group_size", "must be >= 2");
  if (cfg.steps < 0) throw ConfigError("steps", "must be >= 0");
  if (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta)) {
    throw ConfigError("delta", "must be positive");
  }
  if (!(cfg.tau > 0.0) || !std::isfinite(cfg.tau)) {
    throw ConfigError("tau", "must be positive");
  }
  if (!(cfg.eps_clip > 0.0) || !(cfg.eps_clip < 1.0)) {
    throw ConfigError("eps_clip", "must lie in (0, 1)");
  }
  if (!(cfg.beta >= 0.0) || !std::isfinite(cfg.beta)) {
    throw ConfigError("beta", "must be >= 0");
  }
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw ConfigError("learning_rate", "must be positive");
  }
  if (!(cfg.temperature > 0.0) || !std::isfinite(cfg.temperature)) {
    throw ConfigError("temperature", "must be positive");
  }
  if (cfg.vocab_size < 2) throw ConfigError("vocab_size", "must be >= 2");
  if (cfg.max_len < 1) throw ConfigError("max_len", "must be >= 1");
  if (cfg.num_prompts < 1) throw ConfigError("num_prompts", "must be >= 1");
  if (!(cfg.noise_fraction >= 0.0) || !(cfg.noise_fraction <= 1.0)) {
    throw ConfigError("noise_fraction", "must lie in [0, 1]");
  }
  if (!(cfg.noise_magnitude > 0.0) || !std::isfinite(cfg.noise_magnitude)) {
    throw ConfigError("noise_magnitude", "must be positive");
  }
  if (cfg.inner_passes < 1) throw ConfigError("inner_passes", "must be >= 1");
  if (cfg.mini_batches < 1) throw ConfigError("mini_batches", "must be >= 1");
  if (cfg.steps > 0) validate_schedule(schedule_from(cfg));
}

}  // namespace icpo
