#pragma once

#include <cstdint>
#include <string>

#include "icpo/errors.hpp"

namespace icpo {

struct VerifiableReward {
  int response_id = 0;
  double r_answer = 0.0;
  double r_format = 0.0;
  double r_verif = 0.0;  // 0.9 * r_answer + 0.1 * r_format
};

struct FusedReward {
  int response_id = 0;
  double bonus = 0.0;    // min(s_p, |r_verif| / tau)
  double r_final = 0.0;  // r_verif + omega * bonus
  double tau = 0.0;
  double omega = 0.0;
};

enum class ScheduleKind { no_decay, linear_decay, warmup_retention, warmup_decay };

// Bonus-weight schedule omega(t) over t in [0, total_steps].
//   no_decay:         constant omega_peak.
//   linear_decay:     linear from omega_peak at 0 to omega_end at T.
//   warmup_retention: inverse-cosine rise omega_floor -> omega_peak over
//                     T_w = round(warmup_fraction * T) steps, then constant.
//   warmup_decay:     same rise, then linear to omega_end at T.
struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::warmup_decay;
  double omega_peak = 1.0;
  double omega_floor = 0.0;
  double omega_end = 0.1;
  double warmup_fraction = 0.4;
  long long total_steps = 1;
};

VerifiableReward verifiable_reward(bool answer_correct, bool format_ok);

FusedReward fuse(double r_verif, double s_p, double omega, double tau);

ScheduleKind schedule_kind_from_string(const std::string& name);
std::string schedule_kind_to_string(ScheduleKind kind);

// Throws ConfigError on out-of-range fields; only fields the kind uses are
// constrained.
void validate_schedule(const ScheduleSpec& spec);

long long warmup_steps(const ScheduleSpec& spec);

double omega_at(const ScheduleSpec& spec, long long t);

}  // namespace icpo
