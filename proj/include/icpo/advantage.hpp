#pragma once

#include <vector>

#include "icpo/group.hpp"
#include "icpo/reward_fusion.hpp"

namespace icpo {

// Below this population standard deviation a group is treated as degenerate
// and every advantage is exactly zero.
inline constexpr double kStdFloor = 1e-6;

enum class AdvantageSource { grpo, icpo };

struct AdvantageVector {
  std::vector<double> values;
  AdvantageSource source = AdvantageSource::grpo;
  double group_mean = 0.0;
  double group_std = 0.0;  // population std (divide by G)
};

// A_k = (R_k - mean) / std with the population standard deviation; all zeros
// when std <= kStdFloor.
AdvantageVector normalize(const std::vector<double>& rewards,
                          AdvantageSource source = AdvantageSource::grpo);

// Normalizes the group's verifiable rewards (or their override).
AdvantageVector grpo_advantages(const Group& g);

// Runs the full scoring pipeline (mean log-probs -> confidence ranking ->
// preference scores -> clip-bounded fusion) and normalizes the fused rewards.
AdvantageVector icpo_advantages(const Group& g, double omega, double tau,
                                double delta);

// Fused rewards as used by icpo_advantages, exposed for reports and logs.
std::vector<FusedReward> fused_rewards(const Group& g, double omega, double tau,
                                       double delta);

}  // namespace icpo
