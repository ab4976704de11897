#pragma once

#include <cstdint>
#include <vector>

#include "icpo/group.hpp"
#include "icpo/reward_fusion.hpp"
#include "icpo/rng.hpp"

namespace icpo {

struct NoiseSpec {
  double fraction = 0.4;   // per-response selection probability
  double magnitude = 0.3;  // +/- perturbation size
  double clamp_lo = 0.0;
  double clamp_hi = 1.0;
  std::uint64_t stream_id = 0;
};

// One response's perturbation, deterministic given the two decisions.
double perturb_reward(double r, bool selected, bool plus, const NoiseSpec& spec);

// Each reward is independently selected with probability spec.fraction, gets
// +/- spec.magnitude with a fair sign, and is clamped to the spec range. Two
// uniform draws per selected response (selection then sign), one otherwise.
std::vector<double> inject_noise(const std::vector<VerifiableReward>& rewards,
                                 const NoiseSpec& spec, RngStream& rng);

bool uniform_answers(const Group& g);

// Retains exactly the groups whose answer flags are all-true or all-false.
std::vector<Group> coarse_filter(const std::vector<Group>& groups);

// Group-shared reward for a retained coarse group: the mean of the
// per-response composites, so within-group differences carry no signal.
double coarse_shared_reward(const Group& g);

}  // namespace icpo
