#pragma once

#include <vector>

#include "icpo/seqprob.hpp"

namespace icpo {

// G responses to one prompt, the unit of advantage normalization. `rewards`
// optionally overrides the composite verifiable reward per response (same
// order as `responses`), e.g. after noise injection or coarse sharing; leave
// empty to derive rewards from the answer/format flags.
struct Group {
  long long group_id = 0;
  int prompt = 0;
  std::vector<Response> responses;
  std::vector<double> rewards;
};

// The reward used for training: the override when present, else the
// 0.9 * answer + 0.1 * format composite.
double group_reward(const Group& g, std::size_t k);

std::vector<double> group_rewards(const Group& g);

}  // namespace icpo
