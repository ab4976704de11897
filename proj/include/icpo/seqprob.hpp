#pragma once

#include <vector>

#include "icpo/errors.hpp"

namespace icpo {

// Floor on |mean log-prob|: a sequence score of exactly 0 would make the
// preference ratio L_j / L_k divide by zero.
inline constexpr double kLogProbFloor = 1e-8;

// One sampled trajectory. token_logprobs holds one entry per non-padding
// token (natural log scale); effective_length must match its size when set.
struct Response {
  int id = 0;  // group-local, 1-based
  std::vector<int> tokens;
  std::vector<double> token_logprobs;
  int effective_length = 0;
  bool answer_correct = false;
  bool format_ok = false;
};

struct SeqScore {
  int response_id = 0;
  double mean_logprob = 0.0;  // nats per token, always <= -kLogProbFloor
};

// Length-normalized sequence log-probability: arithmetic mean of the
// per-token log-probs, clamped to at most -kLogProbFloor.
SeqScore mean_logprob(const Response& r);

}  // namespace icpo
