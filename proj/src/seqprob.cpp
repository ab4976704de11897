#include "icpo/seqprob.hpp"

#include <cmath>
#include <string>

namespace icpo {

SeqScore mean_logprob(const Response& r) {
  if (r.token_logprobs.empty()) {
    throw InvalidResponse("response " + std::to_string(r.id) +
                          ": empty token_logprobs");
  }
  if (r.effective_length != 0 &&
      r.effective_length != static_cast<int>(r.token_logprobs.size())) {
    throw InvalidResponse("response " + std::to_string(r.id) +
                          ": effective_length " +
                          std::to_string(r.effective_length) +
                          " does not match token_logprobs size " +
                          std::to_string(r.token_logprobs.size()));
  }
  double sum = 0.0;
  for (double lp : r.token_logprobs) {
    if (!std::isfinite(lp) || lp > 0.0) {
      throw InvalidLogProb("response " + std::to_string(r.id) +
                           ": token log-prob " + std::to_string(lp) +
                           " is positive or non-finite");
    }
    sum += lp;
  }
  double mean = sum / static_cast<double>(r.token_logprobs.size());
  if (mean > -kLogProbFloor) mean = -kLogProbFloor;
  return SeqScore{r.id, mean};
}

}  // namespace icpo
