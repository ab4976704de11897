#pragma once

#include <utility>
#include <vector>

#include "icpo/seqprob.hpp"

namespace icpo {

// Response ids sorted ascending by mean_logprob: lowest-confidence first,
// highest-confidence last. Ties fall back to the smaller id.
struct Ranking {
  std::vector<int> order;
  int group_size = 0;
};

// All ordered pairs (earlier-ranked, later-ranked); |pairs| = G*(G-1)/2.
struct PreferencePairSet {
  std::vector<std::pair<int, int>> pairs;
};

struct PreferenceScore {
  int response_id = 0;
  double s_p = 0.0;
  double delta = 0.0;
};

Ranking rank_by_confidence(const std::vector<SeqScore>& scores);

PreferencePairSet build_pairs(const Ranking& ranking);

// S_k = delta * sum over responses j ranked after k of (L_j / L_k)
//       - delta * L_last, with L the mean log-probs and L_last the score of
// the last-ranked (highest-confidence) response. Results are returned in the
// same order as `scores`.
std::vector<PreferenceScore> preference_scores(
    const Ranking& ranking, const std::vector<SeqScore>& scores, double delta);

}  // namespace icpo
