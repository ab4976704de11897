#include "icpo/preference.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace icpo {

Ranking rank_by_confidence(const std::vector<SeqScore>& scores) {
  if (scores.empty()) throw EmptyGroup("cannot rank an empty group");
  std::unordered_map<int, double> by_id;
  by_id.reserve(scores.size());
  for (const auto& s : scores) {
    if (!std::isfinite(s.mean_logprob)) {
      throw InvalidLogProb("response " + std::to_string(s.response_id) +
                           ": non-finite mean_logprob");
    }
    if (!by_id.emplace(s.response_id, s.mean_logprob).second) {
      throw InvalidResponse("duplicate response id " +
                            std::to_string(s.response_id));
    }
  }
  Ranking r;
  r.group_size = static_cast<int>(scores.size());
  r.order.reserve(scores.size());
  for (const auto& s : scores) r.order.push_back(s.response_id);
  std::sort(r.order.begin(), r.order.end(), [&](int a, int b) {
    double la = by_id[a], lb = by_id[b];
    if (la != lb) return la < lb;
    return a < b;
  });
  return r;
}

PreferencePairSet build_pairs(const Ranking& ranking) {
  PreferencePairSet set;
  const auto& o = ranking.order;
  set.pairs.reserve(o.size() * (o.size() ? o.size() - 1 : 0) / 2);
  for (std::size_t i = 0; i < o.size(); ++i) {
    for (std::size_t j = i + 1; j < o.size(); ++j) {
      set.pairs.emplace_back(o[i], o[j]);
    }
  }
  return set;
}

std::vector<PreferenceScore> preference_scores(
    const Ranking& ranking, const std::vector<SeqScore>& scores, double delta) {
  if (delta <= 0.0 || !std::isfinite(delta)) {
    throw InvalidTemperature("delta must be positive, got " +
                             std::to_string(delta));
  }
  if (scores.empty()) throw EmptyGroup("cannot score an empty group");
  if (ranking.order.size() != scores.size()) {
    throw ShapeMismatch("ranking covers " +
                        std::to_string(ranking.order.size()) +
                        " responses, scores cover " +
                        std::to_string(scores.size()));
  }
  std::unordered_map<int, double> by_id;
  by_id.reserve(scores.size());
  for (const auto& s : scores) {
    if (s.mean_logprob >= 0.0 || !std::isfinite(s.mean_logprob)) {
      throw InvalidLogProb("response " + std::to_string(s.response_id) +
                           ": mean_logprob must be negative, got " +
                           std::to_string(s.mean_logprob));
    }
    by_id.emplace(s.response_id, s.mean_logprob);
  }
  const auto& o = ranking.order;
  for (int id : o) {
    if (by_id.find(id) == by_id.end()) {
      throw ShapeMismatch("ranking mentions id " + std::to_string(id) +
                          " absent from scores");
    }
  }
  const double l_last = by_id[o.back()];

  // Suffix ratio sums in rank order, then emit in input order.
  std::unordered_map<int, double> s_by_id;
  s_by_id.reserve(o.size());
  for (std::size_t i = 0; i < o.size(); ++i) {
    double lk = by_id[o[i]];
    double sum = 0.0;
    for (std::size_t j = i + 1; j < o.size(); ++j) sum += by_id[o[j]] / lk;
    s_by_id[o[i]] = delta * sum - delta * l_last;
  }
  std::vector<PreferenceScore> out;
  out.reserve(scores.size());
  for (const auto& s : scores) {
    out.push_back(PreferenceScore{s.response_id, s_by_id[s.response_id], delta});
  }
  return out;
}

}  // namespace icpo
