#include "icpo/advantage.hpp"

#include <cmath>
#include <string>

#include "icpo/preference.hpp"

namespace icpo {

double group_reward(const Group& g, std::size_t k) {
  if (!g.rewards.empty()) {
    if (g.rewards.size() != g.responses.size()) {
      throw ShapeMismatch("group " + std::to_string(g.group_id) + " carries " +
                          std::to_string(g.rewards.size()) + " rewards for " +
                          std::to_string(g.responses.size()) + " responses");
    }
    return g.rewards[k];
  }
  const Response& r = g.responses[k];
  return verifiable_reward(r.answer_correct, r.format_ok).r_verif;
}

std::vector<double> group_rewards(const Group& g) {
  std::vector<double> out;
  out.reserve(g.responses.size());
  for (std::size_t k = 0; k < g.responses.size(); ++k) {
    out.push_back(group_reward(g, k));
  }
  return out;
}

AdvantageVector normalize(const std::vector<double>& rewards,
                          AdvantageSource source) {
  if (rewards.empty()) throw EmptyGroup("cannot normalize an empty group");
  const double n = static_cast<double>(rewards.size());
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= n;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= n;
  double sd = std::sqrt(var);

  AdvantageVector a;
  a.source = source;
  a.group_mean = mean;
  a.group_std = sd;
  a.values.reserve(rewards.size());
  if (sd <= kStdFloor) {
    a.values.assign(rewards.size(), 0.0);
  } else {
    for (double r : rewards) a.values.push_back((r - mean) / sd);
  }
  return a;
}

AdvantageVector grpo_advantages(const Group& g) {
  return normalize(group_rewards(g), AdvantageSource::grpo);
}

std::vector<FusedReward> fused_rewards(const Group& g, double omega, double tau,
                                       double delta) {
  if (g.responses.empty()) throw EmptyGroup("cannot fuse an empty group");
  std::vector<SeqScore> scores;
  scores.reserve(g.responses.size());
  for (const Response& r : g.responses) scores.push_back(mean_logprob(r));
  Ranking ranking = rank_by_confidence(scores);
  std::vector<PreferenceScore> prefs = preference_scores(ranking, scores, delta);

  std::vector<FusedReward> fused;
  fused.reserve(g.responses.size());
  for (std::size_t k = 0; k < g.responses.size(); ++k) {
    FusedReward f = fuse(group_reward(g, k), prefs[k].s_p, omega, tau);
    f.response_id = g.responses[k].id;
    fused.push_back(f);
  }
  return fused;
}

AdvantageVector icpo_advantages(const Group& g, double omega, double tau,
                                double delta) {
  std::vector<FusedReward> fused = fused_rewards(g, omega, tau, delta);
  std::vector<double> finals;
  finals.reserve(fused.size());
  for (const FusedReward& f : fused) finals.push_back(f.r_final);
  return normalize(finals, AdvantageSource::icpo);
}

}  // namespace icpo
