#include "icpo/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace icpo {

namespace {

void check_spec(const NoiseSpec& spec) {
  if (!(spec.magnitude > 0.0) || !std::isfinite(spec.magnitude)) {
    throw InvalidNoise("magnitude must be positive, got " +
                       std::to_string(spec.magnitude));
  }
  if (!(spec.fraction >= 0.0) || !(spec.fraction <= 1.0)) {
    throw InvalidNoise("fraction must lie in [0, 1], got " +
                       std::to_string(spec.fraction));
  }
  if (spec.clamp_lo > spec.clamp_hi) {
    throw InvalidNoise("clamp range is empty");
  }
}

}  // namespace

double perturb_reward(double r, bool selected, bool plus,
                      const NoiseSpec& spec) {
  check_spec(spec);
  if (!selected) return r;
  double v = plus ? r + spec.magnitude : r - spec.magnitude;
  return std::clamp(v, spec.clamp_lo, spec.clamp_hi);
}

std::vector<double> inject_noise(const std::vector<VerifiableReward>& rewards,
                                 const NoiseSpec& spec, RngStream& rng) {
  check_spec(spec);
  std::vector<double> out;
  out.reserve(rewards.size());
  for (const VerifiableReward& v : rewards) {
    bool selected = rng.uniform() < spec.fraction;
    bool plus = selected ? rng.uniform() < 0.5 : false;
    out.push_back(perturb_reward(v.r_verif, selected, plus, spec));
  }
  return out;
}

bool uniform_answers(const Group& g) {
  if (g.responses.empty()) return true;
  bool first = g.responses.front().answer_correct;
  for (const Response& r : g.responses) {
    if (r.answer_correct != first) return false;
  }
  return true;
}

std::vector<Group> coarse_filter(const std::vector<Group>& groups) {
  std::vector<Group> kept;
  for (const Group& g : groups) {
    if (uniform_answers(g)) kept.push_back(g);
  }
  return kept;
}

double coarse_shared_reward(const Group& g) {
  if (g.responses.empty()) throw EmptyGroup("empty group has no shared reward");
  double sum = 0.0;
  for (const Response& r : g.responses) {
    sum += verifiable_reward(r.answer_correct, r.format_ok).r_verif;
  }
  return sum / static_cast<double>(g.responses.size());
}

}  // namespace icpo
