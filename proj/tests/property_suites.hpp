// Randomized invariant suites shared by the unit tests and the acceptance
// runner. Each suite returns the number of cases exercised and the number
// that violated the invariant; a healthy build reports zero violations.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "icpo/advantage.hpp"
#include "icpo/preference.hpp"
#include "icpo/reward_fusion.hpp"
#include "icpo/rng.hpp"
#include "icpo/scenarios.hpp"
#include "icpo/seqprob.hpp"

namespace suites {

struct SuiteResult {
  long long cases = 0;
  long long violations = 0;
};

inline std::vector<icpo::SeqScore> random_scores(icpo::RngStream& rng, int G) {
  std::vector<icpo::SeqScore> scores(G);
  for (int k = 0; k < G; ++k) {
    scores[k].response_id = k + 1;
    scores[k].mean_logprob = -(1e-7 + rng.uniform() * 3.0);
  }
  return scores;
}

// Every preference score is non-negative and finite.
inline SuiteResult preference_nonnegative(std::uint64_t seed, int cases) {
  SuiteResult res;
  icpo::RngStream rng(seed);
  for (int c = 0; c < cases; ++c) {
    int G = 1 + static_cast<int>(rng.uniform() * 9);
    double delta = 1e-3 + rng.uniform() * 2.0;
    auto scores = random_scores(rng, G);
    auto ranking = icpo::rank_by_confidence(scores);
    auto prefs = icpo::preference_scores(ranking, scores, delta);
    bool ok = true;
    for (const auto& p : prefs) ok = ok && std::isfinite(p.s_p) && p.s_p >= 0.0;
    ++res.cases;
    res.violations += ok ? 0 : 1;
  }
  return res;
}

// The highest-confidence (last-ranked) response's score is exactly
// -delta times its own mean log-probability.
inline SuiteResult last_rank_identity(std::uint64_t seed, int cases) {
  SuiteResult res;
  icpo::RngStream rng(seed);
  for (int c = 0; c < cases; ++c) {
    int G = 1 + static_cast<int>(rng.uniform() * 9);
    double delta = 1e-3 + rng.uniform() * 2.0;
    auto scores = random_scores(rng, G);
    auto ranking = icpo::rank_by_confidence(scores);
    auto prefs = icpo::preference_scores(ranking, scores, delta);
    int last_id = ranking.order.back();
    bool ok = false;
    for (std::size_t k = 0; k < scores.size(); ++k) {
      if (prefs[k].response_id != last_id) continue;
      double expect = -delta * scores[k].mean_logprob;
      ok = std::abs(prefs[k].s_p - expect) <= 1e-12 * std::max(1.0, expect);
    }
    ++res.cases;
    res.violations += ok ? 0 : 1;
  }
  return res;
}

// The fused bonus never exceeds the clip bound |r|/tau, so the fused reward
// stays within omega * |r| / tau of the base reward.
inline SuiteResult clip_dominance(std::uint64_t seed, int cases) {
  SuiteResult res;
  icpo::RngStream rng(seed);
  for (int c = 0; c < cases; ++c) {
    double r = rng.uniform() * 2.5 - 1.0;
    double s_p = rng.uniform() * 10.0;
    double omega = rng.uniform() * 3.0;
    double tau = 0.1 + rng.uniform() * 5.0;
    icpo::FusedReward f = icpo::fuse(r, s_p, omega, tau);
    double bound = std::abs(r) / tau;
    bool ok = f.bonus <= s_p + 1e-12 && f.bonus <= bound + 1e-12 &&
              std::abs(f.r_final - r) <= omega * bound + 1e-12 &&
              std::abs(f.r_final - (r + omega * f.bonus)) <= 1e-12;
    ++res.cases;
    res.violations += ok ? 0 : 1;
  }
  return res;
}

// Adding a constant to every reward leaves the normalized advantages
// unchanged.
inline SuiteResult shift_invariance(std::uint64_t seed, int cases) {
  SuiteResult res;
  icpo::RngStream rng(seed);
  for (int c = 0; c < cases; ++c) {
    int G = 2 + static_cast<int>(rng.uniform() * 8);
    double shift = rng.uniform() * 20.0 - 10.0;
    std::vector<double> rewards(G), shifted(G);
    for (int k = 0; k < G; ++k) {
      rewards[k] = rng.uniform() * 10.0 - 5.0;
      shifted[k] = rewards[k] + shift;
    }
    auto a = icpo::normalize(rewards);
    auto b = icpo::normalize(shifted);
    bool ok = true;
    for (int k = 0; k < G; ++k) {
      ok = ok && std::abs(a.values[k] - b.values[k]) <= 1e-9;
    }
    ++res.cases;
    res.violations += ok ? 0 : 1;
  }
  return res;
}

// Injected noise never pushes a reward outside the clamp interval.
inline SuiteResult noise_clamp(std::uint64_t seed, int cases) {
  SuiteResult res;
  icpo::RngStream rng(seed);
  for (int c = 0; c < cases; ++c) {
    int G = 1 + static_cast<int>(rng.uniform() * 12);
    std::vector<icpo::VerifiableReward> rewards(G);
    for (auto& v : rewards) v.r_verif = rng.uniform();
    icpo::NoiseSpec spec;
    spec.fraction = rng.uniform();
    spec.magnitude = 1e-3 + rng.uniform() * 1.5;
    icpo::RngStream noise(icpo::stream_seed(seed, 1, static_cast<std::uint64_t>(c)));
    auto out = icpo::inject_noise(rewards, spec, noise);
    bool ok = true;
    for (double r : out) ok = ok && r >= spec.clamp_lo && r <= spec.clamp_hi;
    ++res.cases;
    res.violations += ok ? 0 : 1;
  }
  return res;
}

// Exhaustive sweep of the 2^5 answer-flag patterns: the coarse filter keeps
// exactly the two uniform patterns, independent of the other response fields.
inline SuiteResult coarse_exhaustive(std::uint64_t seed, int repeats) {
  SuiteResult res;
  icpo::RngStream rng(seed);
  for (int rep = 0; rep < repeats; ++rep) {
    std::vector<icpo::Group> groups;
    for (int mask = 0; mask < 32; ++mask) {
      icpo::Group g;
      g.group_id = mask;
      for (int k = 0; k < 5; ++k) {
        icpo::Response r;
        r.id = k + 1;
        r.tokens = {0};
        r.token_logprobs = {-(1e-6 + rng.uniform())};
        r.answer_correct = (mask >> k) & 1;
        r.format_ok = rng.uniform() < 0.5;
        g.responses.push_back(std::move(r));
      }
      groups.push_back(std::move(g));
    }
    auto kept = icpo::coarse_filter(groups);
    bool filter_ok = kept.size() == 2;
    for (const icpo::Group& g : kept) {
      filter_ok = filter_ok && (g.group_id == 0 || g.group_id == 31);
    }
    for (int mask = 0; mask < 32; ++mask) {
      bool uniform = mask == 0 || mask == 31;
      bool ok = filter_ok &&
                icpo::uniform_answers(groups[mask]) == uniform;
      ++res.cases;
      res.violations += ok ? 0 : 1;
    }
  }
  return res;
}

}  // namespace suites
