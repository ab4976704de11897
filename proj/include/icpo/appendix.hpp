#pragma once

#include <string>
#include <vector>

#include "icpo/group.hpp"

namespace icpo {

// Bundled worked-example groups (G = 5) with reference values to reproduce.
// Fixtures 1 and 2 are clean groups; fixture 3 reuses fixture 1's log-probs
// with noise-perturbed rewards.
struct WorkedGroup {
  std::string name;
  double delta = 0.4;
  double tau = 2.0;
  double omega = 1.0;
  std::vector<double> mean_logprobs;    // by response id 1..5
  std::vector<bool> answer;
  std::vector<bool> format;
  std::vector<double> reward_override;  // noisy rewards; empty for clean
  std::vector<double> ref_scores;
  std::vector<double> ref_fused;
  std::vector<double> ref_grpo_adv;
  std::vector<double> ref_icpo_adv;
};

const std::vector<WorkedGroup>& worked_groups();

// Builds the Group for a fixture (single-token responses carrying the fixture
// mean log-probs).
Group worked_group_as_group(const WorkedGroup& wg);

struct ReplayCheck {
  std::string label;
  double computed = 0.0;
  double expected = 0.0;
  double abs_err = 0.0;
  bool ok = false;
};

struct ReplayReport {
  std::vector<ReplayCheck> checks;
  std::vector<std::string> notes;  // documented reference discrepancies
  bool all_ok = false;
  std::string text;
};

// Replays every fixture end-to-end and compares against the reference values
// at the given absolute tolerance. The noisy fixture's advantage row is
// checked per-step (normalizing the reference fused vector) because its
// reference fused reward for response 5 is internally inconsistent; the
// pipeline value is reported alongside as a note, never hidden.
ReplayReport replay_appendix(double tolerance = 1e-3);

}  // namespace icpo
