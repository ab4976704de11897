#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "icpo/advantage.hpp"
#include "icpo/group.hpp"
#include "icpo/rng.hpp"
#include "icpo/run_config.hpp"

namespace icpo {

// Tabular autoregressive policy. A conditioning state is (prompt, position,
// previous token); previous token vocab_size stands for begin-of-sequence.
// Three logit tables share one layout: the trainable current table, a
// reference copy frozen at construction, and an old-policy snapshot refreshed
// via snapshot_old().
class PolicyTable {
 public:
  PolicyTable(int num_prompts, int vocab_size, int max_len);

  // Random logits in [-scale, scale] copied into all three tables; for tests.
  static PolicyTable random(int num_prompts, int vocab_size, int max_len,
                            RngStream& rng, double scale);

  int num_prompts() const { return num_prompts_; }
  int vocab_size() const { return vocab_size_; }
  int max_len() const { return max_len_; }
  int bos() const { return vocab_size_; }
  std::size_t num_states() const;
  std::size_t table_size() const;

  std::size_t state_index(int prompt, int pos, int prev) const;

  std::vector<double>& logits() { return theta_; }
  const std::vector<double>& logits() const { return theta_; }
  const std::vector<double>& ref_logits() const { return ref_; }
  const std::vector<double>& old_logits() const { return old_; }

  void snapshot_old() { old_ = theta_; }

  // Softmax row over the V next tokens of `table` at `state`.
  std::vector<double> probs(const std::vector<double>& table, std::size_t state,
                            double temperature = 1.0) const;

 private:
  int num_prompts_;
  int vocab_size_;
  int max_len_;
  std::vector<double> theta_;
  std::vector<double> ref_;
  std::vector<double> old_;
};

// Synthetic verifiable task over token sequences. The payload of a response
// is every token before the first end token; format_ok means the end token
// was emitted. Tasks:
//   modsum:    prompt p encodes digits a = p mod V, b = (p / V) mod V; the
//              payload token ids must sum to (a + b) mod V.
//   multipath: prompt p has difficulty k_p = 2 + (p mod 3) distinct correct
//              two-token payloads (i, (p + i) mod (V - 1)) for i < k_p, so
//              several correct prefixes compete.
struct TaskSpec {
  std::string name;
  int num_prompts = 0;
  int vocab_size = 0;
  int max_len = 0;
  int end_token = 0;
  std::vector<int> difficulty;  // multipath: correct payloads per prompt

  std::vector<int> payload(const std::vector<int>& tokens) const;
  // (answer_correct, format_ok); deterministic and total.
  std::pair<bool, bool> verify(int prompt, const std::vector<int>& tokens) const;
};

TaskSpec make_task(const std::string& name, int num_prompts, int vocab_size,
                   int max_len);

// G responses sampled token-by-token from the old-policy table at the given
// temperature; recorded token_logprobs are the untempered old-policy values.
Group sample_group(const PolicyTable& policy, const TaskSpec& task, int prompt,
                   int G, double temperature, RngStream& rng);

struct SurrogateResult {
  double objective = 0.0;    // policy_term - beta * kl_term
  double policy_term = 0.0;  // per-token averaged clipped-ratio term
  double kl_term = 0.0;      // per-token averaged exact KL(current || ref)
  std::vector<double> gradient;  // d objective / d logits, table layout
};

// Clipped-ratio objective with exact per-state KL penalty, averaged per token
// within a response, per response within a group, and across groups. Ratios
// compare the current table against the recorded old-policy log-probs.
SurrogateResult surrogate_objective(const std::vector<Group>& groups,
                                    const std::vector<AdvantageVector>& advantages,
                                    const PolicyTable& policy,
                                    double eps_clip, double beta);

enum class WhichTable { current, old, ref };

// Mean Shannon entropy (nats) over the given conditioning states.
double mean_entropy(const PolicyTable& policy, WhichTable table,
                    const std::vector<std::size_t>& states);

double policy_entropy(const PolicyTable& policy,
                      const std::vector<std::size_t>& states);

// Mean exact KL(p-table || q-table) over the given conditioning states.
double mean_kl(const PolicyTable& policy, WhichTable p, WhichTable q,
               const std::vector<std::size_t>& states);

// Distinct conditioning states visited by the groups' responses, ascending.
std::vector<std::size_t> visited_states(const PolicyTable& policy,
                                        const std::vector<Group>& groups);

struct StepRecord {
  long long step = 0;
  double omega = 0.0;
  double mean_reward = 0.0;
  double accuracy = 0.0;
  double entropy = 0.0;
  double kl = 0.0;
  double mean_abs_advantage = 0.0;
};

struct RunMetrics {
  std::vector<StepRecord> steps;
};

// One group's rollout, advantage, and retention outcome; consumed by the
// optional per-group sink (the CLI serializes these to rollouts.jsonl).
struct RolloutRecord {
  long long step = 0;
  int prompt = 0;
  bool retained = true;
  double omega = 0.0;
  Group group;                    // rewards filled as trained on
  std::vector<double> advantages;  // empty when not retained
  std::vector<double> s_p;         // icpo only
  std::vector<double> r_final;     // icpo only
};

class Trainer {
 public:
  explicit Trainer(const RunConfig& cfg);

  // Runs one outer step (1-based): snapshot the old policy, sample a group
  // per prompt, apply the scenario transform, normalize advantages, take the
  // configured mini-batch ascent passes, and append one metrics row.
  StepRecord run_step(long long step);

  RunMetrics train();

  PolicyTable& policy() { return policy_; }
  const PolicyTable& policy() const { return policy_; }
  const TaskSpec& task() const { return task_; }
  const RunConfig& config() const { return cfg_; }
  const RunMetrics& metrics() const { return metrics_; }

  void set_rollout_sink(std::function<void(const RolloutRecord&)> sink) {
    sink_ = std::move(sink);
  }

 private:
  RunConfig cfg_;
  TaskSpec task_;
  PolicyTable policy_;
  RunMetrics metrics_;
  std::function<void(const RolloutRecord&)> sink_;
};

RunMetrics train(const RunConfig& cfg);

}  // namespace icpo
