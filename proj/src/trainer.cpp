#include "icpo/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "icpo/preference.hpp"
#include "icpo/scenarios.hpp"

namespace icpo {

namespace {

constexpr std::uint64_t kNoiseSalt = 0xA5C1D2E3F4051627ull;

std::vector<double> log_softmax(const std::vector<double>& row) {
  double mx = *std::max_element(row.begin(), row.end());
  double sum = 0.0;
  for (double z : row) sum += std::exp(z - mx);
  double lse = mx + std::log(sum);
  std::vector<double> out(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) out[i] = row[i] - lse;
  return out;
}

}  // namespace

PolicyTable::PolicyTable(int num_prompts, int vocab_size, int max_len)
    : num_prompts_(num_prompts), vocab_size_(vocab_size), max_len_(max_len) {
  if (num_prompts < 1) throw ConfigError("num_prompts", "must be >= 1");
  if (vocab_size < 2) throw ConfigError("vocab_size", "must be >= 2");
  if (max_len < 1) throw ConfigError("max_len", "must be >= 1");
  theta_.assign(table_size(), 0.0);
  ref_ = theta_;
  old_ = theta_;
}

PolicyTable PolicyTable::random(int num_prompts, int vocab_size, int max_len,
                                RngStream& rng, double scale) {
  PolicyTable p(num_prompts, vocab_size, max_len);
  for (double& z : p.theta_) z = (rng.uniform() * 2.0 - 1.0) * scale;
  p.ref_ = p.theta_;
  p.old_ = p.theta_;
  return p;
}

std::size_t PolicyTable::num_states() const {
  return static_cast<std::size_t>(num_prompts_) * max_len_ * (vocab_size_ + 1);
}

std::size_t PolicyTable::table_size() const {
  return num_states() * vocab_size_;
}

std::size_t PolicyTable::state_index(int prompt, int pos, int prev) const {
  return (static_cast<std::size_t>(prompt) * max_len_ + pos) * (vocab_size_ + 1) +
         prev;
}

std::vector<double> PolicyTable::probs(const std::vector<double>& table,
                                       std::size_t state,
                                       double temperature) const {
  if (!(temperature > 0.0)) {
    throw InvalidTemperature("temperature must be positive, got " +
                             std::to_string(temperature));
  }
  const double* row = table.data() + state * vocab_size_;
  double mx = row[0];
  for (int i = 1; i < vocab_size_; ++i) mx = std::max(mx, row[i]);
  std::vector<double> p(vocab_size_);
  double sum = 0.0;
  for (int i = 0; i < vocab_size_; ++i) {
    p[i] = std::exp((row[i] - mx) / temperature);
    sum += p[i];
  }
  for (int i = 0; i < vocab_size_; ++i) p[i] /= sum;
  return p;
}

std::vector<int> TaskSpec::payload(const std::vector<int>& tokens) const {
  std::vector<int> out;
  for (int t : tokens) {
    if (t == end_token) break;
    out.push_back(t);
  }
  return out;
}

std::pair<bool, bool> TaskSpec::verify(int prompt,
                                       const std::vector<int>& tokens) const {
  std::vector<int> body = payload(tokens);
  bool format_ok = body.size() < tokens.size();  // an end token was emitted
  bool answer = false;
  if (name == "modsum") {
    int a = prompt % vocab_size;
    int b = (prompt / vocab_size) % vocab_size;
    long long sum = 0;
    for (int t : body) sum += t;
    answer = sum % vocab_size == (a + b) % vocab_size;
  } else {  // multipath
    int k = difficulty[prompt];
    int alphabet = vocab_size - 1;
    answer = body.size() == 2 && body[0] >= 0 && body[0] < k &&
             body[1] == (prompt + body[0]) % alphabet;
  }
  return {answer, format_ok};
}

TaskSpec make_task(const std::string& name, int num_prompts, int vocab_size,
                   int max_len) {
  if (name != "modsum" && name != "multipath") {
    throw ConfigError("task", "unknown task '" + name + "'");
  }
  if (num_prompts < 1) throw ConfigError("num_prompts", "must be >= 1");
  if (max_len < 1) throw ConfigError("max_len", "must be >= 1");
  TaskSpec t;
  t.name = name;
  t.num_prompts = num_prompts;
  t.vocab_size = vocab_size;
  t.max_len = max_len;
  t.end_token = vocab_size - 1;
  if (name == "modsum") {
    if (vocab_size < 2) throw ConfigError("vocab_size", "modsum needs >= 2");
  } else {
    // Hardest prompts use 4 distinct correct first tokens, and the payload
    // alphabet excludes the end token.
    if (vocab_size < 5) throw ConfigError("vocab_size", "multipath needs >= 5");
    if (max_len < 3) throw ConfigError("max_len", "multipath needs >= 3");
    t.difficulty.resize(num_prompts);
    for (int p = 0; p < num_prompts; ++p) t.difficulty[p] = 2 + p % 3;
  }
  return t;
}

Group sample_group(const PolicyTable& policy, const TaskSpec& task, int prompt,
                   int G, double temperature, RngStream& rng) {
  if (G < 1) {
    throw InvalidGroupSize("group size must be >= 1, got " + std::to_string(G));
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw InvalidTemperature("temperature must be positive, got " +
                             std::to_string(temperature));
  }
  if (prompt < 0 || prompt >= policy.num_prompts()) {
    throw ShapeMismatch("prompt " + std::to_string(prompt) +
                        " outside the policy's prompt set");
  }
  Group g;
  g.prompt = prompt;
  g.responses.reserve(G);
  for (int k = 1; k <= G; ++k) {
    Response r;
    r.id = k;
    int prev = policy.bos();
    for (int pos = 0; pos < policy.max_len(); ++pos) {
      std::size_t state = policy.state_index(prompt, pos, prev);
      std::vector<double> p = policy.probs(policy.old_logits(), state, temperature);
      int tok = rng.categorical(p);
      double lp;
      if (temperature == 1.0) {
        lp = std::log(p[tok]);
      } else {
        lp = std::log(policy.probs(policy.old_logits(), state, 1.0)[tok]);
      }
      r.tokens.push_back(tok);
      r.token_logprobs.push_back(std::min(lp, 0.0));
      prev = tok;
      if (tok == task.end_token) break;
    }
    r.effective_length = static_cast<int>(r.tokens.size());
    auto [answer, format] = task.verify(prompt, r.tokens);
    r.answer_correct = answer;
    r.format_ok = format;
    g.responses.push_back(std::move(r));
  }
  return g;
}

SurrogateResult surrogate_objective(const std::vector<Group>& groups,
                                    const std::vector<AdvantageVector>& advantages,
                                    const PolicyTable& policy, double eps_clip,
                                    double beta) {
  if (!(eps_clip > 0.0) || !(eps_clip < 1.0)) {
    throw ConfigError("eps_clip", "must lie in (0, 1)");
  }
  if (!(beta >= 0.0)) throw ConfigError("beta", "must be >= 0");
  if (groups.size() != advantages.size()) {
    throw ShapeMismatch("got " + std::to_string(groups.size()) +
                        " groups but " + std::to_string(advantages.size()) +
                        " advantage vectors");
  }
  SurrogateResult res;
  res.gradient.assign(policy.table_size(), 0.0);
  if (groups.empty()) return res;

  const int V = policy.vocab_size();
  const double lo = 1.0 - eps_clip, hi = 1.0 + eps_clip;
  const double group_w = 1.0 / static_cast<double>(groups.size());

  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const Group& g = groups[gi];
    const AdvantageVector& adv = advantages[gi];
    if (adv.values.size() != g.responses.size()) {
      throw ShapeMismatch("group " + std::to_string(g.group_id) + " has " +
                          std::to_string(g.responses.size()) +
                          " responses but " +
                          std::to_string(adv.values.size()) + " advantages");
    }
    const double resp_w = group_w / static_cast<double>(g.responses.size());
    for (std::size_t k = 0; k < g.responses.size(); ++k) {
      const Response& r = g.responses[k];
      if (r.tokens.size() != r.token_logprobs.size()) {
        throw ShapeMismatch("response " + std::to_string(r.id) +
                            ": tokens and token_logprobs differ in length");
      }
      const double A = adv.values[k];
      const double w = resp_w / static_cast<double>(r.tokens.size());
      int prev = policy.bos();
      for (std::size_t t = 0; t < r.tokens.size(); ++t) {
        std::size_t state = policy.state_index(g.prompt, static_cast<int>(t), prev);
        const int a_t = r.tokens[t];
        const double* theta_row = policy.logits().data() + state * V;
        std::vector<double> logp = log_softmax(
            std::vector<double>(theta_row, theta_row + V));

        double ratio = std::exp(logp[a_t] - r.token_logprobs[t]);
        double clipped = std::clamp(ratio, lo, hi);
        double v_un = ratio * A;
        double v_cl = clipped * A;
        res.policy_term += w * std::min(v_un, v_cl);

        double* grad_row = res.gradient.data() + state * V;
        if (A != 0.0 && v_un <= v_cl) {
          double c = w * A * ratio;
          for (int b = 0; b < V; ++b) {
            grad_row[b] += c * ((b == a_t ? 1.0 : 0.0) - std::exp(logp[b]));
          }
        }

        const double* ref_row = policy.ref_logits().data() + state * V;
        std::vector<double> logq = log_softmax(
            std::vector<double>(ref_row, ref_row + V));
        double kl = 0.0;
        for (int b = 0; b < V; ++b) kl += std::exp(logp[b]) * (logp[b] - logq[b]);
        res.kl_term += w * kl;
        if (beta != 0.0) {
          for (int b = 0; b < V; ++b) {
            grad_row[b] -= beta * w * std::exp(logp[b]) * (logp[b] - logq[b] - kl);
          }
        }
        prev = a_t;
      }
    }
  }
  res.objective = res.policy_term - beta * res.kl_term;
  return res;
}

namespace {

double row_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

const std::vector<double>& pick_table(const PolicyTable& policy, WhichTable w) {
  switch (w) {
    case WhichTable::current: return policy.logits();
    case WhichTable::old: return policy.old_logits();
    case WhichTable::ref: return policy.ref_logits();
  }
  return policy.logits();
}

}  // namespace

double mean_entropy(const PolicyTable& policy, WhichTable table,
                    const std::vector<std::size_t>& states) {
  if (states.empty()) throw EmptyBatch("no visited states");
  const std::vector<double>& tab = pick_table(policy, table);
  double sum = 0.0;
  for (std::size_t s : states) sum += row_entropy(policy.probs(tab, s));
  return sum / static_cast<double>(states.size());
}

double policy_entropy(const PolicyTable& policy,
                      const std::vector<std::size_t>& states) {
  return mean_entropy(policy, WhichTable::current, states);
}

double mean_kl(const PolicyTable& policy, WhichTable p, WhichTable q,
               const std::vector<std::size_t>& states) {
  if (states.empty()) throw EmptyBatch("no visited states");
  const std::vector<double>& tp = pick_table(policy, p);
  const std::vector<double>& tq = pick_table(policy, q);
  double sum = 0.0;
  for (std::size_t s : states) {
    std::vector<double> pp = policy.probs(tp, s);
    std::vector<double> qq = policy.probs(tq, s);
    double kl = 0.0;
    for (std::size_t i = 0; i < pp.size(); ++i) {
      if (pp[i] > 0.0) kl += pp[i] * (std::log(pp[i]) - std::log(qq[i]));
    }
    sum += kl;
  }
  return sum / static_cast<double>(states.size());
}

std::vector<std::size_t> visited_states(const PolicyTable& policy,
                                        const std::vector<Group>& groups) {
  std::vector<std::size_t> states;
  for (const Group& g : groups) {
    for (const Response& r : g.responses) {
      int prev = policy.bos();
      for (std::size_t t = 0; t < r.tokens.size(); ++t) {
        states.push_back(policy.state_index(g.prompt, static_cast<int>(t), prev));
        prev = r.tokens[t];
      }
    }
  }
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  return states;
}

Trainer::Trainer(const RunConfig& cfg)
    : cfg_(cfg),
      task_(make_task(cfg.task, cfg.num_prompts, cfg.vocab_size, cfg.max_len)),
      policy_(cfg.num_prompts, cfg.vocab_size, cfg.max_len) {
  validate_config(cfg_);
}

StepRecord Trainer::run_step(long long step) {
  if (step < 1 || step > cfg_.steps) {
    throw InvalidStep("step " + std::to_string(step) + " outside [1, " +
                      std::to_string(cfg_.steps) + "]");
  }
  const bool icpo = cfg_.algorithm == "icpo";
  const double omega = icpo ? omega_at(schedule_from(cfg_), step) : 0.0;

  policy_.snapshot_old();

  std::vector<Group> groups;
  groups.reserve(cfg_.num_prompts);
  for (int p = 0; p < cfg_.num_prompts; ++p) {
    RngStream rng(stream_seed(cfg_.seed, static_cast<std::uint64_t>(step),
                              static_cast<std::uint64_t>(p)));
    Group g = sample_group(policy_, task_, p, cfg_.group_size,
                           cfg_.temperature, rng);
    g.group_id = (step - 1) * static_cast<long long>(cfg_.num_prompts) + p;
    groups.push_back(std::move(g));
  }

  // Scenario transform: fill reward overrides and decide retention.
  std::vector<bool> retained(groups.size(), true);
  if (cfg_.scenario == "noisy") {
    NoiseSpec spec;
    spec.fraction = cfg_.noise_fraction;
    spec.magnitude = cfg_.noise_magnitude;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      Group& g = groups[gi];
      std::vector<VerifiableReward> vr;
      vr.reserve(g.responses.size());
      for (const Response& r : g.responses) {
        vr.push_back(verifiable_reward(r.answer_correct, r.format_ok));
      }
      RngStream rng(stream_seed(cfg_.seed ^ kNoiseSalt,
                                static_cast<std::uint64_t>(step),
                                static_cast<std::uint64_t>(g.prompt)));
      g.rewards = inject_noise(vr, spec, rng);
    }
  } else if (cfg_.scenario == "coarse") {
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      Group& g = groups[gi];
      if (uniform_answers(g)) {
        g.rewards.assign(g.responses.size(), coarse_shared_reward(g));
      } else {
        retained[gi] = false;
      }
    }
  }

  // Telemetry under the sampling policy, before any update.
  std::vector<std::size_t> states = visited_states(policy_, groups);
  StepRecord rec;
  rec.step = step;
  rec.omega = omega;
  rec.entropy = policy_entropy(policy_, states);
  rec.kl = mean_kl(policy_, WhichTable::current, WhichTable::ref, states);

  double reward_sum = 0.0;
  long long response_count = 0;
  long long correct = 0;
  for (const Group& g : groups) {
    for (std::size_t k = 0; k < g.responses.size(); ++k) {
      if (cfg_.scenario == "noisy") {
        reward_sum += g.rewards[k];
      } else {
        reward_sum += verifiable_reward(g.responses[k].answer_correct,
                                        g.responses[k].format_ok)
                          .r_verif;
      }
      correct += g.responses[k].answer_correct ? 1 : 0;
      ++response_count;
    }
  }
  rec.mean_reward = reward_sum / static_cast<double>(response_count);
  rec.accuracy = static_cast<double>(correct) / static_cast<double>(response_count);

  std::vector<Group> train_groups;
  std::vector<AdvantageVector> train_advs;
  double abs_adv_sum = 0.0;
  long long adv_count = 0;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const Group& g = groups[gi];
    RolloutRecord rr;
    rr.step = step;
    rr.prompt = g.prompt;
    rr.retained = retained[gi];
    rr.omega = omega;
    if (retained[gi]) {
      AdvantageVector adv;
      if (icpo) {
        std::vector<SeqScore> scores;
        scores.reserve(g.responses.size());
        for (const Response& r : g.responses) scores.push_back(mean_logprob(r));
        Ranking ranking = rank_by_confidence(scores);
        std::vector<PreferenceScore> prefs =
            preference_scores(ranking, scores, cfg_.delta);
        std::vector<double> finals;
        finals.reserve(g.responses.size());
        for (std::size_t k = 0; k < g.responses.size(); ++k) {
          FusedReward f = fuse(group_reward(g, k), prefs[k].s_p, omega, cfg_.tau);
          rr.s_p.push_back(prefs[k].s_p);
          finals.push_back(f.r_final);
        }
        rr.r_final = finals;
        adv = normalize(finals, AdvantageSource::icpo);
      } else {
        adv = grpo_advantages(g);
      }
      for (double a : adv.values) {
        abs_adv_sum += std::abs(a);
        ++adv_count;
      }
      rr.advantages = adv.values;
      train_groups.push_back(g);
      train_advs.push_back(std::move(adv));
    }
    if (sink_) {
      rr.group = g;
      sink_(rr);
    }
  }
  rec.mean_abs_advantage =
      adv_count > 0 ? abs_adv_sum / static_cast<double>(adv_count) : 0.0;

  // Mini-batch ascent: contiguous group chunks, re-evaluating the surrogate
  // against the moving current table each chunk.
  const std::size_t n = train_groups.size();
  if (n > 0) {
    const int M = cfg_.mini_batches;
    for (int pass = 0; pass < cfg_.inner_passes; ++pass) {
      for (int c = 0; c < M; ++c) {
        std::size_t beg = n * static_cast<std::size_t>(c) / M;
        std::size_t end = n * static_cast<std::size_t>(c + 1) / M;
        if (beg == end) continue;
        std::vector<Group> chunk(train_groups.begin() + beg,
                                 train_groups.begin() + end);
        std::vector<AdvantageVector> chunk_adv(train_advs.begin() + beg,
                                               train_advs.begin() + end);
        SurrogateResult res = surrogate_objective(chunk, chunk_adv, policy_,
                                                  cfg_.eps_clip, cfg_.beta);
        std::vector<double>& theta = policy_.logits();
        for (std::size_t i = 0; i < theta.size(); ++i) {
          theta[i] += cfg_.learning_rate * res.gradient[i];
        }
      }
    }
  }

  metrics_.steps.push_back(rec);
  return rec;
}

RunMetrics Trainer::train() {
  for (long long t = 1; t <= cfg_.steps; ++t) run_step(t);
  return metrics_;
}

RunMetrics train(const RunConfig& cfg) {
  Trainer tr(cfg);
  return tr.train();
}

}  // namespace icpo
