#include "icpo/harness.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "icpo/advantage.hpp"
#include "icpo/appendix.hpp"
#include "icpo/preference.hpp"
#include "icpo/scenarios.hpp"

namespace icpo {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError(key, "invalid numeric value '" + value + "'");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError(key, "invalid integer value '" + value + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE ||
      value.find('-') != std::string::npos) {
    throw ConfigError(key, "invalid unsigned value '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key, "invalid boolean value '" + value + "'");
}

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno),
                        "expected key = value, got '" + trim(raw) + "'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno), "empty key");
    }

    if (key == "algorithm") cfg.algorithm = value;
    else if (key == "task") cfg.task = value;
    else if (key == "scenario") cfg.scenario = value;
    else if (key == "group_size") cfg.group_size = static_cast<int>(parse_int(key, value));
    else if (key == "steps") cfg.steps = parse_int(key, value);
    else if (key == "seed") cfg.seed = parse_uint(key, value);
    else if (key == "delta") cfg.delta = parse_double(key, value);
    else if (key == "tau") cfg.tau = parse_double(key, value);
    else if (key == "omega_schedule") cfg.omega_schedule = value;
    else if (key == "omega_peak") cfg.omega_peak = parse_double(key, value);
    else if (key == "omega_floor") cfg.omega_floor = parse_double(key, value);
    else if (key == "omega_end") cfg.omega_end = parse_double(key, value);
    else if (key == "warmup_fraction") cfg.warmup_fraction = parse_double(key, value);
    else if (key == "eps_clip") cfg.eps_clip = parse_double(key, value);
    else if (key == "beta") cfg.beta = parse_double(key, value);
    else if (key == "learning_rate") cfg.learning_rate = parse_double(key, value);
    else if (key == "temperature") cfg.temperature = parse_double(key, value);
    else if (key == "vocab_size") cfg.vocab_size = static_cast<int>(parse_int(key, value));
    else if (key == "max_len") cfg.max_len = static_cast<int>(parse_int(key, value));
    else if (key == "num_prompts") cfg.num_prompts = static_cast<int>(parse_int(key, value));
    else if (key == "noise_fraction") cfg.noise_fraction = parse_double(key, value);
    else if (key == "noise_magnitude") cfg.noise_magnitude = parse_double(key, value);
    else if (key == "inner_passes") cfg.inner_passes = static_cast<int>(parse_int(key, value));
    else if (key == "mini_batches") cfg.mini_batches = static_cast<int>(parse_int(key, value));
    else if (key == "log_rollouts") cfg.log_rollouts = parse_bool(key, value);
    else if (key == "output_dir") cfg.output_dir = value;
    else throw ConfigError(key, "unknown key");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string resolved_config_text(const RunConfig& cfg) {
  std::ostringstream out;
  out << "algorithm = " << cfg.algorithm << "\n";
  out << "task = " << cfg.task << "\n";
  out << "scenario = " << cfg.scenario << "\n";
  out << "group_size = " << cfg.group_size << "\n";
  out << "steps = " << cfg.steps << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "delta = " << fmt_g17(cfg.delta) << "\n";
  out << "tau = " << fmt_g17(cfg.tau) << "\n";
  out << "omega_schedule = " << cfg.omega_schedule << "\n";
  out << "omega_peak = " << fmt_g17(cfg.omega_peak) << "\n";
  out << "omega_floor = " << fmt_g17(cfg.omega_floor) << "\n";
  out << "omega_end = " << fmt_g17(cfg.omega_end) << "\n";
  out << "warmup_fraction = " << fmt_g17(cfg.warmup_fraction) << "\n";
  out << "eps_clip = " << fmt_g17(cfg.eps_clip) << "\n";
  out << "beta = " << fmt_g17(cfg.beta) << "\n";
  out << "learning_rate = " << fmt_g17(cfg.learning_rate) << "\n";
  out << "temperature = " << fmt_g17(cfg.temperature) << "\n";
  out << "vocab_size = " << cfg.vocab_size << "\n";
  out << "max_len = " << cfg.max_len << "\n";
  out << "num_prompts = " << cfg.num_prompts << "\n";
  out << "noise_fraction = " << fmt_g17(cfg.noise_fraction) << "\n";
  out << "noise_magnitude = " << fmt_g17(cfg.noise_magnitude) << "\n";
  out << "inner_passes = " << cfg.inner_passes << "\n";
  out << "mini_batches = " << cfg.mini_batches << "\n";
  out << "log_rollouts = " << (cfg.log_rollouts ? "true" : "false") << "\n";
  out << "output_dir = " << cfg.output_dir << "\n";
  return out.str();
}

std::string format_metrics_csv(const RunMetrics& metrics) {
  std::ostringstream out;
  out << "step,omega,mean_reward,accuracy,entropy,kl,mean_abs_advantage\n";
  for (const StepRecord& r : metrics.steps) {
    out << r.step << ',' << fmt_g17(r.omega) << ',' << fmt_g17(r.mean_reward)
        << ',' << fmt_g17(r.accuracy) << ',' << fmt_g17(r.entropy) << ','
        << fmt_g17(r.kl) << ',' << fmt_g17(r.mean_abs_advantage) << "\n";
  }
  return out.str();
}

std::string format_rollout_json(const RolloutRecord& rr) {
  ordered_json j;
  j["step"] = rr.step;
  j["prompt"] = rr.prompt;
  j["retained"] = rr.retained;
  j["omega"] = rr.omega;
  ordered_json responses = ordered_json::array();
  for (std::size_t k = 0; k < rr.group.responses.size(); ++k) {
    const Response& r = rr.group.responses[k];
    ordered_json rj;
    rj["id"] = r.id;
    rj["tokens"] = r.tokens;
    rj["token_logprobs"] = r.token_logprobs;
    rj["mean_logprob"] = mean_logprob(r).mean_logprob;
    rj["answer_correct"] = r.answer_correct;
    rj["format_ok"] = r.format_ok;
    rj["reward"] = group_reward(rr.group, k);
    if (k < rr.advantages.size()) rj["advantage"] = rr.advantages[k];
    if (k < rr.s_p.size()) rj["s_p"] = rr.s_p[k];
    if (k < rr.r_final.size()) rj["r_final"] = rr.r_final[k];
    responses.push_back(std::move(rj));
  }
  j["responses"] = std::move(responses);
  return j.dump();
}

int cli_replay_appendix(std::ostream& out) {
  ReplayReport rep = replay_appendix();
  out << rep.text;
  return rep.all_ok ? 0 : 1;
}

namespace {

struct ParsedGroup {
  long long group_id = 0;
  Group group;
};

ParsedGroup parse_score_line(const std::string& line, int lineno) {
  auto fail = [lineno](const std::string& msg) -> std::runtime_error {
    return std::runtime_error("line " + std::to_string(lineno) + ": " + msg);
  };
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const std::exception& e) {
    throw fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw fail("record must be a JSON object");
  if (!j.contains("group_id") || !j["group_id"].is_number_integer()) {
    throw fail("missing integer field 'group_id'");
  }
  if (!j.contains("responses") || !j["responses"].is_array() ||
      j["responses"].empty()) {
    throw fail("'responses' must be a non-empty array");
  }
  ParsedGroup pg;
  pg.group_id = j["group_id"].get<long long>();
  pg.group.group_id = pg.group_id;
  bool any_reward = false;
  std::vector<double> rewards;
  for (const auto& rj : j["responses"]) {
    if (!rj.is_object()) throw fail("each response must be a JSON object");
    Response r;
    if (!rj.contains("id") || !rj["id"].is_number_integer()) {
      throw fail("response missing integer field 'id'");
    }
    r.id = rj["id"].get<int>();
    if (rj.contains("token_logprobs")) {
      if (!rj["token_logprobs"].is_array() || rj["token_logprobs"].empty()) {
        throw fail("'token_logprobs' must be a non-empty array");
      }
      for (const auto& v : rj["token_logprobs"]) {
        if (!v.is_number()) throw fail("'token_logprobs' entries must be numbers");
        r.token_logprobs.push_back(v.get<double>());
      }
    } else if (rj.contains("mean_logprob")) {
      if (!rj["mean_logprob"].is_number()) {
        throw fail("'mean_logprob' must be a number");
      }
      r.token_logprobs.push_back(rj["mean_logprob"].get<double>());
    } else {
      throw fail("response needs 'mean_logprob' or 'token_logprobs'");
    }
    r.tokens.assign(r.token_logprobs.size(), 0);
    r.effective_length = static_cast<int>(r.token_logprobs.size());
    if (!rj.contains("answer_correct") || !rj["answer_correct"].is_boolean()) {
      throw fail("response missing boolean field 'answer_correct'");
    }
    if (!rj.contains("format_ok") || !rj["format_ok"].is_boolean()) {
      throw fail("response missing boolean field 'format_ok'");
    }
    r.answer_correct = rj["answer_correct"].get<bool>();
    r.format_ok = rj["format_ok"].get<bool>();
    if (rj.contains("reward")) {
      if (!rj["reward"].is_number()) throw fail("'reward' must be a number");
      any_reward = true;
      rewards.push_back(rj["reward"].get<double>());
    } else {
      rewards.push_back(verifiable_reward(r.answer_correct, r.format_ok).r_verif);
    }
    pg.group.responses.push_back(std::move(r));
  }
  if (any_reward) pg.group.rewards = std::move(rewards);
  return pg;
}

}  // namespace

int cli_score(const std::string& input_path, const std::string& output_path,
              double delta, double tau, double omega, std::ostream& err) {
  std::ifstream in(input_path);
  if (!in) {
    err << "cannot read input file '" << input_path << "'\n";
    return 1;
  }
  std::ofstream out(output_path);
  if (!out) {
    err << "cannot write output file '" << output_path << "'\n";
    return 1;
  }
  std::string line;
  int lineno = 0;
  try {
    while (std::getline(in, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      ParsedGroup pg = parse_score_line(line, lineno);
      const Group& g = pg.group;

      std::vector<SeqScore> scores;
      scores.reserve(g.responses.size());
      for (const Response& r : g.responses) scores.push_back(mean_logprob(r));
      Ranking ranking = rank_by_confidence(scores);
      std::vector<PreferenceScore> prefs =
          preference_scores(ranking, scores, delta);
      std::vector<FusedReward> fused = fused_rewards(g, omega, tau, delta);
      AdvantageVector grpo = grpo_advantages(g);
      AdvantageVector icpo = icpo_advantages(g, omega, tau, delta);

      ordered_json j;
      j["group_id"] = pg.group_id;
      ordered_json responses = ordered_json::array();
      for (std::size_t k = 0; k < g.responses.size(); ++k) {
        const Response& r = g.responses[k];
        ordered_json rj;
        rj["id"] = r.id;
        rj["s_p"] = prefs[k].s_p;
        rj["r_verif"] = verifiable_reward(r.answer_correct, r.format_ok).r_verif;
        rj["r_final"] = fused[k].r_final;
        rj["advantage_grpo"] = grpo.values[k];
        rj["advantage_icpo"] = icpo.values[k];
        responses.push_back(std::move(rj));
      }
      j["responses"] = std::move(responses);
      out << j.dump() << "\n";
    }
  } catch (const std::runtime_error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "line " << lineno << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cli_train(const std::string& config_path, bool force_log_rollouts,
              const std::string& output_dir_override, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    if (force_log_rollouts) cfg.log_rollouts = true;
    if (!output_dir_override.empty()) cfg.output_dir = output_dir_override;
    validate_config(cfg);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }

  std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    err << "cannot create output directory '" << cfg.output_dir
        << "': " << ec.message() << "\n";
    return 1;
  }

  {
    std::ofstream rc(dir / "config.resolved");
    if (!rc) {
      err << "cannot write config.resolved\n";
      return 1;
    }
    rc << resolved_config_text(cfg);
  }

  try {
    Trainer trainer(cfg);
    std::ofstream rollouts;
    if (cfg.log_rollouts) {
      rollouts.open(dir / "rollouts.jsonl");
      if (!rollouts) {
        err << "cannot write rollouts.jsonl\n";
        return 1;
      }
      trainer.set_rollout_sink([&rollouts](const RolloutRecord& rr) {
        rollouts << format_rollout_json(rr) << "\n";
      });
    }
    RunMetrics metrics = trainer.train();
    std::ofstream mc(dir / "metrics.csv");
    if (!mc) {
      err << "cannot write metrics.csv\n";
      return 1;
    }
    mc << format_metrics_csv(metrics);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cli_perturb(const std::string& input_path, const std::string& output_path,
                double fraction, double magnitude, std::uint64_t seed,
                std::ostream& err) {
  std::ifstream in(input_path);
  if (!in) {
    err << "cannot read input file '" << input_path << "'\n";
    return 1;
  }
  std::ofstream out(output_path);
  if (!out) {
    err << "cannot write output file '" << output_path << "'\n";
    return 1;
  }
  NoiseSpec spec;
  spec.fraction = fraction;
  spec.magnitude = magnitude;
  RngStream rng(splitmix64(seed));
  std::string line;
  int lineno = 0;
  try {
    while (std::getline(in, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      ParsedGroup pg = parse_score_line(line, lineno);
      std::vector<VerifiableReward> vr;
      vr.reserve(pg.group.responses.size());
      for (std::size_t k = 0; k < pg.group.responses.size(); ++k) {
        VerifiableReward v;
        v.response_id = pg.group.responses[k].id;
        v.r_verif = group_reward(pg.group, k);
        vr.push_back(v);
      }
      std::vector<double> noisy = inject_noise(vr, spec, rng);

      // Preserve the original record, adding/replacing per-response rewards.
      ordered_json j = ordered_json::parse(line);
      for (std::size_t k = 0; k < noisy.size(); ++k) {
        j["responses"][k]["reward"] = noisy[k];
      }
      out << j.dump() << "\n";
    }
  } catch (const std::runtime_error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "line " << lineno << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace icpo
