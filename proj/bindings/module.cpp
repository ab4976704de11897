#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "icpo/advantage.hpp"
#include "icpo/appendix.hpp"
#include "icpo/harness.hpp"
#include "icpo/preference.hpp"

namespace py = pybind11;

namespace {

std::vector<icpo::SeqScore> scores_from(const std::vector<double>& mean_logprobs) {
  std::vector<icpo::SeqScore> scores;
  scores.reserve(mean_logprobs.size());
  for (std::size_t k = 0; k < mean_logprobs.size(); ++k) {
    scores.push_back(icpo::SeqScore{static_cast<int>(k) + 1, mean_logprobs[k]});
  }
  return scores;
}

icpo::Group group_from(const std::vector<double>& mean_logprobs,
                       const std::vector<bool>& answer,
                       const std::vector<bool>& format,
                       const std::vector<double>& rewards) {
  if (answer.size() != mean_logprobs.size() ||
      format.size() != mean_logprobs.size()) {
    throw icpo::ShapeMismatch("mean_logprobs, answer and format must align");
  }
  icpo::Group g;
  for (std::size_t k = 0; k < mean_logprobs.size(); ++k) {
    icpo::Response r;
    r.id = static_cast<int>(k) + 1;
    r.tokens = {0};
    r.token_logprobs = {mean_logprobs[k]};
    r.effective_length = 1;
    r.answer_correct = answer[k];
    r.format_ok = format[k];
    g.responses.push_back(std::move(r));
  }
  g.rewards = rewards;
  return g;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "preference-fused group-relative reward/advantage pipeline";

  m.def("mean_logprob",
        [](const std::vector<double>& token_logprobs) {
          icpo::Response r;
          r.id = 1;
          r.tokens.assign(token_logprobs.size(), 0);
          r.token_logprobs = token_logprobs;
          r.effective_length = static_cast<int>(token_logprobs.size());
          return icpo::mean_logprob(r).mean_logprob;
        },
        py::arg("token_logprobs"),
        "length-normalized sequence log-probability");

  m.def("rank_by_confidence",
        [](const std::vector<double>& mean_logprobs) {
          return icpo::rank_by_confidence(scores_from(mean_logprobs)).order;
        },
        py::arg("mean_logprobs"),
        "1-based response ids, lowest confidence first");

  m.def("build_pairs",
        [](const std::vector<double>& mean_logprobs) {
          icpo::Ranking r = icpo::rank_by_confidence(scores_from(mean_logprobs));
          return icpo::build_pairs(r).pairs;
        },
        py::arg("mean_logprobs"),
        "all (earlier-ranked, later-ranked) preference pairs");

  m.def("preference_scores",
        [](const std::vector<double>& mean_logprobs, double delta) {
          auto scores = scores_from(mean_logprobs);
          icpo::Ranking r = icpo::rank_by_confidence(scores);
          std::vector<double> out;
          for (const auto& p : icpo::preference_scores(r, scores, delta)) {
            out.push_back(p.s_p);
          }
          return out;
        },
        py::arg("mean_logprobs"), py::arg("delta") = 0.4,
        "preference advantage scores in input order");

  m.def("verifiable_reward",
        [](bool answer_correct, bool format_ok) {
          return icpo::verifiable_reward(answer_correct, format_ok).r_verif;
        },
        py::arg("answer_correct"), py::arg("format_ok"));

  m.def("fuse",
        [](double r_verif, double s_p, double omega, double tau) {
          return icpo::fuse(r_verif, s_p, omega, tau).r_final;
        },
        py::arg("r_verif"), py::arg("s_p"), py::arg("omega") = 1.0,
        py::arg("tau") = 2.0, "clip-bounded fused reward");

  m.def("omega_at",
        [](const std::string& kind, long long t, long long total_steps,
           double omega_peak, double omega_floor, double omega_end,
           double warmup_fraction) {
          icpo::ScheduleSpec s;
          s.kind = icpo::schedule_kind_from_string(kind);
          s.total_steps = total_steps;
          s.omega_peak = omega_peak;
          s.omega_floor = omega_floor;
          s.omega_end = omega_end;
          s.warmup_fraction = warmup_fraction;
          return icpo::omega_at(s, t);
        },
        py::arg("kind"), py::arg("t"), py::arg("total_steps"),
        py::arg("omega_peak") = 1.0, py::arg("omega_floor") = 0.0,
        py::arg("omega_end") = 0.1, py::arg("warmup_fraction") = 0.4,
        "bonus weight at step t");

  m.def("normalize",
        [](const std::vector<double>& rewards) {
          return icpo::normalize(rewards).values;
        },
        py::arg("rewards"),
        "group-relative advantages (population std; all-zero when degenerate)");

  m.def("score_group",
        [](const std::vector<double>& mean_logprobs,
           const std::vector<bool>& answer, const std::vector<bool>& format,
           double delta, double tau, double omega,
           const std::vector<double>& rewards) {
          icpo::Group g = group_from(mean_logprobs, answer, format, rewards);
          auto scores = scores_from(mean_logprobs);
          icpo::Ranking ranking = icpo::rank_by_confidence(scores);
          py::dict out;
          std::vector<double> s_p;
          for (const auto& p : icpo::preference_scores(ranking, scores, delta)) {
            s_p.push_back(p.s_p);
          }
          std::vector<double> r_verif, r_final;
          for (std::size_t k = 0; k < g.responses.size(); ++k) {
            r_verif.push_back(
                icpo::verifiable_reward(answer[k], format[k]).r_verif);
          }
          for (const auto& f : icpo::fused_rewards(g, omega, tau, delta)) {
            r_final.push_back(f.r_final);
          }
          out["s_p"] = s_p;
          out["r_verif"] = r_verif;
          out["r_final"] = r_final;
          out["advantage_grpo"] = icpo::grpo_advantages(g).values;
          out["advantage_icpo"] =
              icpo::icpo_advantages(g, omega, tau, delta).values;
          return out;
        },
        py::arg("mean_logprobs"), py::arg("answer"), py::arg("format"),
        py::arg("delta") = 0.4, py::arg("tau") = 2.0, py::arg("omega") = 1.0,
        py::arg("rewards") = std::vector<double>{},
        "full scoring pipeline for one group");

  m.def("replay_appendix",
        []() {
          icpo::ReplayReport rep = icpo::replay_appendix();
          return py::make_tuple(rep.all_ok, rep.text);
        },
        "replay the bundled worked examples; returns (all_ok, report_text)");

  m.def("train_metrics",
        [](const std::string& config_text) {
          icpo::RunConfig cfg = icpo::parse_config_text(config_text);
          icpo::validate_config(cfg);
          icpo::RunMetrics metrics = icpo::train(cfg);
          py::list rows;
          for (const auto& r : metrics.steps) {
            py::dict d;
            d["step"] = r.step;
            d["omega"] = r.omega;
            d["mean_reward"] = r.mean_reward;
            d["accuracy"] = r.accuracy;
            d["entropy"] = r.entropy;
            d["kl"] = r.kl;
            d["mean_abs_advantage"] = r.mean_abs_advantage;
            rows.append(std::move(d));
          }
          return rows;
        },
        py::arg("config_text"),
        "run a training loop from config text, returning per-step metrics");

  py::register_exception<icpo::InvalidResponse>(m, "InvalidResponse",
                                                PyExc_ValueError);
  py::register_exception<icpo::InvalidLogProb>(m, "InvalidLogProb",
                                               PyExc_ValueError);
  py::register_exception<icpo::EmptyGroup>(m, "EmptyGroup", PyExc_ValueError);
  py::register_exception<icpo::InvalidTemperature>(m, "InvalidTemperature",
                                                   PyExc_ValueError);
  py::register_exception<icpo::InvalidTau>(m, "InvalidTau", PyExc_ValueError);
  py::register_exception<icpo::InvalidOmega>(m, "InvalidOmega",
                                             PyExc_ValueError);
  py::register_exception<icpo::InvalidStep>(m, "InvalidStep", PyExc_IndexError);
  py::register_exception<icpo::ConfigError>(m, "ConfigError", PyExc_ValueError);
}
