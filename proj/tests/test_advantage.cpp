#include <doctest.h>

#include <cmath>
#include <random>

#include "icpo/advantage.hpp"
#include "icpo/appendix.hpp"

using icpo::AdvantageSource;
using icpo::AdvantageVector;
using icpo::Group;
using icpo::WorkedGroup;

namespace {

bool close_all(const std::vector<double>& a, const std::vector<double>& b,
               double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("normalize: worked verifiable rewards (population std)") {
  auto a = icpo::normalize({0.1, 0.1, 1.0, 0.1, 1.0});
  CHECK(close_all(a.values, {-0.816, -0.816, 1.225, -0.816, 1.225}, 1e-3));
}

TEST_CASE("normalize: worked fused rewards") {
  auto a = icpo::normalize({0.15, 0.15, 1.4202, 0.1036, 1.4372});
  CHECK(close_all(a.values, {-0.7917, -0.7917, 1.2108, -0.8649, 1.2376}, 1e-3));
}

TEST_CASE("normalize: constant group degenerates to zeros") {
  for (double c : {0.0, 0.1, 1.0, -3.5}) {
    auto a = icpo::normalize({c, c, c, c, c});
    CHECK(a.values == std::vector<double>{0, 0, 0, 0, 0});
  }
  CHECK_THROWS_AS(icpo::normalize({}), icpo::EmptyGroup);
}

TEST_CASE("normalize: sample std would not reproduce the reference") {
  std::vector<double> r = {0.1, 0.1, 1.0, 0.1, 1.0};
  double mean = 0.46;
  double sample_sd = std::sqrt(
      (3 * (0.1 - mean) * (0.1 - mean) + 2 * (1.0 - mean) * (1.0 - mean)) / 4.0);
  double sample_a1 = (0.1 - mean) / sample_sd;
  CHECK(std::abs(sample_a1 - (-0.816)) > 0.05);
  auto pop = icpo::normalize(r);
  CHECK(std::abs(pop.values[0] - (-0.816)) < 1e-3);
}

TEST_CASE("normalize: moments when non-degenerate") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int it = 0; it < 300; ++it) {
    std::vector<double> r(2 + rng() % 7);
    for (double& x : r) x = dist(rng);
    auto a = icpo::normalize(r);
    if (a.group_std <= icpo::kStdFloor) continue;
    double m = 0.0, v = 0.0;
    for (double x : a.values) m += x;
    m /= static_cast<double>(a.values.size());
    for (double x : a.values) v += (x - m) * (x - m);
    v /= static_cast<double>(a.values.size());
    CHECK(std::abs(m) < 1e-9);
    CHECK(std::abs(std::sqrt(v) - 1.0) < 1e-9);
  }
}

TEST_CASE("normalize: shift and positive-scale invariance") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int it = 0; it < 1000; ++it) {
    std::vector<double> r(3 + rng() % 5);
    for (double& x : r) x = dist(rng);
    auto base = icpo::normalize(r);
    if (base.group_std <= icpo::kStdFloor) continue;
    double c = shift(rng), s = scale(rng);
    std::vector<double> shifted = r, scaled = r;
    for (double& x : shifted) x += c;
    for (double& x : scaled) x *= s;
    CHECK(close_all(icpo::normalize(shifted).values, base.values, 1e-9));
    CHECK(close_all(icpo::normalize(scaled).values, base.values, 1e-9));
  }
}

TEST_CASE("grpo/icpo advantages on the worked fixtures") {
  const auto& fixtures = icpo::worked_groups();

  // clean group A: the high-confidence correct response gains, the
  // highest-confidence wrong response loses, relative to plain grouping
  const WorkedGroup& a = fixtures[0];
  Group ga = icpo::worked_group_as_group(a);
  auto grpo = icpo::grpo_advantages(ga);
  auto icpo_a = icpo::icpo_advantages(ga, a.omega, a.tau, a.delta);
  CHECK(close_all(grpo.values, a.ref_grpo_adv, 1e-3));
  CHECK(close_all(icpo_a.values, a.ref_icpo_adv, 1e-3));
  CHECK(icpo_a.values[4] > grpo.values[4]);
  CHECK(icpo_a.values[3] < grpo.values[3]);
  CHECK(icpo_a.values[4] > icpo_a.values[2]);

  // clean group B: extreme-low-confidence damping
  const WorkedGroup& b = fixtures[1];
  Group gb = icpo::worked_group_as_group(b);
  auto icpo_b = icpo::icpo_advantages(gb, b.omega, b.tau, b.delta);
  CHECK(close_all(icpo_b.values, b.ref_icpo_adv, 1e-3));
  CHECK(icpo_b.values[4] < icpo::grpo_advantages(gb).values[4]);

  // noisy group: reference advantages reproduce from the reference fused
  // vector; the noise-mitigation inequalities hold for the full pipeline too
  const WorkedGroup& n = fixtures[2];
  Group gn = icpo::worked_group_as_group(n);
  auto ref_step = icpo::normalize(n.ref_fused, AdvantageSource::icpo);
  CHECK(close_all(ref_step.values, n.ref_icpo_adv, 1e-3));
  auto grpo_noisy = icpo::grpo_advantages(gn);
  auto icpo_noisy = icpo::icpo_advantages(gn, n.omega, n.tau, n.delta);
  CHECK(icpo_noisy.values[3] < grpo_noisy.values[3]);
  CHECK(icpo_noisy.values[4] > grpo_noisy.values[4]);
  CHECK(ref_step.values[3] < grpo_noisy.values[3]);
  CHECK(ref_step.values[4] > grpo_noisy.values[4]);

  // pipeline fused value for the noisy response 5 is pinned: clip base is
  // the reward actually fused (0.7), so 0.7 + min(0.4372, 0.35) = 1.05
  auto fused = icpo::fused_rewards(gn, n.omega, n.tau, n.delta);
  CHECK(fused[4].r_final == doctest::Approx(1.05).epsilon(1e-6));
}

TEST_CASE("group_reward: override wins, flags otherwise") {
  Group g;
  icpo::Response r;
  r.id = 1;
  r.tokens = {0};
  r.token_logprobs = {-0.1};
  r.answer_correct = true;
  r.format_ok = true;
  g.responses.push_back(r);
  CHECK(icpo::group_reward(g, 0) == doctest::Approx(1.0));
  g.rewards = {0.7};
  CHECK(icpo::group_reward(g, 0) == doctest::Approx(0.7));
  g.rewards = {0.7, 0.3};
  CHECK_THROWS_AS(icpo::group_reward(g, 0), icpo::ShapeMismatch);
}
