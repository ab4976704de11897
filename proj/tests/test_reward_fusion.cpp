#include <doctest.h>

#include <cmath>
#include <random>

#include "icpo/reward_fusion.hpp"

using icpo::ScheduleKind;
using icpo::ScheduleSpec;

namespace {

ScheduleSpec spec_of(ScheduleKind kind, long long T = 500) {
  ScheduleSpec s;
  s.kind = kind;
  s.omega_peak = 1.0;
  s.omega_floor = 0.0;
  s.omega_end = 0.1;
  s.warmup_fraction = 0.4;
  s.total_steps = T;
  return s;
}

}  // namespace

TEST_CASE("verifiable_reward: all flag combinations") {
  CHECK(icpo::verifiable_reward(false, true).r_verif == doctest::Approx(0.1));
  CHECK(icpo::verifiable_reward(true, true).r_verif == doctest::Approx(1.0));
  CHECK(icpo::verifiable_reward(true, false).r_verif == doctest::Approx(0.9));
  CHECK(icpo::verifiable_reward(false, false).r_verif == 0.0);
}

TEST_CASE("fuse: worked examples") {
  CHECK(icpo::fuse(0.1, 0.5852, 1.0, 2.0).r_final == doctest::Approx(0.15));
  CHECK(icpo::fuse(1.0, 0.4372, 1.0, 2.0).r_final == doctest::Approx(1.4372));
}

TEST_CASE("fuse: omega zero disables the bonus exactly") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> r_dist(0.0, 1.0);
  std::uniform_real_distribution<double> s_dist(0.0, 3.0);
  for (int it = 0; it < 1000; ++it) {
    double r = r_dist(rng);
    double s = s_dist(rng);
    CHECK(icpo::fuse(r, s, 0.0, 2.0).r_final == r);
  }
}

TEST_CASE("fuse: clip dominance") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> r_dist(0.0, 1.0);
  std::uniform_real_distribution<double> s_dist(0.0, 3.0);
  std::uniform_real_distribution<double> w_dist(0.0, 2.0);
  std::uniform_real_distribution<double> t_dist(0.5, 4.0);
  for (int it = 0; it < 1000; ++it) {
    double r = r_dist(rng), s = s_dist(rng), w = w_dist(rng), tau = t_dist(rng);
    auto f = icpo::fuse(r, s, w, tau);
    CHECK(f.r_final - r <= w * std::abs(r) / tau + 1e-15);
    if (s >= std::abs(r) / tau) {
      CHECK(f.r_final - r == doctest::Approx(w * std::abs(r) / tau));
    }
  }
}

TEST_CASE("fuse: monotone in s_p and omega") {
  auto base = icpo::fuse(0.5, 0.1, 1.0, 2.0).r_final;
  CHECK(icpo::fuse(0.5, 0.2, 1.0, 2.0).r_final >= base);
  CHECK(icpo::fuse(0.5, 0.1, 1.5, 2.0).r_final >= base);
  CHECK(icpo::fuse(0.5, 0.1, 1.0, 1.0).r_final >= base);  // below clip: 1/tau up
}

TEST_CASE("fuse: errors") {
  CHECK_THROWS_AS(icpo::fuse(0.5, 0.1, 1.0, 0.0), icpo::InvalidTau);
  CHECK_THROWS_AS(icpo::fuse(0.5, 0.1, 1.0, -2.0), icpo::InvalidTau);
  CHECK_THROWS_AS(icpo::fuse(0.5, 0.1, -0.1, 2.0), icpo::InvalidOmega);
}

TEST_CASE("omega_at: warmup endpoints are exact") {
  auto wd = spec_of(ScheduleKind::warmup_decay);
  CHECK(icpo::omega_at(wd, 0) == 0.0);
  CHECK(icpo::omega_at(wd, 200) == 1.0);
  CHECK(icpo::omega_at(wd, 500) == 0.1);
  CHECK(icpo::omega_at(wd, 350) == doctest::Approx(0.55).epsilon(1e-12));

  auto wr = spec_of(ScheduleKind::warmup_retention);
  CHECK(icpo::omega_at(wr, 0) == 0.0);
  CHECK(icpo::omega_at(wr, 200) == 1.0);
  CHECK(icpo::omega_at(wr, 500) == 1.0);

  auto ld = spec_of(ScheduleKind::linear_decay);
  CHECK(icpo::omega_at(ld, 0) == 1.0);
  CHECK(icpo::omega_at(ld, 500) == 0.1);
  CHECK(icpo::omega_at(ld, 250) == doctest::Approx(0.55).epsilon(1e-12));

  auto nd = spec_of(ScheduleKind::no_decay);
  CHECK(icpo::omega_at(nd, 0) == 1.0);
  CHECK(icpo::omega_at(nd, 500) == 1.0);
}

TEST_CASE("omega_at: continuity and range for every kind") {
  for (auto kind : {ScheduleKind::no_decay, ScheduleKind::linear_decay,
                    ScheduleKind::warmup_retention, ScheduleKind::warmup_decay}) {
    auto s = spec_of(kind);
    long long tw = icpo::warmup_steps(s);
    double bound = 2.0 * s.omega_peak / static_cast<double>(tw);
    double lo = std::min(s.omega_floor, s.omega_end);
    double prev = icpo::omega_at(s, 0);
    for (long long t = 1; t <= s.total_steps; ++t) {
      double cur = icpo::omega_at(s, t);
      CHECK(std::abs(cur - prev) < bound);
      CHECK(cur >= lo - 1e-15);
      CHECK(cur <= s.omega_peak + 1e-15);
      prev = cur;
    }
  }
}

TEST_CASE("omega_at: warmup_decay peaks exactly at the warmup boundary") {
  auto s = spec_of(ScheduleKind::warmup_decay);
  long long tw = icpo::warmup_steps(s);
  double peak = icpo::omega_at(s, tw);
  for (long long t = 0; t <= s.total_steps; t += 7) {
    CHECK(icpo::omega_at(s, t) <= peak);
  }
}

TEST_CASE("omega_at: step range errors") {
  auto s = spec_of(ScheduleKind::no_decay);
  CHECK_THROWS_AS(icpo::omega_at(s, -1), icpo::InvalidStep);
  CHECK_THROWS_AS(icpo::omega_at(s, 501), icpo::InvalidStep);
}

TEST_CASE("validate_schedule: kind-aware field checks") {
  auto s = spec_of(ScheduleKind::warmup_decay);
  s.omega_floor = 2.0;  // above peak
  CHECK_THROWS_AS(icpo::validate_schedule(s), icpo::ConfigError);

  auto z = spec_of(ScheduleKind::no_decay);
  z.omega_peak = 0.0;
  z.omega_end = 0.1;  // unused by no_decay, must not reject
  CHECK_NOTHROW(icpo::validate_schedule(z));
  CHECK(icpo::omega_at(z, 250) == 0.0);

  auto w = spec_of(ScheduleKind::warmup_decay);
  w.warmup_fraction = 0.0;
  CHECK_THROWS_AS(icpo::validate_schedule(w), icpo::ConfigError);
}
