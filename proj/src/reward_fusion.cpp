#include "icpo/reward_fusion.hpp"

#include <algorithm>
#include <cmath>

namespace icpo {

VerifiableReward verifiable_reward(bool answer_correct, bool format_ok) {
  VerifiableReward v;
  v.r_answer = answer_correct ? 1.0 : 0.0;
  v.r_format = format_ok ? 1.0 : 0.0;
  v.r_verif = 0.9 * v.r_answer + 0.1 * v.r_format;
  return v;
}

FusedReward fuse(double r_verif, double s_p, double omega, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw InvalidTau("tau must be positive, got " + std::to_string(tau));
  }
  if (omega < 0.0 || !std::isfinite(omega)) {
    throw InvalidOmega("omega must be non-negative, got " +
                       std::to_string(omega));
  }
  FusedReward f;
  f.tau = tau;
  f.omega = omega;
  f.bonus = std::min(s_p, std::abs(r_verif) / tau);
  f.r_final = r_verif + omega * f.bonus;
  return f;
}

ScheduleKind schedule_kind_from_string(const std::string& name) {
  if (name == "no_decay") return ScheduleKind::no_decay;
  if (name == "linear_decay") return ScheduleKind::linear_decay;
  if (name == "warmup_retention") return ScheduleKind::warmup_retention;
  if (name == "warmup_decay") return ScheduleKind::warmup_decay;
  throw ConfigError("omega_schedule", "unknown schedule kind '" + name + "'");
}

std::string schedule_kind_to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::no_decay: return "no_decay";
    case ScheduleKind::linear_decay: return "linear_decay";
    case ScheduleKind::warmup_retention: return "warmup_retention";
    case ScheduleKind::warmup_decay: return "warmup_decay";
  }
  return "unknown";
}

long long warmup_steps(const ScheduleSpec& spec) {
  return std::llround(spec.warmup_fraction *
                      static_cast<double>(spec.total_steps));
}

void validate_schedule(const ScheduleSpec& spec) {
  if (spec.total_steps < 1) {
    throw ConfigError("steps", "total_steps must be >= 1");
  }
  if (!(spec.omega_peak >= 0.0) || !std::isfinite(spec.omega_peak)) {
    throw ConfigError("omega_peak", "must be >= 0 and finite");
  }
  bool warmup = spec.kind == ScheduleKind::warmup_retention ||
                spec.kind == ScheduleKind::warmup_decay;
  bool decay = spec.kind == ScheduleKind::linear_decay ||
               spec.kind == ScheduleKind::warmup_decay;
  if (warmup) {
    if (!(spec.omega_floor >= 0.0) || !std::isfinite(spec.omega_floor)) {
      throw ConfigError("omega_floor", "must be >= 0 and finite");
    }
    if (spec.omega_floor > spec.omega_peak) {
      throw ConfigError("omega_floor", "must not exceed omega_peak");
    }
    if (!(spec.warmup_fraction > 0.0) || !(spec.warmup_fraction < 1.0)) {
      throw ConfigError("warmup_fraction", "must lie in (0, 1)");
    }
    long long tw = warmup_steps(spec);
    if (tw < 1) {
      throw ConfigError("warmup_fraction",
                        "warmup window rounds to zero steps");
    }
    if (spec.kind == ScheduleKind::warmup_decay && tw >= spec.total_steps) {
      throw ConfigError("warmup_fraction",
                        "warmup window leaves no annealing steps");
    }
  }
  if (decay) {
    if (!(spec.omega_end >= 0.0) || !std::isfinite(spec.omega_end)) {
      throw ConfigError("omega_end", "must be >= 0 and finite");
    }
    if (spec.omega_end > spec.omega_peak) {
      throw ConfigError("omega_end", "must not exceed omega_peak");
    }
  }
}

namespace {

// Exact endpoint handling: cos(pi/2) is not exactly zero in floating point,
// so t == 0 and t == t_w return the defining values directly.
double warmup_value(const ScheduleSpec& spec, long long t, long long tw) {
  if (t == 0) return spec.omega_floor;
  if (t >= tw) return spec.omega_peak;
  double phase = M_PI * static_cast<double>(t) / (2.0 * static_cast<double>(tw));
  return spec.omega_floor +
         (spec.omega_peak - spec.omega_floor) * (1.0 - std::cos(phase));
}

}  // namespace

double omega_at(const ScheduleSpec& spec, long long t) {
  validate_schedule(spec);
  if (t < 0 || t > spec.total_steps) {
    throw InvalidStep("step " + std::to_string(t) + " outside [0, " +
                      std::to_string(spec.total_steps) + "]");
  }
  const long long T = spec.total_steps;
  switch (spec.kind) {
    case ScheduleKind::no_decay:
      return spec.omega_peak;
    case ScheduleKind::linear_decay: {
      if (t == 0) return spec.omega_peak;
      if (t == T) return spec.omega_end;
      double frac = static_cast<double>(t) / static_cast<double>(T);
      return spec.omega_peak + (spec.omega_end - spec.omega_peak) * frac;
    }
    case ScheduleKind::warmup_retention:
      return warmup_value(spec, t, warmup_steps(spec));
    case ScheduleKind::warmup_decay: {
      long long tw = warmup_steps(spec);
      if (t <= tw) return warmup_value(spec, t, tw);
      if (t == T) return spec.omega_end;
      double frac = static_cast<double>(t - tw) / static_cast<double>(T - tw);
      return spec.omega_peak + (spec.omega_end - spec.omega_peak) * frac;
    }
  }
  throw InvalidStep("unreachable schedule kind");
}

}  // namespace icpo
