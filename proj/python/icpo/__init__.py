"""Preference-fused group-relative reward/advantage pipeline."""

from icpo._core import (
    build_pairs,
    fuse,
    mean_logprob,
    normalize,
    omega_at,
    preference_scores,
    rank_by_confidence,
    replay_appendix,
    score_group,
    train_metrics,
    verifiable_reward,
)

__all__ = [
    "build_pairs",
    "fuse",
    "mean_logprob",
    "normalize",
    "omega_at",
    "preference_scores",
    "rank_by_confidence",
    "replay_appendix",
    "score_group",
    "train_metrics",
    "verifiable_reward",
]
