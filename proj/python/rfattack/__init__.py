"""Reward-free attack laboratory for small turn-based Markov games.

The heavy lifting lives in the compiled extension; this package re-exports
its surface: game engines, entropy math, tabular agents, the reward-free
explore/rollout/plan pipeline, and the swap-in evaluation protocol.
"""

from ._core import (
    Game,
    GameState,
    Player,
    QTable,
    RfaError,
    empirical_distribution,
    evaluate_swap_in,
    learn_victim_entropy,
    renyi_entropy,
    run_pipeline,
    sample_bound,
    shannon_entropy,
    train_attacker,
    train_victim,
    verify_theorem_one,
)

__all__ = [
    "Game",
    "GameState",
    "Player",
    "QTable",
    "RfaError",
    "empirical_distribution",
    "evaluate_swap_in",
    "learn_victim_entropy",
    "renyi_entropy",
    "run_pipeline",
    "sample_bound",
    "shannon_entropy",
    "train_attacker",
    "train_victim",
    "verify_theorem_one",
]
