"""Interval-by-interval growth driven by a seeded, stream-separated RNG."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from leafgrow.branching import WEIGHTINGS, SharpenSpec, branch_leaf_distribution, branch_weights
from leafgrow.errors import ConfigError
from leafgrow.inference import (
    LeafDistribution,
    global_likelihood,
    local_likelihood,
    mixture,
    oscillating_q,
    posterior,
    uniform_prior,
)
from leafgrow.tree import Tree, attachment_weights

# Fixed spawn-key labels. Batch sizes and target draws never share a stream,
# so the batch-size sequence does not depend on the policy.
STREAMS = {"batch": 0, "targets": 1}

PoissonMean = Union[float, Callable[[int], float]]


@dataclass(frozen=True)
class Policy:
    """How the leaf distribution is built each interval.

    ``mode="bayes"`` uses ``bayes`` case 0 (prior), 1 (global likelihood) or
    2 (local likelihood). ``mode="branch"`` uses degree-based branching.
    """

    mode: str = "bayes"
    bayes: int = 0
    weighting: str = "indeg"
    sharpen: str = "power"
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if self.mode not in ("bayes", "branch"):
            raise ConfigError(f"mode must be 'bayes' or 'branch', got {self.mode!r}")
        if self.mode == "bayes" and self.bayes not in (0, 1, 2):
            raise ConfigError(f"bayes case must be 0, 1 or 2, got {self.bayes!r}")
        if self.mode == "branch":
            if self.weighting not in WEIGHTINGS:
                raise ConfigError(f"weighting must be one of {WEIGHTINGS}, got {self.weighting!r}")
            try:
                SharpenSpec(self.sharpen, self.alpha)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None

    @property
    def name(self) -> str:
        if self.mode == "bayes":
            return f"bayes{self.bayes}"
        return f"branch-{self.weighting}-{self.sharpen}-{self.alpha:g}"

    def to_dict(self) -> dict:
        if self.mode == "bayes":
            return {"mode": "bayes", "bayes": self.bayes}
        return {
            "mode": "branch",
            "weighting": self.weighting,
            "sharpen": self.sharpen,
            "alpha": float(self.alpha),
        }


@dataclass(frozen=True)
class OscillatingQ:
    q_min: float
    q_max: float
    period: float

    def __post_init__(self) -> None:
        oscillating_q(0, self.q_min, self.q_max, self.period)

    def __call__(self, t: int) -> float:
        return oscillating_q(t, self.q_min, self.q_max, self.period)


@dataclass(frozen=True)
class GrowthConfig:
    """Runtime parameters of one growth run.

    ``poisson_mean`` may be a callable of the interval for a time-dependent
    rate. ``q`` mixes the prior back in for Bayes cases 1 and 2; ``q_oscillate``
    replaces it with a schedule when given.
    """

    intervals: int
    poisson_mean: PoissonMean = 2.0
    policy: Policy = field(default_factory=Policy)
    q: float = 0.0
    q_oscillate: OscillatingQ | None = None
    seed: int = 0
    prior: str = "uniform"

    def __post_init__(self) -> None:
        if not isinstance(self.intervals, int) or self.intervals < 1:
            raise ConfigError(f"intervals must be a positive integer, got {self.intervals!r}")
        if not callable(self.poisson_mean):
            if not math.isfinite(self.poisson_mean) or self.poisson_mean < 0:
                raise ConfigError(f"poisson mean must be finite and >= 0, got {self.poisson_mean}")
        if not 0 <= self.q <= 1:
            raise ConfigError(f"q must lie in [0, 1], got {self.q}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.prior != "uniform":
            raise ConfigError(f"unsupported prior {self.prior!r}")

    def mean_at(self, t: int) -> float:
        mu = self.poisson_mean(t) if callable(self.poisson_mean) else self.poisson_mean
        if not math.isfinite(mu) or mu < 0:
            raise ConfigError(f"poisson mean at t={t} must be finite and >= 0, got {mu}")
        return float(mu)

    def q_at(self, t: int) -> float:
        return self.q_oscillate(t) if self.q_oscillate is not None else self.q

    def to_dict(self) -> dict:
        mu = self.poisson_mean
        return {
            "intervals": self.intervals,
            "poisson_mean": float(mu) if not callable(mu) else getattr(mu, "__name__", repr(mu)),
            "policy": self.policy.to_dict(),
            "q": float(self.q),
            "q_oscillate": None
            if self.q_oscillate is None
            else {
                "q_min": float(self.q_oscillate.q_min),
                "q_max": float(self.q_oscillate.q_max),
                "period": float(self.q_oscillate.period),
            },
            "seed": self.seed,
            "prior": self.prior,
        }

    @classmethod
    def from_dict(cls, d: dict) -> GrowthConfig:
        osc = d.get("q_oscillate")
        mu = d["poisson_mean"]
        if isinstance(mu, str):
            raise ConfigError(f"cannot restore a custom poisson mean schedule {mu!r}")
        return cls(
            intervals=d["intervals"],
            poisson_mean=mu,
            policy=Policy(**d["policy"]),
            q=d.get("q", 0.0),
            q_oscillate=OscillatingQ(**osc) if osc else None,
            seed=d.get("seed", 0),
            prior=d.get("prior", "uniform"),
        )


@dataclass(frozen=True)
class FrameRecord:
    t: int
    new_ids: tuple[int, ...]
    attachments: tuple[tuple[int, int], ...]
    distribution: LeafDistribution
    metrics: dict


@dataclass
class Trajectory:
    config: GrowthConfig
    frames: list[FrameRecord]
    tree: Tree
    run_index: int = 0

    def batch_sizes(self) -> list[int]:
        return [len(f.new_ids) for f in self.frames]

    def replay(self) -> Tree:
        tree = Tree()
        for frame in self.frames:
            tree.append_batch(frame.t, [parent for _, parent in frame.attachments])
        return tree


def rng_stream(seed: int, purpose: str, run_index: int = 0) -> np.random.Generator:
    """Independent generator keyed by (seed, run index, purpose)."""
    ss = np.random.SeedSequence(seed, spawn_key=(run_index, STREAMS[purpose]))
    return np.random.Generator(np.random.PCG64(ss))


def draw_batch_size(rng: np.random.Generator, mu: float) -> int:
    if mu == 0:
        return 0
    return int(rng.poisson(mu))


def sample_targets(rng: np.random.Generator, dist: LeafDistribution, n: int) -> list[int]:
    """``n`` i.i.d. draws with replacement by inverse-CDF lookup."""
    if n <= 0:
        return []
    cdf = np.cumsum(np.asarray(dist.probs, dtype=float))
    u = rng.random(n) * cdf[-1]
    idx = np.searchsorted(cdf, u, side="right")
    idx = np.minimum(idx, len(cdf) - 1)
    return [dist.leaves[i] for i in idx]


def policy_distribution(tree: Tree, config: GrowthConfig, t: int) -> LeafDistribution:
    """Leaf distribution the configured policy assigns to the current snapshot."""
    policy = config.policy
    prior = uniform_prior(tree)
    if policy.mode == "branch":
        log = policy.sharpen == "exp"
        weights = branch_weights(tree, policy.weighting, SharpenSpec(policy.sharpen, policy.alpha), log=log)
        # Exact rationals are for small worked examples; growth runs in floats.
        weights = {v: float(w) for v, w in weights.items()}
        return branch_leaf_distribution(tree, weights, log=log)
    # A root-only snapshot has no history to learn from.
    if policy.bayes == 0 or len(tree) == 1:
        return prior
    weights = attachment_weights(tree)
    if policy.bayes == 1:
        likelihood = global_likelihood(tree, weights)
    else:
        likelihood = local_likelihood(tree, weights)
    return mixture(prior, posterior(prior, likelihood), config.q_at(t))


def run(config: GrowthConfig, run_index: int = 0) -> Trajectory:
    """Grow a tree over intervals 1..N-1 from the root alone at interval 0."""
    batch_rng = rng_stream(config.seed, "batch", run_index)
    target_rng = rng_stream(config.seed, "targets", run_index)
    tree = Tree()
    frames = []
    for t in range(1, config.intervals):
        n = draw_batch_size(batch_rng, config.mean_at(t))
        dist = policy_distribution(tree, config, t)
        targets = sample_targets(target_rng, dist, n)
        new_ids = tree.append_batch(t, targets)
        frames.append(
            FrameRecord(
                t=t,
                new_ids=tuple(new_ids),
                attachments=tuple(zip(new_ids, targets)),
                distribution=dist,
                metrics={
                    "batch_size": n,
                    "leaf_count": len(tree.leaves()),
                    "vertex_count": len(tree),
                },
            )
        )
    return Trajectory(config, frames, tree, run_index)
