"""Diagnostic paths of a grown tree and ensemble statistics over many runs."""

from __future__ import annotations

import statistics
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from leafgrow.growth import GrowthConfig, Policy, Trajectory, policy_distribution, run
from leafgrow.inference import LeafDistribution
from leafgrow.tree import Tree, path_attachments

LEAF_QUANTILES = (0.1, 0.5, 0.9)


@dataclass(frozen=True)
class PathReport:
    path: tuple[int, ...]
    attachment_count: int
    attachment_lengths: tuple[int, ...]
    terminal_leaf: int

    @property
    def mean_attachment_length(self) -> float:
        """Average creation-interval span per attachment; 0 for the root."""
        if not self.attachment_lengths:
            return 0.0
        return sum(self.attachment_lengths) / len(self.attachment_lengths)


def path_report(tree: Tree, leaf: int) -> PathReport:
    path = tree.path_to_root(leaf)
    created = tree.created_at
    lengths = tuple(created[c] - created[p] for c, p in path_attachments(path))
    return PathReport(path, len(lengths), lengths, leaf)


def longest_path(tree: Tree) -> PathReport:
    """Leaf-to-root path with the most attachments; smallest leaf id on ties."""
    parents = tree.parents
    depth = [0] * len(parents)
    for v in range(1, len(parents)):
        depth[v] = depth[parents[v]] + 1
    best = max(tree.leaves(), key=lambda leaf: (depth[leaf], -leaf))
    return path_report(tree, best)


def max_posterior_path(tree: Tree, dist: LeafDistribution) -> PathReport:
    if set(dist.leaves) != set(tree.leaves()):
        raise ValueError("distribution does not cover the leaf set")
    return path_report(tree, dist.argmax())


def highlighted_path(traj: Trajectory) -> PathReport:
    """Longest path for the prior policy, else the most probable leaf's path."""
    config = traj.config
    if config.policy.mode == "bayes" and config.policy.bayes == 0:
        return longest_path(traj.tree)
    dist = policy_distribution(traj.tree, config, config.intervals)
    return max_posterior_path(traj.tree, dist)


@dataclass(frozen=True)
class RunStats:
    run_index: int
    highlighted_count: int
    mean_attachment_length: float
    longest_count: int
    leaf_counts: tuple[int, ...]
    vertex_count: int


@dataclass(frozen=True)
class PolicyStats:
    policy: str
    runs: int
    highlighted_count_mean: float
    highlighted_count_median: float
    mean_attachment_length_mean: float
    mean_attachment_length_median: float
    longest_count_median: float
    vertex_count_mean: float
    # Quantiles of the leaf count at each interval t = 0..N-1, one row per t.
    leaf_count_quantiles: tuple[tuple[float, ...], ...]


@dataclass(frozen=True)
class EnsembleSummary:
    config: GrowthConfig
    runs: int
    policies: dict[str, PolicyStats]


def run_stats(traj: Trajectory) -> RunStats:
    report = highlighted_path(traj)
    return RunStats(
        run_index=traj.run_index,
        highlighted_count=report.attachment_count,
        mean_attachment_length=report.mean_attachment_length,
        longest_count=longest_path(traj.tree).attachment_count,
        leaf_counts=(1,) + tuple(f.metrics["leaf_count"] for f in traj.frames),
        vertex_count=len(traj.tree),
    )


def _one(args: tuple[GrowthConfig, int]) -> RunStats:
    config, index = args
    return run_stats(run(config, run_index=index))


def summarize(policy: str, stats: Sequence[RunStats]) -> PolicyStats:
    stats = sorted(stats, key=lambda s: s.run_index)
    counts = [s.highlighted_count for s in stats]
    lengths = [s.mean_attachment_length for s in stats]
    leaf_matrix = np.array([s.leaf_counts for s in stats], dtype=float)
    quantiles = np.quantile(leaf_matrix, LEAF_QUANTILES, axis=0).T
    return PolicyStats(
        policy=policy,
        runs=len(stats),
        highlighted_count_mean=statistics.fmean(counts),
        highlighted_count_median=float(statistics.median(counts)),
        mean_attachment_length_mean=statistics.fmean(lengths),
        mean_attachment_length_median=float(statistics.median(lengths)),
        longest_count_median=float(statistics.median(s.longest_count for s in stats)),
        vertex_count_mean=statistics.fmean(s.vertex_count for s in stats),
        leaf_count_quantiles=tuple(tuple(float(x) for x in row) for row in quantiles),
    )


def ensemble(
    config: GrowthConfig,
    runs: int,
    policies: Sequence[Policy] | None = None,
    workers: int = 1,
) -> EnsembleSummary:
    """Run ``runs`` seeded trajectories per policy and aggregate path statistics.

    Run ``i`` of every policy uses the sub-streams keyed by ``(seed, i)``, so
    all policies see the same batch-size sequences and results do not depend
    on how runs are scheduled across ``workers``.
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    policies = list(policies) if policies else [config.policy]
    out = {}
    for policy in policies:
        cfg = replace(config, policy=policy)
        jobs = [(cfg, i) for i in range(runs)]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                stats = list(pool.map(_one, jobs, chunksize=max(1, runs // (4 * workers))))
        else:
            stats = [_one(job) for job in jobs]
        out[policy.name] = summarize(policy.name, stats)
    return EnsembleSummary(config, runs, out)
