"""Path-based likelihoods over leaves and the Bayes posterior built from them."""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from leafgrow.errors import ConfigError, DegenerateEvidenceError
from leafgrow.tree import Tree, attachment_weights

Number = Union[float, Fraction, int]


@dataclass(frozen=True)
class LeafDistribution:
    """Probabilities over the leaf set, leaves in ascending id order."""

    leaves: tuple[int, ...]
    probs: tuple[Number, ...]

    def __post_init__(self) -> None:
        if len(self.leaves) != len(self.probs):
            raise ValueError("leaves and probs differ in length")

    def __len__(self) -> int:
        return len(self.leaves)

    def __iter__(self) -> Iterator[tuple[int, Number]]:
        return iter(zip(self.leaves, self.probs))

    def __getitem__(self, leaf: int) -> Number:
        return self.probs[self.leaves.index(leaf)]

    def as_dict(self) -> dict[int, Number]:
        return dict(zip(self.leaves, self.probs))

    def argmax(self) -> int:
        """Most probable leaf; the smallest id wins ties."""
        best = max(self.probs)
        return min(leaf for leaf, p in self if p == best)


@dataclass(frozen=True)
class LikelihoodVector:
    """Unnormalized likelihood per leaf, stored linearly or as logarithms."""

    leaves: tuple[int, ...]
    values: tuple[Number, ...]
    log: bool = False

    def as_dict(self) -> dict[int, Number]:
        return dict(zip(self.leaves, self.values))

    def linear(self) -> tuple[float, ...]:
        if not self.log:
            return tuple(self.values)
        return tuple(math.exp(v) for v in self.values)


def uniform_prior(tree: Tree, exact: bool = False) -> LeafDistribution:
    leaves = tuple(tree.leaves())
    p = Fraction(1, len(leaves)) if exact else 1.0 / len(leaves)
    return LeafDistribution(leaves, (p,) * len(leaves))


def global_likelihood(tree: Tree, weights: dict[int, int] | None = None) -> LikelihoodVector:
    """Weighted path length per leaf: the sum of attachment weights to the root.

    The root-only tree yields ``(root, 0)``; callers fall back to the prior.
    """
    if weights is None:
        weights = attachment_weights(tree)
    leaves = tuple(tree.leaves())
    values = tuple(sum(weights[v] for v in tree.path_to_root(leaf)[:-1]) for leaf in leaves)
    return LikelihoodVector(leaves, values, log=False)


def local_likelihood(
    tree: Tree, weights: dict[int, int] | None = None, log: bool = True
) -> LikelihoodVector:
    """Product of attachment weights along each leaf's path to the root.

    Held as a sum of logs by default; integer products overflow floats on
    deep, bushy trees. With ``log=False`` the exact integer product is kept.
    """
    if weights is None:
        weights = attachment_weights(tree)
    leaves = tuple(tree.leaves())
    values: list[Number] = []
    for leaf in leaves:
        path = tree.path_to_root(leaf)[:-1]
        if log:
            values.append(math.fsum(math.log(weights[v]) for v in path))
        else:
            values.append(math.prod(weights[v] for v in path))
    return LikelihoodVector(leaves, tuple(values), log=log)


def posterior(prior: LeafDistribution, likelihood: LikelihoodVector) -> LeafDistribution:
    """Bayes' rule: prior times likelihood, divided by the evidence.

    Log likelihoods are shifted by their maximum before exponentiating.
    Fraction inputs with a linear likelihood stay exact.
    """
    if prior.leaves != likelihood.leaves:
        raise ValueError("prior and likelihood cover different leaf sets")
    if likelihood.log:
        shift = max(likelihood.values)
        joint = [p * math.exp(v - shift) for p, v in zip(prior.probs, likelihood.values)]
    else:
        joint = [p * v for p, v in zip(prior.probs, likelihood.values)]
    if any(x < 0 for x in joint):
        raise DegenerateEvidenceError("negative likelihood or prior mass")
    evidence = sum(joint) if _exact(joint) else math.fsum(joint)
    if evidence <= 0:
        raise DegenerateEvidenceError("likelihood has no mass under the prior")
    return LeafDistribution(prior.leaves, tuple(x / evidence for x in joint))


def mixture(prior: LeafDistribution, post: LeafDistribution, q: Number) -> LeafDistribution:
    """``q * prior + (1 - q) * post`` leaf by leaf."""
    if not 0 <= q <= 1:
        raise ConfigError(f"mixture weight q={q} outside [0, 1]")
    if prior.leaves != post.leaves:
        raise ValueError("prior and posterior cover different leaf sets")
    if q == 1:
        return prior
    if q == 0:
        return post
    return LeafDistribution(
        prior.leaves, tuple(q * a + (1 - q) * b for a, b in zip(prior.probs, post.probs))
    )


def oscillating_q(t: int, q_min: float, q_max: float, period: float) -> float:
    """Raised-cosine schedule: ``q_max`` at t=0, ``q_min`` half a period later."""
    if not 0 <= q_min <= q_max <= 1:
        raise ConfigError(f"need 0 <= q_min <= q_max <= 1, got {q_min}, {q_max}")
    if period < 1:
        raise ConfigError(f"period must be >= 1, got {period}")
    return q_min + (q_max - q_min) * (1 + math.cos(2 * math.pi * t / period)) / 2


def _exact(values: Sequence[Number]) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)
