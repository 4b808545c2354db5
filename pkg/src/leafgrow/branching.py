"""Leaf distributions from root-to-leaf branching on vertex weights.

Starting at the root, probability mass is split among a vertex's children in
proportion to their weights. The mass arriving at each leaf is its
probability, i.e. the product of branching ratios along the path, which is
also where a large number of weighted random walks from the root would end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from leafgrow.errors import ZeroBranchError
from leafgrow.inference import LeafDistribution, Number
from leafgrow.tree import ROOT, Tree

WEIGHTINGS = ("unit", "indeg", "cumindeg")
SHARPEN_KINDS = ("power", "exp")


@dataclass(frozen=True)
class SharpenSpec:
    kind: str = "power"
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in SHARPEN_KINDS:
            raise ValueError(f"sharpen kind must be one of {SHARPEN_KINDS}, got {self.kind!r}")
        if not math.isfinite(self.alpha) or self.alpha < 0:
            raise ValueError(f"alpha must be finite and >= 0, got {self.alpha}")


def unit_weights(tree: Tree) -> dict[int, int]:
    return dict.fromkeys(range(len(tree)), 1)


def weighted_in_degree(tree: Tree) -> dict[int, int]:
    """Leaves start at 1; every other vertex sums its direct children.

    This equals the number of leaves in the vertex's subtree.
    """
    parents = tree.parents
    w = [0] * len(parents)
    for v in range(len(parents) - 1, -1, -1):
        if tree.is_leaf(v):
            w[v] = 1
        if v != ROOT:
            w[parents[v]] += w[v]
    return dict(enumerate(w))


def cumulative_in_degree(tree: Tree) -> dict[int, int]:
    """Number of descendants of each vertex (subtree size minus one)."""
    parents = tree.parents
    size = [1] * len(parents)
    for v in range(len(parents) - 1, 0, -1):
        size[parents[v]] += size[v]
    return {v: s - 1 for v, s in enumerate(size)}


def sharpen(weights: dict[int, Number], spec: SharpenSpec) -> dict[int, float]:
    if spec.kind == "power":
        if spec.alpha == 1:
            return dict(weights)
        alpha = int(spec.alpha) if float(spec.alpha).is_integer() else spec.alpha
        return {v: w**alpha for v, w in weights.items()}
    return {v: math.exp(spec.alpha * w) for v, w in weights.items()}


def branch_weights(
    tree: Tree, weighting: str, spec: SharpenSpec | None = None, log: bool = False
) -> dict[int, Number]:
    """Vertex weights ready for branching.

    For ``cumindeg`` a leaf has no descendants, so leaves are floored at 1
    after sharpening; otherwise two sibling leaves would share a 0/0 split.
    With ``log=True`` exponential sharpening returns ``alpha * w`` (the log
    of the sharpened weight) so that large subtrees cannot overflow.
    """
    if weighting == "unit":
        w: dict[int, Number] = unit_weights(tree)
    elif weighting == "indeg":
        w = weighted_in_degree(tree)
    elif weighting == "cumindeg":
        w = cumulative_in_degree(tree)
    else:
        raise ValueError(f"weighting must be one of {WEIGHTINGS}, got {weighting!r}")
    spec = spec or SharpenSpec()
    if log:
        if spec.kind == "exp":
            out = {v: spec.alpha * x for v, x in w.items()}
        else:
            out = {v: _log_power(x, spec.alpha) for v, x in w.items()}
        floor = 0.0
    else:
        out = sharpen(w, spec)
        floor = 1
    if weighting == "cumindeg":
        for leaf in tree.leaves():
            out[leaf] = max(out[leaf], floor)
    return out


def branch_leaf_distribution(
    tree: Tree, weights: dict[int, Number], log: bool = False
) -> LeafDistribution:
    """Leaf probabilities from branching ratios taken at every deep vertex.

    Integer or Fraction weights give an exact Fraction result. ``log=True``
    treats ``weights`` as log-weights and splits mass with a per-branch
    softmax.
    """
    exact = not log and all(isinstance(w, (int, Fraction)) for w in weights.values())
    one: Number = Fraction(1) if exact else 1.0
    mass: dict[int, Number] = {ROOT: one}
    for v in range(len(tree)):
        kids = tree.children(v)
        if not kids:
            continue
        m = mass.pop(v)
        if log:
            top = max(weights[c] for c in kids)
            if top == -math.inf:
                raise ZeroBranchError(f"all children of vertex {v} have zero weight")
            share = [math.exp(weights[c] - top) for c in kids]
        else:
            share = [weights[c] for c in kids]
        if any(s < 0 for s in share):
            raise ValueError(f"negative weight among children of vertex {v}")
        total = sum(share) if exact else math.fsum(share)
        if total == 0:
            raise ZeroBranchError(f"all children of vertex {v} have zero weight")
        for c, s in zip(kids, share):
            mass[c] = m * Fraction(s) / total if exact else m * s / total
    leaves = tuple(tree.leaves())
    return LeafDistribution(leaves, tuple(mass[leaf] for leaf in leaves))


def ratio_vector(dist: LeafDistribution) -> tuple[int, ...]:
    """Smallest integer vector proportional to an exact distribution."""
    probs = [Fraction(p) for p in dist.probs]
    lcm = math.lcm(*(p.denominator for p in probs))
    ints = [int(p * lcm) for p in probs]
    g = math.gcd(*ints)
    return tuple(i // g for i in ints)


def _log_power(x: Number, alpha: float) -> float:
    if x == 0:
        return 0.0 if alpha == 0 else -math.inf
    return alpha * math.log(x)
