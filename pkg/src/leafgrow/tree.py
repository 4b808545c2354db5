"""Append-only, time-ordered rooted tree.

Vertex ids are dense integers assigned in creation order, root = 0. Because a
vertex can only attach to something strictly older, id order is a topological
order (parents before children) and reverse id order visits children first.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from leafgrow.errors import AttachmentError

ROOT = 0

# A path is the parent chain (v, parent(v), ..., root) as vertex ids.
Path = tuple[int, ...]


@dataclass(frozen=True)
class Vertex:
    id: int
    created_at: int
    parent: int | None


class Tree:
    """Rooted tree grown by attaching new vertices to current leaves.

    Starts as the root alone, created at interval 0, which also counts as the
    first leaf.
    """

    def __init__(self) -> None:
        self._created_at: list[int] = [0]
        self._parent: list[int] = [-1]
        self._children: list[list[int]] = [[]]
        self._leaves: set[int] = {ROOT}

    def __len__(self) -> int:
        return len(self._parent)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < len(self._parent)

    def __repr__(self) -> str:
        return f"Tree(vertices={len(self)}, leaves={len(self._leaves)}, last_t={self.last_time})"

    @property
    def last_time(self) -> int:
        return self._created_at[-1]

    @property
    def parents(self) -> Sequence[int]:
        """Parent id per vertex, -1 for the root."""
        return tuple(self._parent)

    @property
    def created_at(self) -> Sequence[int]:
        return tuple(self._created_at)

    def vertex(self, v: int) -> Vertex:
        self._check(v)
        p = self._parent[v]
        return Vertex(v, self._created_at[v], None if p < 0 else p)

    def vertices(self) -> list[Vertex]:
        return [self.vertex(v) for v in range(len(self))]

    def parent(self, v: int) -> int | None:
        self._check(v)
        p = self._parent[v]
        return None if p < 0 else p

    def children(self, v: int) -> tuple[int, ...]:
        self._check(v)
        return tuple(self._children[v])

    def is_leaf(self, v: int) -> bool:
        return v in self._leaves

    def leaves(self) -> list[int]:
        """Current leaf set in ascending id order."""
        return sorted(self._leaves)

    def path_to_root(self, v: int) -> Path:
        self._check(v)
        path = [v]
        while self._parent[v] >= 0:
            v = self._parent[v]
            path.append(v)
        return tuple(path)

    def append_batch(self, t: int, targets: Iterable[int]) -> list[int]:
        """Attach one new vertex per target, all created at interval ``t``.

        Targets are checked against the leaf set as it was before the batch,
        so new vertices can never be targets within their own interval. A
        leaf may appear several times.
        """
        targets = list(targets)
        if not targets:
            return []
        if t <= self.last_time:
            raise AttachmentError(
                f"interval {t} must exceed the latest creation time {self.last_time}"
            )
        snapshot = frozenset(self._leaves)
        for target in targets:
            if target not in snapshot:
                raise AttachmentError(f"target {target} is not a leaf of the current snapshot")
        new_ids = []
        for target in targets:
            v = len(self._parent)
            self._parent.append(target)
            self._created_at.append(t)
            self._children.append([])
            self._children[target].append(v)
            new_ids.append(v)
        self._leaves.difference_update(targets)
        self._leaves.update(new_ids)
        return new_ids

    def copy(self) -> Tree:
        other = Tree.__new__(Tree)
        other._created_at = list(self._created_at)
        other._parent = list(self._parent)
        other._children = [list(c) for c in self._children]
        other._leaves = set(self._leaves)
        return other

    @classmethod
    def from_parents(cls, parents: Sequence[int], created_at: Sequence[int]) -> Tree:
        """Rebuild a tree by replaying vertices grouped by creation interval."""
        if len(parents) != len(created_at) or not parents:
            raise AttachmentError("parents and created_at must be non-empty and equal length")
        if parents[0] != -1 or created_at[0] != 0:
            raise AttachmentError("vertex 0 must be the root created at interval 0")
        tree = cls()
        i = 1
        while i < len(parents):
            t = created_at[i]
            j = i
            while j < len(parents) and created_at[j] == t:
                j += 1
            tree.append_batch(t, parents[i:j])
            i = j
        return tree

    def _check(self, v: int) -> None:
        if v not in self:
            raise KeyError(f"unknown vertex id {v!r}")


def new_tree() -> Tree:
    return Tree()


def path_attachments(path: Path) -> list[tuple[int, int]]:
    """(child, parent) pairs along a path; empty for the root's path."""
    return list(zip(path[:-1], path[1:]))


def attachment_weights(tree: Tree) -> dict[int, int]:
    """Number of leaf-to-root paths through each attachment.

    Keyed by child id, since every non-root vertex issues exactly one
    attachment. The weight of ``y -> parent(y)`` is the leaf count of the
    subtree rooted at ``y``.
    """
    parents = tree.parents
    count = [0] * len(parents)
    for v in range(len(parents) - 1, 0, -1):
        if tree.is_leaf(v):
            count[v] = 1
        count[parents[v]] += count[v]
    return {v: count[v] for v in range(1, len(parents))}
