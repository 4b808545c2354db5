import pytest
from hypothesis import strategies as st

from leafgrow import GrowthConfig, Policy, Tree, new_tree, run

# Named vertices of the worked example: three deep vertices attach to the
# root at t=1, one leaf and three deep vertices at t=2, four leaves at t=3.
FIG2_NAMES = ["r", "d1", "d2", "d3", "l1", "d4", "d5", "d6", "l2", "l3", "l4", "l5"]
FIG2 = {name: i for i, name in enumerate(FIG2_NAMES)}
FIG2_LEAVES = [FIG2[n] for n in ("l1", "l2", "l3", "l4", "l5")]


def build_fig2() -> Tree:
    tree = new_tree()
    tree.append_batch(1, [FIG2["r"]] * 3)
    tree.append_batch(2, [FIG2["d1"], FIG2["d2"], FIG2["d2"], FIG2["d3"]])
    tree.append_batch(3, [FIG2["d4"], FIG2["d4"], FIG2["d5"], FIG2["d6"]])
    return tree


@pytest.fixture
def fig2() -> Tree:
    return build_fig2()


def corpus_tree(seed: int) -> Tree:
    """Seeded random tree: mu=2, N in 1..12, policy cycling through cases 0-2."""
    config = GrowthConfig(
        intervals=1 + seed % 12, poisson_mean=2.0, policy=Policy(bayes=seed % 3), seed=seed
    )
    return run(config).tree


@pytest.fixture(scope="session")
def corpus() -> list[Tree]:
    return [corpus_tree(s) for s in range(200)]


@st.composite
def trees(draw, max_batches: int = 8, max_batch: int = 5) -> Tree:
    tree = new_tree()
    for t in range(1, draw(st.integers(0, max_batches)) + 1):
        leaves = tree.leaves()
        picks = draw(st.lists(st.integers(0, len(leaves) - 1), max_size=max_batch))
        tree.append_batch(t, [leaves[i] for i in picks])
    return tree
