import pytest
from hypothesis import given, settings

from conftest import FIG2, FIG2_LEAVES, trees
from oracles import edge_traversals, leaf_set
from leafgrow import AttachmentError, attachment_weights, new_tree, path_attachments


class TestNewTree:
    def test_root_only(self):
        tree = new_tree()
        assert len(tree) == 1
        assert tree.leaves() == [0]
        assert tree.vertex(0).parent is None
        assert tree.vertex(0).created_at == 0

    def test_root_path_has_no_attachments(self):
        tree = new_tree()
        assert tree.path_to_root(0) == (0,)
        assert path_attachments(tree.path_to_root(0)) == []


class TestAppendBatch:
    def test_two_vertices_attach_to_root(self):
        tree = new_tree()
        ids = tree.append_batch(1, [0, 0])
        assert ids == [1, 2]
        assert tree.leaves() == [1, 2]
        assert tree.children(0) == (1, 2)

    def test_empty_batch(self, fig2):
        before = (fig2.parents, fig2.created_at, fig2.leaves())
        assert fig2.append_batch(4, []) == []
        assert (fig2.parents, fig2.created_at, fig2.leaves()) == before

    def test_fig2_batch(self, fig2):
        l2, l5 = FIG2["l2"], FIG2["l5"]
        new = fig2.append_batch(4, [l2, l2, l5])
        assert new == [12, 13, 14]
        assert l2 not in fig2.leaves() and l5 not in fig2.leaves()
        assert fig2.leaves() == [FIG2["l1"], FIG2["l3"], FIG2["l4"], 12, 13, 14]

    def test_rejects_deep_target(self, fig2):
        with pytest.raises(AttachmentError):
            fig2.append_batch(4, [FIG2["d4"]])

    def test_new_vertices_cannot_be_targets_in_same_batch(self):
        tree = new_tree()
        with pytest.raises(AttachmentError):
            tree.append_batch(1, [0, 1])
        assert len(tree) == 1

    def test_rejects_non_increasing_time(self, fig2):
        with pytest.raises(AttachmentError):
            fig2.append_batch(3, [FIG2["l1"]])

    def test_unknown_vertex(self, fig2):
        with pytest.raises(KeyError):
            fig2.path_to_root(99)


class TestPaths:
    def test_fig2_l2(self, fig2):
        names = ["l2", "d4", "d2", "r"]
        assert fig2.path_to_root(FIG2["l2"]) == tuple(FIG2[n] for n in names)

    def test_fig2_l1_has_two_attachments(self, fig2):
        path = fig2.path_to_root(FIG2["l1"])
        assert path_attachments(path) == [(FIG2["l1"], FIG2["d1"]), (FIG2["d1"], FIG2["r"])]

    def test_fig2_leaves(self, fig2):
        assert fig2.leaves() == FIG2_LEAVES


class TestAttachmentWeights:
    def test_fig2(self, fig2):
        w = attachment_weights(fig2)
        expected = {v: 1 for v in range(1, 12)}
        expected[FIG2["d2"]] = 3
        expected[FIG2["d4"]] = 2
        assert w == expected

    def test_root_only(self):
        assert attachment_weights(new_tree()) == {}

    def test_matches_enumeration_on_small_random_trees(self):
        from leafgrow import GrowthConfig, run

        for seed in range(50):
            tree = run(GrowthConfig(intervals=8, poisson_mean=2.0, seed=seed)).tree
            assert attachment_weights(tree) == edge_traversals(tree.parents)


@settings(max_examples=200, deadline=None)
@given(trees())
def test_tree_invariants(tree):
    parents, created = tree.parents, tree.created_at
    assert tree.leaves() == leaf_set(parents)
    for v in range(1, len(tree)):
        assert created[parents[v]] < created[v]
        assert len(tree.path_to_root(v)) - 1 <= created[v]
    w = attachment_weights(tree)
    assert w == edge_traversals(parents)
    if len(tree) >= 2:
        assert sum(w[c] for c in tree.children(0)) == len(tree.leaves())


@settings(max_examples=100, deadline=None)
@given(trees())
def test_replay_from_parents(tree):
    from leafgrow import Tree

    if len(tree) == 1:
        return
    again = Tree.from_parents(tree.parents, tree.created_at)
    assert again.parents == tree.parents and again.leaves() == tree.leaves()
