import hashlib
import json
import math

import pydot
import pytest

from conftest import FIG2
from leafgrow import GrowthConfig, OscillatingQ, Policy, Tree, attachment_weights, ensemble, new_tree, run
from leafgrow.export import (
    canonical_json,
    export_dot,
    export_frames,
    export_metrics_csv,
    export_trajectory_json,
    load_trajectory_json,
)


def test_canonical_json():
    assert canonical_json({"b": 0.1, "a": [1, True, None, "x"]}) == '{"a":[1,true,null,"x"],"b":0.10000000000000001}'
    with pytest.raises(ValueError):
        canonical_json(math.nan)


class TestTrajectoryJson:
    def test_single_interval(self):
        d = json.loads(export_trajectory_json(run(GrowthConfig(intervals=1))))
        assert d["frames"] == []
        assert d["tree"] == {"parent": [-1], "created_at": [0]}

    @pytest.mark.parametrize(
        "config",
        [
            GrowthConfig(intervals=20, seed=5),
            GrowthConfig(intervals=20, seed=5, policy=Policy(bayes=1), q=0.25),
            GrowthConfig(intervals=20, seed=5, policy=Policy(bayes=2), q_oscillate=OscillatingQ(0, 0.8, 6)),
            GrowthConfig(intervals=20, seed=5, policy=Policy("branch", weighting="cumindeg", sharpen="exp", alpha=0.5)),
        ],
    )
    def test_round_trip(self, config):
        traj = run(config)
        text = export_trajectory_json(traj)
        back = load_trajectory_json(text)
        assert back.config == config
        assert back.tree.parents == traj.tree.parents
        assert back.tree.created_at == traj.tree.created_at
        assert export_trajectory_json(back) == text

    def test_byte_stable(self):
        config = GrowthConfig(intervals=25, seed=8, policy=Policy(bayes=2))
        assert export_trajectory_json(run(config)) == export_trajectory_json(run(config))

    def test_tampered_tree_rejected(self):
        d = json.loads(export_trajectory_json(run(GrowthConfig(intervals=8, seed=1))))
        d["tree"]["parent"][-1] = 0 if d["tree"]["parent"][-1] else 1
        with pytest.raises(ValueError):
            load_trajectory_json(json.dumps(d))


def _tree_from_pydot(text):
    (graph,) = pydot.graph_from_dot_data(text)
    created = {int(n.get_name()): int(n.get("created_at")) for n in graph.get_nodes() if n.get_name().isdigit()}
    parents = {v: -1 for v in created}
    labels = {}
    for e in graph.get_edges():
        child, parent = int(e.get_source()), int(e.get_destination())
        parents[child] = parent
        if e.get("label") is not None:
            labels[child] = int(e.get("label").strip('"'))
    order = sorted(created)
    tree = Tree.from_parents([parents[v] for v in order], [created[v] for v in order])
    return tree, labels or None


class TestDot:
    def test_root_only(self):
        text = export_dot(new_tree())
        assert "->" not in text
        (graph,) = pydot.graph_from_dot_data(text)
        assert [n.get_name() for n in graph.get_nodes()] == ["0"]

    def test_fig2_labels(self, fig2):
        text = export_dot(fig2, attachment_weights(fig2))
        assert text.count("->") == 11
        assert f'{FIG2["d2"]} -> {FIG2["r"]} [label="3"];' in text

    @pytest.mark.parametrize("seed", range(5))
    def test_round_trip_through_parser(self, seed):
        tree = run(GrowthConfig(intervals=12, seed=seed, policy=Policy(bayes=seed % 3))).tree
        text = export_dot(tree, attachment_weights(tree))
        again, labels = _tree_from_pydot(text)
        assert labels == attachment_weights(tree)
        assert export_dot(again, labels) == text


class TestFrames:
    def _read(self, path):
        rows = [line.split() for line in path.read_text().splitlines() if not line.startswith("#")]
        return [(int(r[0]), int(r[1]), int(r[2]), int(r[3]), float(r[4]), int(r[5]), int(r[6])) for r in rows]

    def test_bayes0_inventory(self, tmp_path):
        traj = run(GrowthConfig(intervals=10, seed=7))
        manifest = export_frames(traj, tmp_path)
        files = sorted(tmp_path.glob("frame_*.txt"))
        assert len(files) == 12
        assert [f["kind"] for f in manifest.files] == ["growth"] * 10 + ["complete", "highlight"]
        for path, entry in zip(files, manifest.files):
            assert hashlib.sha256(path.read_bytes()).hexdigest() == entry["sha256"]
            rows = self._read(path)
            assert [r[0] for r in rows] == sorted(r[0] for r in rows)
            assert math.fsum(r[4] for r in rows if r[3]) == pytest.approx(1.0, abs=1e-9)
            assert all(r[4] == -1 for r in rows if not r[3])

    def test_highlight_marks_max_posterior_path(self, tmp_path):
        from leafgrow.analysis import highlighted_path

        traj = run(GrowthConfig(intervals=10, seed=7, policy=Policy(bayes=2)))
        export_frames(traj, tmp_path)
        rows = self._read(tmp_path / "frame_012.txt")
        on_path = {r[0] for r in rows if r[6]}
        assert on_path == set(highlighted_path(traj).path)
        assert "max-probability" in (tmp_path / "frame_012.txt").read_text().splitlines()[0]

    def test_growth_frames_follow_tree(self, tmp_path):
        traj = run(GrowthConfig(intervals=6, seed=2))
        export_frames(traj, tmp_path)
        for i, frame in enumerate(traj.frames, start=2):
            rows = self._read(tmp_path / f"frame_{i:03d}.txt")
            assert {r[0] for r in rows if r[5]} == set(frame.new_ids)
            assert {r[0] for r in rows if r[3]} == set(frame.distribution.leaves)

    def test_rerun_identical_manifest(self, tmp_path):
        config = GrowthConfig(intervals=10, seed=7, policy=Policy(bayes=1))
        a = export_frames(run(config), tmp_path / "a")
        b = export_frames(run(config), tmp_path / "b")
        assert a == b
        assert (tmp_path / "a" / "manifest.json").read_bytes() == (tmp_path / "b" / "manifest.json").read_bytes()


class TestMetricsCsv:
    def test_single_run(self):
        text = export_metrics_csv(ensemble(GrowthConfig(intervals=5, seed=1), 1))
        lines = text.splitlines()
        assert lines[0] == "policy,statistic,value"
        assert "bayes0,runs,1" in lines

    def test_three_policies(self):
        summary = ensemble(GrowthConfig(intervals=8, seed=1), 30, [Policy(bayes=b) for b in (0, 1, 2)])
        text = export_metrics_csv(summary)
        assert {line.split(",")[0] for line in text.splitlines()[1:]} == {"bayes0", "bayes1", "bayes2"}
        assert export_metrics_csv(summary) == text
