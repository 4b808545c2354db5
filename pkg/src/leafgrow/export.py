"""Serialization: canonical JSON trajectories, DOT graphs, frame tables, CSV metrics.

Every writer is byte-stable for a given input so that file digests can be
used to check reproducibility.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from leafgrow import __version__
from leafgrow.analysis import EnsembleSummary, LEAF_QUANTILES, highlighted_path
from leafgrow.growth import FrameRecord, GrowthConfig, Trajectory, policy_distribution
from leafgrow.inference import LeafDistribution
from leafgrow.tree import Tree

FORMAT_NAME = "leafgrow-trajectory"
FORMAT_VERSION = 1
FRAME_COLUMNS = ("id", "created_at", "parent", "is_leaf", "prob", "is_new", "on_path")


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x}")
    return format(x, ".17g")


def canonical_json(obj) -> str:
    """JSON with sorted keys, no whitespace and floats at 17 significant digits."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, (float, Fraction)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ",".join(f"{json.dumps(k)}:{canonical_json(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def trajectory_to_dict(traj: Trajectory) -> dict:
    tree = traj.tree
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "run_index": traj.run_index,
        "config": traj.config.to_dict(),
        "frames": [
            {
                "t": f.t,
                "new_ids": list(f.new_ids),
                "attachments": [list(a) for a in f.attachments],
                "distribution": {
                    "leaves": list(f.distribution.leaves),
                    "probs": [float(p) for p in f.distribution.probs],
                },
                "metrics": f.metrics,
            }
            for f in traj.frames
        ],
        "tree": {"parent": list(tree.parents), "created_at": list(tree.created_at)},
    }


def export_trajectory_json(traj: Trajectory) -> str:
    return canonical_json(trajectory_to_dict(traj)) + "\n"


def load_trajectory_json(text: str) -> Trajectory:
    """Inverse of :func:`export_trajectory_json`; the tree is rebuilt by replay."""
    d = json.loads(text)
    if d.get("format") != FORMAT_NAME:
        raise ValueError(f"not a {FORMAT_NAME} document")
    frames = [
        FrameRecord(
            t=f["t"],
            new_ids=tuple(f["new_ids"]),
            attachments=tuple(tuple(a) for a in f["attachments"]),
            distribution=LeafDistribution(
                tuple(f["distribution"]["leaves"]), tuple(f["distribution"]["probs"])
            ),
            metrics=f["metrics"],
        )
        for f in d["frames"]
    ]
    traj = Trajectory(GrowthConfig.from_dict(d["config"]), frames, Tree(), d.get("run_index", 0))
    traj.tree = traj.replay()
    stored = d["tree"]
    if list(traj.tree.parents) != stored["parent"] or list(traj.tree.created_at) != stored["created_at"]:
        raise ValueError("replayed attachments do not reproduce the stored tree")
    return traj


def export_dot(tree: Tree, weights: dict[int, int] | None = None) -> str:
    """DOT digraph with edges drawn child -> parent, as attachments point."""
    lines = ["digraph leafgrow {", "  rankdir=RL;"]
    created = tree.created_at
    for v in range(len(tree)):
        shape = "doublecircle" if tree.is_leaf(v) else "circle"
        lines.append(f'  {v} [label="{v}", created_at={created[v]}, shape={shape}];')
    for v, p in enumerate(tree.parents):
        if p < 0:
            continue
        if weights is None:
            lines.append(f"  {v} -> {p};")
        else:
            lines.append(f'  {v} -> {p} [label="{weights[v]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RunManifest:
    config: dict
    version: str
    files: tuple[dict, ...]

    def to_json(self) -> str:
        return canonical_json(
            {"config": self.config, "tool_version": self.version, "files": list(self.files)}
        ) + "\n"


def file_entry(path: Path, root: Path, kind: str) -> dict:
    data = path.read_bytes()
    return {
        "path": path.relative_to(root).as_posix(),
        "kind": kind,
        "bytes": len(data),
        "sha256": hashlib.sha256(data).hexdigest(),
    }


def frame_table(
    tree: Tree,
    upto: int,
    dist: LeafDistribution,
    new_t: int | None = None,
    on_path: frozenset[int] = frozenset(),
    header: str = "",
) -> str:
    """Whitespace-delimited rows for vertices ``0..upto-1``.

    Leaves are the support of ``dist``; their sampling probability is in
    ``prob``, every other vertex gets -1.
    """
    probs = dist.as_dict()
    parents = tree.parents
    created = tree.created_at
    out = []
    if header:
        out.append(f"# {header}")
    out.append("# " + " ".join(FRAME_COLUMNS))
    for v in range(upto):
        p = probs.get(v)
        out.append(
            " ".join(
                (
                    str(v),
                    str(created[v]),
                    str(parents[v]),
                    "1" if p is not None else "0",
                    _format_float(float(p)) if p is not None else "-1",
                    "1" if new_t is not None and created[v] == new_t else "0",
                    "1" if v in on_path else "0",
                )
            )
        )
    return "\n".join(out) + "\n"


def frame_tables(traj: Trajectory) -> list[tuple[str, str]]:
    """(kind, text) for each frame: one per interval, then complete, then highlight.

    The interval frame for ``t > 0`` shows the tree just after that interval's
    batch; ``is_leaf``/``prob`` describe the leaves new vertices were sampled
    from and ``is_new`` marks the batch itself.
    """
    tree = traj.tree
    root_only = LeafDistribution((0,), (1.0,))
    tables = [("growth", frame_table(tree, 1, root_only, header="growth t=0"))]
    upto = 1
    for f in traj.frames:
        upto += len(f.new_ids)
        tables.append(
            ("growth", frame_table(tree, upto, f.distribution, new_t=f.t, header=f"growth t={f.t}"))
        )
    config = traj.config
    final = policy_distribution(tree, config, config.intervals)
    tables.append(("complete", frame_table(tree, len(tree), final, header="complete")))
    report = highlighted_path(traj)
    label = "longest" if config.policy.name == "bayes0" else "max-probability"
    tables.append(
        (
            "highlight",
            frame_table(
                tree,
                len(tree),
                final,
                on_path=frozenset(report.path),
                header=f"highlight path={label} leaf={report.terminal_leaf} "
                f"attachments={report.attachment_count}",
            ),
        )
    )
    return tables


def export_frames(traj: Trajectory, directory: str | Path) -> RunManifest:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, (kind, text) in enumerate(frame_tables(traj), start=1):
        path = directory / f"frame_{i:03d}.txt"
        path.write_text(text, encoding="utf-8")
        entries.append(file_entry(path, directory, kind))
    manifest = RunManifest(traj.config.to_dict(), __version__, tuple(entries))
    (directory / "manifest.json").write_text(manifest.to_json(), encoding="utf-8")
    return manifest


def export_metrics_csv(summary: EnsembleSummary) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["policy", "statistic", "value"])
    for name in sorted(summary.policies):
        s = summary.policies[name]
        rows = [
            ("runs", s.runs),
            ("highlighted_count_mean", s.highlighted_count_mean),
            ("highlighted_count_median", s.highlighted_count_median),
            ("mean_attachment_length_mean", s.mean_attachment_length_mean),
            ("mean_attachment_length_median", s.mean_attachment_length_median),
            ("longest_count_median", s.longest_count_median),
            ("vertex_count_mean", s.vertex_count_mean),
        ]
        for t, qs in enumerate(s.leaf_count_quantiles):
            for q, value in zip(LEAF_QUANTILES, qs):
                rows.append((f"leaf_count_q{round(q * 100):02d}_t{t:03d}", value))
        for stat, value in rows:
            writer.writerow([name, stat, value if isinstance(value, int) else _format_float(value)])
    return buf.getvalue()
