"""Training-set construction from the batching engine's export files.

The engine exports two text files per batching run: ``<prefix>.nets`` (a
``grid`` header, then per net a ``net <id> <batch> <hpwl>`` line followed by
its ``pin``/``hseg``/``vseg`` geometry) and ``<prefix>.edges`` (conflict
pairs ``<i> <j>``).  This module turns them into tensor-ready arrays:
feature rows, reference batch labels, net centers, conflict pairs, and
shared-pin pairs.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from layerbatch.batcher import extract_features
from layerbatch.netlist import GridDims, Net, Orientation, Pin, Segment


class DatasetError(ValueError):
    """Malformed export files or an empty retained set."""


@dataclass
class TrainingExample:
    net_id: int  # id in the source export
    features: np.ndarray  # (16,) float32, values in [0, 1]
    batch: int  # dense reference label in [0, B)
    center: tuple[float, float]


@dataclass
class TrainingSet:
    examples: list[TrainingExample]
    n_batches: int
    features: np.ndarray = field(init=False)  # (N, 16) float32
    labels: np.ndarray = field(init=False)  # (N,) int64
    centers: np.ndarray = field(init=False)  # (N, 2) float64
    seg_pairs: np.ndarray = field(default_factory=lambda: np.empty((0, 2), dtype=np.int64))
    pin_pairs: np.ndarray = field(default_factory=lambda: np.empty((0, 2), dtype=np.int64))

    def __post_init__(self) -> None:
        self.features = np.stack([e.features for e in self.examples]).astype(np.float32)
        self.labels = np.array([e.batch for e in self.examples], dtype=np.int64)
        self.centers = np.array([e.center for e in self.examples], dtype=np.float64)

    def __len__(self) -> int:
        return len(self.examples)


def _parse_nets(stream: Iterable[str]):
    grid: GridDims | None = None
    nets: list[tuple[int, int, Net]] = []  # (net id, batch id, geometry)
    cur: list | None = None  # [net id, batch id, pins, segments]

    def finish():
        nonlocal cur
        if cur is not None:
            nid, batch, pins, segments = cur
            net = Net(nid, pins)
            net.segments = segments
            nets.append((nid, batch, net))
            cur = None

    for line_no, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "grid":
                grid = GridDims(int(parts[1]), int(parts[2]), int(parts[3]))
            elif parts[0] == "net":
                finish()
                cur = [int(parts[1]), int(parts[2]), [], []]
            elif parts[0] == "pin":
                cur[2].append(Pin(int(parts[1]), int(parts[2]), int(parts[3])))
            elif parts[0] in ("hseg", "vseg"):
                orient = (
                    Orientation.HORIZONTAL if parts[0] == "hseg" else Orientation.VERTICAL
                )
                cur[3].append(
                    Segment(orient, int(parts[1]), int(parts[2]), int(parts[3]), int(parts[4]))
                )
            else:
                raise DatasetError(f"line {line_no}: unknown record {parts[0]!r}")
        except (IndexError, ValueError, TypeError) as exc:
            if isinstance(exc, DatasetError):
                raise
            raise DatasetError(f"line {line_no}: malformed record {line!r}") from exc
    finish()
    if grid is None:
        raise DatasetError("missing grid header in nets file")
    return grid, nets


def _parse_edges(stream: Iterable[str]) -> list[tuple[int, int]]:
    pairs = []
    for line_no, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DatasetError(f"edge line {line_no}: expected two ids, got {line!r}")
        pairs.append((int(parts[0]), int(parts[1])))
    return pairs


def build_training_set(
    nets_stream: Iterable[str] | TextIO,
    edges_stream: Iterable[str] | TextIO,
    min_batch_size: int = 160,
) -> TrainingSet:
    """Build the training set, keeping only nets whose reference batch holds
    strictly more than ``min_batch_size`` nets.

    Retained batches are relabelled densely ``0..B-1`` in ascending original
    batch id.  Conflict pairs come from the edge file; shared-pin pairs are
    recomputed from pin geometry and carry one entry per shared pin location.
    """
    grid, raw_nets = _parse_nets(nets_stream)
    edge_pairs = _parse_edges(edges_stream)

    sizes = Counter(batch for _, batch, _ in raw_nets)
    retained_batches = sorted(b for b, size in sizes.items() if size > min_batch_size)
    if not retained_batches:
        raise DatasetError(
            f"no batch exceeds min_batch_size={min_batch_size}; nothing to train on"
        )
    relabel = {b: i for i, b in enumerate(retained_batches)}

    examples: list[TrainingExample] = []
    local = {}  # source net id -> dataset row
    pin_owner: dict[tuple[int, int, int], list[int]] = defaultdict(list)
    for nid, batch, net in raw_nets:
        if batch not in relabel:
            continue
        row = len(examples)
        local[nid] = row
        examples.append(
            TrainingExample(
                net_id=nid,
                features=extract_features(net, grid),
                batch=relabel[batch],
                center=net.center,
            )
        )
        for p in net.pins:
            pin_owner[(p.x, p.y, p.layer)].append(row)

    seg_pairs = sorted(
        (local[i], local[j]) for i, j in edge_pairs if i in local and j in local
    )
    pin_pairs = []
    for rows in pin_owner.values():
        rows = sorted(set(rows))
        for a in range(len(rows)):
            for b in range(a + 1, len(rows)):
                pin_pairs.append((rows[a], rows[b]))
    pin_pairs.sort()

    dataset = TrainingSet(examples, n_batches=len(retained_batches))
    if seg_pairs:
        dataset.seg_pairs = np.array(seg_pairs, dtype=np.int64)
    if pin_pairs:
        dataset.pin_pairs = np.array(pin_pairs, dtype=np.int64)
    return dataset


def load_training_set(nets_path: str, edges_path: str, min_batch_size: int = 160) -> TrainingSet:
    with open(nets_path, encoding="utf-8") as nets_fh, open(
        edges_path, encoding="utf-8"
    ) as edges_fh:
        return build_training_set(nets_fh, edges_fh, min_batch_size)
