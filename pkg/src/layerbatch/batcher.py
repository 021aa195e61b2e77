"""Initial batch assignment: chunked feature extraction, model inference
with argmax assignment, and a model-free spatial fallback."""

from __future__ import annotations

import math
import random

import numpy as np

from .model import GeneratorModel
from .netlist import GridDims, Net, Netlist

FEATURE_DIM = 16
MAX_FEATURE_PINS = 8


def chunk_size(n_nets: int) -> int:
    """Adaptive chunk size: min(1e5, max(1e4, n/10))."""
    if n_nets < 1:
        raise ValueError("n_nets must be >= 1")
    return min(10**5, max(10**4, n_nets // 10))


def extract_features(net: Net, grid: GridDims) -> np.ndarray:
    """16 normalized coordinates: up to 8 (x/x_g, y/y_g) pairs in pin order.

    Nets with more than 8 pins are truncated to the first 8; shorter nets
    are padded by cyclically repeating their own pin pairs.
    """
    pins = net.pins[:MAX_FEATURE_PINS]
    row = np.empty(FEATURE_DIM, dtype=np.float32)
    for slot in range(MAX_FEATURE_PINS):
        p = pins[slot % len(pins)]
        row[2 * slot] = p.x / grid.x_g
        row[2 * slot + 1] = p.y / grid.y_g
    return row


def feature_matrix(nets: list[Net], grid: GridDims) -> np.ndarray:
    out = np.empty((len(nets), FEATURE_DIM), dtype=np.float32)
    for i, net in enumerate(nets):
        out[i] = extract_features(net, grid)
    return out


def infer(model: GeneratorModel, features: np.ndarray) -> np.ndarray:
    """Per-row probability vectors over the model's batches."""
    return model.forward(features)


def assign_batches(
    netlist: Netlist,
    model: GeneratorModel,
    chunk: int | None = None,
) -> np.ndarray:
    """Argmax batch index per net, processed in adaptive chunks.

    Inference is per-row, so chunk boundaries never change the result;
    argmax ties break toward the lowest batch index.
    """
    n = len(netlist.nets)
    step = chunk if chunk is not None else chunk_size(n)
    assignment = np.empty(n, dtype=np.int64)
    for start in range(0, n, step):
        nets = netlist.nets[start : start + step]
        probs = infer(model, feature_matrix(nets, netlist.grid))
        assignment[start : start + len(nets)] = np.argmax(probs, axis=1)
    return assignment


def fallback_assign(netlist: Netlist, n_batches: int, seed: int = 0) -> np.ndarray:
    """Model-free assignment: seeded spatial-grid partition of net centers.

    The 2D grid is tiled into roughly n_batches rectangles; each net maps to
    the tile of its center cell, and a seeded permutation maps tiles to
    batch indices.
    """
    if n_batches < 1:
        raise ValueError("n_batches must be >= 1")
    grid = netlist.grid
    tx = max(1, math.ceil(math.sqrt(n_batches)))
    ty = max(1, math.ceil(n_batches / tx))
    perm = list(range(n_batches))
    random.Random(seed).shuffle(perm)
    assignment = np.empty(len(netlist.nets), dtype=np.int64)
    for i, net in enumerate(netlist.nets):
        cx, cy = net.center
        col = min(tx - 1, int(cx) * tx // grid.x_g)
        row = min(ty - 1, int(cy) * ty // grid.y_g)
        assignment[i] = perm[(row * tx + col) % n_batches]
    return assignment


def group_assignment(assignment: np.ndarray, n_batches: int) -> list[list[int]]:
    """Net ids per batch, ascending within each batch."""
    batches: list[list[int]] = [[] for _ in range(n_batches)]
    for nid, b in enumerate(assignment):
        batches[int(b)].append(nid)
    return batches
