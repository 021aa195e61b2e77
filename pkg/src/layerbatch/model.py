"""Feed-forward generator model: in-memory representation, forward pass,
and the binary weight-file format shared with the trainer.

File layout (little endian):

* magic ``LBGEN1`` (6 bytes)
* uint32 feature_dim, uint32 n_batches, uint32 n_layers
* per layer: uint32 rows (input width), uint32 cols (output width),
  uint8 tag length + ASCII activation tag (``linear`` or
  ``leaky_relu:<slope>``), uint8 residual flag, uint8 layer-norm flag,
  rows*cols float32 weights (row major), cols float32 biases
* uint32 CRC32 of all preceding bytes

Forward semantics per layer, identical on both sides of the format:
``z = x @ W + b``; parameter-free layer norm (eps 1e-5) if flagged; the
activation; ``+ x`` if the residual flag is set.  A softmax after the last
layer yields the per-net batch probability vector.
"""

from __future__ import annotations

import io
import struct
import zlib
from dataclasses import dataclass

import numpy as np

MAGIC = b"LBGEN1"
LAYER_NORM_EPS = 1e-5


class ModelFormatError(ValueError):
    """Corrupt or inconsistent model file."""


@dataclass
class Layer:
    weights: np.ndarray  # (in_dim, out_dim), float32
    bias: np.ndarray  # (out_dim,), float32
    activation: str  # "linear" | "leaky_relu:<slope>"
    residual: bool
    layer_norm: bool

    def __post_init__(self) -> None:
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[1],):
            raise ModelFormatError(
                f"layer shapes do not compose: W{self.weights.shape} b{self.bias.shape}"
            )
        if self.residual and self.weights.shape[0] != self.weights.shape[1]:
            raise ModelFormatError("residual layer needs matching input/output width")
        _leaky_slope(self.activation)  # validates the tag


def _leaky_slope(tag: str) -> float | None:
    if tag == "linear":
        return None
    if tag.startswith("leaky_relu:"):
        try:
            return float(tag.split(":", 1)[1])
        except ValueError:
            pass
    raise ModelFormatError(f"unknown activation tag {tag!r}")


@dataclass
class GeneratorModel:
    layers: list[Layer]
    feature_dim: int
    n_batches: int

    def __post_init__(self) -> None:
        width = self.feature_dim
        for i, layer in enumerate(self.layers):
            if layer.weights.shape[0] != width:
                raise ModelFormatError(
                    f"layer {i} expects input width {layer.weights.shape[0]}, got {width}"
                )
            width = layer.weights.shape[1]
        if width != self.n_batches:
            raise ModelFormatError(
                f"final layer width {width} does not match n_batches {self.n_batches}"
            )

    def forward(self, features: np.ndarray) -> np.ndarray:
        """Map (n, feature_dim) rows to (n, n_batches) probability rows."""
        x = np.asarray(features, dtype=np.float32)
        squeeze = x.ndim == 1
        if squeeze:
            x = x[None, :]
        if x.shape[1] != self.feature_dim:
            raise ModelFormatError(
                f"feature width {x.shape[1]} != model feature_dim {self.feature_dim}"
            )
        for layer in self.layers:
            z = x @ layer.weights + layer.bias
            if layer.layer_norm:
                mean = z.mean(axis=1, keepdims=True)
                var = z.var(axis=1, keepdims=True)
                z = (z - mean) / np.sqrt(var + LAYER_NORM_EPS)
            slope = _leaky_slope(layer.activation)
            if slope is not None:
                z = np.where(z >= 0, z, slope * z)
            if layer.residual:
                z = z + x
            x = z
        x = x - x.max(axis=1, keepdims=True)
        e = np.exp(x)
        probs = e / e.sum(axis=1, keepdims=True)
        return probs[0] if squeeze else probs


def save_model(model: GeneratorModel, stream: io.BufferedIOBase) -> None:
    body = io.BytesIO()
    body.write(MAGIC)
    body.write(struct.pack("<III", model.feature_dim, model.n_batches, len(model.layers)))
    for layer in model.layers:
        rows, cols = layer.weights.shape
        tag = layer.activation.encode("ascii")
        body.write(struct.pack("<II", rows, cols))
        body.write(struct.pack("<B", len(tag)))
        body.write(tag)
        body.write(struct.pack("<BB", int(layer.residual), int(layer.layer_norm)))
        body.write(np.ascontiguousarray(layer.weights, dtype="<f4").tobytes())
        body.write(np.ascontiguousarray(layer.bias, dtype="<f4").tobytes())
    payload = body.getvalue()
    stream.write(payload)
    stream.write(struct.pack("<I", zlib.crc32(payload) & 0xFFFFFFFF))


def load_model(stream: io.BufferedIOBase) -> GeneratorModel:
    data = stream.read()
    if len(data) < len(MAGIC) + 16:
        raise ModelFormatError("model file truncated")
    payload, (crc,) = data[:-4], struct.unpack("<I", data[-4:])
    if zlib.crc32(payload) & 0xFFFFFFFF != crc:
        raise ModelFormatError("checksum failure")
    buf = io.BytesIO(payload)
    if buf.read(len(MAGIC)) != MAGIC:
        raise ModelFormatError("bad magic string")
    feature_dim, n_batches, n_layers = struct.unpack("<III", _take(buf, 12))
    layers = []
    for _ in range(n_layers):
        rows, cols = struct.unpack("<II", _take(buf, 8))
        (tag_len,) = struct.unpack("<B", _take(buf, 1))
        tag = _take(buf, tag_len).decode("ascii")
        residual, layer_norm = struct.unpack("<BB", _take(buf, 2))
        weights = np.frombuffer(_take(buf, 4 * rows * cols), dtype="<f4").reshape(rows, cols)
        bias = np.frombuffer(_take(buf, 4 * cols), dtype="<f4")
        layers.append(Layer(weights.copy(), bias.copy(), tag, bool(residual), bool(layer_norm)))
    if buf.read(1):
        raise ModelFormatError("trailing bytes after last layer")
    return GeneratorModel(layers, feature_dim, n_batches)


def load_model_file(path: str) -> GeneratorModel:
    with open(path, "rb") as fh:
        return load_model(fh)


def save_model_file(model: GeneratorModel, path: str) -> None:
    with open(path, "wb") as fh:
        save_model(model, fh)


def _take(buf: io.BytesIO, n: int) -> bytes:
    data = buf.read(n)
    if len(data) != n:
        raise ModelFormatError("model file truncated")
    return data
