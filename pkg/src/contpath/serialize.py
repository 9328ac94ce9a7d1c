"""Plain-text storage for path models.

Layout::

    contpath-model 1
    activation relu
    dims 1 16 2
    layer 0
    weight 16 1
    <one matrix row per line>
    bias 16
    <one line>
    layer 1
    ...
    end

Floats are written with ``repr``, which round-trips every double exactly.
"""

from __future__ import annotations

import numpy as np

from .pathmodel import MlpPathModel

MAGIC = "contpath-model"
VERSION = 1


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _row(values) -> str:
    return " ".join(repr(float(v)) for v in values)


def serialize_model(m: MlpPathModel) -> str:
    out = [f"{MAGIC} {VERSION}", f"activation {m.activation}",
           "dims " + " ".join(str(d) for d in m.layer_dims)]
    for i, (W, b) in enumerate(zip(m.weights, m.biases)):
        out.append(f"layer {i}")
        out.append(f"weight {W.shape[0]} {W.shape[1]}")
        out.extend(_row(r) for r in W)
        out.append(f"bias {b.shape[0]}")
        out.append(_row(b))
    out.append("end")
    return "\n".join(out) + "\n"


class _Reader:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.pos = 0

    def next(self, section: str) -> tuple[int, str]:
        if self.pos >= len(self.lines):
            raise ParseError(f"document ends before the {section} section")
        self.pos += 1
        return self.pos, self.lines[self.pos - 1].strip()

    def keyword(self, word: str, section: str, nargs: int) -> tuple[int, list[str]]:
        lineno, line = self.next(section)
        parts = line.split()
        if not parts or parts[0] != word:
            raise ParseError(f"expected '{word}' for the {section} section, got {line!r}", lineno)
        if nargs >= 0 and len(parts) - 1 != nargs:
            raise ParseError(f"'{word}' takes {nargs} value(s), got {len(parts) - 1}", lineno)
        return lineno, parts[1:]

    def ints(self, tokens, lineno) -> list[int]:
        try:
            return [int(v) for v in tokens]
        except ValueError:
            raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None

    def floats(self, count: int, section: str) -> np.ndarray:
        lineno, line = self.next(section)
        parts = line.split()
        if len(parts) != count:
            raise ParseError(f"{section}: expected {count} numbers, got {len(parts)}", lineno)
        try:
            return np.array([float(v) for v in parts])
        except ValueError:
            raise ParseError(f"{section}: malformed number in {line!r}", lineno) from None


def deserialize_model(text: str) -> MlpPathModel:
    r = _Reader(text)
    lineno, head = r.keyword(MAGIC, "header", 1)
    if head != [str(VERSION)]:
        raise ParseError(f"unsupported format version {head[0]!r}", lineno)
    _, (activation,) = r.keyword("activation", "activation", 1)
    lineno, dims = r.keyword("dims", "dims", -1)
    dims = r.ints(dims, lineno)
    if len(dims) < 2:
        raise ParseError("dims needs at least an input and an output size", lineno)
    weights, biases = [], []
    for i, (fan_in, fan_out) in enumerate(zip(dims[:-1], dims[1:])):
        lineno, idx = r.keyword("layer", f"layer {i}", 1)
        if r.ints(idx, lineno) != [i]:
            raise ParseError(f"expected layer {i}, got layer {idx[0]}", lineno)
        lineno, shape = r.keyword("weight", f"layer {i} weight", 2)
        if r.ints(shape, lineno) != [fan_out, fan_in]:
            raise ParseError(f"layer {i} weight shape {shape} does not match dims", lineno)
        weights.append(np.array([r.floats(fan_in, f"layer {i} weight") for _ in range(fan_out)]))
        lineno, size = r.keyword("bias", f"layer {i} bias", 1)
        if r.ints(size, lineno) != [fan_out]:
            raise ParseError(f"layer {i} bias size {size[0]} does not match dims", lineno)
        biases.append(r.floats(fan_out, f"layer {i} bias"))
    r.keyword("end", "end", 0)
    if any(line.strip() for line in r.lines[r.pos:]):
        raise ParseError("unexpected content after 'end'", r.pos + 1)
    try:
        return MlpPathModel(tuple(dims), weights, biases, activation)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def save_model(m: MlpPathModel, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(serialize_model(m))


def load_model(path) -> MlpPathModel:
    with open(path, encoding="ascii") as fh:
        return deserialize_model(fh.read())
