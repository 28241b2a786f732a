"""Verification reports and deterministic serialization.

The CLI promises byte-identical output for identical inputs, so floats are
printed with a fixed 17-significant-digit format (enough to round-trip
binary64) by a small emitter instead of ``json.dumps``, whose C encoder
ignores float subclass formatting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Residuals below this are indistinguishable from dense linear-algebra
# rounding noise; ordering within the floor carries no convergence signal.
MEASUREMENT_FLOOR = 1e-12


@dataclass
class VerificationReport:
    """Outcome of one identity/inequality check, possibly over a dim sweep.

    verdict is "pass" iff the final residual is within tolerance and the
    residuals are non-increasing over the last three dims tested, where
    values under the measurement floor count as ties.
    """

    identity_name: str
    dims_tested: list
    block: int
    residuals: list
    tolerance: float
    verdict: str
    params: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @classmethod
    def from_sweep(cls, identity_name, dims, block, residuals, tolerance,
                   params=None, details=None, floor=MEASUREMENT_FLOOR):
        residuals = [float(r) for r in residuals]
        ok = residuals[-1] <= tolerance and _non_increasing(residuals[-3:], floor)
        return cls(identity_name, list(dims), block, residuals, float(tolerance),
                   "pass" if ok else "fail", params or {}, details or {})

    @classmethod
    def single(cls, identity_name, residual, tolerance, params=None, details=None):
        return cls.from_sweep(identity_name, [2], 2, [residual], tolerance,
                              params=params, details=details)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "identity": self.identity_name,
            "params": self.params,
            "dims_tested": self.dims_tested,
            "block": self.block,
            "residuals": self.residuals,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "details": self.details,
        }


def _non_increasing(tail, floor):
    for prev, cur in zip(tail, tail[1:]):
        if cur > max(prev * (1.0 + 1e-6), floor):
            return False
    return True


def _plain(obj):
    """Coerce numpy scalars/arrays into plain Python containers."""
    if isinstance(obj, np.ndarray):
        return [_plain(x) for x in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    return obj


def _format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _escape(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def json_dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON text: insertion-ordered keys, .17g floats."""
    pieces = []
    _emit(_plain(obj), pieces, indent, 0)
    return "".join(pieces)


def _emit(obj, pieces, indent, level):
    pad = " " * (indent * (level + 1))
    closepad = " " * (indent * level)
    if obj is None:
        pieces.append("null")
    elif obj is True:
        pieces.append("true")
    elif obj is False:
        pieces.append("false")
    elif isinstance(obj, float):
        pieces.append(_format_float(obj))
    elif isinstance(obj, int):
        pieces.append(str(obj))
    elif isinstance(obj, str):
        pieces.append(_escape(obj))
    elif isinstance(obj, dict):
        if not obj:
            pieces.append("{}")
            return
        pieces.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            pieces.append(pad)
            pieces.append(_escape(str(k)))
            pieces.append(": ")
            _emit(v, pieces, indent, level + 1)
            pieces.append(",\n" if i < len(obj) - 1 else "\n")
        pieces.append(closepad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            pieces.append("[]")
            return
        pieces.append("[\n")
        for i, v in enumerate(obj):
            pieces.append(pad)
            _emit(v, pieces, indent, level + 1)
            pieces.append(",\n" if i < len(obj) - 1 else "\n")
        pieces.append(closepad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def csv_lines(header, rows) -> str:
    """Deterministic CSV: .17g floats, newline-terminated."""
    out = [",".join(header)]
    for row in rows:
        cells = []
        for x in row:
            x = _plain(x)
            cells.append(_format_float(x) if isinstance(x, float) else str(x))
        out.append(",".join(cells))
    return "\n".join(out) + "\n"
