"""Branching of the massless scalar field's conformal representation into
lowest-weight components: monomial counting, multiplicities, partition
functions, and their small-s asymptotics.

For odd spatial dimension d the one-particle representation restricted to
the time-axis Moebius group decomposes into lowest-weight pieces at the
integer weights j + (d-1)/2, j = 0, 1, 2, ..., with multiplicity
m_{d-1}(j-1) + m_{d-1}(j), the dimension of the degree-j harmonic
polynomials in d variables; m_d(k) counts monomials of degree k in d
variables.  Even d needs the double cover and is rejected rather than
guessed; d = 1 degenerates to two weight-1 summands.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from .characters import MultiplicitySpectrum, TailRule, character
from .errors import (BadDimension, EvenDimensionUnsupported,
                     NonPositiveParameter, RadiusNotGreaterThanOne)

# Memoized rows of the monomial-count recursion; guarded so concurrent
# callers always see fully written integers.
_TABLE: dict[int, list[int]] = {1: [1]}
_TABLE_LOCK = threading.Lock()


def monomial_count(d: int, k: int) -> int:
    """Number of degree-k monomials in d variables, m_d(k); exact integer
    arithmetic via the recursion m_d(k) = sum_{h<=k} m_{d-1}(h) (each row is
    the running sum of the previous one), equal to C(k+d-1, d-1)."""
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise BadDimension("d must be a positive integer")
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise ValueError("k must be a non-negative integer")
    if d == 1:
        return 1
    with _TABLE_LOCK:
        return _row(d, k)


def _row(d: int, k: int) -> int:
    if d == 1:
        return 1
    row = _TABLE.setdefault(d, [])
    if len(row) <= k:
        if d > 2:
            _row(d - 1, k)   # make sure the previous row is long enough
        prev = _TABLE.get(d - 1)
        running = row[-1] if row else 0
        for h in range(len(row), k + 1):
            running += prev[h] if d > 2 else 1
            row.append(running)
    return row[k]


def harmonic_dimension(d: int, k: int) -> int:
    """Dimension of the degree-k spherical harmonics in d variables:
    m_d(k) - m_d(k-2) = m_{d-1}(k-1) + m_{d-1}(k)."""
    if k < 0:
        return 0
    low = monomial_count(d - 1, k - 1) if k >= 1 else 0
    return low + monomial_count(d - 1, k)


def _check_dimension(d: int) -> None:
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise BadDimension("d must be a positive integer")
    if d % 2 == 0:
        raise EvenDimensionUnsupported(
            "even d lives on the double cover; only odd d (and d = 1) "
            "are implemented")


def branching_multiplicity(d: int, weight: float) -> int:
    """Multiplicity of the lowest-weight component at the given weight in
    the d-dimensional massless one-particle representation.

    Weights sit at j + (d-1)/2 for integers j >= 0; anything below the
    threshold (or off the integer grid) has multiplicity zero.
    """
    _check_dimension(d)
    if d == 1:
        return 2 if weight == 1.0 else 0
    j = weight - (d - 1) // 2
    if j < 0 or j != int(j):
        return 0
    return harmonic_dimension(d, int(j))


@dataclass(frozen=True)
class FreeFieldTail(TailRule):
    """Rule-generated multiplicities of the massless scalar in odd d."""

    d: int = 3

    @classmethod
    def for_dimension(cls, d: int) -> "FreeFieldTail":
        _check_dimension(d)
        if d == 1:
            raise BadDimension("d = 1 is a finite spectrum, not a tail rule")
        return cls(first_weight=float((d - 1) // 2), step=1, d=d)

    def mult(self, j: int) -> int:
        return harmonic_dimension(self.d, j)

    def to_dict(self) -> dict:
        return {"name": "free_field", "d": self.d}


def free_field_spectrum(d: int) -> MultiplicitySpectrum:
    """The full lowest-weight decomposition as a rule-generated spectrum.

    d = 1 returns the degenerate two-copy weight-1 spectrum; that reading
    is a convention (the one-particle content of two chiral halves), not a
    computed branching.
    """
    _check_dimension(d)
    if d == 1:
        return MultiplicitySpectrum({1.0: 2})
    return MultiplicitySpectrum({}, FreeFieldTail.for_dimension(d))


def free_field_partition(d: int, s: float) -> float:
    """One-particle Gibbs trace Tr(e^{-s L0}) of the massless scalar in
    dimension d.

    For d = 3 the series collapses to cosh(s/2) / (4 sinh(s/2)^3), and the
    computed series is cross-checked against that closed form on every call.
    """
    _check_dimension(d)
    if s <= 0:
        raise NonPositiveParameter("inverse temperature must be positive")
    value = character(free_field_spectrum(d), s)
    if d == 3:
        closed = d3_closed_form(s)
        if math.isfinite(value) and abs(value - closed) > 1e-10 * closed:
            raise AssertionError(
                f"series/closed-form cross-check failed at s={s}: "
                f"{value} vs {closed}")
    return value


def d3_closed_form(s: float) -> float:
    """cosh(s/2) / (4 sinh(s/2)^3), the d = 3 partition function."""
    return math.cosh(0.5 * s) / (4.0 * math.sinh(0.5 * s) ** 3)


def l2_nuclearity_double_cone(r: float, d: int = 3) -> float:
    """Nuclearity index of the concentric double-cone pair (radius r vs 1):
    the one-particle trace at s = log r, which is asymptotically the log of
    the double-cone embedding's trace norm; behaves like 2 / (log r)^d as
    r -> 1+."""
    if r <= 1.0:
        raise RadiusNotGreaterThanOne("outer radius must exceed 1")
    return free_field_partition(d, math.log(r))


def multiplicity_table(d: int, kmax: int) -> list[tuple[int, int, int, int]]:
    """Rows (d, k, m_d(k), N_d(k)) for k = 0..kmax; N_d(k) is the branching
    multiplicity at weight k."""
    return [(d, k, monomial_count(d, k), branching_multiplicity(d, float(k)))
            for k in range(kmax + 1)]


def partition_curve(d: int, s_grid) -> list[tuple]:
    """Rows (s, series value[, closed form]) over the grid; the closed-form
    column is present only for d = 3."""
    rows = []
    for s in s_grid:
        v = free_field_partition(d, float(s))
        if d == 3:
            rows.append((float(s), v, d3_closed_form(float(s))))
        else:
            rows.append((float(s), v))
    return rows


def growth_ratio(d: int, k: int) -> float:
    """N_d at weight k + (d-1)/2 over its leading-order form
    2 k^{d-2} / (d-2)!; tends to 1 as k grows."""
    _check_dimension(d)
    if d < 3:
        raise BadDimension("growth law needs d >= 3")
    n = harmonic_dimension(d, k)
    lead = 2.0 * float(k) ** (d - 2) / math.factorial(d - 2)
    return n / lead
