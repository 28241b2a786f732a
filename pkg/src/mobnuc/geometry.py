"""Interval geometry on the circle under the group of fractional-linear maps.

Conventions used throughout the package:

* A point of the unit circle is stored as its angle in (-pi, pi].
* The line picture identifies the circle minus the point -1 with the real
  line through x = tan(theta/2); the angle pi is the point at infinity.
  Under this map the upper semicircle is (0, oo) and the right semicircle
  is (-1, 1).
* An ``Interval`` is the open arc swept counterclockwise from angle ``a``
  to angle ``b``.

All types here are immutable values; every operation is referentially
transparent and safe to use concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveParameter, NotCompactInclusion

TWO_PI = 2.0 * math.pi


def reduce_angle(theta: float) -> float:
    """Reduce an angle modulo 2*pi into (-pi, pi] (branch cut at -pi)."""
    t = math.remainder(theta, TWO_PI)
    if t <= -math.pi:
        t += TWO_PI
    return t


def angle_to_line(theta: float) -> float:
    """Map a circle angle to its line-picture coordinate (pi -> +inf)."""
    t = reduce_angle(theta)
    if t == math.pi:
        return math.inf
    return math.tan(0.5 * t)


def line_to_angle(x: float) -> float:
    """Inverse of :func:`angle_to_line`; accepts +-inf (both map to pi)."""
    if math.isinf(x):
        return math.pi
    return 2.0 * math.atan(x)


def _homogeneous(theta: float) -> tuple[float, float]:
    # Projective coordinates [p : q] with x = p/q; exact at infinity.
    return math.sin(0.5 * theta), math.cos(0.5 * theta)


@dataclass(frozen=True)
class Interval:
    """Open arc of the unit circle from angle ``a`` counterclockwise to ``b``.

    Proper by construction: the two boundary angles must differ after
    reduction, so the interior is nonempty and not the whole circle.
    """

    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", reduce_angle(self.a))
        object.__setattr__(self, "b", reduce_angle(self.b))
        if self.a == self.b:
            raise ValueError("interval endpoints must be distinct angles")

    @classmethod
    def from_line(cls, u: float, v: float) -> "Interval":
        """Interval with line-picture endpoints u, v (either may be +-inf).

        For u < v this is the ordinary interval (u, v); endpoints given in
        the other order describe the complementary arc through infinity.
        """
        if u == v:
            raise ValueError("interval endpoints must be distinct")
        return cls(line_to_angle(u), line_to_angle(v))

    @classmethod
    def upper_semicircle(cls) -> "Interval":
        """The arc from 1 to -1 through i; the half-line (0, oo)."""
        return cls(0.0, math.pi)

    @classmethod
    def right_semicircle(cls) -> "Interval":
        """The arc from -i to i through 1; the interval (-1, 1)."""
        return cls(-0.5 * math.pi, 0.5 * math.pi)

    @property
    def arc_length(self) -> float:
        s = math.fmod(self.b - self.a, TWO_PI)
        return s if s > 0 else s + TWO_PI

    @property
    def midpoint_angle(self) -> float:
        return reduce_angle(self.a + 0.5 * self.arc_length)

    def to_line(self) -> tuple[float, float]:
        """Line-picture endpoint pair (start, end)."""
        return angle_to_line(self.a), angle_to_line(self.b)

    def line_length(self) -> float:
        """Euclidean length in the line picture; inf if the closure meets -1."""
        u, v = self.to_line()
        if self.contains_angle(math.pi) or math.pi in (self.a, self.b):
            return math.inf
        return abs(v - u)

    def contains_angle(self, theta: float) -> bool:
        t = math.fmod(reduce_angle(theta) - self.a, TWO_PI)
        if t < 0:
            t += TWO_PI
        return 0.0 < t < self.arc_length

    def compactly_contains(self, other: "Interval") -> bool:
        """Whether closure(other) lies in the interior of self."""
        la = self.arc_length
        pos_a = math.fmod(other.a - self.a, TWO_PI)
        pos_b = math.fmod(other.b - self.a, TWO_PI)
        if pos_a < 0:
            pos_a += TWO_PI
        if pos_b < 0:
            pos_b += TWO_PI
        return 0.0 < pos_a < pos_b < la


@dataclass(frozen=True)
class MoebiusElement:
    """Real 2x2 unimodular matrix acting on the line picture by
    x -> (m00 x + m01)/(m10 x + m11); m and -m describe the same map.

    The matrix is renormalized to det = +1 on construction, so determinant
    drift stays below 1e-12 over composition chains of any practical length.
    """

    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        if m.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if det <= 0:
            raise ValueError("orientation-reversing or singular matrix")
        m = m / math.sqrt(det)
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @classmethod
    def identity(cls) -> "MoebiusElement":
        return cls(np.eye(2))

    @classmethod
    def dilation(cls, s: float) -> "MoebiusElement":
        """The flow x -> e^s x fixing 0 and infinity."""
        return cls(np.diag([math.exp(0.5 * s), math.exp(-0.5 * s)]))

    @classmethod
    def translation(cls, t: float) -> "MoebiusElement":
        return cls(np.array([[1.0, t], [0.0, 1.0]]))

    @classmethod
    def conjugate_translation(cls, t: float) -> "MoebiusElement":
        """x -> x/(1 + t x), the translation conjugated by ray inversion."""
        return cls(np.array([[1.0, 0.0], [t, 1.0]]))

    def __matmul__(self, other: "MoebiusElement") -> "MoebiusElement":
        return MoebiusElement(self.m @ other.m)

    def inverse(self) -> "MoebiusElement":
        a, b, c, d = self.m.ravel()
        return MoebiusElement(np.array([[d, -b], [-c, a]]))

    def apply(self, x: float) -> float:
        if math.isinf(x):
            p, q = 1.0, 0.0
        else:
            p, q = x, 1.0
        num = self.m[0, 0] * p + self.m[0, 1] * q
        den = self.m[1, 0] * p + self.m[1, 1] * q
        if den == 0.0:
            return math.inf
        return num / den

    def apply_angle(self, theta: float) -> float:
        p, q = _homogeneous(theta)
        num = self.m[0, 0] * p + self.m[0, 1] * q
        den = self.m[1, 0] * p + self.m[1, 1] * q
        return reduce_angle(2.0 * math.atan2(num, den))

    def map_interval(self, interval: Interval) -> Interval:
        # Orientation-preserving, so arcs map to arcs endpoint-to-endpoint.
        return Interval(self.apply_angle(interval.a), self.apply_angle(interval.b))

    @staticmethod
    def _to_zero_one_inf(t1: float, t2: float, t3: float) -> np.ndarray:
        # Map the circle points at angles (t1, t2, t3) to (0, 1, inf),
        # assembled in projective coordinates so infinity needs no cases.
        p1, q1 = _homogeneous(t1)
        p2, q2 = _homogeneous(t2)
        p3, q3 = _homogeneous(t3)
        c23 = p2 * q3 - p3 * q2
        c21 = p2 * q1 - p1 * q2
        return np.array([[c23 * q1, -c23 * p1], [c21 * q3, -c21 * p3]])

    @classmethod
    def from_three_angles(cls, src: tuple[float, float, float],
                          dst: tuple[float, float, float]) -> "MoebiusElement":
        """The unique map sending the src angle triple to the dst triple.

        Both triples must be in counterclockwise order, which makes the
        result orientation-preserving.
        """
        A = cls._to_zero_one_inf(*src)
        B = cls._to_zero_one_inf(*dst)
        return cls(np.linalg.inv(B) @ A)


def interval_normalizer(interval: Interval) -> MoebiusElement:
    """A map carrying ``interval`` onto the upper semicircle (0, oo), start
    to 0, midpoint to 1, end to infinity.

    Any two such normalizers differ by a dilation of (0, oo), under which
    the inner distances below are invariant; the arbitrary midpoint pinning
    is therefore harmless (and is tested, not assumed).
    """
    src = (interval.a, interval.midpoint_angle, interval.b)
    dst = (0.0, 0.5 * math.pi, math.pi)
    return MoebiusElement.from_three_angles(src, dst)


def moebius_from_upper(interval: Interval) -> MoebiusElement:
    """A map carrying the upper semicircle onto ``interval``."""
    return interval_normalizer(interval).inverse()


def dilation_flow(interval: Interval, s: float) -> MoebiusElement:
    """One-parameter dilation flow of ``interval``: fixes both endpoints and
    maps the interval onto itself; for (0, oo) it is x -> e^s x."""
    g = moebius_from_upper(interval)
    return g @ MoebiusElement.dilation(s) @ g.inverse()


def _normalized_inner_coords(outer: Interval, inner: Interval) -> tuple[float, float]:
    if not outer.compactly_contains(inner):
        raise NotCompactInclusion(
            "inner interval must be compactly contained in the outer one")
    g = interval_normalizer(outer)
    u = angle_to_line(g.apply_angle(inner.a))
    v = angle_to_line(g.apply_angle(inner.b))
    if not (0.0 < u < v < math.inf):
        raise NotCompactInclusion(
            "inclusion degenerate at working precision")
    return u, v


def inner_distance(outer: Interval, inner: Interval) -> float:
    """Inner distance of a compact inclusion: the dilation-flow parameter
    carrying the normalized outer interval's boundary onto the inner one's.

    Invariant under the circle's fractional-linear maps; equal to
    log(R/r) for concentric symmetric line intervals (-R, R), (-r, r).
    """
    u, v = _normalized_inner_coords(outer, inner)
    return 2.0 * math.atanh(math.sqrt(u / v))


def second_inner_distance(outer: Interval, inner: Interval) -> float:
    """Second inner distance sqrt(a*a'), where the normalized inner interval
    is the image of (0, oo) under the inverted translation by a' followed by
    the translation by a.

    Related to :func:`inner_distance` by ell' = sinh(ell/2).
    """
    u, v = _normalized_inner_coords(outer, inner)
    return math.sqrt(u / (v - u))


def translation_pair(outer: Interval, inner: Interval) -> tuple[float, float]:
    """Parameters (a, a') of the normalized inner interval: apply the
    inverted translation x -> x/(1 + a'x) to (0, oo), then translate by a.

    Only the product a*a' = ell'^2 is independent of the normalization.
    """
    u, v = _normalized_inner_coords(outer, inner)
    return u, 1.0 / (v - u)


@dataclass(frozen=True)
class InnerDistances:
    """Both inner distances of one compact inclusion."""

    ell: float
    ell_prime: float

    @classmethod
    def of(cls, outer: Interval, inner: Interval) -> "InnerDistances":
        return cls(inner_distance(outer, inner), second_inner_distance(outer, inner))


def symmetric_subinterval(s: float) -> tuple[Interval, float, float]:
    """The reflection-symmetric subinterval of (0, oo) at inner distance s,
    together with its translation pair (a, a') = (tanh(s/2), sinh(s)/2).

    The interval is (tanh(s/2), coth(s/2)); a*a' = sinh(s/2)^2, the square
    of the second inner distance.
    """
    if s <= 0:
        raise NonPositiveParameter("inner distance must be positive")
    a = math.tanh(0.5 * s)
    aprime = 0.5 * math.sinh(s)
    return Interval.from_line(a, 1.0 / a), a, aprime
