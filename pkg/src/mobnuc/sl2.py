"""Exact 2x2 checks of the group identities behind the operator calculus.

The basis matrices are anchored to geometric actions on the line picture,
not to formula transcription:

* ``h`` generates translations, exp(t h): x -> x + t;
* ``hprime`` generates inverted translations, exp(t hprime): x -> x/(1+tx);
* ``k1`` generates the dilations of (0, oo), exp(s k1): x -> e^s x;
* ``k2`` generates the dilations of (-1, 1);
* ``l0`` generates counterclockwise circle rotations.

The self-adjoint generators of a positive-energy unitary representation
correspond to these via H ~ -i h, H' ~ +i hprime in the complexified
algebra (the sign flip on hprime comes from which flow direction has a
positive generator); under that correspondence 2 L0 = H + H' and
2 K2 = H - H' hold exactly, i.e. l0 = (h - hprime)/2 and
k2 = (h + hprime)/2 as real matrices.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterAtSingularity
from .report import VerificationReport

H_MAT = np.array([[0.0, 1.0], [0.0, 0.0]])
HPRIME_MAT = np.array([[0.0, 0.0], [1.0, 0.0]])
K1_MAT = np.array([[0.5, 0.0], [0.0, -0.5]])
L0_MAT = 0.5 * (H_MAT - HPRIME_MAT)
K2_MAT = 0.5 * (H_MAT + HPRIME_MAT)


@dataclass(frozen=True)
class LieBasis:
    """The five anchored basis matrices (see module docstring)."""

    h: np.ndarray = field(default_factory=lambda: H_MAT.copy())
    hprime: np.ndarray = field(default_factory=lambda: HPRIME_MAT.copy())
    l0: np.ndarray = field(default_factory=lambda: L0_MAT.copy())
    k1: np.ndarray = field(default_factory=lambda: K1_MAT.copy())
    k2: np.ndarray = field(default_factory=lambda: K2_MAT.copy())

    def h_complex(self) -> np.ndarray:
        """Complexified translation generator: exp(-u * h_complex) ~ e^{-uH}."""
        return -1j * self.h

    def hprime_complex(self) -> np.ndarray:
        return 1j * self.hprime

    def l0_complex(self) -> np.ndarray:
        return -1j * self.l0

    def k2_complex(self) -> np.ndarray:
        return -1j * self.k2


def expm2(X: np.ndarray) -> np.ndarray:
    """Closed-form exponential of a 2x2 real or complex matrix.

    Cayley-Hamilton: for traceless Y, Y^2 = -det(Y) I, so the exponential
    splits into cosh/sinh (hyperbolic), cos/sin (elliptic) or affine
    (parabolic) branches; a series kicks in near the parabolic point.
    """
    X = np.asarray(X)
    tr = X[0, 0] + X[1, 1]
    Y = X - 0.5 * tr * np.eye(2)
    q = -(Y[0, 0] * Y[1, 1] - Y[0, 1] * Y[1, 0])  # Y @ Y == q * I
    w = cmath.sqrt(complex(q))
    if abs(w) < 1e-6:
        c = 1.0 + q / 2.0 + q * q / 24.0 + q ** 3 / 720.0
        s = 1.0 + q / 6.0 + q * q / 120.0 + q ** 3 / 5040.0
    else:
        c = cmath.cosh(w)
        s = cmath.sinh(w) / w
    E = cmath.exp(0.5 * complex(tr)) * (c * np.eye(2) + s * Y)
    # a real matrix has a real exponential in every branch
    return E.real if np.isrealobj(X) else E


def projective_residual(A: np.ndarray, B: np.ndarray) -> float:
    """Max-abs deviation between unit-Frobenius representatives, minimized
    over the overall sign (elements g and -g are identified).

    Normalizing keeps the measure meaningful when entries grow like e^{|s|}:
    an absolute comparison would bottom out at the float rounding of the
    largest entry rather than at the identity's accuracy.
    """
    An = np.asarray(A) / np.linalg.norm(A)
    Bn = np.asarray(B) / np.linalg.norm(B)
    return float(min(np.abs(An - Bn).max(), np.abs(An + Bn).max()))


def rotation_matrix(theta: float) -> np.ndarray:
    """Circle rotation by theta in the line picture: exp(theta * l0)."""
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    return np.array([[c, s], [-s, c]])


def verify_bch_identity(s: float, t: float, tolerance: float = 1e-10) -> VerificationReport:
    """Conjugating the k2-flow by the k1-flow equals the flow of
    cosh(2 pi t) k2 - sinh(2 pi t) l0; checked as 2x2 matrices.

    Also checks the adjoint-action form Ad(exp(-2 pi t k1)) k2 =
    cosh(2 pi t) k2 - sinh(2 pi t) l0 behind it.
    """
    e1 = expm2(-2 * math.pi * t * K1_MAT)
    e1inv = expm2(2 * math.pi * t * K1_MAT)
    lhs = e1 @ expm2(2 * math.pi * s * K2_MAT) @ e1inv
    mixed = math.cosh(2 * math.pi * t) * K2_MAT - math.sinh(2 * math.pi * t) * L0_MAT
    rhs = expm2(2 * math.pi * s * mixed)
    res = projective_residual(lhs, rhs)
    ad = e1 @ K2_MAT @ e1inv
    ad_res = float(np.abs(ad - mixed).max() / max(1.0, np.abs(mixed).max()))
    return VerificationReport.single(
        "bch", res, tolerance, params={"s": s, "t": t},
        details={"adjoint_action_residual": ad_res})


def verify_rotation_factorization(s: float, tolerance: float = 1e-10) -> VerificationReport:
    """Rotation by angle 2s equals
    translation(tan(s/2)) * inverted-translation(sin s) * translation(tan(s/2))
    projectively in the 2x2 group.

    At s = pi (where tan(s/2) blows up) the finite half-angle form is
    checked instead: the unipotent product at parameters (1, 1, 1) is the
    half-turn, so its square is -1, the full turn.
    """
    s_red = math.remainder(s, 2 * math.pi)
    at_half_turn = abs(abs(s_red) - math.pi) <= 1e-12
    if abs(s_red) > math.pi - 1e-8 and not at_half_turn:
        raise ParameterAtSingularity("tan(s/2) overflows this close to pi")
    if at_half_turn:
        prod = _unipotent_product(1.0, 1.0)
        res = max(projective_residual(prod, rotation_matrix(math.pi)),
                  float(np.abs(prod @ prod + np.eye(2)).max()))
        return VerificationReport.single("rotation", res, tolerance,
                                         params={"s": s},
                                         details={"case": "half_turn"})
    lhs = rotation_matrix(2 * s)
    rhs = _unipotent_product(math.tan(0.5 * s), math.sin(s))
    return VerificationReport.single("rotation", projective_residual(lhs, rhs),
                                     tolerance, params={"s": s})


def _unipotent_product(p: float, q: float) -> np.ndarray:
    T = np.array([[1.0, p], [0.0, 1.0]])
    S = np.array([[1.0, 0.0], [-q, 1.0]])  # inverted translation by q
    return T @ S @ T


def verify_euclidean_factorization(s: float, tolerance: float = 1e-10) -> VerificationReport:
    """The semigroup factorization e^{-2s L0} =
    e^{-tanh(s/2) H} e^{-sinh(s) H'} e^{-tanh(s/2) H}, checked in the
    complexified 2x2 group via the correspondence of :class:`LieBasis`.
    """
    basis = LieBasis()
    lhs = expm2(-2 * s * basis.l0_complex())
    eh = expm2(-math.tanh(0.5 * s) * basis.h_complex())
    ehp = expm2(-math.sinh(s) * basis.hprime_complex())
    rhs = eh @ ehp @ eh
    return VerificationReport.single("euclidean", projective_residual(lhs, rhs),
                                     tolerance, params={"s": s})


def grid_reports(identity: str, n_points: int = 50) -> VerificationReport:
    """Worst residual of one 2x2 identity over its standard parameter grid."""
    if identity == "bch":
        grid = [(s, t) for s in np.linspace(-2, 2, 10) for t in np.linspace(-2, 2, 5)]
        worst = max(verify_bch_identity(s, t).residuals[0] for s, t in grid)
        params = {"grid": "s,t in [-2,2] x [-2,2], 10 x 5"}
    elif identity == "rotation":
        pts = np.linspace(-2.9, 2.9, n_points - 1)
        worst = max(verify_rotation_factorization(s).residuals[0] for s in pts)
        worst = max(worst, verify_rotation_factorization(math.pi).residuals[0])
        params = {"grid": "s in [-2.9, 2.9] plus the half-turn case"}
    elif identity == "euclidean":
        pts = np.linspace(-5, 5, n_points)
        worst = max(verify_euclidean_factorization(s).residuals[0] for s in pts)
        params = {"grid": "s in [-5, 5]"}
    else:
        raise ValueError(f"unknown 2x2 identity {identity!r}")
    return VerificationReport.single(identity, worst, 1e-10, params=params)
