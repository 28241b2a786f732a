"""Truncated matrix realizations of positive-energy lowest-weight
representations, and the identity/inequality checks run on them.

The weight basis diagonalizes the rotation generator L0 = diag(alpha + n).
Raising/lowering matrix elements are sqrt((n+1)(n+2 alpha)) and
sqrt(n(n+2 alpha - 1)); the translation generator and its ray-inversion
conjugate are H = L0 - (L+ + L-)/2 and H' = L0 + (L+ + L-)/2, so
2 L0 = H + H' and 2 K2 = H - H' hold exactly.  K1 = (L+ - L-)/(2i) has
purely imaginary entries and is stored through its real antisymmetric
part A (K1 = iA), which keeps every stored matrix real.

Everything is immutable after construction; sweeps over (N, s) grids can
run concurrently without coordination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import fixtures
from .errors import (BadWeight, NonPositiveParameter, ParameterOutOfRange,
                     SingularH, TooSmall)
from .geometry import symmetric_subinterval
from .report import VerificationReport

_KDC_OVERLAP_FLOOR = 1e-13   # spectral components below this are rounding noise
_MIN_DIM = 8


@dataclass(frozen=True)
class GeneratorSet:
    """Truncated generator matrices of one lowest-weight representation."""

    alpha: float
    dim: int
    L0: np.ndarray
    Lplus: np.ndarray
    Lminus: np.ndarray
    H: np.ndarray
    Hprime: np.ndarray
    K1A: np.ndarray   # real antisymmetric A with K1 = i A
    K2: np.ndarray

    @cached_property
    def _eig_H(self):
        return np.linalg.eigh(self.H)

    @cached_property
    def _eig_Hprime(self):
        return np.linalg.eigh(self.Hprime)

    @cached_property
    def _eig_K2(self):
        return np.linalg.eigh(self.K2)

    @cached_property
    def _eig_K1(self):
        # K1 = iA is Hermitian; eigendecompose it directly.
        return np.linalg.eigh(1j * self.K1A)

    def exp_H(self, scale: float) -> np.ndarray:
        w, V = self._eig_H
        return (V * np.exp(scale * w)) @ V.T

    def exp_Hprime(self, scale: float) -> np.ndarray:
        w, V = self._eig_Hprime
        return (V * np.exp(scale * w)) @ V.T

    def exp_L0_diag(self, scale: float) -> np.ndarray:
        return np.diag(np.exp(scale * np.diag(self.L0)))


def build_generators(alpha: float, N: int) -> GeneratorSet:
    """Generator matrices for lowest weight ``alpha`` truncated at dim ``N``.

    Truncation corrupts only the last rows/columns: commutators and other
    banded combinations are exact on the leading (N-2) block.
    """
    if alpha <= 0:
        raise BadWeight("lowest weight must be positive")
    if N < _MIN_DIM:
        raise TooSmall(f"truncation dim must be at least {_MIN_DIM}")
    n = np.arange(N, dtype=float)
    L0 = np.diag(alpha + n)
    Lplus = np.zeros((N, N))
    c = np.sqrt((n[:-1] + 1.0) * (n[:-1] + 2.0 * alpha))
    Lplus[np.arange(1, N), np.arange(N - 1)] = c
    Lminus = Lplus.T.copy()
    C = 0.5 * (Lplus + Lminus)
    H = L0 - C
    Hprime = L0 + C
    K2 = -C
    A = 0.5 * (Lminus - Lplus)
    gen = GeneratorSet(float(alpha), int(N), L0, Lplus, Lminus, H, Hprime, A, K2)
    assert np.array_equal(gen.H, gen.H.T)
    assert np.array_equal(gen.Hprime, gen.Hprime.T)
    assert np.array_equal(gen.K2, gen.K2.T)
    assert np.array_equal(gen.K1A, -gen.K1A.T)
    return gen


# ---------------------------------------------------------------------------
# semigroup factorization checks

def factorization_residual(alpha: float, s: float, N: int, block: int,
                           a: float | None = None, aprime: float | None = None) -> float:
    """Max-abs leading-block residual of
    e^{-2s L0} = e^{-a H} e^{-2a' H'} e^{-a H} with (a, a') defaulting to
    (tanh(s/2), sinh(s)/2)."""
    gen = build_generators(alpha, N)
    if a is None:
        a = math.tanh(0.5 * s)
    if aprime is None:
        aprime = 0.5 * math.sinh(s)
    eH = gen.exp_H(-a)
    rhs = eH @ gen.exp_Hprime(-2.0 * aprime) @ eH
    lhs = gen.exp_L0_diag(-2.0 * s)
    return float(np.abs((lhs - rhs)[:block, :block]).max())


def verify_factorization(alpha: float, s: float, dims, block: int,
                         tolerance: float | None = None) -> VerificationReport:
    """Truncated check of the rotation-semigroup factorization through the
    translation semigroups, with convergence evidence over ``dims``."""
    if s <= 0:
        raise NonPositiveParameter("flow parameter must be positive")
    dims = sorted(int(d) for d in dims)
    _check_block(block, dims)
    tol = fixtures.resolve_tolerance("m1", tolerance, alpha=alpha, s=s,
                                     block=block, dims=dims)
    res = [factorization_residual(alpha, s, N, block) for N in dims]
    return VerificationReport.from_sweep("m1", dims, block, res, tol,
                                         params={"alpha": alpha, "s": s})


def verify_two_route_factorization(alpha: float, s: float, N: int, block: int,
                                   tolerance: float | None = None) -> VerificationReport:
    """Same factorization with (a, a') produced by the interval-geometry
    route (symmetric subinterval at inner distance s); agreement of the two
    routes is the point.  Also records the Golden-Thompson slack
    Tr(e^{-aH} e^{-2a'H'} e^{-aH}) - Tr(e^{-2aH - 2a'H'}) >= 0."""
    if s <= 0:
        raise NonPositiveParameter("flow parameter must be positive")
    _check_block(block, [N])
    _, a, aprime = symmetric_subinterval(s)
    res = factorization_residual(alpha, s, N, block, a=a, aprime=aprime)
    gen = build_generators(alpha, N)
    eH = gen.exp_H(-a)
    prod = eH @ gen.exp_Hprime(-2.0 * aprime) @ eH
    sum_exp = _sym_exp(2.0 * a * gen.H + 2.0 * aprime * gen.Hprime, -1.0)
    gt_full = float(np.trace(prod) - np.trace(sum_exp))
    gt_block = float(np.trace(prod[:block, :block]) - np.trace(sum_exp[:block, :block]))
    tol = fixtures.resolve_tolerance("t2", tolerance, alpha=alpha, s=s,
                                     block=block, dims=[N])
    return VerificationReport.from_sweep(
        "t2", [N], block, [res], tol,
        params={"alpha": alpha, "s": s, "a": a, "a_prime": aprime},
        details={"golden_thompson_slack": gt_full,
                 "golden_thompson_slack_block": gt_block})


def _sym_exp(M: np.ndarray, scale: float) -> np.ndarray:
    w, V = np.linalg.eigh(M)
    return (V * np.exp(scale * w)) @ V.T


def _check_block(block: int, dims) -> None:
    if block < 1 or block > min(dims) // 4:
        raise ParameterOutOfRange("block must satisfy 1 <= block <= min(dims)/4")


# ---------------------------------------------------------------------------
# trace norm of the nested-interval embedding

def embedding_trace_norm(alpha: float, t: float, N: int,
                         return_details: bool = False):
    """Trace norm of the canonical embedding for a nested pair at second
    inner distance t, computed as the singular-value sum of
    e^{-tH} e^{-tH'} (whose square is the two-sided product).

    Converges, as N grows, to the character value
    e^{-ell*alpha} / (1 - e^{-ell}) with ell = 2*asinh(t).  Singular values
    whose squares fall below 10*eps times the largest are rounding noise
    and are dropped; the dropped mass is reported.
    """
    if t <= 0:
        raise NonPositiveParameter("flow parameter must be positive")
    gen = build_generators(alpha, N)
    M = gen.exp_H(-t) @ gen.exp_Hprime(-t)
    sv = np.linalg.svd(M, compute_uv=False)
    keep = sv ** 2 > 10.0 * np.finfo(float).eps * sv[0] ** 2
    value = float(sv[keep].sum())
    if not return_details:
        return value
    return value, {"dropped_mass": float(sv[~keep].sum()),
                   "kept": int(keep.sum()),
                   "closed_form": closed_form_trace_norm(alpha, t)}


def closed_form_trace_norm(alpha: float, t: float) -> float:
    """Character value the truncated trace norm converges to."""
    ell = 2.0 * math.asinh(t)
    return math.exp(-ell * alpha) / -math.expm1(-ell)


# ---------------------------------------------------------------------------
# operator inequalities

_INEQUALITY_ALIASES = {
    "m2": "m2",
    "kdc": "kdc", "kdc_vector": "kdc",
    "ko": "ko", "ko_bound": "ko", "KO_bound": "ko",
}


def inequality_epsilon(alpha: float, param: float, N: int, block: int,
                       which: str) -> tuple[float, dict]:
    """Positivity defect of one operator inequality at truncation N.

    m2:  min eigenvalue of the leading block of
         e^{-2 tanh(s/2) H} - e^{-2s L0}  (param = s > 0);
    kdc: vector-level norm check of e^{-tan(2 pi lam) d_I H} e^{2 pi lam K2}
         on low-weight vectors, I = (-1, 1), d_I = 2  (param = lam in (0, 1/4));
    ko:  min eigenvalue of the leading block of 2H - K2  (exactly the
         compression of L0 + H, so positivity is exact up to rounding).

    Returns (eps, details) with eps = max(0, defect).
    """
    which = _INEQUALITY_ALIASES.get(which)
    if which is None:
        raise ParameterOutOfRange("which must be one of m2, kdc, ko")
    gen = build_generators(alpha, N)
    if which == "m2":
        if param <= 0:
            raise NonPositiveParameter("s must be positive")
        D = gen.exp_H(-2.0 * math.tanh(0.5 * param)) - gen.exp_L0_diag(-2.0 * param)
        B = D[:block, :block]
        mineig = float(np.linalg.eigvalsh(0.5 * (B + B.T)).min())
        return max(0.0, -mineig), {"min_eigenvalue": mineig}
    if which == "ko":
        B = (2.0 * gen.H - gen.K2)[:block, :block]
        mineig = float(np.linalg.eigvalsh(B).min())
        return max(0.0, -mineig), {"min_eigenvalue": mineig}
    # kdc
    lam = param
    if not 0.0 < lam < 0.25:
        raise ParameterOutOfRange("lambda must lie in (0, 1/4)")
    wK, VK = gen._eig_K2
    wH, VH = gen._eig_H
    damping = math.tan(2.0 * math.pi * lam) * 2.0   # tan(2 pi lam) * d_I
    worst = -math.inf
    dropped = 0.0
    for xi in _test_vectors(N, block):
        ov = VK.T @ xi
        keep = np.abs(ov) > _KDC_OVERLAP_FLOOR
        dropped = max(dropped, float(np.abs(ov[~keep]).sum()))
        eta = VK[:, keep] @ (np.exp(2.0 * math.pi * lam * wK[keep]) * ov[keep])
        zeta = VH @ (np.exp(-damping * wH) * (VH.T @ eta))
        worst = max(worst, float(np.linalg.norm(zeta)) - 1.0)
    return max(0.0, worst), {"worst_norm_excess": worst,
                             "dropped_overlap_mass": dropped}


def _test_vectors(N: int, block: int):
    """Unit vectors supported on the first ``block`` weights: the basis
    vectors plus one fixed mixture (seeded for determinism)."""
    vecs = []
    for j in range(block):
        v = np.zeros(N)
        v[j] = 1.0
        vecs.append(v)
    rng = np.random.default_rng(20260809)
    v = np.zeros(N)
    v[:block] = rng.standard_normal(block)
    vecs.append(v / np.linalg.norm(v))
    return vecs


def verify_inequality(alpha: float, param: float, dims, block: int, which: str,
                      tolerance: float | None = None) -> VerificationReport:
    """Sweep one operator inequality over truncation dims."""
    dims = sorted(int(d) for d in dims)
    _check_block(block, dims)
    which = _INEQUALITY_ALIASES.get(which, which)
    eps = []
    details = {}
    for N in dims:
        e, d = inequality_epsilon(alpha, param, N, block, which)
        eps.append(e)
        details[f"N={N}"] = d
    key = "s" if which == "m2" else ("lambda" if which == "kdc" else None)
    params = {"alpha": alpha}
    if key:
        params[key] = param
    tol = fixtures.resolve_tolerance(which, tolerance, alpha=alpha,
                                     param=param, block=block, dims=dims)
    return VerificationReport.from_sweep(which, dims, block, eps, tol,
                                         params=params, details=details)


# ---------------------------------------------------------------------------
# weight deformation built on the weight-1 representation

def translation_inverse_compression(M: int) -> np.ndarray:
    """Compression to the first M weight vectors of the inverse translation
    generator of the weight-1 representation, in closed form:
    (H^{-1})_{mn} = 2 (min(m, n) + 1) / sqrt((m+1)(n+1)).

    2H is the Jacobi matrix of multiplication by x in the orthonormal
    Laguerre basis of weight x e^{-x}, which gives the entries of 2/x in
    the same basis; it is a Gram matrix, hence positive semidefinite.
    """
    i = np.arange(M, dtype=float)
    Hi = 2.0 * (np.minimum.outer(i, i) + 1.0) / np.sqrt(np.outer(i + 1.0, i + 1.0))
    return Hi


def weight_deformation_spectrum(alpha_target: float, N: int, n_eigs: int = 5,
                                return_details: bool = False):
    """Lowest eigenvalues of the deformed rotation generator
    L0 + lambda H^{-1}, lambda = alpha(alpha-1)/2, built from the weight-1
    representation and compressed to the first N/2 weight vectors.

    The correction enters with the sign that keeps the deformed
    conjugate-translation generator H' + 2 lambda H^{-1} positive; with the
    opposite sign the compressed form is unbounded below.  Eigenvalues
    decrease monotonically in N toward {alpha, alpha+1, ...}.
    """
    if alpha_target < 1.0:
        raise ParameterOutOfRange("target weight must be at least 1")
    if N < 2 * _MIN_DIM:
        raise TooSmall(f"need N >= {2 * _MIN_DIM} for the N/2 compression")
    M = N // 2
    lam = 0.5 * alpha_target * (alpha_target - 1.0)
    Hi = translation_inverse_compression(M)
    gen = build_generators(1.0, M)
    resid = np.abs((gen.H @ Hi - np.eye(M))[: M - 1, : M - 1]).max()
    if resid > 1e-8:
        raise SingularH(f"inverse conditioning check failed: {resid:.2e}")
    Mat = gen.L0 + lam * Hi
    eigs = np.linalg.eigvalsh(Mat)[:n_eigs]
    if not return_details:
        return [float(x) for x in eigs]
    dev = float(np.abs(eigs - (alpha_target + np.arange(n_eigs))).max())
    return [float(x) for x in eigs], {
        "lambda": lam,
        "compression": M,
        "max_deviation": dev,
        "inverse_residual": float(resid),
    }


def deformation_commutation_residual(alpha_target: float, N: int, block: int) -> float:
    """Leading-block residual of [L0_def, K2_def] against the undeformed
    pattern i K1 (the deformation leaves K1 fixed, and the correction
    commutes with H = L0 + K2, so the bracket is unchanged).

    K2_def = K2 - lambda H^{-1}; with K1 = iA the expected bracket is A.
    """
    M = N // 2
    lam = 0.5 * alpha_target * (alpha_target - 1.0)
    Hi = translation_inverse_compression(M)
    gen = build_generators(1.0, M)
    L0d = gen.L0 + lam * Hi
    K2d = gen.K2 - lam * Hi
    Cm = L0d @ K2d - K2d @ L0d
    return float(np.abs((Cm - gen.K1A)[:block, :block]).max())


def verify_weight_deformation(alpha_target: float, dims, n_eigs: int = 5,
                              tolerance: float | None = None) -> VerificationReport:
    """Sweep the deformed-spectrum check over truncation dims."""
    dims = sorted(int(d) for d in dims)
    devs = []
    details = {}
    for N in dims:
        eigs, d = weight_deformation_spectrum(alpha_target, N, n_eigs,
                                              return_details=True)
        devs.append(d["max_deviation"])
        details[f"N={N}"] = {"eigenvalues": eigs}
    tol = fixtures.resolve_tolerance("glw", tolerance,
                                     alpha_target=alpha_target, dims=dims)
    return VerificationReport.from_sweep(
        "glw", dims, n_eigs, devs, tol,
        params={"alpha_target": alpha_target, "n_eigs": n_eigs},
        details=details)


# ---------------------------------------------------------------------------
# unitaries on low-weight vectors (links the 2x2 conventions to this module)

def unitary_translation(gen: GeneratorSet, b: float, vec: np.ndarray) -> np.ndarray:
    """e^{i b H} applied to a vector."""
    w, V = gen._eig_H
    return V @ (np.exp(1j * b * w) * (V.T @ vec))

def unitary_conj_translation(gen: GeneratorSet, d: float, vec: np.ndarray) -> np.ndarray:
    """e^{i d H'} applied to a vector."""
    w, V = gen._eig_Hprime
    return V @ (np.exp(1j * d * w) * (V.T @ vec))

def unitary_dilation(gen: GeneratorSet, c: float, vec: np.ndarray) -> np.ndarray:
    """e^{i c K1} applied to a vector."""
    w, V = gen._eig_K1
    return V @ (np.exp(1j * c * w) * (V.conj().T @ vec))

def unitary_rotation(gen: GeneratorSet, theta: float, vec: np.ndarray) -> np.ndarray:
    """e^{i theta L0} applied to a vector."""
    return np.exp(1j * theta * np.diag(gen.L0)) * vec

def apply_group_element(gen: GeneratorSet, m: np.ndarray, vec: np.ndarray) -> np.ndarray:
    """Apply the represented unitary of a 2x2 element with positive lower-right
    entry, through its translation/dilation/inverted-translation factors
    g = T(p) D(e^{m/2}) S(q):  U(g) = e^{ipH} e^{imK1} e^{-iqH'}."""
    m = np.asarray(m, dtype=float)
    if m[1, 1] <= 0:
        raise ParameterOutOfRange("decomposition needs a positive lower-right entry")
    p = m[0, 1] / m[1, 1]
    q = m[1, 0] / m[1, 1]
    c = -2.0 * math.log(m[1, 1])
    out = unitary_conj_translation(gen, -q, np.asarray(vec, dtype=complex))
    out = unitary_dilation(gen, c, out)
    return unitary_translation(gen, p, out)
