"""Symmetric bilinear forms, signatures and adapted frames."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from ._linalg import eig_counts, fix_column_signs, maxabs, nullspace, numerical_rank
from .algebra import AlmostAbelianPresentation, LieAlgebra, is_automorphism


SYM_RTOL = 1e-12


class MetricError(ValueError):
    """Invalid metric input."""


class DegenerateMetricError(MetricError):
    """The metric has a non-trivial radical."""


class Signature(NamedTuple):
    p: int
    q: int
    r: int


@dataclass(frozen=True, eq=False)
class MetricForm:
    G: np.ndarray

    def __post_init__(self):
        G = np.array(self.G, dtype=float, copy=True)
        if G.ndim != 2 or G.shape[0] != G.shape[1] or G.shape[0] == 0:
            raise MetricError(f"metric must be a non-empty square matrix, got shape {G.shape}")
        asym = maxabs(G - G.T)
        if asym > SYM_RTOL * max(1.0, maxabs(G)):
            raise MetricError(f"metric is not symmetric (max asymmetry {asym:.3g})")
        G = 0.5 * (G + G.T)
        G.setflags(write=False)
        object.__setattr__(self, "G", G)

    @property
    def dim(self) -> int:
        return self.G.shape[0]

    def __call__(self, x, y) -> float:
        return float(np.asarray(x) @ self.G @ np.asarray(y))


@dataclass(frozen=True, eq=False)
class Frame:
    """Columns of ``B`` are frame vectors; ``B.T G B = diag(eps)``."""

    B: np.ndarray
    eps: tuple[int, ...]

    def residual(self, G: MetricForm) -> float:
        return maxabs(self.B.T @ G.G @ self.B - np.diag(self.eps))

    def reordered(self, perm) -> "Frame":
        perm = list(perm)
        return Frame(self.B[:, perm], tuple(self.eps[i] for i in perm))


@dataclass(frozen=True, eq=False)
class IsotropicFrame:
    """Basis ``v_1..v_n``: orthonormal on a complement, then a null pair."""

    V: np.ndarray
    eps_v: tuple[int, ...]

    def gram_target(self) -> np.ndarray:
        m = len(self.eps_v)
        T = np.zeros((m + 2, m + 2))
        T[:m, :m] = np.diag(self.eps_v)
        T[m, m + 1] = T[m + 1, m] = 1.0
        return T

    def residual(self, G: MetricForm) -> float:
        return maxabs(self.V.T @ G.G @ self.V - self.gram_target())

    def frame(self) -> Frame:
        """Orthonormal frame ``(v_1..v_{n-2}, (v+w)/sqrt2, (v-w)/sqrt2)``."""
        V = self.V
        s = np.sqrt(0.5)
        B = np.column_stack([V[:, :-2], s * (V[:, -2] + V[:, -1]), s * (V[:, -2] - V[:, -1])])
        return Frame(B, tuple(self.eps_v) + (1, -1))


def as_metric(G) -> MetricForm:
    return G if isinstance(G, MetricForm) else MetricForm(np.asarray(G, dtype=float))


def signature(G, tol: float = 1e-9) -> Signature:
    return Signature(*eig_counts(as_metric(G).G, tol))


def orthonormal_frame(G, tol: float = 1e-9) -> Frame:
    """Eigendecomposition frame, positive directions first."""
    G = as_metric(G)
    w, Q = np.linalg.eigh(G.G)
    scale = max(np.max(np.abs(w)), 1e-300)
    if np.any(np.abs(w) <= tol * scale):
        raise DegenerateMetricError(f"metric is degenerate (signature {tuple(signature(G, tol))})")
    Q = fix_column_signs(Q)
    order = sorted(range(len(w)), key=lambda i: (w[i] < 0, i))
    B = np.column_stack([Q[:, i] / np.sqrt(abs(w[i])) for i in order])
    eps = tuple(1 if w[i] > 0 else -1 for i in order)
    return Frame(B, eps)


def restrict(G, S) -> MetricForm:
    """Gram matrix of ``G`` on the columns of ``S``."""
    G = as_metric(G)
    S = np.atleast_2d(np.asarray(S, dtype=float))
    if S.shape[0] != G.dim:
        S = S.T
    if numerical_rank(S) < S.shape[1]:
        raise MetricError("spanning vectors are linearly dependent")
    R = S.T @ G.G @ S
    return MetricForm(0.5 * (R + R.T))


def _orthonormal_basis_of(G: MetricForm, S: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    """Orthonormal basis (columns) of span(S), assumed non-degenerate."""
    if S.shape[1] == 0:
        return np.zeros((G.dim, 0)), ()
    F = orthonormal_frame(restrict(G, S))
    return S @ F.B, F.eps


def orthogonal_complement(G, S) -> np.ndarray:
    """Columns span ``{w : g(w, s) = 0 for s in S}``."""
    G = as_metric(G)
    return nullspace(np.asarray(S).T @ G.G)


def isotropic_frame(G, presentation: AlmostAbelianPresentation) -> IsotropicFrame:
    """Adapted basis for an ideal whose orthogonal complement is null."""
    G = as_metric(G)
    H = presentation.ideal_basis
    n = G.dim
    Gh = restrict(G, H).G
    scale = max(maxabs(Gh), 1e-300)
    rad = nullspace(Gh / scale)
    if rad.shape[1] != 1:
        raise MetricError(f"ideal is not isotropic: radical of the restriction has dimension {rad.shape[1]}")
    v_null = H @ rad[:, 0]
    v_null = v_null / maxabs(v_null)
    if v_null[int(np.argmax(np.abs(v_null)))] < 0:
        v_null = -v_null
    # complement of the radical inside the ideal
    comp = nullspace(rad.T)
    Vc, eps_v = _orthonormal_basis_of(G, H @ comp)
    u = presentation.transversal.astype(float)
    for i in range(Vc.shape[1]):
        u = u - eps_v[i] * G(u, Vc[:, i]) * Vc[:, i]
    s = G(u, v_null)
    if abs(s) <= 1e-12:
        raise MetricError("transversal is orthogonal to the radical; metric degenerate")
    u = u / s
    v_last = u - 0.5 * G(u, u) * v_null
    V = np.column_stack([Vc, v_null, v_last]) if Vc.size else np.column_stack([v_null, v_last])
    return IsotropicFrame(V.reshape(n, n), tuple(int(e) for e in eps_v))


def verify_equivalence(L: LieAlgebra, g1, g2, A, tol: float = 1e-9) -> bool:
    """True iff ``A`` is an automorphism and ``A.T g1 A = g2``."""
    g1, g2 = as_metric(g1), as_metric(g2)
    A = np.asarray(A, dtype=float)
    scale = max(1.0, maxabs(A)) ** 2 * max(1.0, maxabs(L.c))
    if is_automorphism(L, A) > tol * scale:
        return False
    return maxabs(A.T @ g1.G @ A - g2.G) <= tol * max(maxabs(g1.G), 1e-300) * max(1.0, maxabs(A)) ** 2


def canonicalize_aff_metric(G):
    """Normal form of a Lorentzian metric on aff(R) with ``[v1, v2] = v1``.

    Returns ``(label, t, A)`` with ``A.T G A`` equal to ``g_plus(t)``,
    ``g_minus(t)`` or ``g_zero``; ``t`` is None for ``g_zero``.
    """
    G = as_metric(G).G
    if G.shape != (2, 2):
        raise MetricError("aff(R) metrics are 2 x 2")
    x, y, z = G[0, 0], G[0, 1], G[1, 1]
    if not x * z < y * y:
        raise MetricError("metric is not Lorentzian (needs xz < y^2)")
    scale = maxabs(G)
    if abs(x) > 1e-12 * scale:
        a, b = 1.0 / np.sqrt(abs(x)), -y / x
        t = (y * y - x * z) / abs(x)
        label = "g_plus" if x > 0 else "g_minus"
    else:
        a, b, t = 1.0 / y, -z / (2 * y), None
        label = "g_zero"
    return label, t, np.array([[a, b], [0.0, 1.0]])


def aff_normal_form(label: str, t: Optional[float] = None) -> np.ndarray:
    if label == "g_plus":
        return np.array([[1.0, 0.0], [0.0, -t]])
    if label == "g_minus":
        return np.array([[-1.0, 0.0], [0.0, t]])
    if label == "g_zero":
        return np.array([[0.0, 1.0], [1.0, 0.0]])
    raise MetricError(f"unknown aff normal form {label!r}")


def random_metric(sig, seed=None, max_cond: float = 1e2) -> MetricForm:
    """``A.T diag(+1.., -1..) A`` for a seeded random ``A`` with bounded condition."""
    p, q = sig
    n = p + q
    if n <= 0:
        raise MetricError("signature must have p + q > 0")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    E = np.diag([1.0] * p + [-1.0] * q)
    while True:
        A = rng.normal(size=(n, n))
        if np.linalg.cond(A) < np.sqrt(max_cond):
            G = A.T @ E @ A
            return MetricForm(0.5 * (G + G.T))


def metric_to_json(G) -> dict:
    G = as_metric(G)
    return {"dim": G.dim, "g": G.G.tolist()}


def metric_from_json(obj) -> MetricForm:
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise MetricError(f"malformed metric JSON: {exc}") from exc
    try:
        n = int(obj["dim"])
        G = np.array(obj["g"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise MetricError(f"malformed metric JSON: {exc!r}") from exc
    if G.shape != (n, n):
        raise MetricError(f"metric must be {n} x {n}, got {G.shape}")
    return MetricForm(G)
