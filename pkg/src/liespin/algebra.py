"""Real Lie algebras given by structure constants.

Convention: ``c[k, i, j]`` is the k-th coordinate of ``[v_i, v_j]``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np
from scipy.linalg import expm

from . import _exterior as ext
from ._linalg import eig_counts, maxabs, nullspace, numerical_rank, rref

ANTISYM_TOL = 1e-12
ZERO_TOL = 1e-12


class AlgebraError(ValueError):
    """Invalid algebra input (bad index, duplicate bracket, bad JSON...)."""


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    c: np.ndarray
    label: Optional[str] = None

    def __post_init__(self):
        c = np.array(self.c, dtype=float, copy=True)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise AlgebraError(f"structure constants must be n x n x n, got {c.shape}")
        asym = maxabs(c + np.transpose(c, (0, 2, 1)))
        if asym > ANTISYM_TOL * max(1.0, maxabs(c)):
            raise AlgebraError(f"structure constants not antisymmetric (max defect {asym:.3g})")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("kij,i,j->k", self.c, np.asarray(x, float), np.asarray(y, float))

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, label={self.label!r})"


@dataclass(frozen=True)
class AlmostAbelianPresentation:
    """Codimension-one Abelian ideal (columns of ``ideal_basis``), a transversal
    vector and the matrix ``D`` of ``ad(transversal)`` on the ideal, with
    ``[t, h_i] = sum_k D[k, i] h_k``."""

    ideal_basis: np.ndarray
    transversal: np.ndarray
    D: np.ndarray

    def residuals(self, L: LieAlgebra) -> tuple[float, float]:
        """(abelian defect, invariance defect) of the presentation."""
        H = self.ideal_basis
        m = H.shape[1]
        ab = max((maxabs(L.bracket(H[:, a], H[:, b])) for a, b in combinations(range(m), 2)),
                 default=0.0)
        inv = maxabs(adjoint(L, self.transversal) @ H - H @ self.D)
        return ab, inv


@dataclass(frozen=True)
class AlgebraIdentity:
    name: str
    unimodular: bool
    killing_signature: tuple[int, int, int]
    derived_dim: int
    c: Optional[float] = None
    diagnostics: str = ""

    @property
    def label(self) -> str:
        if self.name == "g" and self.c is not None:
            return f"g({_fmt_c(self.c)})"
        return self.name


def _fmt_c(c: float) -> str:
    r = round(c)
    return str(int(r)) if abs(c - r) < 1e-9 else f"{c:.6g}"


# -- construction --------------------------------------------------------

def make_algebra(dim: int, brackets, label: Optional[str] = None) -> LieAlgebra:
    """Build an algebra from ``(i, j, v)`` triples meaning ``[v_i, v_j] = v``.

    Pairs may be given in either order; antisymmetry is filled in.
    """
    if dim < 1:
        raise AlgebraError("dimension must be positive")
    c = np.zeros((dim, dim, dim))
    seen = set()
    for i, j, v in brackets:
        if not (0 <= i < dim and 0 <= j < dim) or i == j:
            raise AlgebraError(f"bracket index out of range: ({i}, {j}) for dim {dim}")
        v = np.asarray(v, dtype=float)
        if v.shape != (dim,):
            raise AlgebraError(f"bracket vector for ({i}, {j}) must have length {dim}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise AlgebraError(f"duplicate bracket pair {key}")
        seen.add(key)
        c[:, i, j] = v
        c[:, j, i] = -v
    return LieAlgebra(c, label)


def change_basis(L: LieAlgebra, P) -> LieAlgebra:
    """Structure constants in the basis ``w_a = sum_j P[j, a] v_j``."""
    P = np.asarray(P, dtype=float)
    if P.shape != (L.dim, L.dim) or abs(np.linalg.det(P)) <= 1e-12:
        raise AlgebraError("change of basis matrix must be square and invertible")
    Pinv = np.linalg.inv(P)
    c = np.einsum("mk,kij,ia,jb->mab", Pinv, L.c, P, P)
    c = 0.5 * (c - np.transpose(c, (0, 2, 1)))
    return LieAlgebra(c, L.label)


def subalgebra(L: LieAlgebra, S) -> LieAlgebra:
    """Structure constants of the subalgebra spanned by the columns of ``S``."""
    S = np.asarray(S, dtype=float)
    m = S.shape[1]
    if numerical_rank(S) < m:
        raise AlgebraError("spanning vectors are dependent")
    c = np.zeros((m, m, m))
    for a, b in combinations(range(m), 2):
        w = L.bracket(S[:, a], S[:, b])
        coef, *_ = np.linalg.lstsq(S, w, rcond=None)
        if maxabs(S @ coef - w) > 1e-9 * max(1.0, maxabs(w)):
            raise AlgebraError("span is not closed under the bracket")
        c[:, a, b] = coef
        c[:, b, a] = -coef
    return LieAlgebra(c)


# -- invariants ----------------------------------------------------------

def check_jacobi(L: LieAlgebra) -> float:
    """Max-norm of the cyclic Jacobi sum over all basis triples."""
    c = L.c
    # t[m,i,j,k] = [v_i, [v_j, v_k]]_m
    t = np.einsum("mil,ljk->mijk", c, c)
    jac = t + np.transpose(t, (0, 2, 3, 1)) + np.transpose(t, (0, 3, 1, 2))
    return maxabs(jac)


def adjoint(L: LieAlgebra, x) -> np.ndarray:
    return np.einsum("kij,i->kj", L.c, np.asarray(x, dtype=float))


def killing_form(L: LieAlgebra) -> np.ndarray:
    B = np.einsum("kil,ljk->ij", L.c, L.c)
    return 0.5 * (B + B.T)


def trace_form(L: LieAlgebra) -> np.ndarray:
    """The linear form ``x -> tr ad(x)`` in the dual basis."""
    return np.einsum("kik->i", L.c)


def is_unimodular(L: LieAlgebra, tol: float = ZERO_TOL) -> bool:
    return maxabs(trace_form(L)) <= tol * max(1.0, maxabs(L.c))


def is_unimodular_coframe(L: LieAlgebra, tol: float = ZERO_TOL) -> bool:
    """Unimodularity tested as ``d`` vanishing on all (n-1)-forms."""
    n = L.dim
    de = ext.differential_basis(L.c)
    worst = 0.0
    for I in combinations(range(n), n - 1):
        out = ext.d({I: 1.0}, de)
        worst = max(worst, max((abs(v) for v in out.values()), default=0.0))
    return worst <= tol * max(1.0, maxabs(L.c))


def derived_span(L: LieAlgebra) -> np.ndarray:
    n = L.dim
    cols = [L.c[:, i, j] for i, j in combinations(range(n), 2)]
    return np.array(cols).T if cols else np.zeros((n, 0))


def derived_dim(L: LieAlgebra) -> int:
    M = derived_span(L)
    if M.size == 0 or maxabs(M) <= ZERO_TOL:
        return 0
    return numerical_rank(M)


def _span_basis(M: np.ndarray) -> np.ndarray:
    if M.size == 0 or maxabs(M) <= ZERO_TOL:
        return np.zeros((M.shape[0], 0))
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    r = int(np.sum(s > 1e-9 * s[0]))
    return U[:, :r]


def is_nilpotent(L: LieAlgebra) -> bool:
    """Lower central series reaches zero within ``dim`` steps."""
    n = L.dim
    cur = np.eye(n)
    for _ in range(n + 1):
        if cur.shape[1] == 0:
            return True
        cols = [L.bracket(np.eye(n)[i], cur[:, a]) for i in range(n) for a in range(cur.shape[1])]
        nxt = _span_basis(np.array(cols).T)
        if nxt.shape[1] == cur.shape[1]:
            return False
        cur = nxt
    return cur.shape[1] == 0


def killing_signature(L: LieAlgebra) -> tuple[int, int, int]:
    return eig_counts(killing_form(L))


# -- almost Abelian structure --------------------------------------------

def _abelian_hyperplane_forms(L: LieAlgebra) -> np.ndarray:
    """Columns span the linear forms ``phi`` whose kernel is an Abelian ideal.

    ``phi`` must kill ``[g, g]`` (so ``ker phi`` is an ideal) and satisfy
    ``phi ^ beta_k = 0`` for each bracket 2-form ``beta_k = c[k]``, which is
    exactly the condition that ``c[k]`` vanishes on ``ker phi``.
    """
    n = L.dim
    ann = nullspace(derived_span(L).T) if derived_dim(L) else np.eye(n)
    rows = []
    for k in range(n):
        beta = L.c[k]
        for a, b, cc in combinations(range(n), 3):
            row = np.zeros(n)
            row[a] += beta[b, cc]
            row[b] -= beta[a, cc]
            row[cc] += beta[a, b]
            rows.append(row)
    if not rows or ann.shape[1] == 0:
        return ann
    M = np.array(rows) @ ann
    if maxabs(M) <= ZERO_TOL:
        return ann
    return ann @ nullspace(M)


def presentation_from_form(L: LieAlgebra, phi) -> AlmostAbelianPresentation:
    """Presentation whose ideal is ``ker phi``."""
    phi = np.asarray(phi, dtype=float)
    n = L.dim
    p = int(np.argmax(np.abs(phi) > 1e-9 * maxabs(phi)))
    phi = phi / phi[p]
    E = np.eye(n)
    H = np.array([E[i] - phi[i] * E[p] for i in range(n) if i != p]).T
    t = E[p]
    D, *_ = np.linalg.lstsq(H, adjoint(L, t) @ H, rcond=None)
    return AlmostAbelianPresentation(H, t, D)


def detect_almost_abelian(L: LieAlgebra) -> tuple[list[AlmostAbelianPresentation], bool]:
    """Codimension-one Abelian ideals.

    Returns ``(presentations, family_flag)``; when the admissible ideals
    form a positive-dimensional family a single representative is returned
    with ``family_flag`` set. Abelian algebras give ``([], False)``.
    """
    if derived_dim(L) == 0:
        return [], False
    W = _abelian_hyperplane_forms(L)
    if W.shape[1] == 0:
        return [], False
    if W.shape[1] == 1:
        return [presentation_from_form(L, W[:, 0])], False
    rep = rref(W.T)[0]
    return [presentation_from_form(L, rep)], True


# -- identification in dimension three ------------------------------------

def _expected_killing(name: str, c: Optional[float]) -> tuple[int, int, int]:
    if name == "g":
        if abs(c - 2) <= 1e-9:
            return (0, 0, 3)
        return (0, 1, 2) if c > 2 else (1, 0, 2)
    return {
        "abelian": (0, 0, 3), "heis3": (0, 0, 3), "e2": (0, 1, 2), "e11": (1, 0, 2),
        "su2": (0, 3, 0), "sl2": (2, 1, 0), "r2_rtimes_id": (1, 0, 2),
    }[name]


def identify_3d(L: LieAlgebra) -> AlgebraIdentity:
    if L.dim != 3:
        raise AlgebraError("identify_3d needs a three-dimensional algebra")
    jac = check_jacobi(L)
    if jac > 1e-9 * max(1.0, maxabs(L.c) ** 2):
        raise AlgebraError(f"Jacobi identity fails (residual {jac:.3g})")
    uni = is_unimodular(L, tol=1e-9)
    ks = killing_signature(L)
    dd = derived_dim(L)
    name, c, diag = "unknown", None, ""
    if dd == 0:
        name = "abelian"
    elif dd == 3:
        name = {(0, 3, 0): "su2", (2, 1, 0): "sl2"}.get(ks, "unknown")
        if name == "unknown":
            diag = f"perfect algebra with Killing signature {ks}"
    else:
        pres, _ = detect_almost_abelian(L)
        if not pres:
            diag = "no codimension-one Abelian ideal"
        else:
            D = pres[0].D
            s = max(maxabs(D), ZERO_TOL)
            tr = float(np.trace(D))
            det = float(np.linalg.det(D))
            if abs(tr) <= 1e-9 * s:
                if abs(det) <= 1e-9 * s * s:
                    name = "heis3"
                elif det < 0:
                    name = "e11"
                else:
                    name = "e2"
            elif maxabs(D - tr / 2 * np.eye(2)) <= 1e-9 * s:
                name = "r2_rtimes_id"
            else:
                name, c = "g", 4 * det / tr**2
    if name != "unknown":
        exp = _expected_killing(name, c)
        if exp != ks:
            diag = f"{name} expects Killing signature {exp}, found {ks}"
            name, c = "unknown", None
    return AlgebraIdentity(name, uni, ks, dd, c, diag)


# -- automorphisms ---------------------------------------------------------

def derivation_constraints(L: LieAlgebra) -> np.ndarray:
    """Matrix acting on ``vec(X)`` (row-major) whose kernel is Der(L)."""
    n = L.dim
    cols = []
    for a in range(n):
        for b in range(n):
            X = np.zeros((n, n))
            X[a, b] = 1.0
            # X[v_i, v_j] - [X v_i, v_j] - [v_i, X v_j]
            r = (np.einsum("mk,kij->mij", X, L.c)
                 - np.einsum("mkj,ki->mij", L.c, X)
                 - np.einsum("mik,kj->mij", L.c, X))
            cols.append(r.ravel())
    return np.array(cols).T


def derivations(L: LieAlgebra) -> list[np.ndarray]:
    n = L.dim
    N = nullspace(derivation_constraints(L))
    return [N[:, k].reshape(n, n) for k in range(N.shape[1])]


def random_automorphism(L: LieAlgebra, rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
    """``expm`` of a random derivation (identity component of Aut)."""
    ders = derivations(L)
    X = sum(rng.normal() * Dk for Dk in ders) if ders else np.zeros((L.dim, L.dim))
    return expm(scale * X)


def is_automorphism(L: LieAlgebra, A) -> float:
    """Max-norm of ``A[v_i, v_j] - [A v_i, A v_j]`` over basis pairs."""
    A = np.asarray(A, dtype=float)
    lhs = np.einsum("mk,kij->mij", A, L.c)
    rhs = np.einsum("mkl,ki,lj->mij", L.c, A, A)
    return maxabs(lhs - rhs)


def unimodular_kernel(L: LieAlgebra) -> np.ndarray:
    """Basis (columns) of the kernel of ``x -> tr ad(x)``."""
    chi = trace_form(L)
    if maxabs(chi) <= ZERO_TOL:
        return np.eye(L.dim)
    return nullspace(chi[None, :])


# -- catalog ----------------------------------------------------------------

X, Y, Z = 0, 1, 2


def _b3(*entries) -> list:
    """Bracket triples for 3D algebras from ``(i, j, (vx, vy, vz))``."""
    return [(i, j, v) for i, j, v in entries]


def catalog_algebra(name: str, **params) -> LieAlgebra:
    """Algebras in the exact bases used by the metric tables.

    Names: abelian (``n``), aff, su2, sl2 (alias sl2_lorentzian_basis), e2,
    e11 (Lorentzian-table basis), e11_riemannian, heis3, r2_rtimes_id,
    g (``c``; dispatches on c), g_companion (``c``), g1, g_c_lt1 (``c``), d41.
    """
    if name == "abelian":
        n = int(params.get("n", 3))
        return make_algebra(n, [], label=f"abelian{n}")
    if name == "aff":
        return make_algebra(2, [(0, 1, (1, 0))], label="aff")
    if name == "su2":
        return make_algebra(3, _b3((X, Y, (0, 0, 2)), (Z, X, (0, 2, 0)), (Z, Y, (-2, 0, 0))), "su2")
    if name in ("sl2", "sl2_lorentzian_basis"):
        return make_algebra(3, _b3((X, Y, (0, 0, 2)), (Z, X, (0, 2, 0)), (Z, Y, (2, 0, 0))), "sl2")
    if name == "e2":
        return make_algebra(3, _b3((X, Y, (0, 0, 1)), (Z, X, (0, 1, 0))), "e2")
    if name == "e11":
        return make_algebra(3, _b3((X, Y, (0, 1, 0)), (Z, X, (0, 0, 1))), "e11")
    if name == "e11_riemannian":
        return make_algebra(3, _b3((Z, X, (1, 0, 0)), (Z, Y, (0, -1, 0))), "e11")
    if name == "heis3":
        return make_algebra(3, _b3((X, Y, (0, 0, 1))), "heis3")
    if name == "r2_rtimes_id":
        return make_algebra(3, _b3((Z, X, (1, 0, 0)), (Z, Y, (0, 1, 0))), "r2_rtimes_id")
    if name == "g1":
        return make_algebra(3, _b3((Z, X, (1, 0, 0)), (Z, Y, (1, 1, 0))), "g(1)")
    if name in ("g_companion", "g_c_lt1", "g"):
        if "c" not in params:
            raise AlgebraError(f"{name} needs parameter c")
        c = float(params["c"])
        if not math.isfinite(c):
            raise AlgebraError("c must be finite")
        if name == "g":
            if c > 1:
                name = "g_companion"
            elif c == 1:
                return catalog_algebra("g1")
            else:
                name = "g_c_lt1"
        if name == "g_companion":
            return make_algebra(3, _b3((Z, X, (0, 1, 0)), (Z, Y, (-c, 2, 0))), f"g({_fmt_c(c)})")
        if c >= 1:
            raise AlgebraError("the diagonal presentation of g(c) needs c < 1")
        w = math.sqrt(1 - c)
        return make_algebra(3, _b3((Z, X, (1 + w, 0, 0)), (Z, Y, (0, 1 - w, 0))), f"g({_fmt_c(c)})")
    if name == "d41":
        # de1 = e1^e4 + 4 e2^e3, de2 = e2^e4 with de(x,y) = -e([x,y])
        return make_algebra(4, [(0, 3, (-1, 0, 0, 0)), (1, 2, (-4, 0, 0, 0)),
                                (1, 3, (0, -1, 0, 0))], "d41")
    raise AlgebraError(f"unknown catalog algebra {name!r}")


CATALOG_3D = ("su2", "sl2", "e2", "e11", "e11_riemannian", "heis3", "r2_rtimes_id", "g1")


# -- JSON -------------------------------------------------------------------

def algebra_to_json(L: LieAlgebra) -> dict:
    n = L.dim
    br = [{"i": i, "j": j, "v": [float(x) for x in L.c[:, i, j]]}
          for i, j in combinations(range(n), 2) if maxabs(L.c[:, i, j]) > 0]
    out = {"dim": n, "brackets": br}
    if L.label:
        out["label"] = L.label
    return out


def algebra_from_json(obj) -> LieAlgebra:
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise AlgebraError(f"malformed algebra JSON: {exc}") from exc
    try:
        n = int(obj["dim"])
        triples = [(int(b["i"]), int(b["j"]), b["v"]) for b in obj.get("brackets", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise AlgebraError(f"malformed algebra JSON: {exc!r}") from exc
    for i, j, _ in triples:
        if not i < j:
            raise AlgebraError(f"bracket pair must satisfy i < j, got ({i}, {j})")
    return make_algebra(n, triples, label=obj.get("label"))
