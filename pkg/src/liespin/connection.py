"""Levi-Civita and spin connections, Ricci curvature by two routes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._linalg import maxabs
from .algebra import LieAlgebra, adjoint, change_basis, killing_form, trace_form
from .clifford import CliffordRep
from .forms import Frame, MetricForm, Signature, as_metric, orthonormal_frame, signature


@dataclass(frozen=True, eq=False)
class ConnectionCoefficients:
    """``Gamma[k, i, j] = g(nabla_{e_k} e_i, e_j)`` on an orthonormal frame."""

    Gamma: np.ndarray
    frame: Frame
    frame_constants: np.ndarray

    def compatibility_defect(self) -> float:
        return maxabs(self.Gamma + np.transpose(self.Gamma, (0, 2, 1)))


@dataclass(frozen=True, eq=False)
class CurvatureReport:
    ricci: np.ndarray
    scalar: float
    ricci_signature: Signature


def frame_constants(L: LieAlgebra, F: Frame) -> np.ndarray:
    """Structure constants in the frame basis."""
    return change_basis(L, F.B).c


def levi_civita(L: LieAlgebra, F: Frame) -> ConnectionCoefficients:
    """Koszul formula on the frame."""
    cf = frame_constants(L, F)
    eps = np.asarray(F.eps, dtype=float)
    # K[a, b, c] = g([e_a, e_b], e_c)
    K = np.einsum("cab,c->abc", cf, eps)
    # transpose(K, (2, 0, 1))[k, i, j] = K[i, j, k]; (1, 2, 0) gives K[j, k, i]
    Gamma = 0.5 * (K - np.transpose(K, (2, 0, 1)) + np.transpose(K, (1, 2, 0)))
    return ConnectionCoefficients(Gamma, F, cf)


def spin_connection(L: LieAlgebra, F: Frame, rep: CliffordRep,
                    conn: Optional[ConnectionCoefficients] = None) -> list[np.ndarray]:
    """``Omega_k = 1/2 sum_{i<j} eps_i eps_j Gamma[k,i,j] gamma_i gamma_j``."""
    if tuple(rep.eps) != tuple(F.eps):
        raise ValueError(f"representation pattern {rep.eps} does not match frame {F.eps}")
    conn = conn or levi_civita(L, F)
    n = L.dim
    out = []
    for k in range(n):
        Om = np.zeros((rep.dim, rep.dim), dtype=complex)
        for i in range(n):
            for j in range(i + 1, n):
                w = F.eps[i] * F.eps[j] * conn.Gamma[k, i, j]
                if w:
                    Om += 0.5 * w * (rep.gamma[i] @ rep.gamma[j])
        out.append(Om)
    return out


def _report(L: LieAlgebra, G: MetricForm, Ric: np.ndarray) -> CurvatureReport:
    Ric = 0.5 * (Ric + Ric.T)
    scal = float(np.trace(np.linalg.solve(G.G, Ric)))
    return CurvatureReport(Ric, scal, signature(Ric))


def ricci_direct(L: LieAlgebra, G, frame: Optional[Frame] = None) -> CurvatureReport:
    """Ricci tensor from ``R(x,y) = [nabla_x, nabla_y] - nabla_[x,y]``."""
    G = as_metric(G)
    F = frame or orthonormal_frame(G)
    conn = levi_civita(L, F)
    eps = np.asarray(F.eps, dtype=float)
    cf = conn.frame_constants
    # N[a][c, b]: coordinates of nabla_{e_a} e_b
    N = np.einsum("abc,c->acb", conn.Gamma, eps)
    R = (np.einsum("acd,bde->abce", N, N) - np.einsum("bcd,ade->abce", N, N)
         - np.einsum("mab,mce->abce", cf, N))
    # Ric(e_b, e_c) = sum_a e^a(R(e_a, e_b) e_c)
    ric_f = np.einsum("abac->bc", R)
    Binv = np.linalg.inv(F.B)
    return _report(L, G, Binv.T @ ric_f @ Binv)


def ricci_structural(L: LieAlgebra, G) -> CurvatureReport:
    """Ricci tensor from the closed formula in bracket and Killing terms."""
    G = as_metric(G)
    Gm = G.G
    Ginv = np.linalg.inv(Gm)
    n = L.dim
    ads = [adjoint(L, np.eye(n)[i]) for i in range(n)]
    T1 = -0.5 * sum(Ginv[a, b] * ads[a].T @ Gm @ ads[b] for a in range(n) for b in range(n))
    w = np.einsum("mk,kab->mab", Gm, L.c)
    T2 = 0.25 * np.einsum("ac,bd,pab,qcd->pq", Ginv, Ginv, w, w)
    T3 = -0.5 * killing_form(L)
    z = Ginv @ trace_form(L)
    az = adjoint(L, z)
    T4 = -0.5 * (Gm @ az + az.T @ Gm)
    return _report(L, G, T1 + T2 + T3 + T4)


def scalar_curvature(L: LieAlgebra, G) -> float:
    return ricci_direct(L, G).scalar
