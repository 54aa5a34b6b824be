"""Complex irreducible Clifford modules for orthonormal frames, n <= 4.

Relations: ``gamma_i gamma_j + gamma_j gamma_i = -2 delta_ij eps_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from ._exterior import canonical

I2 = np.eye(2, dtype=complex)

_CL3 = [
    np.array([[0, 1j], [1j, 0]]),
    np.array([[0, 1], [-1, 0]], dtype=complex),
    np.array([[1j, 0], [0, -1j]]),
]

_CL4 = [
    np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=complex),
    np.array([[0, 0, 0, 1j], [0, 0, -1j, 0], [0, -1j, 0, 0], [1j, 0, 0, 0]]),
    np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=complex),
    np.array([[0, 0, 1j, 0], [0, 0, 0, 1j], [1j, 0, 0, 0], [0, 1j, 0, 0]]),
]

# sign patterns with matrices printed explicitly in the reference text
_FIXED = {
    (1, 1, 1): _CL3,
    (1, 1, -1): [_CL3[0], _CL3[1], np.array([[1, 0], [0, -1]], dtype=complex)],
    (1, -1, 1): [_CL3[0], np.array([[1, 0], [0, -1]], dtype=complex), _CL3[1]],
    (1, 1, 1, 1): _CL4,
}

_BASE = {1: [np.array([[1j]])], 2: _CL3[:2], 3: _CL3, 4: _CL4}


@dataclass(frozen=True, eq=False)
class CliffordRep:
    eps: tuple[int, ...]
    gamma: tuple[np.ndarray, ...]
    source: str

    @property
    def n(self) -> int:
        return len(self.eps)

    @property
    def dim(self) -> int:
        return self.gamma[0].shape[0]


def build_rep(eps, opposite: bool = False) -> CliffordRep:
    """Representation for the sign pattern ``eps``.

    Patterns with printed matrices are returned verbatim; otherwise the
    all-positive base is twisted by ``gamma_k -> i gamma_k`` where
    ``eps_k = -1``. ``opposite`` flips the last generator, which selects
    the other irreducible module in odd dimension.
    """
    eps = tuple(int(e) for e in eps)
    n = len(eps)
    if not 1 <= n <= 4 or any(e not in (1, -1) for e in eps):
        raise ValueError(f"unsupported sign pattern {eps}")
    if eps in _FIXED:
        gam = [g.copy() for g in _FIXED[eps]]
        source = "printed"
    else:
        gam = [(1j * g if e < 0 else g.copy()) for g, e in zip(_BASE[n], eps)]
        source = "generic"
    if opposite:
        gam[-1] = -gam[-1]
        source += "+opposite"
    for g in gam:
        g.setflags(write=False)
    return CliffordRep(eps, tuple(gam), source)


def verify_relations(rep: CliffordRep) -> float:
    d = rep.dim
    worst = 0.0
    for i, gi in enumerate(rep.gamma):
        for j, gj in enumerate(rep.gamma):
            target = -2.0 * rep.eps[i] * np.eye(d) if i == j else 0.0
            worst = max(worst, float(np.max(np.abs(gi @ gj + gj @ gi - target))))
    return worst


def clifford_product(rep: CliffordRep, idx) -> np.ndarray:
    out = np.eye(rep.dim, dtype=complex)
    for i in idx:
        out = out @ rep.gamma[i]
    return out


def act_form(rep: CliffordRep, omega: dict, weighted: bool = True) -> np.ndarray:
    """Matrix of a form acting on spinors.

    ``omega`` maps increasing index tuples to coefficients. Each monomial
    ``e^{i1}..e^{ik}`` acts as ``(prod eps) gamma_{i1}..gamma_{ik}``; with
    ``weighted=False`` the sign factor is dropped.
    """
    M = np.zeros((rep.dim, rep.dim), dtype=complex)
    for idx, w in omega.items():
        idx = tuple(idx)
        s, key = canonical(idx)
        if s != 1 or key != idx or any(not 0 <= i < rep.n for i in idx):
            raise ValueError(f"bad multi-index {idx}")
        sign = prod(rep.eps[i] for i in idx) if weighted else 1
        M += sign * w * clifford_product(rep, idx)
    return M


def volume_element(rep: CliffordRep) -> np.ndarray:
    return clifford_product(rep, range(rep.n))
