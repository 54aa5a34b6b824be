"""Dirac operator on left-invariant spinors and its kernel."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from . import _exterior as ext
from ._linalg import maxabs
from .algebra import (AlmostAbelianPresentation, LieAlgebra, adjoint, check_jacobi,
                      detect_almost_abelian, identify_3d, is_unimodular, killing_form,
                      killing_signature)
from .clifford import CliffordRep, act_form, build_rep
from .connection import (frame_constants, levi_civita, ricci_direct, ricci_structural,
                         spin_connection)
from .forms import (DegenerateMetricError, Frame, MetricError, MetricForm, _orthonormal_basis_of,
                    as_metric, isotropic_frame, orthogonal_complement, orthonormal_frame,
                    signature)

KERNEL_RTOL = 1e-8
SQRT2 = np.sqrt(2.0)


class JacobiError(ValueError):
    """Structure constants violate the Jacobi identity."""


@dataclass(frozen=True, eq=False)
class CoframeDifferentials:
    """``de[k, i, j] = de^k(e_i, e_j)`` on an orthonormal frame."""

    de: np.ndarray
    eps: tuple[int, ...]

    def named(self) -> dict[str, float]:
        """Three-dimensional coefficients ``a_ij, b_ij, c_ij`` (1-based)."""
        if self.de.shape[0] != 3:
            raise ValueError("named coefficients exist only in dimension three")
        out = {}
        for k, letter in enumerate("abc"):
            for i, j in combinations(range(3), 2):
                out[f"{letter}{i + 1}{j + 1}"] = float(self.de[k, i, j])
        return out

    def d_squared_defect(self) -> float:
        """Max component of ``d(de^k)``; zero iff the Jacobi identity holds."""
        forms = [ext.two_form(self.de[k]) for k in range(self.de.shape[0])]
        worst = 0.0
        for f in forms:
            out = ext.d(f, forms)
            worst = max(worst, max((abs(v) for v in out.values()), default=0.0))
        return worst


@dataclass(frozen=True, eq=False)
class DiracMatrix:
    M: np.ndarray
    route: str
    frame: Frame
    rep: CliffordRep


@dataclass(frozen=True, eq=False)
class HarmonicReport:
    kernel_dim: int
    kernel_basis: list
    singular_values: list


def coframe_differentials(L: LieAlgebra, F: Frame) -> CoframeDifferentials:
    return CoframeDifferentials(-frame_constants(L, F), tuple(F.eps))


def dirac_form(de: np.ndarray, eps) -> dict:
    """The form ``-1/4 sum_i (eps_i e^i ^ de^i + 2 i_{e_i} de^i)``."""
    n = de.shape[0]
    total: dict = {}
    for i in range(n):
        dei = ext.two_form(de[i])
        term = ext.add(ext.scale(ext.wedge({(i,): 1.0}, dei), eps[i]),
                       ext.scale(ext.interior(i, dei), 2.0))
        total = ext.add(total, term)
    return ext.scale(total, -0.25)


def dirac_from_differentials(de: np.ndarray, rep: CliffordRep, weighted: bool = True) -> np.ndarray:
    return act_form(rep, ext.clean(dirac_form(de, rep.eps)), weighted=weighted)


def _frame_and_rep(G: MetricForm, frame: Optional[Frame], rep: Optional[CliffordRep],
                   opposite: bool) -> tuple[Frame, CliffordRep]:
    F = frame or orthonormal_frame(G)
    R = rep or build_rep(F.eps, opposite=opposite)
    if tuple(R.eps) != tuple(F.eps):
        raise ValueError(f"representation pattern {R.eps} does not match frame {F.eps}")
    return F, R


def dirac_coframe(L: LieAlgebra, G, frame: Optional[Frame] = None,
                  rep: Optional[CliffordRep] = None, opposite: bool = False) -> DiracMatrix:
    G = as_metric(G)
    F, R = _frame_and_rep(G, frame, rep, opposite)
    de = coframe_differentials(L, F).de
    return DiracMatrix(dirac_from_differentials(de, R), "coframe", F, R)


def dirac_connection(L: LieAlgebra, G, frame: Optional[Frame] = None,
                     rep: Optional[CliffordRep] = None, opposite: bool = False) -> DiracMatrix:
    """``sum_k eps_k gamma_k Omega_k`` from the spin connection."""
    G = as_metric(G)
    F, R = _frame_and_rep(G, frame, rep, opposite)
    Om = spin_connection(L, F, R)
    M = sum(F.eps[k] * R.gamma[k] @ Om[k] for k in range(L.dim))
    return DiracMatrix(np.asarray(M, dtype=complex), "connection", F, R)


def _restricted_matrix(L: LieAlgebra, basis: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Matrix of ``ad(x)`` on span(basis) in that basis."""
    target = adjoint(L, x) @ basis
    D, *_ = np.linalg.lstsq(basis, target, rcond=None)
    if maxabs(basis @ D - target) > 1e-9 * max(1.0, maxabs(target)):
        raise ValueError("span is not invariant under ad")
    return D


def dirac_almost_abelian(L: LieAlgebra, G, presentation: Optional[AlmostAbelianPresentation] = None,
                         opposite: bool = False) -> DiracMatrix:
    """Specialised formula for ``h x|_D R``; isotropic or not is detected."""
    G = as_metric(G)
    if presentation is None:
        pres, _ = detect_almost_abelian(L)
        if not pres:
            raise ValueError("algebra is not almost Abelian")
        presentation = pres[0]
    H = presentation.ideal_basis
    n = L.dim
    w = orthogonal_complement(G, H)
    if w.shape[1] != 1:
        raise MetricError("metric is degenerate")
    w = w[:, 0]
    gw = G(w, w)
    form: dict = {}
    if abs(gw) > 1e-9 * maxabs(G.G) * float(w @ w):
        Eh, eps_h = _orthonormal_basis_of(G, H)
        en = w / np.sqrt(abs(gw))
        eps = tuple(eps_h) + (1 if gw > 0 else -1,)
        F = Frame(np.column_stack([Eh, en]), eps)
        D = _restricted_matrix(L, Eh, en)
        last = n - 1
        for i, j in combinations(range(n - 1), 2):
            coef = eps[i] * D[i, j] - eps[j] * D[j, i]
            if coef:
                form[(i, j, last)] = form.get((i, j, last), 0.0) - 0.25 * coef
        form[(last,)] = -0.5 * np.trace(D)
        route_frame = F
    else:
        IF = isotropic_frame(G, presentation)
        F = IF.frame()
        eps = F.eps
        V = IF.V
        D = _restricted_matrix(L, V[:, :n - 1], V[:, n - 1])
        a, b = n - 2, n - 1
        for i, j in combinations(range(n - 2), 2):
            coef = eps[i] * D[i, j] - eps[j] * D[j, i]
            form[(i, j, a)] = form.get((i, j, a), 0.0) - SQRT2 / 8 * coef
            form[(i, j, b)] = form.get((i, j, b), 0.0) + SQRT2 / 8 * coef
        for i in range(n - 2):
            form[(i, a, b)] = form.get((i, a, b), 0.0) + 0.25 * eps[i] * D[i, n - 2]
        tr = np.trace(D)
        form[(a,)] = form.get((a,), 0.0) - SQRT2 / 4 * tr
        form[(b,)] = form.get((b,), 0.0) + SQRT2 / 4 * tr
        route_frame = F
    R = build_rep(route_frame.eps, opposite=opposite)
    return DiracMatrix(act_form(R, ext.clean(form)), "almost_abelian", route_frame, R)


def harmonic(M, rtol: float = KERNEL_RTOL) -> HarmonicReport:
    M = M.M if isinstance(M, DiracMatrix) else np.asarray(M)
    _, s, Vh = np.linalg.svd(M)
    cut = rtol * max(1.0, float(s[0]) if s.size else 0.0)
    idx = [k for k in range(len(s)) if s[k] <= cut]
    basis = []
    for k in idx:
        v = Vh[k].conj()
        j = int(np.argmax(np.abs(v)))
        v = v * (abs(v[j]) / v[j])
        basis.append(v)
    return HarmonicReport(len(idx), basis, [float(x) for x in s])


# -- full pipeline ----------------------------------------------------------

def riemannian_predicate(co: dict, tol: float) -> bool:
    vals = [co["b23"] + co["a13"], co["c12"] + co["a23"] - co["b13"],
            co["c13"] + co["b12"], co["c23"] - co["a12"]]
    return max(abs(v) for v in vals) <= tol


def lorentzian_determinant(co: dict) -> float:
    return (4 * (co["a12"] - co["c23"]) ** 2 - 4 * (co["a13"] + co["b23"]) ** 2
            - (co["a23"] - co["b13"] - co["c12"]) ** 2 + 4 * (co["b12"] + co["c13"]) ** 2)


@dataclass(eq=False)
class AnalysisReport:
    dim: int
    identity: Optional[str]
    unimodular: bool
    killing_signature: tuple
    metric_signature: tuple
    ricci: np.ndarray
    ricci_structural: np.ndarray
    ricci_residual: float
    ricci_signature: tuple
    scalar: float
    dirac: dict
    route_residuals: dict
    harmonic: HarmonicReport
    predicates: dict = field(default_factory=dict)
    assertions: list = field(default_factory=list)

    @property
    def harmonic_dim(self) -> int:
        return self.harmonic.kernel_dim

    @property
    def ok(self) -> bool:
        return all(a["pass"] for a in self.assertions)

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "unimodular": self.unimodular,
            "killing_signature": list(self.killing_signature),
            "metric_signature": list(self.metric_signature),
            "ricci": _num(self.ricci),
            "ricci_residual": _num(self.ricci_residual),
            "ricci_signature": list(self.ricci_signature),
            "scalar": _num(self.scalar),
            "dirac": {"matrix": _num(self.dirac["connection"].M),
                      "routes": sorted(self.dirac),
                      "route_residuals": {k: _num(v) for k, v in sorted(self.route_residuals.items())}},
            "harmonic": {"dim": self.harmonic.kernel_dim,
                         "basis": [_num(v) for v in self.harmonic.kernel_basis],
                         "singular_values": _num(np.array(self.harmonic.singular_values))},
            "harmonic_dim": self.harmonic.kernel_dim,
            "predicates": {k: _num(v) if isinstance(v, float) else v
                           for k, v in sorted(self.predicates.items())},
            "assertions": self.assertions,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        lines = [
            f"identity           {self.identity}",
            f"unimodular         {self.unimodular}",
            f"killing signature  {tuple(self.killing_signature)}",
            f"metric signature   {tuple(self.metric_signature)}",
            f"ricci signature    {tuple(self.ricci_signature)}",
            f"scalar curvature   {_fmt(self.scalar)}",
            f"ricci residual     {_fmt(self.ricci_residual)}",
        ]
        for k, v in sorted(self.route_residuals.items()):
            lines.append(f"route residual     {k}: {_fmt(v)}")
        lines.append(f"harmonic_dim       {self.harmonic.kernel_dim}")
        for k, v in sorted(self.predicates.items()):
            lines.append(f"predicate          {k}: {v if not isinstance(v, float) else _fmt(v)}")
        for a in self.assertions:
            lines.append(f"{'PASS' if a['pass'] else 'FAIL'}  {a['name']}")
        return "\n".join(lines)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _num(x):
    """JSON-ready value rounded to 12 significant digits."""
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_num(v) for v in x.tolist()] if x.ndim else _num(x.item())
    if isinstance(x, complex):
        return [_num(x.real), _num(x.imag)]
    if isinstance(x, (float, np.floating, int, np.integer)) and not isinstance(x, bool):
        v = float(f"{float(x):.12g}")
        return 0.0 if v == 0 else v
    return x


def analyze(L: LieAlgebra, G, opposite: bool = False, tol: float = 1e-8) -> AnalysisReport:
    G = as_metric(G)
    if G.dim != L.dim:
        raise MetricError(f"metric dimension {G.dim} does not match algebra dimension {L.dim}")
    jac = check_jacobi(L)
    if jac > 1e-9 * max(1.0, maxabs(L.c) ** 2):
        raise JacobiError(f"Jacobi identity fails (residual {jac:.3g})")
    sig = signature(G)
    if sig.r:
        raise DegenerateMetricError(f"metric is degenerate (signature {tuple(sig)})")
    n = L.dim
    ident = identify_3d(L).label if n == 3 else None
    uni = is_unimodular(L, tol=1e-9)
    ks = killing_signature(L)
    rd = ricci_direct(L, G)
    rs = ricci_structural(L, G)
    ric_res = maxabs(rd.ricci - rs.ricci)

    F = orthonormal_frame(G)
    rep = build_rep(F.eps, opposite=opposite)
    routes = {"coframe": dirac_coframe(L, G, F, rep), "connection": dirac_connection(L, G, F, rep)}
    residuals = {"coframe-connection": maxabs(routes["coframe"].M - routes["connection"].M)}
    pres, _ = detect_almost_abelian(L)
    if pres:
        aa = dirac_almost_abelian(L, G, pres[0], opposite=opposite)
        routes["almost_abelian"] = aa
        ref = dirac_connection(L, G, aa.frame, aa.rep)
        residuals["almost_abelian-connection"] = maxabs(aa.M - ref.M)
    hr = harmonic(routes["connection"])

    report = AnalysisReport(n, ident, uni, ks, tuple(sig), rd.ricci, rs.ricci, ric_res,
                            tuple(rd.ricci_signature), rd.scalar, routes, residuals, hr)
    scale = max(1.0, maxabs(L.c))
    asserts = [
        {"name": "ricci routes agree", "pass": ric_res <= 1e-8 * scale**2},
    ]
    for k, v in residuals.items():
        asserts.append({"name": f"dirac routes agree ({k})", "pass": v <= 1e-10 * scale})

    if n == 3:
        lor = {(2, 1, 0), (1, 2, 0)}
        if tuple(sig) in ((3, 0, 0), (0, 3, 0)):
            co = coframe_differentials(L, F).named()
            pred = riemannian_predicate(co, tol * scale)
            report.predicates["riemannian_relations"] = pred
            asserts.append({"name": "riemannian predicate matches kernel",
                            "pass": pred == (hr.kernel_dim > 0)})
        elif tuple(sig) in lor:
            # with signature (1,2) use -g, which has the same kernel
            Fl = F if tuple(sig) == (2, 1, 0) else orthonormal_frame(MetricForm(-G.G))
            co = coframe_differentials(L, Fl).named()
            det = lorentzian_determinant(co)
            report.predicates["lorentzian_determinant"] = det
            asserts.append({"name": "lorentzian determinant matches kernel",
                            "pass": (abs(det) <= tol * scale**2) == (hr.kernel_dim > 0)})
        if tuple(sig) not in lor or uni:
            zero = maxabs(routes["connection"].M) <= tol * scale
            asserts.append({"name": "kernel is 0 or 2, and 2 only for the zero operator",
                            "pass": hr.kernel_dim in (0, 2) and ((hr.kernel_dim == 2) == zero)})
    report.assertions = asserts
    return report
