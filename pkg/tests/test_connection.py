import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from liespin.algebra import CATALOG_3D, catalog_algebra, change_basis, make_algebra, random_automorphism
from liespin.clifford import build_rep
from liespin.connection import levi_civita, ricci_direct, ricci_structural, scalar_curvature, spin_connection
from liespin.forms import MetricForm, orthonormal_frame, random_metric

ALGS = [(n, {}) for n in CATALOG_3D] + [("aff", {}), ("d41", {}), ("g", {"c": 2.0}),
                                        ("g", {"c": 0.0}), ("g", {"c": -3.0}), ("abelian", {"n": 3})]


def sigs(n):
    return [(n - q, q) for q in range(n + 1)]


cases = st.sampled_from(ALGS).flatmap(
    lambda e: st.tuples(st.just(e), st.sampled_from(sigs(catalog_algebra(e[0], **e[1]).dim)),
                        st.integers(0, 100_000)))


@given(cases)
def test_levi_civita_metric_and_torsion_free(case):
    (name, kw), sig, seed = case
    L = catalog_algebra(name, **kw)
    G = random_metric(sig, seed)
    F = orthonormal_frame(G)
    conn = levi_civita(L, F)
    assert conn.compatibility_defect() <= 1e-10
    # torsion: nabla_a e_b - nabla_b e_a = [e_a, e_b] in frame coordinates
    eps = np.array(F.eps, dtype=float)
    N = np.einsum("abc,c->abc", conn.Gamma, eps)
    T = N - np.transpose(N, (1, 0, 2)) - np.transpose(conn.frame_constants, (1, 2, 0))
    assert np.max(np.abs(T)) <= 1e-9


@given(cases)
def test_ricci_routes_and_oracle(case):
    (name, kw), sig, seed = case
    L = catalog_algebra(name, **kw)
    G = random_metric(sig, seed)
    rd = ricci_direct(L, G)
    rs = ricci_structural(L, G)
    ro = oracles.ricci(L.c, G.G)
    scale = max(1.0, np.max(np.abs(ro)))
    assert np.max(np.abs(rd.ricci - rs.ricci)) <= 1e-8 * scale
    assert np.max(np.abs(rd.ricci - ro)) <= 1e-8 * scale
    assert rd.scalar == pytest.approx(oracles.scalar(L.c, G.G), abs=1e-8 * scale)
    assert np.allclose(rd.ricci, rd.ricci.T)


def test_flat_abelian():
    L = catalog_algebra("abelian", n=3)
    r = ricci_direct(L, np.diag([1.0, -1.0, 2.0]))
    assert np.all(r.ricci == 0) and r.scalar == 0


@pytest.mark.parametrize("t", [0.5, 1.0, 4.0])
def test_aff_scalar_curvature(t):
    L = catalog_algebra("aff")
    assert scalar_curvature(L, np.diag([1.0, -t])) == pytest.approx(2 / t)
    assert scalar_curvature(L, np.diag([-1.0, t])) == pytest.approx(-2 / t)
    assert oracles.scalar(L.c, np.diag([1.0, -t])) == pytest.approx(2 / t)


def test_aff_null_metric_flat():
    r = ricci_direct(catalog_algebra("aff"), [[0.0, 1.0], [1.0, 0.0]])
    assert np.max(np.abs(r.ricci)) <= 1e-12


def test_scalar_equals_twice_det_for_lorentzian_ideal():
    # ideal span(e1, e2) Lorentzian, ad(e3) = D with d12 + d21 = 2 tr(D)
    D = np.array([[1.0, 2.0], [2.0, 1.0]])
    L = make_algebra(3, [(2, 0, [D[0, 0], D[1, 0], 0]), (2, 1, [D[0, 1], D[1, 1], 0])])
    G = np.diag([1.0, -1.0, 1.0])
    assert scalar_curvature(L, G) == pytest.approx(2 * np.linalg.det(D))
    assert oracles.scalar(L.c, G) == pytest.approx(-6.0)


@given(st.sampled_from([("aff", {}), ("heis3", {}), ("sl2", {}), ("g", {"c": 2.0})]),
       st.integers(0, 100_000))
def test_ricci_covariant_under_automorphisms(entry, seed):
    name, kw = entry
    L = catalog_algebra(name, **kw)
    rng = np.random.default_rng(seed)
    G = random_metric((L.dim - 1, 1), rng)
    A = random_automorphism(L, rng)
    R1 = ricci_direct(L, G).ricci
    R2 = ricci_direct(L, A.T @ G.G @ A).ricci
    assert np.allclose(R2, A.T @ R1 @ A, atol=1e-8 * max(1.0, np.max(np.abs(R2))))


def test_spin_connection_rejects_mismatched_rep():
    L = catalog_algebra("sl2")
    F = orthonormal_frame(np.eye(3))
    with pytest.raises(ValueError):
        spin_connection(L, F, build_rep((1, 1, -1)))


def test_heis3_null_metric_ricci_null():
    L = catalog_algebra("heis3")
    G = MetricForm(np.array([[1.0, 0, 0], [0, 0, 1], [0, 1, 0]]))
    conn = levi_civita(L, orthonormal_frame(G))
    assert np.max(np.abs(conn.Gamma)) > 0
    assert tuple(ricci_direct(L, G).ricci_signature) == (0, 0, 3)
