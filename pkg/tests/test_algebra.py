import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from liespin.algebra import (
    AlgebraError,
    CATALOG_3D,
    algebra_from_json,
    algebra_to_json,
    catalog_algebra,
    change_basis,
    check_jacobi,
    derivations,
    derived_dim,
    detect_almost_abelian,
    identify_3d,
    is_automorphism,
    is_nilpotent,
    is_unimodular,
    is_unimodular_coframe,
    killing_form,
    killing_signature,
    make_algebra,
    random_automorphism,
    subalgebra,
    unimodular_kernel,
)

ALL = [(n, {}) for n in CATALOG_3D] + [
    ("abelian", {"n": 3}), ("aff", {}), ("d41", {}),
    ("g", {"c": 3.0}), ("g", {"c": 0.0}), ("g", {"c": -3.0}), ("g", {"c": 0.5}), ("g", {"c": 1.0}),
]
catalog_names = st.sampled_from(ALL)


@pytest.mark.parametrize("name,kw", ALL)
def test_catalog_satisfies_jacobi(name, kw):
    L = catalog_algebra(name, **kw)
    assert check_jacobi(L) == pytest.approx(0.0, abs=1e-12)
    assert oracles.jacobi_residual(L.c) <= 1e-12


@pytest.mark.parametrize("name,kw", ALL)
def test_killing_matches_oracle(name, kw):
    L = catalog_algebra(name, **kw)
    assert np.allclose(killing_form(L), oracles.killing(L.c), atol=1e-12)


def test_jacobi_failure_reported():
    L = make_algebra(3, [(0, 1, [0, 1, 0]), (1, 2, [0, 0, 1]), (0, 2, [1, 0, 0])])
    assert check_jacobi(L) == pytest.approx(1.0)
    assert oracles.jacobi_residual(L.c) == pytest.approx(1.0)


def test_su2_killing_is_negative_definite():
    B = killing_form(catalog_algebra("su2"))
    assert np.allclose(B, -8 * np.eye(3))
    assert killing_signature(catalog_algebra("su2")) == (0, 3, 0)


@pytest.mark.parametrize("name,expected", [
    ("su2", "su2"), ("sl2", "sl2"), ("sl2_lorentzian_basis", "sl2"), ("e2", "e2"),
    ("e11", "e11"), ("e11_riemannian", "e11"), ("heis3", "heis3"),
    ("r2_rtimes_id", "r2_rtimes_id"), ("g1", "g(1)"),
])
def test_identify_named(name, expected):
    assert identify_3d(catalog_algebra(name)).label == expected


@pytest.mark.parametrize("c", [3.0, 2.0, 0.5, 0.0, -3.0, -1.0])
def test_identify_g_c(c):
    ident = identify_3d(catalog_algebra("g", c=c))
    assert not ident.unimodular
    assert ident.c == pytest.approx(c)


@given(catalog_names, st.integers(0, 10_000))
def test_identity_invariant_under_change_of_basis(entry, seed):
    name, kw = entry
    L = catalog_algebra(name, **kw)
    if L.dim != 3:
        return
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(3, 3))
    if abs(np.linalg.det(P)) < 0.2:
        P += 2 * np.eye(3)
    L2 = change_basis(L, P)
    assert identify_3d(L2).label == identify_3d(L).label
    assert check_jacobi(L2) <= 1e-8 * max(1.0, np.max(np.abs(L2.c))) ** 2


@given(catalog_names, st.integers(0, 10_000))
def test_killing_is_congruence_covariant(entry, seed):
    name, kw = entry
    L = catalog_algebra(name, **kw)
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(L.dim, L.dim)) + 2 * np.eye(L.dim)
    B2 = killing_form(change_basis(L, P))
    assert np.allclose(B2, P.T @ killing_form(L) @ P, atol=1e-8 * max(1.0, np.max(np.abs(B2))))


@pytest.mark.parametrize("name,kw", ALL)
def test_unimodular_two_ways(name, kw):
    L = catalog_algebra(name, **kw)
    assert is_unimodular(L) == is_unimodular_coframe(L)
    traces = [np.trace(oracles.ad_matrix(L.c, e)) for e in np.eye(L.dim)]
    assert is_unimodular(L) == bool(np.allclose(traces, 0))


def test_d41_facts():
    L = catalog_algebra("d41")
    assert not is_unimodular(L)
    K = unimodular_kernel(L)
    assert K.shape == (4, 3)
    assert identify_3d(subalgebra(L, K)).label == "heis3"


def test_heis3_nilpotent_and_family_flag():
    L = catalog_algebra("heis3")
    assert is_nilpotent(L)
    assert derived_dim(L) == 1
    pres, family = detect_almost_abelian(L)
    assert family and pres
    for p in pres:
        assert max(p.residuals(L)) <= 1e-12


@pytest.mark.parametrize("name,kw", [("aff", {}), ("e2", {}), ("e11", {}), ("g1", {}),
                                     ("g", {"c": 2.0}), ("r2_rtimes_id", {})])
def test_almost_abelian_presentations_valid(name, kw):
    L = catalog_algebra(name, **kw)
    pres, _ = detect_almost_abelian(L)
    assert pres
    for p in pres:
        assert max(p.residuals(L)) <= 1e-10


@pytest.mark.parametrize("name", ["su2", "sl2", "d41"])
def test_not_almost_abelian(name):
    pres, _ = detect_almost_abelian(catalog_algebra(name))
    assert pres == []


@pytest.mark.parametrize("name,kw,dim", [("aff", {}, 2), ("su2", {}, 3), ("sl2", {}, 3),
                                         ("heis3", {}, 6), ("abelian", {"n": 2}, 4)])
def test_derivation_dimension(name, kw, dim):
    assert len(derivations(catalog_algebra(name, **kw))) == dim


@given(catalog_names, st.integers(0, 10_000))
def test_random_automorphisms_preserve_bracket(entry, seed):
    name, kw = entry
    L = catalog_algebra(name, **kw)
    A = random_automorphism(L, np.random.default_rng(seed))
    assert is_automorphism(L, A) <= 1e-9
    E = np.eye(L.dim)
    for i in range(L.dim):
        for j in range(L.dim):
            lhs = A @ oracles.bracket(L.c, E[i], E[j])
            rhs = oracles.bracket(L.c, A[:, i], A[:, j])
            assert np.allclose(lhs, rhs, atol=1e-9)


@pytest.mark.parametrize("name,kw", ALL)
def test_json_round_trip(name, kw):
    L = catalog_algebra(name, **kw)
    L2 = algebra_from_json(json.dumps(algebra_to_json(L)))
    assert np.array_equal(L.c, L2.c)


@pytest.mark.parametrize("bad", [
    "{not json",
    json.dumps({"brackets": []}),
    json.dumps({"dim": 3, "brackets": [{"i": 1, "j": 0, "v": [0, 0, 1]}]}),
    json.dumps({"dim": 3, "brackets": [{"i": 0, "j": 1, "v": [0, 1]}]}),
])
def test_json_errors(bad):
    with pytest.raises(AlgebraError):
        algebra_from_json(bad)


def test_make_algebra_rejects_duplicate_pairs():
    with pytest.raises(AlgebraError):
        make_algebra(2, [(0, 1, [1, 0]), (1, 0, [1, 0])])


def test_make_algebra_accepts_reversed_pair():
    L = make_algebra(2, [(1, 0, [-1, 0])])
    assert np.array_equal(L.c, catalog_algebra("aff").c)


def test_structure_constants_read_only():
    L = catalog_algebra("sl2")
    with pytest.raises(ValueError):
        L.c[0, 0, 1] = 5.0
