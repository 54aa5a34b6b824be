import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from liespin.algebra import CATALOG_3D, catalog_algebra, identify_3d, is_unimodular, make_algebra
from liespin.clifford import build_rep
from liespin.dirac import (
    JacobiError,
    analyze,
    coframe_differentials,
    dirac_almost_abelian,
    dirac_coframe,
    dirac_connection,
    dirac_from_differentials,
    harmonic,
    lorentzian_determinant,
    riemannian_predicate,
)
from liespin.forms import DegenerateMetricError, Frame, MetricForm, orthonormal_frame, random_metric

ALGS = [(n, {}) for n in CATALOG_3D] + [("aff", {}), ("d41", {}), ("g", {"c": 2.0}), ("g", {"c": 0.0}),
                                        ("g", {"c": -3.0}), ("g", {"c": 0.5}), ("abelian", {"n": 2})]


def semidirect(D):
    """``h x|_D R`` with ``[e_n, e_i] = sum_k D[k, i] e_k`` on the standard basis."""
    m = D.shape[0]
    return make_algebra(m + 1, [(m, i, list(D[:, i]) + [0.0]) for i in range(m)])


cases = st.sampled_from(ALGS).flatmap(
    lambda e: st.tuples(st.just(e),
                        st.integers(0, catalog_algebra(e[0], **e[1]).dim),
                        st.integers(0, 100_000)))


def _metric(L, q, seed):
    return random_metric((L.dim - q, q), seed)


# -- agreement with independent computations ---------------------------------

@given(cases)
def test_routes_agree_with_oracle(case):
    (name, kw), q, seed = case
    L = catalog_algebra(name, **kw)
    G = _metric(L, q, seed)
    F = orthonormal_frame(G)
    rep = build_rep(F.eps)
    Mc = dirac_coframe(L, G, F, rep).M
    Mk = dirac_connection(L, G, F, rep).M
    Mo = oracles.dirac(L.c, G.G, F.B, F.eps, rep.gamma)
    scale = max(1.0, np.max(np.abs(L.c)))
    assert np.max(np.abs(Mc - Mk)) <= 1e-10 * scale
    assert np.max(np.abs(Mk - Mo)) <= 1e-10 * scale


@given(cases)
def test_almost_abelian_route_agrees(case):
    (name, kw), q, seed = case
    L = catalog_algebra(name, **kw)
    G = _metric(L, q, seed)
    try:
        M = dirac_almost_abelian(L, G)
    except ValueError:
        return  # not almost Abelian
    ref = dirac_connection(L, G, M.frame, M.rep).M
    assert np.max(np.abs(M.M - ref)) <= 1e-10 * max(1.0, np.max(np.abs(L.c)))


@given(cases)
def test_d_squared_vanishes(case):
    (name, kw), q, seed = case
    L = catalog_algebra(name, **kw)
    co = coframe_differentials(L, orthonormal_frame(_metric(L, q, seed)))
    assert co.d_squared_defect() <= 1e-9


# -- printed examples -----------------------------------------------------------

def test_four_dimensional_example():
    L = catalog_algebra("d41")
    F = Frame(np.eye(4), (1, 1, 1, 1))
    M = dirac_coframe(L, np.eye(4), F).M
    expected = 8j * np.array([[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]])
    assert np.allclose(-4 * M, expected, atol=1e-12)
    assert harmonic(M).kernel_dim == 2
    assert not is_unimodular(L)


@given(st.sampled_from(["su2", "sl2", "e2", "e11_riemannian", "heis3", "g1", "r2_rtimes_id"]),
       st.integers(0, 100_000))
def test_riemannian_display(name, seed):
    L = catalog_algebra(name)
    G = random_metric((3, 0), seed)
    F = orthonormal_frame(G)
    co = coframe_differentials(L, F).named()
    M = dirac_coframe(L, G, F).M
    assert np.allclose(-4 * M, oracles.riemannian_display(co), atol=1e-10)


@given(st.sampled_from(["su2", "sl2", "e2", "e11", "heis3", "g1", "r2_rtimes_id"]),
       st.integers(0, 100_000))
def test_lorentzian_display(name, seed):
    L = catalog_algebra(name)
    G = random_metric((2, 1), seed)
    F = orthonormal_frame(G)
    assert F.eps == (1, 1, -1)
    cd = coframe_differentials(L, F)
    co = cd.named()
    rep = build_rep(F.eps)
    printed = oracles.lorentzian_display(co)
    # the printed matrix is the action without the sign factor on e^3
    unweighted = dirac_from_differentials(cd.de, rep, weighted=False)
    assert np.allclose(4 * unweighted, printed, atol=1e-10)
    # the convention-consistent operator differs but has the same determinant
    weighted = dirac_connection(L, G, F, rep).M
    scale = max(1.0, np.max(np.abs(printed)) ** 2)
    assert np.linalg.det(4 * weighted) == pytest.approx(np.linalg.det(printed), abs=1e-9 * scale)
    assert np.linalg.det(printed) == pytest.approx(lorentzian_determinant(co), abs=1e-9 * scale)


def test_e11_coefficients():
    nu = 2.5
    s = 1 / np.sqrt(nu)
    L = make_algebra(3, [(0, 2, [0, s, 0]), (1, 2, [s, 0, 0])])
    assert identify_3d(L).label == "e11"
    co = coframe_differentials(L, Frame(np.eye(3), (1, 1, 1))).named()
    assert co["a23"] == pytest.approx(-s) and co["b13"] == pytest.approx(-s)
    assert co["a12"] == co["a13"] == co["b12"] == 0
    assert riemannian_predicate(co, 1e-12)
    assert analyze(L, np.eye(3)).harmonic_dim == 2


def test_aff_null_metric_kernel_one():
    L = catalog_algebra("aff")
    M = dirac_almost_abelian(L, [[0.0, 1.0], [1.0, 0.0]])
    assert harmonic(M).kernel_dim == 1
    assert np.linalg.matrix_rank(M.M) == 1
    # proportional to the action of e^1 - e^2, which squares to zero
    assert np.allclose(M.M @ M.M, 0, atol=1e-12)


@given(st.integers(0, 100_000))
def test_aff_riemannian_no_harmonic(seed):
    L = catalog_algebra("aff")
    assert harmonic(dirac_connection(L, random_metric((2, 0), seed))).kernel_dim == 0


def test_harmonic_zero_matrix():
    assert harmonic(np.zeros((2, 2))).kernel_dim == 2


def test_lorentzian_ideal_kernel_one():
    # kernel dimension 1 is derived from the rank of the 2 x 2 operator
    D = np.array([[1.0, 2.0], [2.0, 1.0]])
    L = semidirect(D)
    G = np.diag([1.0, -1.0, 1.0])
    M = dirac_connection(L, G)
    assert harmonic(M).kernel_dim == 1
    assert oracles.kernel_dim(M.M) == 1


# -- structural properties ------------------------------------------------------

eps_patterns = st.integers(2, 4).flatmap(lambda n: st.tuples(*[st.sampled_from([1, -1])] * n))


@given(eps_patterns, st.integers(0, 100_000))
def test_trace_free_symmetrised_derivation_gives_zero_operator(eps, seed):
    rng = np.random.default_rng(seed)
    m = len(eps) - 1
    D = rng.normal(size=(m, m))
    E = np.diag(eps[:m]).astype(float)
    Dstar = E @ D.T @ E
    Dhat = 0.5 * (D + Dstar) - np.trace(D) / m * np.eye(m)
    L = semidirect(Dhat)
    G = np.diag(np.array(eps, dtype=float))
    M = dirac_connection(L, G).M
    assert np.max(np.abs(M)) <= 1e-12
    if m > 1:  # for m == 1 the symmetrised derivation vanishes and the algebra is Abelian
        Ma = dirac_almost_abelian(L, G).M
        assert np.max(np.abs(Ma)) <= 1e-12


@given(st.integers(1, 3), st.integers(0, 100_000))
def test_riemannian_non_unimodular_almost_abelian_has_no_harmonic(m, seed):
    rng = np.random.default_rng(seed)
    D = rng.normal(size=(m, m))
    if abs(np.trace(D)) < 0.1:
        D += np.eye(m)
    L = semidirect(D)
    G = random_metric((m + 1, 0), rng)
    assert harmonic(dirac_connection(L, G)).kernel_dim == 0


@given(cases)
def test_kernel_invariant_under_opposite_irrep(case):
    (name, kw), q, seed = case
    L = catalog_algebra(name, **kw)
    G = _metric(L, q, seed)
    k0 = harmonic(dirac_connection(L, G)).kernel_dim
    assert harmonic(dirac_connection(L, G, opposite=True)).kernel_dim == k0


@given(cases, st.randoms(use_true_random=False))
def test_kernel_invariant_under_frame_reordering(case, rnd):
    (name, kw), q, seed = case
    L = catalog_algebra(name, **kw)
    G = _metric(L, q, seed)
    F = orthonormal_frame(G)
    perm = list(range(L.dim))
    rnd.shuffle(perm)
    F2 = F.reordered(perm)
    k0 = harmonic(dirac_connection(L, G, F)).kernel_dim
    assert harmonic(dirac_connection(L, G, F2, build_rep(F2.eps))).kernel_dim == k0


UNIMODULAR = ["su2", "sl2", "e2", "e11", "heis3"]


@given(st.sampled_from(UNIMODULAR), st.sampled_from([0, 1]), st.integers(0, 100_000))
def test_zero_or_two_dichotomy(name, q, seed):
    L = catalog_algebra(name)
    M = dirac_connection(L, random_metric((3 - q, q), seed)).M
    k = harmonic(M).kernel_dim
    assert k in (0, 2)
    assert (k == 2) == bool(np.max(np.abs(M)) <= 1e-10)


# -- analyze ------------------------------------------------------------------

@pytest.mark.parametrize("name,G,k", [
    ("sl2", np.diag([3.0, 2.0, 1.0]), 2),
    ("su2", np.diag([1.0, 1.0, -2.0]), 2),
    ("heis3", np.eye(3), 0),
])
def test_analyze_examples(name, G, k):
    rep = analyze(catalog_algebra(name), G)
    assert rep.harmonic_dim == k
    assert rep.ok
    if name == "sl2":
        assert rep.predicates["riemannian_relations"] is True


def test_analyze_errors():
    bad = make_algebra(3, [(0, 1, [0, 1, 0]), (1, 2, [0, 0, 1]), (0, 2, [1, 0, 0])])
    with pytest.raises(JacobiError):
        analyze(bad, np.eye(3))
    with pytest.raises(DegenerateMetricError):
        analyze(catalog_algebra("sl2"), np.diag([1.0, 1.0, 0.0]))


def test_analyze_json_is_deterministic():
    L = catalog_algebra("e11")
    G = MetricForm(np.diag([1.0, -1.0, 1.0]))
    assert analyze(L, G).to_json() == analyze(L, G).to_json()


def test_signature_one_two_handled_through_negation():
    L = catalog_algebra("su2")
    G = -np.diag([1.0, 1.0, -2.0])
    rep = analyze(L, G)
    assert rep.harmonic_dim == 2 and rep.ok
    assert abs(rep.predicates["lorentzian_determinant"]) <= 1e-9
