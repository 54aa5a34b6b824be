import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from liespin.clifford import act_form, build_rep, clifford_product, verify_relations, volume_element

patterns = st.integers(1, 4).flatmap(lambda n: st.tuples(*[st.sampled_from([1, -1])] * n))


@given(patterns, st.booleans())
def test_relations_every_pattern(eps, opposite):
    rep = build_rep(eps, opposite=opposite)
    assert verify_relations(rep) <= 1e-14
    # brute-force anticommutator check
    for i, j in itertools.product(range(len(eps)), repeat=2):
        ac = rep.gamma[i] @ rep.gamma[j] + rep.gamma[j] @ rep.gamma[i]
        target = -2 * eps[i] * np.eye(rep.dim) if i == j else np.zeros((rep.dim, rep.dim))
        assert np.allclose(ac, target, atol=1e-14)


@pytest.mark.parametrize("eps,mats", [
    ((1, 1, 1), oracles.CL3),
    ((1, 1, -1), oracles.CL21),
    ((1, 1, 1, 1), oracles.CL4),
])
def test_printed_matrices_used_verbatim(eps, mats):
    rep = build_rep(eps)
    assert rep.source == "printed"
    for g, m in zip(rep.gamma, mats):
        assert np.array_equal(g, m)


def test_cl12_pattern_is_permuted_cl21():
    rep = build_rep((1, -1, 1))
    assert np.array_equal(rep.gamma[1], oracles.CL21[2])
    assert np.array_equal(rep.gamma[2], oracles.CL21[1])


@pytest.mark.parametrize("eps,dim", [((1,), 1), ((1, -1), 2), ((1, 1), 2), ((1, 1, 1), 2),
                                     ((1, 1, 1, -1), 4), ((-1, -1, -1), 2)])
def test_module_dimension(eps, dim):
    assert build_rep(eps).dim == dim


def test_bad_patterns():
    for bad in [(), (1, 1, 1, 1, 1), (1, 0)]:
        with pytest.raises(ValueError):
            build_rep(bad)


def test_cl3_volume_is_scalar():
    # in Cl(3) the volume element acts as a multiple of the identity on each module
    for opposite in (False, True):
        vol = volume_element(build_rep((1, 1, 1), opposite=opposite))
        assert np.allclose(vol, vol[0, 0] * np.eye(2))
    v0 = volume_element(build_rep((1, 1, 1)))[0, 0]
    v1 = volume_element(build_rep((1, 1, 1), opposite=True))[0, 0]
    assert v0 == pytest.approx(-v1)


def test_act_form_weighting():
    rep = build_rep((1, 1, -1))
    form = {(0, 2): 2.0, (2,): 1.0}
    w = act_form(rep, form)
    u = act_form(rep, form, weighted=False)
    assert np.allclose(w, -2 * clifford_product(rep, (0, 2)) - rep.gamma[2])
    assert np.allclose(u, 2 * clifford_product(rep, (0, 2)) + rep.gamma[2])


def test_act_form_rejects_unsorted():
    with pytest.raises(ValueError):
        act_form(build_rep((1, 1, 1)), {(1, 0): 1.0})
