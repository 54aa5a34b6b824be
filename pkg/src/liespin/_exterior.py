"""Exterior forms stored as ``{sorted index tuple: coefficient}`` dicts.

A k-form ``{(i1,...,ik): w}`` with increasing indices stands for
``w * e^{i1} ^ ... ^ e^{ik}``; its value on ``(e_{i1},...,e_{ik})`` is ``w``.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import combinations

import numpy as np


def canonical(idx: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sort a multi-index, returning the permutation sign (0 if repeated)."""
    if len(set(idx)) != len(idx):
        return 0, ()
    arr = list(idx)
    sign = 1
    # bubble sort keeps track of transpositions; k <= 4 here
    for a in range(len(arr)):
        for b in range(len(arr) - 1 - a):
            if arr[b] > arr[b + 1]:
                arr[b], arr[b + 1] = arr[b + 1], arr[b]
                sign = -sign
    return sign, tuple(arr)


def clean(form: dict, tol: float = 0.0) -> dict:
    return {k: v for k, v in form.items() if abs(v) > tol}


def add(*forms: dict, coeffs=None) -> dict:
    out: dict = defaultdict(complex if _any_complex(forms) else float)
    coeffs = coeffs if coeffs is not None else [1.0] * len(forms)
    for f, s in zip(forms, coeffs):
        for k, v in f.items():
            out[k] += s * v
    return dict(out)


def scale(form: dict, s) -> dict:
    return {k: s * v for k, v in form.items()}


def wedge(a: dict, b: dict) -> dict:
    out: dict = defaultdict(float)
    for I, x in a.items():
        for J, y in b.items():
            s, K = canonical(I + J)
            if s:
                out[K] += s * x * y
    return dict(out)


def interior(i: int, form: dict) -> dict:
    """Contraction with the i-th frame vector (first slot)."""
    out: dict = defaultdict(float)
    for I, x in form.items():
        if i in I:
            pos = I.index(i)
            out[I[:pos] + I[pos + 1:]] += (-1) ** pos * x
    return dict(out)


def one_form(vec) -> dict:
    return {(i,): float(v) for i, v in enumerate(vec) if v != 0}


def two_form(W) -> dict:
    """2-form with components ``W[j, k]`` (upper triangle is read)."""
    W = np.asarray(W)
    n = W.shape[0]
    return {(j, k): float(W[j, k]) for j, k in combinations(range(n), 2) if W[j, k] != 0}


def differential_basis(c: np.ndarray) -> list[dict]:
    """``d e^k`` for the dual basis, using ``de^k(v_i, v_j) = -c[k, i, j]``."""
    n = c.shape[0]
    return [two_form(-c[k]) for k in range(n)]


def d(form: dict, de: list[dict]) -> dict:
    """Exterior derivative of a constant-coefficient form via Leibniz."""
    out: dict = defaultdict(float)
    for I, x in form.items():
        for pos, i in enumerate(I):
            rest_before = {I[:pos]: 1.0}
            rest_after = {I[pos + 1:]: 1.0}
            term = wedge(wedge(rest_before, de[i]), rest_after)
            for K, y in term.items():
                out[K] += (-1) ** pos * x * y
    return dict(out)


def _any_complex(forms) -> bool:
    return any(isinstance(v, complex) for f in forms for v in f.values())
