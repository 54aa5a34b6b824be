"""Sweep the harmonic condition of two families and print where the kernel jumps.

sl(2,R) with diag(lambda, 2, 1) is harmonic only at lambda = 3; the su row of the
unimodular Lorentzian table with mu1 = 2, mu2 = 1 only at mu3 = 3.
"""
import numpy as np

from liespin.catalog import find_family
from liespin.dirac import analyze


def sweep(family_id, group, fixed, name, values):
    f = find_family(family_id, group)
    print(f"{family_id}  ({', '.join(f'{k}={v:g}' for k, v in fixed.items())})")
    print(f"  {name:>8}  kernel  ricci sig   scalar")
    for v in values:
        p = dict(fixed, **{name: float(v)})
        rep = analyze(f.algebra_for(p), f.metric(p))
        sig = ",".join(str(x) for x in rep.ricci_signature)
        print(f"  {v:8.3f}  {rep.harmonic_dim:>6}  ({sig})  {rep.scalar:9.4f}")


if __name__ == "__main__":
    sweep("sl2 g(lambda,mu,nu)", "riemannian", {"mu": 2.0, "nu": 1.0}, "lambda",
          np.arange(2.5, 3.51, 0.125))
    print()
    sweep("su", "lorentzian_unimodular", {"mu1": 2.0, "mu2": 1.0}, "mu3", np.arange(2.0, 4.01, 0.25))
