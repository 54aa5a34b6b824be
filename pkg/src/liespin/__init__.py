"""Left-invariant harmonic spinors on Lie groups with left-invariant metrics.

Exact finite-dimensional linear algebra: structure constants, metrics and
frames, Clifford modules, Levi-Civita and spin connections, Dirac matrices on
left-invariant spinors, and a catalog of three-dimensional metric families.
"""

from .algebra import (
    AlgebraError,
    LieAlgebra,
    catalog_algebra,
    change_basis,
    check_jacobi,
    identify_3d,
    is_unimodular,
    killing_form,
    make_algebra,
)
from .clifford import CliffordRep, act_form, build_rep, verify_relations
from .connection import levi_civita, ricci_direct, ricci_structural, scalar_curvature
from .dirac import JacobiError, analyze, dirac_almost_abelian, dirac_coframe, dirac_connection, harmonic
from .forms import (
    DegenerateMetricError,
    MetricError,
    MetricForm,
    canonicalize_aff_metric,
    orthonormal_frame,
    signature,
    verify_equivalence,
)

__version__ = "0.1.0"
