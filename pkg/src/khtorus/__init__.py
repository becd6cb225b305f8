"""Khovanov homology of torus links T(n, m) and its stabilization as m grows."""

from .braid_cube import (
    BraidDiagram,
    BraidSpec,
    EdgeKind,
    InputError,
    SmoothedState,
    edge_type,
    ladder_diagram,
    smooth,
    torus_braid,
)
from .integral_homology import (
    AbelianGroup,
    GradedHomology,
    homology,
    homology_mod,
    smith_normal_form,
    torus_homology,
)
from .khovanov_chain import (
    Generator,
    GradedChainComplex,
    Normalization,
    ResourceGuardError,
    SparseIntMatrix,
    complex,
    differential,
    generators,
    split_at,
)
from .limits import limit_homology, limit_onset, n2_closed_form
from .stabilization import (
    c_closed_form,
    ladder,
    onset_bound,
    verify_collapse,
    verify_stabilization,
)

__version__ = "0.1.0"
