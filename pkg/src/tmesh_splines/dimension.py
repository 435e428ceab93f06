"""Closed-form dimension formulas and bounds for spline spaces over T-meshes.

Every formula here has an exact precondition; outside it the function raises
rather than extrapolating.  The oracle (module oracle) is the ground truth
these are tested against.
"""

from __future__ import annotations

from .mesh import TMesh, MeshStats, MeshError, NoCrossingVertices, extend
from .hierarchy import HMesh, decompose, crossing_components
from .oracle import SpaceSpec, dim_oracle


class DegreeTooLow(MeshError):
    """The closed-form count requires m >= 2*alpha+1 and n >= 2*beta+1."""


def dim_formula_general(stats: MeshStats, spec: SpaceSpec) -> int:
    """dim S(m,n,alpha,beta) = F(m+1)(n+1) - E_h(m+1)(beta+1)
    - E_v(n+1)(alpha+1) + V(alpha+1)(beta+1), valid for m >= 2*alpha+1 and
    n >= 2*beta+1 (counts over interior edges/vertices, no HBC)."""
    if spec.hbc:
        raise MeshError("the general formula covers the space without HBC")
    if spec.m < 2 * spec.alpha + 1 or spec.n < 2 * spec.beta + 1:
        raise DegreeTooLow(
            f"need m >= 2a+1 and n >= 2b+1, got ({spec.m},{spec.n},{spec.alpha},{spec.beta})")
    m1, n1 = spec.m + 1, spec.n + 1
    a1, b1 = spec.alpha + 1, spec.beta + 1
    return (stats.F * m1 * n1 - stats.E_h * m1 * b1
            - stats.E_v * n1 * a1 + stats.V * a1 * b1)


def dim_bilinear_hbc(stats: MeshStats) -> int:
    """dim of the bilinear C^0 space with HBC: the crossing-vertex count."""
    return stats.V_plus


def lower_bound_biquadratic_hbc(stats: MeshStats) -> int:
    """Lower bound V+ - E + 1 for the biquadratic C^1 space with HBC."""
    if stats.V_plus == 0:
        raise NoCrossingVertices("the lower bound needs V+ > 0")
    return stats.V_plus - stats.E + 1


def dim_biquadratic_hier_hbc(h: HMesh) -> int:
    """dim of the biquadratic C^1 space with HBC over a hierarchical mesh:
    V+ - E + delta, with delta-1 the number of isolated subdivided cells.

    For extensions the isolation structure is read off the mesh itself
    (connected components of the crossing-vertex relationship), since
    extending can merge a boundary-touching isolated cell into the bulk.
    Requires every crossing-vertex-connected part to have a crossing vertex.
    """
    stats = h.realized.stats
    if stats.V_plus == 0:
        raise NoCrossingVertices("dimension formula needs V+ > 0")
    if h.extension is None:
        parts = decompose(h)
        if any(p.stats.V_plus == 0 for p in parts):
            raise NoCrossingVertices("a decomposed part has no crossing vertex")
    delta = h.delta()
    return stats.V_plus - stats.E + delta


def dim_theorem_2_1_check(mesh: TMesh, margin=None):
    """Oracle check of the extension identity for the biquadratic C^1 space:
    dim S(2,2,1,1,T) versus dim of the HBC space over the extension."""
    spec_plain = SpaceSpec(2, 2, 1, 1, hbc=False)
    spec_hbc = SpaceSpec(2, 2, 1, 1, hbc=True)
    dim_s = dim_oracle(mesh, spec_plain)
    ext = extend(mesh, 2, 2, margin)
    dim_sbar = dim_oracle(ext, spec_hbc)
    return dim_s, dim_sbar, dim_s == dim_sbar
