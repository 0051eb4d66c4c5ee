"""Constructions of the worked fixtures: the null-correlation section
module, the cotangent-syzygy module, the Buchsbaum-curve resolution
pipeline (mapping cone + Horseshoe), and the standard curve ideals.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra import (
    GF,
    GradedMatrix,
    ONE_MONO,
    Ring,
    VARS,
    mono_mul,
    poly_add,
    random_form,
)
from .resolution import (
    BettiTable,
    ChainMap,
    GradedPresentation,
    Resolution,
    betti_table,
    direct_sum,
    horseshoe_betti,
    mapping_cone,
    minimal_free_resolution,
    minimize,
)

_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
_PAIR_INDEX = {p: i for i, p in enumerate(_PAIRS)}
_TRIPLES = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]


def _koszul_columns(field):
    """Relations among the six syzygies x_i e_j - x_j e_i of the
    variables: the third Koszul differential."""
    cols = []
    for (i, j, k) in _TRIPLES:
        cols.append({
            (VARS[i], _PAIR_INDEX[(j, k)]): field.one,
            (VARS[j], _PAIR_INDEX[(i, k)]): field.neg(field.one),
            (VARS[k], _PAIR_INDEX[(i, j)]): field.one,
        })
    return cols


def cotangent_module(ring: Ring, twist: int = 0) -> GradedPresentation:
    """First syzygy module of (x0..x3), twisted so its six generators
    sit in degree 2 - twist."""
    field = ring.field
    gens = (2 - twist,) * 6
    rel = GradedMatrix.from_columns(ring, gens, [
        {k: v for k, v in col.items()} for col in _koszul_columns(field)
    ])
    return GradedPresentation(ring, gens, rel)


def null_correlation_module(ring: Ring) -> GradedPresentation:
    """Quotient of the twisted cotangent-syzygy module by the section
    x1 e0 - x0 e1 + x3 e2 - x2 e3 (a nondegenerate skew form): six
    degree-0 generators, four linear relations and one constant one."""
    field = ring.field
    gens = (0,) * 6
    cols = [dict(c) for c in _koszul_columns(field)]
    w = {(ONE_MONO, _PAIR_INDEX[(0, 1)]): field.neg(field.one),
         (ONE_MONO, _PAIR_INDEX[(2, 3)]): field.neg(field.one)}
    cols.append(w)
    rel = GradedMatrix.from_columns(ring, gens, cols)
    return GradedPresentation(ring, gens, rel)


# ---------------------------------------------------------------------------
# Buchsbaum-curve pipeline: cone over the cotangent resolution, then
# the Horseshoe step for the section sequence.

@dataclass
class ConePipelineResult:
    r: int
    b: int
    e: int
    cone: Resolution                 # resolution shape of I_X(e), not minimal
    cone_betti: BettiTable           # before cancellation
    quot_betti: BettiTable           # minimized, twists of I_X(e+4)
    sheaf_betti: BettiTable          # Horseshoe output for the section module
    d: int
    g: int


def buchsbaum_sheaf_pipeline(ring: Ring, r: int = 1, b: int = 1,
                             seed: int = 0) -> ConePipelineResult:
    """Resolution bookkeeping for the diameter-1 family with invariants
    (r, b): e = 1 + b + 2r, curve degree d = C(e+4, 2) - 3r - 7.

    Builds the mapping cone replacing the r cotangent summands by their
    Koszul resolutions (generic chain map), cancels units, twists to
    the section-module normalization and applies the Horseshoe sum with
    the rank-1 trivial subsheaf.  Both the uncancelled and cancelled
    tables are reported.
    """
    if r < 1 or b < 1:
        raise ValueError("need r >= 1 and b >= 1")
    field = ring.field
    rng = random.Random(seed)
    e = 1 + b + 2 * r
    # target: resolution of O + Omega-part^r + O(-3)^{b-1}, all as modules
    parts = [Resolution(ring, [(0,)], [])]
    for _ in range(r):
        parts.append(minimal_free_resolution(cotangent_module(ring)))
    for _ in range(b - 1):
        parts.append(Resolution(ring, [(3,)], []))
    target = direct_sum(parts)
    # source: O(-2)^{3r-1} + O(-4)^b, a free module in one position
    src_twists = (2,) * (3 * r - 1) + (4,) * b
    source = Resolution(ring, [src_twists], [])
    entries = {}
    for j, cd in enumerate(src_twists):
        for i, rd in enumerate(target.twists[0]):
            d = cd - rd
            if d < 0:
                continue
            if d == 0:
                entries[(i, j)] = {ONE_MONO: field.normalize(rng.randrange(1, 32003))}
            else:
                entries[(i, j)] = random_form(rng, d, field)
    phi0 = GradedMatrix(ring, target.twists[0], src_twists, entries)
    cone = mapping_cone(ChainMap(source, target, [phi0]))
    cone_betti = BettiTable.from_resolution(cone, require_minimal=False)
    reduced = minimize(cone)
    quot_betti = betti_table(reduced).shift(4)   # twists of I_X(e+4)
    sub = BettiTable({(1, 0): 1})
    sheaf_betti = horseshoe_betti(sub, quot_betti)
    d = (e + 4) * (e + 3) // 2 - 3 * r - 7
    g = (e + 1) * d - (e + 4) * (e + 3) * (e + 2) // 6 + 5
    return ConePipelineResult(r, b, e, cone, cone_betti, quot_betti,
                              sheaf_betti, d, g)


# ---------------------------------------------------------------------------
# curve ideal templates

def _mono(*exps):
    return tuple(exps)


def skew_lines_ideal(ring: Ring):
    """(x0, x1) intersect (x2, x3): two disjoint lines."""
    K = ring.field
    return [
        {_mono(1, 0, 1, 0): K.one},
        {_mono(1, 0, 0, 1): K.one},
        {_mono(0, 1, 1, 0): K.one},
        {_mono(0, 1, 0, 1): K.one},
    ]


def twisted_cubic_ideal(ring: Ring):
    K = ring.field
    neg = K.neg(K.one)
    return [
        {_mono(1, 0, 1, 0): K.one, _mono(0, 2, 0, 0): neg},
        {_mono(1, 0, 0, 1): K.one, _mono(0, 1, 1, 0): neg},
        {_mono(0, 1, 0, 1): K.one, _mono(0, 0, 2, 0): neg},
    ]


def complete_intersection_ideal(ring: Ring, degrees=(2, 2), seed: int = 11):
    rng = random.Random(seed)
    return [random_form(rng, d, ring.field) for d in degrees]


def rational_quartic_ideal(ring: Ring):
    """Image of (s^4 : s^3 t : s t^3 : t^4); diameter-1 Rao module."""
    K = ring.field
    neg = K.neg(K.one)
    return [
        {_mono(1, 0, 0, 1): K.one, _mono(0, 1, 1, 0): neg},
        {_mono(0, 3, 0, 0): K.one, _mono(2, 0, 1, 0): neg},
        {_mono(0, 0, 3, 0): K.one, _mono(0, 1, 0, 2): neg},
        {_mono(1, 0, 2, 0): K.one, _mono(0, 2, 0, 1): neg},
    ]


def apply_coordinate_change(polys, mat, field):
    from .algebra import poly_substitute
    return [poly_substitute(p, mat, field) for p in polys]


def random_gl4(rng, field):
    """Random invertible 4x4 matrix over the field."""
    from . import linalg
    import numpy as np
    p = field.char if field.char else 32003
    while True:
        mat = [[rng.randrange(0, p) for _ in range(4)] for _ in range(4)]
        A = np.array(mat, dtype=np.int64)
        if linalg.rank(A, field if field.char else GF(p)) == 4:
            return mat
