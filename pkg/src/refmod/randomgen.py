"""Seeded random instances for the identity/property suites.

Sheaf-side instances are random presentations that pass validation and
have deficiency module of diameter at most one:

  * split line bundle pairs (deficiency zero),
  * first syzygy modules of three generic forms (ACM rank 2, presented
    by the Koszul wedge relations),
  * quotients of the syzygy module of four independent linear forms
    (optionally padded with a free summand) by generic elements; these
    have a one-dimensional deficiency piece in a controlled degree and
    hit both obstructed and unobstructed Betti shapes.

Everything is rejection-sampled through full validation, so the suites
run only on inputs the analyzers accept.
"""
from __future__ import annotations

import random

from .algebra import (
    GradedMatrix,
    Ring,
    monomials_of_degree,
    poly_add,
    poly_mul,
    poly_neg,
    poly_scale,
    random_form,
)
from .builders import (
    apply_coordinate_change,
    complete_intersection_ideal,
    random_gl4,
    rational_quartic_ideal,
    skew_lines_ideal,
    twisted_cubic_ideal,
)
from .curves import CurveInput, curve_invariants
from .resolution import GradedPresentation
from .sheaf import SheafInput, analyze_sheaf


def sparse_form(rng, d: int, field, terms: int = 4):
    """Random homogeneous form with a few terms (keeps reductions cheap
    while staying generic for the properties under test)."""
    monos = monomials_of_degree(d)
    k = min(len(monos), max(2, terms))
    chosen = rng.sample(list(monos), k)
    p = field.char if field.char else 32003
    return {m: field.normalize(rng.randrange(1, p)) for m in chosen}


def _koszul_syzygy_presentation(ring: Ring, forms, twist: int = 0) -> GradedPresentation:
    """Presentation of the first syzygy module of a regular sequence:
    generators f_i e_j - f_j e_i, relations the wedge-cubed columns.

    Exactness of the Koszul complex for a regular sequence makes this a
    genuine presentation; validation downstream rejects degenerate
    draws where the sequence fails to be regular.
    """
    from .algebra import poly_degree
    field = ring.field
    n = len(forms)
    degs = [poly_degree(f) for f in forms]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    pidx = {p: k for k, p in enumerate(pairs)}
    gens = tuple(degs[i] + degs[j] - twist for (i, j) in pairs)
    cols = []
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                col = {}
                for m, co in forms[a].items():
                    col[(m, pidx[(b, c)])] = co
                for m, co in poly_neg(forms[b], field).items():
                    col[(m, pidx[(a, c)])] = co
                for m, co in forms[c].items():
                    col[(m, pidx[(a, b)])] = co
                cols.append(col)
    rel = GradedMatrix.from_columns(ring, gens, cols) if cols else None
    return GradedPresentation(ring, gens, rel)


def _quotient_by_elements(ring: Ring, pres: GradedPresentation, rng,
                          elt_degrees, terms: int = 3) -> GradedPresentation:
    """Quotient by the submodule generated by random elements of the
    given degrees (each a random combination of the generators)."""
    field = ring.field
    cols = list(pres.relations.columns())
    for s in elt_degrees:
        col = {}
        for k, g in enumerate(pres.gen_degrees):
            d = s - g
            if d < 0:
                continue
            p = sparse_form(rng, d, field, terms=terms)
            for m, c in p.items():
                col[(m, k)] = c
        cols.append(col)
    rel = GradedMatrix.from_columns(ring, pres.gen_degrees, cols)
    return GradedPresentation(ring, pres.gen_degrees, rel)


def _generic_linear_forms(rng, ring):
    field = ring.field
    from .algebra import VARS, poly_substitute
    mat = random_gl4(rng, field)
    return [{VARS[j]: field.normalize(mat[i][j]) for j in range(4)
             if field.normalize(mat[i][j])} for i in range(4)]


def _candidate(ring: Ring, rng, kind: int):
    field = ring.field
    if kind == 0:
        a = rng.randrange(-2, 3)
        b = rng.randrange(-2, 3)
        return f"split({-a},{-b})", GradedPresentation(ring, (a, b))
    if kind == 1:
        degs = sorted(rng.choice([1, 1, 2]) for _ in range(3))
        t = rng.randrange(0, 3)
        forms = [sparse_form(rng, d, field, terms=6) for d in degs]
        pres = _koszul_syzygy_presentation(ring, forms, twist=t)
        return f"acm-syz{tuple(degs)}(t={t})", pres
    lin = _generic_linear_forms(rng, ring)
    t = rng.randrange(0, 3)
    base = _koszul_syzygy_presentation(ring, lin, twist=t)   # gens in degree 2 - t
    g0 = 2 - t
    if kind == 2:
        s = g0 + rng.randrange(0, 3)
        pres = _quotient_by_elements(ring, base, rng, [s])
        return f"syzquot(t={t},s={s})", pres
    # padded with a free summand, quotient by two elements
    a = g0 + rng.choice([1, 2])
    gens = base.gen_degrees + (a,)
    rel_cols = [dict(col) for col in base.relations.columns()]
    rel = GradedMatrix.from_columns(ring, gens, rel_cols) if rel_cols else None
    padded = GradedPresentation(ring, gens, rel)
    s1 = g0 + rng.randrange(1, 3)
    s2 = a + rng.randrange(1, 3)
    pres = _quotient_by_elements(ring, padded, rng, [s1, s2])
    return f"padquot(t={t},a={a},s=({s1},{s2}))", pres


def random_sheaf_instances(ring: Ring, n: int, seed: int = 0,
                           max_attempts: int = 2000):
    """Up to n validated diameter <= 1 sheaf invariants, deterministically."""
    rng = random.Random(seed)
    out = []
    attempts = 0
    kind = 0
    while len(out) < n and attempts < max_attempts:
        attempts += 1
        name, pres = _candidate(ring, rng, kind % 4)
        kind += 1
        try:
            inv = analyze_sheaf(SheafInput(pres))
        except Exception:
            continue
        if inv.diameter > 1:
            continue
        out.append((f"{name}#{attempts}", inv))
    return out


def random_curve_instances(ring: Ring, n: int, seed: int = 0):
    """Validated curve inputs: coordinate-changed templates and random
    complete intersections."""
    rng = random.Random(seed)
    templates = [
        ("skew-lines", skew_lines_ideal),
        ("twisted-cubic", twisted_cubic_ideal),
        ("rational-quartic", rational_quartic_ideal),
    ]
    out = []
    i = 0
    while len(out) < n:
        i += 1
        which = i % (len(templates) + 1)
        if which < len(templates):
            name, builder = templates[which]
            mat = random_gl4(rng, ring.field)
            gens = apply_coordinate_change(builder(ring), mat, ring.field)
            label = f"{name}-gl4#{i}"
        else:
            d1 = rng.choice([2, 2, 3])
            d2 = rng.choice([2, 3])
            gens = complete_intersection_ideal(ring, (d1, d2), seed=rng.randrange(10 ** 6))
            label = f"ci({d1},{d2})#{i}"
        try:
            ci = curve_invariants(CurveInput.from_ideal(ring, gens, label))
        except Exception:
            continue
        out.append((label, ci))
    return out
