"""Groebner bases and syzygies for homogeneous submodules of twisted
free modules over k[x0..x3].

The pipeline is classical Buchberger with the normal (degree-by-degree)
pair strategy, followed by interreduction.  Syzygies come from the
standard construction: for a Groebner basis G every S-pair reduces to
zero, and recording the division quotients turns each pair into a
syzygy; these columns generate the full syzygy module of G and are a
Groebner basis for the order induced by the lead terms of G, which is
how iterated syzygy computation (free resolutions) stays cheap.
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    GradedMatrix,
    Mono,
    Ring,
    Vec,
    grevlex_key,
    mono_deg,
    mono_div,
    mono_lcm,
    mono_mul,
    monomials_of_degree,
    ONE_MONO,
    vec_add,
    vec_degree,
    vec_mono_mul,
    vec_scale,
)


class ModuleOrder:
    """Total order on module monomials (mono, component).

    kind 'POT': position over term, earlier components dominate.
    kind 'TOP': grevlex on the monomial, component breaking ties.
    kind 'schreyer': induced by the lead terms of a parent basis, as
    used for iterated syzygies.
    """

    def __init__(self, kind="POT", parent=None, parent_leads=None):
        if kind not in ("POT", "TOP", "schreyer"):
            raise ValueError(f"unknown order kind {kind!r}")
        if kind == "schreyer" and (parent is None or parent_leads is None):
            raise ValueError("schreyer order needs a parent order and leads")
        self.kind = kind
        self.parent = parent
        self.parent_leads = parent_leads

    def key(self, m: Mono, comp: int):
        if self.kind == "POT":
            return (-comp, grevlex_key(m))
        if self.kind == "TOP":
            return (grevlex_key(m), -comp)
        lm, lc = self.parent_leads[comp]
        return (self.parent.key(mono_mul(m, lm), lc), -comp)

    def lead(self, v: Vec):
        """((mono, comp), coeff) of the largest term of a nonzero element."""
        k = max(v, key=lambda t: self.key(t[0], t[1]))
        return k, v[k]


@dataclass
class GroebnerBasis:
    ring: Ring
    twists: tuple[int, ...]          # generator degrees of the ambient free module
    order: ModuleOrder
    elements: list                    # list[Vec], monic, interreduced
    degrees: list                     # twisted degree of each element
    leads: list                       # [(mono, comp)]

    def __len__(self):
        return len(self.elements)

    def lead_monomials_by_comp(self):
        out: dict[int, list[Mono]] = {}
        for m, c in self.leads:
            out.setdefault(c, []).append(m)
        return out


def _reduce(v: Vec, reducers, order: ModuleOrder, field, record=None) -> Vec:
    """Full normal form of v modulo the (lead, element) list `reducers`.

    When `record` is a list it receives (index, mono, coeff) for every
    reduction step, i.e. v = remainder + sum c * mono * g_idx.
    """
    rem: Vec = {}
    work = dict(v)
    while work:
        key = max(work, key=lambda t: order.key(t[0], t[1]))
        coeff = work[key]
        m, comp = key
        hit = None
        for idx, (lead, g) in enumerate(reducers):
            lm, lc = lead
            if lc != comp:
                continue
            q = mono_div(m, lm)
            if q is not None:
                hit = (idx, q, g)
                break
        if hit is None:
            rem[key] = coeff
            del work[key]
            continue
        idx, q, g = hit
        # g is monic, so subtract coeff * q * g
        work = vec_add(work, vec_mono_mul(g, q, field.neg(coeff), field), field)
        if record is not None:
            record.append((idx, q, coeff))
    return rem


def _interreduce(elements, order, field, twists):
    """Monic reduced basis: no lead divides another, tails fully reduced."""
    elems = [e for e in elements if e]
    # make monic, drop lead-redundant elements (keep earlier of equal leads)
    monic = []
    for e in elems:
        (lead, c) = order.lead(e)
        monic.append((lead, vec_scale(e, field.inv(c), field)))
    monic.sort(key=lambda t: order.key(*t[0]), reverse=True)
    monic.sort(key=lambda t: mono_deg(t[0][0]) + twists[t[0][1]])
    kept = []
    for lead, e in monic:
        redundant = False
        for lead2, _ in kept:
            if lead2[1] == lead[1] and mono_div(lead[0], lead2[0]) is not None:
                redundant = True
                break
        if not redundant:
            kept.append((lead, e))
    # reduce each tail against the others
    out = []
    for i, (lead, e) in enumerate(kept):
        others = [kept[j] for j in range(len(kept)) if j != i]
        tail = dict(e)
        del tail[lead]
        red = _reduce(tail, others, order, field)
        red[lead] = field.one
        out.append((lead, red))
    return out


def groebner_basis(ring: Ring, twists, columns, order: ModuleOrder | None = None) -> GroebnerBasis:
    """Buchberger's algorithm on homogeneous module elements.

    Deterministic: pairs are processed by ascending degree, ties by
    input order; the result is interreduced and monic.
    """
    field = ring.field
    order = order or ModuleOrder("POT")
    twists = tuple(twists)
    basis: list[Vec] = []
    leads: list = []

    def pair_degree(i, j):
        (mi, ci), (mj, cj) = leads[i], leads[j]
        return mono_deg(mono_lcm(mi, mj)) + twists[ci]

    import heapq
    pairs: list = []
    # insert inputs by ascending degree, reducing each against the
    # basis so far: redundant generators cost almost nothing
    incoming = []
    for pos, col in enumerate(columns):
        if not col:
            continue
        incoming.append((vec_degree(col, twists), pos, col))
    incoming.sort(key=lambda t: (t[0], t[1]))
    for _, _, col in incoming:
        rem = _reduce(col, list(zip(leads, basis)), order, field)
        if not rem:
            continue
        lead, c = order.lead(rem)
        basis.append(vec_scale(rem, field.inv(c), field))
        leads.append(lead)
        k = len(basis) - 1
        for t in range(k):
            if leads[t][1] == lead[1]:
                heapq.heappush(pairs, (pair_degree(t, k), t, k))
    while pairs:
        _, i, j = heapq.heappop(pairs)
        (mi, ci), (mj, cj) = leads[i], leads[j]
        lcm = mono_lcm(mi, mj)
        ui, uj = mono_div(lcm, mi), mono_div(lcm, mj)
        s = vec_add(
            vec_mono_mul(basis[i], ui, field.one, field),
            vec_mono_mul(basis[j], uj, field.neg(field.one), field),
            field,
        )
        reducers = list(zip(leads, basis))
        rem = _reduce(s, reducers, order, field)
        if rem:
            lead, c = order.lead(rem)
            rem = vec_scale(rem, field.inv(c), field)
            basis.append(rem)
            leads.append(lead)
            k = len(basis) - 1
            for t in range(k):
                if leads[t][1] == lead[1]:
                    heapq.heappush(pairs, (pair_degree(t, k), t, k))
    reduced = _interreduce(basis, order, field, twists)
    return GroebnerBasis(
        ring,
        twists,
        order,
        [e for _, e in reduced],
        [vec_degree(e, twists) for _, e in reduced],
        [lead for lead, _ in reduced],
    )


def normal_form(gb: GroebnerBasis, v: Vec, with_quotients=False):
    """Remainder of v modulo gb; optionally also the division quotients."""
    field = gb.ring.field
    if not v:
        return ({}, {}) if with_quotients else {}
    vec_degree(v, gb.twists)
    record = [] if with_quotients else None
    rem = _reduce(v, list(zip(gb.leads, gb.elements)), gb.order, field, record)
    if not with_quotients:
        return rem
    quots: dict[int, dict] = {}
    for idx, q, c in record:
        quots.setdefault(idx, {})
        cur = quots[idx].get(q, field.zero)
        val = field.add(cur, c)
        if val == field.zero:
            quots[idx].pop(q, None)
        else:
            quots[idx][q] = val
    return rem, quots


def schreyer_order(gb: GroebnerBasis) -> ModuleOrder:
    return ModuleOrder("schreyer", parent=gb.order, parent_leads=tuple(gb.leads))


def syzygy_module(gb: GroebnerBasis) -> GradedMatrix:
    """Generators of the syzygy module of the basis elements.

    Columns live in the free module with one generator per basis element
    (twists = element degrees); they form a Groebner basis for the
    induced (Schreyer) order.
    """
    field = gb.ring.field
    n = len(gb.elements)
    syz_cols = []
    for j in range(n):
        for i in range(j):
            (mi, ci), (mj, cj) = gb.leads[i], gb.leads[j]
            if ci != cj:
                continue
            lcm = mono_lcm(mi, mj)
            ui, uj = mono_div(lcm, mi), mono_div(lcm, mj)
            s = vec_add(
                vec_mono_mul(gb.elements[i], ui, field.one, field),
                vec_mono_mul(gb.elements[j], uj, field.neg(field.one), field),
                field,
            )
            rem, quots = normal_form(gb, s, with_quotients=True)
            if rem:
                raise ArithmeticError("S-pair of a Groebner basis did not reduce to 0")
            col: Vec = {(ui, i): field.one, (uj, j): field.neg(field.one)}
            for idx, q in quots.items():
                for m, c in q.items():
                    col = vec_add(col, {(m, idx): field.neg(c)}, field)
            if col:
                syz_cols.append(col)
    # drop lead-redundant columns: a minimal-lead subset of a Groebner
    # basis (for the induced order) is still a Groebner basis
    sord = schreyer_order(gb)
    syz_cols = _minimal_gb_subset(syz_cols, sord, tuple(gb.degrees))
    return GradedMatrix.from_columns(gb.ring, tuple(gb.degrees), syz_cols)


def _minimal_gb_subset(cols, order: ModuleOrder, twists):
    tagged = []
    for c in cols:
        lead = order.lead(c)[0]
        tagged.append((mono_deg(lead[0]) + twists[lead[1]], lead, c))
    tagged.sort(key=lambda t: t[0])
    kept = []
    kept_leads: list = []
    for _, lead, c in tagged:
        if any(l2[1] == lead[1] and mono_div(lead[0], l2[0]) is not None
               for l2 in kept_leads):
            continue
        kept.append(c)
        kept_leads.append(lead)
    return kept


def spair_check(gb: GroebnerBasis) -> bool:
    """Buchberger criterion: every S-pair reduces to zero."""
    field = gb.ring.field
    for j in range(len(gb.elements)):
        for i in range(j):
            (mi, ci), (mj, cj) = gb.leads[i], gb.leads[j]
            if ci != cj:
                continue
            lcm = mono_lcm(mi, mj)
            s = vec_add(
                vec_mono_mul(gb.elements[i], mono_div(lcm, mi), field.one, field),
                vec_mono_mul(gb.elements[j], mono_div(lcm, mj), field.neg(field.one), field),
                field,
            )
            if normal_form(gb, s):
                return False
    return True


class _TrackedBasis:
    """Groebner basis that remembers how each element is expressed in
    the input columns (for syzygies of arbitrary generating sets and
    for lifting through a submodule)."""

    def __init__(self, ring: Ring, twists, columns):
        import heapq
        field = ring.field
        self.ring = ring
        self.field = field
        self.twists = tuple(twists)
        self.order = ModuleOrder("POT")
        self.cols = list(columns)
        self.col_degs = []
        for c in self.cols:
            d = vec_degree(c, self.twists)
            if d is None:
                raise ValueError("zero column in a tracked basis; drop it first")
            self.col_degs.append(d)
        order, twists = self.order, self.twists
        basis, leads, exprs = [], [], []

        def pair_degree(i, j):
            return mono_deg(mono_lcm(leads[i][0], leads[j][0])) + twists[leads[i][1]]

        pairs: list = []
        incoming = sorted(range(len(self.cols)),
                          key=lambda j: (self.col_degs[j], j))
        for j in incoming:
            rem, rexpr = self._reduce_tracked(
                self.cols[j], {(ONE_MONO, j): field.one}, basis, leads, exprs)
            if not rem:
                continue
            lead, c = order.lead(rem)
            inv = field.inv(c)
            basis.append(vec_scale(rem, inv, field))
            exprs.append(vec_scale(rexpr, inv, field))
            leads.append(lead)
            k = len(basis) - 1
            for t in range(k):
                if leads[t][1] == lead[1]:
                    heapq.heappush(pairs, (pair_degree(t, k), t, k))
        while pairs:
            _, i, j = heapq.heappop(pairs)
            lcm = mono_lcm(leads[i][0], leads[j][0])
            ui, uj = mono_div(lcm, leads[i][0]), mono_div(lcm, leads[j][0])
            s = vec_add(
                vec_mono_mul(basis[i], ui, field.one, field),
                vec_mono_mul(basis[j], uj, field.neg(field.one), field),
                field,
            )
            se = vec_add(
                vec_mono_mul(exprs[i], ui, field.one, field),
                vec_mono_mul(exprs[j], uj, field.neg(field.one), field),
                field,
            )
            rem, rexpr = self._reduce_tracked(s, se, basis, leads, exprs)
            if rem:
                lead, c = order.lead(rem)
                inv = field.inv(c)
                basis.append(vec_scale(rem, inv, field))
                exprs.append(vec_scale(rexpr, inv, field))
                leads.append(lead)
                k = len(basis) - 1
                for t in range(k):
                    if leads[t][1] == lead[1]:
                        heapq.heappush(pairs, (pair_degree(t, k), t, k))
        self.basis, self.leads, self.exprs = basis, leads, exprs

    def _reduce_tracked(self, v, expr, basis, leads, exprs):
        field, order = self.field, self.order
        work, wexpr = dict(v), dict(expr)
        rem: Vec = {}
        while work:
            key = max(work, key=lambda t: order.key(t[0], t[1]))
            coeff = work[key]
            m, comp = key
            hit = None
            for idx, lead in enumerate(leads):
                if lead[1] != comp:
                    continue
                q = mono_div(m, lead[0])
                if q is not None:
                    hit = (idx, q)
                    break
            if hit is None:
                rem[key] = coeff
                del work[key]
                continue
            idx, q = hit
            work = vec_add(work, vec_mono_mul(basis[idx], q, field.neg(coeff), field), field)
            wexpr = vec_add(wexpr, vec_mono_mul(exprs[idx], q, field.neg(coeff), field), field)
        return rem, wexpr

    def express(self, col: Vec) -> Vec | None:
        """Write col = sum inputs * expression; None if col is not in
        the submodule.  The expression lives over the input columns."""
        field, order = self.field, self.order
        record: list = []
        rem = _reduce(col, list(zip(self.leads, self.basis)), order, field, record)
        if rem:
            return None
        expr: Vec = {}
        for idx, q, c in record:
            expr = vec_add(expr, vec_mono_mul(self.exprs[idx], q, c, field), field)
        return expr

    def as_groebner_basis(self) -> GroebnerBasis:
        return GroebnerBasis(self.ring, self.twists, self.order, self.basis,
                             [vec_degree(e, self.twists) for e in self.basis],
                             self.leads)


def syzygies_of_columns(ring: Ring, twists, columns) -> GradedMatrix:
    """Syzygies of an arbitrary generating set (not necessarily a GB).

    With G = cols * T (Buchberger trail) and cols = G * U (division),
    the syzygies of cols are generated by T * Syz(G) together with the
    columns of I - T * U.
    """
    field = ring.field
    tracked = _TrackedBasis(ring, twists, columns)
    cols, col_degs, exprs = tracked.cols, tracked.col_degs, tracked.exprs
    syz_gb = syzygy_module(tracked.as_groebner_basis())

    out_cols = []
    # T * Syz(G): substitute each basis generator by its input expression
    for col in syz_gb.columns():
        mapped: Vec = {}
        for (m, idx), c in col.items():
            mapped = vec_add(mapped, vec_mono_mul(exprs[idx], m, c, field), field)
        if mapped:
            out_cols.append(mapped)
    # I - T*U: division of each input column by the final basis
    for j, col in enumerate(cols):
        expr = tracked.express(col)
        if expr is None:
            raise ArithmeticError("input column failed to reduce by its own basis")
        expr = vec_add({(ONE_MONO, j): field.one},
                       vec_scale(expr, field.neg(field.one), field), field)
        if expr:
            out_cols.append(expr)
    degs = [vec_degree(c, tuple(col_degs)) for c in out_cols]
    return GradedMatrix.from_columns(ring, tuple(col_degs), out_cols, degs)


def lift_columns(ring: Ring, twists, generators, targets) -> list:
    """Express each target column through the given generators; raises
    if a target is outside the generated submodule."""
    tracked = _TrackedBasis(ring, twists, generators)
    out = []
    for col in targets:
        if not col:
            out.append({})
            continue
        expr = tracked.express(col)
        if expr is None:
            raise ArithmeticError("lift_columns: target not in the submodule")
        out.append(expr)
    return out


# ---------------------------------------------------------------------------
# Hilbert functions via standard monomials

def std_monomials(gb: GroebnerBasis, v: int):
    """Monomial basis of the degree-v piece of coker(ambient / <gb>).

    Pairs (mono, comp) of twisted degree v whose monomial is not
    divisible by any lead term in the same component.
    """
    by_comp = gb.lead_monomials_by_comp()
    out = []
    for comp, a in enumerate(gb.twists):
        lms = by_comp.get(comp, ())
        for m in monomials_of_degree(v - a):
            if not any(mono_div(m, lm) is not None for lm in lms):
                out.append((m, comp))
    return out


def hilbert_function_of_quotient(gb: GroebnerBasis, v: int) -> int:
    return len(std_monomials(gb, v))
