"""Minimal graded free resolutions, Betti tables, Hilbert data,
mapping cones and Horseshoe composition.

A resolution is stored as twist lists [F_0 .. F_l] plus maps d_k:
F_k -> F_{k-1}.  Construction is iterated syzygy computation (each
syzygy step is already a Groebner basis for the induced order), and
minimality is obtained afterwards by cancelling unit entries in pairs.
Betti positions follow the convention j = 1 for generators, j = 2 for
first syzygies, and so on.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .algebra import (
    GradedMatrix,
    ONE_MONO,
    Ring,
    dim_graded_piece,
    poly_add,
    poly_mul,
    poly_neg,
    poly_scale,
)
from . import groebner as gb_mod
from .groebner import GroebnerBasis, ModuleOrder, groebner_basis, schreyer_order, syzygy_module


class GradedPresentation:
    """Graded module given by generator degrees and homogeneous relations."""

    def __init__(self, ring: Ring, gen_degrees, relations: GradedMatrix | None = None):
        self.ring = ring
        self.gen_degrees = tuple(gen_degrees)
        if relations is None:
            relations = GradedMatrix.zero(ring, self.gen_degrees, ())
        if relations.row_degrees != self.gen_degrees:
            raise ValueError("relation matrix rows must match generator degrees")
        cols = [c for c in relations.columns() if c]
        self.relations = GradedMatrix.from_columns(ring, self.gen_degrees, cols) if cols \
            else GradedMatrix.zero(ring, self.gen_degrees, ())
        self._gb: GroebnerBasis | None = None
        self._mfr = None
        self._realizations: dict = {}

    @classmethod
    def from_ideal(cls, ring: Ring, generators):
        """Submodule of R spanned by polynomials, presented abstractly."""
        from .algebra import poly_degree
        gens = [g for g in generators if g]
        degs = tuple(poly_degree(g) for g in gens)
        cols = [{(m, 0): c for m, c in g.items()} for g in gens]
        syz = gb_mod.syzygies_of_columns(ring, (0,), cols) if cols else None
        pres = cls(ring, degs)
        if syz is not None and syz.ncols:
            # syzygies live over the generator twists already
            pres = cls(ring, degs, GradedMatrix(ring, degs, syz.col_degrees, syz.entries))
        pres.ideal_generators = gens
        return pres

    def relations_gb(self) -> GroebnerBasis:
        if self._gb is None:
            self._gb = groebner_basis(self.ring, self.gen_degrees, self.relations.columns())
        return self._gb

    def twist(self, t: int) -> "GradedPresentation":
        if t == 0:
            return self
        return GradedPresentation(self.ring, tuple(a - t for a in self.gen_degrees),
                                  self.relations.twist(t))

    def __repr__(self):
        return f"GradedPresentation(gens={self.gen_degrees}, rels={self.relations.ncols})"


@dataclass
class Resolution:
    ring: Ring
    twists: list          # twist lists of F_0 .. F_l
    maps: list            # [d_1 .. d_l]

    @property
    def length(self) -> int:
        return len(self.maps)

    def betti_degrees(self):
        return sorted({i for tw in self.twists for i in tw})

    def map_or_none(self, k: int):
        return self.maps[k - 1] if 1 <= k <= self.length else None


class BettiTable:
    """Counts beta_{j,i}: multiplicity of twist i at homological position j."""

    def __init__(self, entries: dict | None = None, minimal: bool = True):
        self.entries = {k: v for k, v in (entries or {}).items() if v}
        self.minimal = minimal

    @classmethod
    def from_resolution(cls, res: Resolution, require_minimal=True) -> "BettiTable":
        if require_minimal and any(m.has_constant_entry() for m in res.maps):
            raise ValueError("resolution is not minimal (constant entries present)")
        entries: dict = {}
        for pos, tw in enumerate(res.twists):
            for i in tw:
                entries[(pos + 1, i)] = entries.get((pos + 1, i), 0) + 1
        return cls(entries, minimal=True)

    def get(self, j: int, i: int) -> int:
        return self.entries.get((j, i), 0)

    def positions(self):
        return sorted({j for j, _ in self.entries})

    def degrees(self):
        return sorted({i for _, i in self.entries})

    def twists_at(self, j: int):
        out = []
        for (jj, i), c in sorted(self.entries.items()):
            if jj == j:
                out.extend([i] * c)
        return out

    def rank_sum(self) -> int:
        return sum((-1) ** (j - 1) * c for (j, _), c in self.entries.items())

    def shift(self, t: int) -> "BettiTable":
        """Betti table of the module twisted by t (twists i -> i - t)."""
        return BettiTable({(j, i - t): c for (j, i), c in self.entries.items()},
                          minimal=self.minimal)

    def add(self, other: "BettiTable") -> "BettiTable":
        entries = dict(self.entries)
        for k, v in other.entries.items():
            entries[k] = entries.get(k, 0) + v
        return BettiTable(entries, minimal=False)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def __repr__(self):
        return f"BettiTable({self.entries})"

    def render(self) -> str:
        if not self.entries:
            return "(zero table)"
        js = self.positions()
        degs = self.degrees()
        widths = max(4, max(len(str(self.get(j, i))) for j in js for i in degs))
        head = "  i\\j " + "".join(f"{j:>{widths + 1}}" for j in js)
        lines = [head]
        for i in degs:
            row = f"{i:>5} " + "".join(
                f"{self.get(j, i) or '.':>{widths + 1}}" for j in js
            )
            lines.append(row)
        if not self.minimal:
            lines.append("  (upper bound: pending minimization)")
        return "\n".join(lines)


def betti_table(res: Resolution) -> BettiTable:
    return BettiTable.from_resolution(res)


# ---------------------------------------------------------------------------
# construction

MAX_STEPS = 8


def minimal_free_resolution(pres: GradedPresentation) -> Resolution:
    """Minimal resolution of coker(relations) by iterated syzygies."""
    if pres._mfr is not None:
        return pres._mfr
    ring = pres.ring
    twists = [pres.gen_degrees]
    maps = []
    if pres.relations.ncols:
        gb = pres.relations_gb()
        d1 = GradedMatrix.from_columns(ring, pres.gen_degrees, gb.elements, gb.degrees)
        twists.append(tuple(gb.degrees))
        maps.append(d1)
        cur = gb
        for _ in range(MAX_STEPS):
            syz = syzygy_module(cur)
            if syz.ncols == 0:
                break
            maps.append(syz)
            twists.append(syz.col_degrees)
            order = schreyer_order(cur)
            elems = []
            leads = []
            field = ring.field
            for col in syz.columns():
                lead, c = order.lead(col)
                from .algebra import vec_scale
                elems.append(vec_scale(col, field.inv(c), field))
                leads.append(lead)
            cur = GroebnerBasis(ring, tuple(cur.degrees), order, elems,
                                list(syz.col_degrees), leads)
        else:
            raise ArithmeticError("resolution did not terminate")
    res = minimize(Resolution(ring, twists, maps))
    if res.length > 4:
        raise ArithmeticError(f"minimal resolution of length {res.length} > 4")
    pres._mfr = res
    return res


def minimize(res: Resolution) -> Resolution:
    """Cancel unit (constant) entries in pairs until none remain."""
    ring = res.ring
    field = ring.field
    twists = [list(t) for t in res.twists]
    mats = [{k: dict(v) for k, v in m.entries.items()} for m in res.maps]

    def find_unit():
        for k, mat in enumerate(mats):
            for (i, j), p in mat.items():
                if ONE_MONO in p and len(p) == 1:
                    return k, i, j, p[ONE_MONO]
        return None

    def drop(mat, rows_len, cols_len, drop_i, drop_j):
        out = {}
        for (i, j), p in mat.items():
            if i == drop_i or j == drop_j:
                continue
            out[(i - (i > drop_i), j - (j > drop_j))] = p
        return out

    while True:
        hit = find_unit()
        if hit is None:
            break
        k, i0, j0, u = hit
        uinv = field.inv(u)
        mat = mats[k]
        # clear row i0: col_j -= (e/u) col_j0, adjust rows of the next map
        for j in range(len(twists[k + 1])):
            if j == j0:
                continue
            e = mat.get((i0, j))
            if not e:
                continue
            q = poly_scale(e, uinv, field)
            for i in range(len(twists[k])):
                pj0 = mat.get((i, j0))
                if pj0:
                    cur = mat.get((i, j), {})
                    new = poly_add(cur, poly_neg(poly_mul(q, pj0, field), field), field)
                    if new:
                        mat[(i, j)] = new
                    else:
                        mat.pop((i, j), None)
            if k + 1 < len(mats):
                nxt = mats[k + 1]
                for jj in range(len(twists[k + 2])):
                    pj = nxt.get((j, jj))
                    if pj:
                        cur = nxt.get((j0, jj), {})
                        new = poly_add(cur, poly_mul(q, pj, field), field)
                        if new:
                            nxt[(j0, jj)] = new
                        else:
                            nxt.pop((j0, jj), None)
        # clear column j0: row_i -= (e/u) row_i0, adjust columns of the previous map
        for i in range(len(twists[k])):
            if i == i0:
                continue
            e = mat.get((i, j0))
            if not e:
                continue
            q = poly_scale(e, uinv, field)
            for j in range(len(twists[k + 1])):
                pi0 = mat.get((i0, j))
                if pi0:
                    cur = mat.get((i, j), {})
                    new = poly_add(cur, poly_neg(poly_mul(q, pi0, field), field), field)
                    if new:
                        mat[(i, j)] = new
                    else:
                        mat.pop((i, j), None)
            if k - 1 >= 0:
                prv = mats[k - 1]
                for ii in range(len(twists[k - 1])):
                    pcol = prv.get((ii, i))
                    if pcol:
                        cur = prv.get((ii, i0), {})
                        new = prv.get((ii, i0), {})
                        new = poly_add(cur, poly_mul(q, pcol, field), field)
                        if new:
                            prv[(ii, i0)] = new
                        else:
                            prv.pop((ii, i0), None)
        # drop the cancelled pair
        mats[k] = drop(mat, len(twists[k]), len(twists[k + 1]), i0, j0)
        if k + 1 < len(mats):
            mats[k + 1] = {(i - (i > j0), j): p for (i, j), p in mats[k + 1].items() if i != j0}
        if k - 1 >= 0:
            mats[k - 1] = {(i, j - (j > i0)): p for (i, j), p in mats[k - 1].items() if j != i0}
        del twists[k][i0]
        del twists[k + 1][j0]

    # rebuild, trimming empty tail modules
    while twists and len(twists) > 1 and not twists[-1]:
        twists.pop()
        mats.pop()
    out_maps = []
    for k, mat in enumerate(mats):
        out_maps.append(GradedMatrix(ring, tuple(twists[k]), tuple(twists[k + 1]), mat))
    return Resolution(ring, [tuple(t) for t in twists], out_maps)


# ---------------------------------------------------------------------------
# verification

@dataclass
class ExactnessReport:
    ok: bool
    window: tuple[int, int]
    failures: list = dc_field(default_factory=list)

    def __bool__(self):
        return self.ok


def verify_exactness(res: Resolution, window: tuple[int, int] | None = None) -> ExactnessReport:
    """Degreewise rank check of exactness at positions 1..l.

    Exactness at F_k in degree v amounts to rank d_k(v) + rank d_{k+1}(v)
    = dim (F_k)_v, with rank d_{l+1} = 0.
    """
    from . import linalg
    for k in range(len(res.maps) - 1):
        if not res.maps[k].compose(res.maps[k + 1]).is_zero():
            return ExactnessReport(False, (0, 0), [("compose", k + 1, k + 2)])
    if res.length == 0:
        return ExactnessReport(True, (0, 0))
    degs = res.betti_degrees()
    if window is None:
        window = (min(degs) - 1, max(degs) + 4)
    lo, hi = window
    field = res.ring.field
    ranks: dict[tuple[int, int], int] = {}
    failures = []
    for v in range(lo, hi + 1):
        for k in range(1, res.length + 1):
            ranks[(k, v)] = linalg.rank(res.maps[k - 1].degree_slice(v).matrix, field)
        for k in range(1, res.length + 1):
            dim_fk = sum(dim_graded_piece(v - a) for a in res.twists[k])
            rk_next = ranks.get((k + 1, v), 0)
            if ranks[(k, v)] + rk_next != dim_fk:
                failures.append((k, v, dim_fk - ranks[(k, v)], rk_next))
    return ExactnessReport(not failures, window, failures)


# ---------------------------------------------------------------------------
# mapping cone and Horseshoe

class ChainMap:
    """Degree-0 chain map between resolutions; squares must commute."""

    def __init__(self, source: Resolution, target: Resolution, maps):
        self.source = source
        self.target = target
        self.maps = list(maps)
        for k, phi in enumerate(self.maps):
            if phi.row_degrees != tuple(target.twists[k]) or \
               phi.col_degrees != tuple(source.twists[k]):
                raise ValueError(f"chain map component {k} has wrong twists")
        n = min(len(self.maps) - 1, source.length, target.length)
        for k in range(1, n + 1):
            lhs = target.maps[k - 1].compose(self.maps[k])
            rhs = self.maps[k - 1].compose(source.maps[k - 1])
            diff = _matrix_sub(lhs, rhs)
            if not diff.is_zero():
                raise ValueError(f"chain map does not commute at position {k}")


def _matrix_sub(a: GradedMatrix, b: GradedMatrix) -> GradedMatrix:
    field = a.ring.field
    entries = {k: dict(v) for k, v in a.entries.items()}
    for k, p in b.entries.items():
        cur = entries.get(k, {})
        new = poly_add(cur, poly_neg(p, field), field)
        if new:
            entries[k] = new
        else:
            entries.pop(k, None)
    return GradedMatrix(a.ring, a.row_degrees, a.col_degrees, entries, check=False)


def mapping_cone(cm: ChainMap) -> Resolution:
    """Cone of a chain map: C_k = T_k (+) S_{k-1}.

    The result is a complex with the cone's twists; it is a resolution
    of the cokernel exactly when the map lifts an injection with free
    resolvable cokernel (not checked here).
    """
    ring = cm.target.ring
    field = ring.field
    S, T = cm.source, cm.target
    length = max(T.length, S.length + 1)
    twists = []
    for k in range(length + 1):
        tw_t = list(T.twists[k]) if k <= T.length else []
        tw_s = list(S.twists[k - 1]) if 1 <= k and (k - 1) <= S.length else []
        twists.append(tuple(tw_t + tw_s))
    maps = []
    for k in range(1, length + 1):
        rows = twists[k - 1]
        cols = twists[k]
        n_t_rows = len(T.twists[k - 1]) if k - 1 <= T.length else 0
        n_t_cols = len(T.twists[k]) if k <= T.length else 0
        entries = {}
        dt = T.map_or_none(k)
        if dt is not None:
            for (i, j), p in dt.entries.items():
                entries[(i, j)] = dict(p)
        if k - 1 < len(cm.maps):
            phi = cm.maps[k - 1]
            for (i, j), p in phi.entries.items():
                entries[(i, n_t_cols + j)] = dict(p)
        ds = S.map_or_none(k - 1)
        if ds is not None:
            for (i, j), p in ds.entries.items():
                entries[(n_t_rows + i, n_t_cols + j)] = poly_neg(p, field)
        maps.append(GradedMatrix(ring, rows, cols, entries))
    return Resolution(ring, twists, maps)


def horseshoe_betti(betti_sub: BettiTable, betti_quot: BettiTable) -> BettiTable:
    """Position-wise Betti sum for a middle extension; an upper bound
    until unit cancellations are accounted for."""
    return betti_sub.add(betti_quot)


def direct_sum(resolutions: list) -> Resolution:
    """Block-diagonal direct sum of resolutions."""
    ring = resolutions[0].ring
    length = max(r.length for r in resolutions)
    twists = []
    for k in range(length + 1):
        tw = []
        for r in resolutions:
            if k <= r.length:
                tw.extend(r.twists[k])
        twists.append(tuple(tw))
    maps = []
    for k in range(1, length + 1):
        entries = {}
        roff = coff = 0
        for r in resolutions:
            d = r.map_or_none(k)
            if d is not None:
                for (i, j), p in d.entries.items():
                    entries[(roff + i, coff + j)] = dict(p)
            if k - 1 <= r.length:
                roff += len(r.twists[k - 1])
            if k <= r.length:
                coff += len(r.twists[k])
        maps.append(GradedMatrix(ring, twists[k - 1], twists[k], entries))
    return Resolution(ring, twists, maps)


# ---------------------------------------------------------------------------
# Hilbert data

@dataclass(frozen=True)
class HilbertPolynomial:
    """Polynomial with rational coefficients, ascending order."""

    coeffs: tuple

    @classmethod
    def from_list(cls, coeffs):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return cls(tuple(cs))

    def __call__(self, t: int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def value(self, t: int) -> int:
        v = self(t)
        if v.denominator != 1:
            raise ArithmeticError(f"Hilbert polynomial not integral at {t}: {v}")
        return int(v)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs[k] if k < len(self.coeffs) else Fraction(0)

    def add(self, other, scale=1):
        n = max(len(self.coeffs), len(other.coeffs))
        cs = [self.coefficient(k) + Fraction(scale) * other.coefficient(k) for k in range(n)]
        return HilbertPolynomial.from_list(cs)

    def __eq__(self, other):
        return isinstance(other, HilbertPolynomial) and self.coeffs == other.coeffs


def _binom_poly_shift(i: int) -> HilbertPolynomial:
    """(t-i+1)(t-i+2)(t-i+3)/6 as a polynomial in t."""
    coeffs = [Fraction(1)]
    for c in (1 - i, 2 - i, 3 - i):
        new = [Fraction(0)] * (len(coeffs) + 1)
        for k, a in enumerate(coeffs):
            new[k] += a * c
            new[k + 1] += a
        coeffs = new
    return HilbertPolynomial.from_list([c / 6 for c in coeffs])


RING_HILBERT_POLY = _binom_poly_shift(0)


def hilbert_from_betti(b: BettiTable):
    """Hilbert function and polynomial from a Betti table.

    function(v) uses combinatorial dimensions (zero below zero);
    the polynomial is the binomial extension of the same sum.
    """
    items = sorted(b.entries.items())

    def function(v: int) -> int:
        return sum((-1) ** (j - 1) * c * dim_graded_piece(v - i) for (j, i), c in items)

    poly = HilbertPolynomial.from_list([])
    for (j, i), c in items:
        poly = poly.add(_binom_poly_shift(i), scale=(-1) ** (j - 1) * c)
    return function, poly


def hilbert_function(pres: GradedPresentation, v: int) -> int:
    """dim_k of the degree-v piece, by counting standard monomials."""
    return gb_mod.hilbert_function_of_quotient(pres.relations_gb(), v)
