"""Degreewise homology of graded complexes, local cohomology through
graded duality, and graded Hom/Ext groups.

Local cohomology is never computed by Cech complexes: for a module N
with free resolution F_* over R = k[x0..x3], graded duality gives

    H^i_m(N)_v  =  Ext_R^{4-i}(N, R(-4))_{-v} ^ dual,

so every H^i_m piece is the homology of the dualized resolution in one
degree, and the multiplication maps x_l on H^i_m are the transposes of
the multiplication maps on the Ext module.  Deficiency modules are
materialized as WindowedModule values: per-degree dimensions plus the
four multiplication matrices, which is all any Hom/Ext group built on
top of them ever reads.

Degree bookkeeping that the code relies on:
  * Ext^q(N, R(-4)) vanishes below 4 - max(twists of F_q), because it
    is a subquotient of Hom(F_q, R(-4)); hence H^{4-q}_m(N) provably
    vanishes above max(twists of F_q) - 4.
  * finite-length extractions must vanish at the window edges; the
    window auto-widens (capped) until they do.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import (
    GradedMatrix,
    Mono,
    ONE_MONO,
    Ring,
    VARS,
    mono_mul,
    monomials_of_degree,
)
from .groebner import std_monomials
from .resolution import (
    GradedPresentation,
    Resolution,
    hilbert_function,
    minimal_free_resolution,
)

DUALIZING_SHIFT = -4
WINDOW_CAP = 64


class WindowCoverageError(Exception):
    """A Hom/Ext computation needed module pieces outside the window."""

    def __init__(self, message, needed=None):
        super().__init__(message)
        self.needed = needed


# ---------------------------------------------------------------------------
# graded complexes

class GradedComplex:
    """Cochain complex of twisted free modules: maps[k]: T_k -> T_{k+1}."""

    def __init__(self, ring: Ring, terms, maps, check=True):
        self.ring = ring
        self.terms = [tuple(t) for t in terms]
        self.maps = list(maps)
        if check:
            for k, m in enumerate(self.maps):
                if m.col_degrees != self.terms[k] or m.row_degrees != self.terms[k + 1]:
                    raise ValueError(f"complex map {k} has inconsistent twists")
            for k in range(len(self.maps) - 1):
                if not self.maps[k + 1].compose(self.maps[k]).is_zero():
                    raise ValueError(f"composite at position {k + 1} is nonzero")

    @property
    def length(self):
        return len(self.terms) - 1

    def map_out(self, pos: int):
        return self.maps[pos] if pos < len(self.maps) else None

    def map_in(self, pos: int):
        return self.maps[pos - 1] if pos >= 1 else None

    def homology(self, pos: int, v: int) -> int:
        """dim ker(T_pos -> T_{pos+1})_v - rank(T_{pos-1} -> T_pos)_v."""
        if pos < 0 or pos > self.length:
            return 0
        field = self.ring.field
        dim_term = sum(
            len(monomials_of_degree(v - a)) for a in self.terms[pos]
        )
        out = self.map_out(pos)
        rank_out = linalg.rank(out.degree_slice(v).matrix, field) if out is not None else 0
        inc = self.map_in(pos)
        rank_in = linalg.rank(inc.degree_slice(v).matrix, field) if inc is not None else 0
        return dim_term - rank_out - rank_in


def complex_homology(c: GradedComplex, position: int, v: int) -> int:
    return c.homology(position, v)


def dual_complex(res: Resolution, shift: int = DUALIZING_SHIFT) -> GradedComplex:
    """Hom(F_*, R(shift)) as a cochain complex; position q computes
    Ext^q of the resolved module into R(shift)."""
    terms = [tuple(-a - shift for a in tw) for tw in res.twists]
    maps = [d.transpose_dual(shift) for d in res.maps]
    return GradedComplex(res.ring, terms, maps, check=False)


def local_cohomology(pres: GradedPresentation, i: int, v: int) -> int:
    """dim_k H^i_m(N)_v via duality against R(-4)."""
    res = minimal_free_resolution(pres)
    q = 4 - i
    if q < 0 or q > res.length:
        return 0
    return dual_complex(res).homology(q, -v)


# ---------------------------------------------------------------------------
# windowed modules

class WindowedModule:
    """Finite degree window of a graded module: per-degree dimensions
    plus the four multiplication actions piece_v -> piece_{v+1}.

    zero_below / zero_above state that pieces outside the window vanish
    (proved or contract-asserted by the extraction that built this).
    Action matrices may be materialized lazily through a provider.
    """

    def __init__(self, ring, lo, hi, dims, actions, zero_below, zero_above,
                 tag="", provider=None):
        self.ring = ring
        self.lo = lo
        self.hi = hi
        self.dims = {v: d for v, d in dims.items() if lo <= v <= hi}
        self.actions = actions  # dict v -> [A0, A1, A2, A3]
        self.zero_below = zero_below
        self.zero_above = zero_above
        self.tag = tag
        self.provider = provider  # callable (l, v) -> matrix
        self._pres_cache = None

    # -- pieces

    def piece(self, v: int) -> int:
        if self.lo <= v <= self.hi:
            return self.dims.get(v, 0)
        if v < self.lo and self.zero_below:
            return 0
        if v > self.hi and self.zero_above:
            return 0
        raise WindowCoverageError(
            f"degree {v} outside window [{self.lo},{self.hi}] of {self.tag or 'module'}",
            needed=v,
        )

    @property
    def finite_length(self) -> bool:
        return self.zero_below and self.zero_above

    def support(self):
        return [v for v in range(self.lo, self.hi + 1) if self.dims.get(v, 0)]

    def total_dim(self) -> int:
        return sum(self.dims.get(v, 0) for v in range(self.lo, self.hi + 1))

    def diameter(self) -> int:
        sup = self.support()
        if not sup:
            return 0
        return sup[-1] - sup[0] + 1

    def is_zero(self) -> bool:
        return not self.support()

    # -- actions

    def action(self, l: int, v: int):
        """Matrix of x_l: piece_v -> piece_{v+1}."""
        field = self.ring.field
        a, b = self.piece(v), self.piece(v + 1)
        if a == 0 or b == 0:
            return linalg.zeros(b, a, field)
        if v in self.actions:
            return self.actions[v][l]
        if self.provider is not None:
            self.actions[v] = [self.provider(ll, v) for ll in range(4)]
            return self.actions[v][l]
        raise WindowCoverageError(f"action at degree {v} not stored", needed=v)

    def mono_action(self, m: Mono, v: int):
        field = self.ring.field
        M = linalg.identity(self.piece(v), field)
        cur = v
        for l in range(4):
            for _ in range(m[l]):
                M = _matmul(self.action(l, cur), M, field)
                cur += 1
        return M

    def poly_action(self, p, v: int):
        """Matrix of multiplication by homogeneous p: piece_v -> piece_{v+d}."""
        from .algebra import poly_degree
        field = self.ring.field
        d = poly_degree(p)
        if d is None:
            # zero polynomial: need a target dimension of some degree; use v
            return linalg.zeros(self.piece(v), self.piece(v), field)
        out = linalg.zeros(self.piece(v + d), self.piece(v), field)
        for m, c in p.items():
            A = self.mono_action(m, v)
            out = _madd(out, A, c, field)
        return out

    def dual(self) -> "WindowedModule":
        """Graded k-dual: pieces reflected, actions transposed."""
        if not self.finite_length:
            raise ValueError("dual of a non-finite-length window is not defined")
        dims = {-v: d for v, d in self.dims.items()}
        actions = {}
        for v in range(-self.hi, -self.lo):
            # action at degree v of the dual = transpose of action at -v-1
            acts = []
            for l in range(4):
                acts.append(_transpose(self.action(l, -v - 1)))
            actions[v] = acts
        return WindowedModule(self.ring, -self.hi, -self.lo, dims, actions,
                              True, True, tag=f"dual({self.tag})")

    def summand_at(self, t: int) -> "WindowedModule":
        """The degree-t piece viewed as a module with trivial action."""
        d = self.piece(t)
        return WindowedModule(self.ring, t, t, {t: d}, {}, True, True,
                              tag=f"{self.tag}[{t}]")

    def is_action_split_at(self, t: int) -> bool:
        """True when the incoming and outgoing multiplications vanish at t,
        so the degree-t piece is a direct module summand."""
        if self.piece(t) == 0:
            return False
        for l in range(4):
            A_out = self.action(l, t)
            if A_out.size and np.any(A_out != self.ring.field.zero):
                return False
            A_in = self.action(l, t - 1)
            if A_in.size and np.any(A_in != self.ring.field.zero):
                return False
        return True

    def __repr__(self):
        sup = {v: self.dims[v] for v in self.support()}
        return f"WindowedModule({self.tag or 'module'}, window=[{self.lo},{self.hi}], dims={sup})"


def _matmul(A, B, field):
    if field.char:
        if A.shape[1] == 0 or B.shape[1] == 0 or A.shape[0] == 0:
            return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        return (A @ B) % field.char
    return A @ B if A.size and B.size else linalg.zeros(A.shape[0], B.shape[1], field)


def _madd(A, B, c, field):
    if field.char:
        return (A + B * c) % field.char
    return A + B * c


def _transpose(A):
    return A.T.copy()


# ---------------------------------------------------------------------------
# extraction of local cohomology modules
#
# Ext^q(N, R(-4)) is materialized as a presented module: kernel
# generators of the dual map are syzygies, the image of the previous
# dual map is lifted through them, and second syzygies give the
# relations.  H^i_m is then the graded k-dual of a standard-monomial
# realization of that presentation -- no large eliminations.

def ext_presentation(pres: GradedPresentation, q: int) -> GradedPresentation | None:
    """Ext^q(N, R(-4)) as a graded presentation; None when q is out of
    range of the resolution."""
    cache = getattr(pres, "_ext_pres", None)
    if cache is None:
        cache = pres._ext_pres = {}
    if q in cache:
        return cache[q]
    res = minimal_free_resolution(pres)
    ring = pres.ring
    field = ring.field
    if q < 0 or q > res.length:
        cache[q] = None
        return None
    dc = dual_complex(res)
    tw_q = dc.terms[q]
    out_map = dc.map_out(q)
    in_map = dc.map_in(q)
    if out_map is None:
        rel = in_map if (in_map is not None and in_map.ncols) else None
        epres = GradedPresentation(ring, tw_q, rel)
        cache[q] = epres
        return epres
    cols = out_map.columns()
    ker_cols = []
    for j, c in enumerate(cols):
        if not c:
            ker_cols.append({(ONE_MONO, j): field.one})
    nz = [j for j, c in enumerate(cols) if c]
    if nz:
        from .groebner import syzygies_of_columns
        syz = syzygies_of_columns(ring, out_map.row_degrees, [cols[j] for j in nz])
        for col in syz.columns():
            ker_cols.append({(m, nz[k]): c for (m, k), c in col.items()})
    if not ker_cols:
        epres = GradedPresentation(ring, ())
        cache[q] = epres
        return epres
    from .algebra import vec_degree
    gen_degs = tuple(vec_degree(c, tw_q) for c in ker_cols)
    rel_cols = []
    if in_map is not None and in_map.ncols:
        from .groebner import lift_columns
        rel_cols.extend(c for c in lift_columns(ring, tw_q, ker_cols,
                                                in_map.columns()) if c)
    from .groebner import syzygies_of_columns as _soc
    syz2 = _soc(ring, tw_q, ker_cols)
    rel_cols.extend(c for c in syz2.columns() if c)
    rel = GradedMatrix.from_columns(ring, gen_degs, rel_cols) if rel_cols else None
    epres = GradedPresentation(ring, gen_degs, rel)
    cache[q] = epres
    return epres


def _matlis_dual_window(real: "WindowedModule", lo: int, hi: int,
                        zero_below: bool, tag: str) -> WindowedModule:
    """The graded k-dual of a realization, on [lo, hi]: piece_v is the
    dual of real_(-v); actions are transposed (lazily)."""
    ring = real.ring
    dims = {v: real.piece(-v) for v in range(lo, hi + 1)}

    def provider(l, v):
        return _transpose(real.action(l, -v - 1))

    return WindowedModule(ring, lo, hi, dims, {}, zero_below, True,
                          tag=tag, provider=provider)


def extract_module(pres: GradedPresentation, i: int, window=None,
                   finite: bool | None = None, tag: str = "") -> WindowedModule:
    """H^i_m of the presented module as a WindowedModule.

    For finite-length extractions the support is determined exactly and
    certified by the Hilbert polynomial of the Ext module; requesting a
    finite extraction of an infinite-length H^i_m raises.
    """
    ring = pres.ring
    if finite is None:
        finite = i <= 2
    q = 4 - i
    epres = ext_presentation(pres, q)
    if epres is None or not epres.gen_degrees:
        lo, hi = window if window else (0, 0)
        return WindowedModule(ring, lo, hi, {}, {}, True, True, tag=tag)
    from .resolution import BettiTable, betti_table, hilbert_from_betti
    if finite:
        eres = minimal_free_resolution(epres)
        _, hp = hilbert_from_betti(betti_table(eres))
        if hp.coeffs:
            raise WindowCoverageError(
                f"H^{i}_m of the input is not finite length "
                f"(Hilbert polynomial {hp.coeffs}); tag={tag}")
        gen_top = max(betti_table(eres).twists_at(1))
        u = min(epres.gen_degrees)
        dims_u = {}
        while True:
            d = hilbert_function(epres, u)
            dims_u[u] = d
            if u >= gen_top and d == 0:
                break
            if u - min(epres.gen_degrees) > WINDOW_CAP:
                raise WindowCoverageError(f"support scan cap exceeded for {tag}")
            u += 1
        u_hi = u
        real = windowed_realization(epres, min(epres.gen_degrees), u_hi)
        return _matlis_dual_window(real, -u_hi, -min(epres.gen_degrees),
                                   zero_below=True, tag=tag)
    if window is None:
        degs = minimal_free_resolution(pres).betti_degrees()
        window = (min(degs) - 5, max(degs) + 5)
    lo, hi = window
    real = windowed_realization(epres, -hi, -lo)
    return _matlis_dual_window(real, lo, hi, zero_below=False, tag=tag)



def dual_module(w: WindowedModule) -> WindowedModule:
    return w.dual()


# ---------------------------------------------------------------------------
# windowed realization of a presented module

def windowed_realization(pres: GradedPresentation, lo: int, hi: int) -> WindowedModule:
    """The presented module itself on a window: standard-monomial bases
    per degree, multiplication matrices by normal form (lazily)."""
    key = ("real", lo, hi)
    if key in pres._realizations:
        return pres._realizations[key]
    ring = pres.ring
    field = ring.field
    gb = pres.relations_gb()
    lo = min(lo, min(pres.gen_degrees)) if pres.gen_degrees else lo
    std = {v: std_monomials(gb, v) for v in range(lo, hi + 2)}
    index = {v: {mk: r for r, mk in enumerate(std[v])} for v in std}
    dims = {v: len(std[v]) for v in range(lo, hi + 1)}
    from .groebner import normal_form

    def provider(l, v):
        A = linalg.zeros(len(std[v + 1]), len(std[v]), field)
        for cidx, (m, comp) in enumerate(std[v]):
            m2 = mono_mul(m, VARS[l])
            r = index[v + 1].get((m2, comp))
            if r is not None:
                A[r, cidx] = field.one
            else:
                rem = normal_form(gb, {(m2, comp): field.one})
                for (mm, cc), coef in rem.items():
                    A[index[v + 1][(mm, cc)], cidx] = coef
        return A

    w = WindowedModule(ring, lo, hi, dims, {},
                       zero_below=True, zero_above=False,
                       tag=f"realization[{lo},{hi}]", provider=provider)
    pres._realizations[key] = w
    return w


# ---------------------------------------------------------------------------
# graded Hom and Ext

@dataclass
class HomElement:
    """A degree-v homomorphism, stored on graded pieces.

    For a presented source: `gen_images[k]` is the image vector of
    generator k in the target piece.  For a windowed source: `maps[u]`
    is the matrix piece_u(source) -> piece_{u+v}(target).
    """
    v: int
    gen_images: list | None = None
    maps: dict | None = None


def _hom_presented(A: GradedPresentation, B: WindowedModule, v: int, want_basis: bool):
    field = A.ring.field
    gd = A.gen_degrees
    block_sizes = [B.piece(g + v) for g in gd]
    offsets = np.cumsum([0] + block_sizes)
    total = int(offsets[-1])
    rel = A.relations
    rows = []
    for j in range(rel.ncols):
        rho = rel.col_degrees[j]
        rdim = B.piece(rho + v)
        if rdim == 0:
            continue
        M = linalg.zeros(rdim, total, field)
        for k in range(len(gd)):
            p = rel.entry(k, j)
            if not p:
                continue
            blk = B.poly_action(p, gd[k] + v)
            M[:, offsets[k]:offsets[k + 1]] = blk
        rows.append(M)
    if rows:
        big = np.concatenate(rows, axis=0)
    else:
        big = linalg.zeros(0, total, field)
    _, K = linalg.nullspace(big, field)
    dim = K.shape[1]
    if not want_basis:
        return dim, None
    basis = []
    for c in range(dim):
        col = K[:, c]
        basis.append(HomElement(v, gen_images=[
            col[offsets[k]:offsets[k + 1]].copy() for k in range(len(gd))
        ]))
    return dim, basis


def _hom_windowed(A: WindowedModule, B: WindowedModule, v: int, want_basis: bool):
    if not A.finite_length:
        raise WindowCoverageError("windowed Hom source must be finite length")
    field = A.ring.field
    us = [u for u in range(A.lo, A.hi + 1) if A.piece(u)]
    block = {u: B.piece(u + v) * A.piece(u) for u in us}
    offsets = {}
    total = 0
    for u in us:
        offsets[u] = total
        total += block[u]
    rows = []
    for u in us:
        a_u = A.piece(u)
        if a_u == 0:
            continue
        for l in range(4):
            tgt = B.piece(u + v + 1)
            if tgt == 0:
                continue
            M = linalg.zeros(tgt * a_u, total, field)
            # A^B_l[u+v] . phi_u  (phi_u flattened column-major by source index)
            Bl = B.action(l, u + v)
            if block[u]:
                for s in range(a_u):
                    M[s * tgt:(s + 1) * tgt,
                      offsets[u] + s * B.piece(u + v):offsets[u] + (s + 1) * B.piece(u + v)] = Bl
            # - phi_{u+1} . A^A_l[u]
            a_next = A.piece(u + 1)
            if a_next:
                Al = A.action(l, u)
                bdim = B.piece(u + v + 1)
                for s in range(a_u):
                    for t in range(a_next):
                        c = Al[t, s]
                        if c != field.zero:
                            seg = M[s * tgt:(s + 1) * tgt,
                                    offsets[u + 1] + t * bdim:offsets[u + 1] + (t + 1) * bdim]
                            for r in range(bdim):
                                seg[r, r] = field.sub(seg[r, r], c)
            rows.append(M)
    big = np.concatenate(rows, axis=0) if rows else linalg.zeros(0, total, field)
    _, K = linalg.nullspace(big, field)
    dim = K.shape[1]
    if not want_basis:
        return dim, None
    basis = []
    for c in range(dim):
        col = K[:, c]
        maps = {}
        for u in us:
            a_u, b_u = A.piece(u), B.piece(u + v)
            M = linalg.zeros(b_u, a_u, field)
            for s in range(a_u):
                M[:, s] = col[offsets[u] + s * b_u:offsets[u] + (s + 1) * b_u]
            maps[u] = M
        basis.append(HomElement(v, maps=maps))
    return dim, basis


def graded_hom(A, B: WindowedModule, v: int, want_basis: bool = False):
    """(dimension, optional basis) of Hom(A, B) in internal degree v."""
    if isinstance(A, GradedPresentation):
        return _hom_presented(A, B, v, want_basis)
    return _hom_windowed(A, B, v, want_basis)


def hom_dim(A, B, v: int) -> int:
    return graded_hom(A, B, v)[0]


def graded_ext(A: GradedPresentation, B, i: int, v: int) -> int:
    """dim Ext^i(A, B)_v = homology of Hom(resolution of A, B) at i.

    B may be a WindowedModule or a presentation (realized on the fly).
    """
    res = minimal_free_resolution(A)
    if isinstance(B, GradedPresentation):
        degs = [a + v for tw in res.twists for a in tw]
        B = windowed_realization(B, min(degs), max(degs))
    field = A.ring.field
    if i < 0 or i > res.length:
        return 0
    cache = getattr(A, "_ext_rank_cache", None)
    if cache is None:
        cache = A._ext_rank_cache = {}

    def term_dims(q):
        return [B.piece(a + v) for a in res.twists[q]]

    def delta_rank(q):
        key = (id(B), q, v)
        if key in cache:
            return cache[key]
        d = res.maps[q]
        src = term_dims(q)
        tgt = term_dims(q + 1)
        so = np.cumsum([0] + src)
        to = np.cumsum([0] + tgt)
        M = linalg.zeros(int(to[-1]), int(so[-1]), field)
        for (r, c), p in d.entries.items():
            blk = B.poly_action(p, res.twists[q][r] + v)
            M[to[c]:to[c + 1], so[r]:so[r + 1]] = blk
        rk = linalg.rank(M, field)
        cache[key] = rk
        return rk

    n_i = sum(term_dims(i))
    rank_out = delta_rank(i) if i < res.length else 0
    rank_in = delta_rank(i - 1) if i >= 1 else 0
    return n_i - rank_out - rank_in


# ---------------------------------------------------------------------------
# presenting a windowed module; composition pairing

def module_resolution(w: WindowedModule):
    """Presentation and minimal free resolution of a finite-length
    windowed module (generators = basis of w / m.w)."""
    if not w.finite_length:
        raise ValueError("module_resolution needs a finite-length module")
    if w._pres_cache is not None:
        return w._pres_cache
    ring = w.ring
    field = ring.field
    gens = []  # (degree, vector in piece)
    for v in range(w.lo, w.hi + 1):
        dv = w.piece(v)
        if dv == 0:
            continue
        prev = w.piece(v - 1)
        if prev:
            stacked = np.concatenate([_matmul(w.action(l, v - 1),
                                              linalg.identity(prev, field), field)
                                      for l in range(4)], axis=1)
        else:
            stacked = linalg.zeros(dv, 0, field)
        idx = linalg.extend_to_basis(stacked, linalg.identity(dv, field), field)
        for c in idx:
            e = linalg.zeros(dv, 1, field)
            e[c, 0] = field.one
            gens.append((v, e))
    gen_degrees = tuple(v for v, _ in gens)
    if not gens:
        pres = GradedPresentation(ring, ())
        w._pres_cache = (pres, minimal_free_resolution(pres))
        return w._pres_cache

    def eval_matrix(u):
        cols = []
        meta = []
        for k, (vk, vec) in enumerate(gens):
            for m in monomials_of_degree(u - vk):
                cols.append(_matmul(w.mono_action(m, vk), vec, field)[:, 0])
                meta.append((k, m))
        if cols:
            return np.stack(cols, axis=1), meta
        return linalg.zeros(w.piece(u), 0, field), meta

    rel_cols = []
    prev_kernel = None  # (meta info handled per degree)
    prev_rel_vecs: list = []
    for u in range(min(gen_degrees), w.hi + 2):
        ev, meta = eval_matrix(u)
        if ev.shape[1] == 0:
            continue
        _, K = linalg.nullspace(ev, field)
        if K.shape[1] == 0:
            prev_rel_vecs.append((u, [], meta))
            continue
        # span of x_l * (relations of degree u-1), in degree-u coordinates
        old_cols = []
        for (u0, vecs, meta0) in prev_rel_vecs:
            if u0 != u - 1:
                continue
            idx0 = {km: r for r, km in enumerate(meta0)}
            idx1 = {km: r for r, km in enumerate(meta)}
            for vec in vecs:
                for l in range(4):
                    lifted = linalg.zeros(len(meta), 1, field)
                    for (k, m), r0 in idx0.items():
                        c = vec[r0]
                        if c != field.zero:
                            r1 = idx1[(k, mono_mul(m, VARS[l]))]
                            lifted[r1, 0] = field.add(lifted[r1, 0], c)
                    old_cols.append(lifted[:, 0])
        I = np.stack(old_cols, axis=1) if old_cols else linalg.zeros(len(meta), 0, field)
        new_idx = linalg.extend_to_basis(I, K, field)
        kept = [K[:, c].copy() for c in range(K.shape[1])]
        prev_rel_vecs.append((u, kept, meta))
        for c in new_idx:
            col = K[:, c]
            vec = {}
            for r, (k, m) in enumerate(meta):
                if col[r] != field.zero:
                    vec[(m, k)] = field.normalize(col[r])
            rel_cols.append(vec)
    if rel_cols:
        rel = GradedMatrix.from_columns(ring, gen_degrees, rel_cols)
        pres = GradedPresentation(ring, gen_degrees, rel)
    else:
        pres = GradedPresentation(ring, gen_degrees)
    w._pres_cache = (pres, minimal_free_resolution(pres))
    return w._pres_cache


@dataclass
class PairingResult:
    matrix: np.ndarray | None   # rows: (phi, psi) pairs; cols: Hom(F,E) basis coords
    nonzero: bool
    dim_fm: int
    dim_me: int
    dim_fe: int


def compose_pairing(F: GradedPresentation, M: WindowedModule, E: WindowedModule) -> PairingResult:
    """The bilinear composition Hom(F,M)_0 x Hom(M,E)_0 -> Hom(F,E)_0."""
    field = F.ring.field
    dim_fm, basis_fm = graded_hom(F, M, 0, want_basis=True)
    dim_me, basis_me = graded_hom(M, E, 0, want_basis=True)
    dim_fe, basis_fe = graded_hom(F, E, 0, want_basis=True)
    if dim_fm == 0 or dim_me == 0:
        return PairingResult(None, False, dim_fm, dim_me, dim_fe)
    gd = F.gen_degrees
    fe_cols = []
    nonzero = False
    for phi in basis_fm:
        for psi in basis_me:
            stacked = []
            for k, g in enumerate(gd):
                img = phi.gen_images[k]
                psi_g = psi.maps.get(g)
                if psi_g is None or psi_g.shape[0] == 0:
                    stacked.append(linalg.zeros(E.piece(g), 1, field)[:, 0])
                else:
                    stacked.append(_matmul(psi_g, img.reshape(-1, 1), field)[:, 0])
            col = np.concatenate(stacked) if stacked else linalg.zeros(0, 1, field)[:, 0]
            if col.size and np.any(col != field.zero):
                nonzero = True
            fe_cols.append(col)
    # coordinates in the Hom(F,E) basis
    matrix = None
    if dim_fe and fe_cols:
        basis_mat = np.stack(
            [np.concatenate([h.gen_images[k] for k in range(len(gd))]) for h in basis_fe],
            axis=1,
        )
        comps = np.stack(fe_cols, axis=1)
        X = linalg.solve(basis_mat, comps, field)
        if X is None:
            raise ArithmeticError("composite escaped Hom(F,E); engine bug")
        matrix = X.T
    return PairingResult(matrix, nonzero, dim_fm, dim_me, dim_fe)
