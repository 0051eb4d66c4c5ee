"""Space-curve side: invariants of a saturated curve ideal, Rao module,
Hilbert-scheme lower bounds, dualizing-sheaf section counts, liaison
transfer, and normal-sheaf section counts with the Ext-vanishing
certificate that makes them exact.

Two kinds of curve data coexist: full ideals (everything is computed),
and numeric-only records (degree, genus, postulation and cohomology
vanishing taken from the literature) used to reproduce dimension
transfers for curves whose equations are not materialized.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import comb

from .algebra import Ring
from .homology import (
    WindowedModule,
    extract_module,
    graded_ext,
    graded_hom,
    module_resolution,
    windowed_realization,
)
from .resolution import (
    BettiTable,
    GradedPresentation,
    RING_HILBERT_POLY,
    betti_table,
    hilbert_from_betti,
    hilbert_function,
    minimal_free_resolution,
)


class HypothesisRefusal(Exception):
    """A stated hypothesis of the rule being applied fails (or cannot be
    certified); the computation is refused rather than done wrongly."""

    def __init__(self, hypothesis: str, witness: str = ""):
        super().__init__(f"hypothesis failed: {hypothesis}" + (f" ({witness})" if witness else ""))
        self.hypothesis = hypothesis
        self.witness = witness


class InternalIdentityError(ArithmeticError):
    """An unconditionally-true identity failed: engine bug."""


@dataclass
class CurveInput:
    pres: GradedPresentation     # the ideal I_X as an abstract graded module
    name: str = ""

    @classmethod
    def from_ideal(cls, ring: Ring, generators, name: str = "") -> "CurveInput":
        return cls(GradedPresentation.from_ideal(ring, generators), name)

    @property
    def ring(self):
        return self.pres.ring


@dataclass
class CurveInvariants:
    input: CurveInput
    d: int
    g: int
    betti: BettiTable
    rao: WindowedModule
    h2_module: WindowedModule     # H^3_m(I): h^2(I~(v)) row
    h3_module: WindowedModule     # H^4_m(I): h^3(I~(v)) row
    deltas: tuple[int, int, int]
    diameter: int

    def postulation(self, v: int) -> int:
        return hilbert_function(self.input.pres, v)

    def h_ideal(self, j: int, v: int) -> int:
        if j == 0:
            return self.postulation(v)
        if j == 1:
            return self.rao.piece(v)
        if j == 2:
            return self.h2_module.piece(v)
        return self.h3_module.piece(v)


def curve_invariants(inp: CurveInput) -> CurveInvariants:
    pres = inp.pres
    res = minimal_free_resolution(pres)
    if res.length > 2:
        raise ValueError(
            f"ideal is not saturated: minimal resolution has length {res.length}")
    bt = BettiTable.from_resolution(res)
    _, hp = hilbert_from_betti(bt)
    quot = RING_HILBERT_POLY.add(hp, scale=-1)
    if quot.degree != 1:
        raise ValueError(
            f"not a curve: Hilbert polynomial of R/I is {quot.coeffs} (degree {quot.degree})")
    d = int(quot.coefficient(1))
    g = 1 - int(quot.coefficient(0))
    degs = bt.degrees()
    lo, hi = min(degs) - 5, max(degs) + 5
    rao = extract_module(pres, 2, window=(lo, hi), finite=True, tag="Rao")
    sup = rao.support()
    lo_e = min([lo] + [s - 9 for s in sup[:1]])
    h2m = extract_module(pres, 3, window=(lo_e, hi), finite=False, tag="H2row")
    h3m = extract_module(pres, 4, window=(lo_e, hi), finite=False, tag="H3row")
    ci = CurveInvariants(inp, d, g, bt, rao, h2m, h3m, (0, 0, 0), rao.diameter())
    coeff = {}
    for (j, i), b in bt.entries.items():
        coeff[i] = coeff.get(i, 0) + (-1) ** (j - 1) * b
    deltas = tuple(sum(c * ci.h_ideal(j, i) for i, c in coeff.items()) for j in range(3))
    ci.deltas = deltas
    return ci


# ---------------------------------------------------------------------------
# lower bound for the Hilbert scheme dimension

@dataclass
class LowerBoundReport:
    bound: int
    via_delta0: int
    via_4d: int
    correction: int
    generically_smooth_dim: int
    deltas: tuple[int, int, int]
    d: int


def curve_lower_bound(ci: CurveInvariants) -> LowerBoundReport:
    """1 - delta^0 = 4d + delta^2 - delta^1, plus the correction term
    for generically smooth components.

    The two expressions are proved equal unconditionally; a mismatch is
    an engine bug.  The correction is the kernel dimension of the map
    (+) H^1(I(i-4))^{b_{1,i}} -> (+) H^1(I(i-4))^{b_{2,i}} induced by
    the minimal resolution, cross-checked against Hom(I, Rao)_{-4}.
    """
    d0, d1, d2 = ci.deltas
    via_delta0 = 1 - d0
    via_4d = 4 * ci.d + d2 - d1
    if via_delta0 != via_4d:
        raise InternalIdentityError(
            f"lower-bound identity failed: 1 - delta0 = {via_delta0} but "
            f"4d + delta2 - delta1 = {via_4d}")
    res = minimal_free_resolution(ci.input.pres)
    minimal_pres = GradedPresentation(ci.input.ring, res.twists[0],
                                      res.maps[0] if res.length else None)
    correction = graded_hom(minimal_pres, ci.rao, -4)[0]
    cross = graded_hom(ci.input.pres, ci.rao, -4)[0]
    if correction != cross:
        raise InternalIdentityError(
            f"correction term mismatch: kernel form {correction}, Hom form {cross}")
    return LowerBoundReport(via_delta0, via_delta0, via_4d, correction,
                            via_delta0 + correction, ci.deltas, ci.d)


def omega_sections(ci: CurveInvariants, v: int) -> int:
    """h^0(omega_X(v)) = h^1(O_X(-v)) = h^2(I~(-v))."""
    return ci.h_ideal(2, -v)


# ---------------------------------------------------------------------------
# normal sheaf sections

@dataclass
class NormalSectionsReport:
    v: int
    exact: int | None
    bounds: tuple[int, int] | None
    ext1: int
    hom_i_rao: int
    certificate: str


def normal_sections(ci: CurveInvariants, v: int) -> NormalSectionsReport:
    """h^0(N_X(v)).

    The six-term sequence linking Ext groups of I to the normal sheaf
    gives h^0(N(v)) = ext^1(I,I)_v + ker(alpha) where alpha goes out of
    Hom(I, Rao)_v.  When Ext^2(Rao, Rao)_v = 0 the factorization of
    alpha through that group forces alpha = 0 and the count is exact;
    otherwise only the bracketing bounds are reported.
    """
    pres = ci.input.pres
    ext1 = graded_ext(pres, pres, 1, v)
    if ci.rao.is_zero():
        return NormalSectionsReport(v, ext1, None, ext1, 0, "rao-module-zero")
    hom_im = graded_hom(pres, ci.rao, v)[0]
    pres_m, _ = module_resolution(ci.rao)
    ext2_mm = graded_ext(pres_m, ci.rao, 2, v)
    if ext2_mm == 0:
        return NormalSectionsReport(v, ext1 + hom_im, None, ext1, hom_im,
                                    "ext2-rao-rao-vanishes")
    return NormalSectionsReport(v, None, (ext1, ext1 + hom_im), ext1, hom_im,
                                f"ext2(Rao,Rao)_{v} = {ext2_mm} != 0")


# ---------------------------------------------------------------------------
# liaison transfer

@dataclass
class LinkageReport:
    dim_x: int
    dim_c: int
    f: int
    g: int
    summands: dict
    vanishing: dict
    asserted: bool


def linkage_transfer(dim_c: int, f: int, g: int,
                     h0_ic_f: int, h0_ic_g: int,
                     h0_ix_f: int, h0_ix_g: int,
                     vanishing_witness) -> LinkageReport:
    """Dimension transfer along a complete-intersection link of type (f, g).

    Requires h^1(I_C(v)) = 0 for v in {f, g, f-4, g-4}; the witness is
    either a mapping v -> value (computed) or the string "asserted".
    """
    needed = sorted({f, g, f - 4, g - 4})
    vanishing = {}
    asserted = vanishing_witness == "asserted"
    if not asserted:
        for v in needed:
            val = vanishing_witness(v)
            vanishing[v] = val
            if val is None or val != 0:
                raise HypothesisRefusal(
                    f"h^1(I_C({v})) = 0", f"got {val if val is not None else 'nonzero'}")
    else:
        vanishing = {v: "asserted 0" for v in needed}
    dim_x = dim_c + h0_ic_f + h0_ic_g - h0_ix_f - h0_ix_g
    return LinkageReport(dim_x, dim_c, f, g,
                         {"h0_ic_f": h0_ic_f, "h0_ic_g": h0_ic_g,
                          "h0_ix_f": h0_ix_f, "h0_ix_g": h0_ix_g},
                         vanishing, asserted)


# ---------------------------------------------------------------------------
# numeric-only curve records

class DerivationError(Exception):
    """Numeric record does not determine the requested quantity."""


@dataclass
class NumericCurve:
    """Curve known through numbers: (d, g), postulation values, h^1
    vanishing ranges, optionally a subcanonical twist.

    `h1` maps degree -> value; a value of None means "nonzero, size
    unknown".  Degrees outside `h1_support` are zero.  The
    smooth_connected flag licenses h^0 = 0 for negative-degree line
    bundles.
    """
    name: str
    d: int
    g: int
    dim_hilb: int | None = None
    gamma: dict = dc_field(default_factory=dict)
    h1: dict = dc_field(default_factory=dict)
    h1_support: tuple[int, int] | None = None
    omega_twist: int | None = None
    smooth_connected: bool = True
    provenance: dict = dc_field(default_factory=dict)

    def chi_ideal(self, v: int) -> int:
        return comb(v + 3, 3) - (v * self.d + 1 - self.g) if v >= -3 else \
            -(v * self.d + 1 - self.g) - comb(-v - 1, 3)

    def h1_ideal(self, v: int):
        if v in self.h1:
            return self.h1[v]
        if self.h1_support is not None:
            lo, hi = self.h1_support
            if v < lo or v > hi:
                return 0
        raise DerivationError(f"{self.name}: h^1(I({v})) unknown")

    def h3_ideal(self, v: int) -> int:
        # h^2(O_X) = 0, so h^3(I(v)) = h^3(O(v))
        return comb(-v - 1, 3) if v <= -4 else 0

    def h0_structure(self, v: int, _seen=frozenset()) -> int:
        """h^0(O_X(v)), via the ideal sequence or Riemann-Roch + duality."""
        key = ("OX", v)
        if key in _seen:
            raise DerivationError(f"{self.name}: h^0(O_X({v})) not determined (cyclic)")
        _seen = _seen | {key}
        if v < 0:
            if self.smooth_connected:
                return 0
            raise DerivationError(f"{self.name}: h^0(O_X({v})) unknown")
        try:
            h1 = self.h1_ideal(v)
            if h1 is not None:
                return comb(v + 3, 3) - self.h0_ideal(v, _seen) + h1
        except DerivationError:
            pass
        # chi(O_X(v)) + h^1(O_X(v)), with h^1 = h^0(omega(-v)) by duality
        return (v * self.d + 1 - self.g) + self.h0_omega(-v, _seen)

    def h0_omega(self, v: int, _seen=frozenset()) -> int:
        """h^0(omega_X(v)) = h^1(O_X(-v))."""
        key = ("om", v)
        if key in _seen:
            raise DerivationError(f"{self.name}: h^0(omega({v})) not determined (cyclic)")
        _seen = _seen | {key}
        if 2 * self.g - 2 + v * self.d < 0 and self.smooth_connected:
            return 0
        if self.omega_twist is not None:
            return self.h0_structure(self.omega_twist + v, _seen)
        return self.h0_structure(-v, _seen) + v * self.d + self.g - 1

    def h0_ideal(self, v: int, _seen=frozenset()) -> int:
        if v in self.gamma:
            return self.gamma[v]
        if v < 0:
            return 0
        key = ("I", v)
        if key in _seen:
            raise DerivationError(f"{self.name}: h^0(I({v})) not determined (cyclic)")
        _seen = _seen | {key}
        h1 = self.h1_ideal(v)
        if h1 is None:
            raise DerivationError(f"{self.name}: h^1(I({v})) only known nonzero")
        return self.chi_ideal(v) + h1 - self.h2_ideal(v, _seen) + self.h3_ideal(v)

    def h2_ideal(self, v: int, _seen=frozenset()) -> int:
        """h^2(I(v)) = h^1(O_X(v)) = h^0(omega_X(-v))."""
        return self.h0_omega(-v, _seen)

    def h1_is_zero(self, v: int) -> bool:
        val = self.h1_ideal(v)
        return val == 0
