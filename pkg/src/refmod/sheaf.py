"""Rank-2 sheaf abstraction over its section module.

The input is the graded module F of twisted global sections, as a
presentation.  Validation enforces what the downstream criteria need:
rank 2 (Betti alternating sum), projective dimension at most 2, and
vanishing of H^0_m and H^1_m (saturation / depth >= 2; by
Auslander-Buchsbaum this is exactly pd <= 2).  Reflexivity itself is
never certified, only asserted, and every verdict carries that
assertion in its hypothesis trail.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .algebra import Ring
from .homology import WindowedModule, extract_module
from .resolution import (
    BettiTable,
    GradedPresentation,
    HilbertPolynomial,
    betti_table,
    hilbert_from_betti,
    hilbert_function,
    minimal_free_resolution,
)

STABLE = "Stable"
STRICTLY_SEMISTABLE = "StrictlySemistable"
UNSTABLE = "Unstable"


@dataclass
class SheafInput:
    pres: GradedPresentation
    reflexive_asserted: bool = True
    stable_asserted: str | None = None   # optional override, recorded in trails

    @property
    def ring(self) -> Ring:
        return self.pres.ring


@dataclass
class ValidationCheck:
    name: str
    ok: bool
    witness: str = ""


@dataclass
class ValidationReport:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]


def validate_sheaf(inp: SheafInput) -> ValidationReport:
    pres = inp.pres
    res = minimal_free_resolution(pres)
    bt = BettiTable.from_resolution(res)
    checks = []
    rk = bt.rank_sum()
    checks.append(ValidationCheck("rank2", rk == 2, f"betti alternating sum = {rk}"))
    checks.append(ValidationCheck(
        "pd<=2", res.length <= 2, f"minimal resolution length = {res.length}"))
    if res.length <= 2:
        checks.append(ValidationCheck("H0m=H1m=0", True, "depth >= 2 (pd <= 2)"))
    else:
        i = 0 if res.length == 4 else 1
        h = extract_module(pres, i, finite=True, tag=f"H^{i}_m")
        sup = h.support()
        checks.append(ValidationCheck(
            "H0m=H1m=0", False,
            f"H^{i}_m nonzero in degree {sup[0]}" if sup else "pd > 2"))
    return ValidationReport(checks)


# ---------------------------------------------------------------------------
# Chern classes and numeric invariants

def _series_mul(a, b):
    return tuple(sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(4))


def _series_inv(a):
    # a[0] == 1
    inv = [1, 0, 0, 0]
    for k in range(1, 4):
        inv[k] = -sum(a[i] * inv[k - i] for i in range(1, k + 1))
    return tuple(inv)


def chern_classes(bt: BettiTable) -> tuple[int, int, int]:
    """Total Chern class of the sheafified resolution, mod t^4."""
    rk = bt.rank_sum()
    if rk != 2:
        raise ValueError(f"chern_classes needs rank 2, got alternating sum {rk}")
    total = (1, 0, 0, 0)
    for (j, i), beta in sorted(bt.entries.items()):
        f = (1, -i, 0, 0)
        if (j - 1) % 2 == 1:
            f = _series_inv(f)
        for _ in range(beta):
            total = _series_mul(total, f)
    return total[1], total[2], total[3]


def twist_invariants(c1: int, c2: int, c3: int, t: int) -> tuple[int, int, int]:
    """Chern classes of F(t) for rank-2 F; c3 is twist-invariant."""
    return c1 + 2 * t, c2 + c1 * t + t * t, c3


def expected_dimension(c1: int, c2: int) -> int:
    return 8 * c2 - 2 * c1 * c1 - 3


def riemann_roch_chi(c1: int, c2: int, c3: int) -> Fraction:
    """chi(F) on P^3 for rank 2 with the given Chern classes."""
    return (Fraction(c1 ** 3 - 3 * c1 * c2 + 3 * c3, 6)
            + Fraction(c1 * c1 - 2 * c2)
            + Fraction(11 * c1, 6) + 2)


def riemann_roch_polynomial(c1: int, c2: int, c3: int) -> HilbertPolynomial:
    """chi(F(t)) as a cubic polynomial in t (Lagrange interpolation of
    the twisted chi, which is cubic in t)."""
    pts = []
    for t in range(4):
        ct = twist_invariants(c1, c2, c3, t)
        pts.append((t, riemann_roch_chi(*ct)))
    # Newton interpolation for a cubic through t = 0..3
    coef = [p[1] for p in pts]
    for j in range(1, 4):
        for i in range(3, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / j
    # expand newton form coef[0] + coef[1] t + coef[2] t(t-1) + coef[3] t(t-1)(t-2)
    poly = [coef[0], Fraction(0), Fraction(0), Fraction(0)]
    basis = [Fraction(1)]
    for j in range(1, 4):
        new = [Fraction(0)] * (len(basis) + 1)
        for k, a in enumerate(basis):
            new[k] += a * (-(j - 1))
            new[k + 1] += a
        basis = new
        for k, a in enumerate(basis):
            poly[k] += coef[j] * a
    return HilbertPolynomial.from_list(poly)


# ---------------------------------------------------------------------------
# cohomology table

@dataclass
class CohomologyTable:
    window: tuple[int, int]
    rows: dict            # j in 0..3 -> {v: dim}
    hilb: object          # callable v -> h^0

    def h(self, j: int, v: int) -> int:
        if j == 0:
            return self.hilb(v)
        return self.rows[j].get(v, 0)

    def render(self) -> str:
        lo, hi = self.window
        vs = list(range(lo, hi + 1))
        lines = ["  v   : " + " ".join(f"{v:>4}" for v in vs)]
        for j in range(4):
            lines.append(f"  h^{j} : " + " ".join(f"{self.h(j, v):>4}" for v in vs))
        return "\n".join(lines)


@dataclass
class StabilityStatus:
    status: str
    witness_twist: int
    section_count: int
    asserted: bool = False

    def __str__(self):
        src = "asserted" if self.asserted else f"h^0(F({self.witness_twist})) = {self.section_count}"
        return f"{self.status} ({src})"


def stability_test(pres: GradedPresentation, c1: int) -> StabilityStatus:
    """Section test on the normalized twist (c1' in {0, -1}).

    Stable iff the normalized sheaf has no sections; for c1' = 0 a
    section with none after one more negative twist means strictly
    semistable.
    """
    t = -(c1 // 2) if c1 % 2 == 0 else -((c1 + 1) // 2)
    c1n = c1 + 2 * t
    h0 = hilbert_function(pres, t)
    if h0 == 0:
        return StabilityStatus(STABLE, t, h0)
    if c1n == 0 and hilbert_function(pres, t - 1) == 0:
        return StabilityStatus(STRICTLY_SEMISTABLE, t, h0)
    return StabilityStatus(UNSTABLE, t, h0)


# ---------------------------------------------------------------------------
# full invariant report

@dataclass
class SheafInvariants:
    input: SheafInput
    betti: BettiTable
    c1: int
    c2: int
    c3: int
    ed: int
    cohomology: CohomologyTable
    M: WindowedModule
    E: WindowedModule
    H4: WindowedModule
    deltas: tuple[int, int, int, int]
    diameter: int
    r: int | None
    c: int | None
    stability: StabilityStatus
    hilb_poly: HilbertPolynomial
    validation: ValidationReport = None

    @property
    def pres(self):
        return self.input.pres


def deficiency_modules(pres: GradedPresentation, betti: BettiTable):
    degs = betti.degrees()
    lo, hi = min(degs) - 5, max(degs) + 5
    M = extract_module(pres, 2, window=(lo, hi), finite=True, tag="M")
    sup = M.support()
    lo_e = min([lo] + [s - 5 for s in sup[:1]])
    E = extract_module(pres, 3, window=(lo_e, hi), finite=False, tag="E")
    return M, E


def delta_invariants(betti: BettiTable, table: CohomologyTable):
    coeff = {}
    for (j, i), b in betti.entries.items():
        coeff[i] = coeff.get(i, 0) + (-1) ** (j - 1) * b
    out = []
    for j in range(4):
        out.append(sum(c * table.h(j, i) for i, c in coeff.items()))
    return tuple(out)


def analyze_sheaf(inp: SheafInput, window: tuple[int, int] | None = None) -> SheafInvariants:
    pres = inp.pres
    validation = validate_sheaf(inp)
    if not validation.ok:
        raise ValueError(
            "invalid sheaf input: " +
            "; ".join(f"{c.name} ({c.witness})" for c in validation.failures()))
    res = minimal_free_resolution(pres)
    bt = BettiTable.from_resolution(res)
    c1, c2, c3 = chern_classes(bt)
    ed = expected_dimension(c1, c2)
    degs = bt.degrees()
    if window is None:
        window = (min(degs) - 5, max(degs) + 5)
    lo, hi = window
    M, E = deficiency_modules(pres, bt)
    H4 = extract_module(pres, 4, window=(lo, hi), finite=False, tag="H^3row")
    hilb = lambda v: hilbert_function(pres, v)
    rows = {
        1: {v: M.piece(v) for v in range(M.lo, M.hi + 1)},
        2: {v: E.piece(v) for v in range(E.lo, E.hi + 1)},
        3: {v: H4.piece(v) for v in range(H4.lo, H4.hi + 1)},
    }
    table = CohomologyTable(window, rows, hilb)
    deltas = delta_invariants(bt, table)
    diam = M.diameter()
    r = c = None
    if diam == 1:
        sup = M.support()
        c = sup[0]
        r = M.piece(c)
    stab = stability_test(pres, c1)
    if inp.stable_asserted is not None:
        stab = StabilityStatus(inp.stable_asserted, stab.witness_twist,
                               stab.section_count, asserted=True)
    _, hp = hilbert_from_betti(bt)
    inv = SheafInvariants(inp, bt, c1, c2, c3, ed, table, M, E, H4,
                          deltas, diam, r, c, stab, hp, validation)
    _consistency_checks(inv)
    return inv


def _consistency_checks(inv: SheafInvariants):
    """Cross-checks that hold for every validated input; failure means
    an engine bug, not a property of the example."""
    rr = riemann_roch_polynomial(inv.c1, inv.c2, inv.c3)
    if rr != inv.hilb_poly:
        raise ArithmeticError(
            f"Riemann-Roch polynomial {rr.coeffs} != Hilbert polynomial "
            f"{inv.hilb_poly.coeffs}")
    lo, hi = inv.cohomology.window
    fn, hp = hilbert_from_betti(inv.betti)
    for v in range(lo, hi + 1):
        lhs = fn(v) - hp.value(v)
        rhs = inv.cohomology.h(1, v) - inv.cohomology.h(2, v) + inv.cohomology.h(3, v)
        if lhs != rhs:
            raise ArithmeticError(
                f"Euler characteristic identity fails at v={v}: {lhs} != {rhs}")
