"""Exact arithmetic substrate: coefficient fields, monomials in
k[x0..x3], homogeneous polynomials and graded matrices.

A graded matrix with row twists a_i and column twists b_j represents a
degree-0 map of free modules (+) R(-b_j) -> (+) R(-a_i); entry (i, j) is
homogeneous of degree b_j - a_i.  Slicing such a map in one degree gives
an ordinary scalar matrix over the coefficient field, which is where all
rank / kernel questions are answered.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from . import linalg

DEFAULT_PRIME = 32003
NVARS = 4

Mono = tuple[int, int, int, int]
# Poly: dict mono -> nonzero coefficient; {} is the zero polynomial.
Poly = dict


class GF:
    """Prime field GF(p); elements are ints in [0, p)."""

    def __init__(self, p: int = DEFAULT_PRIME):
        if p < 2:
            raise ValueError("characteristic must be a prime >= 2")
        self.char = p
        self.zero = 0
        self.one = 1

    def normalize(self, a) -> int:
        return int(a) % self.char

    def add(self, a, b):
        return (a + b) % self.char

    def sub(self, a, b):
        return (a - b) % self.char

    def mul(self, a, b):
        return (a * b) % self.char

    def neg(self, a):
        return (-a) % self.char

    def inv(self, a):
        a = a % self.char
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.char - 2, self.char)

    def __eq__(self, other):
        return isinstance(other, GF) and other.char == self.char

    def __hash__(self):
        return hash(("GF", self.char))

    def __repr__(self):
        return f"GF({self.char})"


class QQ:
    """Rationals, for cross-checking the modular results."""

    char = 0
    zero = Fraction(0)
    one = Fraction(1)

    def normalize(self, a) -> Fraction:
        return Fraction(a)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / Fraction(a)

    def __eq__(self, other):
        return isinstance(other, QQ)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


# ---------------------------------------------------------------------------
# monomials

def mono_deg(m: Mono) -> int:
    return m[0] + m[1] + m[2] + m[3]


def mono_mul(a: Mono, b: Mono) -> Mono:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


def mono_div(a: Mono, b: Mono):
    """a / b, or None when b does not divide a."""
    c0 = a[0] - b[0]
    c1 = a[1] - b[1]
    c2 = a[2] - b[2]
    c3 = a[3] - b[3]
    if c0 < 0 or c1 < 0 or c2 < 0 or c3 < 0:
        return None
    return (c0, c1, c2, c3)


def mono_lcm(a: Mono, b: Mono) -> Mono:
    return (max(a[0], b[0]), max(a[1], b[1]), max(a[2], b[2]), max(a[3], b[3]))


def grevlex_key(m: Mono):
    """Sort key: greater key = greater monomial in grevlex."""
    return (m[0] + m[1] + m[2] + m[3], -m[3], -m[2], -m[1], -m[0])


VARS: tuple[Mono, ...] = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
ONE_MONO: Mono = (0, 0, 0, 0)


@lru_cache(maxsize=None)
def monomials_of_degree(d: int) -> tuple[Mono, ...]:
    """All degree-d monomials in 4 variables, grevlex-descending."""
    if d < 0:
        return ()
    out = []
    for e0 in range(d, -1, -1):
        for e1 in range(d - e0, -1, -1):
            for e2 in range(d - e0 - e1, -1, -1):
                out.append((e0, e1, e2, d - e0 - e1 - e2))
    out.sort(key=grevlex_key, reverse=True)
    return tuple(out)


def dim_graded_piece(d: int) -> int:
    """dim_k R_d = C(d+3, 3) for d >= 0, else 0."""
    return comb(d + 3, 3) if d >= 0 else 0


# ---------------------------------------------------------------------------
# polynomials

def poly_zero() -> Poly:
    return {}


def poly_const(c, field) -> Poly:
    c = field.normalize(c)
    return {ONE_MONO: c} if c != field.zero else {}


def poly_mono(m: Mono, c=1, field=None) -> Poly:
    if field is not None:
        c = field.normalize(c)
        if c == field.zero:
            return {}
    return {m: c}


def poly_degree(p: Poly) -> int | None:
    """Common total degree of a homogeneous polynomial; None for 0."""
    if not p:
        return None
    degs = {mono_deg(m) for m in p}
    if len(degs) != 1:
        raise ValueError(f"non-homogeneous polynomial: degrees {sorted(degs)}")
    return degs.pop()


def poly_add(p: Poly, q: Poly, field) -> Poly:
    out = dict(p)
    for m, c in q.items():
        v = field.add(out.get(m, field.zero), c)
        if v == field.zero:
            out.pop(m, None)
        else:
            out[m] = v
    return out


def poly_scale(p: Poly, c, field) -> Poly:
    if c == field.zero:
        return {}
    return {m: field.mul(v, c) for m, v in p.items()}


def poly_neg(p: Poly, field) -> Poly:
    return {m: field.neg(v) for m, v in p.items()}


def poly_mul(p: Poly, q: Poly, field) -> Poly:
    """Product of two homogeneous polynomials (canonical merged terms)."""
    out: Poly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = mono_mul(m1, m2)
            v = field.add(out.get(m, field.zero), field.mul(c1, c2))
            if v == field.zero:
                out.pop(m, None)
            else:
                out[m] = v
    return out


def poly_mono_mul(p: Poly, m: Mono, c, field) -> Poly:
    if c == field.zero:
        return {}
    return {mono_mul(m1, m): field.mul(c1, c) for m1, c1 in p.items()}


def poly_terms_sorted(p: Poly):
    return sorted(p.items(), key=lambda t: grevlex_key(t[0]), reverse=True)


def poly_substitute(p: Poly, mat, field) -> Poly:
    """Linear change of variables x_i -> sum_j mat[i][j] x_j."""
    images = []
    for i in range(NVARS):
        img: Poly = {}
        for j in range(NVARS):
            c = field.normalize(mat[i][j])
            if c != field.zero:
                img[VARS[j]] = c
        images.append(img)
    out: Poly = {}
    for m, c in p.items():
        term = poly_const(c, field)
        for i in range(NVARS):
            for _ in range(m[i]):
                term = poly_mul(term, images[i], field)
        out = poly_add(out, term, field)
    return out


def random_form(rng, d: int, field) -> Poly:
    """Dense random homogeneous form of degree d with nonzero coefficients."""
    p = field.char if field.char else 32003
    out: Poly = {}
    for m in monomials_of_degree(d):
        c = rng.randrange(1, p)
        out[m] = field.normalize(c) if field.char else Fraction(c)
    return out


# ---------------------------------------------------------------------------
# module elements (columns of graded matrices)

# Vec: dict (mono, component) -> coefficient
Vec = dict


def vec_add(u: Vec, v: Vec, field) -> Vec:
    out = dict(u)
    for k, c in v.items():
        w = field.add(out.get(k, field.zero), c)
        if w == field.zero:
            out.pop(k, None)
        else:
            out[k] = w
    return out


def vec_scale(u: Vec, c, field) -> Vec:
    if c == field.zero:
        return {}
    return {k: field.mul(v, c) for k, v in u.items()}


def vec_mono_mul(u: Vec, m: Mono, c, field) -> Vec:
    if c == field.zero:
        return {}
    return {(mono_mul(k[0], m), k[1]): field.mul(v, c) for k, v in u.items()}


def vec_degree(u: Vec, twists) -> int | None:
    """Twisted degree of a homogeneous module element; None for 0."""
    if not u:
        return None
    degs = {mono_deg(m) + twists[c] for (m, c) in u}
    if len(degs) != 1:
        raise ValueError(f"non-homogeneous module element: degrees {sorted(degs)}")
    return degs.pop()


# ---------------------------------------------------------------------------
# graded matrices

@dataclass(frozen=True)
class Ring:
    field: object = dc_field(default_factory=GF)
    nvars: int = NVARS

    def __repr__(self):
        return f"Ring({self.field!r})"


class GradedMatrix:
    """Homogeneous matrix of a degree-0 map (+) R(-b_j) -> (+) R(-a_i)."""

    __slots__ = ("ring", "row_degrees", "col_degrees", "entries")

    def __init__(self, ring: Ring, row_degrees, col_degrees, entries, check=True):
        self.ring = ring
        self.row_degrees = tuple(row_degrees)
        self.col_degrees = tuple(col_degrees)
        self.entries = {k: v for k, v in entries.items() if v}
        if check:
            self.check_homogeneous()

    # -- construction helpers

    @classmethod
    def from_rows(cls, ring, row_degrees, col_degrees, rows, check=True):
        entries = {}
        for i, row in enumerate(rows):
            for j, p in enumerate(row):
                if p:
                    entries[(i, j)] = p
        return cls(ring, row_degrees, col_degrees, entries, check=check)

    @classmethod
    def from_columns(cls, ring, row_degrees, columns, col_degrees=None):
        """Assemble from module elements; column twists inferred if omitted."""
        if col_degrees is None:
            col_degrees = []
            for v in columns:
                d = vec_degree(v, row_degrees)
                if d is None:
                    raise ValueError("cannot infer the twist of a zero column")
                col_degrees.append(d)
        entries = {}
        for j, v in enumerate(columns):
            for (m, i), c in v.items():
                entries.setdefault((i, j), {})
                entries[(i, j)][m] = c
        return cls(ring, row_degrees, col_degrees, entries)

    @classmethod
    def zero(cls, ring, row_degrees, col_degrees):
        return cls(ring, row_degrees, col_degrees, {}, check=False)

    def check_homogeneous(self):
        for (i, j), p in self.entries.items():
            d = poly_degree(p)
            want = self.col_degrees[j] - self.row_degrees[i]
            if d is not None and d != want:
                raise ValueError(
                    f"entry ({i},{j}) has degree {d}, expected {want}"
                )

    # -- basic shape

    @property
    def nrows(self):
        return len(self.row_degrees)

    @property
    def ncols(self):
        return len(self.col_degrees)

    def is_zero(self) -> bool:
        return not self.entries

    def column(self, j: int) -> Vec:
        out: Vec = {}
        for i in range(self.nrows):
            p = self.entries.get((i, j))
            if p:
                for m, c in p.items():
                    out[(m, i)] = c
        return out

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def entry(self, i: int, j: int) -> Poly:
        return self.entries.get((i, j), {})

    # -- algebra

    def compose(self, other: "GradedMatrix") -> "GradedMatrix":
        """self o other (self applied after other)."""
        if other.row_degrees != self.col_degrees:
            raise ValueError("twist mismatch in composition")
        K = self.ring.field
        entries: dict = {}
        by_col: dict[int, list] = {}
        for (k, j), p in other.entries.items():
            by_col.setdefault(j, []).append((k, p))
        by_row: dict[int, list] = {}
        for (i, k), p in self.entries.items():
            by_row.setdefault(k, []).append((i, p))
        for j, kps in by_col.items():
            for k, q in kps:
                for i, p in by_row.get(k, ()):
                    prod = poly_mul(p, q, K)
                    if prod:
                        cur = entries.get((i, j))
                        entries[(i, j)] = poly_add(cur, prod, K) if cur else prod
        entries = {k: v for k, v in entries.items() if v}
        return GradedMatrix(self.ring, self.row_degrees, other.col_degrees, entries)

    def transpose_dual(self, shift: int) -> "GradedMatrix":
        """Matrix of Hom(-, R(shift)) applied to this map.

        Hom((+)R(-a), R(shift)) = (+) R(-(−a−shift)); generator degrees
        become -a - shift and the matrix transposes.
        """
        rows = tuple(-c - shift for c in self.col_degrees)
        cols = tuple(-r - shift for r in self.row_degrees)
        entries = {(j, i): dict(p) for (i, j), p in self.entries.items()}
        return GradedMatrix(self.ring, rows, cols, entries)

    def twist(self, t: int) -> "GradedMatrix":
        """The same map between modules twisted by t (degrees drop by t)."""
        return GradedMatrix(
            self.ring,
            tuple(a - t for a in self.row_degrees),
            tuple(b - t for b in self.col_degrees),
            self.entries,
            check=False,
        )

    def has_constant_entry(self) -> bool:
        return any(ONE_MONO in p for p in self.entries.values())

    # -- degree slices

    def slice_basis(self, v: int):
        row_basis = []
        for i, a in enumerate(self.row_degrees):
            for m in monomials_of_degree(v - a):
                row_basis.append((i, m))
        col_basis = []
        for j, b in enumerate(self.col_degrees):
            for m in monomials_of_degree(v - b):
                col_basis.append((j, m))
        return row_basis, col_basis

    def degree_slice(self, v: int) -> "SliceResult":
        """Scalar matrix of the degree-v piece of the map."""
        K = self.ring.field
        row_basis, col_basis = self.slice_basis(v)
        index = {key: r for r, key in enumerate(row_basis)}
        A = linalg.zeros(len(row_basis), len(col_basis), K)
        col_of = {}
        for cidx, (j, m) in enumerate(col_basis):
            col_of.setdefault(j, []).append((cidx, m))
        for (i, j), p in self.entries.items():
            for cidx, s in col_of.get(j, ()):
                for m, c in p.items():
                    r = index[(i, mono_mul(m, s))]
                    A[r, cidx] = K.add(A[r, cidx], c)
        return SliceResult(A, row_basis, col_basis, K)


@dataclass
class SliceResult:
    matrix: np.ndarray
    row_basis: list
    col_basis: list
    field: object

    @property
    def shape(self):
        return self.matrix.shape


def kernel_rank(matrix: np.ndarray, field) -> tuple[int, np.ndarray]:
    """Exact rank and kernel basis (columns) of a scalar matrix."""
    return linalg.nullspace(matrix, field)


def hilbert_numerator_dims(degrees, v: int) -> int:
    """dim of (+) R(-a)_v = sum of C(v-a+3, 3)."""
    return sum(dim_graded_piece(v - a) for a in degrees)
