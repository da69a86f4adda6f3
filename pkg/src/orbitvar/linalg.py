"""Exact linear algebra over the rationals and over polynomial rings.

Matrices carry either fractions.Fraction entries (points) or sympy
expressions in a curve parameter (one-parameter families).  All
elimination is done over Fraction; polynomial matrices only get
multiplied and have minors taken, so no division in the polynomial
ring is ever needed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy


class LinAlgError(Exception):
    pass


class NotNilpotentError(LinAlgError):
    pass


class NotDecomposableError(LinAlgError):
    pass


class RankDeficientError(LinAlgError):
    pass


def _norm(e):
    """Canonicalize an entry: Fractions pass through, sympy gets expanded."""
    if isinstance(e, Fraction):
        return e
    if isinstance(e, int):
        return Fraction(e)
    return sympy.expand(e)


def _is_zero(e) -> bool:
    if isinstance(e, Fraction):
        return e == 0
    return sympy.expand(e) == 0


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple  # row-major tuple of tuples

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "Matrix":
        data = tuple(tuple(_norm(e) for e in row) for row in rows)
        r = len(data)
        c = len(data[0]) if r else 0
        if any(len(row) != c for row in data):
            raise LinAlgError("ragged rows")
        return Matrix(r, c, data)

    @staticmethod
    def zero(rows: int, cols: int) -> "Matrix":
        z = Fraction(0)
        return Matrix(rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix.from_rows(
            [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
        )

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def col(self, j: int) -> tuple:
        return tuple(self.entries[i][j] for i in range(self.rows))

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise LinAlgError("shape mismatch")
        return Matrix.from_rows(
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "Matrix":
        return Matrix.from_rows(
            [[c * self.entries[i][j] for j in range(self.cols)] for i in range(self.rows)]
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinAlgError("shape mismatch")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = self.entries[i][0] * other.entries[0][j]
                for k in range(1, self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return Matrix.from_rows(out)

    def transpose(self) -> "Matrix":
        return Matrix.from_rows([self.col(j) for j in range(self.cols)])

    def is_zero(self) -> bool:
        return all(_is_zero(e) for row in self.entries for e in row)

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise LinAlgError("shape mismatch")
        return tuple(
            _norm(sum((self.entries[i][j] * v[j] for j in range(self.cols)), Fraction(0)))
            for i in range(self.rows)
        )


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form over Fraction. Returns (rref, pivot columns)."""
    rows = [list(r) for r in m.entries]
    nr, nc = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        pr = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [e * inv for e in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return Matrix.from_rows(rows) if rows else m, tuple(pivots)


def row_space_basis(m: Matrix) -> Matrix:
    """Canonical basis (nonzero rref rows) of the row space."""
    rr, piv = rref(m)
    return Matrix.from_rows([rr.row(i) for i in range(len(piv))]) if piv else Matrix.zero(0, m.cols)


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def nullspace(m: Matrix) -> Matrix:
    """Canonical basis of the right kernel (rows of the result)."""
    rr, piv = rref(m)
    free = [j for j in range(m.cols) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, p in enumerate(piv):
            v[p] = -rr[r, f]
        basis.append(v)
    out = Matrix.from_rows(basis) if basis else Matrix.zero(0, m.cols)
    return row_space_basis(out) if basis else out


def solve(a: Matrix, b: Sequence) -> tuple | None:
    """One solution x of A x = b, or None if inconsistent."""
    aug = Matrix.from_rows([list(a.row(i)) + [b[i]] for i in range(a.rows)])
    rr, piv = rref(aug)
    if a.cols in piv:
        return None
    x = [Fraction(0)] * a.cols
    for r, p in enumerate(piv):
        x[p] = rr[r, a.cols]
    return tuple(x)


def reduce_mod_rowspace(v: Sequence, basis: Matrix, pivots: tuple[int, ...]) -> tuple:
    """Residue of v after clearing pivot coordinates against an rref basis."""
    w = list(v)
    for r, p in enumerate(pivots):
        if w[p] != 0:
            f = w[p]
            row = basis.row(r)
            w = [a - f * b for a, b in zip(w, row)]
    return tuple(w)


def in_row_space(v: Sequence, basis: Matrix, pivots: tuple[int, ...]) -> bool:
    return all(e == 0 for e in reduce_mod_rowspace(v, basis, pivots))


def det(m: Matrix):
    """Determinant by expansion over column subsets; no division, so it
    works for polynomial entries too."""
    if m.rows != m.cols:
        raise LinAlgError("not square")
    n = m.rows
    if n == 0:
        return Fraction(1)
    # memo[(i, cols)] = det of rows i.. on the given column tuple
    memo: dict = {}

    def go(i: int, cols: tuple[int, ...]):
        if i == n:
            return Fraction(1)
        key = cols
        if key in memo:
            return memo[key]
        acc = None
        for k, c in enumerate(cols):
            e = m[i, c]
            if _is_zero(e):
                continue
            sub = go(i + 1, cols[:k] + cols[k + 1 :])
            term = e * sub if k % 2 == 0 else -e * sub
            acc = term if acc is None else acc + term
        acc = Fraction(0) if acc is None else _norm(acc)
        memo[key] = acc
        return acc

    return go(0, tuple(range(n)))


def exp_nilpotent(m: Matrix, z) -> Matrix:
    """exp(z*m) for nilpotent m; z a Fraction or a sympy symbol."""
    n = m.rows
    if m.cols != n:
        raise LinAlgError("not square")
    terms = [Matrix.identity(n)]
    power = Matrix.identity(n)
    for k in range(1, n + 1):
        power = power @ m
        if power.is_zero():
            break
        terms.append(power.scale(Fraction(1, math.factorial(k))))
    else:
        raise NotNilpotentError("matrix is not nilpotent")
    acc = terms[0]
    zk = 1
    for k in range(1, len(terms)):
        zk = zk * z
        acc = acc + terms[k].scale(zk)
    return acc


def index_subsets(n: int, d: int) -> list[tuple[int, ...]]:
    """Plücker coordinate index order: size-d subsets of range(n), lex."""
    return list(itertools.combinations(range(n), d))


@dataclass(frozen=True)
class PluckerVector:
    ambient: int
    dim: int
    coords: tuple  # indexed by index_subsets(ambient, dim)

    def subsets(self) -> list[tuple[int, ...]]:
        return index_subsets(self.ambient, self.dim)

    def coord(self, subset: Sequence[int]):
        """Antisymmetric lookup: arbitrary index tuple, with sign."""
        t = tuple(subset)
        if len(set(t)) != len(t):
            return Fraction(0)
        order = tuple(sorted(t))
        sign = _perm_sign(t)
        idx = self.subsets().index(order)
        c = self.coords[idx]
        return c if sign == 1 else -c

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coords)


def _perm_sign(t: Sequence[int]) -> int:
    sign = 1
    t = list(t)
    for i in range(len(t)):
        for j in range(i + 1, len(t)):
            if t[i] > t[j]:
                sign = -sign
    return sign


def plucker(basis: Matrix) -> PluckerVector:
    """Plücker coordinates (maximal minors) of a d x n basis matrix."""
    d, n = basis.rows, basis.cols
    coords = []
    for cols in index_subsets(n, d):
        sub = Matrix.from_rows([[basis[i, c] for c in cols] for i in range(d)])
        coords.append(det(sub))
    if all(_is_zero(c) for c in coords):
        raise RankDeficientError("basis matrix does not have full row rank")
    return PluckerVector(n, d, tuple(coords))


def normalize_plucker(p: PluckerVector) -> PluckerVector:
    """Scale so entries are coprime integers and the first nonzero is positive."""
    if p.is_zero():
        raise LinAlgError("zero Plücker vector")
    fracs = [Fraction(c) for c in p.coords]
    den = math.lcm(*(f.denominator for f in fracs))
    ints = [f * den for f in fracs]
    g = math.gcd(*(abs(int(v)) for v in ints))
    ints = [Fraction(int(v) // g) for v in ints]
    first = next(v for v in ints if v != 0)
    if first < 0:
        ints = [-v for v in ints]
    return PluckerVector(p.ambient, p.dim, tuple(ints))


def plucker_eq(p: PluckerVector, q: PluckerVector) -> bool:
    return normalize_plucker(p) == normalize_plucker(q)


def plucker_limit(p: PluckerVector, z: sympy.Symbol) -> PluckerVector:
    """Limit point in the Grassmannian as z -> infinity: top-degree
    coefficients of the polynomial coordinate vector, normalized."""
    polys = [sympy.Poly(sympy.expand(c), z) for c in p.coords]
    if all(pp.is_zero for pp in polys):
        raise LinAlgError("zero curve")
    top = max(pp.degree() for pp in polys if not pp.is_zero)
    coeffs = []
    for pp in polys:
        if pp.is_zero or pp.degree() < top:
            coeffs.append(Fraction(0))
        else:
            c = pp.LC()
            coeffs.append(Fraction(int(sympy.numer(c)), int(sympy.denom(c))))
    return normalize_plucker(PluckerVector(p.ambient, p.dim, tuple(coeffs)))


def plucker_to_basis(p: PluckerVector) -> Matrix:
    """Reconstruct a basis (rref rows) from a decomposable Plücker vector."""
    p = normalize_plucker(p)
    subs = p.subsets()
    j0 = next(i for i, c in enumerate(p.coords) if c != 0)
    J = subs[j0]
    rows = []
    for pos in range(p.dim):
        row = []
        for k in range(p.ambient):
            t = list(J)
            t[pos] = k
            row.append(p.coord(t))
        rows.append(row)
    basis = row_space_basis(Matrix.from_rows(rows))
    if basis.rows != p.dim:
        raise NotDecomposableError("Plücker vector is not decomposable")
    if not plucker_eq(plucker(basis), p):
        raise NotDecomposableError("Plücker vector is not decomposable")
    return basis
