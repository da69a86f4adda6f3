"""Orbit-closure geometry in the Grassmannian Gr(r, d).

The group generated by the exponentials of ad a moves the torus t
around; this module computes that action exactly, takes curve limits in
Plücker coordinates, enumerates fixed points, and certifies (or
refutes) membership of subspaces and point tuples in the closure.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from .liealg import (
    NotClosedUnderJordanError,
    Weight,
    WeightedLieAlgebra,
    weight_sort_key,
)
from .linalg import (
    Matrix,
    in_row_space,
    plucker,
    plucker_limit,
    plucker_to_basis,
    reduce_mod_rowspace,
    row_space_basis,
    rref,
)
from . import report as rep


class OrbitError(Exception):
    pass


class DimensionMismatchError(OrbitError):
    pass


class PreconditionFailedError(OrbitError):
    pass


class BadSliceError(OrbitError):
    pass


Z = sympy.Symbol("z")


@dataclass(frozen=True)
class Subspace:
    alg: WeightedLieAlgebra
    basis: Matrix  # canonical rref rows

    @staticmethod
    def from_rows(alg: WeightedLieAlgebra, rows: Sequence[Sequence]) -> "Subspace":
        return Subspace(alg, row_space_basis(Matrix.from_rows(rows)))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def contains(self, v: Sequence[Fraction]) -> bool:
        _, piv = rref(self.basis)
        return in_row_space(v, self.basis, piv)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(other.basis.row(i)) for i in range(other.dim))

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.basis == other.basis and self.alg is other.alg

    def __hash__(self):
        return hash(self.basis)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "basis": [[str(e) for e in row] for row in self.basis.entries],
        }


@dataclass(frozen=True)
class CurveSubspace:
    alg: WeightedLieAlgebra
    basis: Matrix  # entries are polynomials in Z

    def limit(self) -> Subspace:
        p = plucker_limit(plucker(self.basis), Z)
        return Subspace(self.alg, plucker_to_basis(p))

    def at(self, z_value: Fraction) -> Subspace:
        zr = sympy.Rational(z_value.numerator, z_value.denominator)
        rows = []
        for row in self.basis.entries:
            out = []
            for e in row:
                v = sympy.expand(e).subs(Z, zr) if not isinstance(e, Fraction) else e
                out.append(
                    v if isinstance(v, Fraction) else Fraction(int(sympy.numer(v)), int(sympy.denom(v)))
                )
            rows.append(out)
        return Subspace.from_rows(self.alg, rows)

    def to_json(self) -> dict:
        return {
            "dim": self.basis.rows,
            "basis": [[str(e) for e in row] for row in self.basis.entries],
        }


@dataclass(frozen=True)
class FixedPointRecord:
    subspace: Subspace
    r_v_set: tuple[int, ...]  # weight indices
    z_v: Subspace
    fixed_under: str  # "torus" or "group"
    witness: CurveSubspace

    def to_json(self) -> dict:
        alg = self.subspace.alg
        return {
            "subspace": self.subspace.to_json(),
            "weights": [alg.weights[i].as_strings() for i in self.r_v_set],
            "z_v_dim": self.z_v.dim,
            "fixed_under": self.fixed_under,
            "witness_curve": self.witness.to_json()["basis"],
        }


@dataclass(frozen=True)
class MultiPoint:
    points: tuple
    witness: Subspace | None


def torus_subspace(alg: WeightedLieAlgebra) -> Subspace:
    rows = [alg.basis_vector(i) for i in range(alg.t_dim)]
    return Subspace.from_rows(alg, rows)


def full_space(alg: WeightedLieAlgebra) -> Subspace:
    return Subspace.from_rows(alg, [alg.basis_vector(i) for i in range(alg.dim)])


def act(alg: WeightedLieAlgebra, word, v: Subspace):
    """Apply the product of exp(z_i ad x_{alpha_i}) left-to-right to V.
    Scalars may be Fractions; None means the shared formal parameter z."""
    from .linalg import exp_nilpotent

    g = Matrix.identity(alg.dim)
    formal = False
    for widx, scalar in word:
        adx = alg.ad_weight_vector(widx)
        if scalar is None:
            formal = True
            g = g @ exp_nilpotent(adx, Z)
        else:
            g = g @ exp_nilpotent(adx, Fraction(scalar))
    rows = [g.apply(v.basis.row(i)) for i in range(v.dim)]
    if formal:
        return CurveSubspace(alg, Matrix.from_rows(rows))
    return Subspace.from_rows(alg, rows)


def weight_index(alg: WeightedLieAlgebra, alpha: Weight) -> int:
    for i, w in enumerate(alg.weights):
        if w == alpha:
            return i
    raise OrbitError("weight not in the algebra")


def theta_alpha(alg: WeightedLieAlgebra, alpha: Weight, z) -> Subspace:
    """The curve z -> exp(z ad x_alpha)(t); z = None means the limit point
    at infinity, which is t_alpha + a^alpha."""
    i = weight_index(alg, alpha)
    t = torus_subspace(alg)
    if z is None:
        return act(alg, [(i, None)], t).limit()
    return act(alg, [(i, Fraction(z))], t)


def theta_curve(alg: WeightedLieAlgebra, alpha: Weight) -> CurveSubspace:
    return act(alg, [(weight_index(alg, alpha), None)], torus_subspace(alg))


def is_commutative_subalgebra(alg: WeightedLieAlgebra, v: Subspace) -> bool:
    for i in range(v.dim):
        for j in range(i + 1, v.dim):
            br = alg.bracket(v.basis.row(i), v.basis.row(j))
            if any(c != 0 for c in br):
                return False
    return True


def is_torus_stable(alg: WeightedLieAlgebra, v: Subspace) -> bool:
    for i in range(alg.t_dim):
        t = alg.basis_vector(i)
        for r in range(v.dim):
            if not v.contains(alg.bracket(t, v.basis.row(r))):
                return False
    return True


def is_ideal(alg: WeightedLieAlgebra, v: Subspace) -> bool:
    for k in range(alg.dim):
        e = alg.basis_vector(k)
        for r in range(v.dim):
            if not v.contains(alg.bracket(e, v.basis.row(r))):
                return False
    return True


def _ordered(alg: WeightedLieAlgebra, indices: Sequence[int]) -> list[int]:
    """Deterministic factor order: weight height, then coordinates."""
    return sorted(indices, key=lambda i: weight_sort_key(alg.weights[i]))


def _fixed_point_subspace(alg: WeightedLieAlgebra, subset: tuple[int, ...]) -> tuple[Subspace, Subspace]:
    ker = alg.torus_kernel([alg.weights[i] for i in subset])
    rows = [list(ker.row(r)) + [Fraction(0)] * alg.n for r in range(ker.rows)]
    rows += [alg.weight_vector(i) for i in subset]
    z_rows = [list(ker.row(r)) + [Fraction(0)] * alg.n for r in range(ker.rows)]
    z_v = Subspace.from_rows(alg, z_rows) if z_rows else Subspace(alg, Matrix.zero(0, alg.dim))
    return Subspace.from_rows(alg, rows), z_v


def torus_fixed_points(alg: WeightedLieAlgebra) -> list[FixedPointRecord]:
    """All torus-fixed points of the closure: independent abelian weight
    subsets S, each giving z_V + a_S with a verified witness-curve limit."""
    out = []
    for size in range(alg.n + 1):
        for subset in itertools.combinations(range(alg.n), size):
            ws = [alg.weights[i] for i in subset]
            from .linalg import rank

            if ws and rank(alg.weight_matrix(ws)) != len(ws):
                continue
            if not alg.centralizer_in_a(subset):
                continue
            v, z_v = _fixed_point_subspace(alg, subset)
            word = [(i, None) for i in _ordered(alg, subset)]
            witness = act(alg, word, torus_subspace(alg))
            if isinstance(witness, Subspace):  # empty word
                witness = CurveSubspace(alg, witness.basis)
            if subset:
                if witness.limit() != v:
                    raise OrbitError("witness curve limit mismatch")
            out.append(
                FixedPointRecord(
                    subspace=v, r_v_set=subset, z_v=z_v, fixed_under="torus", witness=witness
                )
            )
    return out


def group_fixed_points(alg: WeightedLieAlgebra) -> list[FixedPointRecord]:
    """Torus-fixed points that are ideals with central part equal to the
    center of the whole algebra."""
    z = alg.center()
    out = []
    for recd in torus_fixed_points(alg):
        if recd.z_v.dim != z.dim:
            continue
        if z.dim and not all(
            recd.z_v.contains(list(z.basis.row(r)) + [Fraction(0)] * alg.n)
            for r in range(z.basis.rows)
        ):
            continue
        if not is_ideal(alg, recd.subspace):
            continue
        out.append(
            FixedPointRecord(
                subspace=recd.subspace,
                r_v_set=recd.r_v_set,
                z_v=recd.z_v,
                fixed_under="group",
                witness=recd.witness,
            )
        )
    return out


def normalizer(alg: WeightedLieAlgebra, v: Subspace) -> Subspace:
    """{y : [y, V] included in V} by solving the linear residue system."""
    basis, piv = rref(v.basis)
    rows = []
    nonpiv = [c for c in range(alg.dim) if c not in piv]
    cols = []
    for k in range(alg.dim):
        resid = []
        for r in range(v.dim):
            red = reduce_mod_rowspace(alg.bracket(alg.basis_vector(k), v.basis.row(r)), basis, piv)
            resid.extend(red[c] for c in nonpiv)
        cols.append(resid)
    if not cols[0]:
        return full_space(alg)
    m = Matrix.from_rows([[cols[k][r] for k in range(alg.dim)] for r in range(len(cols[0]))])
    from .linalg import nullspace

    return Subspace(alg, nullspace(m))


def intersect(a: Subspace, b: Subspace) -> Subspace:
    if a.dim == 0 or b.dim == 0:
        return Subspace(a.alg, Matrix.zero(0, a.basis.cols))
    from .linalg import nullspace

    stacked = Matrix.from_rows(
        [
            [a.basis[i, c] for i in range(a.dim)] + [-b.basis[j, c] for j in range(b.dim)]
            for c in range(a.basis.cols)
        ]
    )
    ker = nullspace(stacked)
    rows = []
    for r in range(ker.rows):
        coefs = ker.row(r)[: a.dim]
        vec = [
            sum((coefs[i] * a.basis[i, c] for i in range(a.dim)), Fraction(0))
            for c in range(a.basis.cols)
        ]
        rows.append(vec)
    if not rows:
        return Subspace(a.alg, Matrix.zero(0, a.basis.cols))
    return Subspace.from_rows(a.alg, rows)


def a_subspace(alg: WeightedLieAlgebra) -> Subspace:
    return Subspace.from_rows(alg, [alg.weight_vector(i) for i in range(alg.n)])


@dataclass(frozen=True)
class BoundaryComponent:
    weight_idx: int
    base_point: Subspace
    orbit_dim: int

    def to_json(self, alg: WeightedLieAlgebra) -> dict:
        return {
            "weight": alg.weights[self.weight_idx].as_strings(),
            "base_point": self.base_point.to_json(),
            "orbit_dim": self.orbit_dim,
        }


def boundary_components(alg: WeightedLieAlgebra) -> list[BoundaryComponent]:
    """One component per weight: the closed group-orbit through
    V_alpha = t_alpha + a^alpha, with its orbit dimension."""
    if alg.center().dim != 0:
        raise PreconditionFailedError("boundary components need a trivial center")
    out = []
    for i in _ordered(alg, range(alg.n)):
        v_alpha = theta_alpha(alg, alg.weights[i], None)
        norm = normalizer(alg, v_alpha)
        stab = intersect(norm, a_subspace(alg))
        out.append(BoundaryComponent(i, v_alpha, alg.n - stab.dim))
    return out


# -- membership -------------------------------------------------------


@dataclass(frozen=True)
class MembershipVerdict:
    kind: str  # "orbit" | "limit" | "refuted" | "unknown"
    params: tuple = ()  # (weight index, Fraction) pairs for orbit verdicts
    witness: CurveSubspace | None = None
    reason: str = ""

    @property
    def certified(self) -> bool:
        return self.kind in ("orbit", "limit")

    def to_json(self, alg: WeightedLieAlgebra) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "orbit":
            out["params"] = [
                [alg.weights[i].as_strings(), str(c)] for i, c in self.params
            ]
        if self.witness is not None:
            out["witness_curve"] = self.witness.to_json()["basis"]
        if self.reason:
            out["reason"] = self.reason
        return out


def membership(alg: WeightedLieAlgebra, v: Subspace) -> MembershipVerdict:
    """Semi-decision for membership of V in the orbit closure.  Orbit
    certificates are found by peeling weight components in height order;
    limit certificates by matching graded fixed points.  Both are
    re-verified before being returned."""
    if v.dim != alg.t_dim:
        raise DimensionMismatchError(f"dim {v.dim} != {alg.t_dim}")
    if not is_commutative_subalgebra(alg, v):
        return MembershipVerdict("refuted", reason="not a commutative subalgebra")
    z = alg.center()
    if z.dim:
        for r in range(z.basis.rows):
            if not v.contains(list(z.basis.row(r)) + [Fraction(0)] * alg.n):
                return MembershipVerdict("refuted", reason="does not contain the center")
    if z.dim == 0:
        try:
            for r in range(v.dim):
                s, _ = alg.jordan_decompose(v.basis.row(r))
                if not v.contains(s):
                    return MembershipVerdict(
                        "refuted", reason="semisimple part of a member escapes"
                    )
        except NotClosedUnderJordanError:
            return MembershipVerdict("refuted", reason="not closed under jordan parts")
    _, piv = rref(v.basis)
    if piv == tuple(range(alg.t_dim)):
        params = _peel_orbit(alg, v)
        if params is not None:
            word = [(i, c) for i, c in params]
            if act(alg, word, torus_subspace(alg)) == v:
                return MembershipVerdict("orbit", params=tuple(params))
        return MembershipVerdict("unknown", reason="torus-graph subspace without orbit certificate")
    if is_torus_stable(alg, v):
        for recd in torus_fixed_points(alg):
            if recd.subspace == v:
                return MembershipVerdict("limit", witness=recd.witness)
        return MembershipVerdict(
            "unknown", reason="graded but not of fixed-point shape"
        )
    return MembershipVerdict("unknown", reason="no certificate route applies")


def _peel_orbit(alg: WeightedLieAlgebra, v: Subspace):
    """For V spanned by t_i + phi(t_i): strip one weight component per
    exponential factor, lowest height first.  Returns the word or None."""
    rows = [list(v.basis.row(i)) for i in range(v.dim)]
    applied: list[tuple[int, Fraction]] = []
    for k in _ordered(alg, range(alg.n)):
        w = alg.weights[k]
        col = alg.t_dim + k
        coefs = [rows[i][col] for i in range(len(rows))]
        wvals = [w(rows[i][: alg.t_dim]) for i in range(len(rows))]
        if all(c == 0 for c in coefs):
            continue
        # need coefs proportional to the weight values: c_i = z * w(t_i)
        zc = None
        for c, wv in zip(coefs, wvals):
            if wv != 0:
                zc = c / wv
                break
        if zc is None:
            return None
        if any(c != zc * wv for c, wv in zip(coefs, wvals)):
            return None
        # E(z) t = t - z w(t) x, so E(zc) clears the column and the
        # inverse factor E(-zc) belongs to the certificate word
        g = _exp_matrix(alg, k, zc)
        rows = [list(g.apply(r)) for r in rows]
        applied.append((k, -zc))
    if any(any(r[alg.t_dim + j] != 0 for j in range(alg.n)) for r in rows):
        return None
    # exp(-z_m)...exp(-z_1) V = t, so V = exp(z_1)...exp(z_m) t: the word
    # keeps the peel order with the signs already flipped back
    return applied


def _exp_matrix(alg: WeightedLieAlgebra, widx: int, scalar: Fraction) -> Matrix:
    from .linalg import exp_nilpotent

    return exp_nilpotent(alg.ad_weight_vector(widx), Fraction(scalar))


# -- property (P) consequences ----------------------------------------


def centralizer_of_torus_element(alg: WeightedLieAlgebra, s: Sequence[Fraction]) -> Subspace:
    rows = [alg.basis_vector(i) for i in range(alg.t_dim)]
    for i in alg.lambda_of(s):
        rows.append(alg.weight_vector(i))
    return Subspace.from_rows(alg, rows)


def property_P_consequences(
    alg: WeightedLieAlgebra, s: Sequence[Fraction], v: Subspace
) -> rep.VerificationReport:
    """Check what membership in the closure of the s-centralizer orbit
    of t implies for V: center containment, and a witness curve through
    the centralizer when V is graded."""
    out = rep.VerificationReport("property-p", alg.fingerprint())
    cent = centralizer_of_torus_element(alg, s)
    if not cent.contains_subspace(v):
        raise PreconditionFailedError("V is not inside the centralizer of s")
    lam = alg.lambda_of(s)
    center_rows = list(alg.torus_kernel([alg.weights[i] for i in lam]).entries)
    ok = all(v.contains(list(r) + [Fraction(0)] * alg.n) for r in center_rows)
    out.add(
        "center-containment",
        rep.PROVEN if ok else rep.REFUTED,
        "the center of the centralizer of s lies inside V",
        details={"lambda": [alg.weights[i].as_strings() for i in lam]},
    )
    if not ok:
        return out
    if is_torus_stable(alg, v):
        subset = tuple(
            i for i in range(alg.n) if v.contains(alg.weight_vector(i))
        )
        if all(i in lam for i in subset):
            word = [(i, None) for i in _ordered(alg, subset)]
            witness = act(alg, word, torus_subspace(alg))
            if isinstance(witness, Subspace):
                witness = CurveSubspace(alg, witness.basis)
            lim = witness.limit() if subset else torus_subspace(alg)
            if lim == v:
                out.add(
                    "witness-curve",
                    rep.PROVEN,
                    "a curve inside the centralizer of s degenerates to V",
                    witness=witness.to_json()["basis"],
                )
                return out
    out.add(
        "witness-curve",
        rep.CONSEQUENCE_CHECKED,
        "no constructive witness; necessary conditions hold",
    )
    return out


# -- biggest torus, multipoints, pair relation -------------------------


def biggest_torus(alg: WeightedLieAlgebra, v: Subspace) -> tuple[int, ...]:
    """Weight subset L with torus kernel t_L conjugate to the largest
    torus inside V, found from the semisimple parts of a basis of V."""
    if alg.center().dim != 0:
        raise PreconditionFailedError("biggest torus needs a trivial center")
    s_parts = []
    for r in range(v.dim):
        s, _ = alg.jordan_decompose(v.basis.row(r))
        if not v.contains(s):
            raise NotClosedUnderJordanError(
                "semisimple part of a basis element escapes V"
            )
        s_parts.append(s)
    if not s_parts:
        return tuple(range(alg.n))
    span = row_space_basis(Matrix.from_rows(s_parts))
    proj = row_space_basis(
        Matrix.from_rows([list(span.row(r))[: alg.t_dim] for r in range(span.rows)])
    ) if span.rows else Matrix.zero(0, alg.t_dim)
    lam = tuple(
        i
        for i, w in enumerate(alg.weights)
        if all(w(proj.row(r)) == 0 for r in range(proj.rows))
    )
    ker = alg.torus_kernel([alg.weights[i] for i in lam])
    if ker.rows != span.rows:
        raise OrbitError("semisimple span does not match a torus kernel dimension")
    return lam


def multipoint_membership(alg: WeightedLieAlgebra, points: Sequence[Sequence[Fraction]]) -> tuple[str, MultiPoint]:
    """Do the given points lie in a common element of the closure?
    Routes through the centralizer of a regular point when one exists."""
    pts = tuple(tuple(Fraction(c) for c in p) for p in points)
    if not pts:
        raise OrbitError("need at least one point")
    for a, b in itertools.combinations(pts, 2):
        if any(c != 0 for c in alg.bracket(a, b)):
            return "refuted", MultiPoint(pts, None)
    for p in pts:
        if alg.regular_test(p):
            cent = Subspace(alg, alg.centralizer(p))
            if all(cent.contains(q) for q in pts):
                return "proven", MultiPoint(pts, cent)
            return "refuted", MultiPoint(pts, None)
    for recd in torus_fixed_points(alg):
        if all(recd.subspace.contains(p) for p in pts):
            return "proven", MultiPoint(pts, recd.subspace)
    return "unknown", MultiPoint(pts, None)


def _t_alpha_prime_sample(alg: WeightedLieAlgebra, aidx: int, rng: random.Random):
    """Small-integer element of the kernel of alpha on which every other
    weight is nonzero."""
    ker = alg.torus_kernel([alg.weights[aidx]])
    for _ in range(1000):
        coefs = [Fraction(rng.randint(-6, 6)) for _ in range(ker.rows)]
        t = [
            sum((coefs[r] * ker[r, c] for r in range(ker.rows)), Fraction(0))
            for c in range(alg.t_dim)
        ]
        if all(
            alg.weights[j](t) != 0 for j in range(alg.n) if j != aidx
        ):
            return tuple(t) + tuple(Fraction(0) for _ in range(alg.n))
    raise BadSliceError("could not sample the punctured kernel slice")


def verify_pair_relation(
    alg: WeightedLieAlgebra,
    alpha: Weight,
    samples: int = 100,
    seed: int = 0,
    x0=None,
    y0=None,
) -> rep.VerificationReport:
    """Sample pairs on the two affine slices attached to alpha and check
    that common-subspace membership is equivalent to the vanishing of
    the 2x2 coupling determinant between the alpha- and torus-components."""
    out = rep.VerificationReport("pair-relation", alg.fingerprint(), seed=seed)
    aidx = weight_index(alg, alpha)
    rng = random.Random(seed)
    d = alg.t_dim

    def check_slice(pt):
        tpart = alg.torus_part(pt)
        if alpha(tpart) != 0 or any(
            alg.weights[j](tpart) == 0 for j in range(alg.n) if j != aidx
        ):
            raise BadSliceError("base point is not in the punctured kernel of alpha")

    if x0 is None:
        x0 = _t_alpha_prime_sample(alg, aidx, rng)
    else:
        x0 = tuple(Fraction(c) for c in x0)
        check_slice(x0)
    if y0 is None:
        y0 = _t_alpha_prime_sample(alg, aidx, rng)
    else:
        y0 = tuple(Fraction(c) for c in y0)
        check_slice(y0)

    # h with alpha(h) = 1
    pivot = next(i for i, c in enumerate(alpha.coords) if c != 0)
    h = [Fraction(0)] * alg.dim
    h[pivot] = Fraction(1) / alpha.coords[pivot]
    xa = alg.weight_vector(aidx)

    def slice_point(base, s, c):
        return tuple(
            b + s * hh + c * xx for b, hh, xx in zip(base, h, xa)
        )

    decided = 0
    skipped = 0
    bad = []
    while decided < samples:
        s1, s2 = Fraction(rng.randint(-4, 4)), Fraction(rng.randint(-4, 4))
        c1, c2 = Fraction(rng.randint(1, 4)), Fraction(rng.randint(1, 4))
        if rng.random() < 0.5:
            c1 = -c1
        if rng.random() < 0.5:
            c2 = -c2
        x = slice_point(x0, s1, c1)
        y = slice_point(y0, s2, c2)
        expr = c2 * s1 - c1 * s2  # x_{-a}(y) a(x) - x_{-a}(x) a(y)
        verdict, _ = multipoint_membership(alg, [x, y])
        if verdict == "unknown":
            skipped += 1
            if skipped > 50 * samples:
                break
            continue
        decided += 1
        expected = "proven" if expr == 0 else "refuted"
        if verdict != expected:
            bad.append({"x": [str(v) for v in x], "y": [str(v) for v in y], "expr": str(expr)})
    verdict = rep.REFUTED if bad else (rep.SAMPLED if decided >= samples else rep.UNKNOWN)
    out.add(
        "pair-relation",
        verdict,
        "two slice points share a subspace in the closure exactly when the coupling determinant vanishes",
        details={
            "weight": alpha.as_strings(),
            "samples": decided,
            "skipped": skipped,
            "counterexamples": bad,
        },
    )
    return out
