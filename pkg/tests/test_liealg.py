"""Weight-graded nilpotent algebras: structure validation, centers,
complete subsets, restriction, centralizers, Jordan decomposition, and
the centralizer-family sampling check."""

from fractions import Fraction

import pytest

from orbitvar import models
from orbitvar.liealg import (
    AlgebraError,
    CenterNotTrivialError,
    CentralizerMapFamily,
    Weight,
    WeightedLieAlgebra,
    verify_condition4,
    weight_sort_key,
)
from orbitvar.linalg import Matrix

A2 = models.borel_nilradical_a2()
A3 = models.borel_nilradical_a3()
HEIS = models.heisenberg_3()


def F(*cs):
    return tuple(Fraction(c) for c in cs)


def check_map(alg):
    return {name: (ok, detail) for name, ok, detail in alg.validate()}


class TestWeight:
    def test_evaluation_and_height(self):
        w = Weight(F(1, 2))
        assert w(F(3, -1)) == 1
        assert w.height() == 3

    def test_proportionality(self):
        assert Weight(F(1, 0)).proportional_to(Weight(F(2, 0)))
        assert not Weight(F(1, 0)).proportional_to(Weight(F(1, 1)))

    def test_sort_key_orders_by_height(self):
        ws = [Weight(F(1, 1)), Weight(F(0, 1)), Weight(F(1, 0))]
        assert sorted(ws, key=weight_sort_key)[-1] == Weight(F(1, 1))


class TestValidate:
    def test_builtins_are_valid(self):
        for name in ("borel-nilradical-A2", "borel-nilradical-A3", "heisenberg-3",
                     "abelian:3", "sl2-borel"):
            assert models.builtin(name).is_valid(), name

    def test_zero_weight_flagged(self):
        alg = WeightedLieAlgebra.build(2, ["x"], {"x": [0, 0]}, [])
        assert not check_map(alg)["weights-nonzero"][0]

    def test_repeated_weight_flagged(self):
        alg = WeightedLieAlgebra.build(2, ["x", "y"], {"x": [1, 0], "y": [1, 0]}, [])
        assert not check_map(alg)["multiplicity-one"][0]

    def test_proportional_weights_flagged(self):
        alg = WeightedLieAlgebra.build(2, ["x", "y"], {"x": [1, 0], "y": [2, 0]}, [])
        assert not check_map(alg)["no-proportional-weights"][0]

    def test_off_grade_bracket_flagged(self):
        alg = WeightedLieAlgebra.build(
            2,
            ["x", "y", "z"],
            {"x": [1, 0], "y": [0, 1], "z": [2, 1]},
            [("x", "y", {"z": 1})],
        )
        assert not check_map(alg)["grading"][0]

    def test_jacobi_failure_flagged(self):
        # two brackets that cannot coexist: [x,y]=w and [x,w]=y breaks
        # grading and jacobi; check jacobi on an honest grading instead
        alg = WeightedLieAlgebra.build(
            3,
            ["x", "y", "z", "xy", "yz", "xyz"],
            {
                "x": [1, 0, 0],
                "y": [0, 1, 0],
                "z": [0, 0, 1],
                "xy": [1, 1, 0],
                "yz": [0, 1, 1],
                "xyz": [1, 1, 1],
            },
            [
                ("x", "y", {"xy": 1}),
                ("y", "z", {"yz": 1}),
                ("x", "yz", {"xyz": 1}),
                ("xy", "z", {"xyz": -1}),  # wrong sign relative to jacobi
            ],
        )
        cm = check_map(alg)
        assert cm["grading"][0]
        assert not cm["jacobi"][0]

    def test_classification_reports_center(self):
        assert "zero" in check_map(A2)["classification"][1]
        single = WeightedLieAlgebra.build(2, ["x"], {"x": [1, 1]}, [])
        assert "dimension 1" in check_map(single)["classification"][1]


class TestCenter:
    def test_trivial_centers(self):
        for alg in (A2, A3, HEIS):
            assert alg.center().dim == 0

    def test_weight_rank(self):
        assert A2.center().weight_rank == 2
        assert A3.center().weight_rank == 3

    def test_nontrivial_center_is_weight_kernel(self):
        alg = WeightedLieAlgebra.build(2, ["x"], {"x": [1, 1]}, [])
        c = alg.center()
        assert c.dim == 1
        t = c.basis.row(0)
        assert alg.weights[0](t) == 0


class TestTorusStructure:
    def test_lambda_of(self):
        assert A2.lambda_of(F(1, 1, 0, 0, 0)) == ()
        assert A2.lambda_of(F(1, -1, 0, 0, 0)) == (2,)
        assert A2.lambda_of(F(0, 1, 0, 0, 0)) == (0,)
        with pytest.raises(AlgebraError):
            A2.lambda_of(F(1, 0, 1, 0, 0))

    def test_complete_subsets_a2(self):
        assert A2.complete_subsets() == [(), (0,), (0, 1, 2), (1,), (2,)]

    def test_complete_subsets_are_lambda_images(self):
        # each complete subset arises as lambda_of(s) for its kernel
        for alg in (A2, A3):
            for sub in alg.complete_subsets():
                ker = alg.torus_kernel([alg.weights[i] for i in sub])
                got = {
                    i
                    for i, w in enumerate(alg.weights)
                    if all(w(ker.row(r)) == 0 for r in range(ker.rows))
                }
                assert got == set(sub)

    def test_centralizer_in_a(self):
        assert A2.centralizer_in_a((0, 2))
        assert A2.centralizer_in_a((1, 2))
        assert not A2.centralizer_in_a((0, 1))


class TestRestrict:
    def test_full_subset_recovers_algebra(self):
        sub, degenerate = A2.restrict((0, 1, 2))
        assert not degenerate
        assert sub.t_dim == 2 and sub.n == 3
        assert sub.is_valid()
        assert sub.pair_bracket(0, 1) == F(0, 0, 1)

    def test_singleton_subset(self):
        sub, degenerate = A2.restrict((2,))
        assert not degenerate
        assert sub.t_dim == 1 and sub.n == 1
        assert sub.is_valid()

    def test_empty_subset_degenerates(self):
        sub, degenerate = A2.restrict(())
        assert degenerate
        assert sub.dim == 0

    def test_incomplete_subset_rejected(self):
        with pytest.raises(AlgebraError):
            A3.restrict((0, 1))

    def test_dimension_inequality(self):
        # restricted nilpotent rank never exceeds the ambient gap n - d#
        for alg in (A2, A3):
            gap = alg.n - alg.center().weight_rank
            for sub in alg.complete_subsets():
                if not sub:
                    continue
                r, _ = alg.restrict(sub)
                assert r.n - r.center().weight_rank <= gap


class TestCentralizer:
    def test_regular_torus_element(self):
        cent = A2.centralizer(F(1, 1, 0, 0, 0))
        assert cent.rows == 2
        assert A2.regular_test(F(1, 1, 0, 0, 0))

    def test_singular_torus_element(self):
        cent = A2.centralizer(F(1, -1, 0, 0, 0))
        assert cent.rows == 3
        assert not A2.regular_test(F(1, -1, 0, 0, 0))

    def test_nilpotent_element_not_regular(self):
        assert not A2.regular_test(F(0, 0, 1, 0, 0))


class TestJordan:
    def test_torus_element_is_semisimple(self):
        s, n = A2.jordan_decompose(F(1, 2, 0, 0, 0))
        assert s == F(1, 2, 0, 0, 0) and n == F(0, 0, 0, 0, 0)

    def test_weight_vector_is_nilpotent(self):
        s, n = A2.jordan_decompose(F(0, 0, 1, 0, 0))
        assert s == F(0, 0, 0, 0, 0) and n == F(0, 0, 1, 0, 0)

    def test_commuting_mixture_splits(self):
        # (1,1)(t1 - t2) = 0, so x_ab commutes with t1 - t2
        s, n = A2.jordan_decompose(F(1, -1, 0, 0, 1))
        assert s == F(1, -1, 0, 0, 0) and n == F(0, 0, 0, 0, 1)

    def test_conjugate_of_torus_is_semisimple(self):
        # t1 + t2 + x_a is exp(ad x_a)-conjugate to t1 + t2
        x = F(1, 1, 1, 0, 0)
        s, n = A2.jordan_decompose(x)
        assert s == x and n == F(0, 0, 0, 0, 0)

    def test_parts_commute_and_sum(self):
        x = F(2, -1, 3, 1, -2)
        s, n = A2.jordan_decompose(x)
        assert tuple(a + b for a, b in zip(s, n)) == x
        assert all(c == 0 for c in A2.bracket(s, n))
        # the middle weight vanishes on (1, 0, 1): that component is nilpotent
        s3, n3 = A3.jordan_decompose(F(1, 0, 1, 0, 2, 0, 0, 0, 0))
        assert s3 == F(1, 0, 1, 0, 0, 0, 0, 0, 0)
        assert n3 == F(0, 0, 0, 0, 2, 0, 0, 0, 0)

    def test_center_obstruction(self):
        alg = WeightedLieAlgebra.build(2, ["x"], {"x": [1, 1]}, [])
        with pytest.raises(CenterNotTrivialError):
            alg.jordan_decompose(F(1, 0, 1))


class TestCondition4:
    def test_identity_family_on_sl2_borel(self):
        fam = models.centralizer_family("sl2-borel")
        ok, msg = verify_condition4(fam, samples=10, seed=0)
        assert ok, msg

    def test_coordinate_family_on_abelian(self):
        fam = models.centralizer_family("abelian:2")
        ok, msg = verify_condition4(fam, samples=10, seed=0)
        assert ok, msg

    def test_wrong_arity_rejected(self):
        alg = models.abelian(2)
        fam = CentralizerMapFamily.from_callables(alg, [lambda c: list(c)])
        ok, msg = verify_condition4(fam, samples=5)
        assert not ok and "expected" in msg

    def test_duplicate_maps_rejected(self):
        alg = models.abelian(2)
        fam = CentralizerMapFamily.from_callables(
            alg, [lambda c: list(c), lambda c: list(c)]
        )
        ok, _ = verify_condition4(fam, samples=5)
        assert not ok

    def test_noncommuting_map_rejected(self):
        alg = models.sl2_borel()
        fam = CentralizerMapFamily.from_callables(
            alg, [lambda c: [c[1], c[0]]]
        )
        ok, msg = verify_condition4(fam, samples=5)
        assert not ok and "commute" in msg


class TestSerialization:
    def test_roundtrip(self):
        for alg in (A2, A3, HEIS):
            again = WeightedLieAlgebra.from_json(alg.to_json())
            assert again == alg
            assert again.fingerprint() == alg.fingerprint()

    def test_fingerprints_distinguish(self):
        assert A2.fingerprint() != HEIS.fingerprint()

    def test_rationals_as_strings(self):
        alg = WeightedLieAlgebra.build(1, ["x"], {"x": [Fraction(1, 2)]}, [])
        data = alg.to_json()
        again = WeightedLieAlgebra.from_json(data)
        assert again.weights[0].coords == (Fraction(1, 2),)

    def test_malformed_rational_rejected(self):
        data = A2.to_json()
        data["weights"]["xa"] = ["1/0", "0"]
        with pytest.raises((AlgebraError, ZeroDivisionError)):
            WeightedLieAlgebra.from_json(data)


class TestBracket:
    def test_bilinearity_sampled(self):
        import random

        rng = random.Random(8)
        for alg in (A2, A3):
            for _ in range(10):
                x = [Fraction(rng.randint(-3, 3)) for _ in range(alg.dim)]
                y = [Fraction(rng.randint(-3, 3)) for _ in range(alg.dim)]
                z = [Fraction(rng.randint(-3, 3)) for _ in range(alg.dim)]
                lhs = alg.bracket([a + b for a, b in zip(x, y)], z)
                rhs = [
                    a + b for a, b in zip(alg.bracket(x, z), alg.bracket(y, z))
                ]
                assert list(lhs) == rhs
                assert list(alg.bracket(x, x)) == [Fraction(0)] * alg.dim

    def test_ad_matches_bracket(self):
        x = F(1, 2, 3, -1, 0)
        adx = A2.ad(x)
        y = F(0, 1, 1, 1, 1)
        assert adx.apply(y) == A2.bracket(x, y)

    def test_torus_acts_diagonally(self):
        t = F(3, -2, 0, 0, 0)
        for i, w in enumerate(A2.weights):
            got = A2.bracket(t, A2.weight_vector(i))
            expect = tuple(
                w(t[:2]) * c for c in A2.weight_vector(i)
            )
            assert got == expect
