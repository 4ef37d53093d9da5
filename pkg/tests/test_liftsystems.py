"""Lift-system validation, psi derivation, and the map constructors."""

import random
from fractions import Fraction

import pytest

from nvalued.liftsystems import (
    AmbiguousLiftError,
    CollisionError,
    RowsNotCongruentError,
    lift_system,
    make_circle,
    make_linear,
    make_split,
    psi_of,
    validate,
)
from nvalued.semidirect import DimensionMismatchError, Permutation, SemidirectElement

from conftest import random_system, torus3_system


class TestValidateTorus3:
    def test_generator_images(self):
        data = validate(torus3_system())
        e1, e2 = data.generator_images
        # psi(e1): the odd-z1 column of the deck table
        assert e1.translations == ((0, 0), (1, 0), (-1, 0))
        assert e1.perm == Permutation((2, 1, 3))
        # psi(e2): translations (0,-1) everywhere, trivial permutation
        assert e2.translations == ((0, -1), (0, -1), (0, -1))
        assert e2.perm.is_identity()

    def test_psi_of_even_vector(self):
        data = validate(torus3_system())
        el = psi_of(data, (2, 0))
        assert el.translations == ((1, 0), (1, 0), (-2, 0))
        assert el.perm.is_identity()

    def test_psi_of_zero(self):
        data = validate(torus3_system())
        assert psi_of(data, (0, 0)) == SemidirectElement.identity(3, 2)

    def test_psi_wrong_length(self):
        data = validate(torus3_system())
        with pytest.raises(DimensionMismatchError):
            psi_of(data, (1, 0, 0))


class TestValidateGeneral:
    def test_constant_map(self):
        sys = lift_system([([[0, 0], [0, 0]], [0, 0])])
        data = validate(sys)
        for img in data.generator_images:
            assert img.perm.is_identity()
            assert img.translations == ((0, 0),)

    def test_identical_factors_collide(self):
        sys = lift_system([([[2]], [0]), ([[2]], [0])])
        with pytest.raises(CollisionError):
            validate(sys)

    def test_invertible_difference_collides(self):
        # branch difference t + 1/2 hits Z at t = 1/2
        sys = lift_system([([[2]], [0]), ([[3]], [Fraction(1, 2)])])
        with pytest.raises(CollisionError):
            validate(sys)

    def test_singular_difference_no_collision(self):
        # difference matrix [[0,0],[1,0]] has column space spanned by (0,1):
        # offset difference (1/2, anything) stays off Z^2
        sys = lift_system(
            [
                ([[1, 0], [0, 1]], [0, 0]),
                ([[1, 0], [1, 1]], [Fraction(1, 2), Fraction(1, 3)]),
            ]
        )
        data = validate(sys)
        assert data.n == 2

    def test_psi_homomorphism_on_random_systems(self, rng):
        for _ in range(60):
            sys = random_system(rng)
            data = validate(sys)
            q = data.q
            for _ in range(4):
                z = tuple(rng.randint(-5, 5) for _ in range(q))
                w = tuple(rng.randint(-5, 5) for _ in range(q))
                zw = tuple(a + b for a, b in zip(z, w))
                assert psi_of(data, zw) == psi_of(data, z).compose(psi_of(data, w))
                assert psi_of(data, zw) == psi_of(data, w).compose(psi_of(data, z))


class TestMakeLinear:
    def test_circle_lift_form(self):
        sys = make_linear(3, [[1]])
        assert [f.linear[0][0] for f in sys.factors] == [Fraction(1, 3)] * 3
        assert [f.offset[0] for f in sys.factors] == [
            Fraction(1, 3),
            Fraction(2, 3),
            Fraction(1),
        ]

    def test_single_valued(self):
        sys = make_linear(1, [[5, 1], [1, 5]])
        assert sys.n == 1
        assert sys.factors[0].linear[0][0] == 5

    def test_rows_not_congruent(self):
        with pytest.raises(RowsNotCongruentError):
            make_linear(2, [[1, 0], [0, 1]])

    def test_translation_parts_integral(self, rng):
        # rows congruent mod n is exactly what makes psi integral
        from conftest import random_congruent_matrix

        for _ in range(25):
            n = rng.randint(1, 4)
            q = rng.randint(1, 3)
            rows = random_congruent_matrix(rng, n, q)
            sys = make_linear(n, rows)
            data = validate(sys)
            assert all(f.linear == sys.factors[0].linear for f in sys.factors)


class TestMakeCircle:
    def test_square_roots(self):
        sys = make_circle(2, 1)
        assert sys.factors[0].offset == (Fraction(0),)
        assert sys.factors[1].offset == (Fraction(1, 2),)
        assert all(f.linear[0][0] == Fraction(1, 2) for f in sys.factors)

    def test_identity_lift(self):
        sys = make_circle(1, 1)
        assert sys.factors[0].linear[0][0] == 1
        assert sys.factors[0].offset[0] == 0

    def test_degree_n(self):
        sys = make_circle(3, 3)
        for j, f in enumerate(sys.factors, start=1):
            assert f.linear[0][0] == 1
            assert f.offset[0] == Fraction(j - 1, 3)

    def test_bad_n(self):
        with pytest.raises(ValueError):
            make_circle(0, 1)


class TestMakeSplit:
    def test_valid_two_branch(self):
        sys = make_split([([[2]], [0]), ([[2]], [Fraction(1, 2)])])
        assert sys.n == 2
        # sampled images stay distinct mod 1 (grid oracle)
        f1, f2 = sys.factors
        for k in range(100):
            t = (Fraction(k, 100),)
            diff = f1(t)[0] - f2(t)[0]
            assert diff != int(diff)

    def test_single_part(self):
        sys = make_split([([[3, 0], [0, 3]], [0, 0])])
        assert sys.n == 1

    def test_collision(self):
        with pytest.raises(CollisionError):
            make_split([([[2]], [0]), ([[3]], [Fraction(1, 2)])])

    def test_trivial_permutations_and_matrix_images(self, rng):
        # split systems must produce identity permutations, and phi_i on
        # generators is multiplication by the branch matrix
        from conftest import random_split_system

        for _ in range(30):
            parts = random_split_system(rng)
            sys = make_split(parts)
            data = validate(sys)
            q = data.q
            for img in data.generator_images:
                assert img.perm.is_identity()
            for k in range(q):
                e_k = tuple(int(c == k) for c in range(q))
                el = psi_of(data, e_k)
                for i, (a, _) in enumerate(parts):
                    expect = tuple(a[r][k] for r in range(q))
                    assert el.translations[i] == expect


class TestReorderingInvariance:
    def test_permuted_factors_same_invariants(self, rng):
        from nvalued.reidemeister import reidemeister_number

        for _ in range(20):
            sys = random_system(rng)
            factors = list(sys.factors)
            rng.shuffle(factors)
            shuffled = lift_system(
                [(f.linear, f.offset) for f in factors]
            )
            a = reidemeister_number(sys)
            b = reidemeister_number(shuffled)
            assert a.total == b.total
            assert sorted(str(blk.count) for blk in a.blocks) == sorted(
                str(blk.count) for blk in b.blocks
            )
