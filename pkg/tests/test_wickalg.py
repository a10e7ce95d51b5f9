import itertools
import random

import pytest

from qfock.errors import SizeError
from qfock.qcombinat import QPolynomial
from qfock.wickalg import (
    WickExpr,
    annihilator,
    creator,
    field_op,
    multiply,
    normal_order,
    shift,
    time_reverse,
    vacuum_expectation,
)

ONE = QPolynomial((1,))
Q = QPolynomial((0, 1))


def free_vacuum_expectation(word):
    """Independent q=0 oracle: rewrite a_i a_j+ -> delta_ij only."""
    for p in range(len(word) - 1):
        if word[p][0] == "-" and word[p + 1][0] == "+":
            if word[p][1] == word[p + 1][1]:
                return free_vacuum_expectation(word[:p] + word[p + 2:])
            return 0
    return 1 if not word else 0


def all_words(max_len, modes):
    letters = [(kind, m) for kind in "+-" for m in modes]
    for length in range(max_len + 1):
        yield from itertools.product(letters, repeat=length)


class TestNormalOrder:
    def test_same_mode_relation(self):
        x = normal_order((("-", 0), ("+", 0)))
        assert x.terms == {((), ()): ONE, ((0,), (0,)): Q}

    def test_cross_mode_relation(self):
        x = normal_order((("-", 0), ("+", 1)))
        assert x.terms == {((1,), (0,)): Q}

    def test_already_ordered(self):
        x = normal_order((("+", 0), ("-", 1)))
        assert x.terms == {((0,), (1,)): ONE}

    def test_cap(self):
        with pytest.raises(SizeError):
            normal_order((("-", 0),) * 17)

    def test_confluence_exhaustive(self):
        for word in all_words(5, (0, 1, 2)):
            assert normal_order(word, "leftmost") == normal_order(word, "rightmost")

    def test_confluence_random_sample(self):
        rng = random.Random(7)
        for _ in range(1000):
            word = tuple(
                (rng.choice("+-"), rng.choice((0, 1, 2))) for _ in range(rng.randint(0, 8))
            )
            assert normal_order(word, "leftmost") == normal_order(word, "rightmost")


class TestMultiply:
    def test_unit(self):
        y = creator(0) * annihilator(1)
        assert multiply(WickExpr.scalar(1), y) == y

    def test_consistency_with_normal_order(self):
        assert multiply(annihilator(0), creator(0)) == normal_order((("-", 0), ("+", 0)))

    def test_associativity(self):
        a, b, c = annihilator(0), creator(0), creator(1)
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))

    def test_associativity_random(self):
        rng = random.Random(3)
        for _ in range(50):
            exprs = []
            for _ in range(3):
                word = tuple(
                    (rng.choice("+-"), rng.choice((0, 1))) for _ in range(rng.randint(0, 4))
                )
                exprs.append(normal_order(word))
            x, y, z = exprs
            assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))

    def test_cap(self):
        long = WickExpr.monomial((0,) * 9, ())
        with pytest.raises(SizeError):
            multiply(long, long.star())


class TestVacuumExpectation:
    def test_pair(self):
        assert vacuum_expectation(annihilator(0) * creator(0)) == ONE

    def test_double_pair(self):
        x = annihilator(0) * annihilator(0) * creator(0) * creator(0)
        assert vacuum_expectation(x) == QPolynomial((1, 1))

    def test_field_fourth_moment(self):
        assert vacuum_expectation(field_op(0) ** 4) == QPolynomial((2, 1))

    def test_lone_creator(self):
        assert vacuum_expectation(creator(0)).is_zero

    def test_q_zero_specialization_matches_free_oracle(self):
        for word in all_words(6, (0, 1)):
            got = vacuum_expectation(normal_order(word))(0.0)
            assert got == free_vacuum_expectation(word)

    def test_state_positivity_numeric(self):
        rng = random.Random(11)
        for _ in range(40):
            x = WickExpr.zero()
            for _ in range(rng.randint(1, 3)):
                word = tuple(
                    (rng.choice("+-"), rng.choice((-1, 0, 1))) for _ in range(rng.randint(0, 4))
                )
                x = x + normal_order(word).scale(rng.randint(-3, 3))
            moment = vacuum_expectation(x * x.star())
            for q in (-0.9, -0.4, 0.0, 0.4, 0.9):
                assert moment(q) >= -1e-12


class TestSymmetries:
    def test_shift_example(self):
        x = creator(0) * annihilator(3)
        assert shift(x, 2) == creator(2) * annihilator(5)

    def test_shift_identity_and_inverse(self):
        x = normal_order((("-", 1), ("+", 0), ("-", 2)))
        assert shift(x, 0) == x
        assert shift(shift(x, 2), -2) == x

    def test_time_reverse_examples(self):
        assert time_reverse(annihilator(3)) == annihilator(-3)
        x = normal_order((("-", 1), ("+", 0)))
        assert time_reverse(time_reverse(x)) == x
        assert time_reverse(shift(x, 1)) == shift(time_reverse(x), -1)

    def test_state_invariance_symbolic(self):
        for word in all_words(4, (-1, 0, 1)):
            x = normal_order(word)
            omega = vacuum_expectation(x)
            assert vacuum_expectation(time_reverse(x)) == omega
            for k in range(-3, 4):
                assert vacuum_expectation(shift(x, k)) == omega

    def test_shift_invariance_of_pair(self):
        x = annihilator(0) * creator(0)
        assert vacuum_expectation(shift(x, 1)) == ONE


class TestCanonicalString:
    def test_monomial_form(self):
        x = creator(1) * creator(2) * annihilator(0)
        assert str(x) == "(1) a+(1) a+(2) a(0)"

    def test_sum_with_coefficients(self):
        x = annihilator(0) * creator(0)
        assert str(x) == "(1) + (q) a+(0) a(0)"

    def test_zero(self):
        assert str(WickExpr.zero()) == "0"
