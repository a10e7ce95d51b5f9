import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qfock.errors import SizeError
from qfock.qcombinat import (
    Permutation,
    QPolynomial,
    all_permutations,
    inversions,
    q_factorial,
)


def brute_inversions(images):
    return sum(
        1
        for a in range(len(images))
        for b in range(a + 1, len(images))
        if images[a] > images[b]
    )


class TestInversions:
    def test_identity(self):
        assert inversions(Permutation((1, 2, 3, 4))) == 0

    def test_reversal(self):
        assert inversions(Permutation((4, 3, 2, 1))) == 6

    def test_single_swap(self):
        assert inversions(Permutation((2, 1, 3))) == 1

    def test_matches_pair_enumeration(self):
        for n in range(6):
            for p in all_permutations(n):
                assert inversions(p) == brute_inversions(p.images)

    def test_complement_identity(self):
        # inv(p) + inv(reverse o p) = n(n-1)/2
        for n in range(1, 6):
            for p in all_permutations(n):
                rev = Permutation(tuple(n + 1 - v for v in p.images))
                assert inversions(p) + inversions(rev) == n * (n - 1) // 2

    def test_invalid_permutation_rejected(self):
        with pytest.raises(ValueError):
            Permutation((1, 1, 3))


class TestAllPermutations:
    def test_empty(self):
        assert [p.images for p in all_permutations(0)] == [()]

    def test_s3_count(self):
        assert len(list(all_permutations(3))) == 6

    def test_counts_and_uniqueness(self):
        for n in range(7):
            perms = [p.images for p in all_permutations(n)]
            assert len(perms) == math.factorial(n)
            assert len(set(perms)) == len(perms)

    def test_inversion_histogram_n4(self):
        hist = {}
        for p in all_permutations(4):
            hist[inversions(p)] = hist.get(inversions(p), 0) + 1
        assert sum(hist.values()) == 24
        assert hist[0] == 1 and hist[6] == 1

    def test_cap(self):
        with pytest.raises(SizeError):
            list(all_permutations(9))


class TestQFactorial:
    def test_small_values(self):
        assert q_factorial(0) == QPolynomial((1,))
        assert q_factorial(2) == QPolynomial((1, 1))
        assert q_factorial(3) == QPolynomial((1, 2, 2, 1))

    def test_matches_inversion_enumeration(self):
        for n in range(7):
            coeffs = [0] * (n * (n - 1) // 2 + 1)
            for p in all_permutations(n):
                coeffs[inversions(p)] += 1
            assert q_factorial(n) == QPolynomial(coeffs)

    def test_cap(self):
        with pytest.raises(SizeError):
            q_factorial(9)


poly_coeffs = st.lists(st.integers(min_value=-50, max_value=50), max_size=8)


class TestQPolynomial:
    def test_canonical_no_trailing_zeros(self):
        assert QPolynomial((1, 0, 0)).coeffs == (1,)
        assert QPolynomial((0, 0)).coeffs == ()

    def test_str_forms(self):
        assert str(QPolynomial()) == "0"
        assert str(QPolynomial((2, 1))) == "2 + q"
        assert str(QPolynomial((1, 0, -3, 1))) == "1 - 3*q^2 + q^3"
        assert str(QPolynomial((-1, 1))) == "-1 + q"

    @given(poly_coeffs)
    def test_parse_roundtrip(self, coeffs):
        p = QPolynomial(coeffs)
        assert QPolynomial.parse(str(p)) == p

    @given(poly_coeffs, poly_coeffs)
    def test_ring_commutativity(self, a, b):
        pa, pb = QPolynomial(a), QPolynomial(b)
        assert pa + pb == pb + pa
        assert pa * pb == pb * pa

    @given(poly_coeffs, poly_coeffs, poly_coeffs)
    def test_distributivity(self, a, b, c):
        pa, pb, pc = QPolynomial(a), QPolynomial(b), QPolynomial(c)
        assert pa * (pb + pc) == pa * pb + pa * pc

    @given(poly_coeffs, st.floats(min_value=-0.99, max_value=0.99))
    def test_evaluation_is_homomorphism(self, a, q):
        pa = QPolynomial(a)
        pb = QPolynomial((3, -2, 1))
        assert (pa * pb)(q) == pytest.approx(pa(q) * pb(q), abs=1e-9, rel=1e-9)

    def test_monomial(self):
        assert QPolynomial.monomial(3, 2) == QPolynomial((0, 0, 0, 2))
        with pytest.raises(ValueError):
            QPolynomial.monomial(-1)
