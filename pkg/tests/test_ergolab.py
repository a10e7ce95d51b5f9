import numpy as np
import pytest

from qfock.errors import BoundViolationError, DomainError, WindowOverflowError
from qfock.ergolab import (
    CSV_HEADER,
    Subsequence,
    cesaro_decay,
    confluence_suite,
    decay_fock,
    gram_positivity_suite,
    kernel_suite,
    lemma_bound_trial,
    lemma_fock,
    prop_bound_check,
    rows_to_csv,
    symmetry_suite,
    verify_all,
)
from qfock.fockcore import TruncatedFock
from qfock.wickalg import WickMonomial


class TestSubsequence:
    def test_arithmetic(self):
        assert Subsequence.arithmetic(4).values == (0, 1, 2, 3)

    def test_random_is_increasing_and_seeded(self):
        a = Subsequence.random_increasing(8, 16, seed=5)
        b = Subsequence.random_increasing(8, 16, seed=5)
        assert a.values == b.values
        assert all(x < y for x, y in zip(a.values, a.values[1:]))
        assert max(a.values) <= 64

    def test_rejects_non_increasing(self):
        with pytest.raises(ValueError):
            Subsequence((3, 3))
        with pytest.raises(ValueError):
            Subsequence((-1, 2))


class TestLemmaBound:
    def test_vacuum_xi_saturates_at_q0(self):
        fock = lemma_fock(1, xi_level=0)
        lhs, rhs = lemma_bound_trial(fock, 0.0, 1, seed=0, xi_level=0)
        assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_bound_holds_q_half(self):
        fock = lemma_fock(4)
        for seed in range(20):
            lhs, rhs = lemma_bound_trial(fock, 0.5, 4, seed=seed)
            assert lhs <= rhs + 1e-8

    def test_bound_holds_negative_q(self):
        fock = lemma_fock(6)
        for seed in range(20):
            lhs, rhs = lemma_bound_trial(fock, -0.9, 6, seed=seed)
            assert lhs <= rhs + 1e-8

    def test_window_too_small(self):
        fock = lemma_fock(2)
        with pytest.raises(WindowOverflowError):
            lemma_bound_trial(fock, 0.5, 5, seed=0)


class TestPropBound:
    def test_creator_saturates_at_q0(self):
        word = WickMonomial((0,), ())
        seq = Subsequence.arithmetic(9)
        fock = decay_fock(word, seq)
        row = prop_bound_check(word, seq, fock, 0.0)
        assert row.norm == pytest.approx(np.sqrt(9), abs=1e-10)
        assert row.bound == pytest.approx(np.sqrt(9))

    def test_annihilator_matches_creator_by_adjoint(self):
        seq = Subsequence.arithmetic(6)
        q = 0.5
        cre = WickMonomial((0,), ())
        ann = WickMonomial((), (0,))
        fock = decay_fock(cre, seq)
        row_c = prop_bound_check(cre, seq, fock, q)
        row_a = prop_bound_check(ann, seq, fock, q)
        assert row_a.norm == pytest.approx(row_c.norm, abs=1e-8)

    def test_single_mixed_term(self):
        word = WickMonomial((0,), (0,))
        seq = Subsequence.arithmetic(1)
        fock = decay_fock(word, seq)
        row = prop_bound_check(word, seq, fock, 0.5)
        assert row.norm <= 2.0 + 1e-8
        assert row.bound == pytest.approx(2.0)

    def test_scalar_word_rejected(self):
        fock = TruncatedFock((0, 3), 2)
        with pytest.raises(DomainError):
            prop_bound_check(WickMonomial((), ()), Subsequence.arithmetic(2), fock, 0.5)

    def test_window_overflow(self):
        fock = TruncatedFock((0, 2), 2)
        with pytest.raises(WindowOverflowError):
            prop_bound_check(WickMonomial((0,), ()), Subsequence.arithmetic(8), fock, 0.5)


class TestCesaroDecay:
    def test_exact_q0_law(self):
        rows = cesaro_decay(WickMonomial((0,), ()), 0.0, 16)
        for row in rows:
            assert row.norm == pytest.approx(np.sqrt(row.n), abs=1e-10)
            assert row.cesaro == pytest.approx(1.0 / np.sqrt(row.n), abs=1e-10)

    def test_single_row(self):
        rows = cesaro_decay(WickMonomial((0,), ()), 0.3, 1)
        assert len(rows) == 1
        assert rows[0].cesaro == rows[0].norm

    def test_cesaro_bound_at_q_half(self):
        rows = cesaro_decay(WickMonomial((0,), ()), 0.5, 16)
        assert rows[-1].cesaro <= np.sqrt(2.0 / 16.0) + 1e-8

    def test_cesaro_nonincreasing_for_creator(self):
        rows = cesaro_decay(WickMonomial((0,), ()), 0.6, 16)
        for a, b in zip(rows, rows[1:]):
            assert b.cesaro <= a.cesaro + 1e-6

    def test_random_sequences_respect_bound(self):
        for seed in (1, 2, 3):
            rows = cesaro_decay(WickMonomial((0,), (0,)), -0.6, 8, seq_kind="random", seed=seed)
            for row in rows:
                assert row.margin >= -1e-8

    def test_csv_schema(self):
        rows = cesaro_decay(WickMonomial((0,), ()), 0.0, 3)
        text = rows_to_csv(rows)
        lines = text.strip().split("\n")
        assert lines[0] == ",".join(CSV_HEADER)
        assert len(lines) == 4
        assert lines[1].split(",")[0] == "a+(0)"

    def test_deterministic_output(self):
        a = rows_to_csv(cesaro_decay(WickMonomial((0,), ()), 0.4, 8, seq_kind="random", seed=9))
        b = rows_to_csv(cesaro_decay(WickMonomial((0,), ()), 0.4, 8, seq_kind="random", seed=9))
        assert a == b


class TestSuites:
    def test_symmetry_suite_passes(self):
        report = symmetry_suite(sample_size=100, seed=0, exhaustive_len=3)
        assert report.ok
        assert report.checks > 0

    def test_confluence_suite_passes(self):
        report = confluence_suite(sample_size=100, seed=0, exhaustive_len=4)
        assert report.ok

    def test_kernel_suite_q0(self):
        fock = TruncatedFock((0, 1), 2)
        report = kernel_suite(fock, 0.0)
        assert report.ok
        assert "gap=1" in report.detail

    def test_kernel_suite_high_q(self):
        fock = TruncatedFock((0, 1), 3)
        assert kernel_suite(fock, 0.9).ok

    def test_gram_positivity_corruption_hook(self):
        assert gram_positivity_suite().ok
        assert not gram_positivity_suite(corrupt=True).ok

    def test_verify_all_green(self):
        reports = verify_all(symmetry_samples=50, confluence_samples=50)
        names = {r.name for r in reports}
        assert {"gram-positivity", "relation-residual", "adjointness", "confluence",
                "symmetry", "kernel", "psd-step", "creator-norm"} <= names
        for r in reports:
            assert r.ok, f"{r.name}: {r.detail}"
