"""Experiment harness for the quantitative operator bounds.

Reproduces, at desk scale:
  * the creator-sum vector bound  ||sum a+(f_j) xi_j|| <= sqrt(n/(1-|q|)) max ||xi_j||,
  * the shifted-monomial operator bound  ||sum_l shift^{k_l}(X)|| <= sqrt(n/(1-|q|)^(i+j)),
  * the Cesaro decay (norm/n -> 0) that drives unique mixing of the shift,
  * symbolic symmetry identities and the number-operator kernel witness.

Truncated norms are compressions, hence certified lower bounds of the true
norms; the theoretical bounds above remain valid upper bounds, so every
bound check here is meaningful rather than vacuous.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundViolationError, DomainError, WindowOverflowError
from .fockcore import TruncatedFock, min_gram_eigenvalue, psd_step_min_eigenvalue
from .qcombinat import QPolynomial
from .qops import (
    GramFactor,
    LevelOperator,
    identity_operator,
    m_operator,
    matrix_annihilator,
    matrix_creator,
    matrix_of_expr,
    number_operator,
    op_norm_q,
    q_adjoint,
    zero_operator,
)
from .wickalg import (
    WickExpr,
    WickMonomial,
    normal_order,
    vacuum_expectation,
)

BOUND_TOL = 1e-8
EXACT_TOL = 1e-12

CSV_HEADER = ["word", "q", "seq_kind", "seed", "n", "i", "j", "norm", "cesaro", "bound", "margin"]


@dataclass(frozen=True)
class Subsequence:
    """Strictly increasing nonnegative integers k_1 < k_2 < ... < k_n."""

    values: tuple[int, ...]
    kind: str = "arith"
    seed: int = 0

    def __post_init__(self):
        if any(v < 0 for v in self.values):
            raise ValueError("subsequence entries must be nonnegative")
        if any(a >= b for a, b in zip(self.values, self.values[1:])):
            raise ValueError("subsequence must be strictly increasing")

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def arithmetic(cls, n: int) -> "Subsequence":
        return cls(tuple(range(n)), kind="arith", seed=0)

    @classmethod
    def random_increasing(cls, n: int, nmax: int, seed: int) -> "Subsequence":
        """Sorted draw without replacement from [0, 4*nmax]."""
        rng = random.Random(seed)
        values = tuple(sorted(rng.sample(range(4 * nmax + 1), n)))
        return cls(values, kind="random", seed=seed)


@dataclass
class DecayRow:
    word_id: str
    q: float
    seq_kind: str
    seed: int
    n: int
    i: int
    j: int
    norm: float
    cesaro: float
    bound: float
    margin: float

    def as_csv_row(self) -> list[str]:
        return [
            self.word_id,
            f"{self.q:g}",
            self.seq_kind,
            str(self.seed),
            str(self.n),
            str(self.i),
            str(self.j),
            f"{self.norm:.12e}",
            f"{self.cesaro:.12e}",
            f"{self.bound:.12e}",
            f"{self.margin:.12e}",
        ]


def rows_to_csv(rows: list[DecayRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.as_csv_row())
    return buf.getvalue()


def monomial_id(word: WickMonomial) -> str:
    return " ".join([f"a+({m})" for m in word.creators] + [f"a({m})" for m in word.annihilators])


# ---------------------------------------------------------------------------
# creator-sum vector bound


def lemma_fock(n: int, xi_level: int = 2, max_width: int | None = None) -> TruncatedFock:
    """Truncation large enough for n orthonormal creator modes e_1..e_n and
    random vectors at xi_level."""
    hi = max(n, 1) if max_width is None else max_width
    return TruncatedFock((1, hi), xi_level + 1)


def lemma_bound_trial(
    fock: TruncatedFock,
    q: float,
    n: int,
    seed: int,
    xi_level: int = 2,
) -> tuple[float, float]:
    """One seeded trial of the creator-sum bound.

    Takes f_j = e_j for j = 1..n (orthonormal) and xi_j with independent
    uniform[-1, 1] coefficients over the level-xi_level words.  Returns
    (lhs, rhs) = (||sum_j a+(e_j) xi_j||_q, sqrt(n/(1-|q|)) max_j ||xi_j||_q).
    """
    lo, hi = fock.window
    if n < 1 or n > hi - lo + 1 or lo > 1 or hi < n:
        raise WindowOverflowError(f"window [{lo},{hi}] cannot host modes 1..{n}")
    if xi_level + 1 > fock.max_level:
        raise DomainError(f"max_level {fock.max_level} too small for xi level {xi_level}")
    gf = GramFactor.for_fock(fock, q)
    rng = np.random.default_rng(seed)
    level_words = [w for w in fock.basis if len(w) == xi_level]
    out = np.zeros(fock.dim)
    max_xi = 0.0
    for j in range(1, n + 1):
        xi = np.zeros(fock.dim)
        coeffs = rng.uniform(-1.0, 1.0, size=len(level_words))
        for c, w in zip(coeffs, level_words):
            xi[fock.index[w]] = c
            out[fock.index[(j,) + w]] += c
        max_xi = max(max_xi, gf.norm_vec(xi))
    lhs = gf.norm_vec(out)
    rhs = np.sqrt(n / (1.0 - abs(q))) * max_xi
    return lhs, rhs


# ---------------------------------------------------------------------------
# shifted-monomial operator bound and Cesaro decay


def _shifted_monomial_matrix(word: WickMonomial, k: int, fock: TruncatedFock, q: float) -> LevelOperator:
    lo, hi = fock.window
    for m in word.creators + word.annihilators:
        if not fock.contains_mode(m + k):
            raise WindowOverflowError(f"shifted mode {m + k} outside window [{lo},{hi}]")
    expr = WickExpr.monomial(
        tuple(m + k for m in word.creators), tuple(m + k for m in word.annihilators), word.coeff
    )
    return matrix_of_expr(expr, fock, q)


def _decay_row(word: WickMonomial, seq: Subsequence, q: float, n: int, norm: float) -> DecayRow:
    i, j = len(word.creators), len(word.annihilators)
    bound = float(np.sqrt(n / (1.0 - abs(q)) ** (i + j)))
    margin = bound - norm
    if margin < -BOUND_TOL:
        raise BoundViolationError(
            f"norm {norm:.12g} exceeds bound {bound:.12g} for word {monomial_id(word)}, "
            f"q={q}, n={n}, seq={seq.kind}/{seq.seed}"
        )
    return DecayRow(
        word_id=monomial_id(word),
        q=q,
        seq_kind=seq.kind,
        seed=seq.seed,
        n=n,
        i=i,
        j=j,
        norm=norm,
        cesaro=norm / n,
        bound=bound,
        margin=margin,
    )


def decay_fock(word: WickMonomial, seq: Subsequence, max_level: int | None = None) -> TruncatedFock:
    """Window [0, k_max + mode span] so every shift acts faithfully."""
    modes = word.creators + word.annihilators
    span = max(modes) if modes else 0
    k_max = max(seq.values) if seq.values else 0
    if max_level is None:
        # pure creator/annihilator words need no depth; mixed words get level 2
        max_level = 1 if (not word.creators or not word.annihilators) else 2
    return TruncatedFock((0, k_max + span + 1), max_level)


def prop_bound_check(
    word: WickMonomial,
    seq: Subsequence,
    fock: TruncatedFock,
    q: float,
) -> DecayRow:
    """Assemble sum_l shift^{k_l}(word), compute its q-norm, check the bound."""
    if not word.creators and not word.annihilators:
        raise DomainError("word must contain at least one creator or annihilator")
    total = zero_operator(fock)
    for k in seq.values:
        total = total + _shifted_monomial_matrix(word, k, fock, q)
    report = op_norm_q(total, q)
    return _decay_row(word, seq, q, len(seq), report.value)


def cesaro_decay(
    word: WickMonomial,
    q: float,
    nmax: int,
    seq_kind: str = "arith",
    seed: int = 0,
    max_level: int | None = None,
) -> list[DecayRow]:
    """Rows for n = 1..nmax along one increasing subsequence, sharing the fock."""
    if nmax < 1:
        raise ValueError("nmax must be >= 1")
    if seq_kind == "arith":
        seq = Subsequence.arithmetic(nmax)
    elif seq_kind == "random":
        seq = Subsequence.random_increasing(nmax, nmax, seed)
    else:
        raise ValueError(f"unknown seq_kind {seq_kind!r}")
    fock = decay_fock(word, seq, max_level=max_level)
    rows = []
    total = zero_operator(fock)
    for n in range(1, nmax + 1):
        total = total + _shifted_monomial_matrix(word, seq.values[n - 1], fock, q)
        report = op_norm_q(total, q)
        prefix = Subsequence(seq.values[:n], kind=seq.kind, seed=seq.seed)
        rows.append(_decay_row(word, prefix, q, n, report.value))
    return rows


# ---------------------------------------------------------------------------
# suites


@dataclass
class SuiteReport:
    name: str
    checks: int = 0
    failures: int = 0
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def record(self, passed: bool, message: str = ""):
        self.checks += 1
        if not passed:
            self.failures += 1
            if not self.detail:
                self.detail = message


def _random_word(rng: random.Random, max_len: int, modes: tuple[int, ...]) -> tuple:
    length = rng.randint(0, max_len)
    return tuple((rng.choice("+-"), rng.choice(modes)) for _ in range(length))


def symmetry_suite(
    sample_size: int = 1000,
    seed: int = 0,
    exhaustive_len: int = 4,
    modes: tuple[int, ...] = (-1, 0, 1),
    shifts: tuple[int, ...] = (-3, -2, -1, 1, 2, 3),
) -> SuiteReport:
    """Shift invariance of the vacuum state, time reversal identities.

    All checks are exact polynomial identities on normal-ordered expressions.
    """
    report = SuiteReport(name="symmetry")
    words = []
    import itertools

    letters = [(kind, m) for kind in "+-" for m in modes]
    for length in range(exhaustive_len + 1):
        words.extend(itertools.product(letters, repeat=length))
    rng = random.Random(seed)
    words.extend(_random_word(rng, 8, modes) for _ in range(sample_size))
    for word in words:
        x = normal_order(word)
        omega = vacuum_expectation(x)
        theta = x.time_reverse()
        report.record(theta.time_reverse() == x, f"theta^2 != id on {word}")
        report.record(
            vacuum_expectation(theta) == omega, f"omega o theta != omega on {word}"
        )
        report.record(
            x.shift(1).time_reverse() == theta.shift(-1),
            f"theta o shift != shift^-1 o theta on {word}",
        )
        for k in shifts:
            report.record(
                vacuum_expectation(x.shift(k)) == omega,
                f"omega o shift^{k} != omega on {word}",
            )
    return report


def kernel_suite(fock: TruncatedFock, q: float, gap_floor: float = 1e-10) -> SuiteReport:
    """Number operator annihilates the vacuum and has a positive gap off it;
    the cycling operator M is q-self-adjoint with positive spectrum per level."""
    report = SuiteReport(name="kernel")
    gf = GramFactor.for_fock(fock, q)
    num = number_operator(fock, q)
    vac = fock.index[()]
    col = num.matrix[:, vac]
    report.record(col.nnz == 0, "number operator does not annihilate the vacuum")
    sym = gf.to_ortho(num.matrix).toarray()
    sym = (sym + sym.T) / 2.0
    rest = np.delete(np.delete(sym, vac, axis=0), vac, axis=1)
    gap = float(np.linalg.eigvalsh(rest)[0]) if rest.size else np.inf
    report.record(gap > gap_floor, f"number-operator spectral gap {gap:.3e} not positive")
    report.detail = report.detail or f"gap={gap:.6g}"

    mop = m_operator(fock, q)
    m_sym = gf.to_ortho(mop.matrix).toarray()
    asym = float(np.abs(m_sym - m_sym.T).max())
    report.record(asym <= 1e-10, f"M not q-self-adjoint, asymmetry {asym:.3e}")
    for level in range(fock.max_level + 1):
        idx = fock.level_indices(level)
        block = (m_sym + m_sym.T)[np.ix_(idx, idx)] / 2.0
        low = float(np.linalg.eigvalsh(block)[0])
        report.record(low > gap_floor, f"M not positive on level {level}: min eig {low:.3e}")
    return report


def lemma_suite(
    q_values: tuple[float, ...] = (0.0, 0.5, -0.5, 0.9, -0.9),
    trials: int = 200,
    n_max: int = 8,
    xi_level: int = 2,
    seed: int = 0,
) -> SuiteReport:
    report = SuiteReport(name="lemma-bound")
    fock = lemma_fock(n_max, xi_level=xi_level)
    rng = random.Random(seed)
    for q in q_values:
        for t in range(trials):
            n = rng.randint(1, n_max)
            trial_seed = rng.randrange(2**32)
            lhs, rhs = lemma_bound_trial(fock, q, n, trial_seed, xi_level=xi_level)
            report.record(
                lhs <= rhs + BOUND_TOL,
                f"lemma bound violated: lhs={lhs:.12g} rhs={rhs:.12g} q={q} n={n} trial={t}",
            )
    return report


# ---------------------------------------------------------------------------
# full verification battery (used by `verify`)


DEFAULT_WORDS: dict[str, WickMonomial] = {
    "creator": WickMonomial((0,), ()),
    "annihilator": WickMonomial((), (0,)),
    "mixed-11": WickMonomial((0,), (0,)),
    "mixed-21": WickMonomial((0, 1), (0,)),
}


def gram_positivity_suite(
    q_values: tuple[float, ...] = (0.0, 0.5, -0.5, 0.9, -0.9),
    window: tuple[int, int] = (0, 2),
    max_level: int = 4,
    corrupt: bool = False,
) -> SuiteReport:
    report = SuiteReport(name="gram-positivity")
    fock = TruncatedFock(window, max_level)
    for q in q_values:
        low = min_gram_eigenvalue(fock, q)
        if corrupt:
            # test hook: simulate a corrupted Gram entry to prove the check bites
            low -= 10.0
        report.record(low > 0.0, f"min Gram eigenvalue {low:.3e} at q={q}")
    return report


def relation_residual_suite(
    q_values: tuple[float, ...] = (0.0, 0.5, -0.5, 0.9, -0.9),
    window: tuple[int, int] = (0, 2),
    max_level: int = 3,
) -> SuiteReport:
    """||(a_i a_j+ - q a_j+ a_i - delta_ij I) restricted to levels <= N-1||."""
    report = SuiteReport(name="relation-residual")
    fock = TruncatedFock(window, max_level)
    lo, hi = fock.window
    keep = fock.level_of < fock.max_level
    for q in q_values:
        gf = GramFactor.for_fock(fock, q)
        cre = {i: matrix_creator(i, fock).matrix for i in range(lo, hi + 1)}
        ann = {i: matrix_annihilator(i, fock, q).matrix for i in range(lo, hi + 1)}
        for i in range(lo, hi + 1):
            for j in range(lo, hi + 1):
                m = (ann[i] @ cre[j] - q * (cre[j] @ ann[i])).toarray()
                if i == j:
                    m = m - np.eye(fock.dim)
                # orthonormal frame, then restrict columns to levels < N
                # (the level projection is q-orthogonal and L is within-level)
                b = (gf.chol.T @ m @ gf.chol_inv.T.toarray())[:, keep]
                resid = float(np.linalg.norm(b, 2)) if b.size else 0.0
                report.record(
                    resid <= EXACT_TOL,
                    f"relation residual {resid:.3e} for (i,j)=({i},{j}) at q={q}",
                )
    return report


def adjointness_suite(
    q_values: tuple[float, ...] = (0.5, -0.5, 0.9, -0.9),
    window: tuple[int, int] = (0, 2),
    max_level: int = 3,
) -> SuiteReport:
    """q_adjoint(a_i+) agrees with a_i on all entries whose source level < N,
    and the adjoint is an involution."""
    report = SuiteReport(name="adjointness")
    fock = TruncatedFock(window, max_level)
    lo, hi = fock.window
    keep = fock.level_of < fock.max_level
    for q in q_values:
        for i in range(lo, hi + 1):
            cre = matrix_creator(i, fock)
            ann = matrix_annihilator(i, fock, q)
            adj = q_adjoint(cre, q)
            dev = float(np.abs((adj.matrix - ann.matrix).toarray()[:, keep]).max())
            report.record(dev <= EXACT_TOL, f"adjoint deviation {dev:.3e} for i={i}, q={q}")
            back = q_adjoint(adj, q)
            dev2 = float(np.abs((back.matrix - cre.matrix).toarray()).max())
            report.record(dev2 <= 1e-10, f"adjoint involution residual {dev2:.3e} for i={i}, q={q}")
    return report


def confluence_suite(
    sample_size: int = 1000,
    seed: int = 0,
    exhaustive_len: int = 5,
    modes: tuple[int, ...] = (0, 1, 2),
) -> SuiteReport:
    """Leftmost vs rightmost rewriting give the same normal form."""
    report = SuiteReport(name="confluence")
    import itertools

    letters = [(kind, m) for kind in "+-" for m in modes]
    words = []
    for length in range(exhaustive_len + 1):
        words.extend(itertools.product(letters, repeat=length))
    rng = random.Random(seed)
    words.extend(_random_word(rng, 8, modes) for _ in range(sample_size))
    for word in words:
        left = normal_order(word, strategy="leftmost")
        right = normal_order(word, strategy="rightmost")
        report.record(left == right, f"confluence failure on {word}")
    return report


def psd_step_suite(
    q_values: tuple[float, ...] = (0.5, -0.5, 0.9, -0.9),
    width: int = 3,
    max_top_level: int = 4,
    floor: float = -1e-10,
) -> SuiteReport:
    report = SuiteReport(name="psd-step")
    for q in q_values:
        for level in range(1, max_top_level + 1):
            low = psd_step_min_eigenvalue(width, level, q)
            report.record(
                low >= floor, f"PSD step inequality fails: min eig {low:.3e} at level {level}, q={q}"
            )
    return report


def creator_norm_suite(
    q_values: tuple[float, ...] = (0.5, -0.5, 0.9, -0.9),
    window: tuple[int, int] = (0, 2),
    max_level: int = 4,
) -> SuiteReport:
    report = SuiteReport(name="creator-norm")
    fock = TruncatedFock(window, max_level)
    for q in q_values:
        bound = 1.0 / np.sqrt(1.0 - abs(q))
        for i in range(window[0], window[1] + 1):
            value = op_norm_q(matrix_creator(i, fock), q).value
            report.record(
                value <= bound + BOUND_TOL,
                f"creator norm {value:.12g} exceeds {bound:.12g} at q={q}, i={i}",
            )
    return report


def kernel_default_suite(
    q_values: tuple[float, ...] = (0.0, 0.5, -0.5, 0.9),
    window: tuple[int, int] = (0, 1),
    max_level: int = 3,
) -> SuiteReport:
    merged = SuiteReport(name="kernel")
    fock = TruncatedFock(window, max_level)
    for q in q_values:
        rep = kernel_suite(fock, q)
        merged.checks += rep.checks
        merged.failures += rep.failures
        if rep.detail and not merged.detail:
            merged.detail = f"q={q}: {rep.detail}"
    return merged


def verify_all(corrupt_gram: bool = False, symmetry_samples: int = 200, confluence_samples: int = 200) -> list[SuiteReport]:
    """The `verify` battery; fast configuration of every invariant suite."""
    return [
        gram_positivity_suite(corrupt=corrupt_gram),
        relation_residual_suite(),
        adjointness_suite(),
        confluence_suite(sample_size=confluence_samples),
        symmetry_suite(sample_size=symmetry_samples),
        kernel_default_suite(),
        psd_step_suite(),
        creator_norm_suite(),
    ]
