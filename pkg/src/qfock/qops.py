"""Matrix representations on a truncated Fock basis.

Operators act on coefficient vectors in the (non-orthonormal) Word basis,
so adjoints and norms have to route through the Gram data: with G = L L^T
per block, the map B = L^T A L^{-T} represents A in an orthonormal frame
and ||A||_q is the largest singular value of B.

Truncation rule: a creator applied to a top-level word gives 0.  That
makes every matrix here the compression P A P by the orthogonal projection
onto levels <= N, so computed norms are certified lower bounds of the
untruncated ones while the paper's upper bounds still apply.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.linalg

from .errors import ConditioningError, DomainError
from .fockcore import TruncatedFock
from .wickalg import WickExpr

#: Dense eigen/SVD is used up to this basis size; power iteration above it.
DENSE_LIMIT = 2000
POWER_TOL = 1e-10
POWER_MAXITER = 100_000

#: Reject Gram factorization when a block eigenvalue ratio drops below this.
COND_THRESHOLD = 1e-12


@dataclass
class NormReport:
    value: float
    method: str  # "exact-eigen" | "power-iteration"
    residual: float
    levels_used: int


class LevelOperator:
    """A sparse matrix on a TruncatedFock basis, tagged with its fock."""

    def __init__(self, fock: TruncatedFock, matrix: sp.spmatrix):
        self.fock = fock
        self.matrix = sp.csr_matrix(matrix)

    def _check(self, other: "LevelOperator"):
        if other.fock is not self.fock:
            raise ValueError("operators live on different truncated spaces")

    def __add__(self, other: "LevelOperator") -> "LevelOperator":
        self._check(other)
        return LevelOperator(self.fock, self.matrix + other.matrix)

    def __sub__(self, other: "LevelOperator") -> "LevelOperator":
        self._check(other)
        return LevelOperator(self.fock, self.matrix - other.matrix)

    def __matmul__(self, other: "LevelOperator") -> "LevelOperator":
        self._check(other)
        return LevelOperator(self.fock, self.matrix @ other.matrix)

    def scale(self, c: float) -> "LevelOperator":
        return LevelOperator(self.fock, self.matrix * c)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ vec

    @property
    def dim(self) -> int:
        return self.fock.dim

    def level_shifts(self) -> set[int]:
        """Set of (target level - source level) over nonzero entries."""
        coo = self.matrix.tocoo()
        lv = self.fock.level_of
        return {int(lv[r] - lv[c]) for r, c in zip(coo.row, coo.col)}

    def to_json_dict(self) -> dict:
        coo = self.matrix.tocoo()
        return {
            "rows": int(coo.shape[0]),
            "cols": int(coo.shape[1]),
            "entries": [[int(r), int(c), float(v)] for r, c, v in zip(coo.row, coo.col, coo.data)],
        }


def zero_operator(fock: TruncatedFock) -> LevelOperator:
    return LevelOperator(fock, sp.csr_matrix((fock.dim, fock.dim)))


def identity_operator(fock: TruncatedFock) -> LevelOperator:
    return LevelOperator(fock, sp.identity(fock.dim, format="csr"))


def _check_mode(i: int, fock: TruncatedFock):
    if not fock.contains_mode(i):
        lo, hi = fock.window
        raise DomainError(f"mode {i} outside window [{lo}, {hi}]")


def _check_q(q: float):
    if not abs(q) < 1:
        raise DomainError(f"|q| must be < 1, got q={q}")


def matrix_creator(i: int, fock: TruncatedFock) -> LevelOperator:
    """Prepend e_i; top-level words map to 0."""
    _check_mode(i, fock)
    rows, cols, vals = [], [], []
    for idx, word in enumerate(fock.basis):
        if len(word) < fock.max_level:
            rows.append(fock.index[(i,) + word])
            cols.append(idx)
            vals.append(1.0)
    return LevelOperator(fock, sp.coo_matrix((vals, (rows, cols)), shape=(fock.dim, fock.dim)))


def matrix_annihilator(i: int, fock: TruncatedFock, q: float) -> LevelOperator:
    """Delete each matching slot k with weight q**(k-1)."""
    _check_mode(i, fock)
    _check_q(q)
    rows, cols, vals = [], [], []
    for idx, word in enumerate(fock.basis):
        for k, letter in enumerate(word):
            if letter == i:
                rows.append(fock.index[word[:k] + word[k + 1:]])
                cols.append(idx)
                vals.append(q**k)
    return LevelOperator(fock, sp.coo_matrix((vals, (rows, cols)), shape=(fock.dim, fock.dim)))


def matrix_of_expr(x, fock: TruncatedFock, q: float) -> LevelOperator:
    """Evaluate a WickExpr (or anything lowering to one via parser.to_wick)
    into a matrix; coefficients are evaluated at q."""
    _check_q(q)
    if not isinstance(x, WickExpr):
        from .parser import to_wick

        x = to_wick(x)
    creators_cache: dict[int, sp.csr_matrix] = {}
    annih_cache: dict[int, sp.csr_matrix] = {}

    def cre(m):
        if m not in creators_cache:
            creators_cache[m] = matrix_creator(m, fock).matrix
        return creators_cache[m]

    def ann(m):
        if m not in annih_cache:
            annih_cache[m] = matrix_annihilator(m, fock, q).matrix
        return annih_cache[m]

    total = sp.csr_matrix((fock.dim, fock.dim))
    for (cs, as_), coeff in x.terms.items():
        term = sp.identity(fock.dim, format="csr")
        for m in reversed(as_):
            term = ann(m) @ term
        for m in reversed(cs):
            term = cre(m) @ term
        total = total + term * coeff(q)
    return LevelOperator(fock, total)


# ---------------------------------------------------------------------------
# Gram factorization


class GramFactor:
    """Blockwise Cholesky factorization of the Gram matrix at a numeric q.

    Provides G (sparse), its Cholesky factor L (block lower triangular in
    basis index order), the explicit inverse factor, and vector norms.
    """

    def __init__(self, fock: TruncatedFock, q: float, cond_threshold: float = COND_THRESHOLD):
        _check_q(q)
        self.fock = fock
        self.q = q
        dim = fock.dim
        rows, cols = [], []
        g_vals, l_vals, linv_vals = [], [], []
        eig_min, eig_max = np.inf, 0.0
        for block in fock.gram_blocks():
            m = block.evaluate(q)
            if m.shape == (1, 1):
                ev = np.array([m[0, 0]])
            else:
                ev = np.linalg.eigvalsh(m)
            eig_min = min(eig_min, float(ev[0]))
            eig_max = max(eig_max, float(ev[-1]))
            if ev[0] <= 0 or ev[0] < cond_threshold * max(eig_max, 1.0):
                raise ConditioningError(
                    f"Gram block (level={block.level}, multiset={block.multiset}) "
                    f"has smallest eigenvalue {ev[0]:.3e} at q={q}"
                )
            chol = np.linalg.cholesky(m)
            chol_inv = scipy.linalg.solve_triangular(chol, np.eye(len(m)), lower=True)
            idx = block.indices
            for a, ia in enumerate(idx):
                for b, ib in enumerate(idx):
                    rows.append(ia)
                    cols.append(ib)
                    g_vals.append(m[a, b])
                    l_vals.append(chol[a, b])
                    linv_vals.append(chol_inv[a, b])
        shape = (dim, dim)
        self.gram = sp.csr_matrix(sp.coo_matrix((g_vals, (rows, cols)), shape=shape))
        self.chol = sp.csr_matrix(sp.coo_matrix((l_vals, (rows, cols)), shape=shape))
        self.chol_inv = sp.csr_matrix(sp.coo_matrix((linv_vals, (rows, cols)), shape=shape))
        self.eig_range = (eig_min, eig_max)

    @classmethod
    def for_fock(cls, fock: TruncatedFock, q: float) -> "GramFactor":
        """Cached per (fock, q)."""
        gf = fock._gram_factors.get(q)
        if gf is None:
            gf = cls(fock, q)
            fock._gram_factors[q] = gf
        return gf

    def norm_vec(self, x: np.ndarray) -> float:
        """sqrt(x^T G x)"""
        return float(np.linalg.norm(self.chol.T @ x))

    def to_ortho(self, a: sp.spmatrix) -> sp.csr_matrix:
        """Conjugate a Word-basis matrix into an orthonormal frame."""
        return sp.csr_matrix(self.chol.T @ a @ self.chol_inv.T)

    def adjoint(self, a: sp.spmatrix) -> sp.csr_matrix:
        """G^{-1} A^T G"""
        return sp.csr_matrix(self.chol_inv.T @ (self.chol_inv @ (a.T @ self.gram)))


def q_adjoint(a: LevelOperator, q: float) -> LevelOperator:
    """Adjoint with respect to the deformed inner product."""
    gf = GramFactor.for_fock(a.fock, q)
    return LevelOperator(a.fock, gf.adjoint(a.matrix))


def _power_iteration(b: sp.csr_matrix, tol: float, maxiter: int) -> tuple[float, float]:
    """Largest singular value of b via power iteration on b^T b.

    Deterministic start vector.  Returns (sigma_max, residual) where the
    residual is ||b^T b x - lam x|| / max(lam, tiny) at the final iterate.
    """
    dim = b.shape[0]
    bt = sp.csr_matrix(b.T)
    x = np.ones(dim) + 1e-6 * np.arange(dim)  # break symmetry deterministically
    x /= np.linalg.norm(x)
    lam = 0.0
    residual = np.inf
    for _ in range(maxiter):
        y = bt @ (b @ x)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0, 0.0
        lam = float(x @ y)
        residual = float(np.linalg.norm(y - lam * x))
        x = y / ny
        if residual <= tol * max(lam, 1e-300):
            break
    return float(np.sqrt(max(lam, 0.0))), residual


def op_norm_q(
    a: LevelOperator,
    q: float,
    dense_limit: int = DENSE_LIMIT,
    tol: float = POWER_TOL,
    maxiter: int = POWER_MAXITER,
) -> NormReport:
    """Operator norm on the truncation under the q-inner product."""
    gf = GramFactor.for_fock(a.fock, q)
    b = gf.to_ortho(a.matrix)
    if a.fock.dim <= dense_limit:
        sv = scipy.linalg.svdvals(b.toarray())
        value = float(sv[0]) if len(sv) else 0.0
        return NormReport(value=value, method="exact-eigen", residual=0.0, levels_used=a.fock.max_level)
    value, residual = _power_iteration(b, tol, maxiter)
    return NormReport(value=value, method="power-iteration", residual=residual, levels_used=a.fock.max_level)


# ---------------------------------------------------------------------------
# distinguished operators


def number_operator(fock: TruncatedFock, q: float) -> LevelOperator:
    """Sum over the window of a+(i) a(i); level-preserving on the truncation."""
    _check_q(q)
    lo, hi = fock.window
    total = sp.csr_matrix((fock.dim, fock.dim))
    for i in range(lo, hi + 1):
        total = total + matrix_creator(i, fock).matrix @ matrix_annihilator(i, fock, q).matrix
    return LevelOperator(fock, total)


def m_operator(fock: TruncatedFock, q: float) -> LevelOperator:
    """The positive operator fixing the vacuum and cycling slot k to the
    front with weight q**(k-1); invertible for |q| < 1."""
    _check_q(q)
    rows, cols, vals = [], [], []
    for idx, word in enumerate(fock.basis):
        if not word:
            rows.append(idx)
            cols.append(idx)
            vals.append(1.0)
            continue
        for k in range(len(word)):
            target = (word[k],) + word[:k] + word[k + 1:]
            rows.append(fock.index[target])
            cols.append(idx)
            vals.append(q**k)
    return LevelOperator(fock, sp.coo_matrix((vals, (rows, cols)), shape=(fock.dim, fock.dim)))
