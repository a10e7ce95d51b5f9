"""Truncated deformed Fock basis, the q-inner product, and Gram blocks.

Basis vectors are Words: finite tuples of integer mode indices, standing
for elementary tensors e_{i1} x ... x e_{in}; the empty word is the
vacuum.  The deformed inner product of two words of equal length is

    <u, v>_q = sum over permutations pi of q**inv(pi) * prod_a [u_a == v_{pi(a)}]

and vanishes between different lengths.  Two words have a nonzero inner
product only when one is a rearrangement of the other, so the full Gram
matrix is block diagonal over (level, letter-multiset) blocks; that block
structure is what keeps everything here cheap.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DomainError, SizeError
from .qcombinat import FACTORIAL_CAP, QPolynomial, all_permutations, inversions

Word = tuple[int, ...]

#: Default cap on the number of basis vectors of a TruncatedFock.
BASIS_CAP = 100_000


class TruncatedFock:
    """All Words over a contiguous mode window [lo, hi] up to a maximum level.

    Basis order is level-major, lexicographic within a level.  Immutable
    after construction; the Gram blocks are built lazily and cached.
    """

    def __init__(self, window: tuple[int, int], max_level: int, basis_cap: int = BASIS_CAP):
        lo, hi = window
        if lo > hi:
            raise ValueError(f"empty mode window [{lo}, {hi}]")
        if max_level < 0:
            raise ValueError("max_level must be nonnegative")
        w = hi - lo + 1
        size = sum(w**k for k in range(max_level + 1))
        if size > basis_cap:
            raise SizeError(
                f"basis of {size} words (window width {w}, max level {max_level}) exceeds cap {basis_cap}"
            )
        self.window = (lo, hi)
        self.max_level = max_level
        basis: list[Word] = []
        for level in range(max_level + 1):
            basis.extend(itertools.product(range(lo, hi + 1), repeat=level))
        self.basis: tuple[Word, ...] = tuple(basis)
        self.index: dict[Word, int] = {w_: i for i, w_ in enumerate(self.basis)}
        self.level_of = np.array([len(w_) for w_ in self.basis])
        blocks: dict[tuple[int, Word], list[int]] = {}
        for i, word in enumerate(self.basis):
            blocks.setdefault((len(word), tuple(sorted(word))), []).append(i)
        self.block_indices: dict[tuple[int, Word], tuple[int, ...]] = {
            k: tuple(v) for k, v in blocks.items()
        }
        self._gram_blocks: tuple[GramBlock, ...] | None = None
        self._gram_factors: dict = {}  # q -> qops.GramFactor, owned by qops

    @property
    def width(self) -> int:
        lo, hi = self.window
        return hi - lo + 1

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains_mode(self, i: int) -> bool:
        lo, hi = self.window
        return lo <= i <= hi

    def level_indices(self, level: int) -> np.ndarray:
        return np.nonzero(self.level_of == level)[0]

    def gram_blocks(self) -> tuple["GramBlock", ...]:
        if self._gram_blocks is None:
            self._gram_blocks = tuple(gram_blocks(self))
        return self._gram_blocks

    def __repr__(self) -> str:
        lo, hi = self.window
        return f"TruncatedFock(window=[{lo},{hi}], max_level={self.max_level}, dim={self.dim})"


def build_basis(window: tuple[int, int], max_level: int, basis_cap: int = BASIS_CAP) -> TruncatedFock:
    return TruncatedFock(window, max_level, basis_cap=basis_cap)


# ---------------------------------------------------------------------------
# the q-inner product, two ways


def inner_q_bruteforce(u: Word, v: Word, cap: int = FACTORIAL_CAP) -> QPolynomial:
    """Direct sum over the symmetric group; the slow, obviously-correct route."""
    if len(u) != len(v):
        return QPolynomial.zero()
    n = len(u)
    if n == 0:
        return QPolynomial.one()
    if n > cap:
        raise SizeError(f"inner_q_bruteforce: level {n} exceeds factorial cap {cap}")
    coeffs = [0] * (n * (n - 1) // 2 + 1)
    for pi in all_permutations(n, cap=cap):
        if all(u[a - 1] == v[pi(a) - 1] for a in range(1, n + 1)):
            coeffs[inversions(pi)] += 1
    return QPolynomial(coeffs)


@lru_cache(maxsize=None)
def inner_q_recursive(u: Word, v: Word) -> QPolynomial:
    """Polynomial-time route: expand on the first slot of u.

    <e_i x u', v>_q = sum_k q^(k-1) [v_k == i] <u', v with slot k removed>_q,
    which is the adjoint relation between creator and annihilator.
    """
    if len(u) != len(v):
        return QPolynomial.zero()
    if not u:
        return QPolynomial.one()
    head, rest = u[0], u[1:]
    acc = QPolynomial.zero()
    for k, letter in enumerate(v):
        if letter == head:
            acc = acc + QPolynomial.monomial(k) * inner_q_recursive(rest, v[:k] + v[k + 1:])
    return acc


# ---------------------------------------------------------------------------
# Gram blocks


@dataclass(frozen=True)
class GramBlock:
    """Exact Gram matrix of one (level, multiset) block of basis words."""

    level: int
    multiset: Word
    indices: tuple[int, ...]
    words: tuple[Word, ...]
    matrix: tuple[tuple[QPolynomial, ...], ...]

    @property
    def size(self) -> int:
        return len(self.words)

    def evaluate(self, q: float) -> np.ndarray:
        return np.array([[entry(q) for entry in row] for row in self.matrix])

    def to_json_dict(self) -> dict:
        return {
            "block": {"level": self.level, "multiset": list(self.multiset)},
            "matrix": [[str(entry) for entry in row] for row in self.matrix],
        }


def gram_blocks(fock: TruncatedFock) -> list[GramBlock]:
    """One exact polynomial Gram block per (level, multiset) class of fock."""
    out = []
    for (level, multiset), indices in fock.block_indices.items():
        words = tuple(fock.basis[i] for i in indices)
        matrix = tuple(
            tuple(inner_q_recursive(wa, wb) for wb in words) for wa in words
        )
        out.append(GramBlock(level=level, multiset=multiset, indices=indices, words=words, matrix=matrix))
    return out


def gram_blocks_json(fock: TruncatedFock) -> str:
    return json.dumps([b.to_json_dict() for b in fock.gram_blocks()], indent=2)


def min_gram_eigenvalue(fock: TruncatedFock, q: float) -> float:
    """Smallest eigenvalue over all evaluated Gram blocks; positive iff the
    evaluated form is an inner product on the truncation."""
    if not abs(q) < 1:
        raise DomainError(f"|q| must be < 1, got q={q}")
    smallest = np.inf
    for block in fock.gram_blocks():
        m = block.evaluate(q)
        if m.shape == (1, 1):
            smallest = min(smallest, m[0, 0])
        else:
            smallest = min(smallest, float(np.linalg.eigvalsh(m)[0]))
    return float(smallest)


# ---------------------------------------------------------------------------
# full level Gram matrices and the PSD proof-step inequality


def level_gram_matrix(width: int, level: int, q: float) -> np.ndarray:
    """Dense width**level Gram matrix of all words of a given level over
    modes 0..width-1, in lexicographic order (so that the index of (i, rest)
    is i * width**(level-1) + index(rest))."""
    words = list(itertools.product(range(width), repeat=level))
    n = len(words)
    m = np.zeros((n, n))
    for a, wa in enumerate(words):
        sa = tuple(sorted(wa))
        for b, wb in enumerate(words):
            if tuple(sorted(wb)) == sa:
                m[a, b] = inner_q_recursive(wa, wb)(q)
    return m


def psd_step_min_eigenvalue(width: int, level: int, q: float) -> float:
    """Smallest eigenvalue of (1/(1-|q|)) * (I kron P^(level-1)) - P^(level).

    Nonnegative (up to rounding) for |q| < 1; this is the matrix inequality
    behind the creator-sum norm bound.
    """
    if not abs(q) < 1:
        raise DomainError(f"|q| must be < 1, got q={q}")
    if level < 1:
        raise ValueError("level must be >= 1")
    p_top = level_gram_matrix(width, level, q)
    p_low = level_gram_matrix(width, level - 1, q)
    lifted = np.kron(np.eye(width), p_low)
    diff = lifted / (1.0 - abs(q)) - p_top
    return float(np.linalg.eigvalsh(diff)[0])
