"""Exact symbolic algebra of creator/annihilator words.

A word is a sequence of letters ('+', i) (creator of mode i) or ('-', i)
(annihilator of mode i).  Normal ordering rewrites every annihilator past
every creator using

    a_i a_j+  ->  q a_j+ a_i  +  [i == j] * 1

and a WickExpr is a finite sum of normal-ordered monomials with exact
QPolynomial coefficients.  The vacuum expectation of an expression is the
coefficient of the empty monomial: every a+...a monomial with letters
kills the vacuum on one side or the other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import SizeError
from .qcombinat import QPolynomial

Letter = tuple[str, int]  # ('+', mode) creator, ('-', mode) annihilator

#: Default cap on word length fed to the rewriter.
WORD_CAP = 16

MonomialKey = tuple[tuple[int, ...], tuple[int, ...]]  # (creator modes, annihilator modes)

_Q = QPolynomial.monomial(1)
_ONE = QPolynomial.one()


@dataclass(frozen=True)
class WickMonomial:
    """coeff * a+(c1)...a+(ci) a(r1)...a(rj), already normal-ordered."""

    creators: tuple[int, ...]
    annihilators: tuple[int, ...]
    coeff: QPolynomial = field(default_factory=QPolynomial.one)

    @property
    def key(self) -> MonomialKey:
        return (self.creators, self.annihilators)

    def letters(self) -> tuple[Letter, ...]:
        return tuple(("+", m) for m in self.creators) + tuple(("-", m) for m in self.annihilators)

    def mode_span(self) -> tuple[int, int]:
        modes = self.creators + self.annihilators
        if not modes:
            return (0, 0)
        return (min(modes), max(modes))


class WickExpr:
    """Finite sum of normal-ordered monomials; immutable value object."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[MonomialKey, QPolynomial] = ()):
        cleaned = {k: c for k, c in dict(terms).items() if not c.is_zero}
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, *a):
        raise AttributeError("WickExpr is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "WickExpr":
        return cls({})

    @classmethod
    def scalar(cls, coeff) -> "WickExpr":
        if isinstance(coeff, int):
            coeff = QPolynomial((coeff,))
        return cls({((), ()): coeff})

    @classmethod
    def monomial(cls, creators: Sequence[int], annihilators: Sequence[int], coeff: QPolynomial = _ONE) -> "WickExpr":
        return cls({(tuple(creators), tuple(annihilators)): coeff})

    # -- ring structure ----------------------------------------------------

    def __add__(self, other: "WickExpr") -> "WickExpr":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return WickExpr(out)

    def __sub__(self, other: "WickExpr") -> "WickExpr":
        return self + other.scale(-1)

    def scale(self, factor) -> "WickExpr":
        if isinstance(factor, int):
            return WickExpr({k: c.scale(factor) for k, c in self.terms.items()})
        return WickExpr({k: c * factor for k, c in self.terms.items()})

    def __mul__(self, other: "WickExpr") -> "WickExpr":
        return multiply(self, other)

    def __pow__(self, n: int) -> "WickExpr":
        if n < 0:
            raise ValueError("negative powers are not defined")
        out = WickExpr.scalar(1)
        for _ in range(n):
            out = out * self
        return out

    # -- symmetries --------------------------------------------------------

    def shift(self, k: int) -> "WickExpr":
        """Translate every mode index by k (the shift automorphism, iterated)."""
        return WickExpr(
            {
                (tuple(m + k for m in cs), tuple(m + k for m in as_)): c
                for (cs, as_), c in self.terms.items()
            }
        )

    def time_reverse(self) -> "WickExpr":
        """Negate every mode index (conjugates the shift to its inverse)."""
        return WickExpr(
            {
                (tuple(-m for m in cs), tuple(-m for m in as_)): c
                for (cs, as_), c in self.terms.items()
            }
        )

    def star(self) -> "WickExpr":
        """Formal adjoint: reverse each monomial and swap creators/annihilators."""
        return WickExpr(
            {
                (tuple(reversed(as_)), tuple(reversed(cs))): c
                for (cs, as_), c in self.terms.items()
            }
        )

    # -- queries -----------------------------------------------------------

    def vacuum_expectation(self) -> QPolynomial:
        return self.terms.get(((), ()), QPolynomial.zero())

    def monomials(self) -> Iterable[WickMonomial]:
        for (cs, as_), c in sorted(self.terms.items()):
            yield WickMonomial(cs, as_, c)

    def modes(self) -> set[int]:
        out: set[int] = set()
        for cs, as_ in self.terms:
            out.update(cs)
            out.update(as_)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, WickExpr) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"WickExpr({self.terms!r})"

    def __str__(self) -> str:
        """Canonical form: "(poly) a+(i1) a+(i2) a(j1) ..." terms joined by ' + '."""
        if not self.terms:
            return "0"
        parts = []
        for mono in self.monomials():
            ops = " ".join(
                [f"a+({m})" for m in mono.creators] + [f"a({m})" for m in mono.annihilators]
            )
            coeff = f"({mono.coeff})"
            parts.append(f"{coeff} {ops}".strip())
        return " + ".join(parts)


def creator(i: int) -> WickExpr:
    return WickExpr.monomial((i,), ())


def annihilator(i: int) -> WickExpr:
    return WickExpr.monomial((), (i,))


def field_op(i: int) -> WickExpr:
    """Self-adjoint part a(i) + a+(i)."""
    return creator(i) + annihilator(i)


# ---------------------------------------------------------------------------
# normal ordering


_rewrite_cache: dict[tuple[tuple[Letter, ...], str], dict[MonomialKey, QPolynomial]] = {}


def _find_adjacency(word: tuple[Letter, ...], strategy: str) -> int:
    positions = range(len(word) - 1) if strategy == "leftmost" else range(len(word) - 2, -1, -1)
    for p in positions:
        if word[p][0] == "-" and word[p + 1][0] == "+":
            return p
    return -1


def _rewrite(word: tuple[Letter, ...], strategy: str) -> dict[MonomialKey, QPolynomial]:
    cached = _rewrite_cache.get((word, strategy))
    if cached is not None:
        return cached
    p = _find_adjacency(word, strategy)
    if p < 0:
        split = sum(1 for let in word if let[0] == "+")
        key = (tuple(m for _, m in word[:split]), tuple(m for _, m in word[split:]))
        result = {key: _ONE}
    else:
        i = word[p][1]
        j = word[p + 1][1]
        swapped = word[:p] + (("+", j), ("-", i)) + word[p + 2:]
        result = {k: c * _Q for k, c in _rewrite(swapped, strategy).items()}
        if i == j:
            for k, c in _rewrite(word[:p] + word[p + 2:], strategy).items():
                result[k] = result[k] + c if k in result else c
        result = {k: c for k, c in result.items() if not c.is_zero}
    _rewrite_cache[(word, strategy)] = result
    return result


def normal_order(word: Sequence[Letter], strategy: str = "leftmost", cap: int = WORD_CAP) -> WickExpr:
    """Rewrite a word of letters into its normal-ordered WickExpr.

    The q-relation strictly decreases the number of (annihilator, creator)
    out-of-order pairs at every step, so the rewriting terminates; the
    strategy parameter exists so confluence can be *tested*, not assumed.
    """
    word = tuple(word)
    if len(word) > cap:
        raise SizeError(f"normal_order: word length {len(word)} exceeds cap {cap}")
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    return WickExpr(_rewrite(word, strategy))


def multiply(x: WickExpr, y: WickExpr, cap: int = WORD_CAP) -> WickExpr:
    """Product in the q-relation algebra: concatenate monomials, re-order."""
    out: dict[MonomialKey, QPolynomial] = {}
    for (c1, a1), p1 in x.terms.items():
        for (c2, a2), p2 in y.terms.items():
            word = (
                tuple(("+", m) for m in c1)
                + tuple(("-", m) for m in a1)
                + tuple(("+", m) for m in c2)
                + tuple(("-", m) for m in a2)
            )
            if len(word) > cap:
                raise SizeError(f"multiply: concatenated word length {len(word)} exceeds cap {cap}")
            coeff = p1 * p2
            for k, c in _rewrite(word, "leftmost").items():
                contrib = c * coeff
                out[k] = out[k] + contrib if k in out else contrib
    return WickExpr(out)


def vacuum_expectation(x: WickExpr) -> QPolynomial:
    return x.vacuum_expectation()


def shift(x: WickExpr, k: int) -> WickExpr:
    return x.shift(k)


def time_reverse(x: WickExpr) -> WickExpr:
    return x.time_reverse()
