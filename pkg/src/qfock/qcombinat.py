"""Permutations, inversion statistics and exact polynomials in q.

The deformed inner product weights each permutation pi by q**inv(pi), so
everything downstream rests on two primitives: counting inversions and
doing exact integer polynomial arithmetic in q.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import SizeError

#: Largest n for which full S_n enumeration is allowed (8! = 40320).
FACTORIAL_CAP = 8


@dataclass(frozen=True)
class Permutation:
    """A bijection on {1..n}, stored as the tuple of images (pi(1), ..., pi(n))."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(self.images)}: {self.images}")

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]


def inversions(p: Permutation) -> int:
    """Number of pairs a < b with p(a) > p(b)."""
    im = p.images
    n = len(im)
    return sum(1 for a in range(n) for b in range(a + 1, n) if im[a] > im[b])


def all_permutations(n: int, cap: int = FACTORIAL_CAP) -> Iterator[Permutation]:
    """Yield all n! permutations of {1..n} in lexicographic order of images."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > cap:
        raise SizeError(f"all_permutations: n={n} exceeds factorial cap {cap} ({math.factorial(n)} permutations)")
    for images in itertools.permutations(range(1, n + 1)):
        yield Permutation(images)


class QPolynomial:
    """Exact univariate polynomial in q with arbitrary-precision integer coefficients.

    Canonical form: no trailing zero coefficients; the zero polynomial has an
    empty coefficient tuple.  Instances are immutable and hashable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    def __setattr__(self, *a):
        raise AttributeError("QPolynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "QPolynomial":
        return cls(())

    @classmethod
    def one(cls) -> "QPolynomial":
        return cls((1,))

    @classmethod
    def monomial(cls, power: int, coeff: int = 1) -> "QPolynomial":
        """coeff * q**power"""
        if power < 0:
            raise ValueError("negative powers of q are not representable")
        return cls((0,) * power + (coeff,))

    # -- ring structure ----------------------------------------------------

    def __add__(self, other: "QPolynomial") -> "QPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return QPolynomial(out)

    def __neg__(self) -> "QPolynomial":
        return QPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "QPolynomial") -> "QPolynomial":
        return self + (-other)

    def __mul__(self, other: "QPolynomial") -> "QPolynomial":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return QPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return QPolynomial(out)

    def scale(self, k: int) -> "QPolynomial":
        return QPolynomial(tuple(k * c for c in self.coeffs))

    # -- queries -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __call__(self, q: float) -> float:
        """Evaluate at a numeric q (Horner)."""
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, QPolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"QPolynomial({self.coeffs})"

    def __str__(self) -> str:
        """Canonical human form, e.g. "2 + q", "1 + 2*q + q^3", "0"."""
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                term = str(mag)
            else:
                qpow = "q" if k == 1 else f"q^{k}"
                term = qpow if mag == 1 else f"{mag}*{qpow}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)

    @classmethod
    def parse(cls, text: str) -> "QPolynomial":
        """Inverse of __str__ for canonical poly-strings."""
        s = text.replace(" ", "")
        if s in ("", "0"):
            return cls()
        # normalize leading sign, then split into signed terms
        terms = s.replace("-", "+-").split("+")
        coeffs: dict[int, int] = {}
        for t in terms:
            if not t:
                continue
            sign = 1
            if t.startswith("-"):
                sign = -1
                t = t[1:]
            if "q" not in t:
                coeffs[0] = coeffs.get(0, 0) + sign * int(t)
                continue
            head, _, tail = t.partition("q")
            c = int(head.rstrip("*")) if head.rstrip("*") else 1
            k = int(tail[1:]) if tail.startswith("^") else 1
            coeffs[k] = coeffs.get(k, 0) + sign * c
        out = [0] * (max(coeffs) + 1)
        for k, c in coeffs.items():
            out[k] = c
        return cls(out)


def q_factorial(n: int, cap: int = FACTORIAL_CAP) -> QPolynomial:
    """[n]_q! = prod_{k=1}^{n} (1 + q + ... + q^(k-1)) = sum over S_n of q**inv(pi)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > cap:
        raise SizeError(f"q_factorial: n={n} exceeds factorial cap {cap}")
    out = QPolynomial.one()
    for k in range(1, n + 1):
        out = out * QPolynomial((1,) * k)
    return out
