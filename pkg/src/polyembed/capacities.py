"""Classical bounds for embedding a polydisk P(r, s) into a ball B(a).

Conventions: P(r, s) is the product of disks of area r and s, B(a) the ball
of capacity a, so vol P(r, s) = r*s and vol B(a) = a**2 / 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from polyembed.core import format_rational, parse_rational


@dataclass(frozen=True)
class Polydisk:
    r: Fraction
    s: Fraction

    def __post_init__(self):
        r, s = parse_rational(self.r), parse_rational(self.s)
        if r <= 0 or s <= 0:
            raise ValueError("polydisk factors must be positive")
        r, s = min(r, s), max(r, s)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)

    def scaled(self, factor) -> "Polydisk":
        factor = parse_rational(factor)
        return Polydisk(self.r * factor, self.s * factor)

    def __str__(self) -> str:
        return f"polydisk:{format_rational(self.r)},{format_rational(self.s)}"


@dataclass(frozen=True)
class Ball:
    a: Fraction

    def __post_init__(self):
        a = parse_rational(self.a)
        if a <= 0:
            raise ValueError("ball capacity must be positive")
        object.__setattr__(self, "a", a)

    def scaled(self, factor) -> "Ball":
        return Ball(self.a * parse_rational(factor))

    def __str__(self) -> str:
        return f"ball:{format_rational(self.a)}"


DomainShape = Union[Polydisk, Ball]


def parse_domain(text: str) -> DomainShape:
    """Parse ``polydisk:r,s`` or ``ball:a``."""
    kind, _, params = text.partition(":")
    values = [parse_rational(v) for v in params.split(",")] if params else []
    if kind == "polydisk" and len(values) == 2:
        return Polydisk(*values)
    if kind == "ball" and len(values) == 1:
        return Ball(values[0])
    raise ValueError(f"domain must be polydisk:r,s or ball:a, got {text!r}")


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


@dataclass(frozen=True)
class SqrtValue:
    """The number sqrt(radicand), kept exact."""

    radicand: Fraction

    @property
    def exact(self) -> Optional[Fraction]:
        return _rational_sqrt(self.radicand)

    def __float__(self) -> float:
        return math.sqrt(self.radicand)

    @property
    def decimal(self) -> str:
        return f"{float(self):.6f}"

    def __str__(self) -> str:
        ex = self.exact
        return format_rational(ex) if ex is not None else f"sqrt({format_rational(self.radicand)})"

    def __eq__(self, other) -> bool:
        if isinstance(other, SqrtValue):
            return self.radicand == other.radicand
        if isinstance(other, (int, Fraction)):
            return other >= 0 and self.radicand == Fraction(other) ** 2
        return NotImplemented

    def __lt__(self, other) -> bool:
        other = Fraction(other)
        return other > 0 and self.radicand < other ** 2

    def __hash__(self) -> int:
        return hash(("sqrt", self.radicand))


def volume_bound(p: Polydisk) -> SqrtValue:
    """Least a with vol B(a) >= vol P(r, s), namely sqrt(2rs)."""
    return SqrtValue(2 * p.r * p.s)


def inclusion_bound(p: Polydisk) -> Fraction:
    """P(r, s) sits inside B(r + s)."""
    return p.r + p.s


def folding_bound(p: Polydisk) -> Optional[Fraction]:
    """Infimum reached by symplectic folding, 2 + s/2 after rescaling to r = 1.

    Defined only when s/r > 2; the infimum itself is not attained.
    """
    ratio = p.s / p.r
    if ratio <= 2:
        return None
    return p.r * (2 + ratio / 2)


def ball_sequence(k: int) -> int:
    """k-th term of 0, 1, 1, 2, 2, 2, 3, 3, 3, 3, ...: the ECH capacities of B(1)."""
    if k < 0:
        raise ValueError("capacity index must be nonnegative")
    # least d with (d + 1)(d + 2)/2 >= k + 1
    d = max(0, (math.isqrt(8 * k + 1) - 3) // 2)
    while (d + 1) * (d + 2) // 2 < k + 1:
        d += 1
    return d


def ech_capacity(shape: DomainShape, k: int) -> Fraction:
    """k-th ECH capacity by lattice minimization."""
    if k < 0:
        raise ValueError("capacity index must be nonnegative")
    if isinstance(shape, Ball):
        return shape.a * ball_sequence(k)
    best = None
    for m in range(k + 1):
        n = -(-(k + 1) // (m + 1)) - 1  # least n with (m+1)(n+1) >= k+1
        value = shape.r * m + shape.s * n
        if best is None or value < best:
            best = value
    return best


def ech_bound(p: Polydisk, k_max: int = 100) -> Fraction:
    """Least a with c_k(B(a)) >= c_k(P) for every 1 <= k <= k_max."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    return max(ech_capacity(p, k) / ball_sequence(k) for k in range(1, k_max + 1))


def ech_table(shape: DomainShape, k_max: int) -> list:
    """Rows (k, c_k(shape), d_k, c_k/d_k or None for k = 0)."""
    rows = []
    for k in range(0, k_max + 1):
        c, dk = ech_capacity(shape, k), ball_sequence(k)
        rows.append((k, c, dk, c / dk if dk else None))
    return rows
