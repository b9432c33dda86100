"""Exact arithmetic in Z[sqrt(2), sqrt(3)] for affine cycle exponents."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class QuadInt:
    """a + b*sqrt(2) + c*sqrt(3) + d*sqrt(6) with integer coefficients."""

    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0

    def __add__(self, other: "QuadInt") -> "QuadInt":
        return QuadInt(self.a + other.a, self.b + other.b,
                       self.c + other.c, self.d + other.d)

    def __sub__(self, other: "QuadInt") -> "QuadInt":
        return QuadInt(self.a - other.a, self.b - other.b,
                       self.c - other.c, self.d - other.d)

    def __mul__(self, other: "QuadInt") -> "QuadInt":
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        return QuadInt(
            a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * d1 * d2,
            a1 * b2 + b1 * a2 + 3 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    def as_int(self) -> int | None:
        """The rational-integer value, or None when irrational parts remain."""
        if self.b == 0 and self.c == 0 and self.d == 0:
            return self.a
        return None


ONE = QuadInt(1, 0, 0, 0)


def sqrt_of_int(w: int) -> QuadInt:
    """sqrt(w) as a QuadInt; requires the squarefree part of w in {1, 2, 3, 6}."""
    if w < 0:
        raise ValueError(f"cannot take sqrt of negative weight {w}")
    if w == 0:
        return QuadInt()
    m = math.isqrt(w)
    while w % (m * m):
        m -= 1
    r = w // (m * m)
    if r == 1:
        return QuadInt(a=m)
    if r == 2:
        return QuadInt(b=m)
    if r == 3:
        return QuadInt(c=m)
    if r == 6:
        return QuadInt(d=m)
    raise ValueError(f"sqrt({w}) is not in Z[sqrt(2), sqrt(3)]")
