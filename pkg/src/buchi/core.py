"""Exact integer primitives: triples, 3x3 matrices and the two ternary forms.

Everything here works on Python ints, so no intermediate can overflow.
"""

from __future__ import annotations

from math import isqrt
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple


class Triple(NamedTuple):
    x1: int
    x2: int
    x3: int

    def __str__(self) -> str:
        return f"{self.x1},{self.x2},{self.x3}"


Mat3 = Tuple[Tuple[int, int, int], Tuple[int, int, int], Tuple[int, int, int]]

I: Mat3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
B: Mat3 = ((3, 4, 0), (2, 3, 0), (0, 0, 1))
B_INV: Mat3 = ((3, -4, 0), (-2, 3, 0), (0, 0, 1))
J: Mat3 = ((0, 0, 1), (0, 1, 0), (1, 0, 0))


def as_triple(x: Iterable[int]) -> Triple:
    vals = tuple(x)
    if len(vals) != 3:
        raise ValueError(f"expected 3 entries, got {len(vals)}")
    return Triple(*(_as_int(v) for v in vals))


def _as_int(v) -> int:
    if isinstance(v, bool):
        raise TypeError("booleans are not integers here")
    if isinstance(v, int):
        return v
    # numpy integers, integral floats from user arrays
    if hasattr(v, "is_integer") and not v.is_integer():
        raise ValueError(f"non-integral entry {v!r}")
    iv = int(v)
    if iv != v:
        raise ValueError(f"non-integral entry {v!r}")
    return iv


def gamma_form(x: Sequence[int]) -> int:
    """x1^2 - 2*x2^2 + x3^2 (column role)."""
    x1, x2, x3 = x
    return x1 * x1 - 2 * x2 * x2 + x3 * x3


def omega_form(x: Sequence[int]) -> int:
    """-2*x1^2 + x2^2 - 2*x3^2 (row role)."""
    x1, x2, x3 = x
    return -2 * x1 * x1 + x2 * x2 - 2 * x3 * x3


def apply_left(m: Mat3, x: Sequence[int]) -> Triple:
    x1, x2, x3 = x
    return Triple(*(r[0] * x1 + r[1] * x2 + r[2] * x3 for r in m))


def apply_right(x: Sequence[int], m: Mat3) -> Triple:
    x1, x2, x3 = x
    return Triple(*(x1 * m[0][j] + x2 * m[1][j] + x3 * m[2][j] for j in range(3)))


def matmul(a: Mat3, b: Mat3) -> Mat3:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)) for i in range(3)
    )


def det(m: Mat3) -> int:
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def column(m: Mat3, j: int) -> Triple:
    return Triple(m[0][j], m[1][j], m[2][j])


def is_perfect_square(n: int) -> Optional[int]:
    """Return the nonnegative root of ``n`` if it is a perfect square, else None."""
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def is_trivial_sequence(s: Sequence[int]) -> bool:
    """True iff there is an integer c with s[n]^2 == (c + n)^2 for every index n.

    Only the sign choices on the first two terms can pin c down; the remaining
    terms are then checked against it.
    """
    if len(s) == 0:
        raise ValueError("empty sequence")
    if len(s) == 1:
        return True
    sq = [v * v for v in s]
    for e0 in (1, -1):
        for e1 in (1, -1):
            c0 = e0 * s[0]
            if e1 * s[1] - c0 != 1:
                continue
            if all(sq[n] == (c0 + n) ** 2 for n in range(len(s))):
                return True
    return False


def second_differences(s: Sequence[int], a: int = 2) -> bool:
    """True iff s[n+1]^2 - 2 s[n]^2 + s[n-1]^2 == a at every interior index."""
    return all(
        s[n + 1] ** 2 - 2 * s[n] ** 2 + s[n - 1] ** 2 == a for n in range(1, len(s) - 1)
    )


def parse_triple(text: str) -> Triple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"triple must look like x1,x2,x3: {text!r}")
    return Triple(*(int(p) for p in parts))


def parse_sequence(text: str) -> Tuple[int, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty sequence")
    return tuple(int(p) for p in parts)


def format_sequence(s: Iterable[int]) -> str:
    return ",".join(str(v) for v in s)
