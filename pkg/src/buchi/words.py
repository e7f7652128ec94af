"""Normal-form words in the group generated by B and J.

Every element has a unique spelling ``J^l B^{n_k} J ... J B^{n_1} J^r`` with
all ``n_i != 0`` and ``l, r`` in {0, 1}, because the group is the free product
of an infinite cyclic group (B) and a group of order two (J).
"""

from __future__ import annotations

import itertools
import operator
import re
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple, Union

import numpy as np

from . import _fast
from .core import I, J, Mat3, Triple, apply_left, matmul

# A token is either the string "J" or an int n != 0 standing for B^n.
Token = Union[str, int]


@dataclass(frozen=True, order=True)
class Word:
    ell: int = 0
    exponents: Tuple[int, ...] = ()
    r: int = 0

    def __post_init__(self):
        if self.ell not in (0, 1) or self.r not in (0, 1):
            raise ValueError("ell and r must be 0 or 1")
        if 0 in self.exponents:
            raise ValueError("block exponents must be nonzero")
        if not self.exponents and self.ell:
            raise ValueError("the bare J is spelled Word(r=1)")

    @property
    def length(self) -> int:
        return len(self.exponents)

    def tokens(self) -> List[Token]:
        k = len(self.exponents)
        core: List[Token] = ["J"] * max(2 * k - 1, 0)
        core[::2] = self.exponents
        return (["J"] if self.ell else []) + core + (["J"] if self.r else [])

    def __str__(self) -> str:
        return format_word(self)

    def __mul__(self, other: "Word") -> "Word":
        return word_mul(self, other)

    def __invert__(self) -> "Word":
        return word_inv(self)


IDENTITY = Word()
WORD_J = Word(r=1)


def word_b(n: int) -> Word:
    return Word(exponents=(n,)) if n else IDENTITY


def word_normalize(tokens: Sequence[Token]) -> Word:
    """Reduce a product of J and B^n factors with J*J = I and B^m B^n = B^(m+n)."""
    stack: List[Token] = []
    for tok in tokens:
        if tok == "J":
            if stack and stack[-1] == "J":
                stack.pop()
            else:
                stack.append("J")
            continue
        if isinstance(tok, bool) or not isinstance(tok, int):
            raise ValueError(f"bad token {tok!r}")
        if tok == 0:
            continue
        if stack and stack[-1] != "J":
            merged = stack.pop() + tok
            if merged:
                stack.append(merged)
            # a J exposed by the cancellation is handled by the next token
        else:
            stack.append(tok)
    return _from_reduced(stack)


def _from_reduced(stack: List[Token]) -> Word:
    # a reduced token list alternates between J and nonzero exponents
    if not stack:
        return IDENTITY
    if len(stack) == 1 and stack[0] == "J":
        return WORD_J
    ell = int(stack[0] == "J")
    r = int(stack[-1] == "J")
    return Word(ell, tuple(stack[ell : len(stack) - r : 2]), r)


def _common_prefix(a: Tuple[int, ...], b: Tuple[int, ...]) -> int:
    # binary search on slice equality keeps the scan inside C
    lo, hi = 0, min(len(a), len(b))
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if a[:mid] == b[:mid]:
            lo = mid
        else:
            hi = mid - 1
    return lo


def word_mul(w1: Word, w2: Word) -> Word:
    """Product in normal form; only the junction of the two words can cancel."""
    e1, e2 = w1.exponents, w2.exponents
    if not e1:
        # w1 is I or J; a J only toggles the leading J of w2
        if not w1.r:
            return w2
        if not e2:
            return IDENTITY if w2.r else WORD_J
        return Word(1 - w2.ell, e2, w2.r)
    if not e2:
        return Word(w1.ell, e1, 1 - w1.r) if w2.r else w1
    if w1.r != w2.ell:
        # a single J separates the two words
        return Word(w1.ell, e1 + e2, w2.r)
    # the facing blocks touch; whole block pairs cancel while they are inverse
    n1, n2 = len(e1), len(e2)
    m = _common_prefix(tuple(map(operator.neg, reversed(e1))), e2)
    if m < n1 and m < n2:
        merged = e1[n1 - 1 - m] + e2[m]
        return Word(w1.ell, e1[: n1 - 1 - m] + (merged,) + e2[m + 1 :], w2.r)
    if m == n1 and m == n2:
        return WORD_J if w1.ell != w2.r else IDENTITY
    if m == n1:
        # a separator J of w2 now meets the leading J of w1, if any
        return Word(1 - w1.ell, e2[m:], w2.r)
    return Word(w1.ell, e1[: n1 - m], 1 - w2.r)


def word_inv(w: Word) -> Word:
    # reversing a normal form keeps it normal
    return Word(w.r, tuple(map(operator.neg, reversed(w.exponents))), w.ell) if w.exponents else w


def b_power(n: int) -> Mat3:
    """B^n via the integer recurrence P_n = 6 P_{n-1} - P_{n-2} on the upper-left block."""
    # (p11, p12, p21, p22) for P_{k-1} and P_k
    prev, cur = (1, 0, 0, 1), (3, 4, 2, 3)
    if n == 0:
        cur = prev
    elif n > 0:
        for _ in range(n - 1):
            prev, cur = cur, tuple(6 * c - p for c, p in zip(cur, prev))
    else:
        # run backward: P_{k-2} = 6 P_{k-1} - P_k
        cur, prev = prev, cur
        for _ in range(-n):
            prev, cur = cur, tuple(6 * c - p for c, p in zip(cur, prev))
    a, b, c, d = cur
    return ((a, b, 0), (c, d, 0), (0, 0, 1))


def word_eval(w: Word) -> Mat3:
    """The exact integer matrix of ``w``, assembled column by column."""
    cols = [word_apply(w, e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    return tuple(tuple(c[i] for c in cols) for i in range(3))


def word_eval_naive(w: Word) -> Mat3:
    """Left-to-right product of the factor matrices (reference for ``word_eval``)."""
    m = I
    for tok in w.tokens():
        m = matmul(m, J if tok == "J" else b_power(tok))
    return m


def word_apply(w: Word, x) -> Triple:
    """word_eval(w) . x, computed on the vector so long words stay cheap."""
    x = tuple(x)
    if max(abs(v) for v in x) < _fast.LIMIT:
        ok, y1, y2, y3 = _fast.apply_word(
            w.ell, np.asarray(w.exponents, dtype=np.int64), w.r, x[0], x[1], x[2]
        )
        if ok:
            return Triple(int(y1), int(y2), int(y3))
    for tok in reversed(w.tokens()):
        x = apply_left(J if tok == "J" else b_power(tok), x)
    return Triple(*x)


def word_length(w: Word) -> int:
    return w.length


_TOKEN_RE = re.compile(r"^(?:J|I|B(?:\^(-?\d+))?)$")


def parse_word(text: str) -> Word:
    """Parse ``"B^-1 J B^-2 J"`` style text; ``I`` is the identity."""
    tokens: List[Token] = []
    for part in text.split():
        m = _TOKEN_RE.match(part)
        if not m:
            raise ValueError(f"bad word token {part!r}")
        if part == "I":
            continue
        if part == "J":
            tokens.append("J")
        else:
            n = int(m.group(1)) if m.group(1) is not None else 1
            if n == 0:
                raise ValueError("B^0 is not a valid token")
            tokens.append(n)
    return word_normalize(tokens)


def format_word(w: Word) -> str:
    toks = w.tokens()
    if not toks:
        return "I"
    return " ".join("J" if t == "J" else ("B" if t == 1 else f"B^{t}") for t in toks)


def iter_words(max_k: int, max_abs_exp: int, min_k: int = 0) -> Iterator[Word]:
    """All normal-form words with min_k..max_k blocks and |exponents| <= max_abs_exp."""
    exps = [n for n in range(-max_abs_exp, max_abs_exp + 1) if n]
    for k in range(min_k, max_k + 1):
        if k == 0:
            yield IDENTITY
            yield WORD_J
            continue
        for combo in itertools.product(exps, repeat=k):
            for ell in (0, 1):
                for r in (0, 1):
                    yield Word(ell, combo, r)


def free_product_identity_scan(max_k: int, max_abs_exp: int) -> dict:
    """Evaluate every word with 1..max_k blocks and collect those equal to I.

    The only other nonempty normal form, the bare J, is reported separately.
    """
    if max_k < 1:
        raise ValueError("max_k must be >= 1")
    checked = 0
    hits = []
    for w in iter_words(max_k, max_abs_exp, min_k=1):
        checked += 1
        if word_eval_naive(w) == I:
            hits.append(w)
    return {"checked": checked, "identities": hits, "j_is_identity": word_eval_naive(WORD_J) == I}
