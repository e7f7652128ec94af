"""Reduction of solutions of x1^2 - 2 x2^2 + x3^2 = a to the finite kernel set.

Each step applies J, B or B^-1 and never lets |x2| grow; a J step is always
followed by a B-type step, which strictly shrinks |x2|. The inverse of the
applied generators, multiplied in order, is the witness word with
``x = word_eval(witness) . theta``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from math import isqrt
from typing import List, Tuple

import numpy as np

from . import _fast
from .core import B, B_INV, J, Triple, apply_left, as_triple, gamma_form
from .words import IDENTITY, Word, word_normalize


class NotInGammaError(ValueError):
    """The triple does not solve x1^2 - 2 x2^2 + x3^2 = a."""


class InfiniteThetaError(ValueError):
    """The kernel set for a = 0 is the infinite family |x1| = |x2| = |x3|."""

    def __init__(self):
        super().__init__(
            "theta_0 is infinite: it is the family {(x1, x2, x3) : |x1| = |x2| = |x3|}"
        )


class Region(enum.Enum):
    THETA = "theta"
    G_PLUS = "gamma+1"
    G_ZERO = "gamma0"
    G_MINUS = "gamma-1"


# generator labels used in traces; value is the matrix, inverse label alongside
GENERATORS = {"J": J, "B": B, "B^-1": B_INV}
_TOKEN_OF = {"J": "J", "B": 1, "B^-1": -1}
_INVERSE = {"J": "J", "B": "B^-1", "B^-1": "B"}
FIXED = "FIXED"


def check_gamma(x, a: int) -> Triple:
    x = as_triple(x)
    v = gamma_form(x)
    if v != a:
        raise NotInGammaError(f"{x} has form value {v}, not {a}")
    return x


def in_C(x) -> bool:
    ax1, ax2 = abs(x[0]), abs(x[1])
    return ax1 <= ax2 or ax1 >= 2 * ax2


def _in_theta(x: Triple, a: int) -> bool:
    if a < 0:
        return abs(x[1]) >= max(abs(x[0]), abs(x[2]))
    return in_C(x) and in_C((x[2], x[1], x[0]))


def in_theta(x, a: int) -> bool:
    return _in_theta(check_gamma(x, a), a)


def _region(x: Triple, a: int) -> Region:
    if _in_theta(x, a):
        return Region.THETA
    if in_C(x):
        return Region.G_ZERO
    # outside C forces |x2| < |x1| < 2|x2|, so the product is nonzero
    return Region.G_PLUS if x[0] * x[1] > 0 else Region.G_MINUS


def classify_region(x, a: int) -> Region:
    return _region(check_gamma(x, a), a)


_STEP = {Region.G_ZERO: "J", Region.G_PLUS: "B^-1", Region.G_MINUS: "B"}


def _phi(x: Triple, a: int) -> Tuple[Triple, str]:
    region = _region(x, a)
    if region is Region.THETA:
        return x, FIXED
    gen = _STEP[region]
    return apply_left(GENERATORS[gen], x), gen


def phi_step(x, a: int) -> Tuple[Triple, str]:
    """One application of the reduction map; returns (image, generator label or FIXED)."""
    return _phi(check_gamma(x, a), a)


_LABEL_OF_CODE = {_fast.CODE_J: "J", _fast.CODE_BINV: "B^-1", _fast.CODE_B: "B"}
_CODE_OF_LABEL = {v: k for k, v in _LABEL_OF_CODE.items()}


@dataclass(frozen=True)
class ReductionTrace:
    """Result of running the reduction map to its fixed point.

    Only the generator codes are stored; the intermediate triples in ``steps``
    are replayed from ``start`` on first access, since long traces are common.
    """

    start: Triple
    a: int
    codes: bytes
    theta: Triple
    witness_word: Word

    @property
    def n_steps(self) -> int:
        return len(self.codes)

    @property
    def generators(self) -> Tuple[str, ...]:
        return tuple(_LABEL_OF_CODE[c] for c in self.codes)

    @cached_property
    def steps(self) -> Tuple[Tuple[str, Triple], ...]:
        out = []
        cur = self.start
        for gen in self.generators:
            cur = apply_left(GENERATORS[gen], cur)
            out.append((gen, cur))
        return tuple(out)


def _step_cap(x: Triple) -> int:
    # every J is followed by a step that shrinks |x2|, and the last step may be a J
    return 2 * abs(x[1]) + 2


def _overrun(x: Triple, a: int, cap: int) -> RuntimeError:
    return RuntimeError(f"reduction of {x} (a={a}) exceeded {cap} steps; this is an implementation bug")


def _reduce_pure(x: Triple, a: int) -> Tuple[Triple, List[str]]:
    cap = _step_cap(x)
    cur = x
    gens: List[str] = []
    while True:
        nxt, gen = _phi(cur, a)
        if gen == FIXED:
            return cur, gens
        if len(gens) >= cap:
            raise _overrun(x, a, cap)
        gens.append(gen)
        cur = nxt


def _witness(gens: List[str]) -> Word:
    return word_normalize([_TOKEN_OF[_INVERSE[g]] for g in gens]) if gens else IDENTITY


def reduce_to_theta_pure(x, a: int) -> ReductionTrace:
    """Big-integer reference implementation of ``reduce_to_theta``."""
    x = check_gamma(x, a)
    theta, gens = _reduce_pure(x, a)
    codes = bytes(_CODE_OF_LABEL[g] for g in gens)
    return ReductionTrace(x, a, codes, theta, _witness(gens))


def _reduce_fast(x: Triple, a: int):
    cap = _step_cap(x)
    # the cap is only a bound; most traces are far shorter, so grow on demand
    size = min(cap + 1, 4096)
    chunks = []
    total = 0
    cur = x
    while True:
        buf = np.empty(size, dtype=np.int8)
        n, t1, t2, t3 = _fast.reduce_codes(cur[0], cur[1], cur[2], a, buf)
        done = n >= 0
        n = n if done else size
        chunks.append(buf[:n])
        total += n
        cur = (int(t1), int(t2), int(t3))
        if total > cap:
            raise _overrun(x, a, cap)
        if done:
            break
        size = min(2 * size, cap + 1 - total + 1)
    codes = chunks[0] if len(chunks) == 1 else np.concatenate(chunks)
    ell, exps, r = _fast.codes_to_blocks(codes)
    return Triple(*cur), Word(ell, exps, r), codes


def reduce_to_theta(x, a: int) -> ReductionTrace:
    """Run the reduction map from x to the kernel set, recording the generators used."""
    x = check_gamma(x, a)
    if max(abs(v) for v in x) >= _fast.LIMIT:
        return reduce_to_theta_pure(x, a)
    theta, word, codes = _reduce_fast(x, a)
    return ReductionTrace(x, a, codes.tobytes(), theta, word)


def reduce_word(x, a: int) -> Tuple[Triple, Word, int]:
    """(theta, witness_word, n_steps) without building a trace object."""
    x = check_gamma(x, a)
    if max(abs(v) for v in x) >= _fast.LIMIT:
        theta, gens = _reduce_pure(x, a)
        return theta, _witness(gens), len(gens)
    theta, word, codes = _reduce_fast(x, a)
    return theta, word, len(codes)


def _candidates(a: int):
    if a > 0:
        # one outer entry is at least twice |x2|, giving 2 x2^2 <= a
        x2_max = isqrt(a // 2)
    else:
        # some x2^2 - xi^2 is positive, hence >= 2|x2| - 1, and it is at most -a
        x2_max = (1 - a) // 2
    for x2 in range(-x2_max, x2_max + 1):
        total = a + 2 * x2 * x2  # x1^2 + x3^2
        if total < 0:
            continue
        x1_max = isqrt(total) if a > 0 else min(abs(x2), isqrt(total))
        for x1 in range(-x1_max, x1_max + 1):
            rest = total - x1 * x1
            r = isqrt(rest) if rest >= 0 else -1
            if r < 0 or r * r != rest:
                continue
            for x3 in {r, -r}:
                yield Triple(x1, x2, x3)


def enumerate_theta(a: int) -> List[Triple]:
    """The finite kernel set for a != 0, sorted lexicographically."""
    if a == 0:
        raise InfiniteThetaError()
    found = {t for t in _candidates(a) if gamma_form(t) == a and _in_theta(t, a)}
    return sorted(found)


def theta_box_scan(a: int, box: int) -> List[Triple]:
    """Brute-force kernel members with every |x_i| <= box (oracle for enumerate_theta)."""
    out = []
    rng = range(-box, box + 1)
    for x1 in rng:
        for x2 in rng:
            for x3 in rng:
                t = Triple(x1, x2, x3)
                if gamma_form(t) == a and _in_theta(t, a):
                    out.append(t)
    return out

