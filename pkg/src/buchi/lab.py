"""Search and analysis of longer Buchi sequences.

Length-5 sequences are studied through the matrix M_x = J M3 M1^-1 that sends
(x1, x2, x3) to (x5, x4, x3); length-8 sequences through their canonical
length-5 windows.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .core import (
    B,
    B_INV,
    J,
    Triple,
    apply_left,
    is_perfect_square,
    is_trivial_sequence,
    second_differences,
)
from .decompose import DELTA2, classify_orbit_mod8, decompose
from .reduction import InfiniteThetaError, enumerate_theta
from .words import WORD_J, Word, format_word, word_apply, word_b, word_inv, word_mul

log = logging.getLogger(__name__)

ODD_TARGET = Triple(-1, 0, 1)
EVEN_TARGET = Triple(2, 1, 0)
_B_WORDS = (word_b(1), word_b(-1))

# fixed trial order over (flip x1, flip x3, flip x5)
_FLIP_ORDER = (
    (0, 0, 0),
    (0, 0, 1),
    (0, 1, 0),
    (1, 0, 0),
    (0, 1, 1),
    (1, 0, 1),
    (1, 1, 0),
    (1, 1, 1),
)

# numpy int64 fast path is exact while 2*bound^2 + |a| stays below this
_FAST_LIMIT = 2**52


class HensleyParityError(ValueError):
    """u must be a nonzero even integer."""


class HensleyDivisibilityError(ValueError):
    """u must divide v^2 - 1."""


# -- extension ------------------------------------------------------------------


def extend_sequence(s: Sequence[int], a: int = 2, direction: str = "forward") -> List[Tuple[int, ...]]:
    """All one-term extensions of ``s`` that keep the second difference of squares equal to a."""
    if len(s) < 2:
        raise ValueError("need at least two terms to extend")
    if direction == "backward":
        return [tuple(reversed(e)) for e in extend_sequence(tuple(reversed(s)), a, "forward")]
    if direction != "forward":
        raise ValueError(f"unknown direction {direction!r}")
    t = 2 * s[-1] ** 2 - s[-2] ** 2 + a
    r = is_perfect_square(t)
    if r is None:
        return []
    base = tuple(s)
    return [base + (r,)] if r == 0 else [base + (r,), base + (-r,)]


def _extend_nonneg(s: Tuple[int, ...], a: int, length: int) -> Optional[Tuple[int, ...]]:
    while len(s) < length:
        r = is_perfect_square(2 * s[-1] ** 2 - s[-2] ** 2 + a)
        if r is None:
            return None
        s = s + (r,)
    return s


def sign_variants(s: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """Distinct sign flips of ``s`` (zeros are not doubled)."""
    choices = [(v,) if v == 0 else (v, -v) for v in s]
    yield from itertools.product(*choices)


# -- records ---------------------------------------------------------------------


@dataclass(frozen=True)
class SearchRecord:
    seq: Tuple[int, ...]
    a: int
    trivial: bool
    delta: Optional[Triple] = None
    mx_word: Optional[Word] = None
    mx_length: Optional[int] = None
    canonical: Optional[bool] = None
    flip_mask: Optional[Tuple[int, ...]] = None
    kind: str = "record"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "seq": list(self.seq),
            "a": self.a,
            "trivial": self.trivial,
            "delta": list(self.delta) if self.delta is not None else None,
            "mx_word": format_word(self.mx_word) if self.mx_word is not None else None,
            "mx_length": self.mx_length,
            "canonical": self.canonical,
            "flip_mask": list(self.flip_mask) if self.flip_mask is not None else None,
        }


def make_record(seq: Tuple[int, ...], a: int) -> SearchRecord:
    trivial = is_trivial_sequence(seq)
    delta = mx_word = mx_length = canonical = flip_mask = None
    if a == 2:
        delta = classify_orbit_mod8(seq[:3])
        if len(seq) == 5:
            norm, flip_mask = sign_normalize_5(seq)
            mx = compute_mx(norm).mx
            mx_word, mx_length = mx, mx.length
            canonical = is_canonical(seq)
    kind = "record"
    if not trivial and len(seq) >= 5:
        kind = "discovery"
    return SearchRecord(seq, a, trivial, delta, mx_word, mx_length, canonical, flip_mask, kind)


# -- search -------------------------------------------------------------------


def _np_isqrt(t: np.ndarray) -> np.ndarray:
    """Exact floor square root of a nonnegative int64 array below _FAST_LIMIT."""
    r = np.floor(np.sqrt(t.astype(np.float64))).astype(np.int64)
    # float sqrt can be off by one near squares; correct it in integers
    r -= (r * r > t).astype(np.int64)
    r += ((r + 1) * (r + 1) <= t).astype(np.int64)
    return r


def _row_hits(x1: int, bound: int, a: int) -> List[Tuple[int, int]]:
    """(x2, x3) with 0 <= x2 <= bound, x3 >= 0 and x3^2 = 2 x2^2 - x1^2 + a."""
    if 2 * bound * bound + x1 * x1 + abs(a) < _FAST_LIMIT:
        x2 = np.arange(bound + 1, dtype=np.int64)
        t = 2 * x2 * x2 - x1 * x1 + a
        ok = t >= 0
        tt = np.where(ok, t, 0)
        r = _np_isqrt(tt)
        idx = np.nonzero(ok & (r * r == tt))[0]
        return [(int(i), int(r[i])) for i in idx]
    out = []
    for x2 in range(bound + 1):
        r = is_perfect_square(2 * x2 * x2 - x1 * x1 + a)
        if r is not None:
            out.append((x2, r))
    return out


def _search_stripe(args) -> List[SearchRecord]:
    x1_lo, x1_hi, length, bound, a, nontrivial_only, dedupe_reversal = args
    out = []
    for x1 in range(x1_lo, x1_hi):
        for x2, x3 in _row_hits(x1, bound, a):
            seq = _extend_nonneg((x1, x2, x3), a, length)
            if seq is None:
                continue
            if dedupe_reversal:
                rev = seq[::-1]
                if rev < seq and rev[0] <= bound and rev[1] <= bound:
                    continue
            rec = make_record(seq, a)
            if nontrivial_only and rec.trivial:
                continue
            out.append(rec)
    return out


def _stripes(start: int, bound: int, width: int):
    lo = start
    while lo <= bound:
        hi = min(lo + width, bound + 1)
        yield lo, hi
        lo = hi


def search_buchi(
    length: int,
    bound: int,
    a: int = 2,
    nontrivial_only: bool = False,
    *,
    workers: int = 1,
    start_x1: int = 0,
    stripe_width: int = 64,
    dedupe_reversal: bool = False,
    on_stripe_done: Optional[Callable[[int, List[SearchRecord]], None]] = None,
) -> Iterator[SearchRecord]:
    """Sequences of the given length seeded by 0 <= x1, x2 <= bound.

    Only the all-nonnegative representative of each sign class is produced;
    ``sign_variants`` recovers the rest. Records come in (x1, x2) order for any
    worker count. ``on_stripe_done(last_x1, records)`` fires after each stripe.
    """
    if length < 3:
        raise ValueError("length must be >= 3")
    if bound < 1:
        raise ValueError("bound must be >= 1")
    jobs = [
        (lo, hi, length, bound, a, nontrivial_only, dedupe_reversal)
        for lo, hi in _stripes(start_x1, bound, stripe_width)
    ]

    def emit(job, recs):
        yield from recs
        # fires only once the consumer has taken every record of the stripe
        if on_stripe_done is not None:
            on_stripe_done(job[1] - 1, recs)

    if workers <= 1 or len(jobs) <= 1:
        for job in jobs:
            yield from emit(job, _search_stripe(job))
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for job, recs in zip(jobs, pool.map(_search_stripe, jobs)):
            yield from emit(job, recs)


# -- Hensley parametrization ---------------------------------------------------


def hensley_generate(u: int, v: int) -> Triple:
    """The triple (x1, x1+u+v, x1+u+2v) with x1 = (v^2-1)/u - u/2; it solves the a = 2 equation."""
    if u == 0 or u % 2:
        raise HensleyParityError(f"u={u} must be a nonzero even integer")
    if (v * v - 1) % u:
        raise HensleyDivisibilityError(f"u={u} does not divide v^2-1={v * v - 1}")
    x1 = (v * v - 1) // u - u // 2
    return Triple(x1, x1 + u + v, x1 + u + 2 * v)


# -- length 5 -------------------------------------------------------------------


def _check_buchi(s: Sequence[int], n: int, a: int = 2) -> Tuple[int, ...]:
    s = tuple(int(v) for v in s)
    if len(s) != n:
        raise ValueError(f"expected a sequence of length {n}, got {len(s)}")
    if not second_differences(s, a):
        raise ValueError(f"{s} is not a Buchi sequence for a={a}")
    return s


def sign_normalize_5(s: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Flip x1, x3, x5 so both end triples lie in the orbit of (-1,0,1) (odd) or (2,1,0) (even).

    Returns the new sequence and a 0/1 flip mask over all five entries.
    """
    s = _check_buchi(s, 5)
    target = ODD_TARGET if s[0] % 2 else EVEN_TARGET
    for f1, f3, f5 in _FLIP_ORDER:
        cand = (
            -s[0] if f1 else s[0],
            s[1],
            -s[2] if f3 else s[2],
            s[3],
            -s[4] if f5 else s[4],
        )
        if classify_orbit_mod8(cand[:3]) == target and classify_orbit_mod8(cand[2:]) == target:
            mask = (f1, 0, f3, 0, f5)
            return cand, tuple(int(m and v != 0) for m, v in zip(mask, s))
    raise RuntimeError(f"no sign normalization exists for {s}; this should be impossible")


@dataclass(frozen=True)
class MxResult:
    m1: Word
    m2: Word
    m3: Word
    delta: Triple
    delta_prime: Triple
    mx: Word


def compute_mx(s: Sequence[int]) -> MxResult:
    s = _check_buchi(s, 5)
    d1 = decompose(s[0:3])
    d2 = decompose(s[1:4])
    d3 = decompose(s[2:5])
    if d1.delta != d3.delta or d1.delta not in (ODD_TARGET, EVEN_TARGET):
        raise ValueError(
            f"{s} is not sign-normalized: end triples lie over {d1.delta} and {d3.delta}"
        )
    mx = word_mul(word_mul(WORD_J, d3.word), word_inv(d1.word))
    image = word_apply(mx, s[0:3])
    if image != (s[4], s[3], s[2]):
        raise RuntimeError(f"M_x postcondition failed for {s}: got {image}")
    return MxResult(d1.word, d2.word, d3.word, d1.delta, d2.delta, mx)


def _residue_class(v: int) -> Optional[str]:
    r = v % 8
    if r in (1, 5):
        return "A"  # 1 or -3
    if r in (7, 3):
        return "B"  # -1 or 3
    return None


def is_canonical(s: Sequence[int]) -> bool:
    if len(s) != 5:
        raise ValueError("canonical form is defined for length-5 sequences")
    if s[0] % 8 != 2 or s[4] % 8 != 2:
        return False
    c2, c4 = _residue_class(s[1]), _residue_class(s[3])
    return (c4 == "A" and c2 == "B") or (c4 == "B" and c2 == "A")


@dataclass(frozen=True)
class CanonicalWindow:
    j: int  # 1-based start index inside the length-8 sequence
    flip_mask: Tuple[int, ...]  # over all 8 entries
    window: Tuple[int, ...]


def find_canonical_subseq(y: Sequence[int]) -> CanonicalWindow:
    y = _check_buchi(y, 8)
    # the even length-7 subsequence starts where the first entry is even
    offset = 0 if y[0] % 2 == 0 else 1
    z = y[offset : offset + 7]
    k = next((k for k in (1, 3) if z[k - 1] % 8 in (2, 6)), None)
    if k is None:
        raise RuntimeError(f"no entry congruent to +-2 mod 8 among z1, z3 of {y}")
    j = k + offset
    mask = [0] * 8
    win = list(y[j - 1 : j + 4])
    for pos in (0, 4):
        if win[pos] % 8 == 6:
            win[pos] = -win[pos]
            mask[j - 1 + pos] = 1
    if _residue_class(win[1]) == _residue_class(win[3]):
        win[1] = -win[1]
        mask[j] = 1
    window = tuple(win)
    if not is_canonical(window):
        raise RuntimeError(f"window {window} of {y} did not become canonical")
    return CanonicalWindow(j, tuple(mask), window)


def apply_flip_mask(y: Sequence[int], mask: Sequence[int]) -> Tuple[int, ...]:
    return tuple(-v if m else v for v, m in zip(y, mask))


def trivial_sequence(c: int, length: int, signs: Optional[Sequence[int]] = None) -> Tuple[int, ...]:
    """(c+1, c+2, ..., c+length) with optional per-entry signs."""
    vals = [c + n for n in range(1, length + 1)]
    if signs is not None:
        vals = [sg * v for sg, v in zip(signs, vals)]
    return tuple(vals)


# -- scans ----------------------------------------------------------------------


def analyze5(s: Sequence[int]) -> dict:
    """Sign-normalize a length-5 sequence and report its M_x data."""
    norm, mask = sign_normalize_5(s)
    res = compute_mx(norm)
    return {
        "seq": tuple(s),
        "normalized": norm,
        "flip_mask": mask,
        "m1": res.m1,
        "m2": res.m2,
        "m3": res.m3,
        "delta": res.delta,
        "delta_prime": res.delta_prime,
        "mx": res.mx,
        "mx_length": res.mx.length,
        "trivial": is_trivial_sequence(norm),
        "canonical": is_canonical(norm),
    }


@dataclass
class ProblemAReport:
    bound: int
    n_sequences: int = 0
    histogram: Counter = field(default_factory=Counter)  # (mx_length, trivial) -> count
    nontrivial: List[Tuple[int, ...]] = field(default_factory=list)
    violations: List[Tuple[str, Tuple[int, ...]]] = field(default_factory=list)


def problem_a_scan(bound: int, *, workers: int = 1, x2_x4_signs: bool = True) -> ProblemAReport:
    """M_x word lengths over every length-5 sequence within ``bound``.

    With ``x2_x4_signs`` the four sign choices of (x2, x4) are scanned as
    well, since M_x depends on them after normalization.
    """
    report = ProblemAReport(bound)
    for rec in search_buchi(5, bound, 2, workers=workers):
        variants = {rec.seq}
        if x2_x4_signs:
            s = rec.seq
            variants = {(s[0], e2 * s[1], s[2], e4 * s[3], s[4]) for e2 in (1, -1) for e4 in (1, -1)}
        for v in sorted(variants):
            norm, _ = sign_normalize_5(v)
            mx = compute_mx(norm).mx
            trivial = is_trivial_sequence(norm)
            report.n_sequences += 1
            report.histogram[(mx.length, trivial)] += 1
            if not trivial:
                report.nontrivial.append(norm)
                log.warning("non-trivial length-5 sequence found: %s", norm)
            if mx in _B_WORDS and not trivial:
                report.violations.append(("Mx in {B, B^-1} implies trivial", norm))
            if mx.length <= 1 and not trivial:
                report.violations.append(("Mx length <= 1 implies trivial", norm))
    return report


@dataclass
class ProblemBReport:
    bound: int
    n_canonical: int = 0
    n_conforming: int = 0
    nonconforming: List[Tuple[Tuple[int, ...], Word]] = field(default_factory=list)
    violations: List[Tuple[str, Tuple[int, ...]]] = field(default_factory=list)


def problem_b_scan(bound: int, *, workers: int = 1) -> ProblemBReport:
    """Check M_x in {B, B^-1} over every canonical sign variant of the length-5 sequences in range."""
    report = ProblemBReport(bound)
    for rec in search_buchi(5, bound, 2, workers=workers):
        s = rec.seq
        if s[0] % 8 not in (2, 6) or s[4] % 8 not in (2, 6):
            continue
        for v in sign_variants(s):
            if not is_canonical(v):
                continue
            report.n_canonical += 1
            mx = compute_mx(v).mx
            trivial = is_trivial_sequence(v)
            if mx in _B_WORDS:
                report.n_conforming += 1
                if not trivial:
                    report.violations.append(("Mx in {B, B^-1} implies trivial", v))
            else:
                report.nonconforming.append((v, mx))
                log.warning("Problem B nonconforming canonical sequence: %s (Mx=%s)", v, mx)
                if trivial:
                    report.violations.append(("canonical and trivial implies Mx in {B, B^-1}", v))
    return report


def gap_check(s: Sequence[int]) -> bool:
    """Strict decrease of consecutive gaps |y_{n+1}| - |y_n| for a non-trivial increasing sequence."""
    s = tuple(s)
    if len(s) < 3:
        raise ValueError("need at least three terms")
    if is_trivial_sequence(s):
        raise ValueError(f"{s} is trivial")
    ab = [abs(v) for v in s]
    if any(ab[i + 1] < ab[i] for i in range(len(ab) - 1)):
        raise ValueError(f"{s} is not increasing in absolute value")
    return all(ab[n + 1] - ab[n] < ab[n] - ab[n - 1] for n in range(1, len(ab) - 1))


# -- orbits ---------------------------------------------------------------------


def orbit_bfs(
    a: int,
    max_depth: Optional[int],
    box: int,
    seeds: Optional[Iterable[Sequence[int]]] = None,
) -> List[Triple]:
    """Closure of the kernel set (DELTA2 for a = 2) under B, B^-1, J inside |x_i| <= box.

    ``max_depth`` counts generator applications; None runs until the frontier is empty.
    """
    if a == 0 and seeds is None:
        raise InfiniteThetaError()
    if seeds is None:
        seeds = DELTA2 if a == 2 else enumerate_theta(a)
    start = [Triple(*s) for s in seeds if max(abs(v) for v in s) <= box]
    seen = set(start)
    frontier = deque(start)
    depth = 0
    while frontier and (max_depth is None or depth < max_depth):
        nxt = deque()
        for x in frontier:
            for g in (B, B_INV, J):
                y = apply_left(g, x)
                if y not in seen and max(abs(y[0]), abs(y[1]), abs(y[2])) <= box:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
        depth += 1
    return sorted(seen)


def gamma_box_scan(a: int, box: int) -> List[Triple]:
    """Every solution of x1^2 - 2 x2^2 + x3^2 = a with all |x_i| <= box, sorted."""
    out = []
    fast = 3 * box * box + abs(a) < _FAST_LIMIT
    x2 = np.arange(-box, box + 1, dtype=np.int64)
    for x1 in range(-box, box + 1):
        if fast:
            t = a - x1 * x1 + 2 * x2 * x2
            ok = (t >= 0) & (t <= box * box)
            tt = np.where(ok, t, 0)
            r = _np_isqrt(tt)
            hits = [(int(x2[i]), int(r[i])) for i in np.nonzero(ok & (r * r == tt))[0]]
        else:
            hits = []
            for v2 in range(-box, box + 1):
                r = is_perfect_square(a - x1 * x1 + 2 * v2 * v2)
                if r is not None and r <= box:
                    hits.append((v2, r))
        for v2, r in hits:
            for x3 in sorted({r, -r}):
                out.append(Triple(x1, v2, x3))
    out.sort()
    return out
