"""The one-shot verification suite behind ``buchi verify``.

Every check is a named function that returns a short detail string or raises
CheckFailure. Checks run in a fixed order and the runner keeps going after a
failure so the report lists all of them.
"""

from __future__ import annotations

import itertools
import random
import time
import traceback
from dataclasses import dataclass, field
from typing import Callable, FrozenSet, List, Tuple

from .core import B, B_INV, I, J, Triple, apply_left, apply_right, gamma_form, matmul, omega_form
from .decompose import (
    DELTA2,
    ODD_DELTAS,
    SYMMETRIC,
    THETA2_BRIDGE,
    Parity,
    classify_orbit_mod8,
    decompose,
    mod8_exhaustive_check,
    parity,
)
from .lab import (
    _B_WORDS,
    analyze5,
    apply_flip_mask,
    compute_mx,
    find_canonical_subseq,
    gamma_box_scan,
    gap_check,
    hensley_generate,
    is_canonical,
    problem_a_scan,
    problem_b_scan,
    search_buchi,
    sign_normalize_5,
    trivial_sequence,
)
from .reduction import _in_theta, enumerate_theta, reduce_to_theta, reduce_to_theta_pure, theta_box_scan
from .words import (
    WORD_J,
    b_power,
    free_product_identity_scan,
    iter_words,
    parse_word,
    word_apply,
    word_eval,
    word_mul,
)


class CheckFailure(AssertionError):
    pass


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise CheckFailure(msg)


def _signed(*patterns) -> List[Triple]:
    """Expand independent +- signs over the nonzero entries of each pattern."""
    out = set()
    for p in patterns:
        choices = [(v,) if v == 0 else (v, -v) for v in p]
        out.update(Triple(*c) for c in itertools.product(*choices))
    return sorted(out)


EXPECTED_THETA = {
    -2: _signed((0, 1, 0)),
    -1: _signed((1, 1, 0), (0, 1, 1)),
    1: _signed((1, 0, 0), (0, 0, 1)),
    2: _signed((2, 1, 0), (0, 1, 2), (1, 0, 1)),
}

GOLDEN_5 = {
    (-1, 2, 3, -4, 5): ("J B J", "J B^-1 J B^-1 J", "B^-1 J B^-2 J"),
    (2, 3, 4, -5, -6): ("J B J", "J B J B^-1 J B^-1", "B J B^-1 J B^-1 J B^-1 J"),
}


@dataclass(frozen=True)
class VerifyConfig:
    level: str = "quick"
    box: int = 60
    scan_bound: int = 200
    word_len: int = 3
    free_product: Tuple[int, int] = (3, 3)
    n_random: int = 200
    seed: int = 0
    workers: int = 1
    faults: FrozenSet[str] = frozenset()

    @classmethod
    def for_level(cls, level: str, **kw) -> "VerifyConfig":
        if level == "quick":
            return cls(level="quick", **kw)
        if level == "full":
            return cls(
                level="full",
                box=1000,
                scan_bound=10**4,
                word_len=5,
                free_product=(4, 4),
                n_random=2000,
                **kw,
            )
        raise ValueError(f"level must be quick or full, got {level!r}")


# -- checks -------------------------------------------------------------------


def check_action(cfg: VerifyConfig) -> str:
    q_gamma = ((1, 0, 0), (0, -2, 0), (0, 0, 1))
    q_omega = ((-2, 0, 0), (0, 1, 0), (0, 0, -2))
    for name, g in (("B", B), ("B^-1", B_INV), ("J", J)):
        gt = tuple(zip(*g))
        _expect(matmul(matmul(gt, q_gamma), g) == q_gamma, f"{name} does not preserve the column form")
        _expect(matmul(matmul(g, q_omega), gt) == q_omega, f"{name} does not preserve the row form")
    rng = random.Random(cfg.seed)
    words = list(iter_words(3, 4))
    for _ in range(cfg.n_random):
        w = rng.choice(words)
        m = word_eval(w)
        x = Triple(*(rng.randint(-(10**30), 10**30) for _ in range(3)))
        _expect(gamma_form(apply_left(m, x)) == gamma_form(x), f"{w} changes the column form of {x}")
        _expect(omega_form(apply_right(x, m)) == omega_form(x), f"{w} changes the row form of {x}")
        cols = [tuple(m[i][j] for i in range(3)) for j in range(3)]
        _expect([gamma_form(c) for c in cols] == [1, -2, 1], f"columns of {w} in the wrong level sets")
        _expect([omega_form(r) for r in m] == [-2, 1, -2], f"rows of {w} in the wrong level sets")
    return f"{cfg.n_random} random words and triples"


def check_theta_tables(cfg: VerifyConfig) -> str:
    for a, expected in EXPECTED_THETA.items():
        got = enumerate_theta(a)
        if a == 2 and "theta2" in cfg.faults:
            got = [t for t in got if t != (0, 1, 2)] + [Triple(0, 1, 3)]
        extra = sorted(set(got) - set(expected))
        missing = sorted(set(expected) - set(got))
        _expect(not extra and not missing, f"theta_{a} mismatch: unexpected {extra}, missing {missing}")
        box = max(max(abs(v) for v in t) for t in expected) + 3
        _expect(theta_box_scan(a, box) == expected, f"box scan disagrees for theta_{a}")
    for t, (d, w) in THETA2_BRIDGE.items():
        _expect(d in DELTA2 and word_apply(w, d) == t, f"bridge entry {t} -> {d} via {w} is wrong")
    return "theta tables for a in -2,-1,1,2 and the 12-entry bridge"


def check_reduction(cfg: VerifyConfig) -> str:
    pts = gamma_box_scan(2, cfg.box)
    for x in pts:
        tr = reduce_to_theta(x, 2)
        _expect(tr.n_steps <= 2 * abs(x[1]) + 2, f"{x} took {tr.n_steps} steps")
        _expect(tr.theta in EXPECTED_THETA[2], f"{x} reduced to {tr.theta}, outside theta_2")
        _expect(apply_left(word_eval(tr.witness_word), tr.theta) == x, f"round trip failed for {x}")
    rng = random.Random(cfg.seed)
    for x in rng.sample(pts, min(len(pts), 200)):
        _expect(reduce_to_theta(x, 2) == reduce_to_theta_pure(x, 2), f"fast and exact paths differ on {x}")
    for a in (-2, -1, 1, 5, 7):
        for x in gamma_box_scan(a, min(cfg.box, 80)):
            tr = reduce_to_theta(x, a)
            _expect(_in_theta(tr.theta, a), f"{x} (a={a}) stopped outside the kernel")
            _expect(word_apply(tr.witness_word, tr.theta) == x, f"round trip failed for {x} (a={a})")
    return f"{len(pts)} points of the a=2 box {cfg.box}"


def check_decomposition(cfg: VerifyConfig) -> str:
    n = 0
    for w in iter_words(cfg.word_len, 3):
        for d in DELTA2:
            res = decompose(word_apply(w, d))
            n += 1
            _expect(res.delta == d, f"{w} . {d} decomposed over {res.delta}")
            ok = res.word == w or (d in SYMMETRIC and res.word == word_mul(w, WORD_J))
            _expect(ok, f"{w} . {d} decomposed as {res.word}")
    return f"{n} word/delta pairs, length <= {cfg.word_len}"


def check_classifier(cfg: VerifyConfig) -> str:
    classes = set()
    for x in gamma_box_scan(2, cfg.box):
        d = decompose(x)
        classes.add(d.delta)
        _expect(classify_orbit_mod8(x) == d.delta, f"mod-8 class of {x} disagrees with {d.delta}")
        _expect(word_apply(d.word, d.delta) == x, f"decomposition of {x} does not round trip")
        _expect((parity(x) is Parity.ODD) == (d.delta in ODD_DELTAS), f"parity of {x} disagrees")
    _expect(classes == set(DELTA2), f"only {len(classes)} orbit classes seen")
    return "five classes, residues agree with decomposition"


def check_mod8(cfg: VerifyConfig) -> str:
    res = mod8_exhaustive_check()
    _expect(res["checked"] == 512 and not res["violations"], f"violations: {res['violations'][:5]}")
    return f"{res['solutions']} residue solutions, all consecutive-square patterns"


def check_free_product(cfg: VerifyConfig) -> str:
    k, e = cfg.free_product
    res = free_product_identity_scan(k, e)
    _expect(not res["identities"], f"identity words found: {res['identities'][:3]}")
    _expect(not res["j_is_identity"], "J evaluates to I")
    return f"{res['checked']} words with <= {k} blocks, |n| <= {e}"


def _b_power_naive(n: int):
    m = I
    for _ in range(abs(n)):
        m = matmul(m, B if n > 0 else B_INV)
    return m


def check_b_power(cfg: VerifyConfig) -> str:
    for n in range(-30, 31):
        _expect(b_power(n) == _b_power_naive(n), f"B^{n} recurrence mismatch")
    # Cayley-Hamilton for x^3 - 7x^2 + 7x - 1
    b2 = matmul(B, B)
    b3 = matmul(b2, B)
    lhs = tuple(
        tuple(b3[i][j] - 7 * b2[i][j] + 7 * B[i][j] - I[i][j] for j in range(3)) for i in range(3)
    )
    _expect(lhs == ((0,) * 3,) * 3, "B does not satisfy its characteristic polynomial")
    return "n in [-30, 30]"


def check_b_power_rows(cfg: VerifyConfig) -> str:
    for n in range(-30, 31):
        if n == 0:
            continue
        m = b_power(n)
        _expect(all(m[i][i] > 0 for i in range(3)), f"B^{n} has a non-positive diagonal entry")
        jm = matmul(J, m)
        for name, mat in (("B", m), ("JB", jm)):
            _expect(mat[1] not in ((0, 1, 0), (0, -1, 0)), f"{name}^{n} has second row {mat[1]}")
    return "second rows and diagonals for n != 0"


def check_word_scans(cfg: VerifyConfig) -> str:
    k, e = cfg.free_product
    n_m23 = n_pres = 0
    for w in iter_words(k, e):
        m = word_eval(w)
        if m[1][2] == 0:
            n_m23 += 1
            allowed = w.length == 0 or (w.length == 1 and w.r == 0)
            _expect(allowed, f"{w} has zero (2,3) entry but is not I, J, B^n or JB^n")
        if w.ell == 0 and w.r == 1 and w.length >= 1:
            n_pres += 1
            c = [abs(m[i][2]) for i in range(3)]
            _expect(c[0] > c[1] > c[2], f"third column of {w} is not strictly decreasing: {c}")
            _expect(m[1][2] != 0, f"{w} has zero (2,3) entry")
    return f"{n_m23} words with zero (2,3) entry, {n_pres} B..J words"


def _strictly_inc(x) -> bool:
    return abs(x[0]) < abs(x[1]) < abs(x[2])


def _strictly_dec(x) -> bool:
    return abs(x[0]) > abs(x[1]) > abs(x[2])


def check_lemma_suites(cfg: VerifyConfig) -> str:
    rng = random.Random(cfg.seed)
    box = min(cfg.box, 120)
    # squares are monotone off the kernel
    for a in (-2, -1, 0, 1, 2):
        for x in gamma_box_scan(a, box):
            if _in_theta(x, a):
                continue
            sq = [v * v for v in x]
            _expect(sq[0] < sq[1] < sq[2] or sq[0] > sq[1] > sq[2], f"squares of {x} not monotone (a={a})")
            for eps, g in ((1, B), (-1, B_INV)):
                if _strictly_inc(x):
                    y = apply_left(g, x)
                    _expect(gamma_form(y) == a, f"B^{eps} {x} left the level set")
                    _expect(_strictly_dec(y) and eps * y[0] * y[1] > 0, f"B^{eps} {x} = {y}")
    # sign propagation through B^eps
    for _ in range(cfg.n_random * 5):
        x = Triple(*(rng.randint(-500, 500) for _ in range(3)))
        for eps, g in ((1, B), (-1, B_INV)):
            y = apply_left(g, x)
            p, q = eps * x[0] * x[1], eps * y[0] * y[1]
            _expect(p < 0 or q >= 0, f"sign rule 1 fails for {x}, eps={eps}")
            _expect(p <= 0 or q > 0, f"sign rule 2 fails for {x}, eps={eps}")
            _expect(not (abs(x[1]) > abs(x[0]) and p < 0) or q > 0, f"sign rule 3 fails for {x}")
    # growth along B^(eps n)
    for _ in range(cfg.n_random):
        eps = rng.choice((1, -1))
        x1 = rng.choice([v for v in range(-300, 301) if v])
        x2 = eps * (1 if x1 > 0 else -1) * rng.randint(0, 300)
        x = Triple(x1, x2, rng.randint(-300, 300))
        g = B if eps > 0 else B_INV
        prev, cur = x, apply_left(g, x)
        for _ in range(10):
            _expect(abs(cur[0]) > abs(prev[0]) and abs(cur[1]) > abs(prev[1]), f"no growth from {x}")
            _expect(cur[0] != 0 and eps * cur[0] * cur[1] >= 0, f"sign lost along B^n {x}")
            prev, cur = cur, apply_left(g, cur)
    for a in (-2, -1, 0, 1, 2):
        for x in gamma_box_scan(a, box):
            if not _strictly_dec(x) or x[0] == 0:
                continue
            for eps, g in ((1, B), (-1, B_INV)):
                if eps * x[0] * x[1] < 0:
                    continue
                cur = x
                for _ in range(6):
                    cur = apply_left(g, cur)
                    _expect(_strictly_dec(cur), f"B^(eps n) {x} stopped decreasing at {cur}")
    # consecutive gaps shrink on non-trivial increasing sequences
    n_gap = 0
    for length in (3, 4):
        for rec in search_buchi(length, min(cfg.scan_bound, 1000), 2):
            s = rec.seq
            if rec.trivial or any(abs(s[i + 1]) < abs(s[i]) for i in range(len(s) - 1)):
                continue
            n_gap += 1
            _expect(gap_check(s), f"gap condition fails for {s}")
    return f"monotone squares, sign rules, growth, {n_gap} gap checks"


def check_golden(cfg: VerifyConfig) -> str:
    for seq, (m1, m3, mx) in GOLDEN_5.items():
        r = analyze5(seq)
        got = (str(r["m1"]), str(r["m3"]), str(r["mx"]))
        _expect(got == (m1, m3, mx), f"{seq}: got {got}")
    _expect(str(analyze5((2, 3, 4, 5, -6))["mx"]) == "B^-1", "(2,3,4,5,-6) should give B^-1")
    _expect(sign_normalize_5((2, 3, 4, 5, 6))[0] == (2, 3, 4, 5, -6), "normalization of (2,3,4,5,6)")
    tr = reduce_to_theta((0, 7, 10), 2)
    _expect((tr.theta, str(tr.witness_word)) == ((2, 1, 0), "J B"), "reduction of (0,7,10)")
    d = decompose((-1, 2, 3))
    _expect((str(d.word), d.delta) == ("J B J", (-1, 0, 1)), "decomposition of (-1,2,3)")
    _expect(hensley_generate(2, 3) == (3, 8, 11) and hensley_generate(2, 1) == (-1, 2, 3), "hensley")
    _expect(is_canonical((2, 3, 4, 5, -6)) and not is_canonical((2, 3, 4, -5, -6)), "canonical examples")
    w = find_canonical_subseq(range(1, 9))
    _expect((w.j, w.window) == (2, (2, 3, 4, 5, -6)), f"canonical window of 1..8: {w}")
    hits = {r.seq for r in search_buchi(4, 50, 2, nontrivial_only=True)}
    _expect((6, 23, 32, 39) in hits, "(6,23,32,39) missing from the length-4 search")
    for text in GOLDEN_5.values():
        for t in text:
            _expect(str(parse_word(t)) == t, f"word {t!r} does not round trip")
    return "worked examples"


def check_problem_a(cfg: VerifyConfig) -> str:
    rep = problem_a_scan(cfg.scan_bound, workers=cfg.workers)
    _expect(not rep.violations, f"implication violations: {rep.violations[:3]}")
    lengths = sorted({k for k, _ in rep.histogram})
    note = f", NON-TRIVIAL: {rep.nontrivial[:3]}" if rep.nontrivial else ""
    return f"{rep.n_sequences} sequences, Mx lengths {lengths[:6]}{'...' if len(lengths) > 6 else ''}{note}"


def check_problem_b(cfg: VerifyConfig) -> str:
    rep = problem_b_scan(cfg.scan_bound, workers=cfg.workers)
    _expect(not rep.violations, f"implication violations: {rep.violations[:3]}")
    note = f", NONCONFORMING: {rep.nonconforming[:3]}" if rep.nonconforming else ""
    return f"{rep.n_canonical} canonical sequences, {rep.n_conforming} with Mx in {{B, B^-1}}{note}"


def check_canonical_windows(cfg: VerifyConfig) -> str:
    rng = random.Random(cfg.seed)
    n = 0
    for c in range(-60, 60):
        for _ in range(max(1, cfg.n_random // 100)):
            signs = [rng.choice((1, -1)) for _ in range(8)]
            y = trivial_sequence(c, 8, signs)
            w = find_canonical_subseq(y)
            flipped = apply_flip_mask(y, w.flip_mask)
            _expect(flipped[w.j - 1 : w.j + 4] == w.window, f"window of {y} is not a flipped subsequence")
            _expect(1 <= w.j <= 4 and is_canonical(w.window), f"bad window for {y}")
            _expect(compute_mx(w.window).mx in _B_WORDS, f"canonical trivial window {w.window} has Mx outside B, B^-1")
            n += 1
    return f"{n} trivial length-8 sequences"


CHECKS: List[Tuple[str, Callable[[VerifyConfig], str]]] = [
    ("action", check_action),
    ("theta_tables", check_theta_tables),
    ("reduction_roundtrip", check_reduction),
    ("decomposition_uniqueness", check_decomposition),
    ("classifier_agreement", check_classifier),
    ("mod8_exhaustive", check_mod8),
    ("free_product", check_free_product),
    ("b_power_recurrence", check_b_power),
    ("b_power_rows", check_b_power_rows),
    ("word_scans", check_word_scans),
    ("lemma_suites", check_lemma_suites),
    ("golden_examples", check_golden),
    ("problem_a", check_problem_a),
    ("problem_b", check_problem_b),
    ("canonical_windows", check_canonical_windows),
]


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    seconds: float


@dataclass
class VerifyReport:
    level: str
    results: List[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.ok]


def run_verify(cfg: VerifyConfig, only=None, progress=None) -> VerifyReport:
    report = VerifyReport(cfg.level)
    for name, fn in CHECKS:
        if only and name not in only:
            continue
        t0 = time.perf_counter()
        try:
            detail, ok = fn(cfg), True
        except CheckFailure as exc:
            detail, ok = str(exc), False
        except Exception as exc:
            detail = f"{type(exc).__name__}: {exc}\n" + traceback.format_exc(limit=3)
            ok = False
        res = CheckResult(name, ok, detail, time.perf_counter() - t0)
        report.results.append(res)
        if progress is not None:
            progress(res)
    return report
