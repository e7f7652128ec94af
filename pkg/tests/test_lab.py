import random
from math import isqrt

import pytest
from hypothesis import given, strategies as st

from buchi.core import gamma_form, is_trivial_sequence, second_differences
from buchi.decompose import DELTA2
from buchi.lab import (
    HensleyDivisibilityError,
    HensleyParityError,
    _B_WORDS,
    analyze5,
    apply_flip_mask,
    compute_mx,
    extend_sequence,
    find_canonical_subseq,
    gamma_box_scan,
    gap_check,
    hensley_generate,
    is_canonical,
    make_record,
    orbit_bfs,
    problem_a_scan,
    problem_b_scan,
    search_buchi,
    sign_normalize_5,
    sign_variants,
    trivial_sequence,
)
from buchi.reduction import InfiniteThetaError
from buchi.words import word_apply


def test_extend_examples():
    assert extend_sequence((0, 7)) == [(0, 7, 10), (0, 7, -10)]
    assert extend_sequence((0, 7, 10)) == []
    assert extend_sequence((1, 2)) == [(1, 2, 3), (1, 2, -3)]
    assert extend_sequence((7, 10), direction="backward") == [(0, 7, 10)]
    assert extend_sequence((10, 7), direction="backward") == []


@given(st.integers(-300, 300), st.integers(-300, 300), st.sampled_from([-2, -1, 1, 2, 3]))
def test_backward_is_reversed_forward(x, y, a):
    back = extend_sequence((x, y), a, "backward")
    fwd = extend_sequence((y, x), a, "forward")
    assert back == [tuple(reversed(s)) for s in fwd]
    for s in back:
        assert second_differences(s, a)


def test_sign_variants():
    assert sorted(sign_variants((0, 1))) == [(0, -1), (0, 1)]
    assert len(list(sign_variants((1, 2, 3)))) == 8


def _square_root_table(limit):
    return {k * k: k for k in range(limit + 1)}


def _brute_length4(bound):
    """Length-4 sequences with nonnegative seeds, found with a lookup table of squares."""
    roots = _square_root_table(4 * bound + 10)
    out = []
    for x1 in range(bound + 1):
        for x2 in range(bound + 1):
            x3 = roots.get(2 * x2 * x2 - x1 * x1 + 2)
            if x3 is None:
                continue
            x4 = roots.get(2 * x3 * x3 - x2 * x2 + 2)
            if x4 is not None:
                out.append((x1, x2, x3, x4))
    return out


def test_search_length4_against_brute_force():
    found = [r.seq for r in search_buchi(4, 50)]
    assert found == _brute_length4(50)
    nontrivial = [r.seq for r in search_buchi(4, 50, nontrivial_only=True)]
    assert nontrivial == [s for s in found if not is_trivial_sequence(s)]
    assert (6, 23, 32, 39) in nontrivial


def test_search_examples():
    assert (0, 7, 10) in {r.seq for r in search_buchi(3, 10)}
    assert list(search_buchi(5, 1000, nontrivial_only=True)) == []
    with pytest.raises(ValueError):
        list(search_buchi(2, 10))


def test_search_order_is_independent_of_workers_and_stripes():
    serial = [r.seq for r in search_buchi(4, 300, stripe_width=7)]
    parallel = [r.seq for r in search_buchi(4, 300, workers=2, stripe_width=50)]
    assert serial == parallel == sorted(serial)


def test_search_resume_offset_and_callback():
    full = [r.seq for r in search_buchi(3, 100, stripe_width=10)]
    done = []
    part = [r.seq for r in search_buchi(3, 100, start_x1=40, stripe_width=10, on_stripe_done=lambda x, _: done.append(x))]
    assert part == [s for s in full if s[0] >= 40]
    assert done == [49, 59, 69, 79, 89, 99, 100]


def test_dedupe_reversal():
    both = {r.seq for r in search_buchi(4, 60)}
    one = {r.seq for r in search_buchi(4, 60, dedupe_reversal=True)}
    assert (6, 23, 32, 39) in one and (39, 32, 23, 6) not in one
    assert one < both


def test_exact_row_scan_matches_vectorized(monkeypatch):
    from buchi import lab

    fast = {x1: lab._row_hits(x1, 300, 2) for x1 in range(0, 300, 7)}
    monkeypatch.setattr(lab, "_FAST_LIMIT", 0)
    for x1, hits in fast.items():
        assert lab._row_hits(x1, 300, 2) == hits


def test_np_isqrt_near_float_limits():
    from buchi.lab import _np_isqrt
    import numpy as np

    r = np.array([2**26 - 1, 2**26, 94906265, 67108863], dtype=np.int64)
    t = np.concatenate([r * r, r * r - 1, r * r + 1])
    expected = [isqrt(int(v)) for v in t]
    assert _np_isqrt(t).tolist() == expected


def test_records_are_buchi_and_flag_discoveries():
    for rec in search_buchi(5, 200):
        assert second_differences(rec.seq, rec.a)
        assert rec.kind == "record" and rec.trivial
    rec = make_record((6, 23, 32, 39), 2)
    assert not rec.trivial and rec.kind == "record" and rec.delta in DELTA2
    d = rec.to_dict()
    assert d["seq"] == [6, 23, 32, 39] and d["mx_word"] is None


@pytest.mark.parametrize("u, v, out", [(2, 3, (3, 8, 11)), (2, 1, (-1, 2, 3)), (4, 5, (4, 13, 18)), (-2, 3, (-3, -2, 1))])
def test_hensley(u, v, out):
    t = hensley_generate(u, v)
    assert t == out and gamma_form(t) == 2


def test_hensley_errors():
    with pytest.raises(HensleyParityError):
        hensley_generate(3, 2)
    with pytest.raises(HensleyParityError):
        hensley_generate(0, 1)
    with pytest.raises(HensleyDivisibilityError):
        hensley_generate(4, 2)


@given(st.integers(-40, 40).filter(lambda u: u and u % 2 == 0), st.integers(-500, 500))
def test_hensley_always_on_level_two(u, v):
    if (v * v - 1) % u == 0:
        assert gamma_form(hensley_generate(u, v)) == 2


def test_sign_normalize_examples():
    assert sign_normalize_5((-1, 2, 3, -4, 5)) == ((-1, 2, 3, -4, 5), (0, 0, 0, 0, 0))
    assert sign_normalize_5((2, 3, 4, 5, 6)) == ((2, 3, 4, 5, -6), (0, 0, 0, 0, 1))
    assert sign_normalize_5((2, 3, 4, 5, -6))[1] == (0, 0, 0, 0, 0)
    with pytest.raises(ValueError):
        sign_normalize_5((1, 2, 3, 4, 6))


def test_golden_mx():
    r = analyze5((-1, 2, 3, -4, 5))
    assert (str(r["m1"]), str(r["m3"]), str(r["mx"])) == ("J B J", "J B^-1 J B^-1 J", "B^-1 J B^-2 J")
    assert r["trivial"] and r["mx_length"] == 2
    r = analyze5((2, 3, 4, -5, -6))
    assert (str(r["m1"]), str(r["m3"]), str(r["mx"])) == ("J B J", "J B J B^-1 J B^-1", "B J B^-1 J B^-1 J B^-1 J")
    assert str(compute_mx((2, 3, 4, 5, -6)).mx) == "B^-1"


def test_compute_mx_rejects_unnormalized():
    with pytest.raises(ValueError):
        compute_mx((2, 3, 4, 5, 6))


@given(st.integers(-200, 200), st.lists(st.sampled_from([1, -1]), min_size=5, max_size=5))
def test_mx_postcondition_and_implications(c, signs):
    s = trivial_sequence(c, 5, signs)
    norm, mask = sign_normalize_5(s)
    assert apply_flip_mask(s, mask) == norm
    res = compute_mx(norm)
    assert word_apply(res.mx, norm[:3]) == (norm[4], norm[3], norm[2])
    if is_canonical(norm):
        assert res.mx in _B_WORDS


@pytest.mark.parametrize(
    "s, expected", [((2, 3, 4, 5, -6), True), ((-1, 2, 3, -4, 5), False), ((2, 3, 4, -5, -6), False)]
)
def test_is_canonical(s, expected):
    assert is_canonical(s) is expected


def test_find_canonical_subseq_example():
    w = find_canonical_subseq(range(1, 9))
    assert (w.j, w.window) == (2, (2, 3, 4, 5, -6))
    assert apply_flip_mask(range(1, 9), w.flip_mask)[1:6] == w.window


@given(st.integers(-300, 300), st.lists(st.sampled_from([1, -1]), min_size=8, max_size=8))
def test_canonical_window_of_trivial_length8(c, signs):
    y = trivial_sequence(c, 8, signs)
    w = find_canonical_subseq(y)
    assert 1 <= w.j <= 4 and is_canonical(w.window)
    assert apply_flip_mask(y, w.flip_mask)[w.j - 1 : w.j + 4] == w.window
    assert compute_mx(w.window).mx in _B_WORDS


def test_problem_scans_small():
    a = problem_a_scan(100)
    assert a.violations == [] and a.nontrivial == [] and a.n_sequences > 0
    # the first golden example is trivial with Mx of length 2
    assert a.histogram[(2, True)] > 0
    b = problem_b_scan(100)
    assert b.violations == [] and b.nonconforming == [] and b.n_canonical == b.n_conforming > 0


def test_gap_check():
    assert gap_check((0, 7, 10))
    assert gap_check((6, 23, 32, 39))
    with pytest.raises(ValueError):
        gap_check((1, 2, 3))
    with pytest.raises(ValueError):
        gap_check((10, 7, 0))


def test_orbit_bfs():
    assert (10, 7, 0) in orbit_bfs(2, 1, 20)
    assert orbit_bfs(-2, 0, 5) == [(0, -1, 0), (0, 1, 0)]
    assert orbit_bfs(2, None, 40) == gamma_box_scan(2, 40)
    with pytest.raises(InfiniteThetaError):
        orbit_bfs(0, 3, 10)


def test_gamma_box_scan_against_triple_loop():
    box = 14
    rng = range(-box, box + 1)
    for a in (-2, 1, 2, 7):
        brute = sorted((x, y, z) for x in rng for y in rng for z in rng if x * x - 2 * y * y + z * z == a)
        assert gamma_box_scan(a, box) == brute


def test_random_length8_trivial_smoke():
    rng = random.Random(3)
    for _ in range(50):
        c = rng.randint(-10**6, 10**6)
        y = trivial_sequence(c, 8, [rng.choice((1, -1)) for _ in range(8)])
        assert is_canonical(find_canonical_subseq(y).window)
