"""Algebraic invariants as hypothesis properties."""

from hypothesis import assume, given, strategies as st

from buchi.core import B, B_INV, I, J, Triple, apply_left, apply_right, gamma_form, matmul, omega_form
from buchi.decompose import DELTA2, Parity, classify_orbit_mod8, decompose, parity
from buchi.lab import _B_WORDS, compute_mx, hensley_generate, is_canonical, sign_normalize_5, trivial_sequence
from buchi.reduction import _in_theta, enumerate_theta, reduce_word
from buchi.words import Word, b_power, word_apply, word_eval

from conftest import triples, words

small = st.integers(-400, 400)
eps_gen = st.sampled_from([(1, B), (-1, B_INV)])


@given(words(), triples)
def test_action_preserves_both_forms(w, x):
    m = word_eval(w)
    assert gamma_form(apply_left(m, x)) == gamma_form(x)
    assert omega_form(apply_right(x, m)) == omega_form(x)


@given(words())
def test_columns_and_rows_lie_on_fixed_levels(w):
    m = word_eval(w)
    cols = [tuple(m[i][j] for i in range(3)) for j in range(3)]
    assert [gamma_form(c) for c in cols] == [1, -2, 1]
    assert [omega_form(r) for r in m] == [-2, 1, -2]


@given(st.integers(-60, 60).filter(bool))
def test_b_power_rows_and_diagonal(n):
    m = b_power(n)
    assert all(m[i][i] > 0 for i in range(3))
    for mat in (m, matmul(J, m)):
        assert mat[1] not in ((0, 1, 0), (0, -1, 0))


@given(st.integers(-40, 40))
def test_b_power_group_law(n):
    assert matmul(b_power(n), b_power(-n)) == I
    assert matmul(b_power(n), B) == b_power(n + 1)


@given(words(max_blocks=6).filter(lambda w: w.length >= 1))
def test_third_column_of_b_j_words_decreases(w):
    w = Word(0, w.exponents, 1)
    m = word_eval(w)
    c = [abs(m[i][2]) for i in range(3)]
    assert c[0] > c[1] > c[2]
    assert m[1][2] != 0


@given(words(max_blocks=6))
def test_zero_23_entry_only_for_short_words(w):
    if word_eval(w)[1][2] == 0:
        assert w.length == 0 or (w.length == 1 and w.r == 0)


@given(small, small, small, eps_gen)
def test_sign_propagation(x1, x2, x3, eg):
    eps, g = eg
    y = apply_left(g, (x1, x2, x3))
    p, q = eps * x1 * x2, eps * y[0] * y[1]
    if p >= 0:
        assert q >= 0
    if p > 0:
        assert q > 0
    if abs(x2) > abs(x1) and p < 0:
        assert q > 0


@given(small.filter(bool), st.integers(0, 400), small, eps_gen)
def test_growth_along_powers(x1, m2, x3, eg):
    eps, g = eg
    x2 = eps * (1 if x1 > 0 else -1) * m2
    prev = (x1, x2, x3)
    for _ in range(8):
        cur = apply_left(g, prev)
        assert abs(cur[0]) > abs(prev[0]) and abs(cur[1]) > abs(prev[1])
        assert cur[0] != 0 and eps * cur[0] * cur[1] >= 0
        assert cur[1] != 0
        prev = cur


def _level_point(a, w):
    return word_apply(w, enumerate_theta(a)[0]) if a else None


@given(st.sampled_from([-2, -1, 1, 2]), words(max_blocks=5))
def test_squares_monotone_off_kernel(a, w):
    x = _level_point(a, w)
    assume(not _in_theta(x, a))
    sq = [v * v for v in x]
    assert sq[0] < sq[1] < sq[2] or sq[0] > sq[1] > sq[2]


@given(st.sampled_from([-2, -1, 1, 2]), words(max_blocks=5), eps_gen)
def test_increasing_becomes_decreasing(a, w, eg):
    eps, g = eg
    x = _level_point(a, w)
    assume(abs(x[0]) < abs(x[1]) < abs(x[2]))
    y = apply_left(g, x)
    assert gamma_form(y) == a
    assert abs(y[0]) > abs(y[1]) > abs(y[2]) and eps * y[0] * y[1] > 0


@given(st.sampled_from([-2, -1, 1, 2]), words(max_blocks=5), eps_gen)
def test_decreasing_stays_decreasing_along_powers(a, w, eg):
    eps, g = eg
    x = _level_point(a, w)
    assume(abs(x[0]) > abs(x[1]) > abs(x[2]) and x[0] != 0 and eps * x[0] * x[1] >= 0)
    for _ in range(5):
        x = apply_left(g, x)
        assert abs(x[0]) > abs(x[1]) > abs(x[2])


@given(words(max_blocks=6), st.sampled_from(DELTA2))
def test_residue_classifier_tracks_orbits(w, delta):
    assert classify_orbit_mod8(word_apply(w, delta)) == delta


@given(st.sampled_from([-3, -2, -1, 1, 2, 3, 6]), words(max_blocks=5))
def test_reduction_round_trip_any_level(a, w):
    x = word_apply(w, enumerate_theta(a)[-1])
    theta, witness, n = reduce_word(x, a)
    assert theta in enumerate_theta(a)
    assert word_apply(witness, theta) == Triple(*x)
    assert n <= 2 * abs(x[1]) + 2


@given(st.integers(-10**6, 10**6), st.lists(st.sampled_from([1, -1]), min_size=5, max_size=5))
def test_mx_implications_on_trivial_sequences(c, signs):
    s = trivial_sequence(c, 5, signs)
    norm, _ = sign_normalize_5(s)
    mx = compute_mx(norm).mx
    assert word_apply(mx, norm[:3]) == (norm[4], norm[3], norm[2])
    if is_canonical(norm):
        assert mx in _B_WORDS


@given(st.integers(-300, 300).filter(bool), st.integers(-300, 300), st.sampled_from([1, -1]))
def test_hensley_lands_on_level_two(half_u, t, pm):
    # v = +-1 + u t always has u | v^2 - 1
    u = 2 * half_u
    v = pm + u * t
    t = hensley_generate(u, v)
    assert gamma_form(t) == 2
    assert (t[1] - t[0], t[2] - t[1]) == (u + v, v)


@given(words(max_blocks=6), st.sampled_from(DELTA2))
def test_parity_reading(w, delta):
    x = word_apply(w, delta)
    if parity(x) is Parity.ODD:
        assert x[0] % 2 == 1 and x[2] % 2 == 1 and x[1] % 2 == 0
    else:
        assert x[0] % 2 == 0 and x[2] % 2 == 0 and x[1] % 2 == 1
    assert decompose(x).delta == delta
