import pytest
from hypothesis import given, strategies as st

from buchi.core import Triple
from buchi.reduction import (
    FIXED,
    InfiniteThetaError,
    NotInGammaError,
    Region,
    classify_region,
    enumerate_theta,
    in_theta,
    phi_step,
    reduce_to_theta,
    reduce_to_theta_pure,
    reduce_word,
    theta_box_scan,
)
from buchi.words import parse_word, word_apply

from conftest import words


@pytest.mark.parametrize("a, size", [(-2, 2), (-1, 8), (1, 4), (2, 12)])
def test_theta_sizes(a, size):
    assert len(enumerate_theta(a)) == size


@pytest.mark.parametrize("a", [-7, -5, -3, -2, -1, 1, 2, 3, 5, 6, 9, 14])
def test_theta_matches_box_scan(a):
    # the scan box is far wider than the bounds enumerate_theta relies on
    assert enumerate_theta(a) == theta_box_scan(a, 2 * abs(a) + 6)


def test_theta_examples():
    assert enumerate_theta(-2) == [(0, -1, 0), (0, 1, 0)]
    assert set(enumerate_theta(5)) == {(s1 * 1, 0, s3 * 2) for s1 in (1, -1) for s3 in (1, -1)} | {
        (s1 * 2, 0, s3 * 1) for s1 in (1, -1) for s3 in (1, -1)
    }
    with pytest.raises(InfiniteThetaError, match="infinite"):
        enumerate_theta(0)


def test_regions_and_phi():
    assert classify_region((2, 1, 0), 2) is Region.THETA
    assert classify_region((0, 7, 10), 2) is Region.G_ZERO
    assert phi_step((0, 7, 10), 2) == ((10, 7, 0), "J")
    assert phi_step((10, 7, 0), 2) == ((2, 1, 0), "B^-1")
    assert phi_step((-10, 7, 0), 2) == ((-2, 1, 0), "B")
    assert phi_step((2, 1, 0), 2) == ((2, 1, 0), FIXED)
    assert in_theta((1, 0, -1), 2)


def test_reduce_examples():
    tr = reduce_to_theta((0, 7, 10), 2)
    assert tr.theta == (2, 1, 0) and str(tr.witness_word) == "J B"
    assert tr.steps == (("J", (10, 7, 0)), ("B^-1", (2, 1, 0)))
    tr = reduce_to_theta((2, 1, 0), 2)
    assert tr.n_steps == 0 and str(tr.witness_word) == "I"
    with pytest.raises(NotInGammaError):
        reduce_to_theta((1, 1, 1), 2)


def test_reduce_big_integers_take_the_exact_path():
    big = word_apply(parse_word("B^40 J B^-35 J B^30"), (2, 1, 0))
    assert max(map(abs, big)) > 2**64
    tr = reduce_to_theta(big, 2)
    assert tr == reduce_to_theta_pure(big, 2)
    assert tr.theta == (2, 1, 0)
    assert str(tr.witness_word) == "B^40 J B^-35 J B^30"


def test_long_trace_crosses_buffer_chunks():
    c = 10**5
    x = (c, c + 1, c + 2)
    fast = reduce_to_theta(x, 2)
    assert fast.n_steps > 4096
    assert fast == reduce_to_theta_pure(x, 2)


@given(words(max_blocks=6), st.sampled_from(enumerate_theta(2)))
def test_round_trip_and_step_bound(w, t):
    x = word_apply(w, t)
    tr = reduce_to_theta(x, 2)
    assert tr.n_steps <= 2 * abs(x[1]) + 2
    assert word_apply(tr.witness_word, tr.theta) == x
    assert tr == reduce_to_theta_pure(x, 2)


@given(st.sampled_from([-2, -1, 1, 3, 5, 7]), words(max_blocks=4))
def test_reduction_other_levels(a, w):
    t = enumerate_theta(a)[0]
    x = word_apply(w, t)
    theta, word, _ = reduce_word(x, a)
    assert theta in enumerate_theta(a)
    assert word_apply(word, theta) == Triple(*x)
