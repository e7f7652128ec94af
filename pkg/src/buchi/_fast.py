"""int64 kernels for the hot loops: reduction traces and word-on-vector action.

Callers guarantee the magnitude limits; every kernel also reports failure
instead of overflowing so the pure-Python route can take over.
"""

import numpy as np
from numba import njit

# entries stay below this, so 3|x| + 4|y| cannot leave int64
LIMIT = 2**58

CODE_J, CODE_BINV, CODE_B = 0, 1, 2


@njit(cache=True)
def _in_c(ax1, ax2):
    return ax1 <= ax2 or ax1 >= 2 * ax2


@njit(cache=True)
def reduce_codes(x1, x2, x3, a, codes):
    """Run the reduction map, writing one code per step.

    Returns (n_steps, t1, t2, t3); n_steps == -1 means ``codes`` was too short.
    """
    n = 0
    while True:
        ax1, ax2, ax3 = abs(x1), abs(x2), abs(x3)
        if a < 0:
            fixed = ax2 >= ax1 and ax2 >= ax3
        else:
            fixed = _in_c(ax1, ax2) and _in_c(ax3, ax2)
        if fixed:
            return n, x1, x2, x3
        if n >= codes.shape[0]:
            return -1, x1, x2, x3
        if _in_c(ax1, ax2):
            x1, x3 = x3, x1
            codes[n] = CODE_J
        elif (x1 > 0) == (x2 > 0):
            x1, x2 = 3 * x1 - 4 * x2, -2 * x1 + 3 * x2
            codes[n] = CODE_BINV
        else:
            x1, x2 = 3 * x1 + 4 * x2, 2 * x1 + 3 * x2
            codes[n] = CODE_B
        n += 1


@njit(cache=True)
def apply_word(ell, exps, r, v1, v2, v3):
    """J^ell B^exps[0] J ... J B^exps[-1] J^r applied to a column vector.

    Returns (ok, y1, y2, y3); ok is False if an entry would pass LIMIT.
    """
    if r:
        v1, v3 = v3, v1
    k = exps.shape[0]
    for i in range(k - 1, -1, -1):
        if i < k - 1:
            v1, v3 = v3, v1
        e = exps[i]
        step = 1 if e > 0 else -1
        for _ in range(abs(e)):
            if abs(v1) >= LIMIT or abs(v2) >= LIMIT:
                return False, v1, v2, v3
            if step > 0:
                v1, v2 = 3 * v1 + 4 * v2, 2 * v1 + 3 * v2
            else:
                v1, v2 = 3 * v1 - 4 * v2, -2 * v1 + 3 * v2
    if ell:
        v1, v3 = v3, v1
    return True, v1, v2, v3


@njit(cache=True)
def _blocks(codes):
    n = codes.shape[0]
    exps = np.zeros(n // 2 + 1, dtype=np.int64)
    k = 0
    open_block = False
    for i in range(n):
        c = codes[i]
        if c == CODE_J:
            if open_block:
                k += 1
                open_block = False
        else:
            # inverse of B^-1 is B
            exps[k] += 1 if c == CODE_BINV else -1
            open_block = True
    if open_block:
        k += 1
    return exps[:k]


def codes_to_blocks(codes: np.ndarray):
    """Inverse generators of a step trace, as (ell, exponents, r) of a normal-form word.

    Step j applied g_j; the word g_1^-1 g_2^-1 ... is read left to right, and
    consecutive B-steps always share a sign, so each run becomes one block.
    """
    if codes.size == 0:
        return 0, (), 0
    if codes.size == 1 and codes[0] == CODE_J:
        return 0, (), 1
    ell = int(codes[0] == CODE_J)
    r = int(codes[-1] == CODE_J)
    return ell, tuple(_blocks(codes).tolist()), r
