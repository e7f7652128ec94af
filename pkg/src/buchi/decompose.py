"""Unique decomposition x = M . delta of length-3 Buchi triples (a = 2).

The five generators in DELTA2 give exactly five orbits. The orbit of a triple
can be read off x1 and x3 modulo 8, which is what ``classify_orbit_mod8`` does
without any matrix work.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Dict, Tuple

from .core import B, B_INV, J, Triple, apply_left
from .reduction import check_gamma, enumerate_theta, reduce_word
from .words import IDENTITY, WORD_J, Word, word_b, word_mul

DELTA2: Tuple[Triple, ...] = (
    Triple(2, 1, 0),
    Triple(-2, 1, 0),
    Triple(1, 0, 1),
    Triple(-1, 0, 1),
    Triple(-1, 0, -1),
)
SYMMETRIC = frozenset({Triple(1, 0, 1), Triple(-1, 0, -1)})
ODD_DELTAS = frozenset({Triple(1, 0, 1), Triple(-1, 0, 1), Triple(-1, 0, -1)})


class Parity(enum.Enum):
    ODD = "odd"
    EVEN = "even"


def _build_bridge() -> Dict[Triple, Tuple[Triple, Word]]:
    """Map each of the 12 kernel triples for a = 2 to (delta, W) with t = W . delta."""
    table: Dict[Triple, Tuple[Triple, Word]] = {d: (d, IDENTITY) for d in DELTA2}
    # B^-1 (2,1,0) = (2,-1,0);  B (-2,1,0) = (-2,-1,0);  J (-1,0,1) = (1,0,-1)
    for mat, word, d in (
        (B_INV, word_b(-1), Triple(2, 1, 0)),
        (B, word_b(1), Triple(-2, 1, 0)),
        (J, WORD_J, Triple(-1, 0, 1)),
    ):
        table.setdefault(apply_left(mat, d), (d, word))
    for t, (d, w) in list(table.items()):
        table.setdefault(apply_left(J, t), (d, word_mul(WORD_J, w)))
    return table


THETA2_BRIDGE = _build_bridge()
if sorted(THETA2_BRIDGE) != enumerate_theta(2):
    raise AssertionError("theta_2 bridge table does not cover the kernel set")


def theta2_to_delta2(t) -> Tuple[Triple, Word]:
    t = Triple(*t)
    try:
        return THETA2_BRIDGE[t]
    except KeyError:
        raise ValueError(f"{t} is not in the a=2 kernel set") from None


@dataclass(frozen=True)
class Decomposition:
    word: Word
    delta: Triple
    symmetric_ambiguity: bool


def decompose(x) -> Decomposition:
    x = check_gamma(x, 2)
    theta, witness, _ = reduce_word(x, 2)
    delta, bridge = theta2_to_delta2(theta)
    m = word_mul(witness, bridge)
    return Decomposition(m, delta, delta in SYMMETRIC)


def parity(x) -> Parity:
    x = check_gamma(x, 2)
    return Parity.ODD if x[1] % 2 == 0 else Parity.EVEN


def _orbit_rule(r1: int, r3: int):
    pos_odd, neg_odd = {1, 3}, {5, 7}
    if r1 in pos_odd and r3 in pos_odd:
        return DELTA2[2]
    if r1 in neg_odd and r3 in neg_odd:
        return DELTA2[4]
    if (r1 in neg_odd and r3 in pos_odd) or (r3 in neg_odd and r1 in pos_odd):
        return DELTA2[3]
    if r1 == 2 or r3 == 2:
        return DELTA2[0]
    if r1 == 6 or r3 == 6:
        return DELTA2[1]
    return None


def classify_orbit_mod8(x) -> Triple:
    """The delta whose orbit contains x, from x1 and x3 modulo 8 alone."""
    x = check_gamma(x, 2)
    delta = _orbit_rule(x[0] % 8, x[2] % 8)
    if delta is None:
        raise RuntimeError(f"no residue rule matched {x}; this should be impossible")
    return delta


def mod8_exhaustive_check() -> dict:
    """Every length-3 Buchi triple over Z/8 has the square pattern of three consecutive integers."""
    consecutive = {tuple((c + i) ** 2 % 8 for i in range(3)) for c in range(8)}
    solutions = 0
    violations = []
    for x in itertools.product(range(8), repeat=3):
        if (x[2] ** 2 - 2 * x[1] ** 2 + x[0] ** 2) % 8 != 2:
            continue
        solutions += 1
        if tuple(v * v % 8 for v in x) not in consecutive:
            violations.append(x)
    return {"checked": 8**3, "solutions": solutions, "violations": violations}
