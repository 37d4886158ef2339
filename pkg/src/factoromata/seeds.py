"""The number-theoretic seed automata: parities of gamma, alpha_3, alpha_5.

For ``n`` with LSD-first binary digits ``a_0 a_1 ...``:

* ``gamma(n)`` is the exponent of 2 in ``n!``.  By Legendre's formula it
  equals ``n - s_2(n)``, whose parity is the parity of the number of 1-bits
  of ``n`` at positions >= 1.
* ``alpha_3(n)`` / ``alpha_5(n)`` count positions ``k >= 0`` whose 3-bit
  window ``a_k + 2 a_{k+1} + 4 a_{k+2}`` lies in {3, 4} / {5, 6}.

``n!`` is not a sum of three squares exactly when the parity triple
``theta(n) = (gamma, alpha_3, alpha_5) mod 2`` equals (0, 0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .automata import Dfa, complement, minimize, product


class ThetaTriple(NamedTuple):
    gamma: int
    alpha3: int
    alpha5: int


@dataclass(frozen=True)
class WindowSpec:
    targets: frozenset[int]

    def __post_init__(self):
        t = frozenset(self.targets)
        if not t or not t <= set(range(8)):
            raise ValueError(f"window targets must be a nonempty subset of 0..7, got {sorted(t)}")
        if 0 in t:
            # all-zero windows past the top bit would be counted infinitely often
            raise ValueError("window value 0 cannot be a target")
        object.__setattr__(self, "targets", t)


ALPHA3 = WindowSpec(frozenset({3, 4}))
ALPHA5 = WindowSpec(frozenset({5, 6}))
NOT_SUM_OF_THREE_SQUARES = ThetaTriple(0, 0, 1)


@lru_cache(maxsize=None)
def gamma_parity_dfa(track: str = "n") -> Dfa:
    """Accepts n with gamma(n) even."""
    # 0 = nothing read yet, 1 = even, 2 = odd; digit 0 never counts
    delta = ((1, 1), (1, 2), (2, 1))
    return minimize(Dfa((track,), delta, 0, frozenset({0, 1})))


def _window_step(state, digit, targets):
    window, parity, stage = state
    if stage == 2:
        value = window[0] + 2 * window[1] + 4 * digit
        parity ^= value in targets
        return ((window[1], digit), parity, 2)
    window = window[1:] + (digit,) if stage else (0, digit)
    return (window, parity, stage + 1)


@lru_cache(maxsize=None)
def window_parity_dfa(spec: WindowSpec, track: str = "n") -> Dfa:
    """Accepts n whose count of target-valued 3-bit windows is even.

    State is (last two digits, running parity, digits seen capped at 2);
    acceptance pretends two more zero digits arrive, which closes every
    window that still overlaps the number.
    """
    targets = spec.targets
    start = ((0, 0), 0, 0)
    index = {start: 0}
    states = [start]
    rows = []
    i = 0
    while i < len(states):
        row = []
        for digit in (0, 1):
            nxt = _window_step(states[i], digit, targets)
            if nxt not in index:
                index[nxt] = len(states)
                states.append(nxt)
            row.append(index[nxt])
        rows.append(tuple(row))
        i += 1
    accepting = set()
    for q, st in enumerate(states):
        closed = _window_step(_window_step(st, 0, targets), 0, targets)
        if closed[1] == 0:
            accepting.add(q)
    return minimize(Dfa((track,), tuple(rows), 0, frozenset(accepting)))


def alpha3_parity_dfa(track: str = "n") -> Dfa:
    return window_parity_dfa(ALPHA3, track)


def alpha5_parity_dfa(track: str = "n") -> Dfa:
    return window_parity_dfa(ALPHA5, track)


@lru_cache(maxsize=None)
def theta_dfa(x: int, y: int, z: int, track: str = "n") -> Dfa:
    """Accepts n with theta(n) == (x, y, z)."""
    parts = []
    for bit, base in zip((x, y, z), (gamma_parity_dfa(track), alpha3_parity_dfa(track),
                                      alpha5_parity_dfa(track))):
        if bit not in (0, 1):
            raise ValueError(f"theta components are bits, got {bit!r}")
        # the seeds accept *even* counts, so an odd component needs the complement
        parts.append(complement(base) if bit else base)
    return minimize(product(product(parts[0], parts[1], "and"), parts[2], "and"))


def factauto(track: str = "n") -> Dfa:
    """Accepts n such that n! is not a sum of three squares."""
    return theta_dfa(*NOT_SUM_OF_THREE_SQUARES, track=track)


def all_theta_triples() -> list[ThetaTriple]:
    return [ThetaTriple(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
