"""Brute-force oracles and range scans, independent of the automata.

Everything here is computed straight from the definitions: Legendre's
formula for the 2-adic valuation of n!, a direct scan of the 3-bit windows
of n, an iterative factorial residue, and the three-square criterion on the
exact integer n!.  Bulk scans use numpy over contiguous ranges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .seeds import NOT_SUM_OF_THREE_SQUARES, ThetaTriple, all_theta_triples

DEFAULT_SCAN_LIMIT = 1 << 20
MAX_SCAN_LIMIT = 1 << 24

ALPHA3_WINDOWS = (3, 4)
ALPHA5_WINDOWS = (5, 6)


# ---------------------------------------------------------------------------
# single values


def nu2_factorial(n: int) -> int:
    """Exponent of 2 in n!, by summing floor(n / 2**i)."""
    total, p = 0, 2
    while p <= n:
        total += n // p
        p <<= 1
    return total


def window_count(n: int, targets) -> int:
    """Number of k >= 0 whose window a_k + 2a_{k+1} + 4a_{k+2} is in targets."""
    return sum(((n >> k) & 7) in targets for k in range(n.bit_length() + 1))


def alpha3(n: int) -> int:
    return window_count(n, ALPHA3_WINDOWS)


def alpha5(n: int) -> int:
    return window_count(n, ALPHA5_WINDOWS)


def theta_direct(n: int) -> ThetaTriple:
    if n < 0:
        raise ValueError("theta is defined on natural numbers")
    gamma = n - bin(n).count("1")
    return ThetaTriple(gamma & 1, alpha3(n) & 1, alpha5(n) & 1)


def in_sbar(n: int) -> bool:
    return theta_direct(n) == NOT_SUM_OF_THREE_SQUARES


class FactorialResidue(NamedTuple):
    nu2: int
    odd_mod8: int


def factorial_residue(n: int) -> FactorialResidue:
    """2-adic valuation of n! and its odd part mod 8, by iterating i = 1..n."""
    nu2, odd = 0, 1
    for i in range(2, n + 1):
        v = (i & -i).bit_length() - 1
        nu2 += v
        odd = (odd * (i >> v)) & 7
    return FactorialResidue(nu2, odd)


def factorial_residues(limit: int) -> list[FactorialResidue]:
    """factorial_residue(n) for every n in 0..limit, in one pass."""
    out = [FactorialResidue(0, 1)]
    nu2, odd = 0, 1
    for i in range(1, limit + 1):
        v = (i & -i).bit_length() - 1
        nu2 += v
        odd = (odd * (i >> v)) & 7
        out.append(FactorialResidue(nu2, odd))
    return out


def predicted_odd_residue(n: int) -> int:
    """3**alpha_3(n) * (-1)**alpha_5(n) mod 8."""
    return (pow(3, alpha3(n), 8) * (1 if alpha5(n) % 2 == 0 else 7)) % 8


def three_square_test(m: int) -> bool:
    """True iff m is a sum of three squares (m is not 4^a (8b + 7))."""
    if m < 0:
        raise ValueError("m must be a natural number")
    if m == 0:
        return True
    while m % 4 == 0:
        m //= 4
    return m % 8 != 7


# ---------------------------------------------------------------------------
# vectorised theta over ranges


def theta_arrays(lo: int, hi: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Parities (gamma, alpha_3, alpha_5) for n in [lo, hi)."""
    n = np.arange(lo, hi, dtype=np.int64)
    bits = max(int(hi).bit_length(), 1)
    pop = np.zeros_like(n)
    a3 = np.zeros_like(n)
    a5 = np.zeros_like(n)
    for k in range(bits + 1):
        pop += (n >> k) & 1
        w = (n >> k) & 7
        a3 += (w == 3) | (w == 4)
        a5 += (w == 5) | (w == 6)
    return ((n - pop) & 1, a3 & 1, a5 & 1)


def theta_codes(lo: int, hi: int) -> np.ndarray:
    """theta packed as 4*gamma + 2*alpha3 + alpha5 for n in [lo, hi)."""
    g, a3, a5 = theta_arrays(lo, hi)
    return (4 * g + 2 * a3 + a5).astype(np.int8)


def triple_code(t) -> int:
    return 4 * t[0] + 2 * t[1] + t[2]


SBAR_CODE = triple_code(NOT_SUM_OF_THREE_SQUARES)


def _check_limit(limit: int, maximum: int = MAX_SCAN_LIMIT):
    if limit < 0:
        raise ValueError("limit must be non-negative")
    if limit > maximum:
        raise ValueError(f"scan limit {limit} exceeds the configured maximum {maximum}")


@dataclass
class MemberScan:
    """Membership of 0..limit in S-bar and the counting function S-bar(n)."""

    limit: int
    members: np.ndarray  # bool, index n
    prefix: np.ndarray  # prefix[n] = #{1 <= j <= n : j in S-bar}

    def count(self, n: int) -> int:
        return int(self.prefix[n])


def scan_members(limit: int, block: int = 1 << 18, maximum: int = MAX_SCAN_LIMIT) -> MemberScan:
    _check_limit(limit, maximum)
    members = np.zeros(limit + 1, dtype=bool)
    for lo in range(0, limit + 1, block):
        hi = min(lo + block, limit + 1)
        members[lo:hi] = theta_codes(lo, hi) == SBAR_CODE
    prefix = np.cumsum(members, dtype=np.int64)
    return MemberScan(limit, members, prefix)


# ---------------------------------------------------------------------------
# gaps


class GapRecord(NamedTuple):
    set_id: str  # "S" or "Sbar"
    start: int
    length: int


@dataclass
class GapScan:
    limit: int
    first: dict[str, dict[int, int]] = field(default_factory=dict)
    counts: dict[str, dict[int, int]] = field(default_factory=dict)

    def lengths(self, set_id: str) -> list[int]:
        return sorted(self.first[set_id])

    def records(self, set_id: str) -> list[GapRecord]:
        """First-occurrence records, ordered by start."""
        return sorted(
            (GapRecord(set_id, s, g) for g, s in self.first[set_id].items()),
            key=lambda r: r.start,
        )


def gaps_of(member_mask: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Starts and lengths of gaps between consecutive True positions."""
    pos = np.flatnonzero(member_mask)
    return pos[:-1], np.diff(pos)


def scan_gaps(limit: int, scan: MemberScan | None = None) -> GapScan:
    """All gaps in S and S-bar among members in 0..limit."""
    if scan is None or scan.limit < limit:
        scan = scan_members(limit)
    sbar = scan.members[: limit + 1]
    out = GapScan(limit)
    for set_id, mask in (("Sbar", sbar), ("S", ~sbar)):
        starts, lengths = gaps_of(mask)
        uniq, idx, cnt = np.unique(lengths, return_index=True, return_counts=True)
        out.first[set_id] = {int(g): int(starts[i]) for g, i in zip(uniq, idx)}
        out.counts[set_id] = {int(g): int(c) for g, c in zip(uniq, cnt)}
    return out


def runs_of(member_mask: np.ndarray) -> dict[int, int]:
    """Maximal run length -> first start, for runs strictly inside the scanned range."""
    m = member_mask.astype(np.int8)
    edges = np.diff(np.concatenate(([0], m, [0])))
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    out: dict[int, int] = {}
    for s, e in zip(starts, ends):
        if e >= len(m):
            continue  # touches the end of the scan, may continue past it
        out.setdefault(int(e - s), int(s))
    return out


# ---------------------------------------------------------------------------
# density


@dataclass
class DensityProfile:
    floor: int
    limit: int
    sup: float  # max |S-bar(n) - n/8| / sqrt(n)
    argmax: int
    numerator: int  # 8*S-bar(argmax) - argmax, exact
    min_signed: int  # most negative 8*S-bar(n) - n on the range
    max_signed: int  # most positive 8*S-bar(n) - n on the range

    def table(self, scan: MemberScan, points) -> list[tuple[int, int, float]]:
        rows = []
        for n in points:
            diff = 8 * scan.count(n) - n
            rows.append((n, diff, abs(diff) / (8 * math.sqrt(n))))
        return rows


def density_profile(limit: int, floor: int = 1 << 10, scan: MemberScan | None = None) -> DensityProfile:
    if floor < 1 << 10:
        raise ValueError("floor must be at least 2**10")
    if limit < floor:
        raise ValueError("limit must be at least floor")
    if scan is None or scan.limit < limit:
        scan = scan_members(limit)
    n = np.arange(floor, limit + 1, dtype=np.int64)
    diff = 8 * scan.prefix[floor : limit + 1] - n
    ratio = np.abs(diff) / (8.0 * np.sqrt(n))
    i = int(np.argmax(ratio))
    return DensityProfile(
        floor=floor,
        limit=limit,
        sup=float(ratio[i]),
        argmax=int(n[i]),
        numerator=int(diff[i]),
        min_signed=int(diff.min()),
        max_signed=int(diff.max()),
    )


# ---------------------------------------------------------------------------
# triple sets


def triple_counts(n: int) -> dict[ThetaTriple, int]:
    """#{1 <= r <= n : theta(r) = t} for each of the eight triples."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return interval_triple_counts(0, n)


def interval_triple_counts(m: int, n: int) -> dict[ThetaTriple, int]:
    """#{m < r <= n : theta(r) = t} for each triple."""
    counts = np.zeros(8, dtype=np.int64)
    block = 1 << 20
    for lo in range(m + 1, n + 1, block):
        hi = min(lo + block, n + 1)
        counts += np.bincount(theta_codes(lo, hi), minlength=8)
    return {t: int(counts[triple_code(t)]) for t in all_theta_triples()}


# ---------------------------------------------------------------------------
# lemma sweeps


@dataclass
class LemmaReport:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def lemma_gamma_additivity(k_max: int = 10, t_max: int = 63) -> LemmaReport:
    """gamma(t 2^k + i) = gamma(i) + gamma(t 2^k) mod 2 for 0 <= i < 2^k."""
    rep = LemmaReport("gamma-additivity")
    for k in range(1, k_max + 1):
        i = np.arange(1 << k, dtype=np.int64)
        gi = np.array([nu2_factorial(int(x)) & 1 for x in i])
        for t in range(1, t_max + 1):
            base = t << k
            gb = nu2_factorial(base) & 1
            lhs = np.array([nu2_factorial(base + int(x)) & 1 for x in i])
            bad = np.flatnonzero(lhs != (gi ^ gb))
            rep.checked += len(i)
            rep.violations.extend((k, t, int(x)) for x in bad)
    return rep


def odd_residue_array(lo: int, hi: int) -> np.ndarray:
    """3**alpha_3 * (-1)**alpha_5 mod 8 for n in [lo, hi)."""
    _, a3, a5 = theta_arrays(lo, hi)
    return (np.where(a3 == 1, 3, 1) * np.where(a5 == 1, 7, 1)) % 8


def quadrants(s: int) -> list[range]:
    q = 1 << (s - 2)
    return [range(0, q), range(q, 2 * q), range(2 * q, 3 * q), range(3 * q, 4 * q)]


def lemma_quadrant_constants(s: int, t_max: int) -> tuple[LemmaReport, dict[tuple[int, int], int]]:
    """For odd t <= t_max, the residue ratio is constant on each quadrant of [0, 2^s).

    Returns the report and the constants c(t, j), j = 1..4.
    """
    if s < 2:
        raise ValueError("s must be at least 2")
    rep = LemmaReport(f"quadrant-constants s={s}")
    base_res = odd_residue_array(0, 1 << s)
    consts = {}
    for t in range(1, t_max + 1, 2):
        shifted = odd_residue_array(t << s, (t << s) + (1 << s))
        # residues are units mod 8 and each is its own inverse
        ratio = (shifted * base_res) % 8
        for j, quad in enumerate(quadrants(s), start=1):
            vals = np.unique(ratio[quad.start : quad.stop])
            rep.checked += len(quad)
            if len(vals) != 1 or int(vals[0]) not in (1, 3, 5, 7):
                rep.violations.append((t, j, [int(v) for v in vals]))
            else:
                consts[(t, j)] = int(vals[0])
    return rep, consts


class WindowCount(NamedTuple):
    count: int
    expected: float  # 2^r / 8
    deviation: float  # |count - 2^r/8| / sqrt(2^r)


def lemma_window_count(t: int, s: int, r: int) -> WindowCount:
    """Members of S-bar in (t 2^s, t 2^s + 2^r]."""
    if not 0 <= r < s:
        raise ValueError("need 0 <= r < s")
    if t % 2 == 0 or not 0 < t < 1 << s:
        raise ValueError("t must be odd with 0 < t < 2^s")
    lo = (t << s) + 1
    count = int(np.count_nonzero(theta_codes(lo, lo + (1 << r)) == SBAR_CODE))
    expected = (1 << r) / 8
    return WindowCount(count, expected, abs(count - expected) / math.sqrt(1 << r))
