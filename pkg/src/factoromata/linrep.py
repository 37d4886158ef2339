"""Counting linear representations (v, M0, M1, w).

For a relation automaton over tracks (n, j) the number of j with (n, j)
accepted is ``v M_{n_0} M_{n_1} ... M_{n_{L-1}} w`` over the LSD digits of
n, where ``M_b[p][q]`` counts the j-digits taking state p to state q while
n reads b.  Projection therefore keeps multiplicities instead of collapsing
them the way determinisation does.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import algebra
from .algebra import RowSpace, dot, mat_pow, vec_mat
from .automata import (
    AutomatonError,
    Dfa,
    align_tracks,
    complement,
    make_const,
    make_less_equal,
    minimize,
    product,
    project,
    rename_tracks,
)
from .seeds import NOT_SUM_OF_THREE_SQUARES, theta_dfa


@dataclass(frozen=True)
class LinearRepresentation:
    v: tuple
    m0: tuple
    m1: tuple
    w: tuple

    def __post_init__(self):
        d = len(self.v)
        if d < 1 or len(self.w) != d:
            raise ValueError("v and w must have the same positive dimension")
        for m in (self.m0, self.m1):
            if len(m) != d or any(len(r) != d for r in m):
                raise ValueError("transition matrices must be dim x dim")

    @classmethod
    def build(cls, v, m0, m1, w) -> LinearRepresentation:
        return cls(tuple(v), tuple(map(tuple, m0)), tuple(map(tuple, m1)), tuple(w))

    @property
    def dim(self) -> int:
        return len(self.v)

    def matrix(self, bit: int):
        return self.m1 if bit else self.m0

    def is_nonnegative_integer(self) -> bool:
        entries = [*self.v, *self.w, *(x for m in (self.m0, self.m1) for r in m for x in r)]
        return all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)
                   for x in entries) and all(x >= 0 for x in entries)


# ---------------------------------------------------------------------------
# construction


def counting_relation(target: Dfa, n: str = "n", j: str = "j") -> Dfa:
    """Relation {(n, j) : 1 <= j <= n and target accepts j}."""
    if target.width != 1:
        raise AutomatonError("the counted predicate must have exactly one track")
    pred = rename_tracks(target, {target.tracks[0]: j})
    positive = complement(make_const(0, j))
    le = make_less_equal((j, n))
    rel = product(product(le, positive, "and"), pred, "and")
    return minimize(align_tracks(minimize(rel), (n, j)))


def counting_linrep(relation: Dfa, count_track: str = "j") -> LinearRepresentation:
    """Linear representation counting the witnesses on ``count_track``.

    The relation must be padding invariant and every witness must fit in
    the digit length of the remaining track (j <= n guarantees this).
    """
    if relation.width != 2 or count_track not in relation.tracks:
        raise AutomatonError("counting needs a two-track relation containing the counted track")
    nfa = project(relation, count_track)
    d = nfa.state_count
    mats = []
    for b in (0, 1):
        m = [[0] * d for _ in range(d)]
        for p in range(d):
            for q, mult in nfa.delta[p][b]:
                m[p][q] += mult
        mats.append(m)
    w = [1 if q in nfa.accepting else 0 for q in range(d)]
    return LinearRepresentation.build(nfa.initial, mats[0], mats[1], w)


@lru_cache(maxsize=None)
def theta_linrep(x: int, y: int, z: int) -> LinearRepresentation:
    """Counts #{1 <= j <= n : theta(j) = (x, y, z)}."""
    return counting_linrep(counting_relation(theta_dfa(x, y, z)))


def sbar_linrep() -> LinearRepresentation:
    return theta_linrep(*NOT_SUM_OF_THREE_SQUARES)


# ---------------------------------------------------------------------------
# evaluation


def eval_linrep(rep: LinearRepresentation, n: int):
    if n < 0:
        raise ValueError("n must be a natural number")
    vec = list(rep.v)
    while n:
        vec = vec_mat(vec, rep.matrix(n & 1))
        n >>= 1
    return dot(vec, rep.w)


def value_pow2(rep: LinearRepresentation, k: int):
    """v M0^k M1 w, the value at 2^k."""
    return dot(vec_mat(vec_mat(rep.v, mat_pow(rep.m0, k)), rep.m1), rep.w)


def value_3pow2(rep: LinearRepresentation, k: int):
    """v M0^k M1 M1 w, the value at 3 * 2^k."""
    row = vec_mat(vec_mat(vec_mat(rep.v, mat_pow(rep.m0, k)), rep.m1), rep.m1)
    return dot(row, rep.w)


def pow2_sequences(rep: LinearRepresentation, k_max: int) -> tuple[list, list]:
    """Values at 2^k and 3 * 2^k for k = 0..k_max, iteratively."""
    tail1 = algebra.mat_vec(rep.m1, rep.w)
    tail11 = algebra.mat_vec(rep.m1, tail1)
    row = list(rep.v)
    at_pow2, at_3pow2 = [], []
    for _ in range(k_max + 1):
        at_pow2.append(dot(row, tail1))
        at_3pow2.append(dot(row, tail11))
        row = vec_mat(row, rep.m0)
    return at_pow2, at_3pow2


# ---------------------------------------------------------------------------
# reduction


def _forward_basis(v, mats) -> RowSpace:
    space = RowSpace()
    queue = []
    if space.insert(v)[0]:
        queue.append(space.rows[-1])
    while queue:
        row = queue.pop(0)
        for m in mats:
            nxt = vec_mat(row, m)
            if space.insert(nxt)[0]:
                queue.append(nxt)
    return space


def _restrict(basis: list, v, mats, w):
    """Rewrite (v, mats, w) on the row span of ``basis`` (rows closed under mats)."""
    space = RowSpace()
    for b in basis:
        space.insert(b)
    coords = space.coordinates
    new_v = coords(v)
    new_mats = []
    for m in mats:
        new_mats.append([coords(vec_mat(b, m)) for b in space.rows])
    new_w = [dot(b, w) for b in space.rows]
    return new_v, new_mats, new_w


def _transpose(m):
    return [list(r) for r in zip(*m)]


def reduce(rep: LinearRepresentation) -> LinearRepresentation:
    """Minimal-dimension equivalent representation over the rationals.

    First restrict to the span reachable from v, then (on the transposed
    system) to the span observable from w.
    """
    v = [Fraction(x) for x in rep.v]
    mats = [[[Fraction(x) for x in r] for r in m] for m in (rep.m0, rep.m1)]
    w = [Fraction(x) for x in rep.w]
    if not any(v):
        zero = [[Fraction(0)]]
        return LinearRepresentation.build([Fraction(0)], zero, zero, [Fraction(0)])

    fwd = _forward_basis(v, mats)
    v, mats, w = _restrict(fwd.rows, v, mats, w)

    # observability: same construction on the transpose, swapping v and w
    tmats = [_transpose(m) for m in mats]
    if not any(w):
        zero = [[Fraction(0)]]
        return LinearRepresentation.build([Fraction(0)], zero, zero, [Fraction(0)])
    bwd = _forward_basis(w, tmats)
    w2, tmats2, v2 = _restrict(bwd.rows, w, tmats, v)
    return LinearRepresentation.build(v2, _transpose(tmats2[0]), _transpose(tmats2[1]), w2)


# ---------------------------------------------------------------------------
# closed forms


def pow2_exact(e: int) -> Fraction:
    return Fraction(2) ** e


@dataclass(frozen=True)
class CaseFormula:
    """``lead * 2^(k-3) + constant + coef * 2^((k - shift)/2)`` by k mod 24.

    ``cases`` maps each residue to ``(coef, shift)``; residues absent from
    the map fall into the ``otherwise`` branch with coef 0.
    """

    name: str
    lower_bound: int
    lead: int
    constant: int
    cases: dict

    def branch(self, k: int) -> tuple[int, int]:
        return self.cases.get(k % 24, (0, 0))

    def label(self, k: int) -> str:
        coef, shift = self.branch(k)
        head = f"{self.lead}*2^(k-3)" if self.lead != 1 else "2^(k-3)"
        if self.constant:
            head += f" + {self.constant}"
        if coef == 0:
            return head
        sign = "-" if coef < 0 else "+"
        mag = "" if abs(coef) == 1 else f"{abs(coef)}*"
        return f"{head} {sign} {mag}2^((k-{shift})/2)"

    def evaluate(self, k: int) -> Fraction:
        if k < self.lower_bound:
            raise ValueError(f"{self.name} holds for k >= {self.lower_bound}")
        coef, shift = self.branch(k)
        value = self.lead * pow2_exact(k - 3) + self.constant
        if coef:
            if (k - shift) % 2:
                raise ValueError(f"half-integer exponent in branch for k={k}")
            value += coef * pow2_exact((k - shift) // 2)
        return value


def _table(rows) -> dict:
    out = {}
    for residues, coef, shift in rows:
        for r in residues:
            if r in out:
                raise ValueError(f"residue {r} listed twice")
            out[r] = (coef, shift)
    return out


POW2_FORMULA = CaseFormula(
    name="S-bar(2^k)",
    lower_bound=2,
    lead=1,
    constant=0,
    cases=_table([
        ((0, 2, 22), -1, 4),
        ((1, 3), -1, 3),
        ((11,), -1, 5),
        ((14, 16, 18), 1, 4),
        ((17,), 1, 3),
        ((23,), -3, 5),
    ]),
)

THREE_POW2_FORMULA = CaseFormula(
    name="S-bar(3*2^k)",
    lower_bound=5,
    lead=3,
    constant=1,
    cases=_table([
        ((7, 9, 13, 18, 19), 0, 0),
        ((1, 3, 5), -1, 3),
        ((0, 4, 10), -1, 2),
        ((2, 6, 8, 12), -1, 4),
        ((11, 23), -1, 5),
        ((14,), 1, 4),
        ((15,), 1, 1),
        ((16,), 3, 4),
        ((17,), 1, 3),
        ((20, 22), -3, 4),
        ((21,), -1, 1),
    ]),
)


@dataclass
class FormulaReport:
    formula: str
    rows: list  # (k, expected, got, label)

    @property
    def mismatches(self) -> list:
        return [r for r in self.rows if r[1] != r[2]]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def tsv(self) -> str:
        lines = ["k\texpected\tgot\tcase"]
        lines += [f"{k}\t{e}\t{g}\t{lab}" for k, e, g, lab in self.rows]
        return "\n".join(lines) + "\n"


def check_formula(values: Sequence, formula: CaseFormula, k_max: int) -> FormulaReport:
    rows = []
    for k in range(formula.lower_bound, k_max + 1):
        expected = formula.evaluate(k)
        rows.append((k, expected, values[k], formula.label(k)))
    return FormulaReport(formula.name, rows)


def check_pow2_formula(rep: LinearRepresentation, k_max: int) -> FormulaReport:
    if k_max < 24 + POW2_FORMULA.lower_bound:
        raise ValueError("k_max must cover every residue class mod 24")
    at_pow2, _ = pow2_sequences(rep, k_max)
    return check_formula(at_pow2, POW2_FORMULA, k_max)


def check_3pow2_formula(rep: LinearRepresentation, k_max: int) -> FormulaReport:
    if k_max < 24 + THREE_POW2_FORMULA.lower_bound:
        raise ValueError("k_max must cover every residue class mod 24")
    _, at_3pow2 = pow2_sequences(rep, k_max)
    return check_formula(at_3pow2, THREE_POW2_FORMULA, k_max)


@dataclass
class ScalingReport:
    checked: int
    failures: list  # (k, s, lhs, rhs)

    @property
    def ok(self) -> bool:
        return not self.failures


def scaling_identity_check(rep: LinearRepresentation, k_range, s_range) -> ScalingReport:
    """8 S(2^(24k+s)) - 2^(24k+s) == 2^(12k) (8 S(2^s) - 2^s)."""
    ks, ss = list(k_range), list(s_range)
    top = max(24 * k + s for k in ks for s in ss)
    at_pow2, _ = pow2_sequences(rep, top)
    failures, checked = [], 0
    for k in ks:
        for s in ss:
            e = 24 * k + s
            if e < 2:
                continue
            lhs = 8 * at_pow2[e] - 2**e
            rhs = 2 ** (12 * k) * (8 * at_pow2[s] - 2**s)
            checked += 1
            if lhs != rhs:
                failures.append((k, s, lhs, rhs))
    return ScalingReport(checked, failures)


# ---------------------------------------------------------------------------
# linrep/1 text format


def _fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dumps(rep: LinearRepresentation) -> str:
    lines = ["linrep/1", f"dim: {rep.dim}", " ".join(map(_fmt, rep.v))]
    for m in (rep.m0, rep.m1):
        lines += [" ".join(map(_fmt, r)) for r in m]
    lines.append(" ".join(map(_fmt, rep.w)))
    return "\n".join(lines) + "\n"


def _parse(tok: str):
    x = Fraction(tok)
    return int(x) if x.denominator == 1 else x


def loads(text: str) -> LinearRepresentation:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "linrep/1":
        raise ValueError("missing 'linrep/1' header")
    key, _, val = lines[1].partition(":")
    if key.strip() != "dim":
        raise ValueError("expected 'dim:' line")
    d = int(val)
    rows = [[_parse(t) for t in ln.split()] for ln in lines[2:]]
    if len(rows) != 2 * d + 2:
        raise ValueError(f"expected {2 * d + 2} rows for dimension {d}, got {len(rows)}")
    return LinearRepresentation.build(rows[0], rows[1 : d + 1], rows[d + 1 : 2 * d + 1], rows[-1])


# ---------------------------------------------------------------------------
# constants of the closed forms

CONSTANT_EXPONENTS = (3, 27, 51)


def constant_system(values, exponents=CONSTANT_EXPONENTS):
    """Rows (2^e, 1, 2^(12 (e - e0) / 24)) for c0 2^e + c1 + 2^(12m) tau = value.

    The exponents must be congruent mod 24; ``tau`` collects every term
    whose root is neither 1 nor 2.
    """
    e0 = exponents[0]
    if any((e - e0) % 24 for e in exponents):
        raise ValueError("exponents must agree mod 24")
    a = [[2**e, 1, 2 ** (12 * ((e - e0) // 24))] for e in exponents]
    return a, list(values)


def solve_constants(values, exponents=CONSTANT_EXPONENTS):
    """(c0, c1, tau) from the values at the three given exponents."""
    a, b = constant_system(values, exponents)
    return tuple(algebra.solve_exact(a, b))
