"""Exact rational linear algebra and polynomials.

Matrices are lists of rows of ``Fraction`` (or ``int``); nothing in this
module touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Iterable, Sequence


class SingularMatrixError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# matrices


def as_fractions(rows) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col) if x and y) for col in bt] for row in a]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[c * x for x in row] for row in a]


def vec_mat(v, m):
    """Row vector times matrix."""
    out = [0] * len(m[0])
    for x, row in zip(v, m):
        if x:
            for j, y in enumerate(row):
                if y:
                    out[j] += x * y
    return out


def mat_vec(m, w):
    return [sum(x * y for x, y in zip(row, w) if x and y) for row in m]


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def mat_pow(m, k: int):
    """m**k by repeated squaring."""
    if k < 0:
        raise ValueError("negative matrix power")
    result = identity(len(m))
    base = m
    while k:
        if k & 1:
            result = mat_mul(result, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return result


def bareiss(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int], int]:
    """Fraction-free elimination of an integer matrix.

    Returns the echelon matrix, the pivot columns and the sign-adjusted
    last pivot (the determinant when the matrix is square and nonsingular).
    Every intermediate entry is an integer (a minor of the input).
    """
    a = [list(map(int, r)) for r in rows]
    nrows, ncols = len(a), len(a[0]) if a else 0
    prev, sign, r = 1, 1, 0
    pivots = []
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
            sign = -sign
        piv = a[r][c]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                num = a[i][j] * piv - a[i][c] * a[r][j]
                q, rem = divmod(num, prev)
                assert rem == 0, "Bareiss division must be exact"
                a[i][j] = q
            a[i][c] = 0
        prev = piv
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots, sign * prev


def determinant(rows) -> Fraction:
    rows = as_fractions(rows)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant needs a square matrix")
    scale = 1
    ints = []
    for r in rows:
        d = lcm(*(x.denominator for x in r)) if r else 1
        scale *= d
        ints.append([int(x * d) for x in r])
    _, pivots, det = bareiss(ints)
    if len(pivots) < n:
        return Fraction(0)
    return Fraction(det, scale)


def solve_exact(a, b) -> list[Fraction]:
    """Solve the square nonsingular system a x = b exactly.

    Rows are cleared of denominators, then eliminated fraction-free on the
    augmented matrix and back-substituted over the rationals.
    """
    a = as_fractions(a)
    b = [Fraction(x) for x in b]
    n = len(a)
    if n == 0 or any(len(r) != n for r in a) or len(b) != n:
        raise ValueError("solve_exact needs a square system with matching right-hand side")
    aug = []
    for row, rhs in zip(a, b):
        full = row + [rhs]
        d = lcm(*(x.denominator for x in full))
        aug.append([int(x * d) for x in full])
    ech, pivots, _ = bareiss(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(ech[i][n]) - sum(ech[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / ech[i][i]
    return x


class RowSpace:
    """Incrementally maintained echelon basis over the rationals.

    ``reduce`` also returns the combination of earlier inserted vectors that
    was subtracted, so a zero residue exhibits a linear dependency.
    """

    def __init__(self, track_combinations: bool = False):
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []
        self.track = track_combinations
        self.combos: list[list[Fraction]] = []  # combos[i]: row i in terms of inputs
        self.inputs = 0

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec) -> tuple[list[Fraction], list[Fraction] | None]:
        v = [Fraction(x) for x in vec]
        combo = [Fraction(0)] * self.inputs + [Fraction(1)] if self.track else None
        for row, piv, rc in zip(self.rows, self.pivots, self.combos or [None] * len(self.rows)):
            c = v[piv]
            if c:
                for j in range(piv, len(v)):
                    if row[j]:
                        v[j] -= c * row[j]
                if self.track:
                    for j, y in enumerate(rc):
                        if y:
                            combo[j] -= c * y
        return v, combo

    def insert(self, vec) -> tuple[bool, list[Fraction] | None]:
        """Add ``vec``; returns (independent, combination) for the residue."""
        v, combo = self.reduce(vec)
        self.inputs += 1
        piv = next((j for j, x in enumerate(v) if x), None)
        if piv is None:
            return False, combo
        inv = 1 / v[piv]
        v = [x * inv for x in v]
        # keep reduced echelon form so reduce() only touches each pivot once
        for k, row in enumerate(self.rows):
            c = row[piv]
            if c:
                self.rows[k] = [x - c * y for x, y in zip(row, v)]
                if self.track:
                    ck = self.combos[k] + [Fraction(0)] * (len(combo) - len(self.combos[k]))
                    self.combos[k] = [x - c * inv * y for x, y in zip(ck, combo)]
        self.rows.append(v)
        self.pivots.append(piv)
        if self.track:
            self.combos.append([x * inv for x in combo])
        return True, combo

    def coordinates(self, vec) -> list[Fraction]:
        """Coordinates of ``vec`` in the current (reduced echelon) basis."""
        coords = [Fraction(vec[p]) for p in self.pivots]
        residue, _ = self.reduce(vec)
        if any(residue):
            raise ValueError("vector is not in the span")
        return coords


# ---------------------------------------------------------------------------
# polynomials


@dataclass(frozen=True)
class Poly:
    """Polynomial with rational coefficients, constant term first."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = ()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def x_power(cls, k: int, c=1) -> Poly:
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1]

    def __add__(self, other: Poly) -> Poly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    def __neg__(self) -> Poly:
        return Poly(-x for x in self.coeffs)

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return Poly(out)

    def __pow__(self, k: int) -> Poly:
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, divisor: Poly) -> tuple[Poly, Poly]:
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dd = divisor.degree
        quot = [Fraction(0)] * max(len(rem) - dd, 0)
        lead = divisor.lead
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i] / lead
            if c:
                quot[i - dd] = c
                for j, y in enumerate(divisor.coeffs):
                    rem[i - dd + j] -= c * y
        return Poly(quot), Poly(rem[:dd])

    def __mod__(self, divisor: Poly) -> Poly:
        return self.divmod(divisor)[1]

    def __floordiv__(self, divisor: Poly) -> Poly:
        return self.divmod(divisor)[0]

    def monic(self) -> Poly:
        return Poly(x / self.lead for x in self.coeffs)

    def integer_coeffs(self) -> list[int]:
        """Coefficients scaled to coprime integers with positive leading term."""
        d = lcm(*(x.denominator for x in self.coeffs)) if self.coeffs else 1
        ints = [int(x * d) for x in self.coeffs]
        g = 0
        for x in ints:
            g = gcd(g, x)
        g = g or 1
        if ints and ints[-1] < 0:
            g = -g
        return [x // g for x in ints]

    def __call__(self, x):
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def of_matrix(self, m):
        """Evaluate at a square matrix by Horner's rule."""
        n = len(m)
        out = [[Fraction(0)] * n for _ in range(n)]
        for c in reversed(self.coeffs):
            out = mat_mul(out, m)
            for i in range(n):
                out[i][i] += c
        return out

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mag = abs(c)
            body = "" if (mag == 1 and k) else str(mag)
            if k:
                body += ("*" if body else "") + ("x" if k == 1 else f"x^{k}")
            parts.append(("-" if c < 0 else "+") + " " + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


X = Poly([0, 1])


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def poly_sub(p: Poly, q: Poly) -> Poly:
    return p - q


def poly_divides(p: Poly, q: Poly) -> bool:
    """True iff p divides q over the rationals."""
    if p.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    return (q % p).is_zero()


def poly_gcd(p: Poly, q: Poly) -> Poly:
    while not q.is_zero():
        p, q = q, p % q
    return p.monic() if not p.is_zero() else p


def minimal_polynomial(m) -> Poly:
    """Least-degree monic p with p(m) = 0.

    Searches for the first linear dependency among the flattened powers
    I, m, m^2, ... with exact rational elimination.
    """
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("minimal polynomial needs a square matrix")
    m = as_fractions(m)
    space = RowSpace(track_combinations=True)
    power = as_fractions(identity(n))
    for k in range(n + 1):
        independent, combo = space.insert([x for row in power for x in row])
        if not independent:
            # combo expresses m^k minus a combination of lower powers as zero
            return Poly(combo).monic()
        power = mat_mul(power, m)
    raise AssertionError("Cayley-Hamilton bound exceeded")  # pragma: no cover


def is_annihilator(p: Poly, m) -> bool:
    return all(x == 0 for row in p.of_matrix(as_fractions(m)) for x in row)


# ---------------------------------------------------------------------------
# recurrences


@dataclass
class RecurrenceReport:
    poly: Poly
    k_max: int
    failures: list[int]

    @property
    def ok(self) -> bool:
        return not self.failures


def recurrence_check(sequence: Callable[[int], int] | Sequence[int], p: Poly, k_max: int) -> RecurrenceReport:
    """Check sum_i p_i u_{k+i} = 0 for 0 <= k <= k_max - deg p."""
    if p.is_zero():
        raise ValueError("the zero polynomial defines no recurrence")
    d = p.degree
    if callable(sequence):
        u = [sequence(k) for k in range(k_max + 1)]
    else:
        u = list(sequence[: k_max + 1])
        if len(u) < k_max + 1:
            raise ValueError(f"need {k_max + 1} terms, got {len(u)}")
    failures = [
        k for k in range(0, k_max - d + 1) if sum(c * u[k + i] for i, c in enumerate(p.coeffs)) != 0
    ]
    return RecurrenceReport(p, k_max, failures)


def dumps_poly(p: Poly) -> str:
    return " ".join(str(c) for c in p.coeffs)


def loads_poly(text: str) -> Poly:
    return Poly(Fraction(t) for t in text.split())
