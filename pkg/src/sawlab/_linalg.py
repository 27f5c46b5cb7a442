"""Exact integer and rational linear algebra.

Everything here operates on plain Python ints and fractions.Fraction;
no floating point enters any decision. Matrices are lists of row
tuples/lists. These routines back the rank/kernel computations on
coefficient matrices and the harmonic linear systems, both of which
are small (at most a few dozen rows), so clarity beats asymptotics.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of an integer matrix, by fraction-free Bareiss elimination.

    All intermediate values stay integers; divisions are exact.
    """
    m = [list(map(int, r)) for r in rows]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev_pivot = 1
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        pivot_row = None
        for r in range(row, nrows):
            if m[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        m[row], m[pivot_row] = m[pivot_row], m[row]
        pivot = m[row][col]
        for r in range(row + 1, nrows):
            for c in range(col + 1, ncols):
                # Bareiss update: division by the previous pivot is exact.
                m[r][c] = (m[r][c] * pivot - m[r][col] * m[row][c]) // prev_pivot
            m[r][col] = 0
        prev_pivot = pivot
        rank += 1
        row += 1
    return rank


def rref(rows: Sequence[Sequence[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form over Q. Returns (rref_rows, pivot_columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    nrows, ncols = len(m), len(m[0])
    pivots: List[int] = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        pivot_row = None
        for r in range(row, nrows):
            if m[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        m[row], m[pivot_row] = m[pivot_row], m[row]
        inv = m[row][col]
        m[row] = [x / inv for x in m[row]]
        for r in range(nrows):
            if r != row and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
    return m, pivots


def _primitive(vec: Sequence[int]) -> Tuple[int, ...]:
    """Divide by the gcd and make the first non-zero entry positive."""
    g = 0
    for x in vec:
        g = gcd(g, abs(x))
    if g > 1:
        vec = [x // g for x in vec]
    else:
        vec = list(vec)
    for x in vec:
        if x != 0:
            if x < 0:
                vec = [-y for y in vec]
            break
    return tuple(vec)


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> List[Tuple[int, ...]]:
    """Primitive integer basis of the rational null space of an integer matrix.

    One basis vector per free column of the RREF, in increasing free-column
    order (the lexicographic-minimal echelon ordering). Each vector is
    scaled to integers with gcd 1 and positive leading entry.
    """
    if ncols == 0:
        return []
    if not rows:
        rows = []
    reduced, pivots = rref([[Fraction(x) for x in r] for r in rows])
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis: List[Tuple[int, ...]] = []
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for prow, pcol in zip(reduced, pivots):
            vec[pcol] = -prow[fc]
        denom_lcm = 1
        for x in vec:
            denom_lcm = denom_lcm * x.denominator // gcd(denom_lcm, x.denominator)
        ints = [int(x * denom_lcm) for x in vec]
        basis.append(_primitive(ints))
    return basis


class InconsistentSystem(ValueError):
    """Raised when a linear system A x = b has no solution."""


def solve_unique(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> List[Fraction]:
    """Solve A x = b over Q, requiring a unique solution.

    Raises InconsistentSystem if no solution exists, ValueError if the
    solution is not unique (the harmonic systems we feed in are pinned
    to full column rank, so non-uniqueness signals a caller bug).
    """
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    reduced, pivots = rref(aug)
    if ncols in pivots:
        raise InconsistentSystem("no solution")
    if len(pivots) < ncols:
        raise ValueError("solution not unique")
    x = [Fraction(0)] * ncols
    for prow, pcol in zip(reduced, pivots):
        x[pcol] = prow[-1]
    return x


def iroot_floor(value: int, n: int) -> int:
    """Largest integer r with r**n <= value, for value >= 0, n >= 1."""
    if value < 0 or n < 1:
        raise ValueError("iroot_floor requires value >= 0 and n >= 1")
    if value in (0, 1) or n == 1:
        return value
    # Newton iteration on integers, seeded from the bit length.
    r = 1 << ((value.bit_length() + n - 1) // n)
    while True:
        nr = ((n - 1) * r + value // r ** (n - 1)) // n
        if nr >= r:
            break
        r = nr
    while r ** n > value:
        r -= 1
    while (r + 1) ** n <= value:
        r += 1
    return r


def nth_root_decimal(value: int, n: int, digits: int, round_up: bool) -> str:
    """Render value**(1/n) as a decimal string with `digits` fractional digits.

    round_up=False truncates toward zero (safe for lower bounds);
    round_up=True rounds away from zero (safe for upper bounds).
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    scaled = value * 10 ** (digits * n)
    r = iroot_floor(scaled, n)
    if round_up and r ** n < scaled:
        r += 1
    s = str(r).rjust(digits + 1, "0")
    return s[:-digits] + "." + s[-digits:]


def root_compare(a_base: int, a_n: int, b_base: int, b_n: int) -> int:
    """Exact comparison of a_base**(1/a_n) vs b_base**(1/b_n).

    Returns -1, 0, or 1. Uses cross powers, so no rounding is involved.
    """
    lhs = a_base ** b_n
    rhs = b_base ** a_n
    return (lhs > rhs) - (lhs < rhs)
