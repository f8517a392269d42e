"""Moment tables and Hankel determinant tau values.

The moments f_0, f_1, ... of an instance are the weighted counts of positive
grounded excursions (f_0 = 1, f_1 = a_0, f_2 = a_0^2 + a_0 a_1, ...).  The
time shift acts on them as a pure index shift, so a single moment table
serves every (t, n): the tau value at (t, n) is the n x n determinant with
entries f_{t+j+k}.

Determinants are evaluated by fraction-free (Bareiss) elimination on an
integer matrix obtained by clearing all denominators first, which keeps the
arithmetic exact without intermediate rational blow-up.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Sequence

from .core import (
    DiscreteField,
    InitialDataDiscrete,
    TauTable,
    qe_from_tau,
    tau_row_len,
)
from .errors import DataExhaustedError

__all__ = [
    "MomentSequence",
    "HankelMatrix",
    "moments_table",
    "tau_hankel",
    "build_tau_table",
    "shifted_hankel_check",
    "solve_ivp_discrete",
]


@dataclass(frozen=True)
class MomentSequence:
    """Moments f_0 .. f_M of an instance, normalized to f_0 = 1."""

    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.values or self.values[0] != 1:
            raise ValueError("a moment sequence starts with f_0 = 1")

    @property
    def M(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, m: int) -> Fraction:
        return self.values[m]

    def __len__(self) -> int:
        return len(self.values)


def _det_bareiss(m: list[list[int]]) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination
    with row pivoting; every interior division is exact."""
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class HankelMatrix:
    """A size x size matrix whose (j, k) entry depends only on j + k."""

    size: int
    shift: int
    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_moments(cls, f: Sequence[Fraction], size: int, shift: int) -> "HankelMatrix":
        if size < 0 or shift < 0:
            raise ValueError("size and shift must be nonnegative")
        if shift + 2 * size - 2 >= len(f) and size > 0:
            raise DataExhaustedError(
                f"a size-{size} matrix at shift {shift} needs moment index "
                f"{shift + 2 * size - 2} (have up to {len(f) - 1})"
            )
        rows = tuple(
            tuple(Fraction(f[shift + j + k]) for k in range(size)) for j in range(size)
        )
        return cls(size, shift, rows)

    def determinant(self) -> Fraction:
        if self.size == 0:
            return Fraction(1)
        scale = lcm(*(v.denominator for row in self.entries for v in row))
        ints = [[int(v * scale) for v in row] for row in self.entries]
        return Fraction(_det_bareiss(ints), scale**self.size)


@lru_cache(maxsize=None)
def moments_table(a: InitialDataDiscrete) -> MomentSequence:
    """Moments f_0 .. f_M by a dynamic program over prefix height: h[y] holds
    the summed weight of m-step positive prefixes ending at height y, and
    f_m is read off at height 0 after each even step."""
    M = a.M
    zero = Fraction(0)
    cur = [Fraction(1)] + [zero] * M
    f = [Fraction(1)]
    for step in range(1, 2 * M + 1):
        nxt = [zero] * (M + 1)
        for y in range(M + 1):
            acc = zero
            if y >= 1:
                acc += cur[y - 1] * a[y - 1]
            if y + 1 <= M:
                acc += cur[y + 1]
            nxt[y] = acc
        cur = nxt
        if step % 2 == 0:
            f.append(cur[0])
    return MomentSequence(tuple(f))


def tau_hankel(a: InitialDataDiscrete, t: int, n: int) -> Fraction:
    """Tau value at (t, n) as the determinant of (f_{t+j+k}), j, k < n.

    The empty determinant is 1.  Requires t + 2n - 2 <= M.
    """
    if t < 0 or n < 0:
        raise ValueError("t and n must be nonnegative")
    if t + 2 * n - 2 > a.M:
        raise DataExhaustedError(
            f"tau({t},{n}) needs {t + 2 * n - 2} initial values (have {a.M})"
        )
    if n == 0:
        return Fraction(1)
    f = moments_table(a)
    return HankelMatrix.from_moments(f.values, n, t).determinant()


def build_tau_table(a: InitialDataDiscrete, t_upper: int | None = None) -> TauTable:
    """Tau values over the whole trapezoid t + 2n <= M + 2 (or rows up to
    t_upper), sharing one memoized moment table across all cells."""
    M = a.M
    t_hi = M + 2 if t_upper is None else min(t_upper, M + 2)
    rows = tuple(
        tuple(tau_hankel(a, t, n) for n in range(tau_row_len(M, t)))
        for t in range(t_hi + 1)
    )
    return TauTable(M, rows)


def shifted_hankel_check(a: InitialDataDiscrete, n: int) -> tuple[Fraction, Fraction]:
    """Recover (a_{2n}, a_{2n+1}) from the unshifted and once-shifted
    determinants D_m = tau(0, m) and D'_m = tau(1, m):

        a_{2n}   = D'_{n+1} D_n   / (D'_n     D_{n+1}),
        a_{2n+1} = D'_n     D_{n+2} / (D'_{n+1} D_{n+1}).

    This inverts the moment construction; it needs 2n + 2 <= M.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if 2 * n + 2 > a.M:
        raise DataExhaustedError(
            f"the check at n={n} needs {2 * n + 2} initial values (have {a.M})"
        )
    d = [tau_hankel(a, 0, m) for m in range(n + 3)]
    dp = [tau_hankel(a, 1, m) for m in range(n + 2)]
    if 0 in (dp[n], d[n + 1], dp[n + 1]):
        raise ValueError("degenerate data: a shifted determinant vanished")
    even = dp[n + 1] * d[n] / (dp[n] * d[n + 1])
    odd = dp[n] * d[n + 2] / (dp[n + 1] * d[n + 1])
    return even, odd


def solve_ivp_discrete(a: InitialDataDiscrete, t_max: int) -> DiscreteField:
    """Solve the initial value problem through the determinant route: build
    the tau table, then recover q and e by the quotient rules.  Agrees with
    evolve_discrete cell for cell on the full trapezoid."""
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    t_real = min(t_max, a.M - 1)
    return qe_from_tau(build_tau_table(a, t_real + 1))
