"""Exact state types and direct evolution for the discrete and ultradiscrete
Toda molecules.

The discrete system advances positive rational variables q, e in time by

    q'[n] = q[n] + e[n+1] - e'[n],      e'[n+1] = q[n+1] * e[n+1] / q'[n],

with the wall condition e[0] = 0 at every time step (primes denote the next
step).  Its min-plus counterpart advances integer variables Q, E by

    Q'[n] = min(sum(Q[0..n]) - sum(Q'[0..n-1]), E[n+1]),
    E'[n+1] = Q[n+1] - Q'[n] + E[n+1].

A problem instance is a finite list of M initial values a_0 .. a_{M-1} read
off at t = 0 as q[n] = a_{2n} and e[n+1] = a_{2n+1}.  Those M numbers
determine a trapezoidal index domain:

    q[t][n] exists iff t + 2n + 1 <= M,
    e[t][n+1] exists iff t + 2n + 2 <= M,
    tau[t][n] exists iff t + 2n <= M + 2.

Cells outside the domain are absent, never defaulted, and every solver in
this package realizes exactly the same domain, which is what makes exact
whole-field equality checks between routes meaningful.  Arithmetic is exact
throughout: fractions.Fraction on the discrete side, int on the min-plus
side.  All types are immutable.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import DomainError

__all__ = [
    "InitialDataDiscrete",
    "InitialDataUltra",
    "DiscreteField",
    "UltraField",
    "TauTable",
    "UTauTable",
    "q_row_len",
    "e_row_len",
    "tau_row_len",
    "evolve_discrete",
    "evolve_ultra",
    "qe_from_tau",
    "QE_from_T",
    "bilinear_residual_discrete",
    "bilinear_residual_ultra",
    "bilinear_cells",
    "tau_from_field",
    "T_from_field",
]


def _to_fraction(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass int, Fraction, or 'p/q' string")
    return Fraction(value)


def _to_int(value) -> int:
    if isinstance(value, str):
        return int(value, 10)
    return operator.index(value)


@dataclass(frozen=True)
class InitialDataDiscrete:
    """Initial values a_0 .. a_{M-1} for the discrete system, all positive."""

    values: tuple[Fraction, ...]

    def __init__(self, values: Sequence) -> None:
        vals = tuple(_to_fraction(v) for v in values)
        if not vals:
            raise ValueError("at least one initial value is required")
        if any(v <= 0 for v in vals):
            raise ValueError("initial values must be positive")
        object.__setattr__(self, "values", vals)

    @property
    def M(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> Fraction:
        return self.values[k]


@dataclass(frozen=True)
class InitialDataUltra:
    """Initial values A_0 .. A_{M-1} for the min-plus system, any integers."""

    values: tuple[int, ...]

    def __init__(self, values: Sequence) -> None:
        vals = tuple(_to_int(v) for v in values)
        if not vals:
            raise ValueError("at least one initial value is required")
        object.__setattr__(self, "values", vals)

    @property
    def M(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> int:
        return self.values[k]


def q_row_len(M: int, t: int) -> int:
    """Number of stored q values at time t (indices n with t + 2n + 1 <= M)."""
    return (M - 1 - t) // 2 + 1 if t <= M - 1 else 0


def e_row_len(M: int, t: int) -> int:
    """Number of stored e values at time t, including the wall e[t][0] = 0."""
    return (M - t) // 2 + 1 if t <= M else 0


def tau_row_len(M: int, t: int) -> int:
    """Number of stored tau values at time t (indices n with t + 2n <= M + 2)."""
    return (M + 2 - t) // 2 + 1 if t <= M + 2 else 0


@dataclass(frozen=True)
class DiscreteField:
    """q and e values over the trapezoidal domain, one row tuple per time step.

    e_rows[t][0] is the wall value 0; every other stored entry is strictly
    positive.
    """

    M: int
    q_rows: tuple[tuple[Fraction, ...], ...]
    e_rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if len(self.q_rows) != len(self.e_rows):
            raise ValueError("q and e must cover the same time steps")
        for erow in self.e_rows:
            if not erow or erow[0] != 0:
                raise ValueError("every e row must start with the wall value 0")
            if any(v <= 0 for v in erow[1:]):
                raise ValueError("interior e values must be positive")
        for qrow in self.q_rows:
            if any(v <= 0 for v in qrow):
                raise ValueError("q values must be positive")

    @property
    def t_last(self) -> int:
        return len(self.q_rows) - 1

    def q(self, t: int, n: int) -> Fraction:
        if 0 <= t < len(self.q_rows) and 0 <= n < len(self.q_rows[t]):
            return self.q_rows[t][n]
        raise DomainError(f"q cell (t={t}, n={n}) is outside the stored domain")

    def e(self, t: int, n: int) -> Fraction:
        if 0 <= t < len(self.e_rows) and 0 <= n < len(self.e_rows[t]):
            return self.e_rows[t][n]
        raise DomainError(f"e cell (t={t}, n={n}) is outside the stored domain")


@dataclass(frozen=True)
class UltraField:
    """Q and E values over the same trapezoid, exact integers.

    E_rows[t][0] is fixed to 0 by convention so both solution routes
    serialize and compare identically; the evolution equations never read it.
    """

    M: int
    Q_rows: tuple[tuple[int, ...], ...]
    E_rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.Q_rows) != len(self.E_rows):
            raise ValueError("Q and E must cover the same time steps")
        for erow in self.E_rows:
            if not erow or erow[0] != 0:
                raise ValueError("every E row must start with the boundary value 0")

    @property
    def t_last(self) -> int:
        return len(self.Q_rows) - 1

    def Q(self, t: int, n: int) -> int:
        if 0 <= t < len(self.Q_rows) and 0 <= n < len(self.Q_rows[t]):
            return self.Q_rows[t][n]
        raise DomainError(f"Q cell (t={t}, n={n}) is outside the stored domain")

    def E(self, t: int, n: int) -> int:
        if 0 <= t < len(self.E_rows) and 0 <= n < len(self.E_rows[t]):
            return self.E_rows[t][n]
        raise DomainError(f"E cell (t={t}, n={n}) is outside the stored domain")


@dataclass(frozen=True)
class TauTable:
    """Rational tau values tau[t][n] with the boundary column tau[t][0] = 1."""

    M: int
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        for row in self.rows:
            if not row or row[0] != 1:
                raise ValueError("every tau row must start with the boundary value 1")

    @property
    def t_last(self) -> int:
        return len(self.rows) - 1

    def in_domain(self, t: int, n: int) -> bool:
        return 0 <= t < len(self.rows) and 0 <= n < len(self.rows[t])

    def value(self, t: int, n: int) -> Fraction:
        if self.in_domain(t, n):
            return self.rows[t][n]
        raise DomainError(f"tau cell (t={t}, n={n}) is outside the stored domain")

    def cells(self) -> Iterator[tuple[int, int, Fraction]]:
        for t, row in enumerate(self.rows):
            for n, v in enumerate(row):
                yield t, n, v


@dataclass(frozen=True)
class UTauTable:
    """Integer tau values T[t][n] with the boundary column T[t][0] = 0."""

    M: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        for row in self.rows:
            if not row or row[0] != 0:
                raise ValueError("every T row must start with the boundary value 0")

    @property
    def t_last(self) -> int:
        return len(self.rows) - 1

    def in_domain(self, t: int, n: int) -> bool:
        return 0 <= t < len(self.rows) and 0 <= n < len(self.rows[t])

    def value(self, t: int, n: int) -> int:
        if self.in_domain(t, n):
            return self.rows[t][n]
        raise DomainError(f"T cell (t={t}, n={n}) is outside the stored domain")

    def cells(self) -> Iterator[tuple[int, int, int]]:
        for t, row in enumerate(self.rows):
            for n, v in enumerate(row):
                yield t, n, v


def evolve_discrete(a: InitialDataDiscrete, t_max: int) -> DiscreteField:
    """Advance the discrete system from the t = 0 slice by the rhombus rules.

    The requested horizon is clipped to the data-supported domain (rows exist
    for t <= M - 1); the realized horizon is visible as field.t_last.  All
    computed values are strictly positive for positive initial data, which
    also guarantees the division is well defined.
    """
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    M = a.M
    t_real = min(t_max, M - 1)
    q_rows = [tuple(a[2 * n] for n in range(q_row_len(M, 0)))]
    e_rows = [tuple([Fraction(0)] + [a[2 * n + 1] for n in range(e_row_len(M, 0) - 1)])]
    for t in range(t_real):
        qt, et = q_rows[t], e_rows[t]
        lq, le = q_row_len(M, t + 1), e_row_len(M, t + 1)
        qn = [qt[0] + et[1]]
        en = [Fraction(0)]
        for j in range(1, max(lq, le)):
            if j < le:
                val = qt[j] * et[j] / qn[j - 1]
                assert val > 0
                en.append(val)
            if j < lq:
                val = qt[j] + et[j + 1] - en[j]
                assert val > 0
                qn.append(val)
        q_rows.append(tuple(qn))
        e_rows.append(tuple(en))
    return DiscreteField(M, tuple(q_rows), tuple(e_rows))


def evolve_ultra(A: InitialDataUltra, t_max: int) -> UltraField:
    """Advance the min-plus system from the t = 0 slice.

    Mirrors evolve_discrete with (+, -, min) in place of (*, /, +); the
    domain shape is identical.
    """
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    M = A.M
    t_real = min(t_max, M - 1)
    Q_rows = [tuple(A[2 * n] for n in range(q_row_len(M, 0)))]
    E_rows = [tuple([0] + [A[2 * n + 1] for n in range(e_row_len(M, 0) - 1)])]
    for t in range(t_real):
        Qt, Et = Q_rows[t], E_rows[t]
        lq, le = q_row_len(M, t + 1), e_row_len(M, t + 1)
        Qn = [min(Qt[0], Et[1])]
        En = [0]
        sum_t = Qt[0]
        sum_next = 0
        for j in range(1, max(lq, le)):
            if j < le:
                En.append(Qt[j] - Qn[j - 1] + Et[j])
            if j < lq:
                sum_t += Qt[j]
                sum_next += Qn[j - 1]
                Qn.append(min(sum_t - sum_next, Et[j + 1]))
        Q_rows.append(tuple(Qn))
        E_rows.append(tuple(En))
    return UltraField(M, tuple(Q_rows), tuple(E_rows))


def qe_from_tau(tau: TauTable) -> DiscreteField:
    """Recover the field variables from a tau table by the quotient rules

        q[t][n]   = tau[t+1][n+1] tau[t][n] / (tau[t+1][n] tau[t][n+1]),
        e[t][n+1] = tau[t+1][n] tau[t][n+2] / (tau[t+1][n+1] tau[t][n+1]),

    with e[t][0] = 0.  Every cell whose four tau entries are stored is
    produced, so a full tau table yields the full evolve_discrete domain.
    Tables containing a zero entry are rejected.
    """
    for t, n, v in tau.cells():
        if v == 0:
            raise ValueError(f"tau table has a zero entry at (t={t}, n={n})")
    q_rows: list[tuple[Fraction, ...]] = []
    e_rows: list[tuple[Fraction, ...]] = []
    for t in range(len(tau.rows) - 1):
        r0, r1 = tau.rows[t], tau.rows[t + 1]
        nq = min(len(r0), len(r1)) - 1
        if nq < 1:
            break
        q_rows.append(
            tuple(r1[n + 1] * r0[n] / (r1[n] * r0[n + 1]) for n in range(nq))
        )
        ne = min(len(r0) - 2, len(r1) - 1)
        e_rows.append(
            tuple(
                [Fraction(0)]
                + [r1[n] * r0[n + 2] / (r1[n + 1] * r0[n + 1]) for n in range(max(ne, 0))]
            )
        )
    return DiscreteField(tau.M, tuple(q_rows), tuple(e_rows))


def QE_from_T(T: UTauTable) -> UltraField:
    """Recover the min-plus field from an integer tau table by the signed sums

        Q[t][n]   = T[t+1][n+1] + T[t][n] - T[t+1][n] - T[t][n+1],
        E[t][n+1] = T[t+1][n] + T[t][n+2] - T[t+1][n+1] - T[t][n+1],

    with E[t][0] = 0 by convention.
    """
    Q_rows: list[tuple[int, ...]] = []
    E_rows: list[tuple[int, ...]] = []
    for t in range(len(T.rows) - 1):
        r0, r1 = T.rows[t], T.rows[t + 1]
        nq = min(len(r0), len(r1)) - 1
        if nq < 1:
            break
        Q_rows.append(
            tuple(r1[n + 1] + r0[n] - r1[n] - r0[n + 1] for n in range(nq))
        )
        ne = min(len(r0) - 2, len(r1) - 1)
        E_rows.append(
            tuple(
                [0]
                + [r1[n] + r0[n + 2] - r1[n + 1] - r0[n + 1] for n in range(max(ne, 0))]
            )
        )
    return UltraField(T.M, tuple(Q_rows), tuple(E_rows))


def bilinear_residual_discrete(tau: TauTable, t: int, n: int) -> Fraction:
    """Residual of the quadratic tau identity at (t, n), for t >= 1:

        tau[t+1][n+1] tau[t-1][n+1] - tau[t+1][n] tau[t-1][n+2] - tau[t][n+1]^2

    Zero exactly when the table solves the bilinear form of the system there.
    """
    if t < 1 or n < 0:
        raise DomainError("the residual needs t >= 1 and n >= 0")
    v = tau.value
    return v(t + 1, n + 1) * v(t - 1, n + 1) - v(t + 1, n) * v(t - 1, n + 2) - v(t, n + 1) ** 2


def bilinear_residual_ultra(T: UTauTable, t: int, n: int) -> int:
    """Residual of the min-plus tau identity at (t, n), for t >= 1:

        T[t+1][n+1] + T[t-1][n+1] - min(T[t+1][n] + T[t-1][n+2], 2 T[t][n+1])
    """
    if t < 1 or n < 0:
        raise DomainError("the residual needs t >= 1 and n >= 0")
    v = T.value
    return v(t + 1, n + 1) + v(t - 1, n + 1) - min(v(t + 1, n) + v(t - 1, n + 2), 2 * v(t, n + 1))


def bilinear_cells(table: TauTable | UTauTable) -> Iterator[tuple[int, int]]:
    """All (t, n) where the six entries of the bilinear residual are stored."""
    rows = table.rows
    for t in range(1, len(rows) - 1):
        n_hi = min(len(rows[t + 1]) - 2, len(rows[t - 1]) - 3, len(rows[t]) - 2)
        for n in range(n_hi + 1):
            yield t, n


def tau_from_field(field: DiscreteField, t_upper: int | None = None) -> TauTable:
    """Rebuild the tau table from a recurrence-evolved field.

    The quotient rule q[t][n] = tau[t+1][n+1] tau[t][n] / (tau[t+1][n] tau[t][n+1])
    together with the boundary column tau[t][0] = 1 inverts to a row lift

        tau[t+1][n] = tau[t][n] * q[t][0] * ... * q[t][n-1],

    and the t = 0 row is pinned by tau0[0] = tau0[1] = 1 and

        tau0[n+2] = q0[n] * e0[n+1] * tau0[n+1]^2 / tau0[n],

    so the whole table is a function of the field alone.  Rows above the
    field's horizon degenerate to the boundary value only.
    """
    M = field.M
    if t_upper is None:
        t_upper = len(field.q_rows)
    t_upper = min(t_upper, M + 2)
    row = [Fraction(1)] * min(2, tau_row_len(M, 0))
    q0, e0 = field.q_rows[0], field.e_rows[0]
    for m in range(2, tau_row_len(M, 0)):
        row.append(q0[m - 2] * e0[m - 1] * row[m - 1] ** 2 / row[m - 2])
    rows = [tuple(row)]
    for t in range(t_upper):
        row_len = tau_row_len(M, t + 1)
        if t >= len(field.q_rows) and row_len > 1:
            break  # row not derivable from a field truncated below its horizon
        prev = rows[-1]
        qrow = field.q_rows[t] if t < len(field.q_rows) else ()
        acc = Fraction(1)
        nxt = []
        for n in range(row_len):
            if n > 0:
                acc *= qrow[n - 1]
            nxt.append(prev[n] * acc)
        rows.append(tuple(nxt))
    return TauTable(M, tuple(rows))


def T_from_field(field: UltraField, t_upper: int | None = None) -> UTauTable:
    """Min-plus analogue of tau_from_field: T[t+1][n] = T[t][n] + sum(Q[t][:n]),
    seeded by T0[0] = T0[1] = 0 and T0[n+2] = Q0[n] + E0[n+1] + 2 T0[n+1] - T0[n].
    """
    M = field.M
    if t_upper is None:
        t_upper = len(field.Q_rows)
    t_upper = min(t_upper, M + 2)
    row = [0] * min(2, tau_row_len(M, 0))
    Q0, E0 = field.Q_rows[0], field.E_rows[0]
    for m in range(2, tau_row_len(M, 0)):
        row.append(Q0[m - 2] + E0[m - 1] + 2 * row[m - 1] - row[m - 2])
    rows = [tuple(row)]
    for t in range(t_upper):
        row_len = tau_row_len(M, t + 1)
        if t >= len(field.Q_rows) and row_len > 1:
            break
        prev = rows[-1]
        Qrow = field.Q_rows[t] if t < len(field.Q_rows) else ()
        acc = 0
        nxt = []
        for n in range(row_len):
            if n > 0:
                acc += Qrow[n - 1]
            nxt.append(prev[n] + acc)
        rows.append(tuple(nxt))
    return UTauTable(M, tuple(rows))
