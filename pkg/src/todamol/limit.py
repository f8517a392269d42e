"""Sharpness experiment for the exponential-substitution limit.

Substituting a_y = exp(-A_y / eps) turns the summed multiplicative family
weights into tau(eps) = sum(exp(-W_i / eps)) over the additive family
weights W_i, and -eps * log tau(eps) squeezes between the minimum W and the
minimum minus eps * log N, where N is the family count:

    0 <= T - (-eps * log tau(eps)) <= eps * log N.

This is the one deliberately floating-point corner of the package; the gap
is evaluated with a stable log-sum-exp.  Everything it is compared against
(T and the weight multiset) is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import InitialDataUltra
from .paths import enumerate_families, path_weight
from .tropical import shortest_T

__all__ = ["LimitRecord", "LimitExperiment", "run_limit"]

DEFAULT_EPSILONS = (1.0, 0.1, 0.01, 0.001)


@dataclass(frozen=True)
class LimitRecord:
    epsilon: float
    soft_min: float  # -eps * log tau(eps)
    gap: float       # T - soft_min, certified in [0, eps * log N]
    bound: float     # eps * log N


@dataclass(frozen=True)
class LimitExperiment:
    data: InitialDataUltra
    t: int
    n: int
    exact: int           # the min-plus tau value
    family_count: int
    records: tuple[LimitRecord, ...]

    def within_bounds(self, tol: float = 0.0) -> bool:
        return all(-tol <= r.gap <= r.bound + tol for r in self.records)


def run_limit(
    A: InitialDataUltra,
    t: int,
    n: int,
    epsilons: tuple[float, ...] = DEFAULT_EPSILONS,
) -> LimitExperiment:
    """Record the soft minimum and its certified gap for each epsilon,
    largest epsilon first."""
    if any(e <= 0 for e in epsilons):
        raise ValueError("epsilons must be positive")
    families = enumerate_families(t, n)
    weights = [
        sum(path_weight(p, A, "additive") for p in fam.paths) for fam in families
    ]
    count = len(weights)
    exact = shortest_T(A, t, n)
    w_min = min(weights)
    if exact != w_min:
        raise AssertionError(
            f"route disagreement at ({t},{n}): shortest path {exact}, "
            f"family minimum {w_min}"
        )
    gaps_d = sorted(w - w_min for w in weights)
    bound_base = math.log(count)
    records = []
    for eps in sorted(epsilons, reverse=True):
        lse = math.log(sum(math.exp(-d / eps) for d in gaps_d))
        records.append(
            LimitRecord(
                epsilon=eps,
                soft_min=w_min - eps * lse,
                gap=eps * lse,
                bound=eps * bound_base,
            )
        )
    return LimitExperiment(A, t, n, exact, count, tuple(records))
