"""The cross-verification matrix.

Every invariant the library promises is run here as a named check over
seeded random instances: the four solution routes against each other, the
combinatorial identities behind them, and the bilinear residuals of every
tau table.  A report is deterministic given (seed, sizes) and carries a
witness for each failing check, so a regression pins itself to concrete
numbers.

The fault-injection self test perturbs one tau cell of a valid table and
confirms the residual scan catches it; it guards the guard.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import core, hankel, paths, tropical
from .core import InitialDataDiscrete, InitialDataUltra

__all__ = [
    "CheckRecord",
    "VerificationReport",
    "run_verification",
    "run_self_test",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 1729


@dataclass(frozen=True)
class CheckRecord:
    check_id: str
    params: dict
    status: str  # "pass" or "fail"
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.check_id,
            "params": self.params,
            "status": self.status,
            "witness": self.witness,
        }


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    seed: int
    sizes: dict
    records: tuple[CheckRecord, ...] = field(default_factory=tuple)

    @property
    def failed(self) -> int:
        return sum(1 for r in self.records if r.status == "fail")

    @property
    def passed_all(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "sizes": self.sizes,
            "checks": [r.to_dict() for r in sorted(self.records, key=lambda r: r.check_id)],
            "summary": {
                "total": len(self.records),
                "passed": len(self.records) - self.failed,
                "failed": self.failed,
            },
            "status": "pass" if self.passed_all else "fail",
        }


def _random_discrete(rng: random.Random, m_lo: int, m_hi: int) -> InitialDataDiscrete:
    M = rng.randint(m_lo, m_hi)
    return InitialDataDiscrete(
        [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(M)]
    )


def _random_ultra(rng: random.Random, m_lo: int, m_hi: int) -> InitialDataUltra:
    M = rng.randint(m_lo, m_hi)
    return InitialDataUltra([rng.randint(-20, 20) for _ in range(M)])


class _Runner:
    def __init__(self) -> None:
        self.records: list[CheckRecord] = []

    def run(self, check_id: str, params: dict, fn: Callable[[], dict | None]) -> None:
        try:
            witness = fn()
        except Exception as exc:  # a crash is a failure with the error as witness
            witness = {"error": f"{type(exc).__name__}: {exc}"}
        self.records.append(
            CheckRecord(check_id, params, "fail" if witness else "pass", witness)
        )


def run_verification(
    seed: int = DEFAULT_SEED, t_hi: int = 4, n_hi: int = 3
) -> VerificationReport:
    """Run the whole matrix at the given sizes and return the report."""
    rng = random.Random(seed)
    disc = [_random_discrete(rng, 1, 12) for _ in range(5)]
    disc_rich = [_random_discrete(rng, max(8, t_hi + 2 * n_hi - 2), 12) for _ in range(3)]
    ultra = [_random_ultra(rng, 1, 40) for _ in range(5)]
    ultra_rich = [_random_ultra(rng, 11, 16) for _ in range(3)]
    r = _Runner()

    def fmt_a(a) -> list[str]:
        return [str(v) for v in a.values]

    # Route equivalences -------------------------------------------------

    def ivp_discrete() -> dict | None:
        for a in disc + disc_rich:
            direct = core.evolve_discrete(a, a.M)
            via_tau = hankel.solve_ivp_discrete(a, a.M)
            if direct != via_tau:
                return {"a": fmt_a(a)}
        return None

    r.run("route-discrete-recurrence-vs-hankel", {"instances": 8}, ivp_discrete)

    def ivp_ultra() -> dict | None:
        for A in ultra + ultra_rich:
            direct = core.evolve_ultra(A, A.M)
            via_t = tropical.solve_ivp_ultra(A, A.M)
            if direct != via_t:
                return {"A": list(A.values)}
        return None

    r.run("route-ultra-recurrence-vs-shortest", {"instances": 8}, ivp_ultra)

    def recurrence_tau() -> dict | None:
        for a in disc:
            from_field = core.tau_from_field(core.evolve_discrete(a, a.M), a.M + 2)
            from_dets = hankel.build_tau_table(a)
            if from_field != from_dets:
                return {"a": fmt_a(a)}
        return None

    r.run("route-tau-recurrence-vs-hankel", {"instances": 5}, recurrence_tau)

    def recurrence_T() -> dict | None:
        for A in ultra:
            from_field = core.T_from_field(core.evolve_ultra(A, A.M), A.M + 2)
            from_paths = tropical.build_T_table(A)
            if from_field != from_paths:
                return {"A": list(A.values)}
        return None

    r.run("route-T-recurrence-vs-shortest", {"instances": 5}, recurrence_T)

    def gv_vs_hankel() -> dict | None:
        for a in disc_rich:
            for t in range(t_hi + 1):
                for n in range(n_hi + 1):
                    if t + 2 * n - 2 > a.M:
                        continue
                    gv = paths.tau_gv(a, t, n)
                    det = hankel.tau_hankel(a, t, n)
                    if gv != det:
                        return {"a": fmt_a(a), "t": t, "n": n,
                                "paths": str(gv), "hankel": str(det)}
        return None

    r.run("route-tau-paths-vs-hankel", {"t<=": t_hi, "n<=": n_hi}, gv_vs_hankel)

    def tmin_vs_shortest() -> dict | None:
        for A in ultra_rich:
            for t in range(t_hi + 1):
                for n in range(n_hi + 1):
                    if t + 2 * n - 2 > A.M:
                        continue
                    by_dp = tropical.shortest_T(A, t, n)
                    by_all = paths.T_min_over_families(A, t, n, tabular_only=False)
                    by_tab = paths.T_min_over_families(A, t, n, tabular_only=True)
                    if not by_dp == by_all == by_tab:
                        return {"A": list(A.values), "t": t, "n": n,
                                "dp": by_dp, "all": by_all, "tabular": by_tab}
        return None

    r.run("route-T-paths-vs-shortest", {"t<=": t_hi, "n<=": n_hi}, tmin_vs_shortest)

    # Bilinear residuals --------------------------------------------------

    def bilinear_discrete() -> dict | None:
        for a in disc:
            tab = hankel.build_tau_table(a)
            for t, n in core.bilinear_cells(tab):
                res = core.bilinear_residual_discrete(tab, t, n)
                if res != 0:
                    return {"a": fmt_a(a), "t": t, "n": n, "residual": str(res)}
        return None

    r.run("bilinear-discrete-residuals-zero", {"instances": 5}, bilinear_discrete)

    def bilinear_ultra() -> dict | None:
        for A in ultra:
            tab = tropical.build_T_table(A)
            for t, n in core.bilinear_cells(tab):
                res = core.bilinear_residual_ultra(tab, t, n)
                if res != 0:
                    return {"A": list(A.values), "t": t, "n": n, "residual": res}
        return None

    r.run("bilinear-ultra-residuals-zero", {"instances": 5}, bilinear_ultra)

    # Moments and series ---------------------------------------------------

    def catalan() -> dict | None:
        from math import comb

        for n in range(11):
            got = len(paths.enumerate_positive_grounded(n))
            want = comb(2 * n, n) // (n + 1)
            if got != want:
                return {"n": n, "enumerated": got, "catalan": want}
        return None

    r.run("paths-count-is-catalan", {"n<=": 10}, catalan)

    def moment_vs_pathsum() -> dict | None:
        a = disc_rich[0]
        for n in range(9):
            by_sum = paths.moment_f0(a, n)
            by_paths = sum(
                (paths.path_weight(p, a) for p in paths.enumerate_positive_grounded(n)),
                Fraction(0),
            )
            if by_sum != by_paths:
                return {"a": fmt_a(a), "n": n}
        return None

    r.run("moment-nested-sum-vs-path-sum", {"n<=": 8}, moment_vs_pathsum)

    def moments_dp() -> dict | None:
        for a in disc:
            table = hankel.moments_table(a)
            for n in range(min(a.M, 8) + 1):
                if table[n] != paths.moment_f0(a, n):
                    return {"a": fmt_a(a), "n": n}
        return None

    r.run("moment-dp-vs-nested-sum", {"n<=": 8}, moments_dp)

    def sfraction() -> dict | None:
        for a in disc:
            N = min(a.M, 8)
            series = paths.s_fraction_series(a, N)
            for n in range(N + 1):
                if series[n] != paths.moment_f0(a, n):
                    return {"a": fmt_a(a), "n": n}
        return None

    r.run("sfraction-coefficients-are-moments", {"N<=": 8}, sfraction)

    def shifted_inversion() -> dict | None:
        for a in disc_rich:
            for n in range((a.M - 2) // 2 + 1):
                even, odd = hankel.shifted_hankel_check(a, n)
                if even != a[2 * n] or odd != a[2 * n + 1]:
                    return {"a": fmt_a(a), "n": n, "even": str(even), "odd": str(odd)}
        return None

    r.run("shifted-determinants-invert-data", {}, shifted_inversion)

    # Families and counts --------------------------------------------------

    def family_counts() -> dict | None:
        for tabular in (False, True):
            for t in range(t_hi + 1):
                for n in range(n_hi + 1):
                    got = len(paths.enumerate_families(t, n, tabular))
                    want = paths.count_families(t, n, tabular)
                    if got != want:
                        return {"t": t, "n": n, "tabular": tabular,
                                "enumerated": got, "closed_form": want}
        return None

    r.run("family-count-closed-form", {"t<=": t_hi, "n<=": n_hi}, family_counts)

    def degree_check() -> dict | None:
        for t in range(4):
            for n in range(4):
                poly = paths.tau_polynomial(t, n)
                want = paths.family_degree(t, n)
                for expo, coeff in poly.items():
                    if sum(expo) != want or coeff <= 0:
                        return {"t": t, "n": n, "monomial": list(expo), "coeff": coeff}
                if len(poly) > paths.count_families(t, n):
                    return {"t": t, "n": n, "support": len(poly)}
        return None

    r.run("tau-polynomial-homogeneous-positive", {"t<=": 3, "n<=": 3}, degree_check)

    # Hook rewriting -------------------------------------------------------

    def hook_machinery() -> dict | None:
        for n in range(7):  # every positive grounded path with <= 12 steps
            for p in paths.enumerate_positive_grounded(n):
                phi, psi = paths.apply_phi(p), paths.apply_psi(p)
                if (phi.origin, phi.end) != (p.origin, p.end):
                    return {"path": p.steps, "phi": phi.steps, "reason": "endpoints"}
                if (psi.origin, psi.end) != (p.origin, p.end):
                    return {"path": p.steps, "psi": psi.steps, "reason": "endpoints"}
                if not (phi.is_positive() and psi.is_positive()):
                    return {"path": p.steps, "reason": "positivity"}
                width = n
                base = paths.up_step_counts(p, width)
                mean = tuple(
                    x + y
                    for x, y in zip(
                        paths.up_step_counts(phi, width), paths.up_step_counts(psi, width)
                    )
                )
                if mean != tuple(2 * c for c in base):
                    return {"path": p.steps, "phi": phi.steps, "psi": psi.steps,
                            "reason": "mean formula"}
                hooks = paths.find_hooks(p)
                ups = sum(1 for h in hooks if h.kind == "up")
                downs = len(hooks) - ups
                for img in (phi, psi):
                    ih = paths.find_hooks(img)
                    iu = sum(1 for h in ih if h.kind == "up")
                    if iu > ups or len(ih) - iu > downs:
                        return {"path": p.steps, "image": img.steps,
                                "reason": "hook count increased"}
                if paths.is_tabular(p) != (not hooks):
                    return {"path": p.steps, "reason": "tabular vs hooks"}
        return None

    r.run("hook-rewrites-mean-and-monotone", {"steps<=": 12}, hook_machinery)

    # Graph side -----------------------------------------------------------

    def shortest_vs_bruteforce() -> dict | None:
        for A in ultra_rich:
            for t in range(min(t_hi + 1, 5) + 1):
                for n in range(min(n_hi + 1, 4) + 1):
                    if t + 2 * n - 2 > A.M:
                        continue
                    dp = tropical.shortest_T(A, t, n)
                    brute = min(
                        q.weight(A) for q in tropical.enumerate_graph_paths(t, n)
                    )
                    if dp != brute:
                        return {"A": list(A.values), "t": t, "n": n,
                                "dp": dp, "brute": brute}
        return None

    r.run("shortest-dp-vs-graph-enumeration", {"t<=": 5, "n<=": 4}, shortest_vs_bruteforce)

    def restricted_min() -> dict | None:
        A = ultra_rich[0]
        for t in range(1, t_hi + 1):
            for n in range(n_hi + 1):
                if t + 2 * n - 2 > A.M:
                    continue
                full = min(q.weight(A) for q in tropical.enumerate_graph_paths(t, n))
                restr = min(
                    q.weight(A) for q in tropical.enumerate_graph_paths(t, n, True)
                )
                if full != restr:
                    return {"A": list(A.values), "t": t, "n": n,
                            "full": full, "restricted": restr}
        return None

    r.run("restricted-min-equals-full-min", {"t>=": 1}, restricted_min)

    def bijection() -> dict | None:
        A = ultra_rich[1]
        for t in range(1, t_hi + 1):
            for n in range(n_hi + 1):
                fams = paths.enumerate_families(t, n, tabular_only=True)
                images = [tropical.tabular_to_graph_path(f) for f in fams]
                for f, q in zip(fams, images):
                    wf = sum(paths.path_weight(p, A, "additive") for p in f.paths)
                    if wf != q.weight(A):
                        return {"t": t, "n": n, "family": [p.steps for p in f.paths],
                                "reason": "weight not preserved"}
                words = {q.edges for q in images}
                target = {q.edges for q in tropical.enumerate_graph_paths(t, n, True)}
                if len(words) != len(images):
                    return {"t": t, "n": n, "reason": "not injective"}
                if words != target:
                    return {"t": t, "n": n, "reason": "not onto the restricted set"}
        return None

    r.run("bijection-tabular-families-to-graph-paths", {"t<=": t_hi, "n<=": n_hi}, bijection)

    def positivity() -> dict | None:
        for a in disc:
            f = core.evolve_discrete(a, a.M)
            if any(v <= 0 for row in f.q_rows for v in row):
                return {"a": fmt_a(a), "reason": "nonpositive q"}
            if any(v <= 0 for row in f.e_rows for v in row[1:]):
                return {"a": fmt_a(a), "reason": "nonpositive e"}
        return None

    r.run("evolution-preserves-positivity", {"instances": 5}, positivity)

    records = tuple(sorted(r.records, key=lambda rec: rec.check_id))
    return VerificationReport(
        suite="todamol-verify",
        seed=seed,
        sizes={"t_hi": t_hi, "n_hi": n_hi},
        records=records,
    )


def run_self_test() -> VerificationReport:
    """Inject a one-cell fault into a valid tau table and a valid integer tau
    table; the bilinear residual scans must flag a cell for each."""
    records = []

    a = InitialDataDiscrete([1, 2, 1, 3, 1, 2, 2, 1])
    tab = hankel.build_tau_table(a)
    rows = [list(row) for row in tab.rows]
    rows[1][1] += 1
    broken = core.TauTable(tab.M, tuple(tuple(r) for r in rows))
    offenders = [
        {"t": t, "n": n, "residual": str(core.bilinear_residual_discrete(broken, t, n))}
        for t, n in core.bilinear_cells(broken)
        if core.bilinear_residual_discrete(broken, t, n) != 0
    ]
    records.append(
        CheckRecord(
            "selftest-discrete-fault-detected",
            {"mutated_cell": {"t": 1, "n": 1}},
            "pass" if offenders else "fail",
            {"offending_cells": offenders} if offenders else {"error": "fault not detected"},
        )
    )

    A = InitialDataUltra([3, -1, 4, 1, -5, 9, 2, -6])
    utab = tropical.build_T_table(A)
    urows = [list(row) for row in utab.rows]
    urows[2][1] += 1
    ubroken = core.UTauTable(utab.M, tuple(tuple(r) for r in urows))
    uoffenders = [
        {"t": t, "n": n, "residual": core.bilinear_residual_ultra(ubroken, t, n)}
        for t, n in core.bilinear_cells(ubroken)
        if core.bilinear_residual_ultra(ubroken, t, n) != 0
    ]
    records.append(
        CheckRecord(
            "selftest-ultra-fault-detected",
            {"mutated_cell": {"t": 2, "n": 1}},
            "pass" if uoffenders else "fail",
            {"offending_cells": uoffenders} if uoffenders else {"error": "fault not detected"},
        )
    )

    return VerificationReport(
        suite="todamol-self-test",
        seed=0,
        sizes={},
        records=tuple(records),
    )
