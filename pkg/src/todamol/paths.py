"""Weighted lattice paths and non-intersecting path families.

A path is a word over U = (1, 1) and D = (1, -1).  Positive means it never
dips below the x-axis, grounded means both ends sit on it.  An up step
leaving height y carries the label a_y (or A_y on the min-plus side); down
steps carry 1 (or 0).  The multiplicative weight of a path is the product of
its labels, the additive weight the sum.

The central objects are the families P(t, n): ordered n-sets of positive
grounded paths where path j runs from (-2j, 0) to (2t + 2j, 0) and no two
paths share a lattice point.  Because all heights at a given x have equal
parity, "no shared point" is equivalent to consecutive paths keeping a
vertical gap of at least 2, which is what the enumerator enforces.

Path sums over these families solve the initial value problems elsewhere in
the package: the summed multiplicative weights reproduce the rational tau
values, and the minimal additive weight reproduces the integer ones.  This
module also carries the hook rewriting maps used to show that tabular
families (every path of shape U^m (DU)^r D^m) already attain that minimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterator, Literal

from .core import InitialDataDiscrete, InitialDataUltra
from .errors import DataExhaustedError, EnumerationCapError

__all__ = [
    "LatticePath",
    "PathFamily",
    "Hook",
    "PATH_ENUM_CAP",
    "FAMILY_ENUM_CAP",
    "enumerate_positive_grounded",
    "path_weight",
    "moment_f0",
    "s_fraction_series",
    "enumerate_families",
    "count_families",
    "tau_gv",
    "is_tabular",
    "find_hooks",
    "apply_phi",
    "apply_psi",
    "T_min_over_families",
    "up_step_counts",
    "moment_polynomial",
    "tau_polynomial",
    "family_degree",
]

PATH_ENUM_CAP = 14  # half-length cap for exhaustive single-path enumeration
FAMILY_ENUM_CAP = 10**6


@dataclass(frozen=True)
class LatticePath:
    """An up/down path, stored as a step word with an integer origin."""

    steps: str
    origin: tuple[int, int] = (0, 0)

    def __post_init__(self) -> None:
        if set(self.steps) - {"U", "D"}:
            raise ValueError("steps must be a word over 'U' and 'D'")

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def end(self) -> tuple[int, int]:
        x, y = self.origin
        return x + len(self.steps), y + sum(1 if c == "U" else -1 for c in self.steps)

    def profile(self) -> tuple[int, ...]:
        """Heights at every lattice abscissa from origin to end, inclusive."""
        y = self.origin[1]
        out = [y]
        for c in self.steps:
            y += 1 if c == "U" else -1
            out.append(y)
        return tuple(out)

    def is_positive(self) -> bool:
        return min(self.profile()) >= 0

    def is_grounded(self) -> bool:
        prof = self.profile()
        return prof[0] == 0 and prof[-1] == 0

    def max_height(self) -> int:
        return max(self.profile())

    def down_count(self) -> int:
        return self.steps.count("D")

    def peaks(self) -> tuple[int, ...]:
        """Apex heights of every UD corner."""
        prof = self.profile()
        s = self.steps
        return tuple(
            prof[i + 1] for i in range(len(s) - 1) if s[i] == "U" and s[i + 1] == "D"
        )

    def valleys(self) -> tuple[int, ...]:
        """Floor heights of every DU corner."""
        prof = self.profile()
        s = self.steps
        return tuple(
            prof[i + 1] for i in range(len(s) - 1) if s[i] == "D" and s[i + 1] == "U"
        )


@dataclass(frozen=True)
class Hook:
    """A D U^k D (up) or U D^k U (down) subpath, k >= 2.

    start is the index of the leading flank step, k the inner run length.
    """

    kind: Literal["up", "down"]
    start: int
    k: int


@dataclass(frozen=True)
class PathFamily:
    """An ordered n-set of mutually non-intersecting positive grounded paths,
    path j running from (-2j, 0) to (2t + 2j, 0)."""

    t: int
    n: int
    paths: tuple[LatticePath, ...]

    def __post_init__(self) -> None:
        if len(self.paths) != self.n:
            raise ValueError("family must contain exactly n paths")
        for j, p in enumerate(self.paths):
            if p.origin != (-2 * j, 0) or p.end != (2 * self.t + 2 * j, 0):
                raise ValueError(f"path {j} has wrong endpoints for this family")
            if not p.is_positive():
                raise ValueError(f"path {j} dips below the x-axis")
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if _paths_touch(self.paths[i], self.paths[j]):
                    raise ValueError(f"paths {i} and {j} share a lattice point")


def _paths_touch(p: LatticePath, q: LatticePath) -> bool:
    xp, prof_p = p.origin[0], p.profile()
    xq, prof_q = q.origin[0], q.profile()
    lo = max(xp, xq)
    hi = min(xp + len(p.steps), xq + len(q.steps))
    for x in range(lo, hi + 1):
        if prof_p[x - xp] == prof_q[x - xq]:
            return True
    return False


@lru_cache(maxsize=None)
def enumerate_positive_grounded(n: int) -> tuple[LatticePath, ...]:
    """All positive grounded paths from (0, 0) to (2n, 0), in lexicographic
    step order with U < D.  There are Catalan(n) of them."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > PATH_ENUM_CAP:
        raise EnumerationCapError(
            f"path enumeration is capped at n <= {PATH_ENUM_CAP} (requested {n})"
        )
    out: list[LatticePath] = []
    steps: list[str] = []

    def walk(h: int, remaining: int) -> None:
        if remaining == 0:
            out.append(LatticePath("".join(steps)))
            return
        if h + 1 <= remaining - 1:
            steps.append("U")
            walk(h + 1, remaining - 1)
            steps.pop()
        if h >= 1:
            steps.append("D")
            walk(h - 1, remaining - 1)
            steps.pop()

    walk(0, 2 * n)
    return tuple(out)


def path_weight(
    path: LatticePath,
    data: InitialDataDiscrete | InitialDataUltra,
    mode: Literal["multiplicative", "additive"] = "multiplicative",
):
    """Weight of a positive grounded path under the given initial data.

    Multiplicative mode takes rational data and multiplies the up-step
    labels; additive mode takes integer data and sums them.  The empty path
    weighs 1, respectively 0.
    """
    if not (path.is_positive() and path.is_grounded()):
        raise ValueError("weights are defined for positive grounded paths")
    if mode == "multiplicative":
        if not isinstance(data, InitialDataDiscrete):
            raise TypeError("multiplicative weights need rational initial data")
        unit = Fraction(1)
    elif mode == "additive":
        if not isinstance(data, InitialDataUltra):
            raise TypeError("additive weights need integer initial data")
        unit = 0
    else:
        raise ValueError(f"unknown mode {mode!r}")
    acc = unit
    y = path.origin[1]
    for c in path.steps:
        if c == "U":
            if y >= data.M:
                raise DataExhaustedError(
                    f"label index {y} needs more initial values (have {data.M})"
                )
            acc = acc * data[y] if mode == "multiplicative" else acc + data[y]
            y += 1
        else:
            y -= 1
    return acc


def up_step_counts(path: LatticePath, width: int | None = None) -> tuple[int, ...]:
    """How many up steps leave each height, as an exponent vector.

    The result has length width (default: the path's own maximum height), so
    callers comparing monomials should pass a common width.
    """
    if width is None:
        width = max(path.max_height(), 0)
    counts = [0] * width
    y = path.origin[1]
    for c in path.steps:
        if c == "U":
            counts[y] += 1
            y += 1
        else:
            y -= 1
    return tuple(counts)


def moment_f0(a: InitialDataDiscrete, n: int) -> Fraction:
    """The n-th moment of the initial data by the nested-sum formula

        sum over 0 = k1, k2 <= k1 + 1, ..., kn <= k(n-1) + 1 of a_{k1} ... a_{kn},

    which equals the summed multiplicative weight of all positive grounded
    paths from (0, 0) to (2n, 0).  Kept enumeration-shaped on purpose; the
    production moment table uses a dynamic program and is checked against
    this.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > a.M:
        raise DataExhaustedError(f"moment {n} needs at least {n} initial values")
    if n == 0:
        return Fraction(1)

    def tail(level: int, prev: int) -> Fraction:
        if level > n:
            return Fraction(1)
        return sum((a[k] * tail(level + 1, k) for k in range(prev + 2)), Fraction(0))

    return a[0] * tail(2, 0)


def s_fraction_series(a: InitialDataDiscrete, N: int) -> tuple[Fraction, ...]:
    """First N + 1 power series coefficients of the staircase fraction

        1 / (1 - a0 z / (1 - a1 z / (1 - ...))),

    truncated at depth N; deeper levels cannot reach coefficients <= N.
    Coefficient n equals moment_f0(a, n).
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N > a.M:
        raise DataExhaustedError(f"series order {N} needs at least {N} initial values")
    g = [Fraction(1)] + [Fraction(0)] * N
    for k in reversed(range(N)):
        u = [Fraction(0)] + [a[k] * g[i] for i in range(N)]  # a_k * z * g, truncated
        c = [Fraction(1)] + [Fraction(0)] * N
        for m in range(1, N + 1):
            c[m] = sum(u[i] * c[m - i] for i in range(1, m + 1))
        g = c
    return tuple(g)


def count_families(t: int, n: int, tabular_only: bool = False) -> int:
    """Closed-form size of P(t, n), or of its tabular subset.

    The full count is the product over 1 <= j <= k < t of (2n + j + k)/(j + k);
    the tabular count is the product over 1 <= j < t of (n + j)/j, which is
    the binomial coefficient C(t + n - 1, t - 1).  Empty products (t <= 1)
    are 1: the unique maximal packing.  Both forms are validated against
    brute-force enumeration in the test suite.
    """
    if t < 0 or n < 0:
        raise ValueError("t and n must be nonnegative")
    acc = Fraction(1)
    if tabular_only:
        for j in range(1, t):
            acc *= Fraction(n + j, j)
    else:
        for j in range(1, t):
            for k in range(j, t):
                acc *= Fraction(2 * n + j + k, j + k)
    assert acc.denominator == 1
    return int(acc)


def _layer_paths(t: int, j: int, below: LatticePath | None) -> Iterator[LatticePath]:
    """Positive grounded paths from (-2j, 0) to (2t + 2j, 0) staying at least
    two above the previous layer wherever their spans overlap, lexicographic."""
    if below is None:
        yield from enumerate_positive_grounded(t)
        return
    x0 = -2 * j
    length = 2 * t + 4 * j
    bx0 = below.origin[0]
    bprof = below.profile()
    bx1 = bx0 + len(below.steps)
    steps: list[str] = []

    def floor_at(x: int) -> int:
        if bx0 <= x <= bx1:
            return bprof[x - bx0] + 2
        return 0

    def walk(x: int, h: int, remaining: int) -> Iterator[LatticePath]:
        if remaining == 0:
            yield LatticePath("".join(steps), (x0, 0))
            return
        for c in ("U", "D"):
            nh = h + 1 if c == "U" else h - 1
            if nh < 0 or nh > remaining - 1:
                continue
            if x + 1 <= bx1 and nh < floor_at(x + 1):
                continue
            steps.append(c)
            yield from walk(x + 1, nh, remaining - 1)
            steps.pop()

    yield from walk(x0, 0, length)


def enumerate_families(t: int, n: int, tabular_only: bool = False) -> tuple[PathFamily, ...]:
    """All of P(t, n) (or its tabular subset), each family exactly once, in
    lexicographic order of the step words (P_0 first)."""
    return _enumerate_families(t, n, bool(tabular_only))


@lru_cache(maxsize=None)
def _enumerate_families(t: int, n: int, tabular_only: bool) -> tuple[PathFamily, ...]:
    if t < 0 or n < 0:
        raise ValueError("t and n must be nonnegative")
    expected = count_families(t, n, tabular_only)
    if expected > FAMILY_ENUM_CAP:
        raise EnumerationCapError(
            f"{expected} families exceeds the enumeration cap {FAMILY_ENUM_CAP}"
        )
    out: list[PathFamily] = []
    acc: list[LatticePath] = []

    def rec(j: int) -> None:
        if j == n:
            out.append(PathFamily(t, n, tuple(acc)))
            return
        for p in _layer_paths(t, j, acc[-1] if acc else None):
            if tabular_only and not is_tabular(p):
                continue
            acc.append(p)
            rec(j + 1)
            acc.pop()

    rec(0)
    return tuple(out)


def tau_gv(a: InitialDataDiscrete, t: int, n: int) -> Fraction:
    """Rational tau value as the sum over P(t, n) of the products of the
    member paths' multiplicative weights.  Exact but exponential; serves as
    the combinatorial oracle for the determinant route."""
    if t + 2 * n - 2 > a.M:
        raise DataExhaustedError(
            f"tau({t},{n}) needs {t + 2 * n - 2} initial values (have {a.M})"
        )
    total = Fraction(0)
    for family in enumerate_families(t, n):
        w = Fraction(1)
        for p in family.paths:
            w *= path_weight(p, a, "multiplicative")
        total += w
    return total


def is_tabular(path: LatticePath) -> bool:
    """True when every peak apex sits at one height k + 1 and every valley
    floor at k, for a single k >= 0; equivalently the path has no hooks and
    is of the shape U^m (DU)^r D^m."""
    tops = set(path.peaks())
    bottoms = set(path.valleys())
    if len(tops) > 1 or len(bottoms) > 1:
        return False
    if tops and bottoms:
        return next(iter(tops)) == next(iter(bottoms)) + 1
    return True


def _runs(steps: str) -> list[tuple[str, int, int]]:
    """Maximal runs as (char, start, length)."""
    out = []
    i = 0
    while i < len(steps):
        j = i
        while j < len(steps) and steps[j] == steps[i]:
            j += 1
        out.append((steps[i], i, j - i))
        i = j
    return out


def find_hooks(path: LatticePath) -> tuple[Hook, ...]:
    """All hooks of the path, left to right.

    An interior U-run of length k >= 2 flanked by down steps is an up hook
    D U^k D; an interior D-run flanked by up steps is a down hook U D^k U.
    Neighbouring hooks may share a single flank step.
    """
    runs = _runs(path.steps)
    hooks = []
    for idx in range(1, len(runs) - 1):
        char, start, length = runs[idx]
        if length >= 2:
            hooks.append(Hook("up" if char == "U" else "down", start - 1, length))
    return tuple(hooks)


def apply_phi(path: LatticePath) -> LatticePath:
    """Rewrite every up hook D U^k D as U^(k-1) D U D.

    Rewrites keep their step positions, so they are applied left to right
    and a flank step shared by two chained hooks ends up owned by the right
    one.  The result is positive grounded with the same endpoints, and
    together with apply_psi averages to the original additive weight.
    Paths with no up hooks are returned unchanged.
    """
    ups = [h for h in find_hooks(path) if h.kind == "up"]
    if not ups:
        return path
    s = list(path.steps)
    for h in ups:
        s[h.start : h.start + h.k + 2] = ["U"] * (h.k - 1) + ["D", "U", "D"]
    return LatticePath("".join(s), path.origin)


def apply_psi(path: LatticePath) -> LatticePath:
    """Rewrite every up hook D U^k D as D U D U^(k-1), the mirror of
    apply_phi; shared flank steps are resolved right to left."""
    ups = [h for h in find_hooks(path) if h.kind == "up"]
    if not ups:
        return path
    s = list(path.steps)
    for h in reversed(ups):
        s[h.start : h.start + h.k + 2] = ["D", "U", "D"] + ["U"] * (h.k - 1)
    return LatticePath("".join(s), path.origin)


def T_min_over_families(
    A: InitialDataUltra,
    t: int,
    n: int,
    tabular_only: bool = False,
    with_family: bool = False,
):
    """Minimal summed additive weight over P(t, n) (or its tabular subset).

    Both subsets attain the same minimum.  With with_family=True the
    lexicographically smallest minimizer is returned alongside the value.
    """
    if t + 2 * n - 2 > A.M:
        raise DataExhaustedError(
            f"T({t},{n}) needs {t + 2 * n - 2} initial values (have {A.M})"
        )
    best = None
    best_family = None
    for family in enumerate_families(t, n, tabular_only):
        w = sum(path_weight(p, A, "additive") for p in family.paths)
        if best is None or w < best:
            best, best_family = w, family
    assert best is not None and best_family is not None
    return (best, best_family) if with_family else best


def moment_polynomial(n: int) -> dict[tuple[int, ...], int]:
    """The n-th moment as a polynomial in the labels: a map from exponent
    vectors (length n, slot y = multiplicity of a_y) to integer coefficients."""
    acc: dict[tuple[int, ...], int] = {}
    for p in enumerate_positive_grounded(n):
        expo = up_step_counts(p, n)
        acc[expo] = acc.get(expo, 0) + 1
    return acc


def tau_polynomial(t: int, n: int) -> dict[tuple[int, ...], int]:
    """The tau value at (t, n) as a polynomial in the labels a_0 .. a_{t+2n-3},
    assembled from the family sum; exponent vectors have width t + 2n - 2."""
    width = max(t + 2 * n - 2, 0)
    acc: dict[tuple[int, ...], int] = {}
    for family in enumerate_families(t, n):
        expo = [0] * width
        for p in family.paths:
            for y, c in enumerate(up_step_counts(p)):
                expo[y] += c
        key = tuple(expo)
        acc[key] = acc.get(key, 0) + 1
    return acc


def family_degree(t: int, n: int) -> int:
    """Total up-step count of any family in P(t, n): path j contributes
    t + 2j, hence n * (t + n - 1) in total.  Every tau monomial has this
    degree."""
    return n * (t + n - 1)
