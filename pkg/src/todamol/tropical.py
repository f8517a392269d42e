"""Shortest paths on the staircase graph, the min-plus tau route.

The graph lives on the grid points (j, k) with j >= k >= 0.  East edges jump
(j, k) -> (j + 2, k), south edges (j, k) -> (j, k - 1).  Edge lengths come
from the integer initial data:

    len(east from (j, k))  = A_0 + ... + A_{j-k-1} + k * A_{j-k},
    len(south)             = 0,

and may be negative.  The integer tau value at (t, n) is the length of the
shortest east/south path from (t, t) down to (t + 2n, 0).  Because the graph
is a DAG the minimum is a small dynamic program, linear in the number of
grid points touched, with no sign restriction on the lengths.

Restricting the target to (t + 2n, 1) (for t >= 1) gives the path set that
corresponds one-to-one with tabular path families: the family whose j-th
member has its oscillation strip with floor c + 2j maps to the graph path
whose j-th east edge sits at height t - c, and the correspondence preserves
total weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator, Literal

from .core import InitialDataUltra, UltraField, UTauTable, QE_from_T, tau_row_len
from .errors import DataExhaustedError, EnumerationCapError
from .paths import PathFamily, is_tabular

__all__ = [
    "TodaGraph",
    "GraphPath",
    "GRAPH_PATH_CAP",
    "edge_weight",
    "shortest_T",
    "shortest_row",
    "build_T_table",
    "enumerate_graph_paths",
    "tabular_to_graph_path",
    "shortest_path_witness",
    "solve_ivp_ultra",
]

GRAPH_PATH_CAP = 10**6


@lru_cache(maxsize=None)
def _prefix_sums(A: InitialDataUltra) -> tuple[int, ...]:
    pre = [0]
    for v in A.values:
        pre.append(pre[-1] + v)
    return tuple(pre)


@dataclass(frozen=True)
class TodaGraph:
    """Edge lengths over the staircase grid for one set of initial data.

    The graph itself is index arithmetic; only the data is stored.
    """

    data: InitialDataUltra

    def east_weight(self, j: int, k: int) -> int:
        if not (j >= k >= 0):
            raise ValueError(f"({j}, {k}) is not a grid vertex (need j >= k >= 0)")
        d = j - k
        M = self.data.M
        # The prefix needs A_0 .. A_{d-1}; the k * A_d term needs A_d only
        # when k > 0.
        if d > M or (k > 0 and d > M - 1):
            raise DataExhaustedError(
                f"east edge at ({j}, {k}) needs initial value index {d} (have {M})"
            )
        w = _prefix_sums(self.data)[d]
        if k > 0:
            w += k * self.data[d]
        return w

    def south_weight(self, j: int, k: int) -> int:
        if not (j >= k >= 1):
            raise ValueError(f"no south edge leaves ({j}, {k})")
        return 0


def edge_weight(kind: Literal["E", "S"], j: int, k: int, A: InitialDataUltra) -> int:
    """Length of the east or south edge leaving vertex (j, k)."""
    g = TodaGraph(A)
    if kind == "E":
        return g.east_weight(j, k)
    if kind == "S":
        return g.south_weight(j, k)
    raise ValueError(f"unknown edge kind {kind!r}")


@dataclass(frozen=True)
class GraphPath:
    """An east/south path, stored as a start vertex and an edge word."""

    start: tuple[int, int]
    edges: str

    def __post_init__(self) -> None:
        if set(self.edges) - {"E", "S"}:
            raise ValueError("edges must be a word over 'E' and 'S'")
        j, k = self.start
        if not (j >= k >= 0):
            raise ValueError(f"start {self.start} is not a grid vertex")
        for c in self.edges:
            if c == "S":
                k -= 1
                if k < 0:
                    raise ValueError("path leaves the grid (k < 0)")

    @property
    def end(self) -> tuple[int, int]:
        j, k = self.start
        return j + 2 * self.edges.count("E"), k - self.edges.count("S")

    def vertices(self) -> Iterator[tuple[int, int]]:
        j, k = self.start
        yield j, k
        for c in self.edges:
            if c == "E":
                j += 2
            else:
                k -= 1
            yield j, k

    def weight(self, A: InitialDataUltra) -> int:
        g = TodaGraph(A)
        total = 0
        j, k = self.start
        for c in self.edges:
            if c == "E":
                total += g.east_weight(j, k)
                j += 2
            else:
                k -= 1
        return total


def _require_data(A: InitialDataUltra, t: int, n: int, what: str) -> None:
    if t < 0 or n < 0:
        raise ValueError("t and n must be nonnegative")
    if t + 2 * n - 2 > A.M:
        raise DataExhaustedError(
            f"{what}({t},{n}) needs {t + 2 * n - 2} initial values (have {A.M})"
        )


def shortest_row(A: InitialDataUltra, t: int, n_hi: int) -> tuple[int, ...]:
    """Shortest path lengths from (t, t) to (t + 2i, 0) for i = 0 .. n_hi,
    from a single sweep of the layered dynamic program."""
    _require_data(A, t, n_hi, "T")
    g = TodaGraph(A)
    dist = [0] * (t + 1)  # index k; layer i = 0 is all-south, length 0
    out = [0]
    for i in range(1, n_hi + 1):
        j_prev = t + 2 * (i - 1)
        new = [0] * (t + 1)
        for k in range(t, -1, -1):
            best = dist[k] + g.east_weight(j_prev, k)
            if k < t and new[k + 1] < best:
                best = new[k + 1]
            new[k] = best
        dist = new
        out.append(dist[0])
    return tuple(out)


def shortest_T(A: InitialDataUltra, t: int, n: int) -> int:
    """Integer tau value at (t, n): shortest path length from (t, t) to
    (t + 2n, 0).  Handles negative edge lengths; needs t + 2n - 2 <= M."""
    return shortest_row(A, t, n)[n]


def build_T_table(A: InitialDataUltra, t_upper: int | None = None) -> UTauTable:
    """Integer tau values over the whole trapezoid t + 2n <= M + 2 (or rows
    up to t_upper), one dynamic program sweep per row."""
    M = A.M
    t_hi = M + 2 if t_upper is None else min(t_upper, M + 2)
    rows = tuple(
        shortest_row(A, t, tau_row_len(M, t) - 1) for t in range(t_hi + 1)
    )
    return UTauTable(M, rows)


def enumerate_graph_paths(t: int, n: int, restricted: bool = False) -> tuple[GraphPath, ...]:
    """All east/south paths from (t, t) to (t + 2n, 0), or to (t + 2n, 1)
    when restricted (which needs t >= 1), in lexicographic edge order with
    E < S.  These are interleavings of n east and t (or t - 1) south moves."""
    if t < 0 or n < 0:
        raise ValueError("t and n must be nonnegative")
    if restricted and t < 1:
        raise ValueError("the restricted path set is defined for t >= 1 only")
    souths = t - 1 if restricted else t
    total = comb(n + souths, n)
    if total > GRAPH_PATH_CAP:
        raise EnumerationCapError(
            f"{total} graph paths exceeds the enumeration cap {GRAPH_PATH_CAP}"
        )
    out: list[GraphPath] = []
    word: list[str] = []

    def rec(e_left: int, s_left: int) -> None:
        if e_left == 0 and s_left == 0:
            out.append(GraphPath((t, t), "".join(word)))
            return
        if e_left:
            word.append("E")
            rec(e_left - 1, s_left)
            word.pop()
        if s_left:
            word.append("S")
            rec(e_left, s_left - 1)
            word.pop()

    rec(n, souths)
    return tuple(out)


def tabular_to_graph_path(family: PathFamily) -> GraphPath:
    """The graph path corresponding to a tabular family.

    Member j, of shape U^(m_j) (DU)^(r_j) D^(m_j), determines the strip
    floor c_j = m_j - 2j - 1, and the image path takes its j-th east edge at
    height t - c_j; south edges fill the gaps down to height 1.  The map
    preserves total weight and is a bijection onto the restricted path set.
    """
    t, n = family.t, family.n
    if t < 1:
        raise ValueError("the correspondence is defined for t >= 1 only")
    heights = []
    for j, p in enumerate(family.paths):
        if not is_tabular(p):
            raise ValueError(f"family member {j} is not tabular")
        c = p.max_height() - 2 * j - 1
        assert 0 <= c <= t - 1
        heights.append(t - c)
    assert all(heights[i] >= heights[i + 1] for i in range(len(heights) - 1))
    word = []
    k = t
    for target in heights:
        word.append("S" * (k - target))
        word.append("E")
        k = target
    word.append("S" * (k - 1))
    return GraphPath((t, t), "".join(word))


def shortest_path_witness(A: InitialDataUltra, t: int, n: int) -> GraphPath:
    """One shortest path from (t, t) to (t + 2n, 0), deterministic: among
    equally short continuations the east edge wins."""
    _require_data(A, t, n, "T")
    g = TodaGraph(A)
    # cost[i][k]: remaining cost from (t + 2i, k) to the target.
    cost = [[0] * (t + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        j = t + 2 * i
        for k in range(t + 1):
            best = g.east_weight(j, k) + cost[i + 1][k]
            if k > 0 and cost[i][k - 1] < best:
                best = cost[i][k - 1]
            cost[i][k] = best
    word = []
    i, k = 0, t
    while i < n:
        j = t + 2 * i
        if g.east_weight(j, k) + cost[i + 1][k] == cost[i][k]:
            word.append("E")
            i += 1
        else:
            word.append("S")
            k -= 1
    word.append("S" * k)
    return GraphPath((t, t), "".join(word))


def solve_ivp_ultra(A: InitialDataUltra, t_max: int) -> UltraField:
    """Solve the min-plus initial value problem through the shortest path
    route: build the integer tau table, then recover Q and E by the signed
    sums.  Agrees with evolve_ultra cell for cell on the full trapezoid."""
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    t_real = min(t_max, A.M - 1)
    return QE_from_T(build_T_table(A, t_real + 1))
