"""Canonical enumeration of prefix-nested digraphs and the brute-force oracle.

Candidates are prefix-length vectors ``m`` searched depth first in
lexicographic ``(n, m)`` order. Row ``i`` (0-based) is ``{0..m_i-1} - {i}``;
``m_i = i + 1`` repeats the row of ``m_i = i`` and is skipped, which makes the
encoding injective on arc sets.
"""

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import reduce
from typing import Iterator, NamedTuple, Optional

from .digraph import CanonicalForm, Digraph, expand_canonical, is_member_dss, popcount
from .errors import BudgetExceededError, PreconditionError
from .extremal import decompose_arcs
from .spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, perron_root

log = logging.getLogger(__name__)

DEFAULT_MARGIN = 2
DEFAULT_TIE = 1e-9
DEFAULT_BUDGET = 10**7


def vertex_range(e: int, max_vertices: Optional[int] = None, margin: int = DEFAULT_MARGIN) -> range:
    """Vertex counts searched for e arcs.

    From the smallest n with n(n-1) >= e up to k + ceil(t/2) + margin, never
    beyond e (a strongly connected digraph needs at least n arcs).
    """
    _, k, t = decompose_arcs(e)
    low = 2
    while low * (low - 1) < e:
        low += 1
    high = min(e, k + (t + 1) // 2 + margin) if max_vertices is None else min(e, max_vertices)
    return range(low, high + 1)


def _row(i, length):
    return ((1 << length) - 1) & ~(1 << i)


def _search(e, n, first):
    """Depth-first search over prefix lengths for n vertices."""
    rows = [0] * n
    lengths = [0] * n

    def extend(i, used, min_degree):
        if i == n:
            if used == e:
                yield tuple(lengths)
            return
        remaining = n - i - 1
        choices = [first] if i == 0 and first is not None else range(1, n + 1)
        for length in choices:
            if length == i + 1:
                continue
            row = _row(i, length)
            degree = popcount(row)
            if degree == 0 or degree > min_degree + 1:
                continue
            total = used + degree
            if total + remaining > e:
                break
            if total + remaining * (min(min_degree, degree) + 1) < e:
                continue
            if not all(_nested(rows[h] & ~(1 << i), row & ~(1 << h)) for h in range(i)):
                continue
            rows[i] = row
            lengths[i] = length
            yield from extend(i + 1, total, min(min_degree, degree))
        rows[i] = 0

    yield from extend(0, 0, n)


def _nested(outer, inner):
    return inner & ~outer == 0


def _covers(rows, n):
    """Every vertex has an in-arc."""
    seen = 0
    for row in rows:
        seen |= row
    return seen == (1 << n) - 1


def enumerate_dss(e: int, max_vertices: Optional[int] = None, first: Optional[int] = None) -> Iterator[CanonicalForm]:
    """Yield every prefix-nested strongly connected digraph with e arcs as a CanonicalForm.

    ``first`` restricts the search to forms with that leading prefix length.
    """
    if e < 2:
        raise PreconditionError(f"enumeration needs at least 2 arcs, got {e}")
    for n in vertex_range(e, max_vertices):
        if first is not None and first > n:
            continue
        for lengths in _search(e, n, first):
            rows = [_row(i, length) for i, length in enumerate(lengths)]
            if not _covers(rows, n):
                continue
            form = CanonicalForm(lengths)
            if is_member_dss(expand_canonical(form)):
                yield form


@dataclass(frozen=True)
class SweepResult:
    """Candidate count plus every (rho, form) within the tie tolerance of the maximum."""

    n_candidates: int = 0
    leaders: tuple = ()
    tie: float = DEFAULT_TIE

    @property
    def rho_max(self) -> Optional[float]:
        return max((rho for rho, _ in self.leaders), default=None)

    @property
    def argmax(self) -> tuple:
        return tuple(form for _, form in self.leaders)


def _order(item):
    rho, form = item
    return form.n, form.m


def _keep_leaders(items, tie):
    items = list(items)
    if not items:
        return ()
    best = max(rho for rho, _ in items)
    return tuple(sorted((x for x in items if x[0] >= best - tie), key=_order))


def merge_sweeps(a: SweepResult, b: SweepResult) -> SweepResult:
    """Associative merge: counts add, leaders are re-filtered against the joint maximum."""
    tie = min(a.tie, b.tie)
    return SweepResult(a.n_candidates + b.n_candidates, _keep_leaders(a.leaders + b.leaders, tie), tie)


class ShardTask(NamedTuple):
    e: int
    first: int
    max_vertices: Optional[int]
    tol: float
    max_iter: int
    tie: float


def _sweep_shard(task: ShardTask) -> SweepResult:
    count = 0
    leaders = []
    best = -math.inf
    for form in enumerate_dss(task.e, task.max_vertices, task.first):
        count += 1
        rho = perron_root(expand_canonical(form), task.tol, task.max_iter)
        if rho < best - task.tie:
            continue
        leaders.append((rho, form))
        if rho > best:
            best = rho
            leaders = [x for x in leaders if x[0] >= best - task.tie]
    log.debug("shard m_1=%d for e=%d: %d candidates", task.first, task.e, count)
    return SweepResult(count, _keep_leaders(leaders, task.tie), task.tie)


def sweep_dss(
    e: int,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    max_vertices: Optional[int] = None,
    tie: float = DEFAULT_TIE,
    jobs: int = 1,
) -> SweepResult:
    """Maximum rho over the enumeration, sharded on the leading prefix length."""
    if jobs < 1:
        raise PreconditionError("jobs must be at least 1")
    vertices = vertex_range(e, max_vertices)
    if not vertices:
        return SweepResult(tie=tie)
    tasks = [ShardTask(e, first, max_vertices, tol, max_iter, tie) for first in range(2, vertices[-1] + 1)]
    if jobs == 1:
        results = map(_sweep_shard, tasks)
        return reduce(merge_sweeps, results, SweepResult(tie=tie))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return reduce(merge_sweeps, pool.map(_sweep_shard, tasks), SweepResult(tie=tie))


@dataclass(frozen=True)
class OracleResult:
    e: int
    n: int
    n_digraphs: int
    rho_max: Optional[float]
    argmax: tuple


def brute_max_rho(
    e: int,
    n: int,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    budget: int = DEFAULT_BUDGET,
    tie: float = DEFAULT_TIE,
) -> OracleResult:
    """Maximum rho over every e-arc simple digraph on n labeled vertices."""
    if n < 1 or e < 0:
        raise PreconditionError(f"need n >= 1 and e >= 0, got n={n}, e={e}")
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    required = math.comb(len(pairs), e)
    if required > budget:
        raise BudgetExceededError(f"{required} arc subsets exceed the budget of {budget}", required=required)
    if required == 0:
        return OracleResult(e, n, 0, None, ())

    best = -math.inf
    leaders = []
    for chosen in itertools.combinations(pairs, e):
        rows = [0] * n
        for i, j in chosen:
            rows[i] |= 1 << j
        d = Digraph(n, tuple(rows))
        rho = perron_root(d, tol, max_iter)
        if rho < best - tie:
            continue
        leaders.append((rho, d))
        if rho > best:
            best = rho
            leaders = [x for x in leaders if x[0] >= best - tie]
    log.debug("oracle e=%d n=%d: %d digraphs, rho_max=%.12f", e, n, required, best)
    return OracleResult(e, n, required, best, tuple(d for _, d in leaders))
