"""Simple digraphs stored as per-vertex bitset rows.

A ``Digraph`` never has loops or multiarcs. Bit ``j`` of ``out_rows[i]`` is
set iff the arc ``(i, j)`` is present. Values are immutable; every operation
returns a new digraph.
"""

import hashlib
import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import PreconditionError

log = logging.getLogger(__name__)


def iter_bits(row: int) -> Iterator[int]:
    while row:
        low = row & -row
        yield low.bit_length() - 1
        row ^= low


def popcount(row: int) -> int:
    return bin(row).count("1")


@dataclass(frozen=True)
class Digraph:
    n: int
    out_rows: tuple

    def __post_init__(self):
        if self.n < 0:
            raise PreconditionError("vertex count must be nonnegative")
        if len(self.out_rows) != self.n:
            raise PreconditionError(f"expected {self.n} rows, got {len(self.out_rows)}")
        full = (1 << self.n) - 1
        for i, row in enumerate(self.out_rows):
            if row < 0 or row & ~full:
                raise PreconditionError(f"arc target out of range in row {i}")
            if row >> i & 1:
                raise PreconditionError("loop forbidden")

    @property
    def arc_count(self) -> int:
        return sum(popcount(row) for row in self.out_rows)

    def has_arc(self, i: int, j: int) -> bool:
        return bool(self.out_rows[i] >> j & 1)

    def out_neighbors(self, i: int) -> list:
        return list(iter_bits(self.out_rows[i]))

    def out_degree(self, i: int) -> int:
        return popcount(self.out_rows[i])

    def arcs(self) -> list:
        return [(i, j) for i, row in enumerate(self.out_rows) for j in iter_bits(row)]

    def arc_set(self) -> frozenset:
        return frozenset(self.arcs())

    def in_rows(self) -> tuple:
        rows = [0] * self.n
        for i, row in enumerate(self.out_rows):
            for j in iter_bits(row):
                rows[j] |= 1 << i
        return tuple(rows)

    def bidirected_rows(self) -> tuple:
        """Rows of the undirected graph whose edges are the bidirected pairs."""
        return tuple(out & inc for out, inc in zip(self.out_rows, self.in_rows()))

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, j in self.arcs():
            a[i, j] = 1.0
        return a

    def transpose(self) -> "Digraph":
        return Digraph(self.n, self.in_rows())

    def relabel(self, order: Sequence[int]) -> "Digraph":
        """Return the digraph whose vertex ``new`` is the old vertex ``order[new]``."""
        if sorted(order) != list(range(self.n)):
            raise PreconditionError("relabeling must be a permutation of the vertices")
        position = {old: new for new, old in enumerate(order)}
        rows = []
        for old in order:
            row = 0
            for j in iter_bits(self.out_rows[old]):
                row |= 1 << position[j]
            rows.append(row)
        return Digraph(self.n, tuple(rows))

    def induced(self, vertices: Sequence[int]) -> "Digraph":
        """Induced subdigraph on ``vertices``, relabeled in the given order."""
        position = {old: new for new, old in enumerate(vertices)}
        rows = []
        for old in vertices:
            row = 0
            for j in iter_bits(self.out_rows[old]):
                if j in position:
                    row |= 1 << position[j]
            rows.append(row)
        return Digraph(len(vertices), tuple(rows))

    def with_arcs(self, add=(), remove=()) -> "Digraph":
        rows = list(self.out_rows)
        for i, j in remove:
            rows[i] &= ~(1 << j)
        for i, j in add:
            if i == j:
                raise PreconditionError("loop forbidden")
            rows[i] |= 1 << j
        return Digraph(self.n, tuple(rows))

    def fingerprint(self) -> str:
        return hashlib.sha1(format_digraph(self).encode()).hexdigest()[:12]


def from_arcs(n: int, arcs: Iterable) -> Digraph:
    if n < 1:
        raise PreconditionError("vertex count must be positive")
    rows = [0] * n
    for i, j in arcs:
        if not (0 <= i < n and 0 <= j < n):
            raise PreconditionError(f"arc ({i}, {j}) has an index outside 0..{n - 1}")
        if i == j:
            raise PreconditionError("loop forbidden")
        if rows[i] >> j & 1:
            raise PreconditionError("multiarc forbidden")
        rows[i] |= 1 << j
    return Digraph(n, tuple(rows))


def complete_digraph(k: int) -> Digraph:
    full = (1 << k) - 1
    return Digraph(k, tuple(full & ~(1 << i) for i in range(k)))


def format_digraph(d: Digraph) -> str:
    lines = [f"{d.n} {d.arc_count}"]
    lines.extend(f"{i} {j}" for i, j in d.arcs())
    return "\n".join(lines) + "\n"


def parse_digraph(text: str) -> Digraph:
    lines = [line.split() for line in text.splitlines() if line.strip()]
    if not lines or len(lines[0]) != 2:
        raise PreconditionError("digraph header must be 'n e'")
    try:
        n, e = int(lines[0][0]), int(lines[0][1])
        arcs = [(int(a), int(b)) for a, b in lines[1:]]
    except ValueError as exc:
        raise PreconditionError(f"malformed digraph text: {exc}") from exc
    if len(arcs) != e:
        raise PreconditionError(f"header announces {e} arcs, found {len(arcs)}")
    return from_arcs(n, arcs)


def strongly_connected_components(d: Digraph) -> list:
    """Tarjan's algorithm; components come out sinks first (reverse topological order)."""
    index = [-1] * d.n
    low = [0] * d.n
    on_stack = [False] * d.n
    stack = []
    components = []
    counter = 0

    for root in range(d.n):
        if index[root] >= 0:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, iter_bits(d.out_rows[root]))]
        while work:
            v, children = work[-1]
            for w in children:
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter_bits(d.out_rows[w])))
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
                if low[v] == index[v]:
                    component = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        component.append(w)
                        if w == v:
                            break
                    components.append(tuple(sorted(component)))
    return components


def is_strongly_connected(d: Digraph) -> bool:
    return d.n >= 1 and len(strongly_connected_components(d)) == 1


def clique_number(d: Digraph) -> int:
    """Largest k such that K<->_k is a subdigraph.

    Exact Bron-Kerbosch with pivoting on the bidirected-pair graph, pruned by
    the size of the candidate set.
    """
    if d.n == 0:
        return 0
    sym = d.bidirected_rows()
    best = 1

    def expand(size, candidates, excluded):
        nonlocal best
        if not candidates:
            if not excluded:
                best = max(best, size)
            return
        if size + popcount(candidates) <= best:
            return
        pivot = max(iter_bits(candidates | excluded), key=lambda u: popcount(candidates & sym[u]))
        for v in iter_bits(candidates & ~sym[pivot]):
            expand(size + 1, candidates & sym[v], excluded & sym[v])
            candidates &= ~(1 << v)
            excluded |= 1 << v

    expand(0, (1 << d.n) - 1, 0)
    return best


def remove_isolated(d: Digraph) -> Digraph:
    touched = 0
    for i, (out, inc) in enumerate(zip(d.out_rows, d.in_rows())):
        if out or inc:
            touched |= 1 << i
    return d.induced(list(iter_bits(touched)))


@dataclass(frozen=True)
class Membership:
    """Outcome of the prefix-nested membership test.

    ``condition`` names the first violated requirement: "strongly-connected",
    "prefix" (an arc to a higher index without all lower targets) or "nested"
    (a later out-neighborhood not contained in an earlier one). ``witness``
    holds the offending indices.
    """

    member: bool
    condition: Optional[str] = None
    witness: tuple = ()

    def __bool__(self):
        return self.member


def is_member_dss(d: Digraph) -> Membership:
    if not is_strongly_connected(d):
        return Membership(False, "strongly-connected", (len(strongly_connected_components(d)),))

    for i, row in enumerate(d.out_rows):
        for j in iter_bits(row):
            if j <= i:
                continue
            required = ((1 << (j + 1)) - 1) & ~(1 << i)
            missing = required & ~row
            if missing:
                l = next(iter_bits(missing))
                return Membership(False, "prefix", (i, j, l))

    for i in range(d.n):
        for j in range(i + 1, d.n):
            earlier = d.out_rows[i] & ~(1 << j)
            later = d.out_rows[j] & ~(1 << i)
            extra = later & ~earlier
            if extra:
                return Membership(False, "nested", (i, j, next(iter_bits(extra))))
    return Membership(True)


@dataclass(frozen=True)
class CanonicalForm:
    """Prefix lengths: vertex v_i (1-based) points at {v_1..v_{m_i}} minus itself."""

    m: tuple

    @property
    def n(self) -> int:
        return len(self.m)

    def __str__(self):
        return format_canonical(self)


def expand_canonical(c: CanonicalForm) -> Digraph:
    n = c.n
    rows = []
    for i, length in enumerate(c.m):
        if not 0 <= length <= n:
            raise PreconditionError(f"prefix length {length} outside 0..{n}")
        rows.append(((1 << length) - 1) & ~(1 << i))
    return Digraph(n, tuple(rows))


def canonical_form(d: Digraph) -> Optional[CanonicalForm]:
    """Inverse of ``expand_canonical`` when every row is a prefix minus self.

    Where two prefix lengths give the same row the shorter one is used.
    """
    m = []
    for i, row in enumerate(d.out_rows):
        length = row.bit_length()
        if row == (1 << length) - 1:
            m.append(length)
            continue
        filled = row | (1 << i)
        length = filled.bit_length()
        if filled == (1 << length) - 1 and length > i + 1:
            m.append(length)
            continue
        return None
    return CanonicalForm(tuple(m))


def format_canonical(c: CanonicalForm) -> str:
    return f"{c.n}: " + " ".join(str(length) for length in c.m)


def parse_canonical(text: str) -> CanonicalForm:
    head, sep, tail = text.strip().partition(":")
    if not sep:
        raise PreconditionError("canonical form must look like 'n: m_1 ... m_n'")
    try:
        n = int(head)
        m = tuple(int(x) for x in tail.split())
    except ValueError as exc:
        raise PreconditionError(f"malformed canonical form: {exc}") from exc
    if len(m) != n:
        raise PreconditionError(f"canonical form announces {n} vertices, found {len(m)} lengths")
    return CanonicalForm(m)
