import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .digraph import Digraph, complete_digraph, from_arcs
from .errors import ConsistencyError, PreconditionError
from .spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, largest_root, perron_root, dsharp_cubic_root

log = logging.getLogger(__name__)

CROSS_CHECK_TOL = 1e-9

COMPLETE = "complete"
COMPLETE_PLUS_ARC = "complete-plus-arc"
COMPLETE_MINUS_PAIR = "complete-minus-pair"
COMPLETE_MINUS_ARC = "complete-minus-arc"
ORIENTED_TRIANGLE = "oriented-triangle"


class ArcDecomposition(NamedTuple):
    e: int
    k: int
    t: int


def decompose_arcs(e: int) -> ArcDecomposition:
    """Write e = k(k-1) + t with 0 <= t <= 2k-1."""
    if e < 1:
        raise PreconditionError(f"arc count must be positive, got {e}")
    k = (1 + math.isqrt(4 * e + 1)) // 2
    while k * (k - 1) > e:
        k -= 1
    while (k + 1) * k <= e:
        k += 1
    return ArcDecomposition(e, k, e - k * (k - 1))


@dataclass(frozen=True)
class DsharpSpec:
    e: int
    k: int
    t: int
    p: int  # arcs from the extra vertex into the clique
    q: int  # arcs from the clique into the extra vertex


def dsharp_spec(e: int) -> DsharpSpec:
    _, k, t = decompose_arcs(e)
    return DsharpSpec(e, k, t, t // 2, t - t // 2)


def _split_digraph(k: int, p: int, q: int) -> Digraph:
    """K<->_k plus a vertex fed by the first q clique vertices and feeding the first p."""
    if not (0 <= p <= k and 0 <= q <= k):
        raise PreconditionError(f"split sizes must lie in 0..{k}, got p={p}, q={q}")
    if p == 0 and q == 0:
        return complete_digraph(k)
    arcs = [(i, j) for i in range(k) for j in range(k) if i != j]
    arcs += [(i, k) for i in range(q)]
    arcs += [(k, j) for j in range(p)]
    return from_arcs(k + 1, arcs)


def build_dsharp(e: int) -> Digraph:
    if e < 2:
        raise PreconditionError(f"D# needs at least 2 arcs, got {e}")
    spec = dsharp_spec(e)
    if spec.t == 1:
        log.warning("D# for e=%d has t=1: not strongly connected, outside the prefix-nested class", e)
    return _split_digraph(spec.k, spec.p, spec.q)


def rho_dsharp(e: int, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER, check: bool = True) -> float:
    """rho(D#) from its cubic, cross-checked against power iteration."""
    if e < 2:
        raise PreconditionError(f"D# needs at least 2 arcs, got {e}")
    spec = dsharp_spec(e)
    value = float(spec.k - 1) if spec.t == 0 else dsharp_cubic_root(spec.k, spec.t)
    if check:
        iterated = perron_root(_split_digraph(spec.k, spec.p, spec.q), tol, max_iter)
        if abs(iterated - value) > CROSS_CHECK_TOL:
            raise ConsistencyError(f"cubic root {value!r} and power iteration {iterated!r} disagree for e={e}")
    return value


class ClosedForm(NamedTuple):
    e: int
    k: int
    t: int
    case: str
    value: float
    families: tuple


def rho_closed_form(e: int) -> Optional[ClosedForm]:
    """Exact maximum spectral radius for t in {0, 1, 2k-2, 2k-1}; None otherwise."""
    _, k, t = decompose_arcs(e)
    if t == 0:
        return ClosedForm(e, k, t, COMPLETE, float(k - 1), (COMPLETE,))
    if t == 1:
        families = (ORIENTED_TRIANGLE, COMPLETE_PLUS_ARC) if k == 2 else (COMPLETE_PLUS_ARC,)
        return ClosedForm(e, k, t, COMPLETE_PLUS_ARC, float(k - 1), families)
    if t == 2 * k - 2:
        value = (k - 2 + math.sqrt((k - 2) ** 2 + 8 * (k - 1))) / 2
        return ClosedForm(e, k, t, COMPLETE_MINUS_PAIR, value, (COMPLETE_MINUS_PAIR,))
    if t == 2 * k - 1:
        value = (k - 1 + math.sqrt((k - 1) ** 2 + 4 * (k - 1))) / 2
        return ClosedForm(e, k, t, COMPLETE_MINUS_ARC, value, (COMPLETE_MINUS_ARC,))
    return None


def build_family(label: str, k: int) -> Digraph:
    """Extremal digraph named by a closed-form family label."""
    if label == ORIENTED_TRIANGLE:
        return from_arcs(3, [(0, 1), (1, 2), (2, 0)])
    if k < 2:
        raise PreconditionError(f"family {label!r} needs k >= 2")
    if label == COMPLETE:
        return complete_digraph(k)
    if label == COMPLETE_PLUS_ARC:
        return _split_digraph(k, 0, 1)
    if label == COMPLETE_MINUS_PAIR:
        return complete_digraph(k + 1).with_arcs(remove=[(k - 1, k), (k, k - 1)])
    if label == COMPLETE_MINUS_ARC:
        return complete_digraph(k + 1).with_arcs(remove=[(k, k - 1)])
    raise PreconditionError(f"unknown family {label!r}")


def split_family_rho(k: int, p: int, q: int) -> float:
    """rho of K<->_k plus a vertex with q arcs in and p arcs out.

    Summing the geometric series of the clique-block equation turns it into
    (r + 1 - k)(r^2 + r - s) = pq with s = min(p, q); the root lies in [k-1, k).
    """
    if k < 2 or not (0 <= p <= k and 0 <= q <= k):
        raise PreconditionError(f"need k >= 2 and 0 <= p, q <= k, got k={k}, p={p}, q={q}")
    if p == 0 or q == 0:
        return float(k - 1)
    if p == q == k:
        return float(k)
    s = min(p, q)

    def f(r):
        return (r + 1 - k) * (r * r + r - s) - p * q

    def df(r):
        return (r * r + r - s) + (r + 1 - k) * (2 * r + 1)

    return largest_root(f, df, float(k - 1), float(k))


def build_split(k: int, p: int, q: int) -> Digraph:
    return _split_digraph(k, p, q)
