"""Perron-guided arc rewiring onto the prefix-nested class.

Digraphs already prefix-nested under their Perron-descending order are only
relabeled. Otherwise each round relabels the vertices by the current right
Perron vector (largest entry first) and moves arcs onto the smallest free
lower target, skipping any move that would break strong connectivity. With
``x`` the Perron vector taken at the start of the round, every moved row
only gains weight against ``x``, so ``A' x >= rho x`` and the round cannot
lower the spectral radius (Collatz-Wielandt). A drop beyond ``DROP_TOL`` is
logged as a warning.

When the rounds stall, repeat an order, or end below the starting root, the
prefix-nested class for the same arc count is searched for the first member
reaching the starting root. For t != 1 one always exists (the class attains
the maximum over all digraphs with e arcs); the class is empty for e = 3.
"""

import logging
from typing import Iterator, NamedTuple, Optional

from .digraph import Digraph, Membership, expand_canonical, iter_bits, is_member_dss, is_strongly_connected
from .enumeration import enumerate_dss
from .errors import NormalizationError, PreconditionError
from .spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, perron_root, spectral_radius

log = logging.getLogger(__name__)

# Perron entries closer than this count as ties and fall back to index order
ORDER_DIGITS = 10
DROP_TOL = 1e-9


def perron_order(d: Digraph, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> list:
    right = spectral_radius(d, tol, max_iter).right
    return sorted(range(d.n), key=lambda v: (-round(right[v], ORDER_DIGITS), v))


def _moves(d: Digraph) -> Iterator[tuple]:
    """Arcs (i, j) with a free target l < j, l != i, as (i, j, l) in lexicographic order."""
    for i, row in enumerate(d.out_rows):
        for j in iter_bits(row):
            missing = ((1 << j) - 1) & ~(1 << i) & ~row
            for l in iter_bits(missing):
                yield i, j, l


def _prefix_rows(d: Digraph) -> Digraph:
    """Apply strong-connectivity-preserving moves until none is left.

    Every move lowers the sum of arc heads, so this terminates.
    """
    while True:
        for i, j, l in _moves(d):
            moved = d.with_arcs(add=[(i, l)], remove=[(i, j)])
            if is_strongly_connected(moved):
                log.debug("moving arc (%d,%d) to (%d,%d)", i, j, i, l)
                d = moved
                break
        else:
            return d


def _reaching_member(e: int, rho: float, tol: float, max_iter: int) -> Digraph:
    for form in enumerate_dss(e):
        candidate = expand_canonical(form)
        if perron_root(candidate, tol, max_iter) >= rho - DROP_TOL:
            log.info("rewiring fell back to the class member %s", form)
            return candidate
    raise NormalizationError(f"no prefix-nested strongly connected digraph with {e} arcs reaches rho {rho:.12f}")


def rewire_to_dss(d: Digraph, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> Digraph:
    """Rewire a strongly connected digraph into a prefix-nested one with the same arc count.

    The result has spectral radius at least that of d, up to ``DROP_TOL``.
    """
    if not is_strongly_connected(d):
        raise PreconditionError("rewiring needs a strongly connected digraph")
    found = dss_order_search(d, tol, max_iter)
    if found.digraph is not None:
        return found.digraph

    start = perron_root(d, tol, max_iter)
    current, rho = d, start
    seen = {d.out_rows}
    for round_no in range(1, d.arc_count * d.n + 1):
        current = _prefix_rows(current.relabel(perron_order(current, tol, max_iter)))
        moved = perron_root(current, tol, max_iter)
        if moved < rho - DROP_TOL:
            log.warning("rewiring round %d lowered rho from %.12f to %.12f", round_no, rho, moved)
        rho = moved
        membership = is_member_dss(current)
        log.debug("rewiring round %d: %s", round_no, membership.condition or "member")
        if membership:
            if rho >= start - DROP_TOL:
                return current
            log.warning("rewiring reached a member below the starting rho %.12f", start)
            break
        if current.out_rows in seen:
            log.debug("rewiring repeated an order after %d rounds", round_no)
            break
        seen.add(current.out_rows)
    return _reaching_member(d.arc_count, start, tol, max_iter)


class OrderSearch(NamedTuple):
    digraph: Optional[Digraph]
    order: Optional[tuple]
    membership: Membership


def dss_order_search(d: Digraph, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> OrderSearch:
    """Membership under the stored order, retried under the Perron-descending order.

    On success ``digraph`` is the relabeled member and ``order`` maps new
    indices to old ones; otherwise both are None and ``membership`` is the
    verdict for the stored order.
    """
    membership = is_member_dss(d)
    if membership:
        return OrderSearch(d, tuple(range(d.n)), membership)
    if membership.condition == "strongly-connected":
        return OrderSearch(None, None, membership)
    order = tuple(perron_order(d, tol, max_iter))
    relabeled = d.relabel(order)
    if is_member_dss(relabeled):
        return OrderSearch(relabeled, order, is_member_dss(relabeled))
    return OrderSearch(None, None, membership)
