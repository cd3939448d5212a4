"""Upper bounds on the spectral radius and the bound trace used to audit them.

Block bounds work on the split ``A = [[J_w - I_w, A12], [A21, 0]]`` returned
by :func:`arcradius.spectral.block_form`. ``e1`` and ``e2`` are the arc
counts of ``A12`` and ``A21``.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .digraph import Digraph, canonical_form, clique_number, is_member_dss, is_strongly_connected
from .errors import PreconditionError
from .extremal import decompose_arcs
from .spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, block_form, perron_root, spectral_norm

log = logging.getLogger(__name__)

AUDIT_SLACK = 1e-9


def clique_bound(w: int, e: int) -> float:
    if w < 1:
        raise PreconditionError(f"clique number must be positive, got {w}")
    if e < w * (w - 1):
        raise PreconditionError(f"{e} arcs cannot contain a complete digraph on {w} vertices")
    return (w - 1 + math.sqrt((w - 1) ** 2 + 2 * (e - w * (w - 1)))) / 2


def clique_bound_k(k: int, t: int) -> float:
    """``clique_bound`` at w = k, written in terms of the arc decomposition."""
    return clique_bound(k, k * (k - 1) + t)


def _blocks(a12, a21):
    a12 = np.atleast_2d(np.asarray(a12, dtype=float))
    a21 = np.atleast_2d(np.asarray(a21, dtype=float))
    if a12.shape[1] != a21.shape[0] or a12.shape[0] != a21.shape[1]:
        raise PreconditionError(f"blocks do not conform: {a12.shape} and {a21.shape}")
    return a12, a21


def block_norm_bound(a12, a21, w: int, tol: float = DEFAULT_TOL) -> float:
    a12, a21 = _blocks(a12, a21)
    nu = spectral_norm(a12 @ a21, tol)
    return (w - 1 + math.sqrt((w - 1) ** 2 + 4 * nu)) / 2


class Majorization(NamedTuple):
    observed: tuple  # column sums of A12 then row sums of A21, sorted descending
    alpha: tuple  # (w, ..., w, remainder, 0, ...)


def majorization_vectors(a12, a21, w: int) -> Majorization:
    a12, a21 = _blocks(a12, a21)
    sums = np.concatenate([a12.sum(axis=0), a21.sum(axis=1)])
    total = int(round(sums.sum()))
    p = total // w
    alpha = ([w] * p + [total - p * w] + [0] * len(sums))[: len(sums)]
    observed = tuple(sorted((int(round(x)) for x in sums), reverse=True))
    return Majorization(observed, tuple(alpha))


def is_majorized(x, y) -> bool:
    """True when x is majorized by y: sorted partial sums of x never exceed those of y."""
    xs = np.sort(np.asarray(x, dtype=float))[::-1]
    ys = np.sort(np.asarray(y, dtype=float))[::-1]
    size = max(len(xs), len(ys))
    xs = np.pad(xs, (0, size - len(xs)))
    ys = np.pad(ys, (0, size - len(ys)))
    if not math.isclose(xs.sum(), ys.sum()):
        return False
    return bool(np.all(np.cumsum(xs) <= np.cumsum(ys) + 1e-12))


def row_sum_lhs(a12, a21) -> float:
    a12, a21 = _blocks(a12, a21)
    return float((a12.sum(axis=0) ** 2).sum() + (a21.sum(axis=1) ** 2).sum())


def row_sum_bound(a12, a21, w: int) -> float:
    if w < 1:
        raise PreconditionError("clique size must be positive")
    # the squared row and column sums are majorized by (w, ..., w, rem, 0, ...)
    alpha = majorization_vectors(a12, a21, w).alpha
    return float(sum(a * a for a in alpha))


def product_sum_lhs(a12, a21) -> float:
    a12, a21 = _blocks(a12, a21)
    return float(a12.sum(axis=0) @ a21.sum(axis=1))


def product_sum_bound(a12, a21, w: int) -> float:
    """Cap on 1^T A12 A21 1.

    Holds whenever no outside vertex is joined both ways to the whole leading
    clique, so every column carries at most 2w - 1 arcs.
    """
    if w < 1:
        raise PreconditionError("clique size must be positive")
    a12, a21 = _blocks(a12, a21)
    total = int(round(a12.sum() + a21.sum()))
    p = total // (2 * w - 1)
    rest = total - p * (2 * w - 1)
    return float(p * w * (w - 1) + (rest // 2) * (rest - rest // 2))


def coarse_bound(e: int) -> float:
    _, k, t = decompose_arcs(e)
    if k < 2:
        raise PreconditionError(f"coarse bound needs k >= 2, got k={k} for e={e}")
    return k - 1 + t / (2 * (k - 1))


def vertex_count_bound(e: int, n: int) -> float:
    """sqrt(e - n + 1), valid for strongly connected digraphs on n vertices."""
    if e - n + 1 < 0:
        raise PreconditionError(f"a strongly connected digraph on {n} vertices needs at least {n} arcs")
    return math.sqrt(e - n + 1)


def dsharp_cubic_at_sqrt(k: int) -> float:
    """Value of the t = 2k-1 cubic at sqrt(k^2 - 2); negative for every k >= 2."""
    if k < 2:
        raise PreconditionError("need k >= 2")
    x = math.sqrt(k * k - 2)
    return x**3 - (k - 2) * x**2 - (2 * k - 2) * x - (k - 1)


def large_clique_threshold(t: int) -> int:
    return 4 * t**4 + 4


def _deficit_terms(k, t, s):
    spread = s * (k - s) + t + math.sqrt(t) / 2
    base = k * k - k
    return spread, base, base - spread


def deficient_clique_bound(k: int, t: int, s: int) -> float:
    """Upper bound on rho(D) when the clique number is k - s."""
    if k < 2 or s < 1 or t < 2:
        raise PreconditionError(f"need k >= 2, s >= 1 and t >= 2, got k={k}, t={t}, s={s}")
    spread, base, room = _deficit_terms(k, t, s)
    if room <= 0:
        raise PreconditionError("bracket condition violated: k^2 - k must exceed the arc spread")
    return (
        k
        - s
        + (s * (k - s) * (k - s - 1) + (t + 1) ** 2) / base
        + ((s * (k - s) ** 2 + 3 * t * t) * spread) / (base * room)
        - 1
    )


def deficient_clique_target(k: int, s: int) -> float:
    return k - 1 - 2 * s * s / (3 * (k - 1))


def product_sum_cap(k: int, w: int, t: int) -> float:
    gap = (k - w) ** 2 + t
    return float((k - w) * w * (w - 1) + (gap // 2) * (gap - gap // 2))


def row_norm_cap(k: int, w: int, t: int) -> float:
    return (k - w) * w * w + ((k - w) * (k - w - 1) + t) ** 2 / 2


def row_norm_cap_simplified(k: int, w: int, t: int) -> float:
    return float((k - w) * w * w + 3 * t * t)


@dataclass(frozen=True)
class BoundEntry:
    name: str
    bound: Optional[float]
    observed: Optional[float]
    applicable: bool

    @property
    def slack(self) -> Optional[float]:
        if self.bound is None or self.observed is None:
            return None
        return self.bound - self.observed


@dataclass(frozen=True)
class BoundTrace:
    digraph_id: str
    e: int
    rho: float
    clique: int
    member: bool
    entries: tuple = field(default_factory=tuple)

    def violations(self, slack: float = AUDIT_SLACK) -> list:
        return [x for x in self.entries if x.applicable and x.slack is not None and x.slack < -slack]

    def entry(self, name: str) -> BoundEntry:
        for x in self.entries:
            if x.name == name:
                return x
        raise KeyError(name)


def digraph_id(d: Digraph) -> str:
    form = canonical_form(d)
    return str(form) if form is not None else d.fingerprint()


def trace_bounds(d: Digraph, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> BoundTrace:
    """Evaluate every bound against d; entries whose hypotheses fail are kept but flagged."""
    e = d.arc_count
    if e < 1:
        raise PreconditionError("bound trace needs at least one arc")
    _, k, t = decompose_arcs(e)
    rho = perron_root(d, tol, max_iter)
    w = clique_number(d)
    member = bool(is_member_dss(d))
    strong = is_strongly_connected(d)
    try:
        blocks = block_form(d)
    except PreconditionError:
        blocks = None
    split = member and blocks is not None

    entries = [
        BoundEntry("clique", clique_bound(w, e), rho, split),
        BoundEntry("coarse", coarse_bound(e) if k >= 2 else None, rho, k >= 2),
        BoundEntry("vertex-count", vertex_count_bound(e, d.n) if strong else None, rho, strong),
    ]
    if blocks is not None:
        a12, a21 = blocks.a12, blocks.a21
        entries += [
            BoundEntry("block-norm", block_norm_bound(a12, a21, w, tol), rho, True),
            BoundEntry("row-sum", row_sum_bound(a12, a21, w), row_sum_lhs(a12, a21), split),
            BoundEntry("product-sum", product_sum_bound(a12, a21, w), product_sum_lhs(a12, a21), split),
        ]
    else:
        entries += [
            BoundEntry("block-norm", None, rho, False),
            BoundEntry("row-sum", None, None, False),
            BoundEntry("product-sum", None, None, False),
        ]

    s = k - w
    large = split and t >= 2 and k > large_clique_threshold(t) and 1 <= s < math.sqrt(t) + 1
    if large:
        a12, a21 = blocks.a12, blocks.a21
        norms = float(np.linalg.norm(a12.sum(axis=0)) * np.linalg.norm(a21.sum(axis=1)))
        entries += [
            BoundEntry("product-sum-cap", product_sum_cap(k, w, t), product_sum_lhs(a12, a21), True),
            BoundEntry("row-norm-cap", row_norm_cap(k, w, t), norms, True),
            BoundEntry("row-norm-cap-simplified", row_norm_cap_simplified(k, w, t), norms, True),
            BoundEntry("deficient-clique", deficient_clique_bound(k, t, s), rho, True),
        ]
    log.debug("bound trace for %s: rho=%.12f, w=%d, member=%s", digraph_id(d), rho, w, member)
    return BoundTrace(digraph_id(d), e, rho, w, member, tuple(entries))
