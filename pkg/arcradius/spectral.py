"""Perron roots, spectral norms and the clique-block series equation.

Everything here works by power iteration on small dense numpy arrays. The
iteration runs on ``A + I``: the shift makes an irreducible matrix primitive
so periodic digraphs (cycles) converge, and ``rho(A) = rho(A + I) - 1``.
"""

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .digraph import Digraph, clique_number, strongly_connected_components
from .errors import ConvergenceError, PreconditionError

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10**6


@dataclass(frozen=True)
class SpectralResult:
    rho: float
    right: tuple
    left: tuple
    residual: float
    iterations: int
    reducible: bool = False


def _perron_pair(matrix, tol, max_iter):
    """Power iteration on matrix + I from the uniform start vector.

    Returns (rho, vector with unit coordinate sum, residual, iterations).
    """
    n = matrix.shape[0]
    shifted = matrix + np.eye(n)
    x = np.full(n, 1.0 / n)
    rho = 0.0
    residual = math.inf
    for iteration in range(1, max_iter + 1):
        y = shifted @ x
        x = y / y.sum()
        ax = matrix @ x
        rho = float(ax.sum())
        residual = float(np.max(np.abs(ax - rho * x)))
        if residual <= tol:
            return rho, x, residual, iteration
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} iterations (residual {residual:.3e})",
        estimate=rho,
        iterations=max_iter,
    )


def _both_vectors(matrix, tol, max_iter):
    rho, right, res_right, it_right = _perron_pair(matrix, tol, max_iter)
    _, left, _, it_left = _perron_pair(matrix.T, tol, max_iter)
    # both vectors are checked against the reported root
    res_left = float(np.max(np.abs(matrix.T @ left - rho * left)))
    return rho, right, left, max(res_right, res_left), it_right + it_left


def spectral_radius(d: Digraph, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> SpectralResult:
    """Perron root with right and left Perron vectors.

    For a reducible adjacency matrix the root is the maximum over the diagonal
    blocks of the strong components; the vectors belong to the dominant block
    (zero elsewhere) and the residual is that block's residual.
    """
    if d.n == 0:
        raise PreconditionError("spectral radius of the empty digraph is undefined")
    a = d.adjacency()
    components = strongly_connected_components(d)
    if len(components) == 1:
        rho, right, left, residual, iterations = _both_vectors(a, tol, max_iter)
        return SpectralResult(rho, tuple(right), tuple(left), residual, iterations)

    best = None
    for component in components:
        if len(component) == 1:
            candidate = (0.0, np.ones(1), np.ones(1), 0.0, 0)
        else:
            block = a[np.ix_(component, component)]
            candidate = _both_vectors(block, tol, max_iter)
        if best is None or candidate[0] > best[1][0] + tol:
            best = (component, candidate)

    component, (rho, right, left, residual, iterations) = best
    full_right = np.zeros(d.n)
    full_left = np.zeros(d.n)
    full_right[list(component)] = right
    full_left[list(component)] = left
    log.debug("reducible digraph: dominant block %s with rho %.6f", component, rho)
    return SpectralResult(rho, tuple(full_right), tuple(full_left), residual, iterations, reducible=True)


def perron_root(d: Digraph, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> float:
    """Spectral radius only; skips the left vector. Used by the sweeps."""
    if d.n == 0:
        raise PreconditionError("spectral radius of the empty digraph is undefined")
    a = d.adjacency()
    best = 0.0
    for component in strongly_connected_components(d):
        if len(component) > 1:
            rho, _, _, _ = _perron_pair(a[np.ix_(component, component)], tol, max_iter)
            best = max(best, rho)
    return best


def spectral_norm(matrix, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> float:
    """nu(M) = sqrt(rho(M M^T)) by symmetric power iteration (M nonnegative)."""
    m = np.asarray(matrix, dtype=float)
    if m.size == 0:
        return 0.0
    gram = m @ m.T
    if not gram.any():
        return 0.0
    x = np.ones(gram.shape[0])
    x /= np.linalg.norm(x)
    lam = 0.0
    residual = math.inf
    for _ in range(max_iter):
        y = gram @ x
        x = y / np.linalg.norm(y)
        gx = gram @ x
        lam = float(x @ gx)
        residual = float(np.linalg.norm(gx - lam * x))
        if residual <= tol * max(1.0, lam):
            return math.sqrt(lam)
    raise ConvergenceError(
        f"spectral norm did not converge in {max_iter} iterations (residual {residual:.3e})",
        estimate=math.sqrt(lam),
        iterations=max_iter,
    )


class BlockForm(NamedTuple):
    w: int
    a12: np.ndarray
    a21: np.ndarray


def block_form(d: Digraph) -> BlockForm:
    """Split A(D) as [[J_w - I_w, A12], [A21, 0]] with w the clique number.

    Requires the first w vertices to induce K<->_w and no arcs among the
    remaining vertices, which every prefix-nested digraph satisfies.
    """
    w = clique_number(d)
    head = (1 << w) - 1
    for i in range(w):
        if d.out_rows[i] & head != head & ~(1 << i):
            raise PreconditionError(f"first {w} vertices do not induce a complete digraph")
    for i in range(w, d.n):
        if d.out_rows[i] >> w:
            raise PreconditionError("arcs between vertices outside the leading clique")
    a = d.adjacency()
    return BlockForm(w, a[:w, w:], a[w:, :w])


@dataclass(frozen=True)
class SeriesEquation:
    """Moments mu_i = 1^T (A12 A21)^i 1 of the clique-block series equation."""

    k: int
    moments: tuple
    tail_bound: float


def series_equation(k: int, a12, a21, depth: int = 8, tol: float = DEFAULT_TOL) -> SeriesEquation:
    product = _product(k, a12, a21)
    v = np.ones(k)
    moments = [float(k)]
    for _ in range(depth):
        v = product @ v
        moments.append(float(v.sum()))
    return SeriesEquation(k, tuple(moments), spectral_norm(product, tol))


class SeriesSolution(NamedTuple):
    r: float
    depth: Optional[int]
    bracket: tuple
    evaluations: int


def _blocks(k, a12, a21):
    a12 = np.asarray(a12, dtype=float)
    a21 = np.asarray(a21, dtype=float)
    if a12.ndim == 1:
        a12 = a12[:, None]
    if a21.ndim == 1:
        a21 = a21[None, :]
    if a12.shape[0] != k or a21.shape[1] != k:
        raise PreconditionError(f"blocks must have {k} clique rows and columns: {a12.shape} and {a21.shape}")
    return a12, a21


def _product(k, a12, a21):
    a12, a21 = _blocks(k, a12, a21)
    if a12.shape[1] != a21.shape[0]:
        raise PreconditionError(f"blocks do not conform: {a12.shape} and {a21.shape}")
    return a12 @ a21


def _series_value(k, product, nu, r, tol):
    """g(r) and the number of series terms used.

    The truncation uses mu_i <= k * nu^i, so the remainder after term i is at
    most k x^(i+1) / ((1 - x)(r + 1)) with x = nu / (r (r + 1)). When x is too
    close to 1 for the series to be practical the closed-form resolvent
    1^T ((r + 1) I - P / r)^-1 1 of the same series is used and depth is None.
    """
    c = 1.0 / (r * (r + 1.0))
    x = nu * c
    if x >= 0.99:
        z = np.linalg.solve(np.eye(k) - c * product, np.ones(k))
        return float(z.sum()) / (r + 1.0), None
    cutoff = tol / 10.0
    w = np.ones(k)
    total = k / (r + 1.0)
    depth = 0
    while x > 0 and k * x ** (depth + 1) / ((1.0 - x) * (r + 1.0)) >= cutoff:
        w = c * (product @ w)
        depth += 1
        total += float(w.sum()) / (r + 1.0)
    return total, depth


def solve_series(k: int, a12, a21, tol: float = DEFAULT_TOL) -> SeriesSolution:
    """Unique r > 0 with sum_i mu_i / (r^i (r+1)^(i+1)) = 1, by bisection."""
    if k < 1:
        raise PreconditionError("clique size must be positive")
    product = _product(k, a12, a21)
    m = _blocks(k, a12, a21)[0].shape[1]
    nu = spectral_norm(product, tol)
    evaluations = 0

    def g(r):
        nonlocal evaluations
        evaluations += 1
        return _series_value(k, product, nu, r, tol)

    # the series converges once r (r + 1) exceeds rho(A12 A21)
    rho_p = float(np.max(np.abs(np.linalg.eigvals(product)))) if product.size else 0.0
    lo = float(k - 1)
    pole = (-1.0 + math.sqrt(1.0 + 4.0 * rho_p)) / 2.0
    if pole >= lo:
        lo = pole + tol
    if lo <= 0:
        lo = tol
    value, depth = g(lo)
    if value <= 1.0:
        return SeriesSolution(lo, depth, (lo, lo), evaluations)

    hi = float(k + m)
    for _ in range(64):
        value, depth = g(hi)
        if value < 1.0:
            break
        hi *= 2.0
    else:
        raise PreconditionError("could not bracket the series equation root")

    bracket = (lo, hi)
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        value, depth = g(mid)
        if value > 1.0:
            lo = mid
        else:
            hi = mid
    log.debug("series root %.12f after %d evaluations, depth %s", 0.5 * (lo + hi), evaluations, depth)
    return SeriesSolution(0.5 * (lo + hi), depth, bracket, evaluations)


def frc_solve(k: int, a12, a21, tol: float = DEFAULT_TOL) -> float:
    return solve_series(k, a12, a21, tol).r


def largest_root(f, df, lo: float, hi: float, tol: float = 1e-13) -> float:
    """Bisection on a sign change f(lo) < 0 < f(hi), then two Newton steps."""
    f_lo = f(lo)
    if f_lo >= 0 or f(hi) <= 0:
        raise PreconditionError(f"root not bracketed by [{lo}, {hi}]")
    # width is relative: past k = 512 neighbouring doubles are further apart than tol
    while hi - lo > tol * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(2):
        slope = df(x)
        if slope == 0:
            break
        polished = x - f(x) / slope
        if not lo - tol <= polished <= hi + tol:
            break
        x = polished
    return x


def dsharp_cubic_root(k: int, t: int) -> float:
    """Largest root of l^3 - (k-2) l^2 - (k+p-1) l + p (k-q-1), p = floor(t/2), q = ceil(t/2)."""
    if k < 2 or not 0 <= t <= 2 * k - 1:
        raise PreconditionError(f"need k >= 2 and 0 <= t <= 2k-1, got k={k}, t={t}")
    p, q = t // 2, t - t // 2
    if p == 0:
        return float(k - 1)

    def f(x):
        return ((x - (k - 2)) * x - (k + p - 1)) * x + p * (k - q - 1)

    def df(x):
        return (3 * x - 2 * (k - 2)) * x - (k + p - 1)

    # f(k-1) = -pq < 0 and f(k) = k^2 + k - pq - p > 0
    return largest_root(f, df, float(k - 1), float(k))
