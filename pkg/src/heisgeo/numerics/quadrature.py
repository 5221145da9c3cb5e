"""Adaptive Gauss-Kronrod quadrature in one and two dimensions.

Cells are integrated with the 15-point Kronrod rule (tensorised in 2D) and
the embedded 7-point Gauss rule supplies the error estimate. The cells with
the largest errors are bisected until the summed estimate drops below
``max(tol * |value|, tol)``. In 2D each cell keeps a separate estimate per
direction and is bisected only along the direction(s) that dominate.

Integrands are called with numpy arrays of sample coordinates and must
return an array of the same shape (a scalar is broadcast). Results are
bit-reproducible: cells are kept in a fixed order, refined in a fixed order
and summed with :func:`math.fsum`.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import ConvergenceError, EvaluationError

DEFAULT_TOL = 1e-8
DEFAULT_BUDGET = 10_000_000

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# nodes on [-1, 1] in increasing order, with matching weights
NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[[9, 11, 13]] = _WG[2::-1]


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    err_estimate: float
    evaluations: int

    def __float__(self):
        return float(self.value)


def thread_count():
    """Worker threads for cell evaluation, from ``HEISGEO_THREADS`` (0 = sequential)."""
    try:
        return max(0, int(os.environ.get("HEISGEO_THREADS", "0")))
    except ValueError:
        return 0


def _call(integrand, *coords):
    with np.errstate(all="ignore"):
        vals = integrand(*coords)
    vals = np.broadcast_to(np.asarray(vals, dtype=float), coords[0].shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        idx = tuple(np.argwhere(bad)[0])
        where = tuple(float(c[idx]) for c in coords)
        raise EvaluationError(f"non-finite integrand value at {where}", where)
    return vals


def _evaluate_batches(fn, n_cells, threads, chunk=64):
    """Run ``fn(lo, hi)`` over cell index ranges and concatenate in order."""
    ranges = [(i, min(i + chunk, n_cells)) for i in range(0, n_cells, chunk)]
    if threads <= 1 or len(ranges) == 1:
        parts = [fn(lo, hi) for lo, hi in ranges]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda r: fn(*r), ranges))
    return [np.concatenate(p) for p in zip(*parts)]


def _target(value, tol):
    return max(tol * abs(value), tol)


def _select(err, excess):
    """Indices of the worst cells whose errors cover ``excess`` (at least one)."""
    order = np.lexsort((np.arange(err.size), -err))
    cum = np.cumsum(err[order])
    k = int(np.searchsorted(cum, excess)) + 1
    return np.sort(order[:max(1, min(k, err.size))])


def integrate_1d(integrand, a, b, tol=DEFAULT_TOL, budget=DEFAULT_BUDGET, initial=4):
    """Adaptive integral of ``integrand`` over ``[a, b]``.

    >>> round(integrate_1d(lambda t: np.sin(t) ** 2, 0, 2 * np.pi).value, 12)
    3.14159265359
    """
    a, b = float(a), float(b)
    if not a <= b:
        raise ValueError(f"need a <= b, got [{a}, {b}]")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if a == b:
        return QuadratureResult(0.0, 0.0, 1)
    threads = thread_count()

    def run(lo, hi):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        x = mid[:, None] + half[:, None] * NODES[None, :]
        f = _call(integrand, x)
        k = (f @ KRONROD_WEIGHTS) * half
        g = (f @ GAUSS_WEIGHTS) * half
        return k, np.abs(k - g)

    edges = np.linspace(a, b, initial + 1)
    lo, hi = edges[:-1], edges[1:]
    k, e = _evaluate_batches(lambda i, j: run(lo[i:j], hi[i:j]), lo.size, threads)
    evals = 15 * lo.size
    while True:
        value = math.fsum(k)
        err = math.fsum(e)
        target = _target(value, tol)
        if err <= target:
            return QuadratureResult(value, err, evals)
        if evals >= budget:
            raise ConvergenceError(
                f"1D quadrature did not reach tol={tol:g} within {budget} evaluations",
                QuadratureResult(value, err, evals),
            )
        pick = _select(e, err - 0.5 * target)
        keep = np.ones(lo.size, dtype=bool)
        keep[pick] = False
        m = 0.5 * (lo[pick] + hi[pick])
        nlo = np.concatenate([lo[pick], m])
        nhi = np.concatenate([m, hi[pick]])
        nk, ne = _evaluate_batches(lambda i, j: run(nlo[i:j], nhi[i:j]), nlo.size, threads)
        lo = np.concatenate([lo[keep], nlo])
        hi = np.concatenate([hi[keep], nhi])
        k = np.concatenate([k[keep], nk])
        e = np.concatenate([e[keep], ne])
        evals += 15 * nlo.size


def integrate_2d(integrand, s_range, t_range, tol=DEFAULT_TOL, budget=DEFAULT_BUDGET, initial=(4, 4)):
    """Adaptive integral of ``integrand(s, t)`` over a rectangle.

    >>> r = integrate_2d(lambda s, t: s * t, (0, 1), (0, 2))
    >>> round(r.value, 12)
    1.0
    """
    s0, s1 = map(float, s_range)
    t0, t1 = map(float, t_range)
    if not (s0 < s1 and t0 < t1):
        raise ValueError(f"degenerate rectangle [{s0}, {s1}] x [{t0}, {t1}]")
    if not tol > 0:
        raise ValueError("tol must be positive")
    threads = thread_count()
    wk, wg = KRONROD_WEIGHTS, GAUSS_WEIGHTS

    def run(slo, shi, tlo, thi):
        sh = 0.5 * (shi - slo)
        th = 0.5 * (thi - tlo)
        s = (0.5 * (slo + shi))[:, None] + sh[:, None] * NODES[None, :]
        t = (0.5 * (tlo + thi))[:, None] + th[:, None] * NODES[None, :]
        S = np.broadcast_to(s[:, :, None], s.shape + (15,))
        T = np.broadcast_to(t[:, None, :], s.shape[:1] + (15, 15))
        f = _call(integrand, np.ascontiguousarray(S), np.ascontiguousarray(T))
        area = sh * th
        ft_k = f @ wk                    # Kronrod in t, per s-node
        kk = (ft_k @ wk) * area
        gk = (ft_k @ wg) * area          # Gauss in s
        kg = ((f @ wg) @ wk) * area      # Gauss in t
        return kk, np.abs(kk - gk), np.abs(kk - kg)

    se = np.linspace(s0, s1, initial[0] + 1)
    te = np.linspace(t0, t1, initial[1] + 1)
    SL, TL = np.meshgrid(se[:-1], te[:-1], indexing="ij")
    SH, TH = np.meshgrid(se[1:], te[1:], indexing="ij")
    cells = [c.ravel() for c in (SL, SH, TL, TH)]

    def batch(c):
        return _evaluate_batches(lambda i, j: run(*(x[i:j] for x in c)), c[0].size, threads)

    k, es, et = batch(cells)
    evals = 225 * cells[0].size
    while True:
        value = math.fsum(k)
        e = es + et
        err = math.fsum(e)
        target = _target(value, tol)
        if err <= target:
            return QuadratureResult(value, err, evals)
        if evals >= budget:
            raise ConvergenceError(
                f"2D quadrature did not reach tol={tol:g} within {budget} evaluations",
                QuadratureResult(value, err, evals),
            )
        pick = _select(e, err - 0.5 * target)
        keep = np.ones(k.size, dtype=bool)
        keep[pick] = False
        slo, shi, tlo, thi = (c[pick] for c in cells)
        ps, pt = es[pick], et[pick]
        split_s = ps >= 0.25 * pt
        split_t = pt >= 0.25 * ps
        new = [[], [], [], []]
        for i in range(slo.size):
            sm = 0.5 * (slo[i] + shi[i])
            tm = 0.5 * (tlo[i] + thi[i])
            sparts = [(slo[i], sm), (sm, shi[i])] if split_s[i] else [(slo[i], shi[i])]
            tparts = [(tlo[i], tm), (tm, thi[i])] if split_t[i] else [(tlo[i], thi[i])]
            for a, b in sparts:
                for c, d in tparts:
                    new[0].append(a)
                    new[1].append(b)
                    new[2].append(c)
                    new[3].append(d)
        new = [np.array(x) for x in new]
        nk, nes, net = batch(new)
        cells = [np.concatenate([c[keep], n]) for c, n in zip(cells, new)]
        k = np.concatenate([k[keep], nk])
        es = np.concatenate([es[keep], nes])
        et = np.concatenate([et[keep], net])
        evals += 225 * new[0].size
