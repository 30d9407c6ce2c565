"""Measure-level boundedness criteria sampled on the disk.

Kernels are evaluated from moments as power series while the geometric tail
bound allows a series of at most ``MAX_TERMS`` terms. Closer to the circle a
radial source measure is integrated directly with its graded rule, written
in terms of the gap ``u = 1 - t`` so that ``1 - conj(w) t`` keeps full
relative accuracy as ``t`` and ``w`` approach 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .analytic import circle_values, moment_decay_sup
from .grids import DiskGrid, QuadratureScheme, graded_rule
from .measure import MomentSequence, RadialMeasure, carleson_profile

TAIL_TOL = 1e-12
MAX_TERMS = 1 << 20


class TailBoundError(ValueError):
    """Moment sequence too short to bound the series tail."""


@dataclass(frozen=True)
class CriterionReport:
    name: str
    value: float
    argmax: object
    samples: int
    profile: list = field(default_factory=list)
    error: float = 0.0
    method: str = "series"


class DecayTest(NamedTuple):
    sup: float
    exceeded: bool


def _weighted_tail(N: int, r: float) -> float:
    """``sum_{n > N} (n + 1) r^n`` in closed form."""
    if r == 0.0:
        return 0.0
    log_head = (N + 1) * math.log(r)
    if log_head < -745:
        return 0.0
    return math.exp(log_head) * ((N + 2) - (N + 1) * r) / (1.0 - r) ** 2


def series_length(m: MomentSequence, r: float, tol: float = TAIL_TOL) -> int:
    """Smallest N with ``max|m| * sum_{n>N} (n+1) r^n <= tol``.

    Moments of a finite measure are bounded by its total variation, which for
    the sequences handled here is ``max|m|``; a vanishing tail needs no bound.
    """
    if m.tail_is_zero:
        return m.N
    if r >= 1.0:
        raise TailBoundError("series kernels need |w| < 1")
    bound = float(np.max(np.abs(m.values)))
    if bound == 0.0 or r == 0.0:
        return 0
    hi = 1
    while bound * _weighted_tail(hi, r) > tol:
        hi *= 2
        if hi > 1 << 62:
            raise TailBoundError(f"no finite series length reaches the tail bound at r={r}")
    lo = hi // 2
    while lo < hi:
        mid = (lo + hi) // 2
        if bound * _weighted_tail(mid, r) > tol:
            lo = mid + 1
        else:
            hi = mid
    return hi


def _series_ok(m: MomentSequence, N: int) -> bool:
    return N <= m.N or m.tail_is_zero or (m.source is not None and N <= MAX_TERMS)


def _condition2_coefficients(m, N):
    return np.arange(1, N + 2) * m.head(N)


def _rule(mu: RadialMeasure, quad: QuadratureScheme, coarse=False):
    q = quad.coarsened() if coarse else quad
    return mu.rule(q.levels, q.per_level)


def _kernel_condition2(mu, w, quad, coarse=False):
    """``(1 - |w|^2) |int dmu(t) / (1 - conj(w) t)^2|`` for an array of ``w``."""
    t, u, wt = _rule(mu, quad, coarse)
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    wb = np.conj(w)[:, None]
    denom = (1.0 - wb) + wb * u[None, :]
    r = np.abs(w)
    return (1.0 - r) * (1.0 + r) * np.abs((wt / denom ** 2).sum(axis=1))


def condition2_value(m: MomentSequence, w: complex, quad: QuadratureScheme | None = None) -> float:
    """``(1 - |w|^2) |sum_n (n + 1) m[n] w^n|``.

    This is the series form of ``|int (1 - |w|^2) / (1 - conj(w) z)^2 dmu|``.
    Past ``MAX_TERMS`` a radial source is integrated directly instead.
    """
    r = abs(w)
    if r >= 1.0:
        raise ValueError("the kernel condition is evaluated for |w| < 1")
    N = series_length(m, r)
    if _series_ok(m, N):
        c = _condition2_coefficients(m, N)
        powers = np.power(complex(w), np.arange(N + 1)) if N else np.ones(1)
        return float((1.0 - r) * (1.0 + r) * abs(np.sum(c * powers)))
    if m.is_radial:
        return float(_kernel_condition2(m.source, w, quad or QuadratureScheme())[0])
    raise TailBoundError(
        f"need {N + 1} moments for |w|={r}, sequence has {len(m)} and no source measure")


def condition2_sup(m: MomentSequence, grid: DiskGrid | None = None,
                   quad: QuadratureScheme | None = None) -> CriterionReport:
    """Grid maximum of ``condition2_value`` with a per-radius profile."""
    grid = grid or DiskGrid()
    quad = quad or QuadratureScheme()
    thetas = grid.thetas
    profile, best, arg, err = [], -1.0, 0j, 0.0
    used_rule = False
    for r in grid.radii:
        N = series_length(m, r)
        if _series_ok(m, N):
            vals = np.abs(circle_values(_condition2_coefficients(m, N), [r], grid.angles)[0])
            vals *= (1.0 - r) * (1.0 + r)
        elif m.is_radial:
            used_rule = True
            vals = _kernel_condition2(m.source, r * np.exp(1j * thetas), quad)
        else:
            raise TailBoundError(f"need {N + 1} moments at r={r}, sequence has {len(m)}")
        k = int(np.argmax(vals))
        profile.append((float(r), float(vals[k])))
        if vals[k] > best:
            best, arg = float(vals[k]), complex(r * np.exp(1j * thetas[k]))
    if used_rule and abs(arg) > 0:
        N = series_length(m, abs(arg))
        if not _series_ok(m, N):
            err = abs(best - float(_kernel_condition2(m.source, arg, quad, coarse=True)[0]))
    return CriterionReport("condition2", best, arg, grid.radii.size * grid.angles,
                           profile, err, "series+rule" if used_rule else "series")


def _kernel_carleson(mu, w, quad, coarse=False):
    """``int (1 - |w|^2) / |1 - conj(w) t|^2 dmu(t)`` for an array of ``w``."""
    t, u, wt = _rule(mu, quad, coarse)
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    wb = np.conj(w)[:, None]
    denom = (1.0 - wb) + wb * u[None, :]
    r = np.abs(w)
    return (1.0 - r) * (1.0 + r) * (wt / np.abs(denom) ** 2).sum(axis=1)


def carleson_kernel_value(mu: RadialMeasure, w, quad: QuadratureScheme | None = None):
    out = _kernel_carleson(mu, w, quad or QuadratureScheme())
    return float(out[0]) if np.ndim(w) == 0 else out


def carleson_kernel_sup(mu: RadialMeasure, grid: DiskGrid | None = None,
                        quad: QuadratureScheme | None = None) -> CriterionReport:
    """Grid maximum of ``int (1 - |w|^2) / |1 - conj(w) t|^2 dmu(t)``.

    Exact for point masses; for densities the graded rule's error is estimated
    at the maximizer by halving the nodes per level.
    """
    grid = grid or DiskGrid()
    quad = quad or QuadratureScheme()
    e = np.exp(1j * grid.thetas)
    profile, best, arg = [], -1.0, 0j
    for r in grid.radii:
        vals = _kernel_carleson(mu, r * e, quad)
        k = int(np.argmax(vals))
        profile.append((float(r), float(vals[k])))
        if vals[k] > best:
            best, arg = float(vals[k]), complex(r * e[k])
    err = abs(best - float(_kernel_carleson(mu, arg, quad, coarse=True)[0]))
    return CriterionReport("carleson-kernel", best, arg, grid.radii.size * grid.angles,
                           profile, err, "rule")


def carleson_box_report(mu: RadialMeasure, depth: int) -> CriterionReport:
    """Dyadic Carleson constant ``max mu([1-h,1)) / h`` as a report."""
    h, ratios = carleson_profile(mu, depth)
    k = int(np.argmax(ratios))
    return CriterionReport("carleson-box", float(ratios[k]), float(h[k]), h.size,
                           [(float(a), float(b)) for a, b in zip(h, ratios)], 0.0, "closed-form")


def _box_g(m: MomentSequence, w, quad, coarse=False):
    """``g(w) = sum_k (k+1) m[k+1] w^k = int t / (1 - w t)^2 dmu(t)``."""
    if m.is_radial:
        t, u, wt = _rule(m.source, quad, coarse)
        ww = w[..., None]
        return ((wt * t) / ((1.0 - ww) + ww * u) ** 2).sum(axis=-1)
    c = np.arange(1, m.N + 1) * m.values[1:]
    acc = np.zeros(w.shape, dtype=complex)
    for ck in c[::-1]:
        acc = acc * w + ck
    return acc


def _box_value(m, h, quad, coarse=False):
    """``(1/|I|) int_{S(I)} |g|^2 (1 - |w|^2) dA`` for the arc of length 2 pi h at 0."""
    q = quad.coarsened() if coarse else quad
    v, wv = graded_rule(h, q.box_levels, q.box_per_level, include_origin=False)
    half = np.pi * h
    th, wth = graded_rule(half, q.box_levels + 1, q.box_per_level)
    symmetric = m.is_real
    if not symmetric:
        th = np.concatenate([-th[::-1], th])
        wth = np.concatenate([wth[::-1], wth])
    e = np.exp(1j * th)
    total = 0.0
    for gap, wg in zip(v, wv):
        r = 1.0 - gap
        g = _box_g(m, r * e, quad, coarse)
        total += wg * gap * (2.0 - gap) * r / np.pi * np.sum(wth * np.abs(g) ** 2)
    if symmetric:
        total *= 2.0
    return total / (2.0 * np.pi * h)


def box_condition4(m: MomentSequence, depth: int = 16,
                   quad: QuadratureScheme | None = None) -> CriterionReport:
    """Maximum over dyadic boxes ``|I| = 2 pi 2^-j``, j = 0..depth, of the box integral."""
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    quad = quad or QuadratureScheme()
    if not (m.is_radial or m.tail_is_zero):
        raise TailBoundError("box integral reaches the circle; needs a finite "
                             "sequence or a radial source measure")
    if not np.any(m.values[1:]) and (m.tail_is_zero or not m.is_radial):
        hs = 2.0 ** -np.arange(depth + 1)
        return CriterionReport("box4", 0.0, 1.0, hs.size, [(float(h), 0.0) for h in hs],
                               0.0, "exact")
    profile = []
    for j in range(depth + 1):
        h = 2.0 ** -j
        profile.append((h, float(_box_value(m, h, quad))))
    k = int(np.argmax([p[1] for p in profile]))
    h_best, best = profile[k]
    err = abs(best - _box_value(m, h_best, quad, coarse=True))
    return CriterionReport("box4", best, h_best, len(profile), profile, float(err),
                           "rule" if m.is_radial else "series")


def moment_decay_test(m: MomentSequence, threshold: float) -> DecayTest:
    s = moment_decay_sup(m)
    return DecayTest(s, s > threshold)


def moment_decay_report(m: MomentSequence, threshold: float = math.inf) -> CriterionReport:
    v = np.asarray(m.values).real
    prod = np.arange(1, v.size + 1) * v
    k = int(np.argmax(prod))
    s = moment_decay_sup(m)
    return CriterionReport("moment-decay", s, k, v.size,
                           [(int(n), float(x)) for n, x in enumerate(prod)], 0.0, "closed-form")
