"""Truncated Taylor series on the disk and seminorm estimates.

Suprema over the disk are sampled on a ``DiskGrid`` and are therefore lower
bounds; refining the grid can only increase them. Integrals use the polar
product rule of ``QuadratureScheme``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .grids import DiskGrid, QuadratureScheme
from .measure import MomentSequence

__all__ = [
    "CoeffSeries", "DiskGrid", "QuadratureScheme", "Estimate", "LacunaryProfile",
    "eval_series", "eval_derivative", "p_mu_series", "mobius", "hardy2_norm",
    "hardy_p_norm", "dirichlet_alpha_norm", "bloch_seminorm", "bloch_estimate",
    "qp_seminorm", "qp_estimate", "default_a_samples", "lacunary_profile",
    "moment_decay_sup", "circle_values",
]


@dataclass(frozen=True)
class CoeffSeries:
    """Polynomial ``sum a_n z^n`` given by its coefficient list."""

    coefficients: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.coefficients))
        if a.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        if a.size == 0:
            a = np.zeros(1)
        a = a.astype(complex if np.iscomplexobj(a) else float)
        a.flags.writeable = False
        object.__setattr__(self, "coefficients", a)

    @property
    def degree(self) -> int:
        return self.coefficients.size - 1

    def derivative(self) -> "CoeffSeries":
        a = self.coefficients
        if a.size == 1:
            return CoeffSeries(np.zeros(1, a.dtype))
        return CoeffSeries(a[1:] * np.arange(1, a.size))

    def shifted(self) -> "CoeffSeries":
        """Coefficients of ``z f(z)``."""
        return CoeffSeries(np.concatenate([np.zeros(1, self.coefficients.dtype),
                                           self.coefficients]))

    def __mul__(self, other: "CoeffSeries") -> "CoeffSeries":
        return CoeffSeries(np.convolve(self.coefficients, other.coefficients))

    def __len__(self):
        return self.coefficients.size


class Estimate(NamedTuple):
    value: float
    error: float
    argmax: complex


class LacunaryProfile(NamedTuple):
    is_lacunary: bool
    sup_coeff: float
    sum_sq: float


def _horner(a, w):
    w = np.asarray(w)
    acc = np.zeros(w.shape, dtype=np.result_type(a.dtype, w.dtype, float))
    for c in a[::-1]:
        acc = acc * w + c
    return acc


def eval_series(f: CoeffSeries, w):
    """Value of ``f`` at ``w`` (scalar or array), ``|w| <= 1``."""
    if np.any(np.abs(w) > 1.0):
        raise ValueError("evaluation point outside the closed unit disk")
    out = _horner(f.coefficients, w)
    return out[()] if np.ndim(out) == 0 else out


def eval_derivative(f: CoeffSeries, w):
    """``f'(w)`` for ``|w| < 1``."""
    if np.any(np.abs(w) >= 1.0):
        raise ValueError("derivative is evaluated only inside the open disk")
    out = _horner(f.derivative().coefficients, w)
    return out[()] if np.ndim(out) == 0 else out


def p_mu_series(m: MomentSequence) -> CoeffSeries:
    """Taylor coefficients of ``P_mu(w) = sum mu[n] w^n``."""
    return CoeffSeries(np.array(m.values))


def mobius(a, z):
    """Disk automorphism ``(a - z) / (1 - conj(a) z)`` swapping ``a`` and 0."""
    if np.any(np.abs(a) >= 1.0):
        raise ValueError("Mobius parameter must lie in the open disk")
    if np.any(np.abs(z) > 1.0):
        raise ValueError("point outside the closed unit disk")
    return (a - z) / (1.0 - np.conj(a) * z)


def hardy2_norm(f: CoeffSeries) -> float:
    return float(np.sqrt(np.sum(np.abs(f.coefficients) ** 2)))


def dirichlet_alpha_norm(f: CoeffSeries, alpha: float) -> float:
    """``(sum (n+1)^(1-alpha) |a_n|^2)^(1/2)``; alpha = 1 gives the H^2 norm."""
    a = f.coefficients
    if alpha == 1.0:
        return hardy2_norm(f)
    weights = np.arange(1, a.size + 1, dtype=float) ** (1.0 - alpha)
    return float(np.sqrt(np.sum(weights * np.abs(a) ** 2)))


def circle_values(coeffs, radii, angles: int) -> np.ndarray:
    """``sum_n c_n r^n e^{i n theta_k}`` at equispaced ``theta_k = 2 pi k / angles``.

    Coefficients are folded modulo ``angles`` and summed with one inverse FFT
    per radius, so the cost is linear in the series length.

    Returns an array of shape ``(len(radii), angles)``.
    """
    c = np.asarray(coeffs)
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    n = np.arange(c.size)
    out = np.empty((radii.size, angles), dtype=complex)
    pad = (-c.size) % angles
    for i, r in enumerate(radii):
        scaled = c * _powers(r, n)
        if pad:
            scaled = np.concatenate([scaled, np.zeros(pad, scaled.dtype)])
        folded = scaled.reshape(-1, angles).sum(axis=0)
        out[i] = np.fft.ifft(folded) * angles
    return out


def _powers(r, n):
    if r == 0.0:
        return (n == 0).astype(float)
    return np.exp(n * np.log(r))


def hardy_p_norm(f: CoeffSeries, p: float, A: int | None = None) -> float:
    """``(1/2pi int |f(e^{i theta})|^p d theta)^(1/p)`` by the trapezoid rule.

    For polynomials the supremum over circles of radius ``r < 1`` is the
    boundary value. ``A`` must be at least ``4 (degree + 1)``. Zeros on the
    circle put kinks in ``|f|^p`` and slow the rule to ``O(A^-2)``, hence
    the generous default of ``2^16`` nodes.
    """
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    floor = 4 * (f.degree + 1)
    if A is None:
        A = max(1 << 16, 1 << int(np.ceil(np.log2(floor))))
    if A < floor:
        raise ValueError(f"A={A} below the Nyquist floor 4*(degree+1)={floor}")
    vals = np.abs(circle_values(f.coefficients, [1.0], A)[0])
    if p == 2:
        return float(np.sqrt(np.mean(vals ** 2)))
    return float(np.mean(vals ** p) ** (1.0 / p))


def bloch_estimate(f: CoeffSeries, grid: DiskGrid | None = None) -> Estimate:
    """Grid maximum of ``(1 - |z|^2) |f'(z)|`` with its location."""
    grid = grid or DiskGrid()
    d = f.derivative().coefficients
    r = grid.radii
    vals = np.abs(circle_values(d, r, grid.angles)) * ((1.0 - r) * (1.0 + r))[:, None]
    i, k = np.unravel_index(np.argmax(vals), vals.shape)
    return Estimate(float(vals[i, k]), 0.0, complex(r[i] * np.exp(1j * grid.thetas[k])))


def bloch_seminorm(f: CoeffSeries, grid: DiskGrid | None = None) -> float:
    """Lower bound for ``sup (1 - |z|^2) |f'(z)|`` from the grid."""
    return bloch_estimate(f, grid).value


def default_a_samples() -> np.ndarray:
    """0 together with 16 equispaced points on each of |a| = 0.5, 0.9, 0.99, 0.999."""
    ring = np.exp(2j * np.pi * np.arange(16) / 16)
    pts = [np.zeros(1, complex)] + [r * ring for r in (0.5, 0.9, 0.99, 0.999)]
    return np.concatenate(pts)


def _qp_values(d, p, a_samples, quad: QuadratureScheme):
    deg = d.size  # f' has degree deg - 1, |f'|^2 has frequencies below deg
    angular = max(quad.angular, 1 << int(np.ceil(np.log2(4 * deg))))
    r, theta, w = quad.disk_nodes(angular)
    fp2 = np.abs(circle_values(d, r, angular)) ** 2
    z = r[:, None] * np.exp(1j * theta)[None, :]
    one_minus_z2 = ((1.0 - r) * (1.0 + r))[:, None]
    base = w * fp2
    out = np.empty(len(a_samples))
    for i, a in enumerate(a_samples):
        if a == 0:
            weight = one_minus_z2 ** p
        else:
            aa = abs(a)
            weight = ((1.0 - aa) * (1.0 + aa) * one_minus_z2
                      / np.abs(1.0 - np.conj(a) * z) ** 2) ** p
        out[i] = np.sum(base * weight)
    return out


def qp_estimate(f: CoeffSeries, p: float, a_samples=None,
                quad: QuadratureScheme | None = None) -> Estimate:
    """Sampled ``Q_p`` seminorm with a quadrature error estimate.

    For each Mobius centre ``a`` the integral
    ``int |f'|^2 (1 - |sigma_a|^2)^p dA`` is computed on the polar rule; the
    angular node count is raised to at least ``4 deg f`` so that the
    ``a = 0`` integrand is integrated exactly in angle. The error estimate is
    the discrepancy with the half-resolution rule at the maximizing centre.
    """
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    a_samples = default_a_samples() if a_samples is None else np.atleast_1d(
        np.asarray(a_samples, dtype=complex))
    if a_samples.size == 0:
        raise ValueError("a_samples must not be empty")
    if np.any(np.abs(a_samples) >= 1.0):
        raise ValueError("Mobius centres must lie in the open disk")
    quad = quad or QuadratureScheme()
    d = f.derivative().coefficients
    vals = _qp_values(d, p, a_samples, quad)
    i = int(np.argmax(vals))
    coarse = _qp_values(d, p, a_samples[i:i + 1], quad.coarsened())[0]
    value = np.sqrt(max(vals[i], 0.0))
    error = abs(value - np.sqrt(max(coarse, 0.0)))
    return Estimate(float(value), float(error), complex(a_samples[i]))


def qp_seminorm(f: CoeffSeries, p: float, a_samples=None,
                quad: QuadratureScheme | None = None) -> float:
    return qp_estimate(f, p, a_samples, quad).value


def lacunary_profile(f: CoeffSeries, lam: float) -> LacunaryProfile:
    """Gap test ``n_{k+1} >= lam n_k`` on the nonzero coefficients of index >= 1.

    The constant term is ignored both in the gap test and in the two
    coefficient summaries.
    """
    if lam <= 1.0:
        raise ValueError(f"lambda must exceed 1, got {lam}")
    a = f.coefficients
    idx = np.flatnonzero(a[1:] != 0) + 1
    gaps_ok = bool(np.all(idx[1:] >= lam * idx[:-1])) if idx.size > 1 else True
    mags = np.abs(a[idx])
    sup = float(mags.max()) if idx.size else 0.0
    return LacunaryProfile(gaps_ok, sup, float(np.sum(mags ** 2)))


def moment_decay_sup(m) -> float:
    """``max_n (n + 1) m[n]`` for a nonnegative sequence."""
    v = np.asarray(m.values if isinstance(m, MomentSequence) else m)
    if np.iscomplexobj(v):
        if np.any(v.imag != 0):
            raise ValueError("moment decay test needs a real sequence")
        v = v.real
    if np.any(v < 0):
        raise ValueError("moment decay test needs nonnegative moments")
    return float(np.max(np.arange(1, v.size + 1) * v))
