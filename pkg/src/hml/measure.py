"""Closed-form measures on [0, 1) and analytic-density measures on the disk.

Radial measures come in three flavours: Lebesgue measure, the power weight
``(1 - t)^s dt`` and finite lists of point masses. Each one knows its
moments ``int t^n dmu`` exactly and carries a graded quadrature rule for
integrating kernels that become singular as their parameter approaches 1.

``DiskDensityMeasure`` is ``f dA`` for a polynomial ``f``; the
``counterexample`` constructor truncates the lacunary density
``1 + sum (1 + 2^k) z^(2^k)`` after ``K`` terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy.special import betaln

from .grids import QuadratureScheme, gauss_legendre, graded_rule


def _fmt(x: float) -> str:
    return repr(float(x))


class RadialMeasure:
    """Positive finite Borel measure on [0, 1)."""

    def moments(self, N: int) -> np.ndarray:
        """Moments of order 0..N as a float array."""
        raise NotImplementedError

    def moment(self, n: int) -> float:
        if n < 0:
            raise ValueError(f"moment order must be >= 0, got {n}")
        return float(self.moments(n)[n])

    def tail_mass(self, h: float) -> float:
        raise NotImplementedError

    def rule(self, levels: int = 48, per_level: int = 16):
        """Nodes ``t``, gaps ``u = 1 - t`` and weights for ``int g dmu``.

        The gaps are returned separately because ``1 - t`` underflows to 0 in
        double precision long before the graded nodes reach the endpoint.
        """
        raise NotImplementedError

    @property
    def spec(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.spec


@dataclass(frozen=True)
class PowerWeight(RadialMeasure):
    """``(1 - t)^s dt`` on [0, 1); needs ``s > -1`` to have finite mass."""

    s: float

    def __post_init__(self):
        if not (math.isfinite(self.s) and self.s > -1.0):
            raise ValueError(f"power weight exponent must be > -1, got {self.s}")

    def moments(self, N):
        n = np.arange(N + 1, dtype=float)
        return np.exp(betaln(n + 1.0, self.s + 1.0))

    def tail_mass(self, h):
        _check_h(h)
        return h ** (self.s + 1.0) / (self.s + 1.0)

    def rule(self, levels=48, per_level=16):
        u, w = graded_rule(1.0, levels, per_level, exponent=self.s)
        return 1.0 - u, u, w

    @property
    def spec(self):
        return f"powerweight:s={_fmt(self.s)}"


@dataclass(frozen=True)
class Lebesgue(PowerWeight):
    """Lebesgue measure on [0, 1); its Hankel matrix is the Hilbert matrix."""

    s: float = field(default=0.0, init=False)

    def moments(self, N):
        return 1.0 / np.arange(1, N + 2, dtype=float)

    def tail_mass(self, h):
        _check_h(h)
        return float(h)

    @property
    def spec(self):
        return "lebesgue"


@dataclass(frozen=True)
class AtomList(RadialMeasure):
    """Finite sum of point masses ``sum m_j delta_{t_j}`` with ``t_j`` in [0, 1)."""

    atoms: tuple

    def __post_init__(self):
        atoms = tuple((float(t), float(m)) for t, m in self.atoms)
        for t, m in atoms:
            if not 0.0 <= t < 1.0:
                raise ValueError(f"atom position must lie in [0, 1), got {t}")
            if not (m > 0.0 and math.isfinite(m)):
                raise ValueError(f"atom mass must be positive, got {m}")
        object.__setattr__(self, "atoms", atoms)

    @property
    def positions(self) -> np.ndarray:
        return np.array([t for t, _ in self.atoms], dtype=float)

    @property
    def masses(self) -> np.ndarray:
        return np.array([m for _, m in self.atoms], dtype=float)

    def moments(self, N):
        out = np.zeros(N + 1)
        n = np.arange(N + 1, dtype=float)
        for t, m in self.atoms:
            if t == 0.0:
                out[0] += m
            else:
                out += m * np.exp(n * math.log(t))
        return out

    def tail_mass(self, h):
        _check_h(h)
        return float(sum(m for t, m in self.atoms if t >= 1.0 - h))

    def rule(self, levels=48, per_level=16):
        t = self.positions
        return t, 1.0 - t, self.masses

    def __add__(self, other: "AtomList") -> "AtomList":
        return AtomList(self.atoms + other.atoms)

    def scaled(self, a: float) -> "AtomList":
        return AtomList(tuple((t, a * m) for t, m in self.atoms))

    @property
    def spec(self):
        inner = ",".join(f"({_fmt(t)},{_fmt(m)})" for t, m in self.atoms)
        return f"atoms:[{inner}]"


def _check_h(h):
    if not 0.0 < h <= 1.0:
        raise ValueError(f"tail length h must lie in (0, 1], got {h}")


@dataclass(frozen=True)
class DiskDensityMeasure:
    """Complex measure ``f(z) dA(z)`` with polynomial density ``f = sum c_m z^m``."""

    coefficients: tuple
    label: str | None = None

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("density needs at least one coefficient")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def counterexample(cls, K: int) -> "DiskDensityMeasure":
        """Density ``1 + sum_{k=1}^{K} (1 + 2^k) z^(2^k)``."""
        if K < 0:
            raise ValueError(f"K must be >= 0, got {K}")
        c = np.zeros(2 ** K + 1 if K > 0 else 1, dtype=complex)
        c[0] = 1.0
        for k in range(1, K + 1):
            c[2 ** k] = 1.0 + 2 ** k
        return cls(tuple(c), label=f"counterexample:K={K}")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def coeff_array(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=complex)

    def moments(self, N: int) -> np.ndarray:
        """Conjugate moments ``int conj(z)^n f dA`` for n = 0..N."""
        out = np.zeros(N + 1, dtype=complex)
        m = min(N, self.degree)
        out[: m + 1] = self.coeff_array[: m + 1] / np.arange(1, m + 2)
        return out

    def density(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeff_array)

    @property
    def spec(self):
        if self.label:
            return self.label
        return "density:[" + ",".join(repr(c) for c in self.coefficients) + "]"

    def __str__(self):
        return self.spec


@dataclass(frozen=True)
class MomentSequence:
    """Moments ``values[0..N]`` together with the measure they came from.

    ``source`` lets consumers extend the sequence when a longer tail is
    needed; it may be ``None`` for hand-made sequences.
    """

    values: np.ndarray
    source: object = None

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("moment sequence must be a nonempty 1-D array")
        if np.iscomplexobj(v) and not np.any(v.imag):
            v = v.real
        v = v.astype(complex if np.iscomplexobj(v) else float)
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size

    @property
    def N(self) -> int:
        return self.values.size - 1

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    @property
    def is_radial(self) -> bool:
        return isinstance(self.source, RadialMeasure)

    @property
    def tail_is_zero(self) -> bool:
        """True when every moment past ``N`` is known to vanish."""
        src = self.source
        if isinstance(src, DiskDensityMeasure):
            return self.N >= src.degree
        if isinstance(src, AtomList):
            return bool(np.all(src.positions == 0.0))
        return False

    def extended(self, N: int) -> "MomentSequence":
        """Sequence of length at least ``N + 1`` (recomputed from the source)."""
        if N <= self.N:
            return self
        if self.source is None:
            raise ValueError("cannot extend a moment sequence without a source measure")
        return MomentSequence(self.source.moments(N), self.source)

    def head(self, N: int) -> np.ndarray:
        """Values ``0..N`` padded with zeros when the tail is known to vanish."""
        if N <= self.N:
            return self.values[: N + 1]
        if self.tail_is_zero:
            return np.concatenate([self.values, np.zeros(N - self.N, self.values.dtype)])
        return self.extended(N).values[: N + 1]

    @property
    def spec(self) -> str:
        return getattr(self.source, "spec", "explicit")


def moment(mu: RadialMeasure, n: int) -> float:
    """``int_0^1 t^n dmu(t)``."""
    return mu.moment(n)


def moment_sequence(mu: RadialMeasure, N: int) -> MomentSequence:
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return MomentSequence(mu.moments(N), mu)


def conjugate_moment(mu_bar: DiskDensityMeasure, n: int) -> complex:
    """``int conj(z)^n f(z) dA(z) = c_n / (n + 1)`` by orthogonality of monomials."""
    if n < 0:
        raise ValueError(f"moment order must be >= 0, got {n}")
    if n > mu_bar.degree:
        return 0j
    return mu_bar.coefficients[n] / (n + 1)


def conjugate_moments(mu_bar: DiskDensityMeasure, N: int) -> MomentSequence:
    return MomentSequence(mu_bar.moments(N), mu_bar)


@lru_cache(maxsize=8)
def _angular_modes(mu_bar, quad: QuadratureScheme):
    """Trapezoid sums ``(2 pi / A) sum_k f(r e^{i theta_k}) e^{-i j theta_k}``.

    One row per Gauss radius, one column per mode ``j`` (mod ``A``).
    """
    from .analytic import circle_values

    r, wr = gauss_legendre(quad.radial)
    samples = circle_values(mu_bar.coeff_array, r, quad.angular)
    return r, wr, np.fft.fft(samples, axis=1) * (2.0 * np.pi / quad.angular)


def _polar_conjugate_moment(mu_bar, n, quad: QuadratureScheme):
    r, wr, modes = _angular_modes(mu_bar, quad)
    return complex(np.sum(wr * r / np.pi * r ** n * modes[:, n % quad.angular]))


def conjugate_moment_quadrature(mu_bar: DiskDensityMeasure, n: int,
                                quad: QuadratureScheme | None = None):
    """Polar-grid value of ``int conj(z)^n f dA`` and an error estimate.

    The estimate is the gap to the half-resolution rule plus a rounding
    floor proportional to the size of the density coefficients.

    Returns
    -------
    value : complex
    error : float
    """
    if n < 0:
        raise ValueError(f"moment order must be >= 0, got {n}")
    quad = quad or QuadratureScheme()
    # angular aliasing would fold z^(n + A) onto z^n
    need = 1 << int(np.ceil(np.log2(2 * (mu_bar.degree + n + 1))))
    if quad.angular < need:
        quad = replace(quad, angular=need)
    value = _polar_conjugate_moment(mu_bar, n, quad)
    coarse = _polar_conjugate_moment(mu_bar, n, quad.coarsened())
    scale = 1.0 + float(np.sum(np.abs(mu_bar.coeff_array)))
    error = abs(value - coarse) + 256 * np.finfo(float).eps * scale
    return value, float(error)


def tail_mass(mu: RadialMeasure, h: float) -> float:
    """``mu([1 - h, 1))``."""
    return mu.tail_mass(h)


def carleson_profile(mu: RadialMeasure, depth: int):
    """Dyadic ``h = 2^-j`` (j = 0..depth) and ``mu([1-h, 1)) / h``."""
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    h = 2.0 ** -np.arange(depth + 1)
    ratios = np.array([mu.tail_mass(x) / x for x in h])
    return h, ratios


def carleson_constant(mu: RadialMeasure, depth: int) -> float:
    """Largest dyadic ``mu([1-h, 1)) / h``; a lower bound for the Carleson constant."""
    return float(carleson_profile(mu, depth)[1].max())
