"""Sampling grids and quadrature rules on the unit disk.

Area measure throughout is the normalized ``dA = dx dy / pi``, so the
disk has unit mass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi


@lru_cache(maxsize=None)
def gauss_legendre(n: int, a: float = 0.0, b: float = 1.0):
    """Gauss-Legendre nodes and weights on ``[a, b]`` (read-only arrays)."""
    x, w = np.polynomial.legendre.leggauss(n)
    nodes = 0.5 * (b - a) * x + 0.5 * (b + a)
    weights = 0.5 * (b - a) * w
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


@lru_cache(maxsize=256)
def graded_rule(length: float, levels: int, per_level: int, exponent: float = 0.0,
                include_origin: bool = True):
    """Composite Gauss rule on ``(0, length]`` graded geometrically toward 0.

    The interval is cut into ``[length 2^-(k+1), length 2^-k]`` for
    ``k < levels``; each piece gets ``per_level`` Gauss-Legendre nodes and the
    weights absorb the factor ``u**exponent``. When ``include_origin`` is set
    the remaining piece ``[0, length 2^-levels]`` is handled by Gauss-Jacobi
    with weight ``u**exponent`` (exponent > -1), so the rule integrates
    ``u**exponent g(u)`` with ``g`` smooth on the scale of each piece.

    Returns ``(u, w)`` with ``sum(w * g(u)) ~ int_0^length u**exponent g(u) du``.
    """
    x, wx = np.polynomial.legendre.leggauss(per_level)
    us, ws = [], []
    for k in range(levels):
        hi = length * 2.0 ** (-k)
        lo = 0.5 * hi
        u = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        us.append(u)
        ws.append(0.5 * (hi - lo) * wx * u ** exponent)
    if include_origin:
        eps = length * 2.0 ** (-levels)
        xj, wj = roots_jacobi(per_level, 0.0, exponent)
        us.append(0.5 * eps * (1.0 + xj))
        ws.append((0.5 * eps) ** (exponent + 1.0) * wj)
    u = np.concatenate(us)
    w = np.concatenate(ws)
    order = np.argsort(u)
    u, w = u[order], w[order]
    u.flags.writeable = False
    w.flags.writeable = False
    return u, w


@dataclass(frozen=True)
class DiskGrid:
    """Sample points ``r e^{i theta}`` for suprema over the disk.

    Radii are the boundary-clustered family ``1 - 2^{-j/2}`` (``j <= depth``)
    merged with a uniform family ``i / uniform`` so that interior maxima are
    resolved too. ``r_max`` (optional) caps the radii and is itself included.
    """

    depth: int = 40
    angles: int = 256
    uniform: int = 64
    r_max: float | None = None
    radii: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.angles < 8:
            raise ValueError(f"angles must be >= 8, got {self.angles}")
        if self.depth < 0 or self.uniform < 0:
            raise ValueError("depth and uniform must be nonnegative")
        if self.r_max is not None and not 0.0 <= self.r_max < 1.0:
            raise ValueError(f"r_max must lie in [0, 1), got {self.r_max}")
        j = np.arange(self.depth + 1)
        radii = 1.0 - 2.0 ** (-j / 2.0)
        if self.uniform:
            radii = np.concatenate([radii, np.arange(self.uniform) / self.uniform])
        if self.r_max is not None:
            radii = np.concatenate([radii[radii < self.r_max], [self.r_max]])
        radii = np.unique(radii)
        radii = radii[radii < 1.0]
        radii.flags.writeable = False
        object.__setattr__(self, "radii", radii)

    @property
    def thetas(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.angles) / self.angles

    def points(self) -> np.ndarray:
        """All grid points as a ``(len(radii), angles)`` complex array."""
        return self.radii[:, None] * np.exp(1j * self.thetas)[None, :]

    def refined(self, extra_depth: int = 0, angle_factor: int = 1) -> "DiskGrid":
        return DiskGrid(self.depth + extra_depth, self.angles * angle_factor,
                        self.uniform, self.r_max)


@dataclass(frozen=True)
class QuadratureScheme:
    """Polar product rule for ``dA`` plus graded radial rules.

    ``radial`` Gauss-Legendre nodes in ``r`` on (0, 1) and ``angular``
    equispaced nodes in ``theta`` give the disk rule. ``levels`` and
    ``per_level`` configure the geometrically graded rules used for
    integrals against measures on [0, 1) near the endpoint 1 and for
    Carleson boxes.
    """

    radial: int = 256
    angular: int = 512
    levels: int = 48
    per_level: int = 16
    box_levels: int = 24
    box_per_level: int = 6

    def __post_init__(self):
        if self.radial < 1 or self.angular < 1:
            raise ValueError("quadrature resolution must be positive")
        if self.levels < 1 or self.per_level < 2:
            raise ValueError("graded rule needs levels >= 1 and per_level >= 2")

    def coarsened(self) -> "QuadratureScheme":
        """Half-resolution companion used for error estimates."""
        return QuadratureScheme(
            max(self.radial // 2, 1), max(self.angular // 2, 1), self.levels,
            max(self.per_level // 2, 2), self.box_levels, max(self.box_per_level // 2, 2),
        )

    def disk_nodes(self, angular: int | None = None):
        """Radii, angles and area weights of the polar rule.

        Weights include the Jacobian ``r / pi`` so that
        ``sum(w * F(r, theta))`` approximates ``int_D F dA``.
        """
        a = self.angular if angular is None else angular
        r, wr = gauss_legendre(self.radial)
        theta = 2.0 * np.pi * np.arange(a) / a
        weights = np.outer(wr * r / np.pi, np.full(a, 2.0 * np.pi / a))
        return r, theta, weights
