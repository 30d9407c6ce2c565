"""Finite sections of the Hankel matrix ``(mu[n+k])`` and their norms.

Boundedness of the infinite matrix on H^2 or D_alpha shows up as a plateau
of the section norms in N, unboundedness as growth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .measure import MomentSequence, RadialMeasure


class ConvergenceError(RuntimeError):
    """Power iteration failed to meet its tolerance."""

    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


@dataclass(frozen=True)
class OperatorNormReport:
    value: float
    iterations: int
    residual: float
    space: str


class HankelOperator:
    """N x N matrix ``H[n, k] = h[n + k]`` built from ``h_0 .. h_{2N-2}``.

    The FFT of the zero-padded moment vector is computed once so that
    ``apply_fast`` costs two FFTs of length ``>= 2N``.
    """

    def __init__(self, h, N: int):
        h = np.asarray(h)
        if N < 1:
            raise ValueError(f"N must be >= 1, got {N}")
        if h.size < 2 * N - 1:
            raise ValueError(f"need {2 * N - 1} moments for N={N}, got {h.size}")
        self.N = int(N)
        self.h = h[: 2 * N - 1].astype(complex if np.iscomplexobj(h) else float)
        self.h.flags.writeable = False
        self._L = 1 << int(np.ceil(np.log2(2 * N)))
        padded = np.zeros(self._L, dtype=self.h.dtype)
        padded[: self.h.size] = self.h
        self._h_fft = np.fft.fft(padded)

    def __repr__(self):
        return f"HankelOperator(N={self.N})"

    def matrix(self) -> np.ndarray:
        return scipy.linalg.hankel(self.h[: self.N], self.h[self.N - 1:])

    def _check(self, x):
        x = np.asarray(x)
        if x.shape != (self.N,):
            raise ValueError(f"expected a vector of length {self.N}, got shape {x.shape}")
        return x

    def apply_dense(self, x) -> np.ndarray:
        """``y_n = sum_k h_{n+k} x_k`` by explicit matrix-vector product."""
        return self.matrix() @ self._check(x)

    def apply_fast(self, x) -> np.ndarray:
        """Same product as a cyclic correlation evaluated with FFTs.

        With ``xr[j] = x[-j mod L]`` the correlation becomes the convolution
        ``y_n = sum_j h_{n-j} xr_j`` and no wrap-around reaches ``n < N``
        because ``L >= 2N``.
        """
        x = self._check(x)
        L, N = self._L, self.N
        xr = np.zeros(L, dtype=np.result_type(x.dtype, float))
        xr[0] = x[0]
        xr[L - N + 1:] = x[:0:-1]
        y = np.fft.ifft(self._h_fft * np.fft.fft(xr))[:N]
        if not (np.iscomplexobj(x) or np.iscomplexobj(self.h)):
            y = y.real
        return y


def build(mu: RadialMeasure, N: int) -> HankelOperator:
    return HankelOperator(mu.moments(2 * N - 2), N)


def from_moments(m: MomentSequence, N: int) -> HankelOperator:
    return HankelOperator(m.head(2 * N - 2), N)


def _power_iteration(gram, N, tol, max_iter, space):
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    starts = [np.full(N, 1.0 / np.sqrt(N)),
              np.where(np.arange(N) % 2 == 0, 1.0, -1.0) / np.sqrt(N)]
    for x in starts:
        lam, change = None, np.inf
        for it in range(1, max_iter + 1):
            y = gram(x)
            ynorm = np.linalg.norm(y)
            if ynorm == 0.0:
                break  # start vector annihilated; try the next one
            lam_new = float(np.sqrt(abs(np.vdot(x, y))))
            x = y / ynorm
            if lam is not None:
                change = abs(lam_new - lam) / lam_new
                if change < tol:
                    return OperatorNormReport(lam_new, it, change, space)
            lam = lam_new
        else:
            raise ConvergenceError(
                f"power iteration did not converge in {max_iter} iterations",
                iterations=max_iter, residual=change)
    raise ConvergenceError("power iteration stalled from both start vectors", iterations=0)


def operator_norm_h2(H: HankelOperator, tol: float = 1e-10,
                     max_iter: int = 100_000) -> OperatorNormReport:
    """Largest singular value of the section, by power iteration on ``H^* H``."""
    if not np.any(H.h):
        return OperatorNormReport(0.0, 0, 0.0, "h2")

    def gram(x):
        return np.conj(H.apply_fast(np.conj(H.apply_fast(x))))

    return _power_iteration(gram, H.N, tol, max_iter, "h2")


def operator_norm_dalpha(H: HankelOperator, alpha: float, tol: float = 1e-10,
                         max_iter: int = 100_000) -> OperatorNormReport:
    """Norm of the section on ``D_alpha``, i.e. of ``W H W^-1`` on l^2.

    ``W = diag((n+1)^((1-alpha)/2))`` maps D_alpha isometrically onto l^2.
    """
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in (0, 2), got {alpha}")
    space = f"dalpha:{alpha!r}"
    if alpha == 1.0:
        rep = operator_norm_h2(H, tol, max_iter)
        return OperatorNormReport(rep.value, rep.iterations, rep.residual, space)
    if not np.any(H.h):
        return OperatorNormReport(0.0, 0, 0.0, space)
    w = np.arange(1, H.N + 1, dtype=float) ** ((1.0 - alpha) / 2.0)

    def gram(x):
        # (W H W^-1)^* (W H W^-1) x
        y = w * H.apply_fast(x / w)
        return np.conj(H.apply_fast(np.conj(w * y))) / w

    return _power_iteration(gram, H.N, tol, max_iter, space)


def quadratic_form_constant(H: HankelOperator, tol: float = 1e-10,
                            max_iter: int = 100_000) -> float:
    """``sup |x^T H x| / |x|^2`` over real x, the spectral radius of the section.

    For real symmetric H this is the spectral norm.
    """
    if np.iscomplexobj(H.h):
        raise ValueError("quadratic form constant is defined for real moment sequences")
    return operator_norm_h2(H, tol, max_iter).value


def hankel_pairing(f, m: MomentSequence):
    """``sum a_n m[n]``, i.e. ``int f dmu`` for a radial measure."""
    a = np.asarray(f.coefficients)
    if a.size > len(m):
        raise ValueError(f"moment sequence of length {len(m)} too short for degree {a.size - 1}")
    return np.sum(a * m.values[: a.size])[()]
