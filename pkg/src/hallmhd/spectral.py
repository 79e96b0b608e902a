"""Fourier representation of periodic vector fields on the unit cube.

Coefficients use the real-FFT layout ``(3, n, n, n//2 + 1)`` with the
"forward" normalization, so ``coeffs[c, k]`` is exactly the amplitude of
``exp(2 pi i k.x)`` in component ``c``. Hermitian symmetry of a real field
is therefore structural except on the ``kz = 0`` and ``kz = n/2`` planes.

Truncation is by the cube ``max|k_i| <= n // 3`` (2/3 rule). Quadratic
products are formed on a grid large enough to be alias free (the native
grid unless ``3 (n // 3) >= n``, in which case the product grid is padded).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft as sfft

from .errors import DimensionError

TWO_PI = 2.0 * np.pi


def _workers():
    value = os.environ.get("HALLMHD_THREADS")
    if not value:
        return None
    try:
        return max(1, int(value))
    except ValueError:
        return None


def _rfft3(values):
    return sfft.rfftn(values, axes=(-3, -2, -1), norm="forward", workers=_workers())


def _irfft3(coeffs, m):
    return sfft.irfftn(coeffs, s=(m, m, m), axes=(-3, -2, -1), norm="forward",
                       workers=_workers())


@dataclass(frozen=True)
class Grid3:
    """Uniform periodic grid on [0, L)^3 with L = 1."""

    n: int
    L: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 4 or self.n % 2:
            raise ValueError(f"resolution must be an even integer >= 4, got {self.n}")
        if self.L != 1.0:
            raise ValueError("only the unit box L = 1 is supported")

    @property
    def kmax_kept(self) -> int:
        return self.n // 3

    @property
    def dx(self) -> float:
        return self.L / self.n

    @property
    def spectral_shape(self):
        return (self.n, self.n, self.n // 2 + 1)

    @property
    def physical_shape(self):
        return (self.n, self.n, self.n)

    @cached_property
    def product_n(self) -> int:
        # alias-free product grid needs m > 3 K
        m = max(self.n, 3 * self.kmax_kept + 1)
        return m + (m % 2)

    @cached_property
    def k(self):
        """Integer wavenumbers as three broadcastable arrays."""
        n = self.n
        kf = np.fft.fftfreq(n, 1.0 / n)
        kz = np.arange(n // 2 + 1, dtype=float)
        return (kf[:, None, None], kf[None, :, None], kz[None, None, :])

    @cached_property
    def k_deriv(self):
        """Wavenumbers for differentiation, with the Nyquist entries zeroed."""
        kx, ky, kz = (a.copy() for a in self.k)
        h = self.n // 2
        kx[h] = 0.0
        ky[:, h] = 0.0
        kz[..., h] = 0.0
        return kx, ky, kz

    @cached_property
    def k2(self):
        kx, ky, kz = self.k_deriv
        return kx**2 + ky**2 + kz**2

    @cached_property
    def k2_safe(self):
        k2 = self.k2.copy()
        k2[0, 0, 0] = 1.0
        k2[k2 == 0.0] = 1.0
        return k2

    @cached_property
    def mask(self):
        kx, ky, kz = self.k
        K = self.kmax_kept
        return (np.abs(kx) <= K) & (np.abs(ky) <= K) & (np.abs(kz) <= K)

    @cached_property
    def weights(self):
        """Parseval weights of the half-spectrum layout."""
        w = np.full(self.spectral_shape, 2.0)
        w[..., 0] = 1.0
        w[..., self.n // 2] = 1.0
        return w

    @cached_property
    def coords(self):
        x = np.arange(self.n) * self.dx
        return np.meshgrid(x, x, x, indexing="ij")


@dataclass(frozen=True, eq=False)
class SpectralVectorField:
    """Fourier coefficients of a real 3-component periodic field."""

    grid: Grid3
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != (3,) + self.grid.spectral_shape:
            raise DimensionError(
                f"coefficient shape {self.coeffs.shape} does not match grid n={self.grid.n}")

    def _check(self, other):
        if not isinstance(other, SpectralVectorField):
            return NotImplemented
        if other.grid != self.grid:
            raise DimensionError("fields live on different grids")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return SpectralVectorField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return SpectralVectorField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar):
        if isinstance(scalar, SpectralVectorField):
            return NotImplemented
        return SpectralVectorField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return SpectralVectorField(self.grid, self.coeffs / scalar)

    def __neg__(self):
        return SpectralVectorField(self.grid, -self.coeffs)

    @property
    def mean(self):
        return self.coeffs[:, 0, 0, 0].real.copy()

    def copy(self):
        return SpectralVectorField(self.grid, self.coeffs.copy())


@dataclass(frozen=True, eq=False)
class RealVectorField:
    grid: Grid3
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (3,) + self.grid.physical_shape:
            raise DimensionError(
                f"values shape {self.values.shape} does not match (3, n, n, n) for n={self.grid.n}")
        if np.iscomplexobj(self.values):
            raise DimensionError("physical field must be real")


def zeros(grid: Grid3) -> SpectralVectorField:
    return SpectralVectorField(grid, np.zeros((3,) + grid.spectral_shape, dtype=complex))


def from_function(grid: Grid3, func, dealias=True) -> SpectralVectorField:
    """Transform ``func(x, y, z) -> (fx, fy, fz)`` sampled on the grid."""
    x, y, z = grid.coords
    values = np.stack([np.broadcast_to(np.asarray(c, dtype=float), x.shape)
                       for c in func(x, y, z)])
    return forward_transform(RealVectorField(grid, values), dealias=dealias)


def forward_transform(f: RealVectorField, dealias=True) -> SpectralVectorField:
    coeffs = _rfft3(f.values)
    if dealias:
        coeffs *= f.grid.mask
    return SpectralVectorField(f.grid, coeffs)


def inverse_transform(F: SpectralVectorField) -> RealVectorField:
    return RealVectorField(F.grid, _irfft3(F.coeffs, F.grid.n))


def dealias(F: SpectralVectorField) -> SpectralVectorField:
    return SpectralVectorField(F.grid, F.coeffs * F.grid.mask)


def _pad(coeffs, n, m):
    """Embed cube-truncated coefficients of an n-grid into an m-grid layout."""
    if m == n:
        return coeffs
    K = n // 3
    out = np.zeros(coeffs.shape[:-3] + (m, m, m // 2 + 1), dtype=complex)
    lo, hi = slice(0, K + 1), slice(-K, None)
    for sx in (lo, hi):
        for sy in (lo, hi):
            out[..., sx, sy, :K + 1] = coeffs[..., sx, sy, :K + 1]
    return out


def _truncate(coeffs, n, m):
    if m == n:
        return coeffs
    K = n // 3
    out = np.zeros(coeffs.shape[:-3] + (n, n, n // 2 + 1), dtype=complex)
    lo, hi = slice(0, K + 1), slice(-K, None)
    for sx in (lo, hi):
        for sy in (lo, hi):
            out[..., sx, sy, :K + 1] = coeffs[..., sx, sy, :K + 1]
    return out


def to_product_grid(F: SpectralVectorField) -> np.ndarray:
    """Physical values of a truncated field on the alias-free product grid."""
    g = F.grid
    return _irfft3(_pad(F.coeffs, g.n, g.product_n), g.product_n)


def from_product_grid(grid: Grid3, values) -> SpectralVectorField:
    """Transform product-grid values back, truncated to the kept modes."""
    m = grid.product_n
    coeffs = _truncate(_rfft3(values), grid.n, m)
    return SpectralVectorField(grid, coeffs * grid.mask)


def cross(a, b):
    """Pointwise cross product of (3, ...) arrays."""
    return np.stack([a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross_product_dealiased(F: SpectralVectorField, G: SpectralVectorField) -> SpectralVectorField:
    if F.grid != G.grid:
        raise DimensionError("fields live on different grids")
    prod = cross(to_product_grid(F), to_product_grid(G))
    return from_product_grid(F.grid, prod)


def leray_project(F: SpectralVectorField) -> SpectralVectorField:
    g = F.grid
    kx, ky, kz = g.k_deriv
    c = F.coeffs
    kdotc = (kx * c[0] + ky * c[1] + kz * c[2]) / g.k2_safe
    out = np.stack([c[0] - kx * kdotc, c[1] - ky * kdotc, c[2] - kz * kdotc])
    return SpectralVectorField(g, out)


def curl(F: SpectralVectorField) -> SpectralVectorField:
    kx, ky, kz = F.grid.k_deriv
    c = F.coeffs
    ik = 1j * TWO_PI
    out = np.stack([ik * (ky * c[2] - kz * c[1]),
                    ik * (kz * c[0] - kx * c[2]),
                    ik * (kx * c[1] - ky * c[0])])
    return SpectralVectorField(F.grid, out)


def divergence(F: SpectralVectorField) -> np.ndarray:
    """Scalar coefficients of div F."""
    kx, ky, kz = F.grid.k_deriv
    c = F.coeffs
    return 1j * TWO_PI * (kx * c[0] + ky * c[1] + kz * c[2])


def gradient(grid: Grid3, phi_hat) -> SpectralVectorField:
    kx, ky, kz = grid.k_deriv
    ik = 1j * TWO_PI
    return SpectralVectorField(grid, np.stack([ik * kx * phi_hat, ik * ky * phi_hat,
                                               ik * kz * phi_hat]))


def laplacian(F: SpectralVectorField) -> SpectralVectorField:
    return SpectralVectorField(F.grid, -(TWO_PI**2) * F.grid.k2 * F.coeffs)


def vector_potential(F: SpectralVectorField) -> SpectralVectorField:
    """Zero-mean Coulomb-gauge A with curl A = F (for solenoidal, zero-mean F)."""
    g = F.grid
    A = curl(F).coeffs / ((TWO_PI**2) * g.k2_safe)
    A[:, 0, 0, 0] = 0.0
    return SpectralVectorField(g, A)


def inner_product(F: SpectralVectorField, G: SpectralVectorField) -> float:
    if F.grid != G.grid:
        raise DimensionError("fields live on different grids")
    s = np.conj(F.coeffs) * G.coeffs
    return float(np.sum(F.grid.weights * s.real))


def scalar_inner(grid: Grid3, a_hat, b_hat) -> float:
    return float(np.sum(grid.weights * (np.conj(a_hat) * b_hat).real))


def norm(F: SpectralVectorField) -> float:
    return float(np.sqrt(max(inner_product(F, F), 0.0)))


def grad_norm_sq(F: SpectralVectorField) -> float:
    """||grad F||^2 summed over components."""
    g = F.grid
    return float(np.sum(g.weights * (TWO_PI**2) * g.k2 * np.abs(F.coeffs) ** 2))


def max_abs(F: SpectralVectorField) -> float:
    """max_x |F(x)| on the native grid."""
    v = inverse_transform(F).values
    return float(np.sqrt(np.max(dot(v, v))))


def max_divergence(F: SpectralVectorField) -> float:
    d = _irfft3(divergence(F), F.grid.n)
    return float(np.max(np.abs(d)))


def hermitian_defect(F: SpectralVectorField) -> float:
    """Largest violation of c(-k) = conj(c(k)) on the self-conjugate planes."""
    n = F.grid.n
    worst = 0.0
    for p in (0, n // 2):
        plane = F.coeffs[:, :, :, p]
        flipped = np.roll(plane[:, ::-1, ::-1], 1, axis=(1, 2))
        worst = max(worst, float(np.max(np.abs(plane - np.conj(flipped)))))
    return worst


def is_divergence_free(F: SpectralVectorField, rtol=1e-12) -> bool:
    return float(np.max(np.abs(divergence(F)))) <= rtol * norm(F)
