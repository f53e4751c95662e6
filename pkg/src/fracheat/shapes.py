"""Analytic test sets: exact geometry, rasterisation and Fourier spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from ._errors import ConfigurationError, DomainError
from ._quad import _leggauss, composite_rule, geometric_breaks
from .specialfn import ball_volume, bessel_j
from .spectral import IndicatorField, TorusGrid

__all__ = [
    "Disk",
    "Rectangle",
    "Slab",
    "Polygon",
    "Checkerboard",
    "ShapeGeometry",
    "RadialSpectrum",
    "rasterize",
    "analytic_spectrum",
    "geometry",
    "rearranged_ball",
    "isoperimetric_lower_bound",
    "radial_spectrum",
    "square",
]


@dataclass(frozen=True)
class ShapeGeometry:
    measure: float
    perimeter: float


def _center(center, n):
    c = (0.0,) * n if center is None else tuple(float(x) for x in center)
    if len(c) != n:
        raise DomainError(f"center must have {n} coordinates")
    return c


@dataclass(frozen=True)
class Disk:
    """The ball of radius R in R^n (an interval for n = 1)."""

    R: float
    n: int = 2
    center: tuple | None = None

    kind = "disk"
    periodic = False

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError("radius must be positive")
        if self.n not in (1, 2, 3):
            raise DomainError("disks are supported for n = 1, 2, 3")
        object.__setattr__(self, "center", _center(self.center, self.n))

    @property
    def diameter(self) -> float:
        return 2.0 * self.R

    @property
    def extent(self):
        return (2.0 * self.R,) * self.n

    def contains(self, x):
        x = np.asarray(x, dtype=float) - np.asarray(self.center)
        return np.sum(x * x, axis=-1) < self.R * self.R


@dataclass(frozen=True)
class Rectangle:
    """The box prod_i [-a_i, a_i] (half-widths a_i)."""

    half_widths: tuple
    center: tuple | None = None

    kind = "rectangle"
    periodic = False

    def __post_init__(self):
        a = tuple(float(x) for x in self.half_widths)
        if not a or any(not x > 0 for x in a):
            raise DomainError("half-widths must be positive")
        object.__setattr__(self, "half_widths", a)
        object.__setattr__(self, "center", _center(self.center, len(a)))

    @property
    def n(self) -> int:
        return len(self.half_widths)

    @property
    def diameter(self) -> float:
        return 2.0 * math.sqrt(sum(a * a for a in self.half_widths))

    @property
    def extent(self):
        return tuple(2.0 * a for a in self.half_widths)

    def contains(self, x):
        x = np.abs(np.asarray(x, dtype=float) - np.asarray(self.center))
        return np.all(x < np.asarray(self.half_widths), axis=-1)


def square(side: float, center=None) -> Rectangle:
    return Rectangle((0.5 * side, 0.5 * side), center)


@dataclass(frozen=True)
class Slab:
    """The band |x_axis - c| < delta, realised on the torus."""

    delta: float
    axis: int = 0
    n: int = 2
    center: tuple | None = None

    kind = "slab"
    periodic = True

    def __post_init__(self):
        if not self.delta > 0:
            raise DomainError("slab half-width must be positive")
        if not 0 <= self.axis < self.n:
            raise DomainError("slab axis out of range")
        object.__setattr__(self, "center", _center(self.center, self.n))

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        return np.abs(x[..., self.axis] - self.center[self.axis]) < self.delta


@dataclass(frozen=True)
class Polygon:
    """A simple closed polygon in the plane, vertices in order."""

    vertices: tuple

    kind = "polygon"
    periodic = False
    n = 2

    def __post_init__(self):
        v = tuple((float(p[0]), float(p[1])) for p in self.vertices)
        object.__setattr__(self, "vertices", v)

    @property
    def degenerate(self) -> bool:
        return len(self.vertices) < 3 or abs(self._signed_area()) == 0.0

    def _signed_area(self) -> float:
        if len(self.vertices) < 3:
            return 0.0
        v = np.asarray(self.vertices)
        x, y = v[:, 0], v[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    @property
    def diameter(self) -> float:
        if not self.vertices:
            return 0.0
        v = np.asarray(self.vertices)
        return float(np.max(np.linalg.norm(v[:, None, :] - v[None, :, :], axis=-1)))

    @property
    def extent(self):
        if not self.vertices:
            return (0.0, 0.0)
        v = np.asarray(self.vertices)
        return tuple(v.max(axis=0) - v.min(axis=0))

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        inside = np.zeros(x.shape[:-1], dtype=bool)
        if self.degenerate:
            return inside
        px, py = x[..., 0], x[..., 1]
        v = self.vertices
        # even-odd rule
        for (x0, y0), (x1, y1) in zip(v, v[1:] + v[:1]):
            if y0 == y1:
                continue
            crosses = (y0 > py) != (y1 > py)
            xint = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
            inside ^= crosses & (px < xint)
        return inside


@dataclass(frozen=True)
class Checkerboard:
    """Cells of side ``cell`` with even index sum, shifted by ``phase``."""

    cell: float
    phase: float = 0.0
    n: int = 2

    kind = "checkerboard"
    periodic = True

    def __post_init__(self):
        if not self.cell > 0:
            raise DomainError("cell size must be positive")

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.floor((x - self.phase) / self.cell).astype(np.int64)
        return np.sum(idx, axis=-1) % 2 == 0


# ---------------------------------------------------------------------------


def _check_fits(shape, grid: TorusGrid):
    if shape.n != grid.n:
        raise ConfigurationError(f"shape dimension {shape.n} differs from grid dimension {grid.n}")
    if isinstance(shape, Checkerboard):
        k = grid.L / shape.cell
        if abs(k - round(k)) > 1e-9 or round(k) % 2:
            raise ConfigurationError("checkerboard cells must tile the torus with an even count per side")
        return
    if isinstance(shape, Slab):
        if 2.0 * shape.delta >= grid.L:
            raise ConfigurationError("slab wider than the torus")
        return
    if isinstance(shape, Polygon) and shape.degenerate:
        return
    if any(e + shape.diameter > grid.L for e in shape.extent):
        raise ConfigurationError(
            f"{shape.kind} needs a torus side of at least {max(shape.extent) + shape.diameter:g} "
            f"(extent plus a margin of one diameter), got {grid.L:g}"
        )


def rasterize(shape, grid: TorusGrid) -> IndicatorField:
    """Indicator of ``shape`` sampled at cell centres (value 1 iff the centre is inside)."""
    _check_fits(shape, grid)
    inside = shape.contains(grid.points())
    return IndicatorField(grid, inside.astype(float))


def geometry(shape, L: float | None = None) -> ShapeGeometry:
    """Exact measure and perimeter. Periodic shapes are measured per torus of side L."""
    if isinstance(shape, Disk):
        n, R = shape.n, shape.R
        return ShapeGeometry(ball_volume(n) * R**n, n * ball_volume(n) * R ** (n - 1))
    if isinstance(shape, Rectangle):
        a = np.asarray(shape.half_widths)
        vol = float(np.prod(2.0 * a))
        faces = 2.0 * sum(vol / (2.0 * ai) for ai in a)
        return ShapeGeometry(vol, faces)
    if isinstance(shape, Polygon):
        v = np.asarray(shape.vertices) if shape.vertices else np.zeros((0, 2))
        if shape.degenerate:
            return ShapeGeometry(0.0, 0.0)
        edges = np.roll(v, -1, axis=0) - v
        return ShapeGeometry(abs(shape._signed_area()), float(np.sum(np.linalg.norm(edges, axis=1))))
    if L is None:
        raise DomainError(f"{shape.kind} geometry is defined per torus; pass L")
    if isinstance(shape, Slab):
        return ShapeGeometry(2.0 * shape.delta * L ** (shape.n - 1), 2.0 * L ** (shape.n - 1))
    if isinstance(shape, Checkerboard):
        k = L / shape.cell
        return ShapeGeometry(0.5 * L**shape.n, shape.n * k * L ** (shape.n - 1))
    raise DomainError(f"unsupported shape {shape!r}")


def isoperimetric_lower_bound(measure: float, n: int) -> float:
    """n omega_n^{1/n} |E|^{(n-1)/n}, the perimeter of the ball of the same measure."""
    return n * ball_volume(n) ** (1.0 / n) * measure ** ((n - 1) / n)


def rearranged_ball(shape, L: float | None = None) -> Disk:
    """The centred ball with the same measure as ``shape``."""
    n = shape.n
    vol = geometry(shape, L).measure
    if vol <= 0:
        raise DomainError("rearrangement of a null set")
    return Disk((vol / ball_volume(n)) ** (1.0 / n), n)


def analytic_spectrum(shape, xi):
    """Fourier transform of the indicator at frequencies ``xi`` (last axis n).

    Symmetric (2 pi)^{-n/2} convention. For slabs the transform of the normal
    profile is returned (a per-unit-area quantity; the transverse factor is a
    Dirac mass).
    """
    xi = np.asarray(xi, dtype=float)
    if isinstance(shape, Slab):
        k = xi[..., shape.axis] if xi.ndim and xi.shape[-1] == shape.n else xi
        val = (2.0 * np.pi) ** -0.5 * 2.0 * shape.delta * np.sinc(shape.delta * k / np.pi)
        return val * np.exp(-1j * k * shape.center[shape.axis])
    n = shape.n if isinstance(shape, (Disk, Rectangle)) else None
    if n is None:
        raise DomainError(f"no analytic spectrum for {shape.kind}")
    if n == 1 and (xi.ndim == 0 or xi.shape[-1] != 1):
        xi = xi[..., None]
    if xi.shape[-1] != n:
        raise DomainError(f"frequency vectors must have {n} components")
    phase = np.exp(-1j * (xi @ np.asarray(shape.center)))
    if isinstance(shape, Rectangle):
        a = np.asarray(shape.half_widths)
        val = (2.0 * np.pi) ** (-n / 2) * np.prod(2.0 * a * np.sinc(a * xi / np.pi), axis=-1)
        return val * phase
    rho = np.linalg.norm(xi, axis=-1)
    return _ball_spectrum(rho, shape.R, n) * phase


def _ball_spectrum(rho, R, n):
    rho = np.asarray(rho, dtype=float)
    if n == 1:
        return (2.0 * np.pi) ** -0.5 * 2.0 * R * np.sinc(R * rho / np.pi)
    if n == 2:
        x = R * rho
        small = x < 1e-8
        safe = np.where(small, 1.0, x)
        return np.where(small, 0.5 * R * R, R * R * bessel_j(1, safe) / safe)
    x = R * rho
    small = x < 1e-3
    safe = np.where(small, 1.0, x)
    big = (np.sin(safe) - safe * np.cos(safe)) / safe**3
    series = 1.0 / 3.0 - x * x / 30.0
    return (2.0 * np.pi) ** -1.5 * 4.0 * np.pi * R**3 * np.where(small, series, big)


# ---------------------------------------------------------------------------
# angularly integrated spectra


@dataclass(frozen=True, eq=False)
class RadialSpectrum:
    """Quadrature data for integrals of |chi_hat|^2 against radial multipliers.

    ``density`` holds Theta(rho) = int_{|xi| = rho} |chi_hat|^2 dH^{n-1} at the
    Gauss ``nodes`` on [0, rho_cut]. Beyond ``rho_cut`` the mean high
    frequency law Theta(rho) ~ perimeter / (pi rho^2) is used in closed form,
    which holds for every set with a piecewise smooth boundary.
    """

    n: int
    nodes: np.ndarray
    weights: np.ndarray
    density: np.ndarray
    rho_cut: float
    measure: float
    perimeter: float

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, self.density * values))


def _radial_rule(length_scale, rho_cut, m=16):
    # panels of a quarter oscillation period of sin(length_scale * rho)
    npan = int(math.ceil(rho_cut * 2.0 * length_scale / math.pi))
    breaks = np.linspace(0.0, rho_cut, npan + 1)
    # grading toward rho = 0 resolves multipliers such as e^{-t rho^2} at large t
    breaks = np.concatenate([breaks, geometric_breaks(0.0, breaks[1], 30, 0.5)])
    return composite_rule(breaks, m)


@lru_cache(maxsize=64)
def _disk_radial(R, n, cut):
    rho_cut = cut / R
    rho, w = _radial_rule(R, rho_cut)
    f = _ball_spectrum(rho, R, n)
    if n == 1:
        dens = 2.0 * f * f
    elif n == 2:
        dens = 2.0 * np.pi * rho * f * f
    else:
        dens = 4.0 * np.pi * rho * rho * f * f
    g = geometry(Disk(R, n))
    return RadialSpectrum(n, rho, w, dens, rho_cut, g.measure, g.perimeter)


@lru_cache(maxsize=64)
def _rect_radial(a, cut):
    a1, a2 = a
    amax = max(a1, a2)
    rho_cut = cut / amax
    rho, w = _radial_rule(amax, rho_cut)
    gx, gw = _leggauss(12)
    dens = _kernels.rect_density(rho, a1, a2, gx, gw)
    g = geometry(Rectangle(a))
    return RadialSpectrum(2, rho, w, dens, rho_cut, g.measure, g.perimeter)


def radial_spectrum(shape, cut: float | None = None) -> RadialSpectrum:
    """Angularly integrated spectrum of a disk, rectangle or slab.

    ``cut`` is the dimensionless truncation rho_cut times the largest size
    parameter. Slabs return the 1-D data of the normal profile, so derived
    energies are per unit interface area.
    """
    if isinstance(shape, Disk):
        return _disk_radial(float(shape.R), shape.n, float(cut or 4000.0))
    if isinstance(shape, Rectangle):
        if shape.n == 1:
            return _disk_radial(float(shape.half_widths[0]), 1, float(cut or 4000.0))
        if shape.n != 2:
            raise DomainError("angular spectra of boxes are implemented for n <= 2")
        return _rect_radial(tuple(shape.half_widths), float(cut or 800.0))
    if isinstance(shape, Slab):
        return _disk_radial(float(shape.delta), 1, float(cut or 4000.0))
    raise DomainError(f"no analytic spectrum for {shape.kind}")
