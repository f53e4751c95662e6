"""The fractional heat kernel P^s(z, t).

The kernel is the inverse Fourier transform of (2 pi)^{-n/2} exp(-t |xi|^{2s})
under the symmetric convention, i.e. the rotationally invariant 2s-stable
density. Only s = 1/2 has an elementary closed form (the Poisson kernel);
everywhere else it is obtained by a radial inverse transform evaluated with a
panel Gauss rule whose breakpoints follow the half-periods of the
oscillating factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from ._errors import DomainError, NumericalError
from ._quad import composite_rule, geometric_breaks
from .specialfn import poisson_normalization, sphere_area

__all__ = [
    "FractionalOrder",
    "KernelSpec",
    "fourier_multiplier",
    "poisson_explicit",
    "poisson_radial",
    "radial_profile",
    "radial_derivative",
    "marginal_1d",
    "far_field_coefficients",
    "far_field_series",
    "tail_mass",
    "kernel_mass",
    "decay_sandwich",
    "gradient_bound_ratio",
    "poisson_semigroup_defect",
]

# exp(-LOG_CUT) = 1e-14: where the spectral integrand is truncated
LOG_CUT = 14.0 * math.log(10.0)


@dataclass(frozen=True)
class FractionalOrder:
    """A fractional order s in (0, 1) with its regime relative to 1/2."""

    s: float

    def __post_init__(self):
        if not (0.0 < self.s < 1.0):
            raise DomainError(f"fractional order must lie in (0, 1), got {self.s}")

    @property
    def regime(self) -> str:
        if self.s < 0.5:
            return "sub"
        if self.s == 0.5:
            return "critical"
        return "super"


@dataclass(frozen=True)
class KernelSpec:
    """Dimension, order and normalisation of a heat kernel.

    ``normalized=False`` only changes anything at s = 1/2, where it selects the
    raw kernel t / (|z|^2 + t^2)^{(n+1)/2} whose mass is 1/kappa_n.
    """

    n: int
    s: float
    normalized: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("dimension must be >= 1")
        FractionalOrder(self.s)

    @property
    def order(self) -> FractionalOrder:
        return FractionalOrder(self.s)

    @property
    def mass(self) -> float:
        if self.normalized or self.s != 0.5:
            return 1.0
        return 1.0 / poisson_normalization(self.n)


def _check_t(t):
    if not t > 0:
        raise DomainError(f"time must be positive, got {t}")


def fourier_multiplier(xi_norm, t: float, s: float, n: int):
    """Fourier transform of P^s(., t) at |xi| = xi_norm: (2 pi)^{-n/2} exp(-t |xi|^{2s})."""
    _check_t(t)
    FractionalOrder(s)
    xi = np.asarray(xi_norm, dtype=float)
    out = (2.0 * np.pi) ** (-n / 2) * np.exp(-t * xi ** (2.0 * s))
    return float(out) if out.ndim == 0 else out


def poisson_radial(r, t: float, n: int, normalized: bool = True):
    """The s = 1/2 kernel as a function of |z|."""
    _check_t(t)
    r = np.asarray(r, dtype=float)
    kappa = poisson_normalization(n) if normalized else 1.0
    out = kappa * t / (r * r + t * t) ** ((n + 1) / 2)
    return float(out) if out.ndim == 0 else out


def poisson_explicit(z, t: float, spec: KernelSpec):
    """Closed-form kernel at s = 1/2 for points ``z`` (last axis of length n, or scalars for n = 1)."""
    if spec.s != 0.5:
        raise DomainError("the explicit kernel exists only for s = 1/2")
    z = np.asarray(z, dtype=float)
    if spec.n == 1 and (z.ndim == 0 or z.shape[-1] != 1):
        r = np.abs(z)
    else:
        if z.shape[-1] != spec.n:
            raise DomainError(f"points must have last dimension {spec.n}")
        r = np.sqrt(np.sum(z * z, axis=-1))
    return poisson_radial(r, t, spec.n, spec.normalized)


def _spectral_cutoff(t, s):
    return (LOG_CUT / t) ** (1.0 / (2.0 * s))


def _radial_rule(r, t, s, m=16):
    """Panels on [0, rho_max] split at half-periods of the oscillation in rho."""
    rho_max = _spectral_cutoff(t, s)
    breaks = [np.linspace(0.0, rho_max, 65)]
    if r > 0:
        breaks.append(np.arange(0.0, rho_max, np.pi / r))
        first = min(rho_max / 64.0, np.pi / r)
    else:
        first = rho_max / 64.0
    # exp(-t rho^{2s}) has a rho^{2s} cusp at the origin
    breaks.append(geometric_breaks(0.0, first, levels=30, ratio=0.5))
    return composite_rule(np.concatenate(breaks), m)


def _radial_one(r, t, n, s, deriv=False):
    rho, w = _radial_rule(r, t, s)
    damp = np.exp(-t * rho ** (2.0 * s))
    if n == 1:
        if deriv:
            return -np.dot(w, damp * rho * np.sin(r * rho)) / np.pi
        return np.dot(w, damp * np.cos(r * rho)) / np.pi
    if n == 2:
        if deriv:
            return -np.dot(w, damp * rho * rho * special.j1(r * rho)) / (2.0 * np.pi)
        return np.dot(w, damp * rho * special.j0(r * rho)) / (2.0 * np.pi)
    if n == 3:
        if r == 0.0:
            if deriv:
                return 0.0
            return np.dot(w, damp * rho * rho) / (2.0 * np.pi**2)
        sin_part = np.dot(w, damp * rho * np.sin(r * rho)) / (2.0 * np.pi**2 * r)
        if not deriv:
            return sin_part
        cos_part = np.dot(w, damp * rho * rho * np.cos(r * rho)) / (2.0 * np.pi**2 * r)
        return cos_part - sin_part / r
    raise DomainError("radial inversion is implemented for n in {1, 2, 3}")


def radial_profile(r, t: float, n: int, s: float):
    """P^s(z, t) at |z| = r by radial inverse Fourier transform.

    n = 1: (1/pi) int_0^inf e^{-t rho^{2s}} cos(r rho) d rho
    n = 2: (1/(2 pi)) int_0^inf e^{-t rho^{2s}} J_0(r rho) rho d rho
    n = 3: (1/(2 pi^2 r)) int_0^inf e^{-t rho^{2s}} sin(r rho) rho d rho

    The integrals are truncated where the exponential drops below 1e-14.
    """
    _check_t(t)
    FractionalOrder(s)
    if n not in (1, 2, 3):
        raise DomainError("radial inversion is implemented for n in {1, 2, 3}")
    ra = np.asarray(r, dtype=float)
    if np.any(ra < 0):
        raise DomainError("radius must be non-negative")
    out = np.array([_radial_one(float(x), t, n, s) for x in ra.ravel()]).reshape(ra.shape)
    if not np.all(np.isfinite(out)):
        raise NumericalError("radial inversion produced non-finite values")
    return float(out) if out.ndim == 0 else out


def radial_derivative(r, t: float, n: int, s: float):
    """d/dr of :func:`radial_profile`."""
    _check_t(t)
    FractionalOrder(s)
    ra = np.asarray(r, dtype=float)
    out = np.array([_radial_one(float(x), t, n, s, deriv=True) for x in ra.ravel()]).reshape(ra.shape)
    return float(out) if out.ndim == 0 else out


def marginal_1d(z, t: float, s: float):
    """Marginal of the n-dimensional kernel along one coordinate.

    It does not depend on n: p_t(z) = (1/pi) int_0^inf e^{-t r^{2s}} cos(z r) dr,
    an even probability density on the line.
    """
    return radial_profile(np.abs(np.asarray(z, dtype=float)), t, 1, s)


def far_field_coefficients(t: float, n: int, s: float, terms: int = 12):
    """Coefficients a_k of P^s(r, t) ~ sum_k a_k r^{-n-2ks} for large r.

    Term-by-term inversion of the expanded multiplier; a_k is
    (-t)^k / k! * 4^{ks} Gamma((n+2ks)/2) / (pi^{n/2} Gamma(-ks)). The series
    converges for s < 1/2 and is asymptotic for s > 1/2.
    """
    k = np.arange(1, terms + 1, dtype=float)
    alpha = 2.0 * k * s
    c = 2.0**alpha * special.gamma((n + alpha) / 2) * special.rgamma(-alpha / 2) / np.pi ** (n / 2)
    return (-t) ** k / special.factorial(k) * c, alpha


def _truncate_asymptotic(terms_vals):
    # stop at the smallest term of an asymptotic series
    mags = np.abs(terms_vals)
    last = np.inf
    for i, m in enumerate(mags):
        if m == 0.0:
            continue  # poles of Gamma(-ks) give vanishing terms
        if m > last:
            return i
        last = m
    return len(mags)


def far_field_series(r, t: float, n: int, s: float, terms: int = 12):
    """Large-|z| expansion of the kernel (see :func:`far_field_coefficients`)."""
    a, alpha = far_field_coefficients(t, n, s, terms)
    ra = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.empty_like(ra)
    for i, x in enumerate(ra):
        vals = a * x ** (-n - alpha)
        out[i] = vals[: _truncate_asymptotic(vals)].sum()
    return float(out[0]) if np.ndim(r) == 0 else out


def tail_mass(R: float, t: float, n: int, s: float, terms: int = 12) -> float:
    """Kernel mass outside the ball of radius R from the far-field series."""
    a, alpha = far_field_coefficients(t, n, s, terms)
    vals = sphere_area(n - 1) * a * R ** (-alpha) / alpha
    return float(vals[: _truncate_asymptotic(vals)].sum())


def _far_radius(t, s, x=None):
    # radius where t r^{-2s} = x, never inside the kernel core
    if x is None:
        x = 0.2 if s < 0.5 else 0.05  # the series converges below s = 1/2
    return max((t / x) ** (1.0 / (2.0 * s)), 8.0 * t ** (1.0 / (2.0 * s)))


def kernel_mass(t: float, n: int, s: float, m: int = 16) -> float:
    """int_{R^n} P^s(z, t) dz by radial quadrature plus the far-field tail."""
    scale = t ** (1.0 / (2.0 * s))
    R = _far_radius(t, s)
    breaks = np.concatenate([[0.0], scale * np.logspace(-3, 0, 13), np.geomspace(scale, R, 40)])
    r, w = composite_rule(breaks, m)
    vals = radial_profile(r, t, n, s)
    inner = sphere_area(n - 1) * np.dot(w, r ** (n - 1) * vals)
    return float(inner + tail_mass(R, t, n, s))


def decay_sandwich(n: int, s: float, radii=None):
    """Empirical bounds of P^s(z, 1) / min(|z|^{-n-2s}, 1).

    Returns ``(min_ratio, max_ratio)``; both finite and positive is the
    two-sided decay estimate.
    """
    if radii is None:
        radii = np.geomspace(0.01, 100.0, 41)
    radii = np.asarray(radii, dtype=float)
    p = radial_profile(radii, 1.0, n, s)
    ref = np.minimum(radii ** (-n - 2.0 * s), 1.0)
    ratio = p / ref
    return float(ratio.min()), float(ratio.max())


def gradient_bound_ratio(t: float, n: int, s: float, points: int = 60) -> float:
    """sup_r |d_r P^s(r, t)| t^{1/(2s)} / P^s(r, t) over r in (0, 50 t^{1/(2s)}]."""
    scale = t ** (1.0 / (2.0 * s))
    r = scale * np.geomspace(1e-3, 50.0, points)
    p = radial_profile(r, t, n, s)
    dp = radial_derivative(r, t, n, s)
    return float(np.max(np.abs(dp) * scale / p))


def poisson_semigroup_defect(z: float, t1: float, t2: float) -> float:
    """|(P(., t1) * P(., t2))(z) - P(z, t1 + t2)| for the 1-D s = 1/2 kernel.

    The convolution is evaluated in real space by adaptive quadrature.
    """
    f = lambda y: poisson_radial(z - y, t1, 1) * poisson_radial(y, t2, 1)
    pts = sorted({0.0, z})
    a, b = pts[0], pts[-1]
    left, _ = integrate.quad(f, -np.inf, a, epsabs=1e-13, epsrel=1e-12, limit=400)
    mid = integrate.quad(f, a, b, epsabs=1e-13, epsrel=1e-12, limit=400)[0] if b > a else 0.0
    right, _ = integrate.quad(f, b, np.inf, epsabs=1e-13, epsrel=1e-12, limit=400)
    return abs(left + mid + right - poisson_radial(z, t1 + t2, 1))
