"""Special functions and the scalar constants of the theory.

Every constant is available in two independent ways: a closed form built on
:func:`gamma_fn` and a direct quadrature of its defining integral. The
:class:`ConstantsTable` keeps both and reports how far apart they are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from ._errors import DomainError, NumericalError

__all__ = [
    "gamma_fn",
    "log_gamma",
    "beta_fn",
    "beta_trig_integral",
    "bessel_j",
    "sphere_area",
    "ball_volume",
    "cns_constant",
    "slab_constant",
    "poisson_normalization",
    "gamma_limit_constant",
    "printed_gamma_candidates",
    "halfspace_moment_closed_form",
    "radial_power_integral",
    "radial_power_integral_quad",
    "ConstantEntry",
    "ConstantsTable",
]

# Lanczos approximation, g = 7, 9 terms (relative accuracy ~1e-15).
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_sum(z):
    # z is the shifted argument x - 1
    acc = _LANCZOS_COEF[0]
    for k in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[k] / (z + k)
    return acc


def _check_pole(x):
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"Gamma has a pole at non-positive integer {x}")


def gamma_fn(x: float) -> float:
    """Euler's Gamma function for real ``x`` (not a non-positive integer).

    Lanczos approximation on x >= 1/2 and the reflection formula below it.
    Overflows to ``inf`` beyond x ~ 171 like ``math.gamma``.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("gamma_fn requires a finite argument")
    _check_pole(x)
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    if x > 100.0:
        lg = log_gamma(x)
        return math.exp(lg) if lg < 709.0 else math.inf
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return _SQRT_2PI * t ** (z + 0.5) * math.exp(-t) * _lanczos_sum(z)


def log_gamma(x: float) -> float:
    """log Gamma(x) for x > 0."""
    x = float(x)
    if x <= 0:
        raise DomainError("log_gamma is only provided for x > 0")
    if x < 0.5:
        return math.log(math.pi / (math.sin(math.pi * x))) - log_gamma(1.0 - x)
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (z + 0.5) * math.log(t) - t + math.log(_lanczos_sum(z))


def beta_fn(x: float, y: float) -> float:
    """Euler's Beta function B(x, y) = Gamma(x)Gamma(y)/Gamma(x+y), x, y > 0."""
    if x <= 0 or y <= 0:
        raise DomainError(f"beta_fn requires positive arguments, got ({x}, {y})")
    if x + y < 100.0:
        return gamma_fn(x) * gamma_fn(y) / gamma_fn(x + y)
    return math.exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y))


def beta_trig_integral(x: float, y: float) -> float:
    """B(x, y) from its trigonometric definition 2 int_0^{pi/2} cos^{2x-1} sin^{2y-1}.

    Independent of :func:`gamma_fn`; used as an oracle.
    """
    if x <= 0 or y <= 0:
        raise DomainError("beta_trig_integral requires positive arguments")
    # QAWS takes the algebraic endpoint factors; what remains is smooth
    p, q = 2 * y - 1, 2 * x - 1
    half_pi = 0.5 * math.pi

    def smooth(th):
        left = math.sin(th) / th if th > 0 else 1.0
        right = math.cos(th) / (half_pi - th) if th < half_pi else 1.0
        return left**p * right**q

    val, _ = integrate.quad(smooth, 0.0, half_pi, weight="alg", wvar=(p, q), epsabs=0, epsrel=1e-13)
    return 2.0 * val


def bessel_j(order: int, x):
    """Bessel function of the first kind J_0 or J_1 for x >= 0.

    Backed by the Cephes routines in :mod:`scipy.special`. Accepts scalars or
    arrays.
    """
    if order not in (0, 1):
        raise DomainError(f"bessel_j supports orders 0 and 1, got {order}")
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise DomainError("bessel_j expects x >= 0")
    out = special.j0(xa) if order == 0 else special.j1(xa)
    return float(out) if np.ndim(x) == 0 else out


def sphere_area(k: int) -> float:
    """Surface measure of the unit k-sphere S^k in R^{k+1}.

    sphere_area(0) = 2 (two points), sphere_area(1) = 2 pi, sphere_area(2) = 4 pi.
    """
    if k < 0:
        raise DomainError("sphere dimension must be >= 0")
    return 2.0 * math.pi ** ((k + 1) / 2) / gamma_fn((k + 1) / 2)


def ball_volume(n: int) -> float:
    """Lebesgue measure of the unit ball of R^n."""
    if n < 0:
        raise DomainError("dimension must be >= 0")
    return math.pi ** (n / 2) / gamma_fn(n / 2 + 1)


def _check_order(s, lo=0.0, hi=1.0):
    if not (lo < s < hi):
        raise DomainError(f"fractional order s={s} outside ({lo}, {hi})")


def radial_power_integral(k: int, b: float, a: float) -> float:
    """Closed form of int_{R^k} |x|^b (1 + |x|^2)^{-a/2} dx.

    Equals sphere_area(k-1) / 2 * B((b+k)/2, (a-b-k)/2); requires b > -k and
    a > k + b.
    """
    if k < 1 or not (b > -k) or not (a > k + b):
        raise DomainError(f"radial_power_integral needs k>=1, b>-k, a>k+b; got {(k, b, a)}")
    return 0.5 * sphere_area(k - 1) * beta_fn((b + k) / 2, (a - b - k) / 2)


def radial_power_integral_quad(k: int, b: float, a: float) -> float:
    """Same integral as :func:`radial_power_integral` by direct radial quadrature."""
    if k < 1 or not (b > -k) or not (a > k + b):
        raise DomainError(f"radial_power_integral needs k>=1, b>-k, a>k+b; got {(k, b, a)}")
    p = b + k - 1

    def f(r):
        return r**p * (1.0 + r * r) ** (-a / 2)

    lo, e1 = integrate.quad(f, 0.0, 1.0, limit=200, epsabs=0, epsrel=1e-13)
    # rho -> 1/u maps [1, inf) onto (0, 1]
    q = a - b - k - 1

    def g(u):
        return u**q * (1.0 + u * u) ** (-a / 2)

    hi, e2 = integrate.quad(g, 0.0, 1.0, limit=200, epsabs=0, epsrel=1e-13)
    return sphere_area(k - 1) * (lo + hi)


def cns_constant(n: int, s: float, method: str = "closed") -> float:
    """Normalisation C_{n,s} of the fractional Laplacian.

    C_{n,s} = (int_{R^n} (1 - cos h_1) / |h|^{n+2s} dh)^{-1}

    ``method="closed"`` uses s 4^s Gamma(n/2+s) / (pi^{n/2} Gamma(1-s));
    ``method="quadrature"`` integrates the definition: the transverse
    directions reduce to :func:`radial_power_integral_quad` and the remaining
    one-dimensional integral is split at |h| = 1 with an oscillatory
    (QAWF) tail.
    """
    if n < 1:
        raise DomainError("dimension must be >= 1")
    _check_order(s)
    if method == "closed":
        return s * 4.0**s * gamma_fn(n / 2 + s) / (math.pi ** (n / 2) * gamma_fn(1.0 - s))
    if method != "quadrature":
        raise DomainError(f"unknown method {method!r}")
    inner, err_in = integrate.quad(
        lambda h: 2.0 * math.sin(0.5 * h) ** 2 * h ** (-1.0 - 2.0 * s),
        0.0,
        1.0,
        limit=200,
        epsabs=0,
        epsrel=1e-13,
    )
    osc, err_osc = integrate.quad(
        lambda h: h ** (-1.0 - 2.0 * s), 1.0, np.inf, weight="cos", wvar=1.0, limlst=200
    )
    one_d = 2.0 * (inner + 1.0 / (2.0 * s) - osc)
    err = 2.0 * (err_in + err_osc)
    if not math.isfinite(one_d) or one_d <= 0 or err > 1e-7 * one_d:
        raise NumericalError("C_{n,s} quadrature did not converge", residual=err)
    transverse = 1.0 if n == 1 else radial_power_integral_quad(n - 1, 0.0, n + 2.0 * s)
    return 1.0 / (transverse * one_d)


def slab_constant(n: int, method: str = "closed") -> float:
    """c_n = int_{R^{n-1}} (1 + |x|^2)^{-(n+1)/2} dx (c_1 = 1 by convention)."""
    if n < 1:
        raise DomainError("dimension must be >= 1")
    if n == 1:
        return 1.0
    if method == "closed":
        return radial_power_integral(n - 1, 0.0, n + 1.0)
    return radial_power_integral_quad(n - 1, 0.0, n + 1.0)


def poisson_normalization(n: int, method: str = "closed") -> float:
    """kappa_n making kappa_n t / (|z|^2 + t^2)^{(n+1)/2} a unit-mass kernel."""
    if n < 1:
        raise DomainError("dimension must be >= 1")
    if method == "closed":
        return gamma_fn((n + 1) / 2) / math.pi ** ((n + 1) / 2)
    mass = radial_power_integral_quad(n, 0.0, n + 1.0)
    return 1.0 / mass


def halfspace_moment_closed_form(s: float) -> float:
    """First absolute half-moment of the unit-time 1-D marginal kernel.

    int_0^inf z p_1(z) dz = Gamma(1 - 1/(2s)) / pi, finite for s > 1/2. This
    is the energy per unit interface area of a flat interface divided by
    t^{1/(2s)}.
    """
    if not (0.5 < s < 1.0):
        raise DomainError("the half-moment is finite only for s in (1/2, 1)")
    return gamma_fn(1.0 - 1.0 / (2.0 * s)) / math.pi


def _halfspace_moment_quad(s):
    # (1/pi) int_0^inf (1 - exp(-r^{2s})) / r^2 dr
    f = lambda r: -math.expm1(-(r ** (2 * s))) / (r * r)
    a, e1 = integrate.quad(f, 0.0, 1.0, limit=200, epsabs=0, epsrel=1e-13)
    b, e2 = integrate.quad(f, 1.0, np.inf, limit=200, epsabs=0, epsrel=1e-13)
    return (a + b) / math.pi


def printed_gamma_candidates(n: int, s: float) -> dict:
    """The two super-critical limit constants as they appear in print.

    ``main`` is Gamma(1 - 1/(2s)) / (2 pi); ``corollary`` is
    (2 pi)^{n-2} Gamma(1 - 1/(2s)).
    """
    if not (0.5 < s < 1.0):
        raise DomainError("printed candidates exist only for s in (1/2, 1)")
    g = gamma_fn(1.0 - 1.0 / (2.0 * s))
    return {"main": g / (2.0 * math.pi), "corollary": (2.0 * math.pi) ** (n - 2) * g}


def gamma_limit_constant(n: int, s: float, kernel_normalized: bool = True) -> float:
    """Energy per unit interface area in the regime s >= 1/2.

    For s > 1/2 this is the flat-interface rate Gamma(1 - 1/(2s)) / pi. For
    s = 1/2 it is c_n (raw kernel) or c_n * kappa_n = 1/pi (unit-mass kernel).
    """
    if n < 2:
        raise DomainError("gamma_limit_constant is defined for n >= 2")
    if not (0.5 <= s < 1.0):
        raise DomainError(f"gamma_limit_constant needs s in [1/2, 1), got {s}")
    if s == 0.5:
        c = slab_constant(n)
        return c * poisson_normalization(n) if kernel_normalized else c
    return halfspace_moment_closed_form(s)


@dataclass(frozen=True)
class ConstantEntry:
    """One constant with both provenances."""

    closed_form: float
    quadrature: float
    preferred: str = "closed-form"

    @property
    def value(self) -> float:
        return self.closed_form if self.preferred == "closed-form" else self.quadrature

    @property
    def rel_diff(self) -> float:
        return abs(self.closed_form - self.quadrature) / abs(self.quadrature)

    def to_dict(self):
        return {
            "value": self.value,
            "closed_form": self.closed_form,
            "quadrature": self.quadrature,
            "preferred": self.preferred,
            "rel_diff": self.rel_diff,
        }


@dataclass(frozen=True)
class ConstantsTable:
    """All scalar constants for one (n, s).

    ``gamma_ns`` is the factor in front of the limit functional: C_{n,s}
    for s < 1/2 (in front of the fractional perimeter), c_n kappa_n for
    s = 1/2 and the flat-interface rate for s > 1/2 (in front of the
    perimeter).
    """

    n: int
    s: float
    C_ns: ConstantEntry
    gamma_ns: ConstantEntry
    c_n: ConstantEntry
    kappa_n: ConstantEntry
    notes: dict = field(default_factory=dict)

    @classmethod
    def build(cls, n: int, s: float) -> "ConstantsTable":
        if n < 1:
            raise DomainError("dimension must be >= 1")
        _check_order(s)
        C = ConstantEntry(cns_constant(n, s), cns_constant(n, s, "quadrature"))
        c_n = ConstantEntry(slab_constant(n), slab_constant(n, "quadrature"))
        kappa = ConstantEntry(poisson_normalization(n), poisson_normalization(n, "quadrature"))
        notes = {}
        if s < 0.5:
            gam = C
            notes["gamma_ns"] = "C_ns (limit multiplies the 2s-fractional perimeter)"
        elif s == 0.5:
            gam = ConstantEntry(c_n.closed_form * kappa.closed_form, c_n.quadrature * kappa.quadrature)
            notes["gamma_ns"] = "c_n * kappa_n (unit-mass kernel); raw kernel uses c_n"
        else:
            gam = ConstantEntry(halfspace_moment_closed_form(s), _halfspace_moment_quad(s))
            cand = printed_gamma_candidates(n, s)
            notes["gamma_ns"] = "flat-interface rate Gamma(1-1/(2s))/pi"
            notes["printed_main"] = cand["main"]
            notes["printed_corollary"] = cand["corollary"]
        return cls(n=n, s=s, C_ns=C, gamma_ns=gam, c_n=c_n, kappa_n=kappa, notes=notes)

    def entries(self):
        return {"C_ns": self.C_ns, "gamma_ns": self.gamma_ns, "c_n": self.c_n, "kappa_n": self.kappa_n}

    def max_rel_diff(self) -> float:
        return max(e.rel_diff for e in self.entries().values())

    def to_dict(self):
        out = {"n": self.n, "s": self.s}
        for k, e in self.entries().items():
            out[k.lower()] = e.to_dict()
        out["notes"] = dict(self.notes)
        return out
