"""A compact invariant suite spanning every module, used by ``fracheat selftest``.

Each check yields one line ``PASS|FAIL <name> <value> <tolerance>``. The
suite is deterministic, so repeated runs give byte-identical reports.
"""

from __future__ import annotations

import math

import numpy as np


def _checks():
    from .asymptotics import constant_disambiguation, fit_gamma_limit, riesz_isoperimetric_check
    from .energy import (
        EnergyCurve,
        energy_direct_quad_half,
        energy_from_spectrum,
        slab_energy_exact,
        slab_energy_quad,
    )
    from .kernel import kernel_mass, radial_profile
    from .perimeter import (
        frac_perimeter_direct,
        frac_perimeter_spectral,
        frac_perimeter_subordination,
        interval_frac_perimeter,
        perimeter_grid,
    )
    from .shapes import Disk, radial_spectrum, rasterize, square
    from .specialfn import cns_constant, gamma_fn, poisson_normalization, slab_constant
    from .spectral import (
        TorusGrid,
        evolve_semigroup,
        gaussian_field,
        hs_norm_squared,
        l2_norm_squared,
    )

    # specialfn
    yield "gamma(1/2) = sqrt(pi)", abs(gamma_fn(0.5) / math.sqrt(math.pi) - 1.0), 1e-13
    yield "C_{2,1/4} closed vs quadrature", abs(cns_constant(2, 0.25) / cns_constant(2, 0.25, "quadrature") - 1.0), 1e-8
    yield "c_2 kappa_2 = 1/pi", abs(slab_constant(2) * poisson_normalization(2) * math.pi - 1.0), 1e-12

    # kernel
    yield "kernel mass n=2 s=0.5", abs(kernel_mass(1.0, 2, 0.5) - 1.0), 1e-6
    yield "kernel mass n=1 s=0.75", abs(kernel_mass(0.3, 1, 0.75) - 1.0), 1e-6
    lam, r = 2.0, np.array([0.3, 1.1])
    lhs = radial_profile(lam * r, lam ** (2 * 0.4) * 0.7, 2, 0.4)
    rhs = lam**-2 * radial_profile(r, 0.7, 2, 0.4)
    yield "kernel scaling law", float(np.max(np.abs(lhs / rhs - 1.0))), 1e-8

    # spectral
    grid = TorusGrid(2, 16.0, 128)
    g = gaussian_field(grid)
    real = float(np.sum(g.values**2) * grid.cell_volume)
    yield "discrete Plancherel", abs(l2_norm_squared(g) / real - 1.0), 1e-12
    u0 = rasterize(Disk(1.0), TorusGrid(2, 8.0, 128))
    norms = [(l2_norm_squared(evolve_semigroup(u0, t, 0.3)), hs_norm_squared(evolve_semigroup(u0, t, 0.3), 0.3)) for t in np.linspace(0.0, 1.0, 6)]
    rise = max(max(b[0] - a[0], b[1] - a[1]) for a, b in zip(norms, norms[1:]))
    yield "flow norms non-increasing", max(rise, 0.0), 1e-10

    # shapes
    rs = radial_spectrum(Disk(1.0))
    mass = rs.integrate(np.ones_like(rs.nodes)) + rs.perimeter / (math.pi * rs.rho_cut)
    yield "disk spectrum Plancherel", abs(mass / math.pi - 1.0), 1e-8

    # energy
    yield "slab closed form vs quadrature", abs(slab_energy_exact(1.0, 0.01) / slab_energy_quad(1.0, 0.01) - 1.0), 1e-8
    sp = energy_from_spectrum(Disk(1.0), 0.1, 0.5)
    yield "disk energy spectral vs direct", abs(energy_direct_quad_half(Disk(1.0), 0.1) / sp - 1.0), 1e-2

    # perimeter
    d = frac_perimeter_direct(Disk(1.0), 0.25)
    yield "P_{1/2}(disk) direct vs spectral", abs(frac_perimeter_spectral(Disk(1.0), 0.25) / d - 1.0), 2e-2
    sq = square(math.sqrt(math.pi))
    yield "P_{1/2}(square) subordination vs direct", abs(frac_perimeter_subordination(sq, 0.25) / frac_perimeter_direct(sq, 0.25) - 1.0), 2e-2
    yield "interval P_{2s} closed vs direct", abs(frac_perimeter_direct(Disk(1.0, 1), 0.3) / interval_frac_perimeter(2.0, 0.3) - 1.0), 1e-8
    cell_grid = TorusGrid(2, 4.0, 64)
    u = rasterize(square(1.0), cell_grid)
    sym = abs(frac_perimeter_direct(u, 0.25) - frac_perimeter_direct(u.complement(), 0.25))
    yield "complement symmetry (cell pairs)", sym, 1e-10
    yield "grid perimeter of aligned square", abs(perimeter_grid(u) - 4.0), 1e-12

    # asymptotics
    ts = [0.1 * 2.0**-k for k in range(6)]
    synth = EnergyCurve(0.25, 2, "synthetic", [(t, 3.0 * t, t, 3.0) for t in ts])
    yield "fit recovers E = 3t", abs(fit_gamma_limit(synth).limit - 3.0), 1e-10
    rep = riesz_isoperimetric_check(sq, 0.5, [0.1, 0.01, 0.001])
    yield "rearrangement defect >= 0", max(-min(rep.details["energy_defects"]), 0.0), 1e-9
    cd = constant_disambiguation(2, 0.75, strict=False)
    yield "halfspace moment vs closed form", cd["derived_rel_error"], 1e-6


def run_selftest():
    lines = []
    ok = True
    for name, value, tol in _checks():
        passed = bool(value <= tol)
        ok &= passed
        lines.append(f"{'PASS' if passed else 'FAIL'} {name}: {value:.3e} (tol {tol:.0e})")
    return lines, ok
