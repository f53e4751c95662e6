"""The thirteen acceptance criteria, each at its stated tolerance.

Every test records a one-line verdict; ``conftest.py`` prints them in the
terminal summary, and running this file directly prints them as well.
Criteria 5, 6 and 10 are expected to fail; the reasons are recorded in the
decision ledger and in the README.
"""

import math
import subprocess
import sys
import time

import numpy as np

from fracheat.asymptotics import (
    constant_disambiguation,
    fit_gamma_limit,
    gamma_limit_experiment,
    oscillation_experiment,
    riesz_isoperimetric_check,
    run_sweep,
)
from fracheat.energy import (
    energy_direct_quad_half,
    energy_from_spectrum,
    energy_identity_check,
    halfspace_rate,
    slab_energy_exact,
    slab_energy_quad,
)
from fracheat.kernel import decay_sandwich, kernel_mass, poisson_radial, radial_profile
from fracheat.perimeter import frac_perimeter_direct, frac_perimeter_spectral, frac_perimeter_subordination
from fracheat.shapes import Disk, rasterize, square
from fracheat.specialfn import cns_constant, gamma_fn, poisson_normalization, printed_gamma_candidates
from fracheat.spectral import (
    TorusGrid,
    evolve_spectrum,
    forward_transform,
    gagliardo_gaussian_check,
    hs_norm_squared,
    l2_norm_squared,
)

RESULTS = {}


def _record(k, ok, detail):
    line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[k] = line
    print(line)
    return ok


def test_criterion_01_slab_closed_form():
    rels = [abs(slab_energy_exact(1.0, t) / slab_energy_quad(1.0, t) - 1.0) for t in (1e-1, 1e-2, 1e-3, 1e-4)]
    t = 1e-6
    lead = slab_energy_exact(1.0, t) / (t * abs(math.log(t)))
    ok = max(rels) <= 1e-8 and abs(lead - 1.0) <= 0.05
    assert _record(1, ok, f"max rel vs dblquad {max(rels):.2e} (tol 1e-8); E/(t|log t|) at 1e-6 = {lead:.4f}")


def test_criterion_02_kernel_axioms():
    mass_err = max(abs(kernel_mass(1.0, n, s) - 1.0) for s in (0.25, 0.5, 0.75) for n in (1, 2))
    scale_err = 0.0
    r = np.array([0.05, 0.4, 1.3, 5.0])
    for n, s in [(1, 0.25), (2, 0.5), (2, 0.75)]:
        lam, t = 1.7, 0.3
        lhs = radial_profile(lam * r, lam ** (2 * s) * t, n, s)
        rhs = lam ** (-n) * radial_profile(r, t, n, s)
        scale_err = max(scale_err, float(np.max(np.abs(lhs / rhs - 1.0))))
    rr = np.array([0.0, 0.2, 1.0, 3.0, 10.0])
    inv_err = max(float(np.max(np.abs(radial_profile(rr, 0.5, n, 0.5) - poisson_radial(rr, 0.5, n)))) for n in (1, 2))
    sandwich = [decay_sandwich(n, s) for n in (1, 2) for s in (0.25, 0.75)]
    sand_ok = all(0 < lo <= hi < math.inf for lo, hi in sandwich)
    ok = mass_err <= 1e-5 and scale_err <= 1e-8 and inv_err <= 1e-6 and sand_ok
    assert _record(
        2, ok, f"mass err {mass_err:.1e}, scaling err {scale_err:.1e}, s=1/2 inversion err {inv_err:.1e}, sandwich ok={sand_ok}"
    )


def test_criterion_03_subcritical_gamma_limit():
    t0 = time.perf_counter()
    rep = gamma_limit_experiment(Disk(1.0), 0.25)
    oracle = cns_constant(2, 0.25, method="quadrature") * frac_perimeter_direct(Disk(1.0), 0.25)
    elapsed = time.perf_counter() - t0
    rel = abs(rep.estimate / oracle - 1.0)
    ok = rel <= 0.01 and elapsed <= 120
    assert _record(3, ok, f"fit {rep.estimate:.6f} vs C*P {oracle:.6f}, rel {rel:.1e} (tol 1e-2), {elapsed:.1f} s")


def test_criterion_04_critical_case():
    rep = gamma_limit_experiment(Disk(1.0), 0.5, [0.1 * 2.0**-k for k in range(10)])
    A = rep.estimate
    kappa = poisson_normalization(2, "quadrature")
    A_raw = A / kappa
    rel_n = abs(A / 2.0 - 1.0)
    rel_r = abs(A_raw / (4 * math.pi) - 1.0)
    ok = rel_n <= 0.05 and rel_r <= 0.05
    assert _record(4, ok, f"A = {A:.5f} vs 2 (rel {rel_n:.1e}); raw A = {A_raw:.5f} vs 4 pi (rel {rel_r:.1e}); tol 5e-2")


def test_criterion_05_supercritical_gamma_limit():
    curve = run_sweep(Disk(1.0), 0.75)
    est = fit_gamma_limit(curve)
    target = gamma_fn(1.0 / 3.0)
    rel = abs(est.limit / target - 1.0)
    cand = printed_gamma_candidates(2, 0.75)
    try:
        rep = constant_disambiguation(2, 0.75)
        sel = rep["selected"]
        loser = cand["corollary"] if sel == "main" else cand["main"]
        sigma = max(est.stderr / (2 * math.pi), 1e-300)
        sep = abs(loser - rep["moment"]) / sigma
        dis_ok = sel == "main" and sep > 5
        dis = f"selected {sel}, loser {sep:.0f} sigma away"
    except Exception as exc:  # strict disambiguation fails when neither printed constant matches
        dis_ok = False
        dis = f"disambiguation failed: {type(exc).__name__}"
    ok = rel <= 0.02 and dis_ok
    assert _record(
        5, ok, f"fit {est.limit:.5f} vs Gamma(1/3) {target:.5f} (rel {rel:.2e}, tol 2e-2); {dis}"
    )


def test_criterion_06_halfspace_rate():
    h = halfspace_rate(1e-6, 0.75)
    target = gamma_fn(1.0 / 3.0) / 4.0
    rel = abs(h / target - 1.0)
    assert _record(6, rel <= 0.01, f"h(1e-6) = {h:.6f} vs Gamma(1/3)/4 = {target:.6f} (rel {rel:.2e}, tol 1e-2)")


def test_criterion_07_energy_identity():
    u = rasterize(Disk(1.0), TorusGrid(2, 8.0, 512))
    lhs, rhs = energy_identity_check(u, 0.05, 0.25)
    rel = abs(lhs / rhs - 1.0)
    assert _record(7, rel <= 0.02, f"E_t = {lhs:.6f}, 2 int ||u||^2_H^s = {rhs:.6f}, rel {rel:.1e} (tol 2e-2)")


def test_criterion_08_monotone_flow_norms():
    u = rasterize(Disk(1.0), TorusGrid(2, 8.0, 512))
    uh = forward_transform(u)
    ts = np.linspace(0.0, 0.2, 21)
    worst = -math.inf
    for s in (0.25, 0.5, 0.75):
        l2 = np.array([l2_norm_squared(evolve_spectrum(uh, t, s)) for t in ts])
        hs = np.array([hs_norm_squared(evolve_spectrum(uh, t, s), s) for t in ts])
        worst = max(worst, float(np.max(np.diff(l2))), float(np.max(np.diff(hs))))
    assert _record(8, worst <= 1e-10, f"largest increase over 21 samples, s in {{1/4,1/2,3/4}}: {worst:.2e} (slack 1e-10)")


def test_criterion_09_riesz_isoperimetric():
    ts = np.geomspace(1e-1, 1e-4, 20)
    worst = math.inf
    per = None
    for s in (0.25, 0.5, 0.75):
        rep = riesz_isoperimetric_check(square(math.sqrt(math.pi)), s, ts)
        worst = min(worst, min(rep.details["energy_defects"]))
        per = rep.details["perimeter_defect"]
    ok = worst >= -1e-9 and per > 0
    assert _record(9, ok, f"min energy defect {worst:.3e} (>= -1e-9); perimeter defect 4 sqrt(pi) - 2 pi = {per:.6f}")


def test_criterion_10_characterization_divergence():
    L = 1.0
    rep = oscillation_experiment([L / 4, L / 8, L / 16, L / 32], 0.25, 1e-3, L=L, N=512)
    d = rep.details
    vals = ", ".join(f"{v:.4f}" for v in d["rescaled"])
    assert _record(
        10, rep.passed, f"rescaled [{vals}], increasing={d['strictly_increasing']}, ratio {d['ratio']:.3f} (needs >= 3)"
    )


def test_criterion_11_gagliardo_fourier():
    rels = []
    for n, s in [(1, 0.25), (2, 0.25), (2, 0.4)]:
        real, fourier = gagliardo_gaussian_check(n, s)
        rels.append(abs(real / fourier - 1.0))
    assert _record(11, max(rels) <= 5e-3, f"rel gaps {', '.join(f'{r:.1e}' for r in rels)} (tol 5e-3)")


def test_criterion_12_route_equivalence():
    e_rel = max(
        abs(energy_direct_quad_half(Disk(1.0), t) / energy_from_spectrum(Disk(1.0), t, 0.5) - 1.0) for t in (0.1, 0.05)
    )
    p_rel = 0.0
    for shape in (Disk(1.0), square(math.sqrt(math.pi))):
        d = frac_perimeter_direct(shape, 0.25)
        sp = frac_perimeter_spectral(shape, 0.25)
        sub = frac_perimeter_subordination(shape, 0.25)
        p_rel = max(p_rel, abs(sp / d - 1.0), abs(sub / d - 1.0), abs(sub / sp - 1.0))
    ok = e_rel <= 0.01 and p_rel <= 0.02
    assert _record(12, ok, f"energy direct vs spectral {e_rel:.1e} (tol 1e-2); perimeter routes {p_rel:.1e} (tol 2e-2)")


def test_criterion_13_determinism():
    cmd = [sys.executable, "-c", "import sys; from fracheat.cli import main; sys.exit(main())", "selftest"]
    runs = [subprocess.run(cmd, capture_output=True, timeout=600) for _ in range(2)]
    same = runs[0].stdout == runs[1].stdout and len(runs[0].stdout) > 0
    ok = same and all(r.returncode == 0 for r in runs)
    n = runs[0].stdout.count(b"\n")
    assert _record(13, ok, f"two selftest runs byte-identical={same}, {n} lines, exit codes {[r.returncode for r in runs]}")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
