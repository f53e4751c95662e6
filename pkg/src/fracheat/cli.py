"""Command-line harness: ``fracheat <command> [flags]``.

Exit status: 0 on success, 1 for usage, configuration or domain errors,
2 for numerical non-convergence or a failed check.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from ._errors import ConfigurationError, DomainError, FracHeatError, NumericalError

COMMANDS = (
    "kernel-table",
    "energy-sweep",
    "gamma-limit",
    "perimeter",
    "constants",
    "isoperimetric",
    "oscillation",
    "selftest",
)

# flag name -> (type, default)
OPTIONS = {
    "n": (int, 2),
    "s": (float, None),
    "shape": (str, "disk"),
    "R": (float, 1.0),
    "a1": (float, None),
    "a2": (float, None),
    "delta": (float, 0.5),
    "cell": (float, None),
    "L": (float, 8.0),
    "N": (int, 512),
    "tmax": (float, None),
    "tcount": (int, None),
    "out": (str, None),
    "format": (str, None),
    "route": (str, None),
}

SHAPES = ("disk", "rectangle", "square", "slab", "checkerboard")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(message)


@dataclass
class RunConfig:
    command: str
    n: int
    s: float | None
    shape: str
    R: float
    a1: float | None
    a2: float | None
    delta: float
    cell: float | None
    L: float
    N: int
    tmax: float | None
    tcount: int | None
    out: str | None
    format: str | None
    route: str | None


def _read_config_file(path):
    values = {}
    try:
        lines = open(path, encoding="utf-8").read().splitlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{num}: expected 'key = value'")
        key, val = (x.strip() for x in line.split("=", 1))
        key = key.lstrip("-")
        if key not in OPTIONS:
            raise ConfigurationError(f"{path}:{num}: unknown key '{key}'")
        typ = OPTIONS[key][0]
        try:
            values[key] = typ(val)
        except ValueError as exc:
            raise ConfigurationError(f"{path}:{num}: bad value for {key}: {val}") from exc
    return values


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fracheat", description="Fractional heat-content energies and their small-time limits.")
    p.add_argument("command", choices=COMMANDS)
    for key, (typ, _) in OPTIONS.items():
        p.add_argument(f"--{key}", type=typ, default=None)
    p.add_argument("--config", default=None, help="file of 'key = value' lines; flags override it")
    return p


def parse_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    merged = {k: d for k, (_, d) in OPTIONS.items()}
    if args.config:
        merged.update(_read_config_file(args.config))
    for key in OPTIONS:
        val = getattr(args, key)
        if val is not None:
            merged[key] = val
    cfg = RunConfig(command=args.command, **merged)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    if cfg.n not in (1, 2, 3):
        raise ConfigurationError("--n must be 1, 2 or 3")
    if cfg.s is not None and not 0.0 < cfg.s < 1.0:
        raise ConfigurationError("--s must lie in (0, 1)")
    if cfg.shape not in SHAPES:
        raise ConfigurationError(f"--shape must be one of {', '.join(SHAPES)}")
    for key in ("R", "a1", "a2", "delta", "cell", "L"):
        v = getattr(cfg, key)
        if v is not None and not v > 0:
            raise ConfigurationError(f"--{key} must be positive")
    if cfg.N < 2 or cfg.N & (cfg.N - 1):
        raise ConfigurationError("--N must be a power of two")
    if cfg.tmax is not None and not 0.0 < cfg.tmax < 1.0:
        raise ConfigurationError("--tmax must lie in (0, 1)")
    if cfg.tcount is not None and cfg.tcount < 1:
        raise ConfigurationError("--tcount must be at least 1")
    if cfg.format not in (None, "csv", "json"):
        raise ConfigurationError("--format must be csv or json")


# ---------------------------------------------------------------------------
# helpers


def _need_s(cfg, default=None):
    if cfg.s is None:
        if default is None:
            raise ConfigurationError(f"{cfg.command} needs --s")
        return default
    return cfg.s


def _ladder(cfg, tmax=0.1, count=11):
    tmax = cfg.tmax if cfg.tmax is not None else tmax
    count = cfg.tcount if cfg.tcount is not None else count
    t = [tmax * 2.0**-k for k in range(count)]
    if t[-1] <= 0.0:
        raise ConfigurationError("time ladder underflows")
    return t


def make_shape(cfg: RunConfig):
    from .shapes import Checkerboard, Disk, Rectangle, Slab

    n = cfg.n
    if cfg.shape == "disk":
        return Disk(cfg.R, n)
    if cfg.shape == "square":
        a = cfg.a1 if cfg.a1 is not None else 0.5 * math.sqrt(math.pi)
        return Rectangle((a,) * n)
    if cfg.shape == "rectangle":
        a1 = cfg.a1 if cfg.a1 is not None else 1.0
        a2 = cfg.a2 if cfg.a2 is not None else a1
        return Rectangle((a1, a2)[:n] if n <= 2 else (a1, a2, a2))
    if cfg.shape == "slab":
        return Slab(cfg.delta, 0, n)
    return Checkerboard(cfg.cell if cfg.cell is not None else cfg.L / 4.0, 0.0, n)


def _grid(cfg):
    from .spectral import TorusGrid

    return TorusGrid(cfg.n, cfg.L, cfg.N)


def _fmt(x):
    return repr(float(x))


def _csv(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) if isinstance(v, (float, np.floating)) else str(v) for v in row) + "\n")
    return buf.getvalue()


def _json(obj):
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def _emit(cfg, text):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summary(msg):
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# commands


def cmd_kernel_table(cfg):
    from .kernel import radial_profile

    s = _need_s(cfg)
    ts = _ladder(cfg, tmax=0.1, count=4)
    r = np.concatenate([[0.0], np.geomspace(1e-2, 10.0, 25)])
    rows = []
    for t in ts:
        vals = radial_profile(r, t, cfg.n, s)
        rows.extend((float(ri), t, s, cfg.n, float(v)) for ri, v in zip(r, vals))
    if cfg.format == "json":
        text = _json([dict(zip(("r", "t", "s", "n", "value"), row)) for row in rows])
    else:
        text = _csv(("r", "t", "s", "n", "value"), rows)
    return text, f"kernel-table: {len(rows)} rows, n={cfg.n}, s={s}"


def cmd_energy_sweep(cfg):
    from .asymptotics import run_sweep

    s = _need_s(cfg)
    shape = make_shape(cfg)
    t = _ladder(cfg)
    torus = cfg.route == "torus" or shape.kind in ("slab", "checkerboard")
    curve = run_sweep(shape, s, t, grid=_grid(cfg) if torus else None)
    header = ("t", "energy", "g", "rescaled")
    if cfg.format == "json":
        text = _json([dict(zip(header, row)) for row in curve.samples])
    else:
        text = _csv(header, curve.samples)
    return text, f"energy-sweep: {shape.kind}, s={s}, {len(curve.samples)} times, last rescaled {curve.samples[-1][3]:.6g}"


def cmd_gamma_limit(cfg):
    from .asymptotics import DEFAULT_LADDER, gamma_limit_experiment

    s = _need_s(cfg)
    shape = make_shape(cfg)
    if shape.kind not in ("disk", "rectangle"):
        raise ConfigurationError("gamma-limit needs a disk, square or rectangle")
    t = _ladder(cfg) if (cfg.tmax or cfg.tcount) else DEFAULT_LADDER
    rep = gamma_limit_experiment(shape, s, t)
    d = rep.details
    return _json(rep.to_dict()), (
        f"gamma-limit: estimate {rep.estimate:.6g} vs expected {d['expected']:.6g} "
        f"(rel {d['rel_error']:.2e}, {rep.model}) -> {'pass' if rep.passed else 'FAIL'}"
    )


def cmd_perimeter(cfg):
    from .perimeter import (
        PerimeterValue,
        classical_perimeter,
        frac_perimeter_direct,
        frac_perimeter_spectral,
        frac_perimeter_subordination,
        perimeter_grid,
    )
    from .shapes import rasterize

    shape = make_shape(cfg)
    route = cfg.route or ("direct" if cfg.s is not None else "analytic")
    periodic = shape.kind in ("slab", "checkerboard")
    if route in ("analytic", "grid"):
        if route == "analytic":
            val = classical_perimeter(shape, cfg.L if periodic else None)
        else:
            val = perimeter_grid(rasterize(shape, _grid(cfg)))
        pv = PerimeterValue("classical", val, route, None)
    elif route in ("direct", "spectral", "subordination"):
        s = _need_s(cfg)
        obj = rasterize(shape, _grid(cfg)) if periodic else shape
        fn = {"direct": frac_perimeter_direct, "spectral": frac_perimeter_spectral}.get(route, frac_perimeter_subordination)
        pv = PerimeterValue("fractional", fn(obj, s), route, s)
    else:
        raise ConfigurationError("--route must be analytic, grid, direct, spectral or subordination")
    return _json(pv.to_dict()), f"perimeter: {pv.kind} ({route}) of {shape.kind} = {pv.value:.10g}"


def cmd_constants(cfg):
    from .asymptotics import constant_disambiguation
    from .specialfn import ConstantsTable

    s = _need_s(cfg)
    table = ConstantsTable.build(cfg.n, s)
    out = {
        "n": cfg.n,
        "s": s,
        "c_ns": table.C_ns.value,
        "gamma_ns": table.gamma_ns.value,
        "c_n": table.c_n.value,
        "kappa_n": table.kappa_n.value,
        f"kappa_{cfg.n}": table.kappa_n.value,
        "max_rel_diff": table.max_rel_diff(),
        "table": table.to_dict(),
    }
    if s > 0.5 and cfg.n >= 1:
        rep = constant_disambiguation(cfg.n, s, strict=False)
        out["disambiguation"] = rep
    return _json(out), f"constants: n={cfg.n}, s={s}, max closed/quadrature gap {table.max_rel_diff():.2e}"


def cmd_isoperimetric(cfg):
    from .asymptotics import riesz_isoperimetric_check

    s = _need_s(cfg)
    if cfg.shape not in ("disk", "square", "rectangle"):
        raise ConfigurationError("isoperimetric needs a disk, square or rectangle")
    shape = make_shape(cfg)
    t = _ladder(cfg, tmax=0.1, count=20)
    rep = riesz_isoperimetric_check(shape, s, t)
    if not rep.passed:
        raise NumericalError(f"rearrangement inequality violated: min defect {rep.estimate:.3e}", residual=rep.estimate)
    return _json(rep.to_dict()), (
        f"isoperimetric: min energy defect {rep.estimate:.6g}, perimeter defect {rep.details['perimeter_defect']:.6g}"
    )


def cmd_oscillation(cfg):
    from .asymptotics import oscillation_experiment

    s = _need_s(cfg, 0.25)
    coarse = cfg.cell if cfg.cell is not None else cfg.L / 4.0
    count = cfg.tcount if cfg.tcount is not None else 4
    cells = [coarse * 2.0**-k for k in range(count)]
    t = cfg.tmax if cfg.tmax is not None else 1e-3
    rep = oscillation_experiment(cells, s, t, L=cfg.L, N=cfg.N)
    d = rep.details
    return _json(rep.to_dict()), (
        f"oscillation: rescaled {', '.join(f'{v:.4g}' for v in d['rescaled'])}; ratio {d['ratio']:.4g} "
        f"-> {'pass' if rep.passed else 'FAIL'}"
    )


def cmd_selftest(cfg):
    from .selftest import run_selftest

    lines, ok = run_selftest()
    text = "".join(line + "\n" for line in lines)
    if not ok:
        _emit(cfg, text)
        raise NumericalError("selftest: at least one invariant failed")
    return text, f"selftest: {len(lines)} checks passed"


HANDLERS = {
    "kernel-table": cmd_kernel_table,
    "energy-sweep": cmd_energy_sweep,
    "gamma-limit": cmd_gamma_limit,
    "perimeter": cmd_perimeter,
    "constants": cmd_constants,
    "isoperimetric": cmd_isoperimetric,
    "oscillation": cmd_oscillation,
    "selftest": cmd_selftest,
}


def run_command(cfg: RunConfig) -> int:
    text, summary = HANDLERS[cfg.command](cfg)
    _emit(cfg, text)
    _summary(summary)
    return 0


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        return run_command(cfg)
    except (ConfigurationError, DomainError) as exc:
        print(f"fracheat: error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        res = f" (residual {exc.residual:.3g})" if getattr(exc, "residual", None) is not None else ""
        print(f"fracheat: numerical failure: {exc}{res}", file=sys.stderr)
        return 2
    except FracHeatError as exc:
        print(f"fracheat: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
