"""Command-line front end.

Every command prints one report to stdout, as JSON by default or as CSV with
17 significant digits.  Exit status: 0 when all checks pass, 1 when a
tolerance fails, 2 for bad arguments.

Options may also come from a key=value file given with --config; flags on the
command line take precedence.  FUZZYQM_TOL overrides the default tolerance of
commands that have one.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import time
from pathlib import Path
from typing import Any, Callable

import click
import numpy as np

from . import __version__
from .hamiltonian import (
    bound_energy,
    build_radial_hamiltonian,
    coulomb_closed_form,
    diagonalize,
    eigen_residual,
    solve_nc_laplace,
    solve_radial_closed_form,
)
from .scattering import KinematicsDomainError, enumerate_poles, momentum_map, s_matrix
from .suites import SUITES, run_suite

TOL_ENV = "FUZZYQM_TOL"
CONFIG_ALIASES = {"lambda": "lam", "format": "fmt", "type": "kind"}


class UsageFailure(click.UsageError):
    """Bad input detected after parsing; exits with status 2."""


# ---- config -----------------------------------------------------------------


def read_config(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageFailure(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        out[CONFIG_ALIASES.get(key, key)] = value
    return out


def resolve(params: dict[str, Any], defaults: dict[str, tuple[Callable[[str], Any], Any]]) -> dict[str, Any]:
    """Merge flags over config-file values over defaults."""
    config = read_config(params.get("config"))
    unknown = set(config) - set(defaults)
    if unknown:
        raise UsageFailure(f"unknown config keys: {', '.join(sorted(unknown))}")
    out: dict[str, Any] = {}
    for key, (conv, default) in defaults.items():
        if params.get(key) is not None:
            out[key] = params[key]
        elif key in config:
            try:
                out[key] = conv(config[key])
            except ValueError as exc:
                raise UsageFailure(f"config key {key}: {exc}") from exc
        elif key == "tol" and os.environ.get(TOL_ENV):
            out[key] = float(os.environ[TOL_ENV])
        else:
            out[key] = default
    if "tol" in out and not out["tol"] > 0:
        raise UsageFailure("tolerance must be positive")
    if "lam" in out and not out["lam"] > 0:
        raise UsageFailure("lambda must be positive")
    return out


# ---- report -----------------------------------------------------------------


def _plain(value: Any) -> Any:
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def _csv_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def emit(command: str, config: dict[str, Any], results: list[dict[str, Any]], passed: bool, start: float, fmt: str, timing: bool) -> None:
    elapsed = round((time.perf_counter() - start) * 1000.0, 3) if timing else None
    if fmt == "csv":
        buf = io.StringIO()
        if results:
            writer = csv.writer(buf, lineterminator="\n")
            keys = list(results[0])
            writer.writerow(keys)
            for row in results:
                writer.writerow([_csv_cell(_plain(row[k])) for k in keys])
        click.echo(buf.getvalue(), nl=False)
    else:
        report = {
            "command": command,
            "config": {k: _plain(v) for k, v in config.items() if k != "config"},
            "results": [{k: _plain(v) for k, v in row.items()} for row in results],
            "pass": bool(passed),
            "elapsed_ms": elapsed,
        }
        click.echo(json.dumps(report, indent=2))
    if not passed:
        sys.exit(1)


def common_options(func):
    func = click.option("--config", type=click.Path(exists=True, dir_okay=False), help="key=value file; flags win.")(func)
    func = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None, help="Report format.")(func)
    func = click.option("--timing/--no-timing", default=True, help="Include elapsed_ms; off gives byte-stable JSON.")(func)
    return func


COMMON = {"fmt": (str, "json")}


@click.group()
@click.version_option(__version__, prog_name="fuzzyqm")
def main() -> None:
    """Hydrogen atom on a noncommutative space: spectra, scattering and identity checks."""


def _commutative_level(family: str, n: int, q: float, lam: float) -> float:
    """-q^2/(2n^2), mirrored about 1/lam^2 for the upper family."""
    base = -q * q / (2 * n * n)
    return base if family == "I" else 2.0 / lam**2 - base


# ---- spectrum -----------------------------------------------------------------


@main.command()
@click.option("--lambda", "lam", type=float, default=None, help="Length scale (default 0.5).")
@click.option("--q", type=float, default=None, help="Coupling; q > 0 attractive (default 1).")
@click.option("--j", type=int, default=None, help="Angular momentum sector (default 0).")
@click.option("--nmax", type=int, default=None, help="Fock truncation level (default 300).")
@click.option("--levels", type=int, default=None, help="Number of levels (default 3).")
@click.option("--tol", type=float, default=None, help="Relative tolerance (default 1e-6).")
@common_options
def spectrum(**params: Any) -> None:
    """Bound energies from diagonalization against the closed form."""
    start = time.perf_counter()
    cfg = resolve(
        params,
        {"lam": (float, 0.5), "q": (float, 1.0), "j": (int, 0), "nmax": (int, 300), "levels": (int, 3), "tol": (float, 1e-6), **COMMON},
    )
    if cfg["q"] == 0:
        raise UsageFailure("q must be nonzero for a bound spectrum")
    if cfg["j"] < 0 or cfg["levels"] < 1:
        raise UsageFailure("need j >= 0 and levels >= 1")
    if cfg["nmax"] < cfg["j"] + 4:
        raise UsageFailure("need nmax >= j + 4")
    family = "I" if cfg["q"] > 0 else "II"
    h = build_radial_hamiltonian(cfg["j"], cfg["q"], cfg["lam"], cfg["nmax"])
    pairs = diagonalize(h, cfg["levels"], "lowest" if family == "I" else "highest")
    rows = []
    for idx, (numeric, _) in enumerate(pairs):
        n = cfg["j"] + 1 + idx
        closed = bound_energy(family, n, cfg["j"], cfg["q"], cfg["lam"]).value
        rows.append(
            {
                "family": family,
                "n": n,
                "j": cfg["j"],
                "closed_form": closed,
                "numerical": numeric,
                "rel_err": abs(numeric - closed) / abs(closed),
                "commutative_limit": _commutative_level(family, n, cfg["q"], cfg["lam"]),
            }
        )
    emit("spectrum", cfg, rows, all(r["rel_err"] <= cfg["tol"] for r in rows), start, cfg["fmt"], params["timing"])


# ---- S-matrix ---------------------------------------------------------------


def _parse_energies(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageFailure(f"bad energy list: {exc}") from exc


@main.command()
@click.option("--lambda", "lam", type=float, default=None, help="Length scale (default 0.5).")
@click.option("--alpha", type=float, default=None, help="Coupling (default 1).")
@click.option("--j", type=int, default=None, help="Partial wave (default 0).")
@click.option("--points", type=int, default=None, help="Interior grid size on (0, 2/lambda^2) (default 100).")
@click.option("--energies", type=str, default=None, help="Comma-separated energies instead of the grid.")
@click.option("--tol", type=float, default=None, help="Unitarity tolerance (default 1e-12).")
@common_options
def smatrix(**params: Any) -> None:
    """Partial-wave S-matrix table and its unitarity defect."""
    start = time.perf_counter()
    cfg = resolve(
        params,
        {
            "lam": (float, 0.5),
            "alpha": (float, 1.0),
            "j": (int, 0),
            "points": (int, 100),
            "energies": (str, None),
            "tol": (float, 1e-12),
            **COMMON,
        },
    )
    top = 2.0 / cfg["lam"] ** 2
    if cfg["energies"]:
        grid = _parse_energies(cfg["energies"])
    else:
        if cfg["points"] < 1:
            raise UsageFailure("points must be >= 1")
        grid = [top * (k + 0.5) / cfg["points"] for k in range(cfg["points"])]
    rows = []
    for e in grid:
        try:
            s = s_matrix(cfg["j"], e, cfg["alpha"], cfg["lam"])
        except KinematicsDomainError as exc:
            raise UsageFailure(f"E={e!r}: {exc}; the interval endpoints are excluded") from exc
        p = momentum_map(e, cfg["lam"]).real
        rows.append({"E": e, "p": p, "re_S": s.real, "im_S": s.imag, "abs_S": abs(s)})
    defect = max((abs(r["abs_S"] - 1.0) for r in rows), default=0.0)
    emit("smatrix", cfg, rows, defect <= cfg["tol"], start, cfg["fmt"], params["timing"])


# ---- verify -----------------------------------------------------------------


@main.command()
@click.option("--suite", type=click.Choice([*SUITES, "all"]), default=None, help="Suite to run (default all).")
@click.option("--seed", type=int, default=None, help="Seed for random wave functions (default 0).")
@click.option("--nmax", type=int, default=None, help="Fock truncation for the algebra, dynamics and lrl suites.")
@common_options
def verify(**params: Any) -> None:
    """Run identity suites; one row per check."""
    start = time.perf_counter()
    cfg = resolve(params, {"suite": (str, "all"), "seed": (int, 0), "nmax": (int, None), **COMMON})
    names = SUITES if cfg["suite"] == "all" else (cfg["suite"],)
    if cfg["suite"] not in (*SUITES, "all"):
        raise UsageFailure(f"unknown suite {cfg['suite']!r}")
    if cfg["nmax"] is not None and cfg["nmax"] < 6:
        raise UsageFailure("nmax must be >= 6")
    rows = []
    for name in names:
        for check in run_suite(name, seed=cfg["seed"], n_max=cfg["nmax"]):
            rows.append(
                {
                    "suite": name,
                    "check": check.name,
                    "residual": float(check.residual),
                    "tolerance": check.tolerance,
                    "pass": check.passed,
                }
            )
    failing = [f"{r['suite']}: {r['check']}" for r in rows if not r["pass"]]
    for item in failing:
        click.echo(f"FAILED {item}", err=True)
    emit("verify", cfg, rows, not failing, start, cfg["fmt"], params["timing"])


# ---- poles ------------------------------------------------------------------


@main.command()
@click.option("--lambda", "lam", type=float, default=None, help="Length scale (default 0.5).")
@click.option("--alpha", type=float, default=None, help="Nonzero coupling (default 1).")
@click.option("--j", type=int, default=None, help="Partial wave (default 0).")
@click.option("--count", type=int, default=None, help="Number of poles (default 5).")
@click.option("--tol", type=float, default=None, help="Residual tolerance (default 1e-12).")
@common_options
def poles(**params: Any) -> None:
    """S-matrix poles with the reciprocal-Gamma residual at each."""
    start = time.perf_counter()
    cfg = resolve(
        params,
        {"lam": (float, 0.5), "alpha": (float, 1.0), "j": (int, 0), "count": (int, 5), "tol": (float, 1e-12), **COMMON},
    )
    if cfg["alpha"] == 0:
        raise UsageFailure("alpha must be nonzero")
    if cfg["count"] < 1 or cfg["j"] < 0:
        raise UsageFailure("need count >= 1 and j >= 0")
    rows = [
        {"family": lvl.family, "n": lvl.n, "j": lvl.j, "energy": lvl.value, "residual": res}
        for lvl, res in enumerate_poles(cfg["j"], cfg["alpha"], cfg["lam"], cfg["count"])
    ]
    emit("poles", cfg, rows, all(r["residual"] <= cfg["tol"] for r in rows), start, cfg["fmt"], params["timing"])


# ---- laplace ----------------------------------------------------------------


@main.command()
@click.option("--q", type=float, default=None, help="Point charge (default 1).")
@click.option("--q0", type=float, default=None, help="Constant at infinity (default 0).")
@click.option("--lambda", "lam", type=float, default=None, help="Length scale (default 0.5).")
@click.option("--nmax", type=int, default=None, help="Last level (default 100).")
@click.option("--tol", type=float, default=None, help="Tolerance against q0 - q/r (default 1e-12).")
@common_options
def laplace(**params: Any) -> None:
    """Radial solution of the free Laplace equation from its recurrence."""
    start = time.perf_counter()
    cfg = resolve(
        params,
        {"q": (float, 1.0), "q0": (float, 0.0), "lam": (float, 0.5), "nmax": (int, 100), "tol": (float, 1e-12), **COMMON},
    )
    if cfg["nmax"] < 0:
        raise UsageFailure("nmax must be >= 0")
    u = solve_nc_laplace(cfg["q"], cfg["q0"], cfg["lam"], cfg["nmax"])
    ref = coulomb_closed_form(cfg["q"], cfg["q0"], cfg["lam"], cfg["nmax"])
    scale = max(1.0, float(np.max(np.abs(ref))))
    rows = [
        {"N": n, "r": cfg["lam"] * (n + 1), "U": float(u[n]), "abs_err": abs(float(u[n] - ref[n]))}
        for n in range(cfg["nmax"] + 1)
    ]
    emit("laplace", cfg, rows, max(r["abs_err"] for r in rows) <= cfg["tol"] * scale, start, cfg["fmt"], params["timing"])


# ---- radial -----------------------------------------------------------------

RADIAL_TYPES = {"I": "boundI", "II": "boundII", "eta0": "eta0", "eta1": "eta1", "plus": "generic_plus", "minus": "generic_minus", "scatter": "scatter"}


@main.command()
@click.option("--type", "kind", type=click.Choice(list(RADIAL_TYPES)), default=None, help="Solution family (default I).")
@click.option("--n", type=int, default=None, help="Principal number for bound families (default 1).")
@click.option("--j", type=int, default=None, help="Angular momentum (default 0).")
@click.option("--alpha", type=float, default=None, help="Coupling; sign must suit the family (default 1).")
@click.option("--lambda", "lam", type=float, default=None, help="Length scale (default 0.5).")
@click.option("--energy", type=float, default=None, help="Energy for the non-bound families.")
@click.option("--length", type=int, default=None, help="Number of coefficients (default 40).")
@click.option("--tol", type=float, default=None, help="Eigen-residual tolerance (default 1e-8).")
@common_options
def radial(**params: Any) -> None:
    """Closed-form radial coefficients with norm and eigen-residual."""
    start = time.perf_counter()
    cfg = resolve(
        params,
        {
            "kind": (str, "I"),
            "n": (int, 1),
            "j": (int, 0),
            "alpha": (float, 1.0),
            "lam": (float, 0.5),
            "energy": (float, None),
            "length": (int, 40),
            "tol": (float, 1e-8),
            **COMMON,
        },
    )
    case = RADIAL_TYPES.get(cfg["kind"])
    if case is None:
        raise UsageFailure(f"unknown type {cfg['kind']!r}")
    if cfg["length"] < 5:
        raise UsageFailure("length must be >= 5")
    lam, alpha, j = cfg["lam"], cfg["alpha"], cfg["j"]
    try:
        if case in ("boundI", "boundII"):
            energy: float = bound_energy("I" if case == "boundI" else "II", cfg["n"], j, alpha, lam).value
            vec = solve_radial_closed_form(case, j, lam, alpha, cfg["length"], n=cfg["n"])
        elif case == "eta0":
            energy = 0.0
            vec = solve_radial_closed_form(case, j, lam, alpha, cfg["length"])
        elif case == "eta1":
            energy = 2.0 / lam**2
            vec = solve_radial_closed_form(case, j, lam, alpha, cfg["length"])
        else:
            if cfg["energy"] is None:
                raise UsageFailure(f"--energy is required for type {cfg['kind']}")
            energy = cfg["energy"]
            vec = solve_radial_closed_form(case, j, lam, alpha, cfg["length"], energy=energy)
    except (ValueError, KinematicsDomainError) as exc:
        raise UsageFailure(str(exc)) from exc
    h = build_radial_hamiltonian(j, alpha, lam, cfg["length"] + j)
    residual = eigen_residual(h, vec.coeffs, energy)
    rows = [
        {"item": "weighted_norm", "re": vec.weighted_norm(), "im": 0.0},
        {"item": "eigen_residual", "re": residual, "im": 0.0},
    ]
    rows += [{"item": f"R[{k}]", "re": c.real, "im": c.imag} for k, c in enumerate(vec.coeffs)]
    passed = math.isfinite(residual) and residual <= cfg["tol"]
    emit("radial", {**cfg, "energy": energy}, rows, passed, start, cfg["fmt"], params["timing"])


if __name__ == "__main__":  # pragma: no cover
    main()
