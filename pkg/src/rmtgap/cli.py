"""Command-line front end: ``rmtgap tabulate | verify | seed-dump``.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error,
3 numerical failure. Floats are written with 15 significant digits.

Grid points are evaluated on a thread pool whose size is read from the
optional ``RMTGAP_THREADS`` environment variable (default: up to 4).
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

import click
import numpy as np

from . import __version__, gap_prob, verify as verify_mod
from .errors import GapError, NumericalError, ParameterError
from .gap_prob import GapQuery, Regime
from .sigma_ode import DEFAULT_TOL

TABLE_COLUMNS = ("s", "E1", "E2", "E4", "tau1", "tau2", "err_E1", "err_E2", "err_E4")
VERIFY_COLUMNS = ("group", "check", "value", "reference", "diff", "threshold", "passed")
SEED_COLUMNS = ("regime", "family", "params", "t0", "h0", "h1", "h2", "residual")

PAIR_REGIMES = (Regime.BULK, Regime.SOFT, Regime.HARD, Regime.CIRCULAR)
TOL_RANGE = (1e-12, 1e-4)
VERIFY_CHOICES = tuple(verify_mod.GROUPS) + ("all",)

EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


# --------------------------------------------------------------------------
# Formatting
# --------------------------------------------------------------------------


def fmt(x) -> str:
    """15 significant digits, '.' separator, independent of locale."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    return format(float(x), ".15g")


def _json_value(x):
    if x is None or isinstance(x, (bool, str)):
        return x
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(format(x, ".15g"))


def load_schema(command: str) -> dict:
    """Shipped JSON schema for the output of ``tabulate``, ``verify`` or ``seed-dump``."""
    name = command.replace("-", "_")
    return json.loads(resources.files("rmtgap").joinpath(f"schema/{name}.schema.json").read_text())


def render(rows: list, columns: tuple, output_format: str) -> str:
    if output_format == "json":
        data = [{c: _json_value(r.get(c)) for c in columns} for r in rows]
        return json.dumps(data, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def _emit(text: str, out) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# --------------------------------------------------------------------------
# Option parsing
# --------------------------------------------------------------------------


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:count`` into an evenly spaced grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise click.BadParameter("expected start:stop:count", param_hint="--grid")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise click.BadParameter("start and stop must be numbers, count an integer", param_hint="--grid")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise click.BadParameter("start and stop must be finite", param_hint="--grid")
    if count < 2:
        raise click.BadParameter("count must be at least 2", param_hint="--grid")
    if not start < stop:
        raise click.BadParameter("start must be below stop", param_hint="--grid")
    return np.linspace(start, stop, count)


def _check_tol(ctx, param, value):
    if value is not None and not TOL_RANGE[0] <= value <= TOL_RANGE[1]:
        raise click.BadParameter(f"must lie in [{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}]")
    return value


def _threads() -> int:
    raw = os.environ.get("RMTGAP_THREADS", "")
    if raw.strip():
        try:
            n = int(raw)
        except ValueError:
            raise click.UsageError("RMTGAP_THREADS must be a positive integer")
        if n < 1:
            raise click.UsageError("RMTGAP_THREADS must be a positive integer")
        return n
    return max(1, min(4, os.cpu_count() or 1))


def _fail(regime: str, exc: Exception) -> None:
    code = EXIT_NUMERICAL if isinstance(exc, NumericalError) else EXIT_USAGE
    click.echo(f"error [{regime}]: {type(exc).__name__}: {exc}", err=True)
    sys.exit(code)


# --------------------------------------------------------------------------
# Tabulation
# --------------------------------------------------------------------------


def _betas(regime: Regime, beta):
    if regime in PAIR_REGIMES:
        avail = (1, 2, 4)
    elif regime in (Regime.FINITE_LAGUERRE_E2, Regime.FINITE_JACOBI_E2):
        avail = (2,)
    else:
        avail = (1,)
    if beta is None:
        return avail
    if beta not in avail:
        raise ParameterError(f"{regime.value} does not provide beta = {beta}")
    return (beta,)


def _query(regime: Regime, beta: int, s: float, a, b, alpha, n) -> GapQuery:
    return GapQuery(regime, beta, s, a=a, b=b, alpha=alpha, N=n)


def tabulate_rows(regime, grid, beta=None, a=0.0, b=0.0, alpha=0.0, n=0, tol=DEFAULT_TOL, threads=1) -> list:
    """One dict per grid point with the :data:`TABLE_COLUMNS` keys.

    Each point is evaluated alongside the extreme grid point, so every
    trajectory is requested with the same reach and the output does not
    depend on thread scheduling.
    """
    regime = Regime(regime)
    grid = np.asarray(grid, dtype=float)
    betas = _betas(regime, beta)
    for bt in betas:
        _query(regime, bt, float(grid[0]), a, b, alpha, n)
    ext = float(grid.min() if regime is Regime.SOFT else grid.max())
    pair = regime in PAIR_REGIMES

    def point(s):
        s = float(s)
        res = {}
        # tau1 and tau2 need E1 and E2 even when only E4 is asked for
        need = (1, 2, 4) if pair else betas
        for bt in need:
            q = _query(regime, bt, s, a, b, alpha, n)
            res[bt] = gap_prob.evaluate(q, [s, ext], tol)[0]
        row = {"s": s}
        for bt in (1, 2, 4):
            if bt in betas:
                row[f"E{bt}"] = res[bt].probability
                row[f"err_E{bt}"] = res[bt].quadrature_error_estimate
        if pair:
            row["tau1"] = res[1].probability
            row["tau2"] = math.exp(res[2].log_probability - res[1].log_probability)
        else:
            row["tau1"] = res[betas[0]].probability
        return row

    gap_prob.clear_cache()
    point(ext)
    if threads <= 1:
        return [point(s) for s in grid]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(point, grid))


def seed_rows(regime=None) -> list:
    rows = []
    for reg, name, seed, _, _ in verify_mod.presets():
        if regime is not None and reg != regime:
            continue
        rows.append({
            "regime": reg,
            "family": name,
            "params": seed.family.label,
            "t0": seed.t0,
            "h0": seed.h0,
            "h1": seed.h1,
            "h2": seed.h2,
            "residual": seed.residual,
        })
    return rows


def verify_rows(groups, tol, threshold) -> list:
    gap_prob.clear_cache()
    rows = []
    for g, c in verify_mod.run(groups, tol=tol, threshold=threshold):
        rows.append({
            "group": g,
            "check": c.name,
            "value": c.value,
            "reference": c.reference,
            "diff": c.diff,
            "threshold": c.threshold,
            "passed": c.passed,
        })
    return rows


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

_format_opt = click.option("--format", "output_format", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
_out_opt = click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None, help="Write to a file instead of stdout.")


@click.group()
@click.version_option(__version__, prog_name="rmtgap")
def main():
    """Gap probabilities of the classical random-matrix ensembles."""


@main.command()
@click.option("--regime", type=click.Choice([r.value for r in Regime]), required=True)
@click.option("--beta", type=click.Choice(["1", "2", "4"]), default=None, help="Fill only this E column.")
@click.option("--a", "a", type=float, default=0.0, show_default=True, help="Bessel order, Laguerre or Jacobi exponent.")
@click.option("--b", "b", type=float, default=0.0, show_default=True, help="Second Jacobi exponent.")
@click.option("--alpha", type=float, default=0.0, show_default=True, help="Cauchy exponent.")
@click.option("--n", "--N", "n", type=int, default=0, show_default=True, help="Matrix size for finite and circular ensembles.")
@click.option("--grid", "grid_text", required=True, help="start:stop:count")
@click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True, callback=_check_tol)
@_format_opt
@_out_opt
def tabulate(regime, beta, a, b, alpha, n, grid_text, tol, output_format, out):
    """Tabulate E_1, E_2, E_4 and the branch tau-functions on a grid.

    Bulk rows give E_1 and E_2 for an interval of length 2s and E_4(0;s);
    the summary-table convention for E_4 uses (-s/2, s/2) instead, which is
    the same number at s/2 here.
    """
    grid = parse_grid(grid_text)
    try:
        rows = tabulate_rows(regime, grid, None if beta is None else int(beta), a, b, alpha, n, tol, _threads())
    except GapError as exc:
        _fail(regime, exc)
    _emit(render(rows, TABLE_COLUMNS, output_format), out)


@main.command()
@click.argument("regime_arg", required=False, type=click.Choice(VERIFY_CHOICES), metavar="[REGIME]")
@click.option("--regime", type=click.Choice(VERIFY_CHOICES), default=None)
@click.option("--n", "--N", "n", type=int, default=None, help="Accepted for symmetry with tabulate; the checks are fixed.")
@click.option("--tol", type=float, default=None, callback=_check_tol, help="Override every check threshold.")
@_format_opt
@_out_opt
def verify(regime_arg, regime, n, tol, output_format, out):
    """Cross-check every tau-function route against its oracle."""
    if regime_arg and regime and regime_arg != regime:
        raise click.UsageError("conflicting regimes given")
    name = regime or regime_arg or "all"
    groups = None if name == "all" else [name]
    try:
        rows = verify_rows(groups, DEFAULT_TOL, tol)
    except GapError as exc:
        _fail(name, exc)
    _emit(render(rows, VERIFY_COLUMNS, output_format), out)
    failed = [r for r in rows if not r["passed"]]
    if failed:
        worst = max(failed, key=lambda r: r["diff"] / r["threshold"])
        click.echo(
            f"{len(failed)} check(s) failed; worst: {worst['group']}: {worst['check']} "
            f"(diff {fmt(worst['diff'])} > {fmt(worst['threshold'])})",
            err=True,
        )
        sys.exit(EXIT_VERIFY)


@main.command("seed-dump")
@click.option("--regime", type=click.Choice(["bulk", "soft", "hard", "finite"]), default=None)
@_format_opt
@_out_opt
def seed_dump(regime, output_format, out):
    """Boundary seeds of every shipped trajectory."""
    try:
        rows = seed_rows(regime)
    except GapError as exc:
        _fail(regime or "seeds", exc)
    _emit(render(rows, SEED_COLUMNS, output_format), out)


if __name__ == "__main__":  # pragma: no cover
    main()
