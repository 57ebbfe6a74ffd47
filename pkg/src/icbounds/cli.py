"""Command-line front door.

Channel specs come in as JSON documents ({"type": "gaussian" | "gaussian-6" |
"gaussian-13" | "discrete", ...}); outputs are frontier CSVs, report JSON, or
simulation JSON on stdout.  Exit codes: 0 success, 2 input or shape error,
3 undefined threshold, 4 regime violation.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import discrete as dsc
from . import outer_bound, regimes, regions, sim
from .errors import (
    InputError,
    RegimeViolationError,
    ResourceLimitError,
    UndefinedThresholdError,
)
from .gaussian import GaussianIC

FIGURE_PRESETS = {
    "fig2": dict(s11=100.0, s12=60.0, s21=60.0, s22=100.0,
                 p1=1.0, p2=1.0, d12=0.5, d21=0.5),
    "fig3": dict(s11=60.0, s12=100.0, s21=100.0, s22=60.0,
                 p1=1.0, p2=1.0, d12=0.5, d21=0.5),
    "fig4": dict(s11=60.0, s12=100.0, s21=60.0, s22=100.0,
                 p1=1.0, p2=1.0, d12=0.5, d21=0.5),
}


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _map_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except UndefinedThresholdError as exc:
            _fail(3, str(exc))
        except RegimeViolationError as exc:
            _fail(4, str(exc))
        except (InputError, ResourceLimitError, json.JSONDecodeError, OSError) as exc:
            _fail(2, str(exc))
    return wrapper


def _load_json(path: str) -> dict:
    doc = json.loads(Path(path).read_text())
    if not isinstance(doc, dict):
        raise InputError("channel spec must be a JSON object")
    return doc


def _float_field(doc: dict, key: str, default=None) -> float:
    if key not in doc:
        if default is None:
            raise InputError(f"channel spec missing field {key!r}")
        return float(default)
    try:
        return float(doc[key])
    except (TypeError, ValueError):
        raise InputError(f"field {key!r} must be a number") from None


def load_channel(path: str):
    """Parse a channel spec file into a typed channel object."""
    doc = _load_json(path)
    kind = doc.get("type")
    if kind == "gaussian":
        return GaussianIC(
            s11=_float_field(doc, "s11"), s12=_float_field(doc, "s12"),
            s21=_float_field(doc, "s21"), s22=_float_field(doc, "s22"),
            p1=_float_field(doc, "p1"), p2=_float_field(doc, "p2"),
            d12=_float_field(doc, "d12", 0.0), d21=_float_field(doc, "d21", 0.0),
        )
    if kind in ("gaussian-6", "gaussian-13"):
        if _float_field(doc, "d21", 0.0) != 0.0:
            raise InputError(f"{kind} assumes a one-directional conference (d21 = 0)")
        return regimes.effective_form(
            kind,
            s11=_float_field(doc, "s11"), s12=_float_field(doc, "s12"),
            s21=_float_field(doc, "s21"), s22=_float_field(doc, "s22"),
            p1=_float_field(doc, "p1"), p2=_float_field(doc, "p2"),
            d12=_float_field(doc, "d12", 0.0),
        )
    if kind == "discrete":
        return dsc.DiscreteIC.from_json_dict(doc)
    raise InputError(f"unknown channel type {doc.get('type')!r}")


def _write_region_csv(region: regions.RateRegion, out: str) -> None:
    Path(out).write_text(regions.frontier_csv(region))


def _echo_json(payload: dict) -> None:
    click.echo(json.dumps(payload, sort_keys=True))


@click.group()
def main():
    """Rate-region bounds and coding simulation for conferencing receivers."""


@main.command("outer")
@click.option("--channel", "channel_path", required=True, type=click.Path())
@click.option("--grid", default=outer_bound.DEFAULT_GRID, show_default=True,
              type=int, help="parameter sweep resolution per axis")
@click.option("--hull/--no-hull", default=False, show_default=True,
              help="write the convex hull of the union frontier")
@click.option("--out", "out_path", required=True, type=click.Path())
@_map_errors
def cmd_outer(channel_path: str, grid: int, hull: bool, out_path: str):
    """Union outer-bound frontier for a Gaussian channel spec."""
    ch = load_channel(channel_path)
    if not isinstance(ch, GaussianIC):
        raise InputError("outer bound needs a spec with type 'gaussian'")
    region = outer_bound.outer_region(ch, grid_n=grid)
    if hull:
        region = regions.convex_hull(region, tag="outer-hull")
    _write_region_csv(region, out_path)
    click.echo(f"wrote {out_path} (max sum rate "
               f"{outer_bound.sum_rate_bound(ch, grid_n=grid):.9g} bits/use)")


@main.command("figure")
@click.option("--preset", required=True,
              type=click.Choice(sorted(FIGURE_PRESETS)))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--grid", default=outer_bound.DEFAULT_GRID, show_default=True, type=int)
@click.option("--compare", "compare_path", default=None, type=click.Path(),
              help="frontier CSV from an external bound to compare against")
@_map_errors
def cmd_figure(preset: str, out_dir: str, grid: int, compare_path: str | None):
    """Reproduce a preset comparison setup; optionally diff an external bound."""
    params = FIGURE_PRESETS[preset]
    ch = GaussianIC(**params)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    region = outer_bound.outer_region(ch, grid_n=grid)
    _write_region_csv(region, str(out / f"{preset}_bound.csv"))
    hull = regions.convex_hull(region, tag="outer-hull")
    _write_region_csv(hull, str(out / f"{preset}_bound_hull.csv"))
    if compare_path is not None:
        other = regions.from_csv(Path(compare_path).read_text(), tag="external")
        grid_r1 = np.linspace(0.0, max(region.r1_max, other.r1_max), 512)
        ours = region.frontier_at(grid_r1)
        theirs = other.frontier_at(grid_r1)
        lines = ["r1,r2_bound,r2_external,difference"]
        lines += [f"{x:.9g},{a:.9g},{b:.9g},{b - a:.9g}"
                  for x, a, b in zip(grid_r1, ours, theirs)]
        (out / f"{preset}_comparison.csv").write_text("\n".join(lines) + "\n")
    click.echo(f"wrote {preset} outputs to {out_dir}")


@main.command("classify")
@click.option("--channel", "channel_path", required=True, type=click.Path())
@_map_errors
def cmd_classify(channel_path: str):
    """Print the regime report for a cascade or one-sided channel spec."""
    doc = _load_json(channel_path)
    kind = doc.get("type")
    if kind in ("gaussian-6", "gaussian-13"):
        report = regimes.classify(
            kind,
            _float_field(doc, "s11"), _float_field(doc, "s12"),
            _float_field(doc, "s21"), _float_field(doc, "s22"),
        )
    elif kind == "gaussian":
        if _float_field(doc, "s12") != 0.0:
            raise InputError(
                "no regime classifier for a fully coupled channel; use type "
                "'gaussian-6', 'gaussian-13', or a one-sided spec (s12 = 0)"
            )
        report = regimes.classify(
            "one-sided",
            _float_field(doc, "s11"), 0.0,
            _float_field(doc, "s21"), _float_field(doc, "s22"),
        )
    else:
        raise InputError("classification needs a Gaussian channel spec")
    _echo_json(report.to_dict())


@main.command("inner")
@click.option("--channel", "channel_path", required=True, type=click.Path())
@click.option("--theorem", required=True, type=click.Choice(["2", "3", "4", "5"]))
@click.option("--out", "out_path", default=None, type=click.Path())
@click.option("--force", is_flag=True, default=False,
              help="evaluate even when the regime condition fails")
@click.option("--grid", default=21, show_default=True, type=int,
              help="input lattice resolution for discrete channels")
@_map_errors
def cmd_inner(channel_path: str, theorem: str, out_path: str | None,
              force: bool, grid: int):
    """Capacity-side evaluation: region CSV or sum-capacity JSON."""
    ch = load_channel(channel_path)
    if theorem in ("2", "5") and isinstance(ch, dsc.DiscreteIC):
        if theorem == "2":
            region = dsc.inner_region_strong(ch, ch.d12, grid=grid)
        else:
            region = dsc.inner_region_one_sided(ch, ch.d12, grid=grid)
        if out_path is None:
            raise InputError("--out is required for region output")
        _write_region_csv(region, out_path)
        click.echo(f"wrote {out_path}")
        return
    if theorem == "2":
        if not isinstance(ch, regimes.CorrelatedGaussianIC) or ch.kind != "gaussian-6":
            raise InputError("theorem 2 needs a 'gaussian-6' or discrete spec")
        region = regimes.capacity_region_strong(ch, force=force)
        if out_path is None:
            raise InputError("--out is required for region output")
        _write_region_csv(region, out_path)
        click.echo(f"wrote {out_path}")
    elif theorem == "3":
        if not isinstance(ch, regimes.CorrelatedGaussianIC) or ch.kind != "gaussian-6":
            raise InputError("theorem 3 needs a 'gaussian-6' spec")
        value = regimes.sum_capacity_fwd_own(ch, force=force)
        payload = {"sum_capacity": value, "theorem": 3}
        _echo_json(payload)
        if out_path:
            Path(out_path).write_text(json.dumps(payload, sort_keys=True) + "\n")
    elif theorem == "4":
        if not isinstance(ch, regimes.CorrelatedGaussianIC) or ch.kind != "gaussian-13":
            raise InputError("theorem 4 needs a 'gaussian-13' spec")
        value = regimes.sum_capacity_fwd_interference(ch, force=force)
        payload = {"sum_capacity": value, "theorem": 4}
        _echo_json(payload)
        if out_path:
            Path(out_path).write_text(json.dumps(payload, sort_keys=True) + "\n")
    else:  # theorem 5
        if not isinstance(ch, GaussianIC):
            raise InputError("theorem 5 needs a one-sided 'gaussian' or discrete spec")
        region = regimes.capacity_region_one_sided(ch, force=force)
        if out_path is None:
            raise InputError("--out is required for region output")
        _write_region_csv(region, out_path)
        click.echo(f"wrote {out_path}")


@main.command("check")
@click.option("--channel", "channel_path", required=True, type=click.Path())
@click.option("--condition", required=True, type=click.Choice(["4", "7", "11", "14"]))
@click.option("--grid", default=21, show_default=True, type=int)
@click.option("--aux-card", default=None, type=int)
@click.option("--samples", default=2000, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@_map_errors
def cmd_check(channel_path: str, condition: str, grid: int,
              aux_card: int | None, samples: int, seed: int):
    """Search a regime condition on a discrete channel; print the report."""
    ch = load_channel(channel_path)
    if not isinstance(ch, dsc.DiscreteIC):
        raise InputError("condition checks need a spec with type 'discrete'")
    report = dsc.check_condition(ch, int(condition), grid=grid,
                                 aux_card=aux_card, samples=samples, seed=seed)
    _echo_json(report.to_dict())


@main.command("simulate")
@click.option("--config", "config_path", required=True, type=click.Path())
@_map_errors
def cmd_simulate(config_path: str):
    """Run the conferencing coding-scheme simulator; print result JSON."""
    doc = _load_json(config_path)
    try:
        channel = dsc.DiscreteIC.from_json_dict(doc["channel"])
    except KeyError:
        raise InputError("simulation config needs a 'channel' object") from None
    cfg = sim.SimConfig(
        channel=channel,
        n=int(_float_field(doc, "n")),
        r1=_float_field(doc, "r1"),
        r2=_float_field(doc, "r2"),
        d12=_float_field(doc, "d12", 0.0),
        scheme=str(doc.get("scheme", "thm2")),
        trials=int(_float_field(doc, "trials", 1000)),
        seed=int(_float_field(doc, "seed", 0)),
        p1=np.asarray(doc["p1"], dtype=float) if "p1" in doc else None,
        p2=np.asarray(doc["p2"], dtype=float) if "p2" in doc else None,
        message_cap=int(_float_field(doc, "message_cap", sim.DEFAULT_MESSAGE_CAP)),
    )
    result = sim.simulate(cfg)
    _echo_json(result.to_dict())


if __name__ == "__main__":
    main()
