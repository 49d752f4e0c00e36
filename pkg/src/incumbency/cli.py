"""Command-line front end.

Subcommands: solve, sweep, challengers, simulate, equilibrium, tullock.

Settings are resolved as command-line flag, then ``--config`` file entry,
then built-in default. Exit codes: 0 success, 2 usage or invalid
parameters, 3 numerical failure. A relative ``--output`` path is placed
under ``$INCUMBENCY_OUTPUT_DIR`` when that variable is set.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from .equilibrium import (
    SWEEP_AXES,
    SWEEP_COLUMNS,
    comparative_statics_sweep,
    describe_curve,
    equilibrium_entry,
    larger_field_conditions,
    winprob_vs_challengers,
)
from .errors import ModelError, NumericalError
from .io import load_schedule, read_config, render_csv, render_json, render_text
from .model import ModelParams
from .simulation import SELECTION_MODES, SimulationSpec, estimate_win_prob
from .threshold import SolverSpec, solve_threshold, two_challengers_favor_incumbent
from .tullock import TullockParams, tullock_equilibrium, tullock_foc_residual, tullock_foc_root
from .voteshare import QuadratureSpec, VarianceMode

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

OUTPUT_DIR_ENV = "INCUMBENCY_OUTPUT_DIR"


def _grid(text: str) -> list[float]:
    """Comma list ``0,0.5,1`` or inclusive linspace ``start:stop:num``."""
    text = text.strip()
    if not text:
        return []
    if ":" in text:
        start, stop, num = text.split(":")
        return [float(v) for v in np.linspace(float(start), float(stop), int(num))]
    return [float(v) for v in text.split(",")]


# key -> (type, default, help); keys double as config-file keys.
MODEL_OPTIONS: dict[str, tuple[Callable, Any, str]] = {
    "t": (float, 1.0, "ideology weight"),
    "q": (float, 0.0, "incumbent prior mean quality"),
    "sigma_Q2": (float, 1.0, "prior quality variance"),
    "sigma_s2": (float, 1.0, "primary signal variance"),
    "beta": (float, 1.0, "general/primary signal variance ratio"),
    "lambda": (float, 1.0, "challenger crossover disadvantage (>= 1)"),
    "sigma_eps": (float, 1.0, "std of the common shock"),
    "C": (float, 0.0, "entry cost (prize = 1)"),
}
NUMERIC_OPTIONS: dict[str, tuple[Callable, Any, str]] = {
    "mode": (str, "paper_faithful", "variance mode: paper_faithful or covariance_corrected"),
    "tol": (float, 1e-10, "solver residual tolerance"),
    "max_iter": (int, 200, "solver iteration cap"),
    "nodes": (int, 64, "Gauss-Legendre nodes per half-line"),
}
OUTPUT_OPTIONS: dict[str, tuple[Callable, Any, str]] = {
    "format": (str, "text", "text, csv or json"),
    "output": (str, None, "write to this file instead of stdout"),
}
COMMAND_OPTIONS: dict[str, dict[str, tuple[Callable, Any, str]]] = {
    "solve": {"challengers": (int, None, "number of challengers, 1 or 2 (required)")},
    "sweep": {
        "axis": (str, None, f"swept parameter, one of {', '.join(SWEEP_AXES)} (required)"),
        "grid": (_grid, None, "values as 'a,b,c' or 'start:stop:num' (required)"),
        "workers": (int, 1, "threads"),
    },
    "challengers": {
        "schedule": (str, "panel_a", "schedule CSV path or built-in panel_a / panel_b"),
        "e_max": (int, None, "largest field size (default: whole schedule)"),
    },
    "simulate": {
        "challengers": (int, 1, "number of challengers, 1 or 2"),
        "voters": (int, 2000, "voters per trial (even)"),
        "trials": (int, 20000, "number of trials"),
        "seed": (int, 20240601, "64-bit root seed"),
        "selection": (str, "unconditional_winner", f"one of {', '.join(SELECTION_MODES)}"),
        "eps": (float, None, "fixed shock (default: drawn per trial)"),
        "workers": (int, 1, "threads"),
    },
    "equilibrium": {},
    "tullock": {
        "N": (int, None, "number of primary candidates, >= 2 (required)"),
        "r": (float, 1.0, "contest exponent in (0, 1]"),
        "A": (float, 1.0, "signal cost coefficient"),
    },
}
REQUIRED = {"solve": ("challengers",), "sweep": ("axis", "grid"), "tullock": ("N",)}
USES_MODEL = {"solve", "sweep", "challengers", "simulate", "equilibrium"}
DEFAULT_FORMAT = {"sweep": "csv"}


def _flag(key: str) -> str:
    return "--" + key.replace("_", "-")


def _add(parser: argparse.ArgumentParser, options: dict[str, tuple[Callable, Any, str]]) -> None:
    for key, (kind, default, help_text) in options.items():
        suffix = "" if default is None else f" (default: {default})"
        parser.add_argument(_flag(key), dest=key, type=kind, default=None, help=help_text + suffix)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="incumbency", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="flat 'key = value' settings file")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, options in COMMAND_OPTIONS.items():
        p = sub.add_parser(name, allow_abbrev=False)
        p.add_argument("--config", dest="sub_config", help="flat 'key = value' settings file")
        if name in USES_MODEL:
            _add(p, MODEL_OPTIONS)
            _add(p, NUMERIC_OPTIONS)
        _add(p, options)
        _add(p, OUTPUT_OPTIONS)
    return parser


def resolve_settings(args: argparse.Namespace) -> dict[str, Any]:
    """Merge defaults, config file and flags for the chosen subcommand."""
    table: dict[str, tuple[Callable, Any, str]] = {}
    if args.command in USES_MODEL:
        table.update(MODEL_OPTIONS)
        table.update(NUMERIC_OPTIONS)
    table.update(COMMAND_OPTIONS[args.command])
    table.update(OUTPUT_OPTIONS)

    settings = {key: default for key, (_, default, _) in table.items()}
    settings["format"] = DEFAULT_FORMAT.get(args.command, "text")
    config_path = args.sub_config or args.config
    if config_path:
        for key, raw in read_config(config_path).items():
            if key in table:
                kind = table[key][0]
                try:
                    settings[key] = kind(raw)
                except ValueError as exc:
                    raise ModelError(f"config value for {key!r} is invalid: {raw!r}") from exc
    for key in table:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value

    for key in REQUIRED.get(args.command, ()):
        if settings[key] is None:
            raise ModelError(f"{args.command}: missing required setting {_flag(key)}")
    if settings["format"] not in ("text", "csv", "json"):
        raise ModelError(f"--format must be text, csv or json, got {settings['format']!r}")
    return settings


def _params(s: dict[str, Any]) -> ModelParams:
    return ModelParams(
        t=s["t"],
        q=s["q"],
        sigma_Q2=s["sigma_Q2"],
        sigma_s2=s["sigma_s2"],
        beta=s["beta"],
        lam=s["lambda"],
        sigma_eps=s["sigma_eps"],
        entry_cost=s["C"],
    )


def _mode(s: dict[str, Any]) -> VarianceMode:
    try:
        return VarianceMode(s["mode"])
    except ValueError:
        raise ModelError(f"unknown variance mode {s['mode']!r}") from None


def _solver(s: dict[str, Any]) -> SolverSpec:
    return SolverSpec(tol=s["tol"], max_iter=s["max_iter"])


def _quad(s: dict[str, Any]) -> QuadratureSpec:
    return QuadratureSpec(nodes=s["nodes"], max_nodes=max(1024, 4 * s["nodes"]))


def _single(s: dict[str, Any], record: dict[str, Any]) -> str:
    if s["format"] == "json":
        return render_json(record)
    if s["format"] == "csv":
        return render_csv(list(record), [record])
    return render_text(record)


def _table(s: dict[str, Any], columns: Sequence[str], rows: list[dict], extra: dict | None = None) -> str:
    if s["format"] == "json":
        return render_json({**(extra or {}), "rows": rows})
    if s["format"] == "csv":
        return render_csv(columns, rows)
    body = render_csv(columns, rows, delimiter="\t")
    if extra:
        body += render_text(extra)
    return body


def cmd_solve(s: dict[str, Any]) -> str:
    params = _params(s)
    res = solve_threshold(params, s["challengers"], _mode(s), _solver(s), _quad(s))
    return _single(
        s,
        {
            "n_challengers": s["challengers"],
            "mode": _mode(s).value,
            "eps_star": res.eps_star,
            "win_prob_incumbent": res.win_prob_incumbent,
            "residual": res.residual,
            "iterations": res.iterations,
            "bracket_lo": res.bracket[0],
            "bracket_hi": res.bracket[1],
        },
    )


def cmd_sweep(s: dict[str, Any]) -> str:
    rows = comparative_statics_sweep(
        _params(s), s["axis"], s["grid"], _mode(s), _solver(s), _quad(s), workers=s["workers"]
    )
    return _table(s, SWEEP_COLUMNS, [r.as_dict() for r in rows])


def cmd_equilibrium(s: dict[str, Any]) -> str:
    params = _params(s)
    out = equilibrium_entry(params, _mode(s), _solver(s), _quad(s))
    record = asdict(out)
    record["two_favor_incumbent"] = two_challengers_favor_incumbent(params)
    return _single(s, record)


def cmd_challengers(s: dict[str, Any]) -> str:
    params = _params(s)
    schedule = load_schedule(s["schedule"])
    curve = winprob_vs_challengers(params, schedule, _mode(s), s["e_max"], _solver(s), _quad(s))
    flags = larger_field_conditions(schedule, params.sigma_Q2)
    rows = []
    for e, p in curve:
        s2, b = schedule.at(e) if e else (None, None)
        rows.append(
            {"e": e, "sigma_s2": s2, "beta": b, "win_prob_incumbent": p, "condition": flags[e - 1] if e else None}
        )
    summary = {"summary": describe_curve(curve)}
    if s["format"] == "csv":
        print(f"# {summary['summary']}", file=sys.stderr)
        return render_csv(list(rows[0]), rows)
    return _table(s, list(rows[0]), rows, summary)


def cmd_simulate(s: dict[str, Any]) -> str:
    params = _params(s)
    spec = SimulationSpec(
        n_voters=s["voters"],
        n_trials=s["trials"],
        seed=s["seed"],
        n_challengers=s["challengers"],
        selection_mode=s["selection"],
        eps=s["eps"],
        workers=s["workers"],
    )
    est = estimate_win_prob(params, spec)
    record: dict[str, Any] = {
        "n_challengers": spec.n_challengers,
        "selection": spec.selection_mode,
        "n_voters": spec.n_voters,
        "n_trials": spec.n_trials,
        "seed": spec.seed,
        "win_prob_hat": est.win_prob_hat,
        "std_error": est.std_error,
        "primary_wins_1": est.primary_wins[0],
        "primary_wins_2": est.primary_wins[1],
    }
    if spec.eps is None:
        for mode in VarianceMode:
            analytic = solve_threshold(params, spec.n_challengers, mode, _solver(s), _quad(s)).win_prob_incumbent
            record[f"analytic_{mode.value}"] = analytic
            record[f"z_{mode.value}"] = (
                (est.win_prob_hat - analytic) / est.std_error if est.std_error > 0 else float("nan")
            )
    if spec.selection_mode == "full_pipeline":
        baseline = estimate_win_prob(params, SimulationSpec(**{**spec.__dict__, "selection_mode": "unconditional_winner"}))
        record["win_prob_unconditional"] = baseline.win_prob_hat
        record["selection_delta"] = est.win_prob_hat - baseline.win_prob_hat
    return _single(s, record)


def cmd_tullock(s: dict[str, Any]) -> str:
    tp = TullockParams(s["N"], s["r"], s["A"])
    q_star = tullock_equilibrium(tp)
    root = tullock_foc_root(tp)
    rows = []
    for n in range(tp.N, tp.N + 6):
        other = TullockParams(n, tp.r, tp.A)
        rows.append({"N": n, "q_star": tullock_equilibrium(other), "foc_root": tullock_foc_root(other)})
    extra = {
        "q_star": q_star,
        "foc_residual_at_q_star": tullock_foc_residual(tp, q_star, q_star),
        "foc_root": root,
        "foc_residual_at_root": tullock_foc_residual(tp, root, root),
    }
    return _table(s, ["N", "q_star", "foc_root"], rows, extra)


COMMANDS = {
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "challengers": cmd_challengers,
    "simulate": cmd_simulate,
    "equilibrium": cmd_equilibrium,
    "tullock": cmd_tullock,
}


def _write(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    path = Path(output)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = resolve_settings(args)
        text = COMMANDS[args.command](settings)
        _write(text, settings["output"])
    except ModelError as exc:
        print(f"incumbency {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"incumbency {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
