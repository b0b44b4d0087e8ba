"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O or input
format error.  Output paths default to ``$ENTEVO_OUT_DIR`` (or the current
directory).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from . import io as jsonio
from .lab import SweepConfig, analytic_markers, monte_carlo_sweep, trajectory
from .measures import drop_time, rate_ratio
from .roof import RoofParams, roof_estimate
from .states import (
    DensityMatrix,
    PureState,
    depolarizing_channel,
    isotropic_state,
    max_entangled,
    random_channel,
    random_density_matrix,
    random_pure_state,
)

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
OUT_DIR_ENV = "ENTEVO_OUT_DIR"


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".9g")


def _out_path(arg: str | None, default_name: str) -> Path:
    if arg:
        return Path(arg)
    return Path(os.environ.get(OUT_DIR_ENV, ".")) / default_name


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise UsageError(msg)


def _roof_params(args) -> RoofParams:
    base = RoofParams()
    params = RoofParams(
        ensemble_size=args.ensemble,
        restarts=base.restarts if args.restarts is None else args.restarts,
        max_iters=base.max_iters if args.max_iters is None else args.max_iters,
        patience=base.patience if args.patience is None else args.patience,
    )
    _require(params.restarts >= 0, "--restarts must be >= 0")
    _require(params.max_iters >= 0, "--max-iters must be >= 0")
    _require(params.patience >= 1, "--patience must be >= 1")
    _require(params.ensemble_size is None or params.ensemble_size >= 1, "--ensemble must be >= 1")
    return params


def _write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) for x in row])


def _write_json(path: Path, data) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, default=_json_default) + "\n")


def _json_default(obj):
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if hasattr(obj, "item"):
        return obj.item()
    return repr(obj)


def cmd_trajectory(args) -> int:
    _require(args.d >= 2, "--d must be >= 2")
    _require(args.gamma > 0, "--gamma must be positive")
    _require(args.t_max > 0, "--t-max must be positive")
    _require(args.steps >= 2, "--steps must be >= 2")
    params = _roof_params(args)
    out = _out_path(args.out, f"trajectory_d{args.d}.csv")
    records = trajectory(args.d, args.gamma, args.t_max, args.steps,
                         with_ck_roofs=args.ck_roofs, params=params, seed=args.seed)
    header = ["t", "F", "concurrence", "schmidt_number", "g_positive"]
    if args.ck_roofs:
        header += [f"c_{k}" for k in range(2, args.d + 1)]
    rows = ([r.t, r.F, r.concurrence, r.schmidt_number, r.g_positive, *(r.c_k or ())]
            for r in records)
    _write_csv(out, header, rows)
    _write_json(out.with_suffix(".json"), analytic_markers(args.d, args.gamma))
    return EXIT_OK


def cmd_verify(args) -> int:
    _require(args.d >= 2, "--d must be >= 2")
    _require(args.samples >= 0, "--samples must be >= 0")
    _require(args.n_channels >= 0, "--n-channels must be >= 0")
    config = SweepConfig(d=args.d, n_states=args.samples, n_channels=args.n_channels,
                         n_kraus=args.n_kraus, method=args.method, params=_roof_params(args),
                         seed=args.seed, law=args.law, k=args.k)
    try:
        config.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = _out_path(args.out, f"verify_{args.law}_d{args.d}.json")
    summary = monte_carlo_sweep(config).to_dict()
    summary["config"] = {"d": args.d, "k": args.k, "samples": args.samples,
                         "n_channels": args.n_channels, "n_kraus": args.n_kraus,
                         "method": args.method, "seed": args.seed,
                         "params": vars(config.params)}
    if args.law != "factorization":
        summary["slacks"] = [c["slack"] for c in summary["cases"]]
    _write_json(out, summary)
    return EXIT_OK if summary["failures"] == 0 else EXIT_FAILED


def cmd_rates(args) -> int:
    _require(2 <= args.d_min <= args.d_max, "need 2 <= --d-min <= --d-max")
    _require(args.gamma > 0, "--gamma must be positive")
    out = _out_path(args.out, "rates.csv")
    rows = []
    for d in range(args.d_min, args.d_max + 1):
        ratio = rate_ratio(d, args.gamma)
        rows.append([d, drop_time(d, args.gamma, 2), drop_time(d, args.gamma, d), ratio, ratio / d])
    _write_csv(out, ["d", "t_2", "t_d", "ratio", "ratio_over_d"], rows)
    return EXIT_OK


def cmd_roof(args) -> int:
    params = _roof_params(args)
    state = jsonio.load(args.input)
    if isinstance(state, PureState):
        state = state.projector()
    if not isinstance(state, DensityMatrix):
        raise jsonio.FormatError("roof input must be a pure_state or density_matrix")
    _require(state.d == state.f, "roof estimation needs a d x d state")
    if args.measure == "C":
        _require(args.k is not None and 1 <= args.k <= state.d, "--measure C needs 1 <= --k <= d")
    out = _out_path(args.out, "roof.json")
    est = roof_estimate(state, args.measure, args.k, params, args.seed)
    result = est.to_dict()
    result["seed"] = args.seed
    result["params"] = vars(params)
    _write_json(out, result)
    return EXIT_OK


def cmd_state(args) -> int:
    _require(args.d >= 2, "--d must be >= 2")
    kind = args.kind
    if kind == "isotropic":
        _require(args.F is not None, "--F is required for isotropic states")
        obj = isotropic_state(args.d, args.F)
    elif kind == "max-entangled":
        obj = max_entangled(args.d)
    elif kind == "random-pure":
        obj = random_pure_state(args.d, seed=args.seed)
    elif kind == "random-mixed":
        obj = random_density_matrix(args.d, args.rank, seed=args.seed)
    elif kind == "depolarizing":
        _require(args.p is not None, "--p is required for depolarizing channels")
        obj = depolarizing_channel(args.d, args.p)
    else:
        obj = random_channel(args.d, args.n_kraus, seed=args.seed)
    out = _out_path(args.out, f"{kind}_d{args.d}.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    jsonio.save(obj, out)
    return EXIT_OK


def _add_roof_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("roof optimizer")
    g.add_argument("--ensemble", type=int, default=None, help="decomposition size m")
    g.add_argument("--restarts", type=int, default=None)
    g.add_argument("--max-iters", type=int, default=None)
    g.add_argument("--patience", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entevo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trajectory", help="one-sided depolarization of Phi (CSV + JSON markers)")
    p.add_argument("--d", type=int, default=5)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--t-max", type=float, default=0.35)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--ck-roofs", action="store_true", help="add roof estimates of C_2..C_d")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    _add_roof_options(p)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("verify", help="Monte Carlo check of a law (JSON summary)")
    p.add_argument("--law", choices=("factorization", "two-sided", "ck"), default="factorization")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--samples", type=int, default=20, help="number of random initial states")
    p.add_argument("--n-channels", type=int, default=1, help="random channels (pairs for two-sided)")
    p.add_argument("--n-kraus", type=int, default=2)
    p.add_argument("--method", choices=("auto", "exact_pure", "wootters", "roof"), default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    _add_roof_options(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rates", help="drop times and G/C decay-rate ratio per dimension")
    p.add_argument("--d-min", type=int, default=2)
    p.add_argument("--d-max", type=int, default=10)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("roof", help="convex-roof estimate for a state JSON file")
    p.add_argument("--input", required=True)
    p.add_argument("--measure", choices=("G", "C"), default="G")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    _add_roof_options(p)
    p.set_defaults(func=cmd_roof)

    p = sub.add_parser("state", help="write a state or channel in the JSON interchange format")
    p.add_argument("--kind", required=True,
                   choices=("isotropic", "max-entangled", "random-pure", "random-mixed",
                            "depolarizing", "random-channel"))
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--F", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--rank", type=int)
    p.add_argument("--n-kraus", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_state)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except jsonio.FormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
