"""Command-line interface.

Every command writes one result file (or stdout). CSV files always carry a
header row and LF line endings; JSON files carry a top-level ``"schema": 1``.
Exit codes: 0 success, 2 invalid input, 3 resource budget exceeded, 1 internal.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from decimal import Decimal, localcontext
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from percolab import analytics, montecarlo, predicates
from percolab.engine import Configuration, run_fast
from percolab.errors import BoundaryError, BudgetError, ParameterError
from percolab.topology import GraphShape, Site, index_of, site_of

SCHEMA = 1

SIMULATE_COLUMNS = ("p", "trials", "successes", "estimate", "ci_low", "ci_high", "mean_density")
SWEEP_COLUMNS = ("a",) + SIMULATE_COLUMNS + ("theory",)
PC_COLUMNS = ("alpha", "trials", "estimate", "ci_low", "ci_high", "resolution")
DENSITY_COLUMNS = ("p", "trials", "mean", "std", "min", "q1", "median", "q3", "max")
PREDICTION_COLUMNS = ("model", "value", "regime", "note", "constant", "transition", "valid")
BIRTHDAY_COLUMNS = ("mode", "n", "m", "k", "value", "valid", "note")


# ---------------------------------------------------------------------------
# result files


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _uncell(s: str):
    if s == "":
        return None
    if s in ("true", "false"):
        return s == "true"
    for conv in (int, float):
        try:
            return conv(s)
        except ValueError:
            pass
    return s


def format_csv(columns: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(x) for x in row])
    return buf.getvalue()


def format_json(command: str, body: dict) -> str:
    doc = {"schema": SCHEMA, "command": command}
    doc.update(body)
    return json.dumps(doc, indent=2, allow_nan=True) + "\n"


def load_result(path) -> object:
    """Read back a result file: a dict for JSON, a list of row dicts for CSV."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        if doc.get("schema") != SCHEMA:
            raise ParameterError(f"unsupported schema {doc.get('schema')!r}")
        return doc
    reader = csv.DictReader(io.StringIO(text))
    return [{k: _uncell(v) for k, v in row.items()} for row in reader]


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# configuration files


def parse_config(text: str, source: str = "<config>") -> Configuration:
    """First data line ``d1 d2 m n theta``, then one line of coordinates per occupied site."""
    shape = None
    occ = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParameterError(f"{where}: expected integers, got {line!r}") from None
        if shape is None:
            if len(nums) != 5:
                raise ParameterError(f"{where}: header needs 5 integers 'd1 d2 m n theta', got {len(nums)}")
            try:
                shape = GraphShape(*nums)
            except (ValueError, TypeError, OverflowError) as exc:
                raise ParameterError(f"{where}: {exc}") from None
            occ = np.zeros(shape.size, dtype=np.bool_)
            continue
        need = shape.d1 + shape.d2
        if len(nums) != need:
            raise ParameterError(f"{where}: a site needs {need} coordinates, got {len(nums)}")
        try:
            occ[index_of(shape, Site(nums[: shape.d1], nums[shape.d1:]))] = True
        except ValueError as exc:
            raise ParameterError(f"{where}: {exc}") from None
    if shape is None:
        raise ParameterError(f"{source}: no header line 'd1 d2 m n theta'")
    return Configuration(shape, occ)


def format_config(config: Configuration) -> str:
    s = config.shape
    lines = [f"{s.d1} {s.d2} {s.m} {s.n} {s.theta}"]
    for v in np.flatnonzero(config.occupied):
        site = site_of(s, int(v))
        lines.append(" ".join(str(c) for c in site.z + site.k))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument helpers


def _add_shape(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_argument_group("shape")
    g.add_argument("--d1", type=int, required=required, help="number of cycle factors")
    g.add_argument("--d2", type=int, required=required, help="number of complete-graph factors")
    g.add_argument("--m", type=int, required=required, help="cycle length")
    g.add_argument("--n", type=int, required=required, help="complete-graph order")
    g.add_argument("--theta", type=int, required=required, help="activation threshold")


def _add_output(p: argparse.ArgumentParser, formats=("csv", "json")) -> None:
    p.add_argument("--out", "-o", default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=formats, default=formats[0])


def _add_density(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", type=float, default=None, help="initial density")
    p.add_argument("--a", type=float, default=None, help="scaling constant; needs --regime")
    p.add_argument("--regime", choices=montecarlo.REGIMES, default=None,
                   help="p form used with --a")


def _shape(args) -> GraphShape:
    try:
        return GraphShape(args.d1, args.d2, args.m, args.n, args.theta)
    except (ValueError, TypeError, OverflowError) as exc:
        raise ParameterError(str(exc)) from None


def _positive(name: str, value: int) -> int:
    if value < 1:
        raise ParameterError(f"{name} must be positive")
    return value


def _parse_grid(text: str) -> list[float]:
    items = [t for t in text.replace(" ", ",").split(",") if t]
    try:
        return [float(t) for t in items]
    except ValueError:
        raise ParameterError(f"grid must be a comma separated list of numbers, got {text!r}") from None


def _shape_dict(s: GraphShape) -> dict:
    return {"d1": s.d1, "d2": s.d2, "m": s.m, "n": s.n, "theta": s.theta}


def _estimate_row(p: float, r: montecarlo.EstimateResult) -> list:
    return [p, r.trials, r.successes, float(r.estimate), r.ci_low, r.ci_high, r.mean_final_density]


# ---------------------------------------------------------------------------
# Monte Carlo commands


def cmd_simulate(args) -> int:
    shape = _shape(args)
    batch = montecarlo.TrialBatch(shape, p=args.p, trials=_positive("trials", args.trials),
                                  master_seed=args.seed, a=args.a, regime=args.regime)
    p = batch.probability
    res = montecarlo.estimate_span(batch, z=args.z)
    if args.format == "csv":
        text = format_csv(SIMULATE_COLUMNS, [_estimate_row(p, res)])
    else:
        body = {"shape": _shape_dict(shape), "p": p, "a": args.a, "regime": args.regime,
                "z": args.z, "result": res.as_dict()}
        text = format_json("simulate", body)
    _emit(text, args.out)
    return 0


def cmd_sweep(args) -> int:
    shape = _shape(args)
    grid = _parse_grid(args.grid)
    if not grid:
        raise ParameterError("grid is empty")
    points = montecarlo.sweep_transition(shape, args.regime, grid, _positive("trials", args.trials),
                                         args.seed, z=args.z)
    ell = analytics.ell_of(shape.theta)
    theory = [analytics.gradual_limit_phi(pt.a, ell) if args.regime == "gradual" else None
              for pt in points]
    if args.format == "csv":
        rows = [[pt.a] + _estimate_row(pt.p, pt.result) + [th] for pt, th in zip(points, theory)]
        text = format_csv(SWEEP_COLUMNS, rows)
    else:
        body = {
            "shape": _shape_dict(shape),
            "regime": args.regime,
            "z": args.z,
            "points": [{"a": pt.a, "p": pt.p, "theory": th, "result": pt.result.as_dict()}
                       for pt, th in zip(points, theory)],
        }
        text = format_json("sweep", body)
    _emit(text, args.out)
    return 0


def _boundary_head(exc: Exception) -> str:
    return str(exc).split(";", 1)[0]


def quantile_theory(shape: GraphShape, alpha: float, model: str, gamma: Optional[float] = None,
                    lam: Optional[float] = None) -> analytics.Prediction:
    """Leading-order prediction of p_alpha for ``shape`` under ``model`` (zk2 or cycle).

    Sharp branches do not depend on alpha at this order. On the gradual
    branch the constant solves phi(a) = alpha.
    """
    if model == "zk2":
        if shape.d1 != 1 or shape.d2 != 2:
            raise ParameterError("model zk2 needs d1 = 1 and d2 = 2")
        g = math.log(shape.m) / math.log(shape.n) if gamma is None else gamma
        try:
            pred = analytics.pc_zk2(shape.theta, g, shape.n, shape.m)
        except BoundaryError as exc:
            raise BoundaryError(f"{_boundary_head(exc)}; use theory --model mixed") from None
        if pred.transition == "gradual":
            ell = analytics.ell_of(shape.theta)
            a = (math.factorial(ell + 1) / 2 * -math.log1p(-alpha)) ** (1.0 / (ell + 1))
            value = analytics.p_gradual_form(a, ell, shape.n, shape.m)
            return analytics.Prediction(value, pred.regime, pred.note, constant=a,
                                        transition=pred.transition, valid=pred.valid)
        return pred
    if model == "cycle":
        if shape.d2 != 1:
            raise ParameterError("model cycle needs d2 = 1")
        return analytics.pc_cycle_complete(shape.d1, shape.theta, shape.m, shape.n, lam)
    raise ParameterError(f"unknown model {model!r}; choose zk2 or cycle")


def cmd_pc(args) -> int:
    shape = _shape(args)
    if not 0.0 < args.alpha < 1.0:
        raise ParameterError("alpha must lie in (0,1)")
    if not 0.0 < args.resolution < 1.0:
        raise ParameterError("resolution must lie in (0,1)")
    theory = None
    if args.regime is not None:
        theory = quantile_theory(shape, args.alpha, args.regime, args.gamma, args.lam)
    q = montecarlo.estimate_pc(shape, args.alpha, _positive("trials", args.trials), args.seed,
                               resolution=args.resolution, bootstrap=args.bootstrap)
    if args.format == "csv":
        cols = PC_COLUMNS + (("theory", "theory_regime") if theory else ())
        row = [q.alpha, q.trials, q.estimate, q.ci_low, q.ci_high, args.resolution]
        if theory:
            row += [theory.value, theory.regime]
        text = format_csv(cols, [row])
    else:
        body = {"shape": _shape_dict(shape), "result": q.as_dict(), "samples": list(q.samples),
                "theory": theory.as_dict() if theory else None}
        text = format_json("pc", body)
    _emit(text, args.out)
    return 0


def cmd_density(args) -> int:
    shape = _shape(args)
    p = montecarlo.resolve_p(shape, args.p, args.a, args.regime)
    r = montecarlo.estimate_density(shape, p, _positive("trials", args.trials), args.seed)
    if args.format == "csv":
        q1, med, q3 = r.quartiles
        text = format_csv(DENSITY_COLUMNS, [[p, r.trials, r.mean, r.std, r.minimum, q1, med, q3, r.maximum]])
    else:
        text = format_json("density", {"shape": _shape_dict(shape), "p": p, "result": r.as_dict()})
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------------------
# predicate reports


def _input_config(args) -> Configuration:
    if args.config is not None:
        path = Path(args.config)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ParameterError(f"cannot read {path}: {exc.strerror}") from None
        config = parse_config(text, str(path))
        if args.theta is not None:
            config = Configuration(config.shape.with_theta(args.theta), config.occupied)
        return config
    if None in (args.d1, args.d2, args.m, args.n, args.theta) or args.p is None:
        raise ParameterError("give --config FILE, or the shape flags with --p and --seed")
    shape = _shape(args)
    p = montecarlo.resolve_p(shape, args.p)
    return montecarlo.sample_config(shape, p, args.seed, args.trial)


def _plane_stack(config: Configuration) -> np.ndarray:
    s = config.shape
    if s.d2 != 2 or s.d1 > 1:
        raise ParameterError("plane reports need d2 = 2 and d1 in {0, 1}")
    return config.occupied.reshape(-1, s.n, s.n)


def cmd_plane(args) -> int:
    config = _input_config(args)
    if args.save_config:
        _emit(format_config(config), args.save_config)
    g = _plane_stack(config)
    theta = config.shape.theta
    ks = _parse_ks(args.ks) if args.ks else None
    planes = predicates.classify_planes(g, theta, ks)
    final, stats = run_fast(config)
    body = {
        "shape": _shape_dict(config.shape),
        "occupied": config.occupied_count,
        "spans": stats.spanned,
        "final_occupied": final.occupied_count,
        "planes": [pc.as_dict() for pc in planes],
    }
    _emit(format_json("plane", body), args.out)
    return 0


def _parse_ks(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ParameterError(f"--ks must be a comma separated list of integers, got {text!r}") from None


def check_report(config: Configuration) -> dict:
    """Condition verdicts that apply to the shape, cross-checked against the engine."""
    s = config.shape
    final, stats = run_fast(config)
    report = {
        "shape": _shape_dict(s),
        "occupied": config.occupied_count,
        "spans": stats.spanned,
        "final_occupied": final.occupied_count,
    }
    if s.d1 == 1 and s.d2 == 2 and s.m >= 3 and s.theta >= 2:
        g = _plane_stack(config)
        planes = predicates.classify_planes(g, s.theta)
        suff = predicates.sufficient_condition(g, s.theta)
        nec = predicates.necessary_condition(g, s.theta)
        report.update(
            sufficient=suff,
            necessary=nec,
            blocking_intervals=[[b.i1, b.i2] for b in predicates.find_blocking_intervals(g, s.theta)],
            exceptional_planes=[pc.index for pc in planes if pc.exceptional],
            z_assisted={v: predicates.count_z_assisted(g, s.theta, v)
                        for v in sorted(predicates.Z_ASSISTED_VARIANTS)},
        )
        if suff and not stats.spanned:
            raise AssertionError("sufficient condition holds but the configuration does not span")
        if stats.spanned and not nec:
            raise AssertionError("configuration spans but the necessary condition fails")
    if s.d2 == 1 and s.d1 >= 1 and s.d1 + 1 <= s.theta <= 2 * s.d1 + 1:
        box = predicates.find_empty_safe_box(config)
        report["empty_safe_box"] = (
            None if box is None else {"corner": list(box.corner), "doubled_axes": list(box.doubled_axes)}
        )
        if box is not None and stats.spanned:
            raise AssertionError("configuration spans despite an empty safe box")
    return report


def cmd_check(args) -> int:
    config = _input_config(args)
    if args.save_config:
        _emit(format_config(config), args.save_config)
    _emit(format_json("check", check_report(config)), args.out)
    return 0


# ---------------------------------------------------------------------------
# theory and birthday


def _need(args, *names) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise ParameterError(f"model {args.model} needs {', '.join(missing)}")


def theory_prediction(args) -> analytics.Prediction:
    model = args.model
    if model == "zk2":
        _need(args, "theta", "gamma", "n")
        try:
            return analytics.pc_zk2(args.theta, args.gamma, args.n, args.m)
        except BoundaryError as exc:
            raise BoundaryError(f"{_boundary_head(exc)}; use --model mixed") from None
    if model == "cycle":
        _need(args, "d", "theta", "m", "n")
        return analytics.pc_cycle_complete(args.d, args.theta, args.m, args.n, args.lam)
    if model == "gradual":
        _need(args, "theta", "a")
        ell = analytics.ell_of(args.theta)
        return analytics.Prediction(analytics.gradual_limit_phi(args.a, ell), "gradual",
                                    "limiting spanning probability", transition="gradual")
    if model == "mixed":
        _need(args, "theta", "a")
        ell = analytics.ell_of(args.theta)
        note = "limiting spanning probability on the boundary scaling of m"
        if args.n is not None:
            note += f"; m ~ {analytics.boundary_m(args.n, ell)} at n = {args.n}"
        return analytics.Prediction(analytics.mixed_limit(args.a, ell), "mixed", note,
                                    constant=analytics.abundance_threshold(ell), transition="mixed")
    if model == "abundance":
        _need(args, "theta")
        ell = analytics.ell_of(args.theta)
        return analytics.Prediction(analytics.abundance_threshold(ell), "abundance",
                                    "scarce final set below a*, abundant above")
    if model == "boundary":
        _need(args, "theta", "n")
        ell = analytics.ell_of(args.theta)
        return analytics.Prediction(float(analytics.boundary_m(args.n, ell)), "boundary",
                                    "m ~ n^(1/ell) / (log n)^(1+1/ell)")
    if model == "plane":
        _need(args, "kind", "theta", "a", "n")
        return analytics.plane_probability(args.kind, args.theta, args.a, args.n, args.m)
    raise ParameterError(f"unknown model {model!r}")


def cmd_theory(args) -> int:
    pred = theory_prediction(args)
    if args.format == "csv":
        d = pred.as_dict()
        text = format_csv(PREDICTION_COLUMNS, [[args.model] + [d[c] for c in PREDICTION_COLUMNS[1:]]])
    else:
        text = format_json("theory", {"model": args.model, "prediction": pred.as_dict()})
    _emit(text, args.out)
    return 0


def _decimal(frac, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(frac.numerator) / Decimal(frac.denominator))


def cmd_birthday(args) -> int:
    n, m, k = args.n, args.m, args.k
    rows = []
    body = {"n": n, "m": m, "k": k, "mode": args.mode}
    if args.digits < 1:
        raise ParameterError("digits must be positive")
    if args.mode in ("exact", "both"):
        frac = analytics.birthday_exact(n, m, k, bit_budget=args.bit_budget)
        dec = _decimal(frac, args.digits)
        rows.append(["exact", n, m, k, dec, True, "probability that no day gets k birthdays"])
        body["exact"] = {"decimal": dec}
        if args.fraction:
            body["exact"].update(numerator=str(frac.numerator), denominator=str(frac.denominator))
    if args.mode in ("asymptotic", "both"):
        pred = analytics.birthday_asymptotic(n, m, k)
        rows.append(["asymptotic", n, m, k, pred.value, pred.valid, pred.note])
        body["asymptotic"] = pred.as_dict()
    if args.format == "csv":
        text = format_csv(BIRTHDAY_COLUMNS, rows)
    else:
        text = format_json("birthday", body)
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="percolab",
        description="Bootstrap percolation on Z_m^d1 x K_n^d2: simulation, predicates, theory.",
        epilog="PERCOLAB_THREADS caps the worker threads (0 = one per CPU). "
               "Exit codes: 0 ok, 2 invalid input, 3 budget exceeded, 1 internal error.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="estimate the spanning probability at one density",
                       description="CSV columns: " + ",".join(SIMULATE_COLUMNS))
    _add_shape(p)
    _add_density(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--z", type=float, default=montecarlo.Z95, help="normal quantile of the CI")
    _add_output(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="spanning probability over a grid of scaling constants",
                       description="One row per grid point. CSV columns: " + ",".join(SWEEP_COLUMNS)
                       + ". theory is the limiting probability on the gradual regime.")
    _add_shape(p)
    p.add_argument("--regime", choices=montecarlo.REGIMES, required=True)
    p.add_argument("--grid", required=True, help="comma separated values of a")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--z", type=float, default=montecarlo.Z95)
    _add_output(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("pc", help="quantile of the pathwise critical probability",
                       description="CSV columns: " + ",".join(PC_COLUMNS)
                       + ", plus theory,theory_regime when --regime is given.")
    _add_shape(p)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resolution", type=float, default=montecarlo.DEFAULT_RESOLUTION)
    p.add_argument("--bootstrap", type=int, default=1000, help="bootstrap resamples for the CI")
    p.add_argument("--regime", choices=("zk2", "cycle"), default=None,
                   help="theory model for the prediction column")
    p.add_argument("--gamma", type=float, default=None, help="zk2: log m / log n (default from shape)")
    p.add_argument("--lam", type=float, default=None, help="cycle with theta <= d: lattice constant")
    _add_output(p)
    p.set_defaults(func=cmd_pc)

    p = sub.add_parser("density", help="final occupied density statistics",
                       description="CSV columns: " + ",".join(DENSITY_COLUMNS))
    _add_shape(p)
    _add_density(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    p.set_defaults(func=cmd_density)

    for name, func, text in (
        ("plane", cmd_plane, "per-plane predicate report (JSON)"),
        ("check", cmd_check, "condition verdicts and engine cross-check (JSON)"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", default=None, help="configuration file")
        _add_shape(p, required=False)
        p.add_argument("--p", type=float, default=None, help="sample density instead of --config")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trial", type=int, default=0)
        p.add_argument("--save-config", default=None, help="also write the configuration used")
        if name == "plane":
            p.add_argument("--ks", default=None, help="comma separated k values (default theta-2..theta)")
        _add_output(p, formats=("json",))
        p.set_defaults(func=func)

    p = sub.add_parser("theory", help="closed-form predictions")
    p.add_argument("--model", required=True,
                   choices=("zk2", "cycle", "gradual", "mixed", "abundance", "boundary", "plane"))
    p.add_argument("--theta", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--d", type=int, help="cycle model: number of cycle factors")
    p.add_argument("--lam", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--kind", choices=analytics.PLANE_KINDS)
    _add_output(p)
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("birthday", help="k-coincidence birthday probability")
    p.add_argument("--n", type=int, required=True, help="days")
    p.add_argument("--m", type=int, required=True, help="people")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--mode", choices=("exact", "asymptotic", "both"), default="both")
    p.add_argument("--digits", type=int, default=20, help="significant digits of the exact value")
    p.add_argument("--fraction", action="store_true", help="include numerator and denominator (JSON)")
    p.add_argument("--bit-budget", type=int, default=analytics.BIRTHDAY_BIT_BUDGET)
    _add_output(p)
    p.set_defaults(func=cmd_birthday)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetError as exc:
        print(f"percolab: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except MemoryError:
        print("percolab: out of memory", file=sys.stderr)
        return 3
    except (ValueError, OverflowError) as exc:
        print(f"percolab: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"percolab: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
