"""Command-line front end: ``dcgroups <command> [options]``.

Exit codes: 0 ok, 1 configuration error, 2 resource cap hit, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .catalog import build_catalog
from .config import RunConfig, load_config_file, parse_genset, parse_group, parse_range, \
    parse_subgroup
from .conjugacy import cr_sequence, verify_cr_eq_dc
from .dc import dc_montecarlo, dc_of_measure, dc_sequence
from .errors import ConfigError, DcError, ResourceError
from .finite import jsonable, verify_catalog_group
from .groups import FiniteGroup
from .index import (MixingParams, index_measurement_curve, mixing_bound, schreier_cosets,
                    verify_uniform_measurement)
from .measure import BallUniform, WalkPower, lazy_step, walk_power

EXIT_OK, EXIT_CONFIG, EXIT_RESOURCE, EXIT_VERIFY = 0, 1, 2, 3

INDEPENDENCE_BALL_N = "150..200"
INDEPENDENCE_WALK_N = "500..600"
INDEPENDENCE_LAZY = "1/4"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _frac(v, what: str) -> Fraction:
    try:
        return Fraction(str(v))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{what} must be a number, got {v!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    a = common.add_argument
    a("--config", help="YAML or JSON file with option values; flags win")
    a("--group", help="group name or catalog entry (heisenberg, dinf, z, z^2, f2, z-x-f2, Q8 ...)")
    a("--gens", help="comma-separated words; must be symmetric and contain e")
    a("--seq", choices=["ball", "walk"])
    a("--n", help="A..B, N, or a comma list")
    a("--tail", type=int, help="tail window")
    a("--seed", type=int)
    a("--mc-trials", type=int, dest="mc_trials")
    a("--lazy", help="identity mass of the walk step")
    a("--float", action="store_const", const=True, dest="float_mode",
      help="float arithmetic for walk convolution")
    a("--subgroup", action="append",
      help="even-sum, center, translations, factor:i or comma-separated words")
    a("--probe", help="coset representative word for index curves")
    a("--coset-cap", type=int, dest="coset_cap")
    a("--ball-cap", type=int, dest="ball_cap")
    a("--pairs-cap", type=int, dest="pairs_cap")
    a("--eps")
    a("--tol")
    a("--c")
    a("--walk-n", dest="walk_n", help="walk range for the independence check")
    a("--json", help="write the JSON report here (default: stdout)")
    a("--csv", help="write the CSV series here")
    a("--plot", action="store_const", const=True,
      help="also render a PNG next to the JSON/CSV output")

    p = _Parser(prog="dcgroups", description="Degree of commutativity and conjugacy ratio.")
    p.add_argument("--version", action="version", version=f"dcgroups {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("dc", parents=[common], help="degree of commutativity per n")
    sub.add_parser("cr", parents=[common], help="conjugacy ratio per n")
    sub.add_parser("index-curve", parents=[common], help="|mu_n(xH) - 1/[G:H]| per n")
    sub.add_parser("mix-bound", parents=[common], help="mixing bound for (c, eps)")
    v = sub.add_parser("verify", parents=[common], help="machine checks")
    v.add_argument("target", choices=["catalog", "rw-uniform", "cr-eq-dc", "independence"])
    return p


# ---------------------------------------------------------------------------------
# commands; each returns (exit code, result dict, csv text or None, plot series)


def _require(value, flag: str):
    if value is None:
        raise ConfigError(f"{flag} is required")
    return value


def _group_and_gens(cfg: RunConfig):
    group = parse_group(_require(cfg.group, "--group"))
    return group, parse_genset(group, cfg.gens)


def _step(cfg: RunConfig, group, S, default_lazy="1/2"):
    step = lazy_step(group, S, _frac(cfg.lazy or default_lazy, "--lazy"))
    return step.to_float() if cfg.float_mode else step


def _single(cfg: RunConfig):
    subs = cfg.subgroup or []
    if isinstance(subs, str):
        subs = [subs]
    if len(subs) != 1:
        raise ConfigError("exactly one --subgroup is needed")
    return subs[0]


def cmd_dc(cfg: RunConfig):
    group, S = _group_and_gens(cfg)
    ns = parse_range(_require(cfg.n, "--n"))
    if cfg.seq == "ball":
        rep = dc_sequence(BallUniform(group, S, cfg.ball_cap), ns, cfg.tail, cfg.pairs_cap)
        series = {"dc": [(p.n, float(p.value)) for p in rep.points]}
        return EXIT_OK, rep.to_dict(), rep.to_csv(), series
    step = _step(cfg, group, S)
    if cfg.mc_trials is None:
        rep = dc_sequence(WalkPower(step, cfg.ball_cap), ns, cfg.tail, cfg.pairs_cap)
        series = {"dc": [(p.n, float(p.value)) for p in rep.points]}
        return EXIT_OK, rep.to_dict(), rep.to_csv(), series
    points = []
    lines = ["n,mean,ci_low,ci_high"]
    for n in sorted(set(ns)):
        est = dc_montecarlo(step, n, cfg.mc_trials, cfg.seed)
        d = {"n": n, **est.to_dict()}
        if isinstance(group, FiniteGroup):
            exact = dc_of_measure(walk_power(step, n, cfg.ball_cap), cfg.pairs_cap)
            d["exact"] = float(exact)
            d["ci_contains_exact"] = est.ci_low <= exact <= est.ci_high
        points.append(d)
        lines.append(f"{n},{est.mean!r},{est.ci_low!r},{est.ci_high!r}")
    result = {"group": str(group), "sequence": {"kind": "walk", "estimator": "montecarlo"},
              "points": points}
    series = {"mean": [(p["n"], p["mean"]) for p in points]}
    return EXIT_OK, result, "\n".join(lines) + "\n", series


def cmd_cr(cfg: RunConfig):
    group, S = _group_and_gens(cfg)
    if cfg.seq != "ball":
        raise ConfigError("cr is defined for ball sequences")
    ns = parse_range(_require(cfg.n, "--n"))
    rep = cr_sequence(BallUniform(group, S, cfg.ball_cap), ns, cfg.tail)
    series = {"cr": [(p.n, float(p.cr_value)) for p in rep.points]}
    return EXIT_OK, rep.to_dict(), rep.to_csv(), series


def cmd_index_curve(cfg: RunConfig):
    group, S = _group_and_gens(cfg)
    ns = parse_range(_require(cfg.n, "--n"))
    H = parse_subgroup(group, _single(cfg))
    x = group.parse(cfg.probe or "e")
    table = schreier_cosets(group, S, H, cfg.coset_cap)
    if cfg.seq == "ball":
        seq = BallUniform(group, S, cfg.ball_cap)
    else:
        seq = WalkPower(_step(cfg, group, S), cfg.ball_cap)
    curve = index_measurement_curve(seq, H, x, ns, index=table.index)
    result = {"group": str(group), "subgroup": H.description, "probe": group.format(x),
              "index": str(table.index), "sequence": seq.describe(),
              "points": [{"n": n, "deviation": float(d)} for n, d in curve]}
    csv_text = "n,deviation\n" + "".join(f"{n},{float(d)!r}\n" for n, d in curve)
    return EXIT_OK, result, csv_text, {"deviation": [(n, float(d)) for n, d in curve]}


def cmd_mix_bound(cfg: RunConfig):
    params = MixingParams(_frac(_require(cfg.c, "--c"), "--c"),
                          _frac(_require(cfg.eps, "--eps"), "--eps"))
    n = mixing_bound(params)
    return EXIT_OK, {"c": str(params.c), "epsilon": str(params.epsilon), "n": n}, None, None


def _verify_catalog(cfg: RunConfig):
    names = None
    if cfg.group is not None:
        names = {parse_group(cfg.group).name}
    rows = []
    for name, G in build_catalog():
        if names is not None and name not in names:
            continue
        rows += [v.to_dict() for v in verify_catalog_group(G)]
    failed = [r for r in rows if not r["passed"]]
    result = {"checks": rows, "passed": not failed, "failures": failed}
    return (EXIT_VERIFY if failed else EXIT_OK), result, None, None


def _verify_rw_uniform(cfg: RunConfig):
    group, S = _group_and_gens(cfg)
    subs = cfg.subgroup or []
    if isinstance(subs, str):
        subs = [subs]
    if not subs:
        raise ConfigError("at least one --subgroup is required")
    step = lazy_step(group, S, _frac(cfg.lazy or "1/2", "--lazy"))
    eps = _frac(cfg.eps or "0.05", "--eps")
    rep = verify_uniform_measurement(step, [parse_subgroup(group, s) for s in subs], eps,
                                     cap=cfg.coset_cap)
    result = {"group": str(group), **rep.to_dict()}
    return (EXIT_OK if rep.passed else EXIT_VERIFY), result, None, None


def _verify_cr_eq_dc(cfg: RunConfig):
    group, S = _group_and_gens(cfg)
    n = max(parse_range(_require(cfg.n, "--n")))
    v = verify_cr_eq_dc(BallUniform(group, S, cfg.ball_cap), n, _frac(cfg.tol or "0.05", "--tol"))
    return (EXIT_OK if v.passed else EXIT_VERIFY), v.to_dict(), None, None


def _verify_independence(cfg: RunConfig):
    group = parse_group(cfg.group or "dinf")
    S = parse_genset(group, cfg.gens)
    tol = _frac(cfg.tol or "0.02", "--tol")
    ball_ns = parse_range(cfg.n or INDEPENDENCE_BALL_N)
    walk_ns = parse_range(cfg.walk_n or INDEPENDENCE_WALK_N)
    ball = dc_sequence(BallUniform(group, S, cfg.ball_cap), ball_ns, len(ball_ns), cfg.pairs_cap)
    step = lazy_step(group, S, _frac(cfg.lazy or INDEPENDENCE_LAZY, "--lazy")).to_float()
    walk = dc_sequence(WalkPower(step, cfg.ball_cap), walk_ns, len(walk_ns), cfg.pairs_cap)
    gap = independence_gap(ball.tail_min, ball.tail_max, walk.tail_min, walk.tail_max)
    passed = gap <= tol
    result = {"group": str(group), "ball": ball.to_dict(), "walk": walk.to_dict(),
              "gap": gap, "tol": float(tol), "passed": passed}
    csv_text = "sequence,n,value\n" + "".join(
        f"{kind},{p.n},{float(p.value)!r}\n" for kind, rep in (("ball", ball), ("walk", walk))
        for p in rep.points)
    series = {"ball": [(p.n, float(p.value)) for p in ball.points],
              "walk": [(p.n, float(p.value)) for p in walk.points]}
    return (EXIT_OK if passed else EXIT_VERIFY), result, csv_text, series


def independence_gap(a_min, a_max, b_min, b_max) -> float:
    """Largest distance between a value of one tail range and a value of the other."""
    return float(max(abs(a_max - b_min), abs(b_max - a_min)))


_VERIFY = {"catalog": _verify_catalog, "rw-uniform": _verify_rw_uniform,
           "cr-eq-dc": _verify_cr_eq_dc, "independence": _verify_independence}

_COMMANDS = {"dc": cmd_dc, "cr": cmd_cr, "index-curve": cmd_index_curve,
             "mix-bound": cmd_mix_bound}


# ---------------------------------------------------------------------------------
# output


def render_json(command: str, cfg: RunConfig, result: dict) -> str:
    doc = {"tool": "dcgroups", "version": __version__, "command": command,
           "config": jsonable(cfg.to_dict()), "result": jsonable(result)}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _plot_path(cfg: RunConfig) -> Path:
    base = cfg.json or cfg.csv
    if base is None:
        raise ConfigError("--plot needs --json or --csv to know where to write")
    return Path(base).with_suffix(".png")


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    target = args.pop("target", None)
    config_path = args.pop("config", None)
    file_values = load_config_file(config_path) if config_path else {}
    cfg = RunConfig.merge(file_values, args)
    plot_path = _plot_path(cfg) if cfg.plot else None
    if command == "verify":
        fn = _VERIFY[target]
        command = f"verify {target}"
    else:
        fn = _COMMANDS[command]
    code, result, csv_text, series = fn(cfg)
    text = render_json(command, cfg, result)
    if command == "mix-bound":
        print(result["n"], file=stdout)
        if cfg.json:
            Path(cfg.json).write_text(text)
    elif cfg.json:
        Path(cfg.json).write_text(text)
    else:
        stdout.write(text)
    if csv_text is not None and cfg.csv:
        Path(cfg.csv).write_text(csv_text)
    if plot_path is not None and series:
        from .plotting import plot_series

        plot_series(series, plot_path, title=f"{command}: {result.get('group', '')}")
    if code == EXIT_VERIFY:
        witness = result.get("failures") or result
        print(json.dumps(jsonable(witness), sort_keys=True), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    try:
        return run(argv)
    except ResourceError as exc:
        print(f"resource cap hit: {exc} (last completed: {exc.last_completed})", file=sys.stderr)
        return EXIT_RESOURCE
    except (DcError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
