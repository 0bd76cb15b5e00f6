"""Command-line interface: ``nceq <analyze|sweep|edgeworth|verify|demand|xstar>``.

Exit codes: 0 success, 1 classifier/oracle disagreement, 2 input error,
3 nothing to draw (no equilibrium and no ``--at-price``).
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import os
import re
import sys
import tempfile
from typing import Any

import numpy as np

from .demand import demand, demand_quadlog
from .edgeworth import build_series, fmt, render_svg, series_csv
from .equilibrium import analyze
from .errors import ConfigError
from .model import Classification, EconomyAB, Outcome, QuadLog, validate_economy
from .oracle import brute_force_equilibria, default_price_range, verify_equilibrium
from .special import x_star

EXIT_OK, EXIT_DISAGREE, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3
PRICE_RTOL = 1e-6


class InputError(Exception):
    pass


# --------------------------------------------------------------------------
# helpers


def load_config(path: str) -> tuple[dict, EconomyAB]:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return raw, validate_economy(raw)


def atomic_write(path: str, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".nceq-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def round12(x: float | None) -> float | None:
    return None if x is None else float(f"{x:.12g}")


_STEP = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)((?:\[\d+\])*)")


def parse_param_path(path: str) -> list[str | int]:
    """``agentA.endowment[1]`` -> ``['agentA', 'endowment', 1]``."""
    keys: list[str | int] = []
    for part in path.split("."):
        m = _STEP.fullmatch(part)
        if not m:
            raise InputError(f"bad parameter path {path!r}")
        keys.append(m.group(1))
        keys.extend(int(i) for i in re.findall(r"\[(\d+)\]", m.group(2)))
    return keys


def set_param(raw: dict, path: str, value: float) -> dict:
    keys = parse_param_path(path)
    out = copy.deepcopy(raw)
    node: Any = out
    for k in keys[:-1]:
        try:
            node = node[k]
        except (KeyError, IndexError, TypeError):
            raise InputError(f"parameter path {path!r} does not exist in the config") from None
    last = keys[-1]
    try:
        old = node[last]
    except (KeyError, IndexError, TypeError):
        raise InputError(f"parameter path {path!r} does not exist in the config") from None
    if isinstance(old, bool) or not isinstance(old, (int, float)):
        raise InputError(f"parameter path {path!r} is not a numeric field")
    node[last] = value
    return out


def classification_dict(c: Classification) -> dict:
    def bundle(b):
        return None if b is None else {"c1": round12(b.c1), "c2": round12(b.c2)}

    return {
        "outcome": c.outcome.value,
        "case": c.case,
        "nominal": None if c.nominal is None else c.nominal.value,
        "price": round12(c.price),
        "allocA": bundle(c.allocA),
        "allocB": bundle(c.allocB),
        "conditions": [
            {"name": e.name, "lhs": round12(e.lhs), "relation": e.relation.value,
             "rhs": round12(e.rhs), "satisfied": e.satisfied, "near_boundary": e.near_boundary}
            for e in c.report.entries
        ],
        "alternatives": [round12(p) for p in c.alternatives],
    }


def describe(c: Classification) -> list[str]:
    if c.outcome is Outcome.NONE:
        head = "no equilibrium" + (f" (case {c.case})" if c.case else "")
    elif c.outcome is Outcome.BOUNDARY:
        head = f"boundary (nominal: {c.nominal.value})"
    else:
        head = f"{c.outcome.value} equilibrium"
    lines = [head]
    if c.price is not None:
        lines.append(f"price p = {fmt(c.price)}")
        lines.append(f"agent A: ({fmt(c.allocA.c1)}, {fmt(c.allocA.c2)})")
        lines.append(f"agent B: ({fmt(c.allocB.c1)}, {fmt(c.allocB.c2)})")
    for p in c.alternatives:
        lines.append(f"also clears at p = {fmt(p)}")
    if c.report.entries:
        lines.append("conditions:")
    for e in c.report.entries:
        mark = "yes" if e.satisfied else "no"
        flag = "  [near boundary]" if e.near_boundary else ""
        lines.append(f"  {e.name}: {fmt(e.lhs)} {e.relation.value} {fmt(e.rhs)} -> {mark}{flag}")
    return lines


# --------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> int:
    _, econ = load_config(args.config)
    c = analyze(econ)
    if args.json:
        print(json.dumps(classification_dict(c), indent=2))
    else:
        print("\n".join(describe(c)))
    return EXIT_OK


SWEEP_HEADER = "param,value,outcome,price,cA1,cB1,boundary"


def sweep_rows(raw: dict, param: str, values, square: bool) -> list[str]:
    rows = [SWEEP_HEADER]
    for v in values:
        v = float(v)
        try:
            econ = validate_economy(set_param(raw, param, v * v if square else v))
        except ConfigError as exc:
            raise InputError(f"at {param} = {fmt(v)}: {exc}") from exc
        c = analyze(econ)
        has = c.outcome in (Outcome.CORNER, Outcome.INTERIOR)
        cells = [
            param,
            fmt(v),
            c.outcome.value,
            fmt(c.price) if has else "",
            fmt(c.allocA.c1) if has else "",
            fmt(c.allocB.c1) if has else "",
            "true" if c.outcome is Outcome.BOUNDARY else "false",
        ]
        rows.append(",".join(cells))
    return rows


def cmd_sweep(args) -> int:
    raw, _ = load_config(args.config)
    if args.steps < 2:
        raise InputError("--steps must be >= 2")
    if args.log:
        if not (args.start > 0 and args.stop > 0):
            raise InputError("--log needs positive --from and --to")
        values = np.geomspace(args.start, args.stop, args.steps)
    else:
        values = np.linspace(args.start, args.stop, args.steps)
    parse_param_path(args.param)
    set_param(raw, args.param, float(values[0]))
    rows = sweep_rows(raw, args.param, values, args.square)
    atomic_write(args.out, "\n".join(rows) + "\n")
    return EXIT_OK


def _closest_to_clearing(econ: EconomyAB, p: float):
    a = demand(econ.utilityA, p, econ.endowA)[0]
    bs = demand(econ.utilityB, p, econ.endowB)
    return a, min(bs, key=lambda b: abs(a.c1 + b.c1 - econ.total1))


def cmd_edgeworth(args) -> int:
    _, econ = load_config(args.config)
    if args.at_price is not None:
        if not (args.at_price > 0 and math.isfinite(args.at_price)):
            raise InputError("--at-price must be positive")
        price = args.at_price
        alloc_a, alloc_b = _closest_to_clearing(econ, price)
    else:
        c = analyze(econ)
        if c.price is None:
            print("no equilibrium to draw; pass --at-price to draw the box at a given price",
                  file=sys.stderr)
            return EXIT_PRECONDITION
        price, alloc_a, alloc_b = c.price, c.allocA, c.allocB
    series = build_series(econ, price, alloc_a, alloc_b)
    atomic_write(args.out, render_svg(series))
    if args.data:
        atomic_write(args.data, series_csv(series))
    return EXIT_OK


def _kind(b) -> str:
    return "corner" if b.c1 == 0 else "interior"


def cmd_verify(args) -> int:
    _, econ = load_config(args.config)
    if args.grid < 10_000:
        raise InputError("--grid must be >= 10000")
    c = analyze(econ)
    lo, hi = default_price_range(econ)
    eqs = brute_force_equilibria(econ, lo, hi, args.grid)
    oracle = ", ".join(f"{_kind(e.allocB)} at p = {fmt(e.price)}" for e in eqs) or "none"
    print(f"classifier: {c.outcome.value}" + (f" at p = {fmt(c.price)}" if c.price else ""))
    print(f"oracle: {oracle}")
    if c.outcome is Outcome.BOUNDARY:
        print("boundary: a deciding condition is within tolerance; not compared")
        return EXIT_OK
    if c.price is None:
        if eqs:
            print("disagree: classifier found no equilibrium")
            return EXIT_DISAGREE
        print("agree: none")
        return EXIT_OK
    if not eqs:
        print("disagree: oracle found no equilibrium")
        return EXIT_DISAGREE
    near = min(eqs, key=lambda e: abs(e.price - c.price))
    dp = abs(near.price - c.price) / c.price
    rep = verify_equilibrium(econ, c.price, c.allocA, c.allocB)
    print(f"audit: clearing {fmt(rep.marketClearing1)}/{fmt(rep.marketClearing2)}, "
          f"budget {fmt(rep.budgetGapA)}/{fmt(rep.budgetGapB)}, "
          f"optimality {fmt(rep.optimalityGapA)}/{fmt(rep.optimalityGapB)}")
    if dp <= PRICE_RTOL and _kind(near.allocB) == c.outcome.value and rep.verdict:
        print(f"agree: {c.outcome.value}, dp = {fmt(dp)} < 1e-6")
        return EXIT_OK
    print(f"disagree: dp = {fmt(dp)}, oracle {_kind(near.allocB)}, audit "
          f"{'passed' if rep.verdict else 'failed'}")
    return EXIT_DISAGREE


def cmd_demand(args) -> int:
    _, econ = load_config(args.config)
    if not (args.price > 0 and math.isfinite(args.price)):
        raise InputError("--price must be positive")
    util = econ.utilityA if args.agent == "A" else econ.utilityB
    endow = econ.endowA if args.agent == "A" else econ.endowB
    if isinstance(util, QuadLog):
        ds, br = demand_quadlog(util.d, args.price, endow)
        print(f"branch: {br.tag.value} (income {fmt(br.income)}, switch {fmt(br.threshold)})")
    else:
        ds = demand(util, args.price, endow)
    for b in ds:
        print(f"({fmt(b.c1)}, {fmt(b.c2)})")
    return EXIT_OK


def cmd_xstar(args) -> int:
    if not (args.tol > 0 and math.isfinite(args.tol)):
        raise InputError("--tol must be positive")
    digits = max(1, math.ceil(-math.log10(args.tol)))
    print(f"{x_star(args.tol):.{digits}f}")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nceq", description="Equilibrium existence in two-good economies with a non-convex agent.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify the economy in a config file")
    p.add_argument("config")
    p.add_argument("--json", action="store_true", help="emit a JSON document")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="classify along a one-parameter grid, write CSV")
    p.add_argument("config")
    p.add_argument("--param", required=True, help="config path, e.g. agentB.utility.d or agentA.endowment[1]")
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--log", action="store_true", help="geometric grid")
    p.add_argument("--square", action="store_true", help="set the field to the square of each grid value")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("edgeworth", help="draw the Edgeworth box as SVG")
    p.add_argument("config")
    p.add_argument("--out", required=True)
    p.add_argument("--data", help="also write the plotted series as CSV")
    p.add_argument("--at-price", type=float, help="draw demands at this price instead of an equilibrium")
    p.set_defaults(func=cmd_edgeworth)

    p = sub.add_parser("verify", help="compare the classifier with the brute-force oracle")
    p.add_argument("config")
    p.add_argument("--grid", type=int, default=10_000, help="oracle grid points (>= 10000)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demand", help="print an agent's demand set at a price")
    p.add_argument("config")
    p.add_argument("--agent", choices=("A", "B"), required=True)
    p.add_argument("--price", type=float, required=True)
    p.set_defaults(func=cmd_demand)

    p = sub.add_parser("xstar", help="print the switch constant x*")
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_xstar)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
