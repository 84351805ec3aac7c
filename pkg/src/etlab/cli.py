"""Command line entry point ``etlab``.

Exit codes: 0 all identities pass, 1 an identity failed (or passed vacuously),
2 configuration or usage error, 3 numeric or domain error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .catalog import CATALOG, build, list_catalog
from .config import ConfigError, load_config
from .errors import DomainError, EtlabError, NumericError, OrderExhaustedError, UnsupportedDimensionError
from .report import render
from .suites import IDENTITIES, evaluate_point, report_passed, run

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="etlab", description="Residual verification of Einstein-type structures.")
    p.add_argument("--version", action="version", version=f"etlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run identity suites from a config file")
    r.add_argument("config")
    r.add_argument("--seed", type=int)
    r.add_argument("--samples", type=int)
    r.add_argument("--jet-order", type=int, dest="jet_order")
    r.add_argument("--report", choices=("text", "json"))
    r.add_argument("--out")
    r.add_argument("--workers", type=int)

    lc = sub.add_parser("list-catalog", help="list catalog structures")
    lc.add_argument("--json", action="store_true")

    d = sub.add_parser("describe", help="print curvature and residuals at one point")
    d.add_argument("name")
    d.add_argument("--param", action="append", default=[], metavar="K=V")
    d.add_argument("--point", required=True, metavar="V1,V2,...")
    d.add_argument("--jet-order", type=int, default=6, dest="jet_order")
    d.add_argument("--json", action="store_true")
    return p


def _err(msg: str):
    print(f"etlab: error: {msg}", file=sys.stderr)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run(args)
        if args.command == "list-catalog":
            return _list(args)
        return _describe(args)
    except (ConfigError, UnsupportedDimensionError) as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except (OrderExhaustedError, DomainError, NumericError) as exc:
        _err(str(exc))
        return EXIT_NUMERIC
    except EtlabError as exc:
        _err(str(exc))
        return EXIT_NUMERIC


def _run(args) -> int:
    cfg = load_config(args.config)
    cfg = cfg.replace(seed=args.seed, samples=args.samples, jet_order=args.jet_order, report=args.report, workers=args.workers)
    report = run(cfg)
    text = render(report, cfg.report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS if report_passed(report) else EXIT_FAIL


def _list(args) -> int:
    inv = list_catalog()
    if args.json:
        sys.stdout.write(json.dumps(inv, indent=2, sort_keys=True) + "\n")
        return EXIT_PASS
    for e in inv:
        tag = "solution" if e["solution"] else "test bed"
        print(f"{e['name']}  ({tag})")
        print(f"    {e['realizes']}")
        for k, p in e["params"].items():
            print(f"    {k}: {p['type']} = {p['default']!r}  {p['help']}")
    return EXIT_PASS


def _parse_params(items) -> dict:
    out = {}
    for item in items:
        if "=" not in item:
            raise ConfigError(f"--param expects K=V, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = json.loads(v)
        except json.JSONDecodeError:
            out[k.strip()] = v
    return out


def describe(name: str, params: dict, point, jet_order: int = 6) -> dict:
    """Curvature blocks and per-identity residuals of a catalog structure at one point."""
    if name not in CATALOG:
        raise ConfigError(f"unknown catalog entry {name!r}; known: {', '.join(sorted(CATALOG))}")
    try:
        E = build(name, params)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(str(exc.args[0] if exc.args else exc)) from None
    point = np.asarray(point, dtype=float)
    if point.shape != (E.dim,):
        raise ConfigError(f"point needs {E.dim} coordinates ({', '.join(E.chart.coord_names)})")
    if not E.chart.contains(point):
        raise ConfigError(f"point {tuple(point)} is outside the chart box {E.chart.domain}")
    s = E.at(point, jet_order)
    b = s.b
    blocks = {
        "point": point.tolist(),
        "coords": list(E.chart.coord_names),
        "g": b.g_jet[..., 0].tolist(),
        "Ric": b.ricci_jet[..., 0].tolist(),
        "R": b.scalar,
        "f": s.f,
        "h": s.h,
        "grad_f": s.df.tolist(),
        "T": s.t_jet[..., 0].tolist(),
    }
    if E.dim >= 4:
        blocks["W"] = b.weyl_jet[..., 0].tolist()
    if jet_order >= 3:
        blocks["C"] = b.cotton_jet[..., 0].tolist()
    if E.dim >= 4 and jet_order >= 4:
        blocks["B"] = b.bach_jets()[0][..., 0].tolist()
    ids = [i for i in IDENTITIES if i.order <= jet_order and i.applies(E) and i.name != "level_set_spread"]
    values = evaluate_point(E, ids, point, 0, 0, jet_order)
    table = {}
    for ident, v in zip(ids, values):
        table[ident.name] = {"value": None, "skipped": v[1]} if isinstance(v, tuple) else {
            "value": v,
            "tolerance": ident.tolerance,
            "verdict": "pass" if v <= ident.tolerance or not ident.enforced else "fail",
        }
    return {"schema": 1, "structure": name, "params": params, "blocks": blocks, "residuals": table}


def _describe(args) -> int:
    try:
        point = [float(x) for x in args.point.split(",")]
    except ValueError:
        raise ConfigError(f"--point expects comma-separated numbers, got {args.point!r}") from None
    doc = describe(args.name, _parse_params(args.param), point, args.jet_order)
    if args.json:
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return EXIT_PASS
    bl = doc["blocks"]
    with np.printoptions(precision=6, suppress=True, linewidth=110):
        print(f"{args.name} at ({', '.join(f'{c}={v:g}' for c, v in zip(bl['coords'], bl['point']))})")
        print(f"f = {bl['f']:.10g}   h = {bl['h']:.10g}   R = {bl['R']:.10g}")
        for key in ("grad_f", "g", "Ric", "W", "C", "B", "T"):
            if key not in bl:
                continue
            arr = np.asarray(bl[key])
            if arr.ndim <= 2:
                print(f"{key} =\n{arr}")
            else:
                print(f"{key}: max |component| = {np.max(np.abs(arr)):.3e}")
    print("residuals:")
    width = max(len(k) for k in doc["residuals"]) if doc["residuals"] else 0
    for k, r in doc["residuals"].items():
        if r["value"] is None:
            print(f"  {k:<{width}}  skipped ({r['skipped']})")
        else:
            print(f"  {k:<{width}}  {r['value']:.2e}  {r['verdict']}")
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
