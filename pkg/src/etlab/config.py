"""Run configuration: parsing, validation and structure construction.

A config is a JSON document::

    {
      "structure": {"catalog": "example1", "params": {"n": 4}},
      "suites": ["all"],
      "samples": 20,
      "seed": 7,
      "jet_order": 6,
      "tolerances": {"lemma_bach": 1e-7},
      "report": "json"
    }

or with an inline structure::

    "structure": {
      "coords": ["x1", "x2", "x3", "x4"],
      "metric": ["1", "1", "1", "1"],          # diagonal, or a full matrix
      "domain": [[0.1, 1], [0.1, 1], [0.1, 1], [0.1, 1]],
      "f": "3*x1 + 1", "h": "0", "case_tag": "static_null_lambda"
    }

Expression strings use ``+ - * / ^``, parentheses, ``sqrt exp log sin cos``,
``pi`` and the declared coordinate names.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .errors import ConfigError, ExpressionSyntaxError
from .expressions import parse_expression
from .geometry import MetricChart
from .jets import DEFAULT_ORDER
from .structures import CASE_TAGS, EPS_F, EinsteinTypeStructure, PerfectFluidCoefficients

SUITES = (
    "symmetries",
    "curvature_identities",
    "einstein_type",
    "lemmas",
    "divergences",
    "algebra",
    "classification",
)
REPORT_FORMATS = ("text", "json")

_TOP_KEYS = {
    "structure", "suites", "samples", "seed", "jet_order", "tolerances", "report",
    "workers", "algebra_trials",
}
_INLINE_KEYS = {
    "name", "coords", "metric", "domain", "f", "h", "case_tag", "fluid", "eps_f",
    "pfe_trace_times_f", "solution", "harmonic_weyl", "dim",
}


@dataclass(frozen=True)
class RunConfig:
    structure: dict
    suites: tuple[str, ...] = SUITES
    samples: int = 20
    seed: int = 0
    jet_order: int = DEFAULT_ORDER
    tolerances: dict = field(default_factory=dict)
    report: str = "text"
    workers: int = 1
    algebra_trials: int = 200

    @property
    def structure_label(self) -> str:
        return self.structure.get("catalog") or self.structure.get("name") or "inline"

    def replace(self, **changes) -> "RunConfig":
        from dataclasses import replace

        cfg = replace(self, **{k: v for k, v in changes.items() if v is not None})
        _validate(cfg)
        return cfg

    def to_dict(self) -> dict:
        return {
            "structure": self.structure,
            "suites": list(self.suites),
            "samples": self.samples,
            "seed": self.seed,
            "jet_order": self.jet_order,
            "tolerances": dict(sorted(self.tolerances.items())),
            "algebra_trials": self.algebra_trials,
        }


def parse_config(text: str) -> RunConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None
    return config_from_dict(raw)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc.strerror}") from None
    return parse_config(text)


def config_from_dict(raw: Any) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    if "structure" not in raw:
        raise ConfigError("config needs a 'structure' entry")
    structure = raw["structure"]
    if not isinstance(structure, dict):
        raise ConfigError("'structure' must be an object")
    suites = raw.get("suites", ["all"])
    if isinstance(suites, str):
        suites = [suites]
    if not isinstance(suites, list) or not all(isinstance(s, str) for s in suites):
        raise ConfigError("'suites' must be a list of names")
    if "all" in suites:
        suites = list(SUITES)
    bad = [s for s in suites if s not in SUITES]
    if bad:
        raise ConfigError(f"unknown suite(s): {', '.join(bad)}; expected {', '.join(SUITES)} or all")
    ordered = tuple(s for s in SUITES if s in suites)
    cfg = RunConfig(
        structure=structure,
        suites=ordered,
        samples=_int(raw, "samples", 20),
        seed=_int(raw, "seed", 0),
        jet_order=_int(raw, "jet_order", DEFAULT_ORDER),
        tolerances=_tolerances(raw.get("tolerances", {})),
        report=raw.get("report", "text"),
        workers=_int(raw, "workers", 1),
        algebra_trials=_int(raw, "algebra_trials", 200),
    )
    _validate(cfg)
    build_structure(cfg.structure)  # surface parse errors early
    return cfg


def _int(raw, key, default):
    val = raw.get(key, default)
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(f"'{key}' must be an integer")
    return val


def _tolerances(tol) -> dict:
    if not isinstance(tol, dict):
        raise ConfigError("'tolerances' must be an object of name -> number")
    out = {}
    for k, v in tol.items():
        if isinstance(v, bool) or not isinstance(v, (int, float)) or v <= 0:
            raise ConfigError(f"tolerance for {k!r} must be a positive number")
        out[k] = float(v)
    return out


def _validate(cfg: RunConfig):
    if cfg.samples < 1:
        raise ConfigError("'samples' must be >= 1")
    if cfg.jet_order < 2:
        raise ConfigError("'jet_order' must be >= 2")
    if cfg.workers < 1:
        raise ConfigError("'workers' must be >= 1")
    if cfg.algebra_trials < 1:
        raise ConfigError("'algebra_trials' must be >= 1")
    if cfg.report not in REPORT_FORMATS:
        raise ConfigError(f"'report' must be one of {', '.join(REPORT_FORMATS)}")


def build_structure(spec: dict) -> EinsteinTypeStructure:
    """Structure from a catalog reference or an inline description."""
    from . import catalog

    if "catalog" in spec:
        extra = set(spec) - {"catalog", "params"}
        if extra:
            raise ConfigError(f"unknown structure key(s): {', '.join(sorted(extra))}")
        params = spec.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError("'structure.params' must be an object")
        try:
            return catalog.build(spec["catalog"], params)
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(str(exc.args[0] if exc.args else exc)) from None
    return _inline_structure(spec)


def _expr(text, names, where):
    try:
        return parse_expression(text, names)
    except ExpressionSyntaxError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _inline_structure(spec: dict) -> EinsteinTypeStructure:
    unknown = set(spec) - _INLINE_KEYS
    if unknown:
        raise ConfigError(f"unknown structure key(s): {', '.join(sorted(unknown))}")
    for key in ("coords", "metric", "domain", "f"):
        if key not in spec:
            raise ConfigError(f"inline structure needs '{key}'")
    names = spec["coords"]
    if not isinstance(names, list) or not all(isinstance(x, str) and x.isidentifier() for x in names):
        raise ConfigError("'structure.coords' must be a list of identifiers")
    n = len(names)
    if "dim" in spec and spec["dim"] != n:
        raise ConfigError(f"'structure.dim' is {spec['dim']} but {n} coordinates are declared")
    metric = spec["metric"]
    if not isinstance(metric, list) or len(metric) != n:
        raise ConfigError(f"'structure.metric' must list {n} diagonal entries or {n} rows")
    if all(isinstance(row, list) for row in metric):
        if any(len(row) != n for row in metric):
            raise ConfigError(f"'structure.metric' rows must have {n} entries")
        parsed = [[_expr(e, names, f"structure.metric[{i}][{j}]") for j, e in enumerate(row)] for i, row in enumerate(metric)]
        for i in range(n):
            for j in range(i):
                if parsed[i][j] != parsed[j][i]:
                    raise ConfigError(f"structure.metric is not symmetric at ({i}, {j})")
        comps = [[parsed[min(i, j)][max(i, j)] for j in range(n)] for i in range(n)]
    else:
        from .expressions import Const

        diag = [_expr(e, names, f"structure.metric[{i}]") for i, e in enumerate(metric)]
        comps = [[diag[i] if i == j else Const(0.0) for j in range(n)] for i in range(n)]
    domain = spec["domain"]
    if (
        not isinstance(domain, list)
        or len(domain) != n
        or not all(isinstance(iv, list) and len(iv) == 2 and all(isinstance(x, (int, float)) for x in iv) for iv in domain)
    ):
        raise ConfigError(f"'structure.domain' must be {n} [lo, hi] pairs")
    try:
        chart = MetricChart(names, comps, domain, spec.get("name", "inline"))
    except ValueError as exc:
        raise ConfigError(f"structure: {exc}") from None
    tag = spec.get("case_tag", "generic")
    if tag not in CASE_TAGS:
        raise ConfigError(f"unknown case_tag {tag!r}; expected one of {', '.join(CASE_TAGS)}")
    fluid = None
    if "fluid" in spec:
        fl = spec["fluid"]
        if not isinstance(fl, dict) or set(fl) != {"density", "pressure"}:
            raise ConfigError("'structure.fluid' needs exactly 'density' and 'pressure'")
        fluid = PerfectFluidCoefficients(
            _expr(fl["density"], names, "structure.fluid.density"),
            _expr(fl["pressure"], names, "structure.fluid.pressure"),
        )
    return EinsteinTypeStructure(
        chart,
        _expr(spec["f"], names, "structure.f"),
        _expr(spec.get("h", "0"), names, "structure.h"),
        tag,
        fluid,
        float(spec.get("eps_f", EPS_F)),
        bool(spec.get("pfe_trace_times_f", False)),
        claims_solution=bool(spec.get("solution", True)),
        harmonic_weyl=bool(spec.get("harmonic_weyl", False)),
    )
