"""Rendering of run reports.  The JSON document is canonical; text is derived from it."""

from __future__ import annotations

import json


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _num(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, str):
        return x
    return f"{x:.2e}"


def to_text(report: dict) -> str:
    st = report["structure"]
    cfg = report["config"]
    lines = [
        f"structure {st['name']} (n = {st['dim']}, case {st['case_tag']})",
        f"seed {cfg['seed']}, samples {cfg['samples']}, jet order {cfg['jet_order']}",
        "",
    ]
    width = max((len(r["identity"]) for s in report["suites"] for r in s["identities"]), default=10)
    for suite in report["suites"]:
        lines.append(f"[{suite['suite']}]")
        for r in suite["identities"]:
            skipped = f" skipped {r['points_skipped']}" if r["points_skipped"] else ""
            lines.append(
                f"  {r['identity']:<{width}}  {r['verdict'].upper():<8} max {_num(r['max_relative_residual'])}"
                f"  mean {_num(r['mean_relative_residual'])}  tol {_num(r['tolerance'])}"
                f"  points {r['points_evaluated']}{skipped}"
            )
        lines.append("")
    c = report["summary"]["counts"]
    lines.append(
        f"overall {report['summary']['verdict'].upper()}: {c['pass']} passed, {c['fail']} failed, "
        f"{c['vacuous']} vacuous, {c['skipped']} not applicable, {c['reported']} reported"
    )
    return "\n".join(lines) + "\n"


def render(report: dict, fmt: str) -> str:
    return to_json(report) if fmt == "json" else to_text(report)
