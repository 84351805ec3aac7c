"""Acceptance criteria 1-10.

Each test prints one ``criterion N: PASS|FAIL ...`` line straight to the terminal
(also without ``-s``) and then asserts at the stated tolerance.
"""

import json
import math
import time

import numpy as np
import pytest

from etlab.catalog import (
    FIBER_WEYL_SIGN,
    WarpedProductChart,
    build,
    check_fiber_einstein_weyl,
    check_level_set_gradient,
    check_ricci_eigenvector,
    example1_profile,
    make_example1_solution,
    make_schwarzschild_slice,
    make_sphere,
    product_fiber,
    schwarzschild_level_points,
)
from etlab.cli import main
from etlab.expressions import Var, exp, sin
from etlab.geometry import T_tensor
from etlab.suites import IDENTITIES, evaluate_point, sample_points
from etlab.tensors import algebra_trial, random_algebra_identity_suite

POINTS = 20
SEED = 2024
BY_NAME = {i.name: i for i in IDENTITIES}


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return emit


def worst_residuals(name, params, identities, order=6, samples=POINTS, seed=SEED):
    """Max residual per identity over seeded points; skipped points are an error here."""
    E = build(name, params)
    ids = [BY_NAME[i] for i in identities]
    assert all(i.applies(E) for i in ids), name
    worst = dict.fromkeys(identities, 0.0)
    for k, p in enumerate(sample_points(E, samples, seed)):
        for ident, v in zip(ids, evaluate_point(E, ids, p, k, seed, order)):
            assert not isinstance(v, tuple), f"{ident.name} skipped at {p}: {v}"
            worst[ident.name] = max(worst[ident.name], v)
    return worst


def fmt(d):
    return ", ".join(f"{k}={v:.1e}" for k, v in d.items())


def test_criterion_1_ricci_identity(verdict):
    t0 = time.perf_counter()
    worst = {}
    for name in ("flat_linear", "sphere_height", "schwarzschild_slice"):
        worst[name] = worst_residuals(name, {}, ["ricci_identity"])["ricci_identity"]
    elapsed = time.perf_counter() - t0
    ok = max(worst.values()) < 1e-9 and elapsed < 10
    verdict(1, ok, f"max relative {fmt(worst)}; {elapsed:.1f} s (< 10 s)")
    assert ok


SYMMETRY_IDS = [
    "riemann_antisymmetry", "riemann_pair_symmetry", "first_bianchi", "contracted_bianchi",
    "weyl_trace_free", "cotton_antisymmetry", "cotton_cyclic", "cotton_trace_free",
    "bach_symmetry", "bach_trace_free",
]


def test_criterion_2_symmetry_suite(verdict):
    metrics = [
        ("schwarzschild_slice", {}),
        ("example1", {"n": 5, "fiber": "s2xs2"}),
        ("generic_metric", {}),
    ]
    worst = {}
    for name, params in metrics:
        w = worst_residuals(name, params, SYMMETRY_IDS)
        worst[name] = max(w.values())
    ok = max(worst.values()) < 1e-8
    verdict(2, ok, f"{len(SYMMETRY_IDS)} identities x {POINTS} points; worst {fmt(worst)}")
    assert ok


def test_criterion_3_cotton_weyl_bach(verdict):
    tol = {"cotton_weyl": 1e-8, "bach_forms_agree": 1e-8, "div_bach": 1e-7}
    ok = True
    parts = []
    for n in (4, 5):
        w = worst_residuals("schwarzschild_slice", {"n": n}, list(tol))
        ok &= all(w[k] < tol[k] for k in tol)
        parts.append(f"n={n}: {fmt(w)}")
    verdict(3, ok, "; ".join(parts))
    assert ok


SOLUTIONS = [
    ("flat_linear", {}),
    ("sphere_height", {}),
    ("schwarzschild_slice", {"n": 4}),
    ("schwarzschild_slice", {"n": 5}),
    ("example1", {"n": 4}),
    ("example1", {"n": 5}),
    ("miao_tam_ball", {}),
    ("cpe_sphere", {}),
]


def test_criterion_4_einstein_type_solutions(verdict):
    worst = {}
    for name, params in SOLUTIONS:
        w = worst_residuals(name, params, ["principal", "trace", "grad_h"], order=3)
        worst[f"{name}[n={params.get('n', 4)}]"] = max(w.values())
    ok = max(worst.values()) < 1e-8
    verdict(4, ok, f"principal/trace/grad_h worst {fmt(worst)}")
    assert ok


def test_criterion_5_lemmas(verdict):
    tol = {"lemma_fC": 1e-8, "lemma_bach": 1e-7, "lemma_second_order": 1e-7, "lemma_third_order": 1e-6}
    t0 = time.perf_counter()
    ok = True
    parts = []
    for name in ("schwarzschild_slice", "sphere_height"):
        w = worst_residuals(name, {}, list(tol), order=6)
        ok &= all(w[k] < tol[k] for k in tol)
        parts.append(f"{name}: {fmt(w)}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 180
    verdict(5, ok, "; ".join(parts) + f"; {elapsed:.1f} s at order 6 (< 180 s)")
    assert ok


def test_criterion_6_example1_hypotheses(verdict):
    tol = {
        "cotton_vanishes": 1e-8,
        "div_weyl_vanishes": 1e-8,
        "div4_weyl_vanishes": 1e-6,
        "radial_weyl_vanishes": 1e-9,
    }
    ok = True
    parts = []
    for params in ({"n": 4}, {"n": 5}, {"n": 5, "fiber": "s2xs2"}):
        w = worst_residuals("example1", params, list(tol))
        ok &= all(w[k] < tol[k] for k in tol)
        parts.append(f"{params}: {fmt(w)}")
    verdict(6, ok, "; ".join(parts))
    assert ok


def test_criterion_7_closed_forms(verdict):
    prof = example1_profile(4, 2.0)
    dt = abs(prof.t - math.sqrt(3))
    ddf = abs(prof.df - math.sqrt(3) / 2)
    chart = make_sphere(4).chart
    rng = np.random.default_rng(SEED)
    x = [Var(i, f"x{i + 1}") for i in range(4)]
    worst_t = 0.0
    for _ in range(3):
        a = rng.uniform(-1, 1, 6)
        f = 2 + a[0] * x[0] + a[1] * x[1] * x[2] + a[2] * sin(x[3]) + a[3] * exp(a[4] * x[0]) + a[5] * x[2] ** 3
        p = chart.sample_points(rng, 1)[0]
        worst_t = max(worst_t, T_tensor(chart, f, p).max_abs())
    ok = dt < 1e-9 and ddf < 1e-12 and worst_t < 1e-10
    verdict(7, ok, f"|t - sqrt3| = {dt:.1e}, |f' - sqrt3/2| = {ddf:.1e}, sphere max|T| = {worst_t:.1e}")
    assert ok


def test_criterion_8_algebra_suite(verdict):
    rep = random_algebra_identity_suite(SEED, 1000)
    controls = {"hessian_skew": np.inf, "unsymmetrized": np.inf}
    for s in range(20):
        controls["hessian_skew"] = min(controls["hessian_skew"], algebra_trial(np.random.default_rng(s), 4, hessian_skew=0.1)[0])
        c = np.random.default_rng(1000 + s).uniform(-1, 1, (4, 4, 4))
        controls["unsymmetrized"] = min(controls["unsymmetrized"], *algebra_trial(np.random.default_rng(s), 4, cotton=c))
    ok = (
        len(rep.trials) == 1000
        and rep.max_hessian <= 1e-12
        and rep.max_contraction < 1e-9
        and min(controls.values()) > 1e-3
    )
    verdict(
        8, ok,
        f"1000 trials: hessian {rep.max_hessian:.1e}, contraction {rep.max_contraction:.1e}; "
        f"controls (min) {fmt(controls)}",
    )
    assert ok


def test_criterion_9_classification(verdict):
    E = make_schwarzschild_slice(4)
    eig = max(check_ricci_eigenvector(E, p).relative for p in sample_points(E, POINTS, SEED))
    rng = np.random.default_rng(SEED)
    spread = max(
        check_level_set_gradient(E, schwarzschild_level_points(4, r, 12, rng)).spread for r in (1.5, 2.0, 3.0)
    )

    def fiber_worst(w, sign):
        pts = w.chart.sample_points(np.random.default_rng(SEED), POINTS)
        return max(check_fiber_einstein_weyl(w, p, sign=sign).relative for p in pts)

    einstein = make_example1_solution(5, fiber="s2xs2").warped
    r = Var(0, "r")
    non_einstein = WarpedProductChart((1.0, 3.0), r * (1 + 0.2 * sin(r)), product_fiber(1.0, 0.5))
    fib = {"einstein": fiber_worst(einstein, FIBER_WEYL_SIGN), "non_einstein": fiber_worst(non_einstein, FIBER_WEYL_SIGN)}
    opposite = fiber_worst(non_einstein, -FIBER_WEYL_SIGN)
    ok = eig < 1e-8 and spread < 1e-9 and max(fib.values()) < 1e-7
    verdict(
        9, ok,
        f"eigenvector {eig:.1e}, level-set spread {spread:.1e}, fiber Weyl {fmt(fib)} "
        f"(opposite-sign form on non-Einstein fiber: {opposite:.1e})",
    )
    assert ok


def test_criterion_10_determinism(verdict, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"structure": {"catalog": "example1"}, "report": "json", "seed": 7}))
    outs, times, codes = [], [], []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        t0 = time.perf_counter()
        codes.append(main(["run", str(cfg), "--out", str(out)]))
        times.append(time.perf_counter() - t0)
        outs.append(out.read_bytes())
    ok = outs[0] == outs[1] and codes == [0, 0] and max(times) < 300
    verdict(
        10, ok,
        f"byte-identical={outs[0] == outs[1]}, exit codes {codes}, "
        f"full default suite {max(times):.1f} s (< 300 s)",
    )
    assert ok
