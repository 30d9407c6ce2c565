"""End-to-end acceptance checks, one test per criterion.

Each test collects every failing clause so that a failure names exactly
which part of the criterion did not hold.
"""

import io
import json
import math
import time
from contextlib import redirect_stdout

import numpy as np
import pytest

from hml import harness
from hml.analytic import CoeffSeries, hardy_p_norm
from hml.cli import main
from hml.criteria import condition2_sup, condition2_value
from hml.hankel import build
from hml.measure import (AtomList, DiskDensityMeasure, Lebesgue, PowerWeight,
                         conjugate_moment_quadrature, moment_sequence)


def cli(*args):
    out = io.StringIO()
    with redirect_stdout(out):
        code = main(list(args) + ["--no-timing"])
    return code, json.loads(out.getvalue())


def expect(failures, ok, message):
    if not ok:
        failures.append(message)


def test_criterion_1_hilbert_section_norms():
    t0 = time.perf_counter()
    failures = []
    _, one = cli("opnorm", "lebesgue", "h2", "--N", "1")
    expect(failures, abs(one["payload"]["value"] - 1) <= 1e-12, f"N=1 gave {one['payload']['value']}")
    _, two = cli("opnorm", "lebesgue", "h2", "--N", "2")
    v2 = two["payload"]["value"]
    expect(failures, abs(v2 - (4 + math.sqrt(13)) / 6) <= 1e-9, f"N=2 gave {v2}")
    code, prof = cli("opnorm", "lebesgue", "h2", "--N-list", "16,64,256,1024,2048")
    vals = [p["value"] for p in prof["payload"]["profile"]]
    expect(failures, code == 0, f"exit code {code}")
    expect(failures, all(b > a for a, b in zip(vals, vals[1:])), f"not increasing: {vals}")
    expect(failures, max(vals) < math.pi, f"exceeds pi: {vals}")
    elapsed = time.perf_counter() - t0
    expect(failures, elapsed < 60, f"runtime {elapsed:.1f}s")
    assert not failures, failures


def test_criterion_2_rank_one_oracle():
    code, doc = cli("opnorm", "atoms:[(0.5,1.0)]", "h2", "--N", "40")
    assert code == 0
    assert abs(doc["payload"]["value"] - 4 / 3) <= 1e-6


def test_criterion_3_condition2_closed_form():
    failures = []
    m = moment_sequence(Lebesgue(), 1024)
    for r in (0.0, 0.25, 0.5, 0.9, 1 - 1e-4):
        v = condition2_value(m, r)
        expect(failures, abs(v - (1 + r)) <= 1e-10, f"r={r}: {v}")
    sup = condition2_sup(m).value
    expect(failures, 1.9998 <= sup < 2, f"sup on default grid {sup}")
    assert not failures, failures


def test_criterion_4_identity():
    failures = []
    for mu in (Lebesgue(), PowerWeight(0.5), AtomList(((0.5, 1.0),))):
        rep = harness.run_identity_check(moment_sequence(mu, 64), 100, seed=0, r_max=0.99)
        dev = rep.steps[1]["max_deviation"]
        expect(failures, dev <= 1e-10, f"{mu.spec}: max deviation {dev}")
    assert not failures, failures


def test_criterion_5_counterexample():
    t0 = time.perf_counter()
    failures = []
    mb = DiskDensityMeasure.counterexample(5)
    for n in range(41):
        target = 1.0 if n in (0, 2, 4, 8, 16, 32) else 0.0
        val, _ = conjugate_moment_quadrature(mb, n)
        expect(failures, abs(val - target) <= 1e-8, f"moment {n}: {val}")

    rep = harness.run_counterexample(10)
    steps = {s["step"]: s for s in rep.steps}
    bloch = steps["bloch seminorm of P truncations"]["values"]
    expect(failures, max(bloch) <= 3, f"bloch exceeds 3: {bloch}")
    gap = abs(bloch[9] - bloch[8])
    expect(failures, gap < 0.01, f"|bloch(K=10) - bloch(K=9)| = {gap:.5f} is not < 0.01")
    sum_sq = steps["lacunary profile"]["sum_sq"]
    expect(failures, sum_sq == [float(k) for k in range(1, 11)], f"sum_sq {sum_sq}")
    q1 = steps["Q_1 estimate"]["values"]
    expect(failures, all(b > a for a, b in zip(q1, q1[1:])), f"q1 not increasing: {q1}")
    expect(failures, q1[9] - q1[4] > 0.1, f"q1 gain {q1[9] - q1[4]}")
    cond2 = steps["condition2 supremum"]["values"]
    expect(failures, max(cond2) < 10, f"condition2 sup {cond2}")
    elapsed = time.perf_counter() - t0
    expect(failures, elapsed < 120, f"runtime {elapsed:.1f}s")
    assert not failures, failures


def test_criterion_6_dichotomy_scan():
    t0 = time.perf_counter()
    rep = harness.run_power_family_scan([-0.75, -0.5, -0.25, 0.0, 0.5, 1.0])
    elapsed = time.perf_counter() - t0
    failures = [a for a in rep.assertions if not a["passed"]]
    criteria = {"moment-decay", "condition2", "carleson-kernel", "carleson-constant", "box4",
                "h2", "dalpha:0.5", "dalpha:1.5"}
    for step in rep.steps:
        if not step["step"].startswith("atoms"):
            expect(failures, set(step["verdicts"]) == criteria, f"{step['step']}: criteria set")
    expect(failures, elapsed < 300, f"runtime {elapsed:.1f}s")
    assert not failures, failures


def test_criterion_7_fast_dense_equivalence():
    rng = np.random.Generator(np.random.PCG64(0))
    worst = 0.0
    for mu in (Lebesgue(), PowerWeight(0.5)):
        H = build(mu, 1024)
        for _ in range(100):
            x = rng.standard_normal(1024)
            worst = max(worst, float(np.max(np.abs(H.apply_fast(x) - H.apply_dense(x)))))
    assert worst <= 1e-9


def test_criterion_8_pairing_bound():
    failures = []
    rep = harness.run_pairing_probe(Lebesgue(), degree=32, trials=200, seed=0)
    ratio = rep.steps[0]["h2_ratio"]
    bound = rep.steps[1]["value"]
    expect(failures, rep.steps[1]["N"] == 65, "bound not taken at N = 65")
    expect(failures, ratio <= bound + 1e-9, f"ratio {ratio} above bound {bound}")
    h1 = hardy_p_norm(CoeffSeries([1.0, 1.0]), 1.0)
    expect(failures, abs(h1 - 4 / math.pi) <= 1e-9, f"H1 norm of 1+z: {h1}")
    assert not failures, failures


@pytest.mark.parametrize("args", [
    ["experiment", "identity", "lebesgue", "--seed", "7"],
    ["experiment", "counterexample", "--K", "4"],
    ["experiment", "hilbert"],
    ["experiment", "pairing", "lebesgue"],
    ["experiment", "family-scan", "--s-list=-0.5,0.5", "--scan-N", "4096",
     "--scan-grid-depth", "24", "--scan-carleson-depth", "12", "--scan-box-depth", "6"],
])
def test_criterion_9_determinism(args):
    outputs = []
    for _ in range(2):
        buf = io.StringIO()
        with redirect_stdout(buf):
            main(args + ["--no-timing"])
        outputs.append(buf.getvalue())
    assert outputs[0] == outputs[1]
    payload = json.loads(outputs[0])["payload"]
    assert payload["passed"] in (True, False)
