"""Exit criteria, one test per criterion, each at its pinned tolerance.

Run with ``pytest tests/test_acceptance.py``; the terminal summary lists one
PASS/FAIL line per criterion.
"""

import statistics
import time

import numpy as np
import pytest

from batcoupler import bench
from batcoupler.bat import BatParams, Termination, run
from batcoupler.cli import main
from batcoupler.objective import CouplerObjective, DesignSpec
from batcoupler.rfmodel import CouplerGeometry, analyze, coupling, z0_hammerstad, z0_single

from tables import TABLE1

SEEDS = range(100)
EPS_R = 3.9


class InvariantChecker:
    """Callback that checks optimizer invariants on every population it sees."""

    def __init__(self, space, r0):
        self.space = space
        self.r0 = r0
        self.seen = {}
        self.violations = []

    def __call__(self, pop):
        for b in pop.bats:
            if not self.space.contains(b.position):
                self.violations.append(f"bat {b.uid} out of bounds at t={pop.t}")
            if not 0.0 <= b.pulse_rate <= self.r0:
                self.violations.append(f"bat {b.uid} pulse rate {b.pulse_rate} outside [0, r0]")
            if b.uid in self.seen:
                loud, rate = self.seen[b.uid]
                if b.loudness > loud:
                    self.violations.append(f"bat {b.uid} loudness rose at t={pop.t}")
                if b.pulse_rate < rate:
                    self.violations.append(f"bat {b.uid} pulse rate fell at t={pop.t}")
            self.seen[b.uid] = (b.loudness, b.pulse_rate)
        if not self.space.contains(pop.best_position):
            self.violations.append(f"best out of bounds at t={pop.t}")


def checked_batch(objective, params, space, seeds):
    results, violations = [], []
    for seed in seeds:
        checker = InvariantChecker(space, params.r0)
        result = run(objective, params, space, seed, callback=checker)
        fits = [result.initial_fitness] + [r.best_fitness for r in result.history]
        if any(b > a for a, b in zip(fits, fits[1:])):
            violations.append(f"seed {seed}: best fitness increased")
        violations.extend(f"seed {seed}: {v}" for v in checker.violations)
        results.append(result)
    return results, violations


@pytest.fixture(scope="module")
def design_batch():
    objective = CouplerObjective(DesignSpec())
    return checked_batch(objective, BatParams(), objective.space, SEEDS)


@pytest.fixture(scope="module")
def sphere_batch():
    f = bench.get("sphere", 5)
    return checked_batch(f, BatParams(max_iter=1000), f.default_bounds, SEEDS)


@pytest.fixture(scope="module")
def rastrigin_batch():
    f = bench.get("rastrigin", 2)
    return checked_batch(f, BatParams(max_iter=1000), f.default_bounds, SEEDS)


def test_c01_table1_reproduction(report):
    tol = {"whse": 0.15, "whso": 0.2, "zoe": 2.5, "zoo": 2.5, "coupling": 0.01}
    start = time.perf_counter()
    analyses = [analyze(CouplerGeometry(t["W"], t["S"], t["H"], EPS_R)) for t in TABLE1]
    elapsed = time.perf_counter() - start
    misses, worst = [], {k: 0.0 for k in tol}
    for trial, a in zip(TABLE1, analyses):
        for key, limit in tol.items():
            err = abs(getattr(a, key) - trial[key])
            worst[key] = max(worst[key], err)
            if err > limit:
                misses.append(f"{trial['name']}.{key} off by {err:.4g}")
    passed = not misses and elapsed < 1.0
    detail = ", ".join(f"{k} max|err|={v:.4g}" for k, v in worst.items())
    report("C1 Table 1 analysis", passed, f"{detail}; {elapsed * 1e3:.2f} ms")
    assert not misses, misses
    assert elapsed < 1.0


def test_c02_coupling_exact(report):
    err = abs(coupling(64.8, 43.2) - 0.2)
    report("C2 coupling(64.8, 43.2) = 0.2", err <= 1e-12, f"|err|={err:.3g}")
    assert err <= 1e-12


def test_c03_design_convergence(design_batch, report):
    results, _ = design_batch
    hits = [r.iterations_to(1e-4) for r in results]
    reached = sum(it is not None and it <= 500 for it in hits)
    to_coarse = [r.iterations_to(1e-2) for r in results]
    median = statistics.median(it if it is not None else float("inf") for it in to_coarse)
    passed = reached >= 95 and median <= 100
    report(
        "C3 design convergence",
        passed,
        f"{reached}/100 runs reach |C-0.2|<=1e-4 within 500 it; "
        f"median iterations to 0.01 = {median}; "
        f"{sum(r.terminated is Termination.TOLERANCE_REACHED for r in results)}/100 reach 1e-6",
    )
    assert reached >= 95
    assert median <= 100


def test_c04_feasibility(design_batch, report):
    results, _ = design_batch
    converged = [r for r in results if r.terminated is Termination.TOLERANCE_REACHED]
    bad = []
    for r in converged:
        a = analyze(CouplerGeometry(*r.best_position, EPS_R))
        if not (20.0 < a.zoo < a.zoe < 75.0):
            bad.append((r.seed, a.zoe, a.zoo))
    report("C4 feasibility", not bad and bool(converged),
           f"{len(converged) - len(bad)}/{len(converged)} converged designs inside 20 < Zoo < Zoe < 75")
    assert converged and not bad, bad


def test_c05_scale_invariance(report):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        w, s, h = rng.uniform(0.5, 20.0, 3)
        eps_r = rng.uniform(1.5, 5.9)
        base = analyze(CouplerGeometry(w, s, h, eps_r)).as_dict()
        for k in (0.1, 2.0, 10.0):
            scaled = analyze(CouplerGeometry(k * w, k * s, k * h, eps_r)).as_dict()
            for key, value in base.items():
                worst = max(worst, abs(scaled[key] - value) / abs(value))
    report("C5 scale invariance", worst <= 1e-9, f"max relative deviation {worst:.3g} over 3000 pairs")
    assert worst <= 1e-9


def test_c06_merged_strip_limit(report):
    worst = 0.0
    for u in np.linspace(0.5, 4.0, 20):
        a = analyze(CouplerGeometry(u, 1e-6, 1.0, EPS_R))
        worst = max(worst, abs(a.whse - 2 * u))
    report("C6 merged-strip limit", worst <= 1e-3, f"max |whse - 2 w/H| = {worst:.3g}")
    assert worst <= 1e-3


def test_c07_monotone_decoupling(report):
    spacings = np.linspace(0.2, 8.0, 20)
    cs = [analyze(CouplerGeometry(8.0, s, 4.0, EPS_R)).coupling for s in spacings]
    ok = all(b < a for a, b in zip(cs, cs[1:]))
    report("C7 monotone decoupling", ok, f"C from {cs[0]:.4f} down to {cs[-1]:.4f} over s in [0.2, 8]")
    assert ok


def test_c08_optimizer_invariants(design_batch, sphere_batch, rastrigin_batch, tmp_path, report):
    violations = design_batch[1] + sphere_batch[1] + rastrigin_batch[1]
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        main(["design", "--runs", "3", "--seed", "11", "--out", str(out)])
        main(["bench", "--function", "rosenbrock", "--dim", "2", "--max-iter", "200",
              "--seed", "11", "--out", str(out)])
        outs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    identical = outs[0] == outs[1] and len(outs[0]) == 6
    passed = not violations and identical
    report("C8 optimizer invariants", passed,
           f"{len(violations)} violations over 300 checked runs; output files byte-identical: {identical}")
    assert not violations, violations[:10]
    assert identical


def test_c09_bench_sanity(sphere_batch, rastrigin_batch, report):
    sphere_hits = sum(r.best_fitness < 1e-6 for r in sphere_batch[0])
    ras_hits = sum(r.best_fitness < 1e-2 for r in rastrigin_batch[0])
    report("C9a sphere 5-D", sphere_hits >= 90, f"{sphere_hits}/100 seeds reach < 1e-6 within 1000 it")
    report("C9b rastrigin 2-D", ras_hits >= 50, f"{ras_hits}/100 seeds reach < 1e-2 within 1000 it")
    assert sphere_hits >= 90
    assert ras_hits >= 50


def test_c10_branch_continuity(report):
    jumps = {}
    for eps_r in (2.0, 3.9, 5.5):
        below = z0_hammerstad(1.0 - 1e-12, eps_r)
        above = z0_hammerstad(1.0, eps_r)
        jumps[eps_r] = abs(below - above) / above
        # the default model has a single expression, so it must be continuous as well
        smooth = abs(z0_single(1.0 - 1e-9, eps_r) - z0_single(1.0, eps_r)) / z0_single(1.0, eps_r)
        assert smooth < 1e-6
    worst = max(jumps.values())
    report("C10 z0 branch continuity", worst <= 0.005,
           ", ".join(f"eps_r={k}: {v:.3%}" for k, v in jumps.items()))
    assert worst <= 0.005
