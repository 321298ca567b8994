"""Acceptance checks, one per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""
import math
import random
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dieout import load, simulate  # noqa: E402
from dieout.certificates import LOG_SLACK, must_die_report, team_certificate, verify_dieout  # noqa: E402
from dieout.cli import main as cli_main  # noqa: E402
from dieout.config import bundled_names  # noqa: E402
from dieout.errors import Blowup  # noqa: E402
from dieout.integrator import SimConfig, percapita_rates  # noqa: E402
from dieout.model import Constant, Coupled, SystemSpec  # noqa: E402
from dieout.nullspace import team  # noqa: E402
from dieout.trophic import check_trophic, quadratic_cap, trapping_region, v_dot  # noqa: E402

from test_nullspace import oracle_team, random_matrix  # noqa: E402

RESULTS = []


def best_time(fn, repeat=5):
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return out, best


def c1_exact_kernel():
    spec = SystemSpec.from_lists([-1, 1, -1], [[1, 2], [1, 1], [3, 1]])
    t, secs = best_time(lambda: team(spec))
    entries = [m.entries for m in t.members]
    rate = t.members[0].dot(spec.C) if t.members else None
    ok = entries == [(2, -5, 1)] and rate == -8 and secs < 1e-3
    return ok, f"members={entries} nu.C={rate} runtime={secs * 1e3:.3f} ms (< 1 ms)"


def c2_team_counts():
    parts, ok = [], True
    for name, want_members, want_size in (("seven_dim", 10, 3), ("fourteen", 28, 6)):
        spec = load(name).spec
        t, secs = best_time(lambda: team(spec), repeat=1)
        sizes = {len(m.support) for m in t.members}
        good = len(t.members) == want_members and sizes == {want_size} and t.k == 3 and secs < 1
        ok &= good
        parts.append(f"{name}: k={t.k} members={len(t.members)} sizes={sorted(sizes)} {secs:.3f} s")
    return ok, "; ".join(parts)


def c3_oracle():
    mismatches = []
    for seed in range(50):
        S = random_matrix(random.Random(seed))
        got = {m.entries for m in team(SystemSpec.from_lists([-1] * len(S), S)).members}
        if got != oracle_team(S):
            mismatches.append(seed)
    return not mismatches, f"50 random matrices (d <= 7), mismatching seeds: {mismatches}"


def _soundness(cfg, traj):
    tc = team_certificate(team(cfg.spec), cfg.spec.C, traj.beta, cfg.x0)
    logs = traj.log_states()
    worst = -math.inf
    for c in tc.certificates:
        lowest = logs[:, list(c.positive_support)].min(axis=1)
        worst = max(worst, float(np.max(lowest - (c.a - c.b * traj.t))))
    rep = verify_dieout(traj, tc)
    return worst <= LOG_SLACK and rep.min_census >= tc.k, rep.min_census, tc.k, worst


def c4_soundness():
    parts, ok = [], True
    for name in bundled_names():
        cfg = load(name)
        t = team(cfg.spec)
        if t.k == 0 or all(m.dot(cfg.spec.C) == 0 for m in t.members):
            parts.append(f"{name}: no oriented member, skipped")
            continue
        start = time.perf_counter()
        try:
            traj = simulate(cfg.spec, cfg.signal, cfg.sim_config())
        except Blowup:
            parts.append(f"{name}: unbounded, skipped")
            continue
        good, census, k, worst = _soundness(cfg, traj)
        secs = time.perf_counter() - start
        if name == "four_dim":
            good &= k == 2 and secs < 30 and cfg.horizon == 2000 and cfg.dt == 0.01
        ok &= good
        parts.append(f"{name}: k={k} min_census={census} max log excess={worst:.3g} {secs:.1f} s")
    return ok, "; ".join(parts)


def c5_must_die():
    cfg = load("four_dim")
    md = must_die_report(team(cfg.spec), cfg.spec.C).as_dict()
    traj = simulate(cfg.spec, cfg.signal, cfg.sim_config())
    x = traj.X[-1]
    x1s = F(3, 10) / F(7, 2000)
    x3s = (F(21, 20) - F(1, 500) * x1s) / F(3, 400)
    ok = (md["definite"] == [2, 4] and x[1] < 1e-6 and x[3] < 1e-6
          and abs(x[0] / float(x1s) - 1) <= 0.01 and abs(x[2] / float(x3s) - 1) <= 0.01)
    return ok, (f"definite={md['definite']} x(2000)=({x[0]:.4f}, {x[1]:.2e}, {x[2]:.4f}, {x[3]:.2e}) "
                f"oracle x1*={float(x1s):.4f} x3*={float(x3s):.4f}")


def c6_balanced(tmp):
    spec = SystemSpec.from_lists([-1, F(-3, 5), -1], [[1, 2], [1, 1], [3, 1]])
    rates = percapita_rates(spec, (F(1, 5), F(2, 5)))
    x0 = (0.5, 1.0, 2.0)
    traj = simulate(spec, Constant((F(1, 5), F(2, 5))), SimConfig(x0, 100.0, 0.01))
    drift = float(np.max(np.abs(traj.X - np.array(x0))))
    code = cli_main(["certify", "--config", "ex_specific_balanced", "--out", str(tmp)])
    ok = rates == (0, 0, 0) and drift <= 1e-10 and code == 4
    return ok, f"rates={tuple(str(r) for r in rates)} max drift={drift:.2e} certify exit={code}"


def c7_trapping():
    start = time.perf_counter()
    spec = load("four_dim").spec
    rep = check_trophic(spec)
    reg = trapping_region(spec)
    rng = np.random.default_rng(7)
    top = float(reg.lam / reg.E[-1])
    worst = -math.inf
    for _ in range(10_000):
        x = rng.random(spec.d) * rng.choice([1e-2, 1, 1e2, 1e4]) * (top / 1e4)
        x[rng.random(spec.d) < 0.2] = 0.0
        X = [F(v) for v in x]
        gap = v_dot(spec, reg, X) - (reg.A - reg.B * reg.V(X))
        worst = max(worst, float(gap))
    diss_ok = worst <= 1e-12
    lam = float(reg.lam)
    E = np.array([float(e) for e in reg.E])
    trap_ok = True
    for _ in range(20):
        w = rng.dirichlet(np.ones(spec.d))
        x0 = np.maximum(w * rng.uniform(0.1, 10) * lam / E, 1e-3)
        traj = simulate(spec, Coupled(range(spec.d)), SimConfig(x0, 50.0, 0.005, sample_stride=20))
        V = traj.X @ E
        inside = np.flatnonzero(V <= lam)
        trap_ok &= bool(inside.size) and bool(np.all(V[inside[0]:] <= lam * (1 + 1e-6)))
    secs = time.perf_counter() - start
    ok = rep.passed and diss_ok and trap_ok and secs < 60
    return ok, (f"trophic={rep.passed} eps={reg.epsilon} A={float(reg.A):.4g} B={reg.B} "
                f"lambda={lam:.6g}; max(Vdot - (A - B V))={worst:.3g}; 20 runs trapped={trap_ok}; "
                f"{secs:.1f} s")


def c8_counterexample():
    cfg = load("classic_lv")
    rep = check_trophic(cfg.spec)
    traj = simulate(cfg.spec, cfg.signal, SimConfig(cfg.x0, cfg.horizon, 1e-3))
    x1, x2 = traj.X[:, 0], traj.X[:, 1]
    V = x1 - np.log(x1) + x2 - np.log(x2)
    drift = float(np.max(np.abs(V - V[0])) / abs(V[0]))
    # one period: first return of x1 upward through its start value after dipping below it
    below = np.flatnonzero(x1 < x1[0] - 0.1)
    back = np.flatnonzero((np.arange(len(x1)) > below[0]) & (x1 >= x1[0])) if below.size else []
    period = float(traj.t[back[0]]) if len(back) else math.nan
    ok = (not rep.passed) and rep.as_dict()["t1_violations"] == [1] and drift <= 1e-6 and period < cfg.horizon
    return ok, f"t1_violations={rep.as_dict()['t1_violations']} period~{period:.3f} relative drift={drift:.2e}"


def c9_quadratic():
    rng = random.Random(9)
    worst = -math.inf
    for _ in range(100):
        c = F(rng.randint(0, 5000), 1000)
        s = -F(rng.randint(1, 5000), 1000)
        a = float(quadratic_cap(c, s))
        x = np.linspace(0, 10 * float(c + 1) / float(-s), 5001)
        lhs = float(c) * x + float(s) * x ** 2
        rhs = a - x
        worst = max(worst, float(np.max((lhs - rhs) / np.maximum(1.0, np.abs(lhs) + np.abs(rhs)))))
    return worst <= 1e-12, f"100 pairs, max relative violation={worst:.3g}"


def c10_oscillator():
    cfg = load("ex_specific_oscillator")
    sig = cfg.signal
    traj = simulate(cfg.spec, sig, cfg.sim_config())
    ev = traj.events
    times = [e.t_switch for e in ev]
    gaps = np.diff([0.0] + times)
    logs = traj.log_states()
    logm = math.log(float(sig.m))
    at_m = []
    for e in ev:
        i = int(np.flatnonzero(traj.t == e.t_switch)[0])
        w = sig.watch_low if e.level == "star" else sig.watch_high
        at_m.append(abs(logs[i, w] - logm))
    hits_low = sum(e.level == "star" for e in ev)
    hits_high = sum(e.level == "starstar" for e in ev)
    tc = team_certificate(team(cfg.spec), cfg.spec.C, traj.beta, cfg.x0)
    mins = np.minimum(logs[:, sig.watch_low], logs[:, sig.watch_high])
    under = bool(np.all(mins <= tc.a_star - tc.b_star * traj.t + LOG_SLACK))
    ok = (len(ev) >= 3 and max(at_m) <= 1e-9 and hits_low >= 2 and hits_high >= 2
          and bool(np.all(np.diff(gaps) > 0)) and under)
    return ok, (f"switches={len(ev)} intervals={[round(float(g), 3) for g in gaps]} "
                f"max |ln x - ln m| at switch={max(at_m):.1e} min(x1,x3) under envelope={under}")


def c11_order():
    spec = SystemSpec.from_lists([-1], [[0]])
    errs = []
    for dt in (0.2, 0.1, 0.05):
        traj = simulate(spec, Constant((0,)), SimConfig((1.0,), 1.0, dt, log_space=False))
        errs.append(abs(traj.X[-1, 0] - math.exp(-1)))
    ratios = [errs[0] / errs[1], errs[1] / errs[2]]
    return all(12 <= r <= 20 for r in ratios), f"error ratios per halving={[round(float(r), 3) for r in ratios]}"


CRITERIA = [
    (1, "exact kernel", c1_exact_kernel),
    (2, "team counts", c2_team_counts),
    (3, "brute-force oracle", c3_oracle),
    (4, "certificate soundness", c4_soundness),
    (5, "must-die prediction", c5_must_die),
    (6, "balanced coexistence", c6_balanced),
    (7, "trophic trapping region", c7_trapping),
    (8, "non-trophic counterexample", c8_counterexample),
    (9, "quadratic cap", c9_quadratic),
    (10, "oscillator scenario", c10_oscillator),
    (11, "integrator order", c11_order),
]


def run_criterion(number, title, fn, tmp):
    args = (tmp,) if fn is c6_balanced else ()
    try:
        ok, detail = fn(*args)
    except Exception as exc:  # a crash is a failure, reported like one
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    line = f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    print(line)
    RESULTS.append(line)
    return ok


@pytest.mark.parametrize("number, title, fn", CRITERIA, ids=[f"c{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, fn, tmp_path):
    assert run_criterion(number, title, fn, tmp_path)


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        results = [run_criterion(n, t, f, Path(tmp)) for n, t, f in CRITERIA]
    sys.exit(0 if all(results) else 1)
