"""Acceptance checks, one per criterion.

Each check returns (ok, detail).  Under pytest every check is a test and a
PASS/FAIL line per criterion is printed in the terminal summary; run the
file directly to print the same lines without pytest.
"""

import math
import time

import numpy as np
import pytest
from scipy.integrate import quad

from singosc import (
    ParametricResonance,
    TrapParameters,
    effective_params,
    integrate_mode,
    leakage,
    psi_n_density,
    psi_n_density_asymptotic,
    resonance_mode,
    transition_matrix,
    w_exact,
    w_exact_hypergeom,
    w_large_d,
    w_oscillator,
)
from singosc.classical_mode import _resonance_arrays
from singosc.figures import DEFAULTS, generate
from singosc.transitions import oscillator_levels

RESULTS = {}


def c1_trap_mapping():
    t0 = time.perf_counter()
    p = effective_params(TrapParameters(1e5, 100.0, 1e-3))
    ms = 1e3 * (time.perf_counter() - t0)
    ok_g = 3e9 <= p.g_star <= 3e10
    ok_n = 80 <= p.n_max <= 120
    return ok_g and ok_n, f"g*={p.g_star:.4g} ({'ok' if ok_g else 'out'}), n_max={p.n_max:.2f} ({'ok' if ok_n else 'outside [80,120]'}), {ms:.2f} ms"


def c2_identity():
    bad = [(n, m, d) for d in (0.5, 10.0, 1e5) for n in range(21) for m in range(21)
           if w_exact(n, m, d, 0.0) != (1.0 if n == m else 0.0)]
    return not bad, f"{3 * 21 * 21 - len(bad)}/{3 * 21 * 21} exact"


def c3_dual_formula():
    rng = np.random.default_rng(20240601)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(500):
        n, m = rng.integers(0, 31, size=2)
        d = rng.uniform(1.0, 1e5)
        r = rng.uniform(0.0, 0.9)
        a, b = w_exact(n, m, d, r), w_exact_hypergeom(n, m, d, r)
        if a != b:
            worst = max(worst, abs(a - b) / max(abs(a), abs(b)))
    dt = time.perf_counter() - t0
    return worst <= 1e-10 and dt < 10, f"max rel diff {worst:.2e}, {dt:.2f} s"


def c4_oscillator():
    worst = 0.0
    for d in (0.5, -0.5):
        for r in (0.1, 0.5, 0.9):
            for n in range(11):
                for m in range(11):
                    k, j = oscillator_levels(n, m, d)
                    if max(k, j) > 20:
                        continue
                    a, b = w_exact(n, m, d, r), w_oscillator(k, j, r)
                    if a != b:
                        worst = max(worst, abs(a - b) / max(abs(a), abs(b)))
    return worst <= 1e-9, f"max rel diff {worst:.2e}"


def c5_unitarity():
    t0 = time.perf_counter()
    worst, ok = 0.0, True
    for d, r, cols in [(1e5, 1e-6, 40), (1e5, 1e-5, 60), (10.0, 0.3, 120)]:
        tm = transition_matrix(d, r, 11, cols)
        res = tm.unitarity_residuals()
        worst = max(worst, float(np.max(np.abs(res))))
        ok &= bool(np.all(np.abs(res) <= tm.row_tail_bounds + 1e-14)) and tm.tail_bound <= 1e-8
    dt = time.perf_counter() - t0
    ok &= worst <= 1e-8 and dt < 30
    return ok, f"max |1 - row sum| {worst:.2e}, within tail bounds: {ok}, {dt:.2f} s"


def c6_amplification():
    parts = []
    diag = [w_exact(n, n, 1e5, 1e-6) for n in range(6)]
    ok_a = min(diag) >= 0.8
    parts.append(f"W_n^n(n<=5)=[{', '.join(f'{v:.3f}' for v in diag)}] {'ok' if ok_a else 'below 0.8'}")
    ratio = leakage(0, 1e5, 1e-6) / leakage(0, 0.5, 1e-6)
    ok_b = ratio >= 1e3
    parts.append(f"leakage ratio {ratio:.3g}")
    mats = {}
    for name in ("fig4", "fig5", "fig6"):
        p = DEFAULTS[name]
        _, cols, side = generate(name, dict(p))
        mats[name] = np.column_stack(cols[1:])
        ok_triple = side["d"] == 1e5 and side["r"] == p["r"]
    ok_c = ok_triple and [DEFAULTS[f]["r"] for f in ("fig4", "fig5", "fig6")] == [1e-6, 1e-5, 1e-4]
    w4 = mats["fig4"]
    bad_rows = [n for n in range(6) if int(np.argmax(w4[n])) != n]
    ok_d = not bad_rows
    parts.append("fig4 diagonal is row max for n<=5" if ok_d else f"fig4 diagonal not row max in rows {bad_rows}")
    mode = int(np.argmax(mats["fig6"][0]))
    ok_e = abs(mode - 10) <= 1
    parts.append(f"fig6 W_0^m mode at m={mode}")
    return all((ok_a, ok_b, ok_c, ok_d, ok_e)), "; ".join(parts)


def c7_wronskian():
    k = 0.02
    tr = integrate_mode(ParametricResonance(k), 0.0, 40.0, 1e-10)
    drift = tr.max_wronskian_drift
    eps, _ = _resonance_arrays(k, tr.t)
    dev = float(np.max(np.abs(eps - tr.eps)))
    return drift <= 1e-8 and dev <= 0.05, f"max |W - 2i| {drift:.2e}, max |eps_analytic - eps| {dev:.2e}"


def _norm(fn, centre, sd):
    lo = math.sqrt(max(centre - 16 * sd, 0.0)) or 1e-12
    hi = math.sqrt(centre + 16 * sd)
    pts = np.sqrt(np.linspace(lo**2, hi**2, 40))[1:-1]
    return quad(fn, lo, hi, points=pts, limit=500, epsabs=1e-13, epsrel=1e-12)[0]


def c8_normalization():
    mode = resonance_mode(0.02, 13.7)
    s = mode.abs_eps_sq
    worst = 0.0
    for n in (0, 1, 2, 5):
        for d in (2.0, 10.0, 1e3, 1e5):
            c = s * (d + 1 + 2 * n)
            val = _norm(lambda x: psi_n_density(n, d, mode, x), c, s * math.sqrt(d + 1 + 2 * n) * (1 + n))
            worst = max(worst, abs(val - 1))
    ok_a = worst <= 1e-6
    d = 1e5
    per_n = []
    for n in (0, 1, 2, 5):
        sd = s * math.sqrt(d) * (1 + n)
        x = np.sqrt(np.linspace(s * (d + 1) - 8 * sd, s * (d + 1) + 8 * sd, 20001))
        ex = psi_n_density(n, d, mode, x)
        asy = psi_n_density_asymptotic(n, d, mode, x)
        mask = ex > 1e-4 * ex.max()
        per_n.append(float(np.max(np.abs(asy[mask] / ex[mask] - 1))))
    ok_b = max(per_n) <= 0.01
    rel = ", ".join(f"n={n}: {v:.3g}" for n, v in zip((0, 1, 2, 5), per_n))
    return ok_a and ok_b, f"max |norm - 1| {worst:.2e}; exact vs asymptotic above 1e-4 peak {rel} {'ok' if ok_b else '(limit 0.01)'}"


def c9_poisson():
    worst = max(abs(w_large_d(0, m, 1.0) * math.factorial(m) / math.exp(-1) - 1) for m in range(11))
    return worst <= 1e-12, f"max rel diff {worst:.2e}"


CHECKS = {
    1: ("trap mapping", c1_trap_mapping),
    2: ("identity limit", c2_identity),
    3: ("dual-formula equivalence", c3_dual_formula),
    4: ("oscillator reduction", c4_oscillator),
    5: ("unitarity", c5_unitarity),
    6: ("amplification", c6_amplification),
    7: ("Wronskian conservation", c7_wronskian),
    8: ("state normalization", c8_normalization),
    9: ("Poisson structure", c9_poisson),
}


def line(num, name, ok, detail):
    return f"criterion {num} {name}: {'PASS' if ok else 'FAIL'} ({detail})"


@pytest.mark.parametrize("num", sorted(CHECKS))
def test_criterion(num):
    name, fn = CHECKS[num]
    ok, detail = fn()
    RESULTS[num] = line(num, name, ok, detail)
    print(RESULTS[num])
    assert ok, RESULTS[num]


if __name__ == "__main__":
    for num, (name, fn) in sorted(CHECKS.items()):
        print(line(num, name, *fn()))
