"""Compare compiled kernels with the pure-numpy fallback.

Each case runs in two fresh interpreters, one with SINGOSC_DISABLE_JIT=1,
so that the fallback really is the uncompiled code path.  Warm-up calls
(numba compilation or cache load) are excluded from the timings.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

CASES = {
    "transition_matrix 200x200 d=1e5": (
        "from singosc import transition_matrix",
        "transition_matrix(1e5, 1e-5, 200, 200)",
    ),
    "integrate_mode resonance t=0..40": (
        "from singosc import integrate_mode, ParametricResonance; p = ParametricResonance(0.02)",
        "integrate_mode(p, 0.0, 40.0, 1e-10)",
    ),
    "psi_n_density n=5 d=1e5 on 20001 points": (
        "import numpy as np; from singosc import psi_n_density, resonance_mode; "
        "m = resonance_mode(0.02, 13.7); x = np.sqrt(np.linspace(8.5e4, 9.5e4, 20001))",
        "psi_n_density(5, 1e5, m, x)",
    ),
}

RUNNER = """
import json, sys, timeit
from singosc import _accel
setup, stmt, repeat = sys.argv[1], sys.argv[2], int(sys.argv[3])
ns = {}
exec(setup, ns)
exec(stmt, ns)  # warm-up
t = min(timeit.repeat(stmt, globals=ns, number=1, repeat=repeat))
print(json.dumps({"jit": _accel.JIT_ENABLED, "seconds": t}))
"""


def run(setup, stmt, repeat, disable):
    env = dict(os.environ)
    env.pop("SINGOSC_DISABLE_JIT", None)
    if disable:
        env["SINGOSC_DISABLE_JIT"] = "1"
    proc = subprocess.run(
        [sys.executable, "-c", RUNNER, setup, stmt, str(repeat)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'case':45s} {'numpy [s]':>11s} {'jit [s]':>11s} {'speedup':>8s}")
    for name, (setup, stmt) in CASES.items():
        slow = run(setup, stmt, args.repeat, disable=True)
        fast = run(setup, stmt, args.repeat, disable=False)
        label = f"{fast['seconds']:11.4f}" if fast["jit"] else f"{'n/a':>11s}"
        ratio = slow["seconds"] / fast["seconds"] if fast["jit"] else float("nan")
        print(f"{name:45s} {slow['seconds']:11.4f} {label} {ratio:8.1f}")


if __name__ == "__main__":
    main()
