"""Datasets behind the six standard plots.

Each generator takes a plain parameter dict (so that a manifest can replay
it) and returns ``(header, columns)`` ready for CSV output.
"""

from __future__ import annotations

import math

import numpy as np

from .classical_mode import ModeState, _resonance_arrays
from .specfun import DomainError
from .states import psi_n_density, psi_n_density_asymptotic
from .transitions import transition_matrix, w_large_d

DEFAULTS = {
    "fig1": {"n": 0, "d": 1.0e5, "k": 0.02, "t_min": 0.0, "t_max": 40.0, "t_steps": 81, "points": 201, "width": 6.0, "asymptotic": False},
    "fig2": {"n": 2, "d": 1.0e5, "k": 0.02, "t_min": 0.0, "t_max": 40.0, "t_steps": 81, "points": 201, "width": 6.0, "asymptotic": False},
    "fig3": {"n": 5, "ms": [0, 2, 5, 10], "rd_min": 0.0, "rd_max": 20.0, "points": 201},
    "fig4": {"d": 1.0e5, "r": 1.0e-6, "rows": 16, "cols": 16, "regime": "ExactJacobi"},
    "fig5": {"d": 1.0e5, "r": 1.0e-5, "rows": 16, "cols": 16, "regime": "ExactJacobi"},
    "fig6": {"d": 1.0e5, "r": 1.0e-4, "rows": 16, "cols": 16, "regime": "ExactJacobi"},
}

FIGURES = tuple(DEFAULTS)


def params_for(name: str, overrides: dict | None = None) -> dict:
    if name not in DEFAULTS:
        raise DomainError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")
    p = dict(DEFAULTS[name])
    p.update(overrides or {})
    return p


def _density_surface(p):
    n, d, k = int(p["n"]), float(p["d"]), float(p["k"])
    times = np.linspace(p["t_min"], p["t_max"], int(p["t_steps"]))
    eps, eps_dot = _resonance_arrays(k, times)
    s = np.abs(eps) ** 2
    # one x grid for all times: x^2 within +-width std of <x^2> at every t
    centre = (d + 1.0 + 2.0 * n) * s
    sd = s * math.sqrt(d + 1.0 + 2.0 * n)
    lo = max(float(np.min(centre - p["width"] * sd)), 0.0)
    hi = float(np.max(centre + p["width"] * sd))
    x = np.sqrt(np.linspace(lo, hi, int(p["points"])))
    x = x[x > 0]
    dens = psi_n_density_asymptotic if p.get("asymptotic") else psi_n_density
    tcol, xcol, dcol = [], [], []
    for t, e, ed in zip(times, eps, eps_dot):
        mode = ModeState(float(t), complex(e), complex(ed))
        tcol.append(np.full(x.size, t))
        xcol.append(x)
        dcol.append(dens(n, d, mode, x))
    return ["t", "x", "density"], [np.concatenate(tcol), np.concatenate(xcol), np.concatenate(dcol)]


def _rd_sweep(p):
    n = int(p["n"])
    rd = np.linspace(p["rd_min"], p["rd_max"], int(p["points"]))
    cols = [rd]
    header = ["rd"]
    for m in p["ms"]:
        header.append(f"W_{n}^{int(m)}")
        cols.append(np.array([w_large_d(n, int(m), float(v)) for v in rd]))
    return header, cols


def _matrix(p):
    tm = transition_matrix(p["d"], p["r"], int(p["rows"]), int(p["cols"]), p["regime"])
    header = ["n"] + [f"m{m}" for m in range(tm.m_max_cols)]
    cols = [np.arange(tm.n_max_rows, dtype=float)] + [tm.entries[:, m] for m in range(tm.m_max_cols)]
    return header, cols, tm


def generate(name: str, params: dict):
    """Return (header, columns, extra) for figure ``name`` with ``params``."""
    if name in ("fig1", "fig2"):
        header, cols = _density_surface(params)
        return header, cols, {}
    if name == "fig3":
        header, cols = _rd_sweep(params)
        return header, cols, {}
    header, cols, tm = _matrix(params)
    return header, cols, tm.sidecar()
