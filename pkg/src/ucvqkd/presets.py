"""Figure-reproduction presets and their dataset builders.

Every preset documents all parameter choices it makes (beta for region
scans, lambda and the per-pulse basis for the finite-size curves); those
choices land in the output metadata verbatim.

Each builder returns (columns, rows, metadata).
"""

from __future__ import annotations

import numpy as np

from .asymptotic import (
    key_rate_gg02,
    key_rate_ucvqkd_symmetric,
    max_tolerable_excess_noise,
)
from .composable import EpsilonBudget
from .gaussian import DomainError
from .optimize import distance_to_eta, rate_vs_block_size, sweep_distance
from .region import RegionContext, scan_region

FIGURE_IDS = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7")

REGION_PRESETS = {
    "fig2": RegionContext(vm=100.0, beta=1.0, eta_x=0.4, eps_x=0.05),
    "fig6": RegionContext(vm=100.0, beta=1.0, eta_x=0.01, eps_x=1.0),
    "fig7": RegionContext(vm=100.0, beta=1.0, eta_x=1.0, eps_x=0.01),
}


def build_region(figure_id, nx=200, ny=200):
    ctx = REGION_PRESETS[figure_id]
    grid = scan_region(ctx, nx=nx, ny=ny)
    rows = [(c.eta_p, c.eps_p, c.cls.value, c.rate) for c in grid.cells]
    metadata = {
        "figure": figure_id,
        "vm": ctx.vm,
        "beta": ctx.beta,
        "eta_x": ctx.eta_x,
        "eps_x": ctx.eps_x,
        "grid": f"{nx}x{ny}",
        "eta_p_range": "[0,1]",
        "eps_p_range": "[0,1]",
        "note": "beta=1 plots the information-theoretic rate surface",
    }
    return ("eta_p", "eps_p", "class", "rate"), rows, metadata


def build_fig3(n_points=101):
    losses = np.linspace(0.01, 25.0, n_points)
    distances = losses / 0.2
    ucv, gg02 = (
        sweep_distance(key_rate_ucvqkd_symmetric, distances, vm=20.0),
        sweep_distance(key_rate_gg02, distances, vm=20.0),
    )
    rows = []
    for loss, km, r_u, r_g in zip(losses, distances, ucv.rates, gg02.rates):
        eps_u, found_u = max_tolerable_excess_noise(
            loss, 20.0, 0.95, key_rate_ucvqkd_symmetric
        )
        rows.append((loss, km, r_u, r_g, eps_u if found_u else 0.0))
    metadata = {
        "figure": "fig3",
        "vm": 20.0,
        "beta": 0.95,
        "eps": 0.01,
        "loss_db_per_km": 0.2,
    }
    return (
        ("loss_db", "distance_km", "rate_ucvqkd", "rate_gg02", "eps_max_ucvqkd"),
        rows,
        metadata,
    )


def build_fig4(n_points=51):
    losses = np.linspace(0.01, 25.0, n_points)
    distances = losses / 0.2
    ucv, gg02 = (
        sweep_distance(key_rate_ucvqkd_symmetric, distances, optimize_vm=True),
        sweep_distance(key_rate_gg02, distances, optimize_vm=True),
    )
    rows = [
        (loss, km, ru, vu, rg, vg)
        for loss, km, ru, vu, rg, vg in zip(
            losses, distances, ucv.rates, ucv.optimal_vm, gg02.rates, gg02.optimal_vm
        )
    ]
    metadata = {
        "figure": "fig4",
        "beta": 0.95,
        "eps": 0.01,
        "loss_db_per_km": 0.2,
        "vm_bracket": "[0.1,1000]",
    }
    return (
        (
            "loss_db",
            "distance_km",
            "rate_ucvqkd_opt",
            "vm_opt_ucvqkd",
            "rate_gg02_opt",
            "vm_opt_gg02",
        ),
        rows,
        metadata,
    )


FIG5_DISTANCES = (10.0, 12.0, 13.0, 15.0)


def build_fig5(two_n_values=None, mu3_mode="covariance"):
    if two_n_values is None:
        two_n_values = [10.0**k for k in np.arange(7.0, 14.01, 0.5)]
    budget = EpsilonBudget.default()
    sweeps = {
        km: rate_vs_block_size(km, two_n_values, budget, mu3_mode=mu3_mode)
        for km in FIG5_DISTANCES
    }
    eta15 = distance_to_eta(15.0)
    gg02_15 = key_rate_gg02(20.0, 0.95, eta15, 0.01)
    rows = []
    for i, two_n in enumerate(two_n_values):
        row = [two_n]
        for km in FIG5_DISTANCES:
            row.append(sweeps[km].rates[i])
            row.append(sweeps[km].optimal_vm[i])
        row.append(gg02_15)
        rows.append(tuple(row))
    columns = ["two_n"]
    for km in FIG5_DISTANCES:
        columns.append(f"rate_{km:g}km")
        columns.append(f"vm_opt_{km:g}km")
    columns.append("rate_gg02_15km_asymptotic")
    metadata = {
        "figure": "fig5",
        "beta": 0.95,
        "eps_x": 0.01,
        "d": 5,
        "lambda": 0.5,
        "mu3_mode": mu3_mode,
        "rate_basis": "per correctly-measured pulse (2*lambda*n)",
        "epsilon_budget": "eps=1e-20, eps_sm=eps_bar=1e-21, eps_PE=eps_cor=eps_ent=1e-41",
        "gg02_reference": "asymptotic rate at 15 km, vm=20 (finite-size baseline out of scope)",
    }
    return tuple(columns), rows, metadata


def build_figure(figure_id, seed=None, grid=None):
    """Dispatch a figure id to its dataset builder."""
    if figure_id in REGION_PRESETS:
        nx, ny = grid if grid else (200, 200)
        return build_region(figure_id, nx=nx, ny=ny)
    if figure_id == "fig3":
        return build_fig3()
    if figure_id == "fig4":
        return build_fig4()
    if figure_id == "fig5":
        cols, rows, meta = build_fig5()
        meta["seed"] = seed
        return cols, rows, meta
    raise DomainError(f"unknown figure id {figure_id!r}; expected one of {FIGURE_IDS}")
