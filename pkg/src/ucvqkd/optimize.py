"""Modulation-variance optimization and parameter sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .asymptotic import key_rate_gg02, key_rate_ucvqkd_symmetric
from .composable import ComposableParams, EpsilonBudget, composable_rate
from .gaussian import ChannelParams, DomainError

LOSS_DB_PER_KM = 0.2

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def distance_to_eta(km, loss_db_per_km=LOSS_DB_PER_KM):
    return 10.0 ** (-loss_db_per_km * km / 10.0)


@dataclass(frozen=True)
class OptimumResult:
    vm: float
    rate: float
    at_bracket_edge: bool
    unimodal: bool


def optimal_modulation_variance(
    rate_fn, bracket=(0.1, 1e3), coarse_points=40, rel_tol=1e-4
) -> OptimumResult:
    """Maximize rate_fn(vm) over the bracket by golden-section search.

    A log-spaced coarse scan locates the best cell and checks unimodality;
    non-unimodal profiles fall back to a fine grid scan. rate_fn may raise
    DomainError or return nan for invalid points; those count as -inf.
    """

    def safe(vm):
        try:
            r = rate_fn(vm)
        except DomainError:
            return -math.inf
        return r if np.isfinite(r) else -math.inf

    grid = np.logspace(math.log10(bracket[0]), math.log10(bracket[1]), coarse_points)
    values = np.array([safe(v) for v in grid])
    if not np.any(values > -math.inf):
        raise DomainError("rate function invalid over the whole bracket")
    best = int(np.argmax(values))
    if best == 0 or best == coarse_points - 1:
        return OptimumResult(
            vm=float(grid[best]),
            rate=float(values[best]),
            at_bracket_edge=True,
            unimodal=True,
        )

    finite = values > -math.inf
    signs = np.sign(np.diff(values[finite]))
    signs = signs[signs != 0]
    unimodal = not np.any(np.diff(signs) > 0)  # no rise after a fall
    if not unimodal:
        fine = np.logspace(
            math.log10(bracket[0]), math.log10(bracket[1]), 50 * coarse_points
        )
        fvals = np.array([safe(v) for v in fine])
        k = int(np.argmax(fvals))
        return OptimumResult(
            vm=float(fine[k]),
            rate=float(fvals[k]),
            at_bracket_edge=k in (0, len(fine) - 1),
            unimodal=False,
        )

    lo, hi = grid[best - 1], grid[best + 1]
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = safe(x1), safe(x2)
    while (hi - lo) > rel_tol * max(abs(lo), abs(hi)):
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = safe(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = safe(x1)
    vm = x1 if f1 >= f2 else x2
    return OptimumResult(
        vm=float(vm),
        rate=float(max(f1, f2)),
        at_bracket_edge=False,
        unimodal=True,
    )


@dataclass(frozen=True)
class SweepResult:
    axis_name: str
    axis: list
    rates: list
    optimal_vm: list | None
    metadata: dict = field(default_factory=dict)


def sweep_distance(
    rate_fn,
    distances,
    vm=None,
    beta=0.95,
    eps=0.01,
    optimize_vm=False,
    loss_db_per_km=LOSS_DB_PER_KM,
    vm_bracket=(0.1, 1e3),
) -> SweepResult:
    """Rate vs fiber distance for a (vm, beta, eta, eps) rate function."""
    if len(distances) == 0:
        raise DomainError("distances must be non-empty")
    if not optimize_vm and vm is None:
        raise DomainError("either fix vm or enable optimization")
    rates, vms = [], []
    for km in distances:
        eta = distance_to_eta(km, loss_db_per_km)
        if optimize_vm:
            opt = optimal_modulation_variance(
                lambda v: rate_fn(v, beta, eta, eps), bracket=vm_bracket
            )
            rates.append(opt.rate)
            vms.append(opt.vm)
        else:
            rates.append(rate_fn(vm, beta, eta, eps))
            vms.append(vm)
    return SweepResult(
        axis_name="distance_km",
        axis=list(distances),
        rates=rates,
        optimal_vm=vms,
        metadata={
            "beta": beta,
            "eps": eps,
            "vm": vm,
            "optimize_vm": optimize_vm,
            "loss_db_per_km": loss_db_per_km,
        },
    )


def composable_rate_fn(distance_km, lam, d, beta, eps_x, budget, mu3_mode):
    """vm -> composable rate closure for a fixed channel and block size."""
    eta = distance_to_eta(distance_km)

    def fn(vm, two_n):
        params = ComposableParams(
            two_n=two_n,
            lam=lam,
            d=d,
            beta=beta,
            vm=vm,
            ch=ChannelParams.symmetric(eta, eps_x),
        )
        return composable_rate(params, budget, mu3_mode).rate_bits

    return fn


def rate_vs_block_size(
    distance_km,
    two_n_values,
    budget: EpsilonBudget,
    lam=0.5,
    d=5,
    beta=0.95,
    eps_x=0.01,
    mu3_mode="covariance",
    vm_bracket=(0.1, 1e3),
) -> SweepResult:
    """Composable rate vs exchanged-pulse count, vm optimized per point."""
    if list(two_n_values) != sorted(two_n_values):
        raise DomainError("two_n values must be increasing")
    fn = composable_rate_fn(distance_km, lam, d, beta, eps_x, budget, mu3_mode)
    rates, vms = [], []
    for two_n in two_n_values:
        opt = optimal_modulation_variance(lambda v: fn(v, two_n), bracket=vm_bracket)
        rates.append(opt.rate)
        vms.append(opt.vm)
    return SweepResult(
        axis_name="two_n",
        axis=list(two_n_values),
        rates=rates,
        optimal_vm=vms,
        metadata={
            "distance_km": distance_km,
            "lambda": lam,
            "d": d,
            "beta": beta,
            "eps_x": eps_x,
            "mu3_mode": mu3_mode,
        },
    )


def max_distance(
    two_n,
    budget: EpsilonBudget,
    lam=0.5,
    d=5,
    beta=0.95,
    eps_x=0.01,
    mu3_mode="covariance",
    tolerance_km=0.1,
    km_hi=100.0,
    vm_bracket=(0.1, 1e3),
):
    """Largest distance with a positive vm-optimized composable rate.

    Returns (km, found); found is False when the rate is non-positive already
    at zero distance.
    """

    def best(km):
        fn = composable_rate_fn(km, lam, d, beta, eps_x, budget, mu3_mode)
        return optimal_modulation_variance(
            lambda v: fn(v, two_n), bracket=vm_bracket
        ).rate

    if best(0.0) <= 0.0:
        return 0.0, False
    lo, hi = 0.0, km_hi
    if best(hi) > 0.0:
        return hi, True
    while hi - lo > tolerance_km:
        mid = 0.5 * (lo + hi)
        if best(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), True


def asymptotic_sweep_pair(distances, vm=20.0, beta=0.95, eps=0.01, optimize_vm=False):
    """(single-quadrature, baseline) distance sweeps with shared settings."""
    ucv = sweep_distance(
        key_rate_ucvqkd_symmetric,
        distances,
        vm=vm,
        beta=beta,
        eps=eps,
        optimize_vm=optimize_vm,
    )
    gg02 = sweep_distance(
        key_rate_gg02, distances, vm=vm, beta=beta, eps=eps, optimize_vm=optimize_vm
    )
    return ucv, gg02
