"""End-to-end acceptance checks.

Each test prints exactly one PASS/FAIL line (visible even under captured
output) and enforces its runtime budget.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from ucvqkd.asymptotic import (
    key_rate_gg02,
    key_rate_ucvqkd,
    key_rate_ucvqkd_symmetric,
    max_tolerable_excess_noise,
)
from ucvqkd.composable import (
    ComposableParams,
    EpsilonBudget,
    epsilon_budget,
    holevo_f,
    mutual_information_ec,
    simulate_pe_statistics,
)
from ucvqkd.gaussian import (
    ChannelParams,
    build_symmetric_covariance,
    build_ucvqkd_covariance,
    is_physical_matrix,
    is_physical_ucvqkd,
    symplectic_eigenvalues,
)
from ucvqkd.optimize import (
    composable_rate_fn,
    distance_to_eta,
    optimal_modulation_variance,
    rate_vs_block_size,
)
from ucvqkd.region import RegionClass, RegionContext, find_extremal_rates, scan_region

ASYMMETRIC_PRESETS = {
    "fig2": (0.4, 0.05),
    "fig6": (0.01, 1.0),
    "fig7": (1.0, 0.01),
}


def _report(capsys, label, ok, detail=""):
    with capsys.disabled():
        status = "PASS" if ok else "FAIL"
        print(f"[{status}] {label}" + (f" ({detail})" if detail else ""))
    assert ok, f"{label}: {detail}"


def test_criterion_01_purity(capsys):
    t0 = time.time()
    worst = 0.0
    for v in (1.0, 2.0, 5.0, 10.0, 100.0):
        nu1, nu2 = symplectic_eigenvalues(build_symmetric_covariance(v - 1.0, 1.0, 0.0))
        worst = max(worst, abs(nu1 - 1.0), abs(nu2 - 1.0))
    elapsed = time.time() - t0
    _report(
        capsys,
        "criterion 1: lossless source state is pure",
        worst < 1e-9 and elapsed < 1.0,
        f"max |nu-1| = {worst:.2e}, {elapsed:.2f}s",
    )


def _boundary_margin(eta_x, eps_x, eta_p, eps_p):
    kappa = 1.0 / (1.0 + eta_x * eps_x)
    lhs = (kappa * math.sqrt(eta_x) - math.sqrt(eta_p)) ** 2
    rhs = (1.0 - kappa * eta_x) * (1.0 + eta_p * eps_p - kappa)
    return rhs - lhs


def test_criterion_02_physicality_oracle_equivalence(capsys):
    t0 = time.time()
    disagreements = 0
    checked = 0
    for eta_x, eps_x in ASYMMETRIC_PRESETS.values():
        for eps_p in np.linspace(0.0, 1.0, 200):
            for eta_p in np.linspace(0.0, 1.0, 200):
                if eta_p <= 0.0:
                    continue
                checked += 1
                closed = is_physical_ucvqkd(100.0, eta_x, eps_x, eta_p, eps_p)
                ch = ChannelParams(eta_x=eta_x, eps_x=eps_x, eta_p=eta_p, eps_p=eps_p)
                full = is_physical_matrix(build_ucvqkd_covariance(100.0, ch))
                if closed != full and abs(
                    _boundary_margin(eta_x, eps_x, eta_p, eps_p)
                ) > 1e-6:
                    disagreements += 1
    elapsed = time.time() - t0
    _report(
        capsys,
        "criterion 2: closed-form physicality matches the matrix test",
        disagreements == 0 and elapsed < 30.0,
        f"{disagreements} disagreements over {checked} cells, {elapsed:.1f}s",
    )


def test_criterion_03_lossless_identity(capsys):
    worst = 0.0
    for vm in (1.0, 3.0, 20.0, 100.0):
        res = key_rate_ucvqkd(vm, 1.0, ChannelParams.symmetric(1.0, 0.0))
        worst = max(worst, abs(res.key_rate_bits - 0.5 * math.log2(1.0 + vm)))
    _report(
        capsys,
        "criterion 3: lossless noiseless rate is (1/2) log2(1 + vm)",
        worst < 1e-9,
        f"max deviation {worst:.2e}",
    )


def _neighbors(grid, cell):
    ix = int(np.argmin(np.abs(grid.eta_p_axis - cell.eta_p)))
    iy = int(np.argmin(np.abs(grid.eps_p_axis - cell.eps_p)))
    nx = len(grid.eta_p_axis)
    out = []
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            jx, jy = ix + dx, iy + dy
            if 0 <= jx < nx and 0 <= jy < len(grid.eps_p_axis):
                out.append(grid.cells[jy * nx + jx])
    return out


def test_criterion_04_region_structure(capsys):
    t0 = time.time()
    ctx = RegionContext(vm=100.0, beta=1.0, eta_x=0.4, eps_x=0.05)
    grid = scan_region(ctx, nx=200, ny=200)
    present = {c.cls for c in grid.cells}
    ext = find_extremal_rates(grid)
    all_classes = present == {
        RegionClass.UNPHYSICAL,
        RegionClass.INSECURE,
        RegionClass.SECURE,
    }
    max_unphysical = ext.unconstrained_max.cls is RegionClass.UNPHYSICAL
    near_boundary = any(
        c.cls is RegionClass.UNPHYSICAL for c in _neighbors(grid, ext.physical_max)
    )
    elapsed = time.time() - t0
    _report(
        capsys,
        "criterion 4: region scan shows all classes, with the secure"
        " optimum pressed against the physicality boundary",
        all_classes and max_unphysical and near_boundary and elapsed < 60.0,
        f"classes={len(present)}, unconstrained max {ext.unconstrained_max.cls.value},"
        f" {elapsed:.1f}s",
    )


def test_criterion_05_loss_sweep_ordering(capsys):
    t0 = time.time()
    losses = np.linspace(0.01, 25.0, 101)
    single, double = [], []
    for loss in losses:
        eta = 10.0 ** (-loss / 10.0)
        single.append(key_rate_ucvqkd_symmetric(20.0, 0.95, eta, 0.01))
        double.append(key_rate_gg02(20.0, 0.95, eta, 0.01))
    single, double = np.array(single), np.array(double)
    dominated = bool(np.all(double >= single - 1e-12))

    def monotone_while_positive(rates):
        pos = rates > 0
        return bool(np.all(np.diff(rates[pos]) < 0))

    monotone = monotone_while_positive(single) and monotone_while_positive(double)
    # negative tails mean both positive-rate cutoffs fall inside the sweep
    cutoffs_finite = single[-1] < 0 and double[-1] < 0
    elapsed = time.time() - t0
    _report(
        capsys,
        "criterion 5: two-quadrature baseline dominates, both rates decay"
        " to a finite cutoff",
        dominated and monotone and cutoffs_finite and elapsed < 10.0,
        f"{elapsed:.1f}s",
    )


def test_criterion_06_optimized_vm_improvement(capsys):
    distances = np.linspace(1.0, 25.0, 25)
    improved = 0
    ok = True
    for km in distances:
        eta = distance_to_eta(km)
        fixed = key_rate_ucvqkd_symmetric(20.0, 0.95, eta, 0.01)
        opt = optimal_modulation_variance(
            lambda vm: key_rate_ucvqkd_symmetric(vm, 0.95, eta, 0.01)
        )
        if opt.rate < fixed - 1e-12:
            ok = False
        if opt.rate > fixed + 1e-9:
            improved += 1
    frac = improved / len(distances)
    _report(
        capsys,
        "criterion 6: per-distance vm optimization never loses and"
        " strictly improves at >= 80% of points",
        ok and frac >= 0.8,
        f"strict improvement at {frac:.0%}",
    )


def _positive_rate_threshold(km, budget, lo=8.0, hi=15.0, tol=0.02):
    fn = composable_rate_fn(km, 0.5, 5, 0.95, 0.01, budget, "covariance")

    def best(two_n):
        return optimal_modulation_variance(lambda v: fn(v, two_n)).rate

    if best(10.0**lo) > 0 or best(10.0**hi) <= 0:
        return None
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if best(10.0**mid) > 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2.0


def test_criterion_07_block_size_reproduction(capsys):
    t0 = time.time()
    budget = EpsilonBudget.default()
    fn15 = composable_rate_fn(15.0, 0.5, 5, 0.95, 0.01, budget, "covariance")
    at_1e9 = optimal_modulation_variance(lambda v: fn15(v, 1e9)).rate
    t15 = _positive_rate_threshold(15.0, budget)
    thresholds = [_positive_rate_threshold(km, budget) for km in (10, 12, 13, 15)]
    elapsed = time.time() - t0
    ok = (
        at_1e9 <= 0.0
        and t15 is not None
        and abs(t15 - 12.0) <= 1.0
        and all(t is not None for t in thresholds)
        and all(a < b for a, b in zip(thresholds, thresholds[1:]))
        and elapsed < 300.0
    )
    detail = ", ".join(
        f"{km} km: 1e{t:.2f}" for km, t in zip((10, 12, 13, 15), thresholds)
    )
    _report(
        capsys,
        "criterion 7: finite-size thresholds sit near 1e12 pulses and grow"
        " with distance",
        ok,
        f"{detail}, {elapsed:.1f}s",
    )


def test_criterion_08_composable_asymptotic_convergence(capsys):
    budget = EpsilonBudget.default()
    res = rate_vs_block_size(10.0, [1e14], budget)
    vm, k_comp = res.optimal_vm[0], res.rates[0]
    eta = distance_to_eta(10.0)
    s = mutual_information_ec(vm, eta, 0.01)
    a = math.sqrt(vm + 1.0)
    b = 1.0 + eta * (vm + 0.01)
    c = math.sqrt(eta * vm * a)
    limit = (1.0 - budget.eps_rob) * (0.95 * s - holevo_f(a, b, c))
    gap = abs(k_comp - limit)
    k_asym = key_rate_ucvqkd_symmetric(vm, 0.95, eta, 0.01)
    below = all(
        rate_vs_block_size(10.0, [two_n], budget).rates[0] < k_asym
        for two_n in (1e9, 1e11, 1e13, 1e14)
    )
    _report(
        capsys,
        "criterion 8: finite-size rate converges to its asymptote from below",
        gap < 1e-3 and below,
        f"gap {gap:.2e} bits/pulse",
    )


def test_criterion_09_epsilon_budget(capsys):
    default = EpsilonBudget.default()
    loose = EpsilonBudget(
        eps=1e-20,
        eps_sm=1e-21,
        eps_bar=1e-21,
        eps_pe=1e-20,
        eps_cor=1e-41,
        eps_ent=1e-41,
        eps_rob=1e-2,
    )
    ok = epsilon_budget(default).passes and not epsilon_budget(loose).passes
    _report(
        capsys,
        "criterion 9: security-parameter composition accepts the default"
        " budget and rejects a loosened one",
        ok,
    )


def test_criterion_10_monte_carlo_pe(capsys):
    t0 = time.time()
    params = ComposableParams(
        two_n=2e5,
        lam=0.5,
        d=5,
        beta=0.95,
        vm=20.0,
        ch=ChannelParams.symmetric(distance_to_eta(10.0), 0.01),
    )
    rep1 = simulate_pe_statistics(params, 1e-41, 1000, seed=7)
    rep2 = simulate_pe_statistics(params, 1e-41, 1000, seed=7)
    elapsed = time.time() - t0
    _report(
        capsys,
        "criterion 10: honest-run abort fraction stays within the"
        " robustness claim, deterministically",
        rep1.abort_fraction <= 3e-2 and rep1 == rep2 and elapsed < 120.0,
        f"abort fraction {rep1.abort_fraction}, {elapsed:.1f}s",
    )


def test_criterion_11_asymmetric_windows(capsys):
    maxima = {}
    for name, (eta_x, eps_x) in ASYMMETRIC_PRESETS.items():
        ctx = RegionContext(vm=100.0, beta=1.0, eta_x=eta_x, eps_x=eps_x)
        grid = scan_region(ctx, nx=100, ny=100)
        secure = grid.secure_cells()
        maxima[name] = max((c.rate for c in secure), default=None)
    ok = (
        maxima["fig6"] is not None
        and maxima["fig2"] is not None
        and maxima["fig7"] is not None
        and maxima["fig7"] > maxima["fig2"]
        and maxima["fig7"] > maxima["fig6"]
    )
    _report(
        capsys,
        "criterion 11: extreme channel asymmetries keep a secure window,"
        " best when x passes untouched",
        ok,
        ", ".join(f"{k}: {v:.3f}" for k, v in maxima.items() if v is not None),
    )


def test_criterion_12_reproduce_determinism(capsys, tmp_path):
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        proc = subprocess.run(
            [sys.executable, "-m", "ucvqkd.cli", "reproduce", "fig5",
             "--seed", "7", "--out", str(out)],
            capture_output=True,
        )
        assert proc.returncode == 0, proc.stderr.decode()
        outs.append((out / "fig5.csv").read_bytes())
    _report(
        capsys,
        "criterion 12: consecutive seeded reruns are byte-identical",
        outs[0] == outs[1],
        f"{len(outs[0])} bytes",
    )
