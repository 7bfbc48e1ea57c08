"""Asymptotic reverse-reconciliation secret key rates.

Covers the single-quadrature protocol, its symmetric-channel variant, and the
two-quadrature coherent-state baseline used for comparison plots. Rates are in
bits per pulse and may be negative; "secure" means a strictly positive rate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import (
    ChannelParams,
    DomainError,
    TwoModeCovariance,
    build_ucvqkd_covariance,
    condition_on_homodyne_x,
    entropy_g,
    entropy_g_clamped,
    is_physical_ucvqkd,
    symplectic_eigenvalues,
)


@dataclass(frozen=True)
class AsymptoticRateResult:
    mutual_information_bits: float
    holevo_bits: float
    key_rate_bits: float
    symplectic: tuple  # (nu1, nu2, nu3)


def mutual_information_x(vm, eta_x, eps_x):
    """Shannon mutual information of the modulated quadrature, bits per pulse."""
    return 0.5 * np.log2(1.0 + eta_x * vm / (1.0 + eta_x * eps_x))


def _holevo_from_cov(cov: TwoModeCovariance, clamp=False):
    g = entropy_g_clamped if clamp else entropy_g
    nu1, nu2 = symplectic_eigenvalues(cov)
    cond = condition_on_homodyne_x(cov)
    det_cond = np.linalg.det(cond)
    if det_cond <= 0.0 and not clamp:
        raise DomainError(f"conditional matrix has det {det_cond} <= 0")
    nu3 = np.sqrt(max(det_cond, 0.0))
    holevo = g((nu1 - 1.0) / 2.0) + g((nu2 - 1.0) / 2.0) - g((nu3 - 1.0) / 2.0)
    return holevo, (nu1, nu2, nu3)


def holevo_rr(cov: TwoModeCovariance):
    """Eve's Holevo bound on Bob's homodyne-x outcomes, bits per pulse."""
    holevo, _ = _holevo_from_cov(cov)
    return holevo


def key_rate_ucvqkd(vm, beta, ch: ChannelParams) -> AsymptoticRateResult:
    """Asymptotic reverse-reconciliation rate K = beta*I - chi_E."""
    if not 0.0 < beta <= 1.0:
        raise DomainError(f"beta must be in (0, 1], got {beta}")
    if not is_physical_ucvqkd(vm, ch.eta_x, ch.eps_x, ch.eta_p, ch.eps_p):
        raise DomainError(
            "unphysical channel: unmodulated-quadrature constraint violated"
        )
    cov = build_ucvqkd_covariance(vm, ch)
    mi = mutual_information_x(vm, ch.eta_x, ch.eps_x)
    holevo, nus = _holevo_from_cov(cov)
    return AsymptoticRateResult(
        mutual_information_bits=mi,
        holevo_bits=holevo,
        key_rate_bits=beta * mi - holevo,
        symplectic=nus,
    )


def key_rate_ucvqkd_unchecked(vm, beta, ch: ChannelParams) -> float:
    """Rate formula evaluated without the physicality gate.

    Sub-vacuum eigenvalues contribute zero entropy and a negative discriminant
    collapses to a degenerate spectrum, so the surface stays finite on
    unphysical parameter points. Region scans use this for the unconstrained
    extremum; everything else should go through key_rate_ucvqkd.
    """
    cov = build_ucvqkd_covariance(vm, ch)
    delta = (
        np.linalg.det(cov.gamma_a)
        + np.linalg.det(cov.gamma_b)
        + 2.0 * np.linalg.det(cov.sigma_ab)
    )
    det_g = np.linalg.det(cov.mat)
    disc = max(delta * delta - 4.0 * det_g, 0.0)
    nu1 = np.sqrt(max((delta + np.sqrt(disc)) / 2.0, 0.0))
    nu2 = np.sqrt(max((delta - np.sqrt(disc)) / 2.0, 0.0))
    nu3 = np.sqrt(max(np.linalg.det(condition_on_homodyne_x(cov)), 0.0))
    holevo = (
        entropy_g_clamped((nu1 - 1.0) / 2.0)
        + entropy_g_clamped((nu2 - 1.0) / 2.0)
        - entropy_g_clamped((nu3 - 1.0) / 2.0)
    )
    return beta * mutual_information_x(vm, ch.eta_x, ch.eps_x) - holevo


def key_rate_ucvqkd_symmetric(vm, beta, eta, eps):
    """Symmetric-channel rate with the (vm, beta, eta, eps) sweep signature."""
    return key_rate_ucvqkd(vm, beta, ChannelParams.symmetric(eta, eps)).key_rate_bits


def build_gg02_covariance(vm, eta, eps) -> TwoModeCovariance:
    """Covariance of the two-quadrature coherent-state baseline protocol."""
    if vm < 0.0:
        raise DomainError(f"modulation variance must be >= 0, got {vm}")
    v = vm + 1.0
    c = np.sqrt(eta * (v * v - 1.0))
    vb = 1.0 + eta * (vm + eps)
    m = np.array(
        [
            [v, 0.0, c, 0.0],
            [0.0, v, 0.0, -c],
            [c, 0.0, vb, 0.0],
            [0.0, -c, 0.0, vb],
        ]
    )
    return TwoModeCovariance(m)


def key_rate_gg02(vm, beta, eta, eps):
    """Homodyne reverse-reconciliation rate of the symmetric baseline, bits/pulse."""
    if not 0.0 < beta <= 1.0:
        raise DomainError(f"beta must be in (0, 1], got {beta}")
    v = vm + 1.0
    chi = (1.0 - eta) / eta + eps
    mi = 0.5 * np.log2((v + chi) / (1.0 + chi))
    cov = build_gg02_covariance(vm, eta, eps)
    holevo, _ = _holevo_from_cov(cov)
    return beta * mi - holevo


def max_tolerable_excess_noise(loss_db, vm, beta, rate_fn, tol=1e-6):
    """Largest symmetric-channel excess noise with a non-negative rate.

    rate_fn(vm, beta, eta, eps) must be monotone decreasing in eps. Returns
    (eps_max, found); found is False when the rate is already negative at
    eps = 0, in which case eps_max = 0.
    """
    eta = 10.0 ** (-loss_db / 10.0)
    if rate_fn(vm, beta, eta, 0.0) < 0.0:
        return 0.0, False
    lo, hi = 0.0, 2.0
    while rate_fn(vm, beta, eta, hi) >= 0.0:
        hi *= 2.0
        if hi > 1e6:
            return hi, True
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if rate_fn(vm, beta, eta, mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), True
