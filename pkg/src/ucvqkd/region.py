"""Classification of the unmodulated-quadrature parameter plane.

Each (eta_p, eps_p) point is Unphysical when the closed-form constraint is
violated, Secure when physical with a positive key rate, and Insecure
otherwise. Rates are also evaluated on unphysical cells (with the clamped
entropy extension) so the unconstrained extremum can be located.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .asymptotic import key_rate_ucvqkd_unchecked
from .gaussian import ChannelParams, DomainError, is_physical_ucvqkd


class RegionClass(str, Enum):
    UNPHYSICAL = "Unphysical"
    INSECURE = "Insecure"
    SECURE = "Secure"


@dataclass(frozen=True)
class RegionContext:
    """Fixed modulated-quadrature parameters for a region scan."""

    vm: float
    beta: float
    eta_x: float
    eps_x: float


@dataclass(frozen=True)
class RegionCell:
    eta_p: float
    eps_p: float
    cls: RegionClass
    rate: float


@dataclass(frozen=True)
class RegionGrid:
    eta_p_axis: np.ndarray
    eps_p_axis: np.ndarray
    cells: list  # row-major over (eps_p, eta_p)
    ctx: RegionContext

    def secure_cells(self):
        return [c for c in self.cells if c.cls is RegionClass.SECURE]


def classify_point(eta_p, eps_p, ctx: RegionContext) -> RegionCell:
    """Classify one point of the (eta_p, eps_p) plane.

    eta_p = 0 is outside the channel-parameter domain and counts as
    unphysical; its rate is reported as nan.
    """
    if eta_p <= 0.0 or eta_p > 1.0 or eps_p < 0.0:
        return RegionCell(eta_p, eps_p, RegionClass.UNPHYSICAL, float("nan"))
    physical = is_physical_ucvqkd(ctx.vm, ctx.eta_x, ctx.eps_x, eta_p, eps_p)
    ch = ChannelParams(eta_x=ctx.eta_x, eps_x=ctx.eps_x, eta_p=eta_p, eps_p=eps_p)
    rate = key_rate_ucvqkd_unchecked(ctx.vm, ctx.beta, ch)
    if not physical:
        cls = RegionClass.UNPHYSICAL
    elif rate > 0.0:
        cls = RegionClass.SECURE
    else:
        cls = RegionClass.INSECURE
    return RegionCell(eta_p, eps_p, cls, rate)


def scan_region(
    ctx: RegionContext,
    eta_p_range=(0.0, 1.0),
    eps_p_range=(0.0, 1.0),
    nx=200,
    ny=200,
) -> RegionGrid:
    """Row-major scan: eps_p is the slow axis, eta_p the fast one."""
    if nx < 2 or ny < 2:
        raise DomainError("grid needs at least 2 points per axis")
    eta_axis = np.linspace(eta_p_range[0], eta_p_range[1], nx)
    eps_axis = np.linspace(eps_p_range[0], eps_p_range[1], ny)
    cells = [
        classify_point(eta, eps, ctx) for eps in eps_axis for eta in eta_axis
    ]
    return RegionGrid(eta_p_axis=eta_axis, eps_p_axis=eps_axis, cells=cells, ctx=ctx)


@dataclass(frozen=True)
class ExtremalRates:
    unconstrained_max: RegionCell
    physical_max: RegionCell | None  # None when no secure window exists
    physical_min: RegionCell | None


def find_extremal_rates(grid: RegionGrid) -> ExtremalRates:
    """Rate extrema over the grid, with and without the physicality gate."""
    rated = [c for c in grid.cells if np.isfinite(c.rate)]
    if not rated:
        raise DomainError("grid contains no rated cells")
    unconstrained = max(rated, key=lambda c: c.rate)
    secure = grid.secure_cells()
    if not secure:
        return ExtremalRates(unconstrained, None, None)
    return ExtremalRates(
        unconstrained_max=unconstrained,
        physical_max=max(secure, key=lambda c: c.rate),
        physical_min=min(secure, key=lambda c: c.rate),
    )
