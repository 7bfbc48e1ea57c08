"""Gaussian-state linear algebra for the single-quadrature-modulated protocol.

All variances are in shot-noise units (vacuum variance = 1) and the mode
ordering is (x_A, p_A, x_B, p_B). Entropies are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SIGMA_Z = np.diag([1.0, -1.0])

# Symplectic form for two modes, block-diagonal in (x, p) pairs.
OMEGA = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)

SYMMETRY_TOL = 1e-12
PHYSICALITY_TOL = 1e-9


class DomainError(ValueError):
    """Raised when inputs are outside the physically meaningful domain."""


@dataclass(frozen=True)
class ChannelParams:
    """Phase-sensitive channel: transmittance and excess noise per quadrature."""

    eta_x: float
    eps_x: float
    eta_p: float
    eps_p: float

    def __post_init__(self):
        for name, eta in (("eta_x", self.eta_x), ("eta_p", self.eta_p)):
            if not 0.0 < eta <= 1.0:
                raise DomainError(f"{name} must be in (0, 1], got {eta}")
        for name, eps in (("eps_x", self.eps_x), ("eps_p", self.eps_p)):
            if eps < 0.0:
                raise DomainError(f"{name} must be >= 0, got {eps}")

    @classmethod
    def symmetric(cls, eta, eps):
        return cls(eta_x=eta, eps_x=eps, eta_p=eta, eps_p=eps)

    @property
    def chi_x(self):
        """Noise referred to the channel input, x quadrature."""
        return (1.0 - self.eta_x) / self.eta_x + self.eps_x

    @property
    def chi_p(self):
        return (1.0 - self.eta_p) / self.eta_p + self.eps_p

    @property
    def kappa(self):
        """1 / (1 + eta_x * eps_x), the x-quadrature purity factor."""
        return 1.0 / (1.0 + self.eta_x * self.eps_x)


@dataclass(frozen=True)
class TwoModeCovariance:
    """4x4 real symmetric covariance matrix of modes A and B."""

    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=float)
        if m.shape != (4, 4):
            raise DomainError(f"covariance matrix must be 4x4, got {m.shape}")
        if not np.allclose(m, m.T, atol=SYMMETRY_TOL, rtol=0.0):
            raise DomainError("covariance matrix must be symmetric")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "mat", m)

    @property
    def gamma_a(self):
        return self.mat[:2, :2]

    @property
    def gamma_b(self):
        return self.mat[2:, 2:]

    @property
    def sigma_ab(self):
        return self.mat[:2, 2:]


def build_ucvqkd_covariance(vm, ch: ChannelParams) -> TwoModeCovariance:
    """Covariance of modes (A, B) after the channel, x modulated with variance vm.

    The p-quadrature correlation carries a minus sign (the sigma_z flip of the
    two-mode squeezed source survives the channel).
    """
    if vm < 0.0:
        raise DomainError(f"modulation variance must be >= 0, got {vm}")
    a = np.sqrt(vm + 1.0)
    cx = np.sqrt(ch.eta_x * vm * a)
    cp = np.sqrt(ch.eta_p * vm / a)
    m = np.array(
        [
            [a, 0.0, cx, 0.0],
            [0.0, a, 0.0, -cp],
            [cx, 0.0, 1.0 + ch.eta_x * (vm + ch.eps_x), 0.0],
            [0.0, -cp, 0.0, 1.0 + ch.eta_p * ch.eps_p],
        ]
    )
    return TwoModeCovariance(m)


def build_symmetric_covariance(vm, eta, eps) -> TwoModeCovariance:
    """Same construction with both quadratures sharing one (eta, eps) pair."""
    return build_ucvqkd_covariance(vm, ChannelParams.symmetric(eta, eps))


def symplectic_eigenvalues(cov: TwoModeCovariance):
    """Symplectic spectrum (nu1 >= nu2) from the two-mode quadratic.

    The squared eigenvalues solve z^2 - Delta z + det(Gamma) = 0 with
    Delta = det(gamma_A) + det(gamma_B) + 2 det(sigma_AB).
    """
    delta = (
        np.linalg.det(cov.gamma_a)
        + np.linalg.det(cov.gamma_b)
        + 2.0 * np.linalg.det(cov.sigma_ab)
    )
    det_g = np.linalg.det(cov.mat)
    m = cov.mat
    off = max(abs(m[0, 1]), abs(m[0, 3]), abs(m[1, 2]), abs(m[2, 3]))
    if off < SYMMETRY_TOL and abs(m[0, 0] - m[1, 1]) < SYMMETRY_TOL:
        # blocks are diagonal with gamma_A = a*I, so the discriminant
        # factors exactly; the naive delta^2 - 4 det form cancels
        # catastrophically for near-pure states
        a, bx, bp = m[0, 0], m[2, 2], m[3, 3]
        cx, cp = m[0, 2], -m[1, 3]
        disc = (a * a - bx * bp) ** 2 + 4.0 * (a * cx - bx * cp) * (bp * cx - a * cp)
    else:
        disc = delta * delta - 4.0 * det_g
    if disc < -PHYSICALITY_TOL:
        raise DomainError(f"negative discriminant {disc}: non-physical covariance")
    disc = max(disc, 0.0)
    z1 = (delta + np.sqrt(disc)) / 2.0
    # the smaller root via the product identity, stable when disc ~ delta^2
    z2 = det_g / z1 if z1 > 0.0 else (delta - np.sqrt(disc)) / 2.0
    if z2 < -PHYSICALITY_TOL:
        raise DomainError(f"negative squared eigenvalue {z2}: non-physical covariance")
    nu1 = np.sqrt(max(z1, 0.0))
    nu2 = np.sqrt(max(z2, 0.0))
    return nu1, nu2


def entropy_g(x):
    """Bosonic entropy G(x) = (x+1) log2(x+1) - x log2 x, in bits; G(0) = 0."""
    if x < -PHYSICALITY_TOL:
        raise DomainError(f"entropy argument must be >= 0, got {x}")
    if x <= 0.0:
        return 0.0
    return (x + 1.0) * np.log2(x + 1.0) - x * np.log2(x)


def entropy_g_clamped(x):
    """entropy_g extended by G(x) = 0 for x <= 0.

    Used only when scanning deliberately unphysical parameter points, where
    sub-vacuum symplectic eigenvalues would otherwise abort the evaluation.
    """
    if x <= 0.0:
        return 0.0
    return (x + 1.0) * np.log2(x + 1.0) - x * np.log2(x)


def condition_on_homodyne_x(cov: TwoModeCovariance):
    """2x2 covariance of mode A conditioned on a homodyne x measurement of B.

    The projector X = diag(1, 0) has rank one, so the Moore-Penrose step
    reduces to a scalar division by the x variance of mode B.
    """
    vbx = cov.gamma_b[0, 0]
    if vbx <= 0.0:
        raise DomainError(f"mode-B x variance must be > 0, got {vbx}")
    sigma = cov.sigma_ab
    correction = np.outer(sigma[:, 0], sigma[:, 0]) / vbx
    return cov.gamma_a - correction


def is_physical_matrix(cov: TwoModeCovariance) -> bool:
    """Uncertainty-principle test: Gamma + i*Omega >= 0 up to tolerance."""
    herm = cov.mat.astype(complex) + 1j * OMEGA
    eigs = np.linalg.eigvalsh(herm)
    return bool(eigs.min() >= -PHYSICALITY_TOL)


def is_physical_ucvqkd(vm, eta_x, eps_x, eta_p, eps_p) -> bool:
    """Closed-form physicality constraint on the unmodulated-quadrature channel.

    (kappa*sqrt(eta_x) - sqrt(eta_p))^2 <= (1 - kappa*eta_x)(1 + eta_p*eps_p - kappa)
    with kappa = 1/(1 + eta_x*eps_x). Boundary cases count as physical.
    """
    kappa = 1.0 / (1.0 + eta_x * eps_x)
    lhs = (kappa * np.sqrt(eta_x) - np.sqrt(eta_p)) ** 2
    rhs = (1.0 - kappa * eta_x) * (1.0 + eta_p * eps_p - kappa)
    return bool(lhs <= rhs + PHYSICALITY_TOL)
