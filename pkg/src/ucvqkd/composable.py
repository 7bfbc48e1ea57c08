"""Composable finite-size key rate against collective attacks.

Conventions fixed here once and recorded in all output metadata:
  - unsubscripted logarithms inside statistical correction terms are natural
    logs; entropy-like quantities are base 2 (bits),
  - the threshold Holevo function F supports three evaluation modes.
    "covariance" (default) rebuilds the worst-case covariance matrix
    consistent with the thresholds under a symmetric channel and takes its
    Holevo bound; it converges to the asymptotic bound as n grows and never
    flatters the eavesdropper. "conditional" and "literal" are closed-form
    variants of the same construction, kept for comparison; they come out
    over-pessimistic respectively over-optimistic for this protocol,
  - rates are per correctly-measured pulse (2*lambda*n basis) unless rescaled
    by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gaussian import (
    ChannelParams,
    DomainError,
    build_ucvqkd_covariance,
    entropy_g,
)

MU3_MODES = ("covariance", "conditional", "literal")


@dataclass(frozen=True)
class ComposableParams:
    """Protocol-run parameters for one finite-size evaluation."""

    two_n: float  # total exchanged pulses (2n); float to allow 1e12-scale runs
    lam: float  # probability of Bob measuring the modulated quadrature
    d: int  # discretization bits per measurement
    beta: float  # reconciliation efficiency
    vm: float  # modulation variance
    ch: ChannelParams
    n_pe: int = 0  # bits disclosed for parameter estimation (bookkeeping only)

    def __post_init__(self):
        if self.two_n < 2.0:
            raise DomainError(f"two_n must be at least 2, got {self.two_n}")
        if not 0.0 < self.lam <= 1.0:
            raise DomainError(f"lambda must be in (0, 1], got {self.lam}")
        if self.d < 1:
            raise DomainError(f"d must be >= 1, got {self.d}")
        if not 0.0 < self.beta <= 1.0:
            raise DomainError(f"beta must be in (0, 1], got {self.beta}")
        if self.vm < 0.0:
            raise DomainError(f"vm must be >= 0, got {self.vm}")
        if self.lam * self.n < 1.0:
            raise DomainError("lambda * n must be >= 1")
        if self.n_pe > self.m:
            raise DomainError("n_pe cannot exceed the string length m")

    @property
    def n(self):
        return self.two_n / 2.0

    @property
    def correct_pulses(self):
        """Expected number of correctly measured pulses, 2*lambda*n."""
        return self.lam * self.two_n

    @property
    def m(self):
        """Length of the discretized string, d * 2*lambda*n."""
        return self.d * self.correct_pulses


@dataclass(frozen=True)
class EpsilonBudget:
    eps: float
    eps_sm: float
    eps_bar: float
    eps_pe: float
    eps_cor: float
    eps_ent: float
    eps_rob: float = 1e-2

    def __post_init__(self):
        for name in ("eps", "eps_sm", "eps_bar", "eps_pe", "eps_cor", "eps_ent"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise DomainError(f"{name} must be in (0, 1), got {v}")
        if not 0.0 <= self.eps_rob <= 1e-2:
            raise DomainError(f"eps_rob must be in [0, 1e-2], got {self.eps_rob}")

    @classmethod
    def default(cls):
        """The published suboptimal-but-simple choice compatible with eps=1e-20."""
        return cls(
            eps=1e-20,
            eps_sm=1e-21,
            eps_bar=1e-21,
            eps_pe=1e-41,
            eps_cor=1e-41,
            eps_ent=1e-41,
        )


@dataclass(frozen=True)
class PeThresholds:
    omega_a: float
    omega_b: float
    omega_c: float
    omega_a_max: float
    omega_b_max: float
    omega_c_min: float
    delta_a: float
    delta_b: float
    delta_c: float

    def accepts(self) -> bool:
        return (
            self.omega_a <= self.omega_a_max
            and self.omega_b <= self.omega_b_max
            and self.omega_c >= self.omega_c_min
        )


def snr_x(vm, eta_x, eps_x):
    """Signal-to-noise ratio of the error-correction channel model."""
    return eta_x * vm / (2.0 + eta_x * eps_x)


def mutual_information_ec(vm, eta_x, eps_x):
    """Mutual information used by the error-correction model, bits per pulse.

    Note the denominator 2 + eta*eps differs from the asymptotic module's
    1 + eta*eps; both forms appear in the source material and are kept
    deliberately distinct.
    """
    return 0.5 * np.log2(1.0 + snr_x(vm, eta_x, eps_x))


def leakage_ec(params: ComposableParams, h_mle=None):
    """Bits disclosed during error correction under the efficiency-beta model.

    leak_EC = 2*lambda*n * (2*H_MLE - beta*S). When no empirical entropy is
    supplied the per-symbol entropy defaults to the full d bits.
    """
    if h_mle is None:
        h_mle = float(params.d)
    s = mutual_information_ec(params.vm, params.ch.eta_x, params.ch.eps_x)
    return params.correct_pulses * (2.0 * h_mle - params.beta * s)


def pe_estimates(x_norm2, y_norm2, xy_inner, lam, n, eps_pe):
    """Conservative covariance estimates from the disclosed statistics."""
    if x_norm2 < 0.0 or y_norm2 < 0.0:
        raise DomainError("squared norms must be >= 0")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    pulses = 2.0 * lam * n
    inflation = 1.0 + 2.0 * math.sqrt(math.log(36.0 / eps_pe) / n)
    omega_a = x_norm2 / pulses * inflation - 1.0
    omega_b = y_norm2 / pulses * inflation - 1.0
    omega_c = xy_inner / pulses - 5.0 * (x_norm2 + y_norm2) * math.sqrt(
        math.log(8.0 / eps_pe) / n**3
    )
    return omega_a, omega_b, omega_c


def pe_thresholds(vm, eta_x, eps_x, lam, n, eps_pe) -> PeThresholds:
    """Acceptance thresholds from the three-standard-deviation construction.

    The expected-value bounds on ||X||^2, ||Y||^2 and <X, Y> are inflated or
    deflated by 3/sqrt(2*lambda*n) and then pushed through the estimate
    formulas; the thresholds converge to the covariance-matrix entries as
    n grows. Also reports the implied gaps (delta_a, delta_b, delta_c) and the
    expected estimate values for an honest run.
    """
    pulses = 2.0 * lam * n
    delta = math.sqrt(pulses)
    if delta <= 3.0:
        raise DomainError(f"2*lambda*n = {pulses} too small for the 3-sigma bounds")
    a = math.sqrt(vm + 1.0)
    b = 1.0 + eta_x * (vm + eps_x)
    c = math.sqrt(eta_x * vm * a)

    x2_bound = delta * (delta + 3.0) * a
    y2_bound = delta * (delta + 3.0) * b
    xy_bound = delta * (delta - 3.0) * c

    inflation = 1.0 + 2.0 * math.sqrt(math.log(36.0 / eps_pe) / n)
    omega_a_max = x2_bound / pulses * inflation
    omega_b_max = y2_bound / pulses * inflation
    omega_c_min = xy_bound / pulses - 5.0 * (x2_bound + y2_bound) * math.sqrt(
        math.log(8.0 / eps_pe) / n**3
    )

    exp_a, exp_b, exp_c = pe_estimates(
        pulses * a, pulses * b, pulses * c, lam, n, eps_pe
    )
    return PeThresholds(
        omega_a=exp_a,
        omega_b=exp_b,
        omega_c=exp_c,
        omega_a_max=omega_a_max,
        omega_b_max=omega_b_max,
        omega_c_min=omega_c_min,
        delta_a=omega_a_max - a,
        delta_b=omega_b_max - b,
        delta_c=c - omega_c_min,
    )


def finite_size_corrections(lam, n, d, eps_sm, eps):
    """(Delta_AEP, Delta_ent) finite-size penalty terms, in bits.

    Delta_ent turns negative for large n; it is returned as computed.
    """
    pulses = 2.0 * lam * n
    delta_aep = (
        math.sqrt(pulses) * (d + 1.0) ** 2
        + math.sqrt(16.0 * pulses) * (d + 1.0) * math.log2(2.0 / eps_sm**2)
        + math.sqrt(4.0 * pulses) * math.log2(2.0 / (eps**2 * eps_sm))
        - 4.0 * eps_sm * d / eps
    )
    delta_ent = math.log2(1.0 / eps) - math.sqrt(
        4.0 * pulses * math.log(2.0 * pulses) ** 2 * math.log(2.0 / eps)
    )
    return delta_aep, delta_ent


def _holevo_f_covariance(omega_a, omega_b, omega_c):
    """F via the worst-case covariance matrix consistent with the thresholds.

    Interprets (Oa, Ob, Oc) as the modulated-quadrature covariance entries,
    solves for the implied modulation variance and symmetric channel, rebuilds
    the full two-mode matrix and returns its reverse-reconciliation Holevo
    bound. Inflated thresholds map to a lossier, noisier channel, so the
    result upper-bounds the true asymptotic value and converges to it.
    """
    from .gaussian import condition_on_homodyne_x, symplectic_eigenvalues

    if omega_a <= 1.0 or omega_b <= 1.0:
        raise DomainError("covariance-mode thresholds require Oa > 1, Ob > 1")
    if omega_c <= 0.0:
        # No certifiable correlation survives parameter estimation. In the
        # zero-correlation limit the reconstructed state is a product state
        # and the bound degenerates to the full entropy of the measured
        # mode, which always exceeds the reconciled information.
        return entropy_g((omega_b - 1.0) / 2.0)
    vm = omega_a**2 - 1.0
    eta = omega_c**2 / (vm * omega_a)
    if eta > 1.0 + 1e-12:
        raise DomainError(f"implied transmittance {eta} > 1: inconsistent thresholds")
    eps = (omega_b - 1.0) / eta - vm
    if eps < -1e-9:
        raise DomainError(f"implied excess noise {eps} < 0: inconsistent thresholds")
    cov = build_ucvqkd_covariance(
        vm, ChannelParams.symmetric(min(eta, 1.0), max(eps, 0.0))
    )
    nu1, nu2 = symplectic_eigenvalues(cov)
    nu3 = math.sqrt(np.linalg.det(condition_on_homodyne_x(cov)))
    return (
        entropy_g((nu1 - 1.0) / 2.0)
        + entropy_g((nu2 - 1.0) / 2.0)
        - entropy_g((nu3 - 1.0) / 2.0)
    )


def holevo_f(omega_a, omega_b, omega_c, mu3_mode="covariance"):
    """Holevo bound on Eve's information evaluated at the PE thresholds.

    Default mode "covariance" rebuilds the threshold-consistent state (see
    _holevo_f_covariance). The closed-form modes take mu1, mu2 as roots of
    z^2 - (Oa^2 + Ob^2 - 2 Oc^2) z + (Oa Ob - Oc^2)^2 in z = mu^2, with mu3
    either Oa - Oc^2/(1 + Ob) ("conditional") or Oa^2 - Oc^4/(1 + Ob)
    ("literal"). Raises DomainError when the threshold set does not describe
    a physical state.
    """
    if mu3_mode not in MU3_MODES:
        raise DomainError(f"mu3_mode must be one of {MU3_MODES}, got {mu3_mode!r}")
    if mu3_mode == "covariance":
        return _holevo_f_covariance(omega_a, omega_b, omega_c)
    s = omega_a**2 + omega_b**2 - 2.0 * omega_c**2
    p = omega_a * omega_b - omega_c**2
    disc = s * s - 4.0 * p * p
    if disc < -1e-9:
        raise DomainError("complex symplectic roots: non-physical threshold set")
    disc = max(disc, 0.0)
    z1 = (s + math.sqrt(disc)) / 2.0
    z2 = (s - math.sqrt(disc)) / 2.0
    if z2 < 0.0:
        raise DomainError("negative squared root: non-physical threshold set")
    mu1, mu2 = math.sqrt(z1), math.sqrt(z2)
    if mu3_mode == "conditional":
        mu3 = omega_a - omega_c**2 / (1.0 + omega_b)
    else:
        mu3 = omega_a**2 - omega_c**4 / (1.0 + omega_b)
    for mu in (mu1, mu2, mu3):
        if mu < 1.0 - 1e-9:
            raise DomainError(f"symplectic value {mu} < 1: non-physical threshold set")
    return (
        entropy_g((mu1 - 1.0) / 2.0)
        + entropy_g((mu2 - 1.0) / 2.0)
        - entropy_g((mu3 - 1.0) / 2.0)
    )


def key_length(params: ComposableParams, eps: EpsilonBudget, h_mle, f_value):
    """Final key length from the composable-security theorem; 0 means abort.

    l = floor( 4*lambda*n*H_MLE - 2*lambda*n*F - leak_EC
               - Delta_AEP - Delta_ent - 2*log2(1/(2*eps_bar)) )
    """
    pulses = params.correct_pulses
    leak = leakage_ec(params, h_mle)
    d_aep, d_ent = finite_size_corrections(
        params.lam, params.n, params.d, eps.eps_sm, eps.eps
    )
    raw = (
        2.0 * pulses * h_mle
        - pulses * f_value
        - leak
        - d_aep
        - d_ent
        - 2.0 * math.log2(1.0 / (2.0 * eps.eps_bar))
    )
    if raw < 0.0:
        return 0, True
    return int(math.floor(raw)), False


@dataclass(frozen=True)
class ComposableRateResult:
    rate_bits: float  # per correctly-measured pulse (2*lambda*n basis)
    rate_bits_per_exchanged: float  # per exchanged pulse (2n basis)
    s_ec_bits: float
    f_bits: float
    thresholds: PeThresholds
    delta_aep: float
    delta_ent: float
    key_length_bits: int
    abort: bool
    mu3_mode: str


def composable_rate(
    params: ComposableParams, eps: EpsilonBudget, mu3_mode="covariance"
) -> ComposableRateResult:
    """Composable secret key rate against collective attacks.

    K = (1 - eps_rob) * { beta*S - F(thresholds)
                          - (Delta_AEP + Delta_ent + 2*log2(1/(2*eps_bar)))
                            / (2*lambda*n) }
    """
    th = pe_thresholds(
        params.vm, params.ch.eta_x, params.ch.eps_x, params.lam, params.n, eps.eps_pe
    )
    f_value = holevo_f(th.omega_a_max, th.omega_b_max, th.omega_c_min, mu3_mode)
    s = mutual_information_ec(params.vm, params.ch.eta_x, params.ch.eps_x)
    d_aep, d_ent = finite_size_corrections(
        params.lam, params.n, params.d, eps.eps_sm, eps.eps
    )
    pulses = params.correct_pulses
    rate = (1.0 - eps.eps_rob) * (
        params.beta * s
        - f_value
        - (d_aep + d_ent + 2.0 * math.log2(1.0 / (2.0 * eps.eps_bar))) / pulses
    )
    length, abort = key_length(params, eps, float(params.d), f_value)
    return ComposableRateResult(
        rate_bits=rate,
        rate_bits_per_exchanged=rate * params.lam,
        s_ec_bits=s,
        f_bits=f_value,
        thresholds=th,
        delta_aep=d_aep,
        delta_ent=d_ent,
        key_length_bits=length,
        abort=abort,
        mu3_mode=mu3_mode,
    )


@dataclass(frozen=True)
class BudgetReport:
    eps: float
    composed: float
    passes: bool
    components: dict = field(default_factory=dict)


def epsilon_budget(eps: EpsilonBudget, slack=0.10) -> BudgetReport:
    """Check the security-parameter composition against the target eps.

    composed = 2*eps_sm + eps_bar + (eps_PE + eps_cor + eps_ent)/eps must not
    exceed eps by more than the slack fraction.
    """
    composed = (
        2.0 * eps.eps_sm
        + eps.eps_bar
        + (eps.eps_pe + eps.eps_cor + eps.eps_ent) / eps.eps
    )
    return BudgetReport(
        eps=eps.eps,
        composed=composed,
        passes=composed <= eps.eps * (1.0 + slack),
        components={
            "eps_sm": eps.eps_sm,
            "eps_bar": eps.eps_bar,
            "eps_pe": eps.eps_pe,
            "eps_cor": eps.eps_cor,
            "eps_ent": eps.eps_ent,
            "eps_rob": eps.eps_rob,
        },
    )


@dataclass(frozen=True)
class PeSimulationReport:
    trials: int
    abort_fraction: float
    aborts_a: int
    aborts_b: int
    aborts_c: int
    mean_omega_a: float
    mean_omega_b: float
    mean_omega_c: float
    h_mle_mean: float
    thresholds: PeThresholds
    seed: int


def simulate_pe_statistics(
    params: ComposableParams, eps_pe, trials, seed
) -> PeSimulationReport:
    """Monte-Carlo check of the parameter-estimation abort statistics.

    Each trial draws 2*lambda*n correlated Gaussian pairs with the second
    moments of the protocol covariance matrix, forms the disclosed statistics
    and the estimates, and tests them against the 3-sigma thresholds. The
    empirical entropy uses an equal-width 2^d-bin discretizer over +-5
    standard deviations of Bob's data. Deterministic given (seed, trials).
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    pulses = int(params.correct_pulses)
    a = math.sqrt(params.vm + 1.0)
    b = 1.0 + params.ch.eta_x * (params.vm + params.ch.eps_x)
    c = math.sqrt(params.ch.eta_x * params.vm * a)
    cov = np.array([[a, c], [c, b]])
    chol = np.linalg.cholesky(cov)

    th = pe_thresholds(
        params.vm, params.ch.eta_x, params.ch.eps_x, params.lam, params.n, eps_pe
    )
    root = np.random.default_rng(seed)
    streams = root.spawn(trials)

    edges = np.linspace(-5.0 * math.sqrt(b), 5.0 * math.sqrt(b), 2**params.d - 1)
    aborts_a = aborts_b = aborts_c = aborts = 0
    sum_a = sum_b = sum_c = 0.0
    sum_h = 0.0
    for rng in streams:
        z = rng.standard_normal((2, pulses))
        xy = chol @ z
        x, y = xy[0], xy[1]
        x2 = float(x @ x)
        y2 = float(y @ y)
        inner = float(x @ y)
        oa, ob, oc = pe_estimates(x2, y2, inner, params.lam, params.n, eps_pe)
        bad_a = oa > th.omega_a_max
        bad_b = ob > th.omega_b_max
        bad_c = oc < th.omega_c_min
        aborts_a += bad_a
        aborts_b += bad_b
        aborts_c += bad_c
        aborts += bad_a or bad_b or bad_c
        sum_a += oa
        sum_b += ob
        sum_c += oc
        counts = np.bincount(np.digitize(y, edges), minlength=2**params.d)
        probs = counts[counts > 0] / pulses
        sum_h += float(-(probs * np.log2(probs)).sum())  # bits per symbol
    return PeSimulationReport(
        trials=trials,
        abort_fraction=aborts / trials,
        aborts_a=aborts_a,
        aborts_b=aborts_b,
        aborts_c=aborts_c,
        mean_omega_a=sum_a / trials,
        mean_omega_b=sum_b / trials,
        mean_omega_c=sum_c / trials,
        h_mle_mean=sum_h / trials,
        thresholds=th,
        seed=seed,
    )
