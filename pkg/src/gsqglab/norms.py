"""Sobolev, Besov, and Gevrey norms plus interpolation-inequality checks.

All norms follow the box Parseval convention ||f||_{L2}^2 = L^2 sum |f_hat|^2,
so every value here is an exact finite lattice sum, and the interpolation
checks report realized constants rather than asymptotic ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dyadic import Partition, build_partition, decompose
from .spectral import (
    GridSpec,
    SpectralField,
    _kabs,
    gevrey_operator,
)

REL_SLACK = 1e-12   # float slack for sharp-constant assertions


@dataclass(frozen=True)
class NormReport:
    """One evaluated norm with enough metadata to be logged standalone."""

    kind: str
    s: float
    value: float
    n: int
    period: float
    alpha: float | None = None
    lam: float | None = None

    def __post_init__(self):
        if not (self.value >= 0 and math.isfinite(self.value)):
            raise ValueError(f"norm value must be finite and nonnegative, got {self.value}")


@dataclass(frozen=True)
class InequalityReport:
    """Realized two sides of one inequality check."""

    name: str
    lhs: float
    bound: float
    params: tuple

    @property
    def ratio(self) -> float:
        if self.bound == 0.0:
            return math.inf if self.lhs > 0 else 0.0
        return self.lhs / self.bound

    @property
    def holds(self) -> bool:
        return self.lhs <= self.bound * (1.0 + REL_SLACK)


@lru_cache(maxsize=None)
def _sobolev_weight(grid: GridSpec, s: float, homogeneous: bool) -> np.ndarray:
    kabs = _kabs(grid)
    if homogeneous:
        with np.errstate(divide="ignore"):
            w = np.where(kabs > 0, kabs ** (2.0 * s), 0.0)
    else:
        w = (1.0 + kabs * kabs) ** s
    w.flags.writeable = False
    return w


def sobolev_norm(field: SpectralField, s: float, homogeneous: bool = True) -> float:
    """Sobolev norm of order s; weight |k|^s (homogeneous) or (1+|k|^2)^(s/2)."""
    if homogeneous and not field.mean_zero:
        raise ValueError("homogeneous Sobolev norm requires a mean-zero field")
    w = _sobolev_weight(field.grid, s, homogeneous)
    total = float(np.sum(w * (field.coeffs.real**2 + field.coeffs.imag**2)))
    return field.grid.period * math.sqrt(total)


def besov_norm(field: SpectralField, s: float, partition: Partition | None = None) -> float:
    """l2-summed dyadic block norms, (sum_j (2^(js) ||block_j||)^2)^(1/2)."""
    if not field.mean_zero:
        raise ValueError("Besov norm requires a mean-zero field")
    if partition is None:
        partition = build_partition(field.grid)
    elif partition.grid != field.grid:
        raise ValueError("partition was built for a different grid")
    blocks = decompose(field)
    total = 0.0
    for j, b in blocks.items():
        block_l2 = field.grid.period * float(np.linalg.norm(b.coeffs))
        total += (2.0 ** (j * s) * block_l2) ** 2
    return math.sqrt(total)


def gevrey_norm(field: SpectralField, alpha: float, lam: float, s: float) -> float:
    """Sobolev norm of order s after the Gevrey weight exp(lam |k|^alpha)."""
    return sobolev_norm(gevrey_operator(field, alpha, lam), s, homogeneous=True)


def xt_norm(
    snapshots,
    alpha: float,
    eps: float,
    sigma_c: float,
    delta: float,
    gamma: float,
    kappa: float,
) -> float:
    """Supremum over positive-time snapshots of the weighted Gevrey norm.

    Each snapshot (t, field) with t > 0 contributes
    (gamma t)^(delta/kappa) * ||field|| in the Gevrey class of order alpha,
    radius eps * gamma^(alpha/kappa) * t^(alpha/kappa), and regularity
    sigma_c + delta. t = 0 snapshots carry a zero prefactor by convention
    and are skipped.
    """
    best = None
    for t, field in snapshots:
        if t <= 0.0:
            continue
        lam = eps * gamma ** (alpha / kappa) * t ** (alpha / kappa)
        weight = (gamma * t) ** (delta / kappa)
        val = weight * gevrey_norm(field, alpha, lam, sigma_c + delta)
        best = val if best is None else max(best, val)
    if best is None:
        raise ValueError("trajectory has no positive-time snapshots")
    return best


def check_interpolation(field: SpectralField, s: float, s1: float, s2: float) -> InequalityReport:
    """Sharp-constant frequency interpolation between Sobolev orders s1 <= s <= s2.

    On the lattice the bound holds with constant exactly 1: the check reports
    ||f||_s against ||f||_{s1}^a ||f||_{s2}^b with the conjugate exponents.
    """
    if not (s1 <= s <= s2):
        raise ValueError(f"need s1 <= s <= s2, got {s1}, {s}, {s2}")
    if not field.mean_zero:
        raise ValueError("interpolation check requires a mean-zero field")
    lhs = sobolev_norm(field, s)
    if lhs == 0.0 and sobolev_norm(field, s1) == 0.0:
        raise ValueError("interpolation ratio undefined for the zero field")
    if s1 == s2:
        bound = sobolev_norm(field, s1)
    else:
        a = (s2 - s) / (s2 - s1)
        b = (s - s1) / (s2 - s1)
        bound = sobolev_norm(field, s1) ** a * sobolev_norm(field, s2) ** b
    return InequalityReport(
        name="sobolev_interpolation",
        lhs=lhs,
        bound=bound,
        params=(("s", s), ("s1", s1), ("s2", s2)),
    )


def weighted_l1_norm(field: SpectralField, s: float) -> float:
    """Lattice L1 spectral sum L^2 sum |k|^s |f_hat|, area-weighted."""
    kabs = _kabs(field.grid)
    with np.errstate(divide="ignore"):
        w = np.where(kabs > 0, kabs**s, 0.0)
    return field.grid.period ** 2 * float(np.sum(w * np.abs(field.coeffs)))


def check_l1_interpolation(field: SpectralField, s: float, s1: float, s2: float) -> InequalityReport:
    """Realized constant for the weighted-L1 spectral interpolation bound.

    Compares L^2 sum |k|^s |f_hat| against the product of the Ḣ^(s+s2) and
    Ḣ^(s-s1) norms with exponents (s1+1)/(s1+s2) and (s2-1)/(s1+s2). Needs
    s1 > -1 and s2 > 1; the realized constant is reported, no sharp value
    is claimed.
    """
    if not (s1 > -1.0 and s2 > 1.0):
        raise ValueError(f"need s1 > -1 and s2 > 1, got s1={s1}, s2={s2}")
    if not field.mean_zero:
        raise ValueError("interpolation check requires a mean-zero field")
    lhs = weighted_l1_norm(field, s)
    if lhs == 0.0:
        raise ValueError("interpolation ratio undefined for the zero field")
    e1 = (s1 + 1.0) / (s1 + s2)
    e2 = (s2 - 1.0) / (s1 + s2)
    bound = sobolev_norm(field, s + s2) ** e1 * sobolev_norm(field, s - s1) ** e2
    return InequalityReport(
        name="weighted_l1_interpolation",
        lhs=lhs,
        bound=bound,
        params=(("s", s), ("s1", s1), ("s2", s2)),
    )


def check_gevrey_interpolation(
    field: SpectralField,
    alpha: float,
    lam: float,
    rho: float,
    s1: float,
    s2: float,
) -> InequalityReport:
    """Two-radius Gevrey interpolation with explicit constants.

    Verifies ||G(lam) f||_{s1}^2 against
    e ||G((1-rho) lam) f||_{s1}^2 + (2 rho lam)^(2(s2-s1)/alpha) ||G(lam) f||_{s2}^2.
    """
    if not (s1 <= s2):
        raise ValueError(f"need s1 <= s2, got {s1}, {s2}")
    if not (0 < rho <= 1):
        raise ValueError(f"rho must lie in (0, 1], got {rho}")
    boosted = gevrey_operator(field, alpha, lam)
    lhs = sobolev_norm(boosted, s1) ** 2
    low = gevrey_norm(field, alpha, (1.0 - rho) * lam, s1) ** 2
    high = sobolev_norm(boosted, s2) ** 2
    bound = math.e * low + (2.0 * rho * lam) ** (2.0 * (s2 - s1) / alpha) * high
    return InequalityReport(
        name="gevrey_interpolation",
        lhs=lhs,
        bound=bound,
        params=(("alpha", alpha), ("lam", lam), ("rho", rho), ("s1", s1), ("s2", s2)),
    )


def derivative_bound_check(
    field: SpectralField,
    alpha: float,
    lam: float,
    multi_index: tuple,
    sigma: float = 0.0,
) -> InequalityReport:
    """Derivative growth against the Gevrey norm with factorial constants.

    Verifies ||d^b f||_{Ḣ^sigma} <= (b! / (lam alpha)^|b|)^(1/alpha)
    ||f||_{Gevrey(alpha, lam), sigma} for one multi-index b = (b1, b2).
    """
    b1, b2 = multi_index
    if b1 < 0 or b2 < 0:
        raise ValueError("multi-index entries must be nonnegative integers")
    if lam <= 0:
        raise ValueError("derivative bound needs a positive Gevrey radius")
    grid = field.grid
    kabs = _kabs(grid)
    m = np.fft.fftfreq(grid.n, 1.0 / grid.n)
    s = grid.k_fundamental
    k1, k2 = np.abs(s * m)[:, None], np.abs(s * m)[None, :]
    deriv = (k1**b1) * (k2**b2) * np.abs(field.coeffs)
    with np.errstate(divide="ignore"):
        w = np.where(kabs > 0, kabs ** (2.0 * sigma), 0.0)
    lhs = grid.period * math.sqrt(float(np.sum(w * deriv**2)))
    order = b1 + b2
    factor = (math.factorial(b1) * math.factorial(b2) / (lam * alpha) ** order) ** (1.0 / alpha)
    bound = factor * gevrey_norm(field, alpha, lam, sigma)
    return InequalityReport(
        name="gevrey_derivative_bound",
        lhs=lhs,
        bound=bound,
        params=(("alpha", alpha), ("lam", lam), ("b", (b1, b2)), ("sigma", sigma)),
    )


def norm_report(
    field: SpectralField,
    kind: str,
    s: float = 0.0,
    alpha: float | None = None,
    lam: float | None = None,
) -> NormReport:
    """Evaluate one named norm and wrap it with its grid metadata."""
    if kind == "l2":
        value = sobolev_norm(field, 0.0, homogeneous=field.mean_zero)
    elif kind == "sobolev":
        value = sobolev_norm(field, s)
    elif kind == "sobolev_inhomogeneous":
        value = sobolev_norm(field, s, homogeneous=False)
    elif kind == "besov":
        value = besov_norm(field, s)
    elif kind == "gevrey":
        if alpha is None or lam is None:
            raise ValueError("gevrey report needs alpha and lam")
        value = gevrey_norm(field, alpha, lam, s)
    else:
        raise ValueError(f"unknown norm kind {kind!r}")
    return NormReport(
        kind=kind,
        s=s,
        value=value,
        n=field.grid.n,
        period=field.grid.period,
        alpha=alpha,
        lam=lam,
    )
