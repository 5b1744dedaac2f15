"""Achievable rates under superposition transmission, the orthogonal
baseline, and classification-discounted rate gains."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PowerSplit:
    """Fractions of unit transmit power given to the two users."""

    gamma_k: float
    gamma_n: float

    def __post_init__(self):
        if not 0.0 < self.gamma_k < 1.0 or not 0.0 < self.gamma_n < 1.0:
            raise ValueError(
                f"power fractions must be in (0, 1), got "
                f"({self.gamma_k}, {self.gamma_n})")
        if abs(self.gamma_k + self.gamma_n - 1.0) > 1e-12:
            raise ValueError(
                f"power fractions must sum to 1, got "
                f"{self.gamma_k + self.gamma_n}")

    @classmethod
    def from_gamma_n(cls, gamma_n: float) -> "PowerSplit":
        return cls(gamma_k=1.0 - gamma_n, gamma_n=gamma_n)


@dataclass(frozen=True)
class RatePair:
    """Achievable rates of the non-SIC user and the SIC user."""

    rate_k: float
    rate_n: float


@dataclass(frozen=True)
class GainReport:
    """Per-user and total rate gains over the orthogonal baseline."""

    delta_n: float
    delta_k: float
    delta_total: float
    lower_bound: float


def rate_nonsic(snr_k, split: PowerSplit):
    """Rate of the user that decodes its own signal directly, treating the
    other user's signal as noise."""
    return np.log2(1.0 + snr_k * split.gamma_k / (snr_k * split.gamma_n + 1.0))


def rate_sic(snr_n, split: PowerSplit):
    """Rate of the user that cancels the other signal before decoding."""
    return np.log2(1.0 + snr_n * split.gamma_n)


def rate_oma(snr):
    """Orthogonal baseline: half the degrees of freedom at full power."""
    return 0.5 * np.log2(1.0 + snr)


def gain_lower_bound(snr_k, snr_n, split: PowerSplit, p_t: float):
    """Lower bound on the total gain when both misclassification
    probabilities are held at or below p_t."""
    if not 0.0 <= p_t <= 1.0:
        raise ValueError(f"p_t must be in [0, 1], got {p_t}")
    total = rate_nonsic(snr_k, split) + rate_sic(snr_n, split)
    return total * (1.0 - p_t) - rate_oma(snr_k) - rate_oma(snr_n)


def gain_report(snr_k, snr_n, split: PowerSplit, errs, p_t: float) -> GainReport:
    """Rate gains of both users with each rate discounted by that user's
    own misclassification probability, plus the p_t lower bound."""
    r_k = rate_nonsic(snr_k, split)
    r_n = rate_sic(snr_n, split)
    delta_n = r_n * (1.0 - errs.p_sic_as_nonsic) - rate_oma(snr_n)
    delta_k = r_k * (1.0 - errs.p_nonsic_as_sic) - rate_oma(snr_k)
    return GainReport(
        delta_n=float(delta_n),
        delta_k=float(delta_k),
        delta_total=float(delta_n + delta_k),
        lower_bound=float(gain_lower_bound(snr_k, snr_n, split, p_t)))
