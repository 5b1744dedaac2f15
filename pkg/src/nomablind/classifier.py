"""Maximum-likelihood blind classification: does this receiver need
successive interference cancellation or not."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp


class Hypothesis(enum.Enum):
    SIC = "sic"
    NON_SIC = "non_sic"


@dataclass(frozen=True, eq=False)
class Observation:
    """One or more received samples sharing a single channel coefficient."""

    y: np.ndarray
    h: complex
    noise_var: float

    def __post_init__(self):
        y = np.atleast_1d(np.asarray(self.y, dtype=complex))
        if y.ndim != 1 or len(y) == 0:
            raise ValueError("y must be a non-empty 1-d sample vector")
        if self.noise_var <= 0:
            raise ValueError(f"noise_var must be positive, got {self.noise_var}")
        object.__setattr__(self, "y", y)


def log_mixture_likelihood(y, h, noise_var, points) -> np.ndarray:
    """Log density of y under an equiprobable mixture over `points`:
    log (1/N) sum_s exp(-|y - h s|^2 / noise_var) / (pi noise_var).

    Vectorized over y; computed with log-sum-exp so small noise variances
    do not underflow.
    """
    y = np.asarray(y, dtype=complex)
    points = np.asarray(points, dtype=complex)
    z = -np.abs(y[..., None] - h * points) ** 2 / noise_var
    return logsumexp(z, axis=-1) - np.log(len(points)) - np.log(np.pi * noise_var)


def likelihood_sic(y, h, noise_var, chi) -> float:
    """Mixture density of one sample over the full composite set."""
    return float(np.exp(log_mixture_likelihood(y, h, noise_var, chi.points)))


def likelihood_nonsic(y, h, noise_var, chi_k) -> float:
    """Mixture density of one sample over the direct-decoding set only."""
    return float(np.exp(log_mixture_likelihood(y, h, noise_var, chi_k.points)))


def classify_single(y, h, noise_var, chi, chi_k) -> Hypothesis:
    """Compare the two mixture densities for one sample.

    Ties go to NON_SIC: when the observation does not favor the composite
    set, the receiver keeps the simpler decoding chain.
    """
    lp_sic = log_mixture_likelihood(y, h, noise_var, chi.points)
    lp_non = log_mixture_likelihood(y, h, noise_var, chi_k.points)
    return Hypothesis.SIC if lp_sic > lp_non else Hypothesis.NON_SIC


def classify_multi(obs: Observation, chi, chi_k) -> Hypothesis:
    """Majority vote of per-sample decisions over an odd number of samples."""
    n = len(obs.y)
    if n % 2 == 0:
        raise ValueError(f"sample count must be odd, got {n}")
    lp_sic = log_mixture_likelihood(obs.y, obs.h, obs.noise_var, chi.points)
    lp_non = log_mixture_likelihood(obs.y, obs.h, obs.noise_var, chi_k.points)
    votes = int(np.sum(lp_sic > lp_non))
    return Hypothesis.SIC if votes > n // 2 else Hypothesis.NON_SIC


def classify_m_user(y, h, noise_var, scan_sets) -> int:
    """Pick the 1-based user position whose candidate symbol set best
    explains the observation.

    `scan_sets[m-1]` is the set user m would scan: its own constellation
    superposed with those of all weaker users (the strongest user scans
    everything, the weakest only its own set).  Ties resolve to the
    smallest position.
    """
    if len(scan_sets) == 0:
        raise ValueError("need at least one candidate set")
    logs = np.asarray([
        float(np.sum(log_mixture_likelihood(y, h, noise_var, c.points)))
        for c in scan_sets])
    return int(np.argmax(logs)) + 1
