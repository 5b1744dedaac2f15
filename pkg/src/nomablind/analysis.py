"""Closed-form classification-error probabilities and the majority-vote
combiner for repeated observations."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .constellation import first_quadrant_indices, make_qam, superpose

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ErrorProbabilities:
    """Both misclassification probabilities for one scheduled pair."""

    p_sic_as_nonsic: float  # the SIC user decides it does not need SIC
    p_nonsic_as_sic: float  # the non-SIC user decides it needs SIC


def q_function(x):
    """Gaussian tail probability Q(x) = P[N(0,1) > x]."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / np.sqrt(2.0))


def _clamp_unit(value: float) -> float:
    clamped = min(max(value, 0.0), 1.0)
    if clamped != value:
        logger.debug("clamped probability outside [0, 1] by %.3e",
                     abs(value - clamped))
    return clamped


def _check_triple(chi, chi_k, chi_n):
    if len(chi) != len(chi_k) * len(chi_n):
        raise ValueError(
            f"composite size {len(chi)} does not equal "
            f"{len(chi_k)} * {len(chi_n)}")
    rebuilt = (chi_k.points[:, None] + chi_n.points[None, :]).ravel()
    if not np.allclose(rebuilt, chi.points, rtol=0.0, atol=1e-12):
        raise ValueError("composite points do not match the superposition "
                         "of chi_k and chi_n in canonical index order")


def p_err_sic_user(h, noise_var, chi, chi_k, chi_n, quadrant_only=False):
    """Probability that the SIC user's single-sample comparison picks the
    direct-decoding hypothesis.

    Union-style bound: each transmitted composite point is assumed to
    dominate both mixtures, reducing the comparison to one Q term per
    (own symbol, interferer symbol) pair.  With quadrant_only=True the
    own-symbol sum runs over first-quadrant representatives only, weighted
    by 4/|chi|; a joint 90-degree rotation of both symbols maps the other
    terms onto these exactly, so the reduced sum equals the full one.
    """
    if noise_var <= 0:
        raise ValueError(f"noise_var must be positive, got {noise_var}")
    _check_triple(chi, chi_k, chi_n)
    h2 = abs(h) ** 2
    sk = chi_k.points
    if quadrant_only:
        sk = sk[first_quadrant_indices(chi_k)]
    sn = chi_n.points
    m0 = sk[:, None] + sn[None, :]
    num = (noise_var * np.log(len(chi_k) / len(chi))
           - h2 * (np.abs(m0) ** 2 - np.abs(sk[:, None]) ** 2)
           + 2.0 * np.real(h2 * m0 * np.conj(sn[None, :])))
    den = np.sqrt(2.0 * noise_var * h2) * np.abs(sn[None, :])
    weight = (4.0 if quadrant_only else 1.0) / len(chi)
    return _clamp_unit(weight * float(np.sum(q_function(num / den))))


def p_err_nonsic_user(h, noise_var, chi, chi_k, chi_n, quadrant_only=False):
    """Probability that the non-SIC user's single-sample comparison picks
    the composite hypothesis.

    The receiver's own symbol is assumed decoded correctly; what remains
    is a Q factor for the pairwise likelihood comparison against each
    interferer candidate, weighted by the Gaussian probability that the
    noisy sample lands in that candidate's composite decision rectangle.
    Decision-rectangle offsets keep their sign, so each factor stays a
    probability.  quadrant_only reduces the own-symbol sum as in
    p_err_sic_user.
    """
    if noise_var <= 0:
        raise ValueError(f"noise_var must be positive, got {noise_var}")
    _check_triple(chi, chi_k, chi_n)
    h2 = abs(h) ** 2
    nn = len(chi_n)
    sk = chi_k.points
    rows = np.arange(len(chi_k))
    if quadrant_only:
        rows = first_quadrant_indices(chi_k)
        sk = sk[rows]
    sn = chi_n.points

    # pairwise comparison term, axes (own i0, transmitted l0, candidate l)
    num = (noise_var * np.log(len(chi) / len(chi_k))
           + h2 * (np.abs(sk[:, None] + sn[None, :]) ** 2
                   - np.abs(sk[:, None]) ** 2)[:, None, :]
           - 2.0 * np.real(h2 * (sk[:, None, None] + sn[None, :, None])
                           * np.conj(sn[None, None, :])))
    den = np.sqrt(2.0 * noise_var * h2) * np.abs(sn)[None, None, :]
    q_term = q_function(num / den)

    # probability that y = h*(s_k(i0) + s_n(l0)) + w, scaled back by h,
    # lands in the decision rectangle of composite point (i0, l), with
    # per-dimension deviation sqrt(noise_var / |h|^2 / 2)
    re_lo, re_hi, im_lo, im_hi = (b.reshape(len(chi_k), nn)[rows]
                                  for b in chi.region_bounds)
    mu = sk[:, None] + sn[None, :]
    sdev = math.sqrt(noise_var / h2 / 2.0)

    def rect(lo, hi, center):
        a = q_function((lo[:, None, :] - center[:, :, None]) / sdev)
        b = q_function((hi[:, None, :] - center[:, :, None]) / sdev)
        return a - b

    p_region = (rect(re_lo, re_hi, mu.real) * rect(im_lo, im_hi, mu.imag))
    weight = (4.0 if quadrant_only else 1.0) / len(chi)
    return _clamp_unit(weight * float(np.sum(q_term * p_region)))


def combine_majority(p0: float, L: int, tail_rule: str = "majority") -> float:
    """Error probability after combining an odd number L of independent
    per-sample decisions that each err with probability p0.

    "majority" counts the outcomes where at most half the samples decide
    correctly.  "half_inclusive" instead sums correct-vote counts from 1
    to (L+1)/2; it is kept only for side-by-side comparison and is not
    used by any other operation.
    """
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"p0 must be in [0, 1], got {p0}")
    if L < 1 or L % 2 == 0:
        raise ValueError(f"sample count must be odd and positive, got {L}")
    if tail_rule == "majority":
        lo, hi = 0, (L - 1) // 2
    elif tail_rule == "half_inclusive":
        lo, hi = 1, (L + 1) // 2
    else:
        raise ValueError(f"unknown tail_rule {tail_rule!r}")
    total = math.fsum(
        math.comb(L, j) * (1.0 - p0) ** j * p0 ** (L - j)
        for j in range(lo, hi + 1))
    return _clamp_unit(total)


def analytical_error_pair(link_k, link_n, split, mods, L: int = 1):
    """Closed-form error probabilities for one scheduled pair, with the
    majority combiner applied when more than one sample is observed."""
    order_k, order_n = mods
    ck = make_qam(order_k, split.gamma_k)
    cn = make_qam(order_n, split.gamma_n)
    chi = superpose(ck, cn)
    p_n = p_err_sic_user(link_n.h, link_n.noise_var, chi, ck, cn)
    p_k = p_err_nonsic_user(link_k.h, link_k.noise_var, chi, ck, cn)
    return ErrorProbabilities(
        p_sic_as_nonsic=combine_majority(p_n, L),
        p_nonsic_as_sic=combine_majority(p_k, L))
