"""User placement, Rayleigh fading with inverse-square path loss, and
reproducible complex Gaussian noise."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Inner exclusion radius in meters; keeps the 1/d^2 path loss bounded.
MIN_DISTANCE = 1.0


@dataclass(frozen=True)
class LinkState:
    """Channel coefficient, distance, and noise variance for one user."""

    h: complex
    d: float
    noise_var: float

    def snr(self) -> float:
        """Received SNR |h|^2 / noise_var."""
        return abs(self.h) ** 2 / self.noise_var


@dataclass(frozen=True, eq=False)
class UserDrop:
    """One realization of K users, sorted by descending channel gain."""

    links: tuple
    seed: int

    def __len__(self) -> int:
        return len(self.links)


def drop_users(count: int, radius: float, noise_var: float, seed: int) -> UserDrop:
    """Drop users uniformly on an annulus of 1 m to `radius` m and draw
    Rayleigh fading, then sort by descending |h|^2.

    Placement and fading use separate child streams of `seed`, so a drop
    is fully determined by its seed regardless of how many other draws
    the caller makes.
    """
    if count < 2:
        raise ValueError(f"need at least 2 users, got {count}")
    if radius <= MIN_DISTANCE:
        raise ValueError(f"radius must exceed {MIN_DISTANCE} m, got {radius}")
    if noise_var <= 0:
        raise ValueError(f"noise_var must be positive, got {noise_var}")
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    rng_place = np.random.default_rng(np.random.SeedSequence([seed, 0]))
    rng_fade = np.random.default_rng(np.random.SeedSequence([seed, 1]))
    u = rng_place.random(count)
    d = np.sqrt(u * (radius ** 2 - MIN_DISTANCE ** 2) + MIN_DISTANCE ** 2)
    g = (rng_fade.standard_normal(count)
         + 1j * rng_fade.standard_normal(count)) / np.sqrt(2.0)
    h = g / d
    order = np.argsort(-np.abs(h) ** 2, kind="stable")
    links = tuple(
        LinkState(h=complex(h[i]), d=float(d[i]), noise_var=float(noise_var))
        for i in order)
    return UserDrop(links=links, seed=int(seed))


def sample_noise(noise_var: float, count: int, rng) -> np.ndarray:
    """Circularly symmetric complex Gaussian samples with total variance
    noise_var (noise_var/2 per real dimension).

    `rng` is a numpy Generator or anything default_rng accepts.
    """
    if noise_var <= 0:
        raise ValueError(f"noise_var must be positive, got {noise_var}")
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    z = rng.standard_normal((int(count), 2))
    return np.sqrt(noise_var / 2.0) * (z[:, 0] + 1j * z[:, 1])
