"""Special functions for the closed-form temperature corrections.

All routines work in double precision and accept scalars or numpy arrays
unless noted otherwise.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import DomainError

ZETA3 = 1.2020569031595942853997381615114499907649862923405
ZETA5 = 1.0369277551433699263313654864570341680570809195019
PI2_6 = math.pi ** 2 / 6.0


class HyperbolicKernel(NamedTuple):
    """``coth(u)`` and ``1/sinh(u)**2`` evaluated without overflow."""

    coth_val: np.ndarray
    csch2_val: np.ndarray
    u: np.ndarray


def hyperbolic_kernel(u) -> HyperbolicKernel:
    """Return coth(u) and csch^2(u) for u > 0.

    Both are written in terms of ``q = exp(-2u)`` so nothing overflows for
    large arguments: ``coth = (1+q)/(1-q)`` and ``csch^2 = 4q/(1-q)^2``.
    """
    u = np.asarray(u, dtype=float)
    if np.any(~(u > 0)):
        raise DomainError("hyperbolic kernel needs u > 0")
    q = np.exp(-2.0 * u)
    one_minus_q = -np.expm1(-2.0 * u)
    coth = (1.0 + q) / one_minus_q
    csch2 = 4.0 * q / one_minus_q ** 2
    return HyperbolicKernel(coth, csch2, u)


def _dilog_series(z):
    # sum z^k / k^2; converges to 1e-17 within 60 terms for z <= 1/2
    k = np.arange(1, 61, dtype=float)
    z = np.asarray(z, dtype=float)
    powers = z[..., None] ** k
    return np.sum(powers / k ** 2, axis=-1)


def dilog(z):
    """Real dilogarithm Li2(z) on 0 <= z <= 1.

    Direct power series below 1/2, Euler's reflection
    ``Li2(z) = pi^2/6 - ln(z) ln(1-z) - Li2(1-z)`` above.
    """
    z = np.asarray(z, dtype=float)
    if np.any((z < 0) | (z > 1)) or np.any(np.isnan(z)):
        raise DomainError("dilog is only provided on [0, 1]")
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    low = z <= 0.5
    out[low] = _dilog_series(z[low])
    hi = ~low
    if np.any(hi):
        zh = z[hi]
        w = 1.0 - zh
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = np.where(w > 0, np.log(zh) * np.log1p(-zh), 0.0)
        out[hi] = PI2_6 - logs - _dilog_series(w)
    return out[0] if scalar else out


def zeta_constants() -> dict:
    """Apery's constant zeta(3) and zeta(5)."""
    return {"zeta3": ZETA3, "zeta5": ZETA5}


def even_zeta(n_terms: int) -> np.ndarray:
    """zeta(2), zeta(4), ..., zeta(2 n_terms) from the Bernoulli closed form."""
    from scipy.special import zeta

    return zeta(2.0 * np.arange(1, n_terms + 1))


def sine_series_partial_sum(theta, n_terms: int, accelerate: bool = True):
    """Partial sum of ``sum_{l>=1} sin(l theta)/l``.

    The limit is ``(pi - theta)/2`` for ``0 < theta < 2 pi``.  With
    ``accelerate`` the leading remainder ``cos((N+1/2)theta) / (2 (N+1) sin(theta/2))``
    obtained by summation by parts is added, which lowers the truncation
    error from O(1/N) to O(1/N^2).
    """
    theta = np.asarray(theta, dtype=float)
    total = np.zeros_like(theta)
    chunk = 100_000
    for start in range(1, n_terms + 1, chunk):
        l = np.arange(start, min(start + chunk, n_terms + 1), dtype=float)
        total = total + np.sum(np.sin(np.multiply.outer(theta, l)) / l, axis=-1)
    if accelerate:
        total = total + np.cos((n_terms + 0.5) * theta) / (2.0 * (n_terms + 1) * np.sin(theta / 2))
    return total
