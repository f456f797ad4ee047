"""Closed-form thermal corrections to second order in the penetration depth.

The reflection coefficients of a plasma metal are expanded in
``delta = delta0/a``.  The frequency integral of every expansion term can be
done analytically, leaving a sum over harmonics ``b = l t`` of elementary
functions of ``coth(pi b)`` and ``1/sinh^2(pi b)``.

Per polarisation and per unit area, between plates::

    dF = -(hbar c / 16 pi^2 a^4) sum_l [P0(b) + delta P1(b) + delta^2 P2(b)]

and for a sphere of radius ``R`` above a plate::

    dF = +(hbar c R / 8 pi a^3) sum_l [S0(b) + delta S1(b) + delta^2 S2(b)]

Every bracket is a combination of derivatives of the sine integral
``I(b) = int_0^inf sin(b y)/(e^y - 1) dy = (pi/2) coth(pi b) - 1/(2b)``,
whose Taylor series ``sum_k (-1)^(k-1) zeta(2k) b^(2k-1)`` is used below
``b = 0.5`` where the closed forms cancel.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Tuple

import numpy as np
from scipy.special import zeta as hurwitz_zeta

from .dielectric import require_well_posed
from .errors import DomainError, UnsupportedModelError
from .quantities import (
    EvaluationPoint,
    IdealMetal,
    MaterialModel,
    ModeSplit,
    Plasma,
    delta_ratio_of,
    normalize_mode,
)
from .specfun import PI2_6, dilog, even_zeta, hyperbolic_kernel

#: above this the second-order expansion is no longer trusted
DELTA_LIMIT = 0.3
#: a warning is issued above this value
DELTA_WARN = 0.16

#: harmonics beyond l t = _EXP_B carry only their power-law part
_EXP_B = 7.0
_SERIES_B = 0.5
_SERIES_TERMS = 48


class PerturbativeAccuracyWarning(UserWarning):
    """The penetration ratio is large enough for third-order terms to matter."""


class Harmonics(NamedTuple):
    """Brackets of one harmonic ``b = l t`` by order and polarisation.

    The zeroth order is the same for both polarisations.
    """

    order0: np.ndarray
    par1: np.ndarray
    perp1: np.ndarray
    par2: np.ndarray
    perp2: np.ndarray

    def pick(self, mode: str, order: int):
        if order == 0:
            return self.order0
        return getattr(self, f"{mode}{order}")


# -- small-b series -------------------------------------------------------------

def _series_weights():
    k = np.arange(1, _SERIES_TERMS + 1, dtype=float)
    m = 2.0 * k - 1.0
    w = {
        "T0": -m * (m - 1),
        "T1par": 2 * (m - 1) * (m - 2) * (m + 1),
        "T1perp": 2 * m * (m - 1) * (m + 1),
        "T2par": -2 * m * (m - 1) * (m - 2) * (m + 1),
        "T2perp": -2 * m * (m - 1) * (m + 1) * (m + 2),
        "U0": m - 1,
        "U1par": -2 * (m - 1) * (m - 2),
        "U1perp": -2 * m * (m - 1),
        "U2par": 2 * m * (m - 1) * (m - 2) - 2 * m * (m - 1) + 8 * m + 24 - 48 * (m + 1) / (m + 2),
        "U2perp": 2 * m * (m - 1) * (m + 1),
    }
    a_k = even_zeta(_SERIES_TERMS) * np.where(k % 2 == 1, 1.0, -1.0)
    return m, {name: a_k * wt for name, wt in w.items()}


_M, _COEF = _series_weights()


def _series(name: str, b: np.ndarray) -> np.ndarray:
    # sum_k coef_k b^(m_k - 3); every weight vanishes where m - 3 < 0 would blow up
    coef = _COEF[name]
    keep = coef != 0
    powers = _M[keep] - 3.0
    return np.sum(coef[keep] * b[:, None] ** powers[None, :], axis=1)


# -- closed forms ------------------------------------------------------------

def _plates_closed(b):
    hk = hyperbolic_kernel(math.pi * b)
    c, s2, u = hk.coth_val, hk.csch2_val, hk.u
    pi = math.pi
    t0 = 1.0 / b ** 4 - pi ** 3 * c * s2 / b
    # the u^2 term in the bracket carries the factor c^2 (3 u^2 coth^2)
    t1par = 2.0 * (pi * c / b ** 3 + (pi ** 2 * s2 / b ** 2) * (1.0 + u * c + u * u - 3.0 * u * u * c * c))
    t1perp = (2.0 * pi ** 3 * s2 / b) * (3.0 * c + u - 3.0 * u * c * c)
    # verified against quadrature: the linear term is 2 u c, not 7 u c / 4
    t2par = 8.0 * pi ** 4 * s2 * (3.0 * c * c - 1.0 - 3.0 * u * c ** 3 + 2.0 * u * c)
    # the u^2 term is 2 u^2 c (first power of coth)
    t2perp = (8.0 * pi ** 3 * s2 / b) * (-3.0 * c - 2.0 * u + 6.0 * u * c * c
                                         + 2.0 * u * u * c - 3.0 * u * u * c ** 3)
    return t0, t1par, t1perp, t2par, t2perp


def _sphere_closed(b):
    hk = hyperbolic_kernel(math.pi * b)
    c, s2, u = hk.coth_val, hk.csch2_val, hk.u
    pi = math.pi
    u0 = 1.0 / b ** 4 - pi * c / (2.0 * b ** 3) - pi ** 2 * s2 / (2.0 * b * b)
    u1par = 2.0 * (3.0 / b ** 4 - pi * c / b ** 3 - pi ** 2 * s2 / b ** 2 - pi ** 3 * c * s2 / b)
    u1perp = 2.0 * (1.0 / b ** 4 - pi ** 3 * c * s2 / b)
    q = np.exp(-2.0 * u)
    w = 2.0 * u * np.log1p(-q) - 2.0 * u * u * q / (-np.expm1(-2.0 * u)) - dilog(q)
    u2par = (2.0 * pi / b ** 5 - 2.0 * pi ** 4 * s2 * (3.0 * c * c - 1.0 + c / u + 2.0 / (u * u))
             + 12.0 * w / (pi * b ** 5))
    u2perp = (2.0 * pi ** 3 * s2 / b) * (3.0 * c + u - 3.0 * u * c * c)
    return u0, u1par, u1perp, u2par, u2perp


def _evaluate(b, closed, names) -> Harmonics:
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if np.any(~(b > 0)):
        raise DomainError("harmonic argument l t must be positive")
    out = [np.empty_like(b) for _ in names]
    small = b < _SERIES_B
    if np.any(small):
        for arr, name in zip(out, names):
            arr[small] = _series(name, b[small])
    if np.any(~small):
        for arr, val in zip(out, closed(b[~small])):
            arr[~small] = val
    return Harmonics(*out)


def plate_harmonics(b) -> Harmonics:
    """Brackets ``P0, P1, P2`` of the plate correction at ``b = l t``."""
    return _evaluate(b, _plates_closed, ("T0", "T1par", "T1perp", "T2par", "T2perp"))


def sphere_harmonics(b) -> Harmonics:
    """Brackets ``S0, S1, S2`` of the sphere-plate correction at ``b = l t``."""
    return _evaluate(b, _sphere_closed, ("U0", "U1par", "U1perp", "U2par", "U2perp"))


# power-law parts: {field: [(coefficient, power of 1/b), ...]}
_PLATE_POWER = {"order0": [(1.0, 4)], "par1": [(2.0 * math.pi, 3)]}
_SPHERE_POWER = {
    "order0": [(1.0, 4), (-0.5 * math.pi, 3)],
    "par1": [(6.0, 4), (-2.0 * math.pi, 3)],
    "perp1": [(2.0, 4)],
    "par2": [(2.0 * math.pi, 5)],
}


def _harmonic_sums(t: float, which: str) -> Tuple[Harmonics, int]:
    """``sum_{l>=1}`` of every bracket at reduced temperature ``t``."""
    if not (t > 0 and math.isfinite(t)):
        raise DomainError("harmonic sums need a finite t > 0")
    n = max(1, math.ceil(_EXP_B / t))
    b = t * np.arange(1, n + 1, dtype=float)
    if which == "plates":
        h, power = plate_harmonics(b), _PLATE_POWER
    else:
        h, power = sphere_harmonics(b), _SPHERE_POWER
    # ascending-l summation for reproducibility, then the analytic remainder
    sums = []
    for name, arr in zip(Harmonics._fields, h):
        tail = sum(coef * hurwitz_zeta(p, n + 1) / t ** p for coef, p in power.get(name, []))
        sums.append(float(math.fsum(arr)) + tail)
    return Harmonics(*sums), n


# -- expansions of the integrands ----------------------------------------------

class ExpansionCoefficients(NamedTuple):
    c0: np.ndarray
    c1: np.ndarray
    c2: np.ndarray


def _bose(x, y, mode):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(~(y > 0)):
        raise DomainError("the expansion needs y > 0")
    if np.any(x < 0) or np.any(x > y * (1 + 1e-15)):
        raise DomainError("the expansion needs 0 <= x <= y")
    z = 1.0 / np.expm1(y)
    w = x * x / y if normalize_mode(mode) == "par" else y
    return z, w


def integrand_expansion_plates(x, y, mode: str) -> ExpansionCoefficients:
    """Coefficients of ``delta^0,1,2`` in ``1/(r^-2 e^y - 1)`` for a plasma metal.

    With ``z = 1/(e^y - 1)`` and ``w = x^2/y`` (par) or ``w = y`` (perp)::

        c0 = z,  c1 = -2 w z (1 + z),  c2 = 2 w^2 z (1 + z)(1 + 2z)
    """
    z, w = _bose(x, y, mode)
    zz = z * (1.0 + z)
    return ExpansionCoefficients(z, -2.0 * w * zz, 2.0 * w * w * zz * (1.0 + 2.0 * z))


def integrand_expansion_sphere(x, y, mode: str) -> ExpansionCoefficients:
    """Coefficients of ``delta^0,1,2`` in ``ln(1 - r^2 e^-y)`` for a plasma metal.

    ``c0 = ln(1 - e^-y)``, ``c1 = 2 w z``, ``c2 = -2 w^2 z (1 + z)`` with
    ``z`` and ``w`` as in :func:`integrand_expansion_plates`.
    """
    z, w = _bose(x, y, mode)
    c0 = np.log(-np.expm1(-np.asarray(y, dtype=float)))
    return ExpansionCoefficients(c0, 2.0 * w * z, -2.0 * w * w * z * (1.0 + z))


def dilog_sine_integral(b):
    """``int_0^inf (dy/y) e^y/(e^y-1)^2 (sin(b y) - b y cos(b y))`` in closed form.

    Equals ``(pi b^2/4) coth(pi b) - [pi^2/6 + 2 pi b ln(1 - q)
    - 2 pi^2 b^2 q/(1 - q) - Li2(q)] / (4 pi)`` with ``q = exp(-2 pi b)``.
    """
    b = np.asarray(b, dtype=float)
    if np.any(~(b > 0)):
        raise DomainError("dilog_sine_integral needs b > 0")
    u = math.pi * b
    hk = hyperbolic_kernel(u)
    q = np.exp(-2.0 * u)
    bracket = (PI2_6 + 2.0 * u * np.log1p(-q) - 2.0 * u * u * q / (-np.expm1(-2.0 * u)) - dilog(q))
    return math.pi * b * b / 4.0 * hk.coth_val - bracket / (4.0 * math.pi)


# -- corrections ---------------------------------------------------------------

@dataclass(frozen=True)
class CorrectionSeries:
    """Thermal correction split by perturbative order and polarisation.

    ``per_mode[n]`` is the ``ModeSplit`` of order ``n``; ``order0`` is the
    ideal-metal correction.
    """

    order0: float
    order1: float
    order2: float
    per_mode: Tuple[ModeSplit, ModeSplit, ModeSplit]
    l_terms_used: int
    delta_ratio: float = 0.0
    t: float = field(default=math.nan)

    @property
    def total(self) -> float:
        return self.order0 + self.order1 + self.order2

    @property
    def modes(self) -> ModeSplit:
        p = self.per_mode
        return p[0] + p[1] + p[2]

    @property
    def orders(self) -> Tuple[float, float, float]:
        return (self.order0, self.order1, self.order2)


def _check_delta(delta_ratio: float) -> None:
    if not delta_ratio >= 0:
        raise DomainError("penetration ratio must be non-negative")
    if delta_ratio >= DELTA_LIMIT:
        raise DomainError(f"delta0/a = {delta_ratio:.3g} is outside the perturbative range "
                          f"(< {DELTA_LIMIT}); use the numerical Lifshitz evaluation")
    if delta_ratio > DELTA_WARN:
        warnings.warn(f"delta0/a = {delta_ratio:.3g}: third-order terms may exceed 1e-3",
                      PerturbativeAccuracyWarning, stacklevel=3)


def _t_of(point: EvaluationPoint) -> float:
    if point.T <= 0:
        raise DomainError("thermal corrections need T > 0")
    return point.t


def _plate_prefactor(point):
    c = point.constants
    return -c.hbar * c.c / (16.0 * math.pi ** 2 * point.a ** 4)


def _sphere_prefactor(point):
    c = point.constants
    return c.hbar * c.c * point.require_radius() / (8.0 * math.pi * point.a ** 3)


def _series_from_sums(sums: Harmonics, pref, delta, n, t, max_order) -> CorrectionSeries:
    d = [1.0, delta if max_order >= 1 else 0.0, delta ** 2 if max_order >= 2 else 0.0]
    per = (
        ModeSplit(pref * sums.order0, pref * sums.order0),
        ModeSplit(pref * d[1] * sums.par1, pref * d[1] * sums.perp1),
        ModeSplit(pref * d[2] * sums.par2, pref * d[2] * sums.perp2),
    )
    return CorrectionSeries(per[0].total, per[1].total, per[2].total, per, n, delta, t)


def _mode_value(sums: Harmonics, mode, delta):
    mode = normalize_mode(mode)
    return sums.order0 + delta * sums.pick(mode, 1) + delta ** 2 * sums.pick(mode, 2)


def delta_T_plates_mode(point: EvaluationPoint, delta_ratio: float, mode: str) -> float:
    """Thermal correction (Pa) carried by one polarisation between plates."""
    _check_delta(delta_ratio)
    sums, _ = _harmonic_sums(_t_of(point), "plates")
    return _plate_prefactor(point) * _mode_value(sums, mode, delta_ratio)


def delta_T_sphere_mode(point: EvaluationPoint, delta_ratio: float, mode: str) -> float:
    """Thermal correction (N) carried by one polarisation, sphere above a plate."""
    _check_delta(delta_ratio)
    sums, _ = _harmonic_sums(_t_of(point), "sphere")
    return _sphere_prefactor(point) * _mode_value(sums, mode, delta_ratio)


def _delta_for(model: MaterialModel, point: EvaluationPoint) -> float:
    require_well_posed(model)
    if not isinstance(model, (Plasma, IdealMetal)):
        raise UnsupportedModelError(
            f"closed-form corrections need a plasma or ideal metal, got {type(model).__name__}")
    return delta_ratio_of(model, point.a, point.constants)


def delta_T_plates(point: EvaluationPoint, model: MaterialModel, max_order: int = 2) -> CorrectionSeries:
    """Thermal correction to the plate pressure, all orders and both polarisations.

    Parameters
    ----------
    point : EvaluationPoint
        Separation and temperature (``T > 0``).
    model : Plasma or IdealMetal
    max_order : int
        Highest power of ``delta0/a`` kept (0, 1 or 2).
    """
    delta = _delta_for(model, point)
    _check_delta(delta)
    t = _t_of(point)
    sums, n = _harmonic_sums(t, "plates")
    return _series_from_sums(sums, _plate_prefactor(point), delta, n, t, max_order)


def delta_T_sphere(point: EvaluationPoint, model: MaterialModel, max_order: int = 2) -> CorrectionSeries:
    """Thermal correction to the sphere-plate force; see :func:`delta_T_plates`."""
    delta = _delta_for(model, point)
    _check_delta(delta)
    t = _t_of(point)
    sums, n = _harmonic_sums(t, "sphere")
    return _series_from_sums(sums, _sphere_prefactor(point), delta, n, t, max_order)


def harmonic_sums(t: float, geometry: str = "plates") -> Harmonics:
    """``sum_{l>=1}`` of each bracket; mostly useful for testing."""
    if geometry not in ("plates", "sphere"):
        raise DomainError(f"unknown geometry {geometry!r}")
    return _harmonic_sums(t, geometry)[0]
