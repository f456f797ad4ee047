"""Low- and high-temperature limits, correction factors and regime choice.

The correction factor ``k = dF_T / F(T=0)`` always uses the numerically
computed zero-temperature force as denominator, so only the numerator
depends on the method.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Tuple

from . import lifshitz, perturbative
from .dielectric import require_well_posed
from .errors import ConfigurationError, DomainError
from .lifshitz import DEFAULT_SETTINGS, ForceBreakdown, QuadratureSettings
from .quantities import (
    CONSTANTS,
    DEFAULT_TEMPERATURE,
    EvaluationPoint,
    MaterialModel,
    delta_ratio_of,
    effective_temperature,
)
from .specfun import ZETA3, ZETA5

PI = math.pi
GEOMETRIES = ("plates", "sphere")
METHODS = ("exact", "lowT", "highT", "numeric")


def _check_geometry(geometry: str) -> str:
    if geometry not in GEOMETRIES:
        raise ConfigurationError(f"unknown geometry {geometry!r}; expected plates or sphere")
    return geometry


def _thermal_t(point: EvaluationPoint) -> float:
    if point.T <= 0:
        raise DomainError("temperature limits need T > 0")
    return point.t


# -- asymptotic formulas, split by order in delta0/a ------------------------------

def low_T_plates_orders(t: float, delta: float, exponential_terms: bool = False) -> Tuple[float, float, float]:
    """Braces of the low-temperature plate correction, by order.

    The correction is ``-(hbar c / 8 pi^2 a^4)`` times the sum.  Without
    ``exponential_terms`` only the power laws ``pi^4/(90 t^4)`` and
    ``delta pi zeta(3)/t^3`` are kept.
    """
    o0 = PI ** 4 / (90.0 * t ** 4)
    o1 = delta * PI * ZETA3 / t ** 3
    o2 = 0.0
    if exponential_terms:
        e = math.exp(-2.0 * PI * t)
        o0 -= 4.0 * PI ** 3 / t * e
        o1 -= delta * 16.0 * PI ** 4 * e
        # the second-order coefficient is 32 pi^5 (sum of both polarisations)
        o2 -= 32.0 * PI ** 5 * t * delta ** 2 * e
    return o0, o1, o2


def high_T_plates_orders(t: float, delta: float) -> Tuple[float, float, float]:
    return (PI * ZETA3 / t - PI ** 4 / 30.0,
            delta * (-3.0 * PI * ZETA3 / t + 8.0 * PI ** 4 / 45.0),
            delta ** 2 * (12.0 * PI * ZETA3 / t - 4.0 * PI ** 4 / 5.0))


def low_T_sphere_orders(t: float, delta: float, exponential_terms: bool = False) -> Tuple[float, float, float]:
    """Braces of the low-temperature sphere correction, ``-(hbar c R / 4 pi a^3)`` times the sum."""
    o0 = PI * ZETA3 / (2.0 * t ** 3) - PI ** 4 / (90.0 * t ** 4)
    o1 = delta * (PI * ZETA3 / t ** 3 - 2.0 * PI ** 4 / (45.0 * t ** 4))
    o2 = -delta ** 2 * PI * ZETA5 / t ** 5
    if exponential_terms:
        e = math.exp(-2.0 * PI * t)
        o0 += 2.0 * PI ** 2 / t ** 2 * e
        o1 += delta * 8.0 * PI ** 3 / t * e
        o2 += delta ** 2 * 16.0 * PI ** 4 * e
    return o0, o1, o2


def high_T_sphere_orders(t: float, delta: float) -> Tuple[float, float, float]:
    return (PI * ZETA3 / (2.0 * t) - PI ** 4 / 90.0,
            delta * (-PI * ZETA3 / t + 2.0 * PI ** 4 / 45.0),
            delta ** 2 * (3.0 * PI * ZETA3 / t - 4.0 * PI ** 4 / 25.0))


def _plate_scale(point):
    c = point.constants
    return -c.hbar * c.c / (8.0 * PI ** 2 * point.a ** 4)


def _sphere_scale(point):
    c = point.constants
    return -c.hbar * c.c * point.require_radius() / (4.0 * PI * point.a ** 3)


def low_T_plates(point: EvaluationPoint, delta_ratio: float, exponential_terms: bool = False) -> float:
    """Low-temperature (``t >> 1``) thermal correction to the plate pressure, Pa.

    By default only the power-law terms are kept.  They dominate for
    ``t > 1`` and are what the reference low-temperature k values contain.
    ``exponential_terms=True`` adds the leading ``exp(-2 pi t)`` term of
    each order.
    """
    orders = low_T_plates_orders(_thermal_t(point), delta_ratio, exponential_terms)
    return _plate_scale(point) * sum(orders)


def high_T_plates(point: EvaluationPoint, delta_ratio: float) -> float:
    """High-temperature (``t << 1``) thermal correction to the plate pressure, Pa."""
    return _plate_scale(point) * sum(high_T_plates_orders(_thermal_t(point), delta_ratio))


def low_T_sphere(point: EvaluationPoint, delta_ratio: float, exponential_terms: bool = False) -> float:
    """Low-temperature thermal correction to the sphere-plate force, N."""
    orders = low_T_sphere_orders(_thermal_t(point), delta_ratio, exponential_terms)
    return _sphere_scale(point) * sum(orders)


def high_T_sphere(point: EvaluationPoint, delta_ratio: float) -> float:
    """High-temperature thermal correction to the sphere-plate force, N."""
    return _sphere_scale(point) * sum(high_T_sphere_orders(_thermal_t(point), delta_ratio))


# -- correction factor and total force ---------------------------------------

def zero_temperature_force(point: EvaluationPoint, model: MaterialModel, geometry: str = "plates",
                           settings: QuadratureSettings = DEFAULT_SETTINGS):
    """Numerical ``T = 0`` force per polarisation (Pa for plates, N for the sphere)."""
    if _check_geometry(geometry) == "plates":
        return lifshitz.t0_force_plates(point.a, model, settings, point.constants)
    point.require_radius()
    cold = point.at_zero_temperature()
    return lifshitz.force_sphere_plate(cold, model, settings, "poisson").per_mode


def _orders_by_method(point, model, geometry, method, max_order=2):
    """Thermal correction as (per-mode split or None, orders or None, total)."""
    delta = delta_ratio_of(model, point.a, point.constants)
    if method == "exact":
        fn = perturbative.delta_T_plates if geometry == "plates" else perturbative.delta_T_sphere
        series = fn(point, model, max_order)
        return series.modes, series.orders, series.total
    t = _thermal_t(point)
    if method == "lowT":
        fn, scale = ((low_T_plates_orders, _plate_scale) if geometry == "plates"
                     else (low_T_sphere_orders, _sphere_scale))
        orders = tuple(scale(point) * o for o in fn(t, delta))
    else:
        fn, scale = ((high_T_plates_orders, _plate_scale) if geometry == "plates"
                     else (high_T_sphere_orders, _sphere_scale))
        orders = tuple(scale(point) * o for o in fn(t, delta))
    orders = tuple(o if n <= max_order else 0.0 for n, o in enumerate(orders))
    return None, orders, sum(orders)


def total_force(point: EvaluationPoint, model: MaterialModel, method: str = "exact",
                geometry: str = "plates",
                settings: QuadratureSettings = DEFAULT_SETTINGS,
                max_order: int = 2) -> ForceBreakdown:
    """Force at temperature ``T``, ``(1 + k) F(T=0)``, with the chosen correction.

    Parameters
    ----------
    method : {"exact", "lowT", "highT", "numeric"}
        ``exact`` is the closed-form perturbative series, ``lowT``/``highT``
        the asymptotic limits and ``numeric`` the full Lifshitz evaluation.
    geometry : {"plates", "sphere"}
    max_order : {0, 1, 2}
        Highest power of ``delta0/a`` kept in the closed-form corrections;
        ignored by ``numeric``, which is exact in ``delta0/a``.
    """
    _check_geometry(geometry)
    if max_order not in (0, 1, 2):
        raise ConfigurationError("max_order must be 0, 1 or 2")
    if method not in METHODS:
        raise ConfigurationError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    require_well_posed(model)
    if method == "numeric":
        if geometry == "plates":
            out = lifshitz.force_plates_poisson(point, model, settings)
        else:
            out = lifshitz.force_sphere_plate(point, model, settings, "poisson")
        out.metadata["method"] = "numeric"
        return out
    t0 = zero_temperature_force(point, model, geometry, settings)
    if point.T == 0:
        return ForceBreakdown.assemble(t0, t0.scaled(0.0), (0.0, 0.0, 0.0), method=method, tol_est=0.0)
    modes, orders, corr = _orders_by_method(point, model, geometry, method, max_order)
    return ForceBreakdown.assemble(t0, modes if modes is not None else corr, orders,
                                   method=method, tol_est=0.0)


def k_factor(point: EvaluationPoint, model: MaterialModel, method: str = "exact",
             geometry: str = "plates", settings: QuadratureSettings = DEFAULT_SETTINGS,
             max_order: int = 2) -> float:
    """Relative thermal correction ``k = dF_T / F(T=0)`` (positive)."""
    return total_force(point, model, method, geometry, settings, max_order).k


# -- regime classification -------------------------------------------------------

class Regime(enum.Enum):
    LOW_T = "LowT"
    TRANSITION = "Transition"
    HIGH_T = "HighT"


class Formula(enum.Enum):
    EXACT = "exact"
    LOW_T = "lowT"
    HIGH_T = "highT"


def t_at_separation(a: float, T: float = DEFAULT_TEMPERATURE) -> float:
    """Reduced temperature ``t`` at separation ``a`` (m) and temperature ``T``."""
    return effective_temperature(a, CONSTANTS) / T


#: thresholds in t, calibrated at 300 K on aluminium:
#: the low-T limit is accurate up to 2 um, the high-T limit from 7 um
#: (plates) or 6 um (sphere)
T_LOW_LIMIT = t_at_separation(2.0e-6)
T_HIGH_LIMIT_PLATES = t_at_separation(7.0e-6)
T_HIGH_LIMIT_SPHERE = t_at_separation(6.0e-6)


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    recommended_formula: Formula
    bounds_used: Tuple[float, float]
    t: float


def _separation_at(t: float, point: EvaluationPoint) -> float:
    if point.T == 0:
        return math.inf
    return effective_temperature(1.0, point.constants) / (point.T * t)


def regime_recommendation(point: EvaluationPoint, geometry: str = "plates") -> RegimeReport:
    """Pick the formula appropriate to the reduced temperature of ``point``.

    ``bounds_used`` are the separations (m) at the point's temperature
    between which the exact series is recommended.
    """
    t_high = T_HIGH_LIMIT_PLATES if _check_geometry(geometry) == "plates" else T_HIGH_LIMIT_SPHERE
    bounds = (_separation_at(T_LOW_LIMIT, point), _separation_at(t_high, point))
    t = point.t
    if t >= T_LOW_LIMIT:
        return RegimeReport(Regime.LOW_T, Formula.LOW_T, bounds, t)
    if t <= t_high:
        return RegimeReport(Regime.HIGH_T, Formula.HIGH_T, bounds, t)
    return RegimeReport(Regime.TRANSITION, Formula.EXACT, bounds, t)
