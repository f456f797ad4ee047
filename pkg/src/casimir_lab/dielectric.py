"""Permittivity on the imaginary axis, reflection and scattering coefficients.

The dimensionless variables are ``x = 2 a xi / c`` and ``y = 2 a q`` with
``q = sqrt(xi^2/c^2 + k_perp^2)``, so ``y >= x``.

Zero frequency is never handled by substituting ``xi = 0`` into a formula
with a pole.  Each model dispatches to its own limit: for the plasma model
``(eps - 1) x^2`` stays finite, for an ideal metal both coefficients are 1,
and for the Drude model the perpendicular limit does not exist.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DomainError, IndeterminateError, UnsupportedModelError
from .quantities import (
    CONSTANTS,
    Dielectric,
    Drude,
    IdealMetal,
    MaterialModel,
    PhysicalConstants,
    Plasma,
)

#: Returned by :func:`permittivity` for the ideal metal instead of ``inf``.
INFINITE = type("InfinitePermittivity", (), {
    "__repr__": lambda self: "INFINITE",
    "__reduce__": lambda self: "INFINITE",
})()


def permittivity(model: MaterialModel, xi):
    """Dielectric function eps(i xi) for xi in rad/s.

    Returns :data:`INFINITE` for :class:`IdealMetal`.
    """
    if isinstance(model, IdealMetal):
        return INFINITE
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0):
        raise DomainError("imaginary frequency must be non-negative")
    if isinstance(model, Dielectric):
        out = np.full_like(xi, model.eps0)
        return out[()] if out.ndim == 0 else out
    if np.any(xi == 0):
        raise DomainError(f"{type(model).__name__} permittivity has a pole at xi = 0; "
                          "use the zero-frequency limit forms")
    if isinstance(model, Plasma):
        out = 1.0 + model.omega_p ** 2 / xi ** 2
    elif isinstance(model, Drude):
        out = 1.0 + model.omega_p ** 2 / (xi * (xi + model.gamma))
    else:
        raise UnsupportedModelError(f"unknown material model {model!r}")
    return out[()] if out.ndim == 0 else out


class ReflectionSq(NamedTuple):
    r_par_sq: np.ndarray
    r_perp_sq: np.ndarray


def _omega_tilde(model, a, constants):
    return 2.0 * a * model.omega_p / constants.c


def reflection_sq(model: MaterialModel, a: float, x, y,
                  constants: PhysicalConstants = CONSTANTS) -> ReflectionSq:
    """Squared Fresnel coefficients in the dimensionless variables (x, y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x < 0) or np.any(x > y * (1 + 1e-15)):
        raise DomainError("reflection coefficients need 0 <= x <= y")
    if isinstance(model, IdealMetal):
        one = np.ones(np.broadcast(x, y).shape)
        return ReflectionSq(one, one.copy())
    if isinstance(model, Dielectric):
        e = model.eps0
        s = np.sqrt((e - 1.0) * x * x + y * y)
        rpar = (e * y - s) / (e * y + s)
        rperp = -(e - 1.0) * x * x / (y + s) ** 2
        return ReflectionSq(rpar ** 2, rperp ** 2)
    if isinstance(model, Plasma):
        w2 = _omega_tilde(model, a, constants) ** 2
        # (eps - 1) x^2 = w2 independent of x, so x = 0 is regular here
        s = np.sqrt(w2 + y * y)
        one_minus_rpar = 2.0 * x * x * s / (y * (x * x + w2) + x * x * s)
        rperp = -w2 / (y + s) ** 2
        return ReflectionSq((1.0 - one_minus_rpar) ** 2, rperp ** 2)
    if isinstance(model, Drude):
        if np.any(x == 0):
            raise IndeterminateError(
                "Drude perpendicular reflection is indeterminate at zero frequency")
        w = _omega_tilde(model, a, constants)
        g = 2.0 * a * model.gamma / constants.c
        em1x2 = w * w * x / (x + g)
        s = np.sqrt(em1x2 + y * y)
        eps = 1.0 + em1x2 / (x * x)
        rpar = (eps * y - s) / (eps * y + s)
        rperp = (y - s) / (y + s)
        return ReflectionSq(rpar ** 2, rperp ** 2)
    raise UnsupportedModelError(f"unknown material model {model!r}")


class S11(NamedTuple):
    s_par: float
    s_perp: float


def _log_s11_general(eps, q, k, a):
    # log of the full scattering coefficient; kept in log space so that
    # exp(q a) never overflows
    ln_par = (math.log(4.0 * eps * k * q) + k * a - q * a - 2.0 * math.log(eps * q + k)
              - math.log1p(-((eps * q - k) / (eps * q + k)) ** 2 * math.exp(-2.0 * q * a)))
    ln_perp = (math.log(4.0 * k * q) + k * a - q * a - 2.0 * math.log(q + k)
               - math.log1p(-((q - k) / (q + k)) ** 2 * math.exp(-2.0 * q * a)))
    return ln_par, ln_perp


def scattering_s11(model: MaterialModel, a: float, xi: float, k_perp: float,
                   constants: PhysicalConstants = CONSTANTS) -> S11:
    """Diagonal scattering coefficients for both polarisations.

    For ``xi > 0`` (non-ideal models) the full expression is evaluated.  For
    ``xi = 0`` the limit forms are returned; these, like the ideal-metal
    result ``1/(1 - exp(-2 a q))``, are normalised only up to factors that do
    not depend on ``a``.
    """
    if not a > 0 or not k_perp > 0:
        raise DomainError("need a > 0 and k_perp > 0")
    if xi < 0:
        raise DomainError("imaginary frequency must be non-negative")
    if isinstance(model, IdealMetal):
        q = math.sqrt((xi / constants.c) ** 2 + k_perp ** 2)
        v = -1.0 / math.expm1(-2.0 * a * q)
        return S11(v, v)
    if xi == 0:
        rep = zero_frequency_report(model, a, k_perp, constants)
        if rep.perp_limit is None:
            raise IndeterminateError(
                "perpendicular scattering coefficient is indeterminate at zero "
                "frequency for a dissipative Drude metal")
        return S11(rep.par_limit, rep.perp_limit)
    eps = float(permittivity(model, xi))
    q = math.sqrt((xi / constants.c) ** 2 + k_perp ** 2)
    k = math.sqrt(eps * (xi / constants.c) ** 2 + k_perp ** 2)
    ln_par, ln_perp = _log_s11_general(eps, q, k, a)
    return S11(math.exp(ln_par), math.exp(ln_perp))


def log_s11_renormalized(model: MaterialModel, a: float, xi: float, k_perp: float,
                         constants: PhysicalConstants = CONSTANTS):
    """``ln s11`` with the bulk term ``(k - q) a`` removed, per mode.

    Differences of this quantity between two separations are what enter the
    free energy.
    """
    s = scattering_s11(model, a, xi, k_perp, constants)
    if xi == 0 or isinstance(model, IdealMetal):
        return math.log(s.s_par), math.log(s.s_perp)
    eps = float(permittivity(model, xi))
    q = math.sqrt((xi / constants.c) ** 2 + k_perp ** 2)
    k = math.sqrt(eps * (xi / constants.c) ** 2 + k_perp ** 2)
    bulk = (k - q) * a
    return math.log(s.s_par) - bulk, math.log(s.s_perp) - bulk


class ZeroFrequencyClass(enum.Enum):
    PLASMA_WELL_POSED = "PlasmaWellPosed"
    DIELECTRIC_WELL_POSED = "DielectricWellPosed"
    DRUDE_INDETERMINATE = "DrudeIndeterminate"
    IDEAL_BY_PRESCRIPTION_ONLY = "IdealByPrescriptionOnly"


@dataclass(frozen=True)
class ZeroFrequencyReport:
    """How the scattering problem behaves as xi -> 0.

    ``perp_limit`` is ``None`` when the limit is indeterminate.
    """

    classification: ZeroFrequencyClass
    xi2_eps_limit: float
    q0: float
    k0: float
    par_limit: float
    perp_limit: Optional[float]

    @property
    def wavevectors_coincide(self) -> bool:
        return self.q0 == self.k0

    def as_dict(self) -> dict:
        return {
            "classification": self.classification.value,
            "xi2_eps_limit": self.xi2_eps_limit,
            "q0": self.q0,
            "k0": self.k0,
            "q0_equals_k0": self.wavevectors_coincide,
            "par_limit": self.par_limit,
            "perp_limit": "INDETERMINATE" if self.perp_limit is None else self.perp_limit,
        }


def zero_frequency_report(model: MaterialModel, a: float, k_perp: float,
                          constants: PhysicalConstants = CONSTANTS) -> ZeroFrequencyReport:
    """Classify the zero-frequency limit of the scattering coefficients."""
    if not a > 0 or not k_perp > 0:
        raise DomainError("need a > 0 and k_perp > 0")
    decay = math.exp(-2.0 * a * k_perp)
    metal_par = -1.0 / math.expm1(-2.0 * a * k_perp)
    if isinstance(model, IdealMetal):
        return ZeroFrequencyReport(ZeroFrequencyClass.IDEAL_BY_PRESCRIPTION_ONLY,
                                   math.inf, k_perp, math.inf, metal_par, metal_par)
    if isinstance(model, Dielectric):
        ratio = ((model.eps0 + 1.0) / (model.eps0 - 1.0)) ** 2
        return ZeroFrequencyReport(ZeroFrequencyClass.DIELECTRIC_WELL_POSED,
                                   0.0, k_perp, k_perp, 1.0 / (ratio - decay), 1.0)
    plasma_like = isinstance(model, Plasma) or (isinstance(model, Drude) and model.gamma == 0)
    if plasma_like:
        wp2 = model.omega_p ** 2
        k0 = math.sqrt(wp2 / constants.c ** 2 + k_perp ** 2)
        # squared ratio, consistent with r_perp^2 = ((q - k)/(q + k))^2
        ratio = ((k_perp + k0) / (k_perp - k0)) ** 2
        return ZeroFrequencyReport(ZeroFrequencyClass.PLASMA_WELL_POSED,
                                   wp2, k_perp, k0, metal_par, 1.0 / (ratio - decay))
    if isinstance(model, Drude):
        return ZeroFrequencyReport(ZeroFrequencyClass.DRUDE_INDETERMINATE,
                                   0.0, k_perp, k_perp, metal_par, None)
    raise UnsupportedModelError(f"unknown material model {model!r}")


def require_well_posed(model: MaterialModel) -> None:
    """Refuse models whose finite-temperature force is not defined."""
    if isinstance(model, Drude):
        raise IndeterminateError(
            "finite-temperature Casimir force with the Drude model is refused: the "
            "perpendicular zero-frequency scattering coefficient is indeterminate "
            "for a dissipative metal (s11 is arbitrary when q0 = k0). Use the plasma "
            "model instead.")
