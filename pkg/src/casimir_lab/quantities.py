"""Physical constants, material models and dimensionless parameters.

Everything is SI internally.  Separations are in metres, temperatures in
kelvin and frequencies in rad/s; the helpers ``Plasma.from_ev`` and
``Drude.from_ev`` convert the customary ``hbar*omega`` values given in eV.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

from scipy import constants as _sc

from .errors import ConfigurationError, DomainError, UnsupportedModelError

#: Default temperature used when none is given (K).
DEFAULT_TEMPERATURE = 300.0

#: Smallest allowed ratio R/a for the sphere-plate geometry.
MIN_RADIUS_RATIO = 100.0


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA values of the three constants the theory needs."""

    hbar: float = _sc.hbar
    c: float = _sc.c
    k_B: float = _sc.k

    def __post_init__(self):
        if not (self.hbar > 0 and self.c > 0 and self.k_B > 0):
            raise DomainError("physical constants must be strictly positive")

    def beta(self, T: float) -> float:
        """Euclidean time period ``hbar / (k_B T)`` in seconds."""
        if T <= 0:
            raise DomainError(f"temperature must be positive, got {T!r}")
        return self.hbar / (self.k_B * T)


CONSTANTS = PhysicalConstants()

_EV = _sc.e / CONSTANTS.hbar  # rad/s per eV of hbar*omega


# -- material models ---------------------------------------------------------

@dataclass(frozen=True)
class IdealMetal:
    """Perfect reflector; permittivity is infinite at every frequency."""

    name = "ideal"


@dataclass(frozen=True)
class Plasma:
    """Dissipationless free-electron metal, eps(i xi) = 1 + omega_p^2/xi^2."""

    omega_p: float
    name = "plasma"

    def __post_init__(self):
        if not self.omega_p > 0:
            raise DomainError("plasma frequency must be positive")

    @classmethod
    def from_ev(cls, hbar_omega_p: float) -> "Plasma":
        return cls(hbar_omega_p * _EV)


@dataclass(frozen=True)
class Drude:
    """Free-electron metal with relaxation, eps = 1 + omega_p^2/(xi (xi + gamma))."""

    omega_p: float
    gamma: float
    name = "drude"

    def __post_init__(self):
        if not self.omega_p > 0:
            raise DomainError("plasma frequency must be positive")
        if not self.gamma >= 0:
            raise DomainError("relaxation frequency must be non-negative")

    @classmethod
    def from_ev(cls, hbar_omega_p: float, hbar_gamma: float) -> "Drude":
        return cls(hbar_omega_p * _EV, hbar_gamma * _EV)


@dataclass(frozen=True)
class Dielectric:
    """Non-dispersive dielectric with static permittivity ``eps0``."""

    eps0: float
    name = "dielectric"

    def __post_init__(self):
        if not self.eps0 > 1:
            raise DomainError("dielectric permittivity must exceed 1")


MaterialModel = Union[IdealMetal, Plasma, Drude, Dielectric]

#: Aluminium in the plasma approximation, hbar*omega_p = 12.5 eV.
ALUMINIUM = Plasma.from_ev(12.5)


def ev_to_rad_per_s(energy_ev: float) -> float:
    """Angular frequency whose quantum ``hbar*omega`` equals ``energy_ev``."""
    return energy_ev * _EV


# -- evaluation point --------------------------------------------------------

@dataclass(frozen=True)
class EvaluationPoint:
    """Separation ``a`` (m), temperature ``T`` (K) and optional sphere radius ``R`` (m).

    For rough surfaces ``a`` is the mean separation.
    """

    a: float
    T: float = DEFAULT_TEMPERATURE
    R: Optional[float] = None
    constants: PhysicalConstants = field(default=CONSTANTS, repr=False, compare=False)

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a)):
            raise DomainError(f"separation must be positive and finite, got {self.a!r}")
        if not (self.T >= 0 and math.isfinite(self.T)):
            raise DomainError(f"temperature must be non-negative, got {self.T!r}")
        if self.R is not None:
            if not self.R > 0:
                raise DomainError(f"sphere radius must be positive, got {self.R!r}")
            if self.R < MIN_RADIUS_RATIO * self.a:
                raise DomainError(
                    f"sphere radius {self.R:g} m is below {MIN_RADIUS_RATIO:g} a; "
                    "the proximity force approximation does not apply"
                )

    @property
    def t(self) -> float:
        """Ratio ``T_eff / T``; infinite at zero temperature."""
        if self.T == 0:
            return math.inf
        return effective_temperature(self.a, self.constants) / self.T

    def require_radius(self) -> float:
        if self.R is None:
            raise ConfigurationError("sphere-plate geometry requires a sphere radius R")
        return self.R

    def _replace_unchecked(self, a: float, T: float) -> "EvaluationPoint":
        # the radius check is skipped on purpose: roughness moves a by less than a0
        if not a > 0:
            raise DomainError(f"separation must be positive, got {a!r}")
        p = object.__new__(EvaluationPoint)
        for name, val in (("a", a), ("T", T), ("R", self.R), ("constants", self.constants)):
            object.__setattr__(p, name, val)
        return p

    def with_separation(self, a: float) -> "EvaluationPoint":
        """Same temperature and radius at another (local) separation."""
        return self._replace_unchecked(a, self.T)

    def at_zero_temperature(self) -> "EvaluationPoint":
        return self._replace_unchecked(self.a, 0.0)


@dataclass(frozen=True)
class DimensionlessState:
    """Reduced temperature ``t = T_eff/T`` and penetration ratio ``delta0/a``."""

    t: float
    delta_ratio: float

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError("t must be positive")
        if not self.delta_ratio >= 0:
            raise DomainError("delta_ratio must be non-negative")

    @property
    def omega_tilde(self) -> float:
        """Dimensionless plasma frequency ``2 a omega_p / c = 2 / (delta0/a)``."""
        return math.inf if self.delta_ratio == 0 else 2.0 / self.delta_ratio


# -- operations --------------------------------------------------------------

def effective_temperature(a: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Temperature ``hbar c / (2 a k_B)`` at which thermal and gap scales meet."""
    if not a > 0:
        raise DomainError(f"separation must be positive, got {a!r}")
    return constants.hbar * constants.c / (2.0 * a * constants.k_B)


def penetration_depth(model: MaterialModel, constants: PhysicalConstants = CONSTANTS) -> float:
    """Effective field penetration depth ``delta0 = c / omega_p`` in metres."""
    if not isinstance(model, (Plasma, Drude)):
        raise UnsupportedModelError(
            f"{type(model).__name__} has no plasma frequency; penetration depth undefined"
        )
    return constants.c / model.omega_p


def plasma_wavelength(model: MaterialModel, constants: PhysicalConstants = CONSTANTS) -> float:
    """``lambda_p = 2 pi delta0``."""
    return 2.0 * math.pi * penetration_depth(model, constants)


def penetration_ratio(model: MaterialModel, a: float,
                      constants: PhysicalConstants = CONSTANTS) -> float:
    """Small parameter ``delta0 / a`` of the finite-conductivity expansion."""
    if not a > 0:
        raise DomainError(f"separation must be positive, got {a!r}")
    return penetration_depth(model, constants) / a


def delta_ratio_of(model: MaterialModel, a: float,
                   constants: PhysicalConstants = CONSTANTS) -> float:
    """Like :func:`penetration_ratio` but 0 for an ideal metal."""
    if isinstance(model, IdealMetal):
        return 0.0
    return penetration_ratio(model, a, constants)


def matsubara_frequency(l: int, T: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """``xi_l = 2 pi l k_B T / hbar`` in rad/s."""
    if not T > 0:
        raise DomainError(f"Matsubara frequencies need T > 0, got {T!r}")
    return 2.0 * math.pi * l * constants.k_B * T / constants.hbar


def dimensionless_state(point: EvaluationPoint, model: MaterialModel) -> DimensionlessState:
    if point.T <= 0:
        raise DomainError("the reduced temperature t needs T > 0")
    return DimensionlessState(point.t, delta_ratio_of(model, point.a, point.constants))


# -- polarisation split --------------------------------------------------------

@dataclass(frozen=True)
class ModeSplit:
    """A quantity carried separately for the two polarisations."""

    par: float
    perp: float

    @property
    def total(self) -> float:
        return self.par + self.perp

    @property
    def ratio(self) -> float:
        """``par / perp``; infinite when the perpendicular part vanishes."""
        return math.inf if self.perp == 0 else self.par / self.perp

    def scaled(self, factor: float) -> "ModeSplit":
        return ModeSplit(self.par * factor, self.perp * factor)

    def __add__(self, other: "ModeSplit") -> "ModeSplit":
        return ModeSplit(self.par + other.par, self.perp + other.perp)


POLARISATIONS = ("par", "perp")


def normalize_mode(mode: str, allow_both: bool = False) -> str:
    """Map user spellings of a polarisation onto ``par``, ``perp`` or ``both``."""
    key = str(mode).strip().lower()
    aliases = {"par": "par", "parallel": "par", "tm": "par", "∥": "par",
               "perp": "perp", "perpendicular": "perp", "te": "perp", "⊥": "perp",
               "both": "both", "total": "both"}
    if key not in aliases or (aliases[key] == "both" and not allow_both):
        allowed = "par, perp" + (", both" if allow_both else "")
        raise ConfigurationError(f"unknown polarisation {mode!r}; expected one of {allowed}")
    return aliases[key]
