"""Geometric averaging of the Casimir force over rough surfaces.

The local separation is ``a(x, y) = a0 + f(x, y)`` where ``f`` combines the
roughness of both surfaces and has zero mean over the patch.  The rough
force is the area average of the flat-surface force at the local
separation, which requires the roughness to vary slowly on the scale of
``a0``.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Tuple, Union

import numpy as np

from .asymptotics import t_at_separation, total_force
from .errors import ConfigurationError, DomainError
from .lifshitz import DEFAULT_SETTINGS, QuadratureSettings
from .quantities import EvaluationPoint, MaterialModel

#: default number of midpoint samples per period for analytic profiles
MIN_SAMPLES = 64


@dataclass(frozen=True)
class Flat:
    """No roughness."""

    @property
    def max_deviation(self) -> float:
        return 0.0


@dataclass(frozen=True)
class Sinusoidal:
    """``f = A sin(2 pi x / period + phase)``, averaged over whole periods."""

    amplitude: float
    period: float
    phase: float = 0.0

    def __post_init__(self):
        if not self.amplitude >= 0 or not self.period > 0:
            raise DomainError("sinusoidal profile needs amplitude >= 0 and period > 0")

    @property
    def max_deviation(self) -> float:
        return self.amplitude


@dataclass(frozen=True)
class TwoPoint:
    """Half of the patch at ``+A``, the other half at ``-A``."""

    amplitude: float

    def __post_init__(self):
        if not self.amplitude >= 0:
            raise DomainError("amplitude must be non-negative")

    @property
    def max_deviation(self) -> float:
        return self.amplitude


@dataclass(frozen=True, eq=False)
class Grid:
    """Heights (m) sampled on a square grid with cell size ``cell`` (m)."""

    heights: np.ndarray
    cell: float

    def __post_init__(self):
        h = np.asarray(self.heights, dtype=float)
        if h.ndim != 2 or h.size == 0:
            raise DomainError("grid heights must be a non-empty 2-D array")
        if not np.all(np.isfinite(h)):
            raise DomainError("grid heights must be finite")
        if not self.cell > 0:
            raise DomainError("grid cell size must be positive")
        object.__setattr__(self, "heights", h)

    @property
    def patch(self) -> Tuple[float, float]:
        """Side lengths (m) of the sampled patch."""
        ny, nx = self.heights.shape
        return ny * self.cell, nx * self.cell

    @property
    def max_deviation(self) -> float:
        return float(np.max(np.abs(self.heights)))


RoughnessProfile = Union[Flat, Sinusoidal, TwoPoint, Grid]


@dataclass(frozen=True)
class ZeroMeanProfile:
    profile: RoughnessProfile
    a0_shift: float


def enforce_zero_mean(profile: RoughnessProfile) -> ZeroMeanProfile:
    """Remove the patch mean of ``f``; the mean is returned to be added to ``a0``."""
    if isinstance(profile, Grid):
        mean = math.fsum(profile.heights.ravel()) / profile.heights.size
        return ZeroMeanProfile(Grid(profile.heights - mean, profile.cell), mean)
    if isinstance(profile, (Flat, Sinusoidal, TwoPoint)):
        return ZeroMeanProfile(profile, 0.0)
    raise ConfigurationError(f"unknown roughness profile {profile!r}")


def profile_samples(profile: RoughnessProfile, n_samples: int = MIN_SAMPLES):
    """Deviations and area weights used for the average."""
    if isinstance(profile, Flat):
        return np.zeros(1), np.ones(1)
    if isinstance(profile, TwoPoint):
        return np.array([-profile.amplitude, profile.amplitude]), np.array([0.5, 0.5])
    if isinstance(profile, Sinusoidal):
        n = max(MIN_SAMPLES, int(n_samples))
        theta = 2.0 * math.pi * (np.arange(n) + 0.5) / n + profile.phase
        return profile.amplitude * np.sin(theta), np.full(n, 1.0 / n)
    if isinstance(profile, Grid):
        h = profile.heights.ravel()
        return h, np.full(h.size, 1.0 / h.size)
    raise ConfigurationError(f"unknown roughness profile {profile!r}")


@dataclass(frozen=True)
class AveragedForce:
    value: float
    flat_value: float
    enhancement: float
    formula_used: str


ForceMethod = Callable[[EvaluationPoint], float]


def force_evaluator(model: MaterialModel, method: str = "exact", geometry: str = "plates",
                    settings: QuadratureSettings = DEFAULT_SETTINGS) -> ForceMethod:
    """Callable returning the total force at a point, tagged with its formula."""
    def evaluate(point: EvaluationPoint) -> float:
        return total_force(point, model, method, geometry, settings).total

    evaluate.formula = method
    return evaluate


def averaged_force(profile: RoughnessProfile, point: EvaluationPoint,
                   model: Optional[MaterialModel] = None,
                   force_method: Union[ForceMethod, str] = "auto",
                   geometry: Optional[str] = None,
                   n_samples: int = MIN_SAMPLES,
                   settings: QuadratureSettings = DEFAULT_SETTINGS) -> AveragedForce:
    """Area average of the force over the local separations ``a0 + f``.

    Parameters
    ----------
    profile : RoughnessProfile
        Zero-mean deviation, see :func:`enforce_zero_mean`.
    point : EvaluationPoint
        Mean separation, temperature and (for a sphere) radius.
    model : MaterialModel, optional
        Needed unless ``force_method`` is a callable.
    force_method : callable or str
        A callable mapping an :class:`EvaluationPoint` to a force, or one of
        ``exact``, ``lowT``, ``highT``, ``numeric`` and ``auto``.  ``auto``
        follows :func:`recommended_force_method_for_roughness`.
    geometry : {"plates", "sphere"}, optional
        Defaults to ``sphere`` when the point has a radius.
    """
    if not callable(force_method):
        if model is None:
            raise ConfigurationError("a material model is needed unless force_method is callable")
        method = str(force_method)
        if method == "auto":
            regime = recommended_force_method_for_roughness(point)
            method = "lowT" if regime is RoughnessRegime.LOW_T else "exact"
        if geometry is None:
            geometry = "sphere" if point.R is not None else "plates"
        force_method = force_evaluator(model, method, geometry, settings)
    tag = getattr(force_method, "formula", "custom")
    flat = force_method(point)
    if isinstance(profile, Flat):
        return AveragedForce(flat, flat, 1.0, tag)
    if profile.max_deviation >= point.a:
        raise DomainError(
            f"roughness amplitude {profile.max_deviation:.4g} m reaches the mean separation "
            f"{point.a:.4g} m; the surfaces touch")
    dev, w = profile_samples(profile, n_samples)
    # equal local separations share one evaluation
    uniq, inverse = np.unique(dev, return_inverse=True)
    forces = np.array([force_method(point.with_separation(point.a + f)) for f in uniq])
    value = math.fsum(w * forces[inverse])
    return AveragedForce(value, flat, value / flat, tag)


class RoughnessRegime(enum.Enum):
    LOW_T = "lowT"
    EXACT = "exact"
    NEGLIGIBLE = "negligible"


T_ROUGH_LOW = t_at_separation(3.0e-6)
T_ROUGH_NEGLIGIBLE = t_at_separation(5.0e-6)


def recommended_force_method_for_roughness(point: EvaluationPoint) -> RoughnessRegime:
    """Which thermal formula to average over a rough profile.

    The low-temperature limit below 3 um (at 300 K), the exact series up to
    5 um, and beyond that roughness corrections are negligible.  The
    thresholds scale with ``t``.
    """
    t = point.t
    if t > T_ROUGH_LOW:
        return RoughnessRegime.LOW_T
    if t >= T_ROUGH_NEGLIGIBLE:
        return RoughnessRegime.EXACT
    return RoughnessRegime.NEGLIGIBLE


# -- file and string formats ----------------------------------------------------

_HEADER = re.compile(r"^\s*#?\s*cell_nm\s*=\s*([0-9.eE+-]+)\s*$")


def load_grid_profile(path) -> ZeroMeanProfile:
    """Read a grid profile and remove its mean.

    The first line is ``cell_nm=<value>``; the remaining lines hold the
    heights in nm, one row of the grid per line, separated by whitespace
    or commas.
    """
    text = Path(path).read_text().splitlines()
    if not text:
        raise ConfigurationError(f"{path}: empty profile file")
    m = _HEADER.match(text[0])
    if not m:
        raise ConfigurationError(f"{path}: first line must be 'cell_nm=<value>'")
    rows = [line.replace(",", " ").split() for line in text[1:] if line.strip() and not line.lstrip().startswith("#")]
    if not rows or len({len(r) for r in rows}) != 1:
        raise ConfigurationError(f"{path}: height rows must be non-empty and of equal length")
    try:
        heights = np.array(rows, dtype=float) * 1e-9
    except ValueError as exc:
        raise ConfigurationError(f"{path}: {exc}") from None
    return enforce_zero_mean(Grid(heights, float(m.group(1)) * 1e-9))


def parse_profile(spec: str) -> ZeroMeanProfile:
    """Profile from ``flat``, ``two-point:A_nm``, ``sine:A_nm:period_nm[:phase]`` or a file path."""
    s = spec.strip()
    parts = s.split(":")
    kind = parts[0].lower()
    try:
        if kind == "flat" and len(parts) == 1:
            return ZeroMeanProfile(Flat(), 0.0)
        if kind in ("two-point", "twopoint") and len(parts) == 2:
            return ZeroMeanProfile(TwoPoint(float(parts[1]) * 1e-9), 0.0)
        if kind in ("sine", "sinusoidal") and len(parts) in (3, 4):
            phase = float(parts[3]) if len(parts) == 4 else 0.0
            return ZeroMeanProfile(Sinusoidal(float(parts[1]) * 1e-9, float(parts[2]) * 1e-9, phase), 0.0)
    except ValueError as exc:
        raise ConfigurationError(f"bad profile spec {spec!r}: {exc}") from None
    if Path(s).is_file():
        return load_grid_profile(s)
    raise ConfigurationError(
        f"profile {spec!r} is neither a file nor one of flat, two-point:A, sine:A:period[:phase]")
