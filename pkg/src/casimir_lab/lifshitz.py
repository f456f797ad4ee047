"""Numerical Lifshitz theory without any expansion in the penetration depth.

Two equivalent representations of the finite-temperature result are
implemented.

* Matsubara form: the force is a discrete sum over ``x_l = 2 pi l / t`` of
  ``H(x_l)``, where ``H(x) = int_x^inf y^p K(x, y) dy``.
* Poisson form: the discrete sum is traded for cosine transforms
  ``F_l = int_0^inf cos(l t x) H(x) dx``.  ``F_0`` is the zero-temperature
  result and ``l >= 1`` gives the temperature correction.

In both cases the inner integral runs over ``y`` at fixed ``x``, so one set
of values ``H(x)`` serves every harmonic.  For the plates ``p = 2`` and ``K``
is ``1/(r^-2 e^y - 1)``; for the free energy (and therefore the sphere-plate
force) ``p = 1`` and ``K = ln(1 - r^2 e^-y)``.

Attractive forces are negative throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy.special import zeta as hurwitz_zeta

from . import _kernels as K
from .dielectric import require_well_posed
from .errors import ConfigurationError, ConvergenceError, DomainError, UnsupportedModelError
from .quantities import (
    Dielectric,
    EvaluationPoint,
    IdealMetal,
    MaterialModel,
    ModeSplit,
    Plasma,
    normalize_mode,
)


@dataclass(frozen=True)
class QuadratureSettings:
    """Accuracy controls for the numerical evaluation.

    Parameters
    ----------
    rel_tol : float
        Target relative accuracy of the returned force.
    abs_tol : float
        Absolute floor in the units of the result; truncation errors below
        it are accepted regardless of ``rel_tol``.
    max_subdivisions : int
        Largest number of Gauss-Legendre panels allowed on the frequency grid.
    l_max : int, optional
        Fixed number of Poisson harmonics.  By default it is chosen from the
        reduced temperature so that the last harmonics are in their
        power-law regime, where the remainder is summed analytically.
    y_cutoff : float
        Upper limit of the dimensionless integrals; the integrands decay
        like ``exp(-y)``.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 0.0
    max_subdivisions: int = 200_000
    l_max: Optional[int] = None
    y_cutoff: float = 60.0
    nodes_per_panel: int = 16

    def __post_init__(self):
        if not 0 < self.rel_tol <= 1e-3:
            raise ConfigurationError("rel_tol must lie in (0, 1e-3]")
        if self.abs_tol < 0:
            raise ConfigurationError("abs_tol must be non-negative")
        if self.max_subdivisions < 10:
            raise ConfigurationError("max_subdivisions must be at least 10")
        if self.l_max is not None and self.l_max < 1:
            raise ConfigurationError("l_max must be a positive integer")
        if not self.y_cutoff >= 30:
            raise ConfigurationError("y_cutoff below 30 truncates the exp(-y) tail")
        if not 4 <= self.nodes_per_panel <= 64:
            raise ConfigurationError("nodes_per_panel must lie in [4, 64]")


DEFAULT_SETTINGS = QuadratureSettings()


@dataclass(frozen=True)
class ForceBreakdown:
    """Force split into the zero-temperature part and the thermal correction.

    ``per_mode`` holds the full force of each polarisation and
    ``correction_per_mode`` only its thermal part.  Both are ``None`` when
    the method producing the correction does not resolve polarisations.
    ``orders`` holds the thermal correction by power of ``delta0/a`` when
    known.
    """

    total: float
    per_mode: Optional[ModeSplit]
    t0_part: float
    temperature_correction: float
    correction_per_mode: Optional[ModeSplit]
    orders: Optional[Tuple[float, float, float]] = None
    metadata: dict = field(default_factory=dict, compare=False)

    @classmethod
    def assemble(cls, t0: ModeSplit, corr, orders=None, **metadata) -> "ForceBreakdown":
        """Build from per-mode zero-temperature values and a correction.

        ``corr`` is either a :class:`ModeSplit` or a plain number.
        """
        t0_part = t0.total
        if isinstance(corr, ModeSplit):
            dT = corr.total
            return cls(t0_part + dT, t0 + corr, t0_part, dT, corr, orders, dict(metadata))
        dT = float(corr)
        return cls(t0_part + dT, None, t0_part, dT, None, orders, dict(metadata))

    @property
    def k(self) -> float:
        """Relative thermal correction ``dF_T / F(T=0)``."""
        return self.temperature_correction / self.t0_part


# -- model encoding ----------------------------------------------------------

def _encode(model: MaterialModel, a: float, constants) -> Tuple[int, float]:
    require_well_posed(model)
    if isinstance(model, IdealMetal):
        return K.KIND_IDEAL, 0.0
    if isinstance(model, Plasma):
        return K.KIND_PLASMA, (2.0 * a * model.omega_p / constants.c) ** 2
    if isinstance(model, Dielectric):
        return K.KIND_DIELECTRIC, float(model.eps0)
    raise UnsupportedModelError(f"unknown material model {model!r}")


_MODES = {"par": K.MODE_PAR, "perp": K.MODE_PERP}


# -- quadrature grids --------------------------------------------------------

@lru_cache(maxsize=8)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def _panel_rule(edges: np.ndarray, n: int):
    xg, wg = _gauss_legendre(n)
    lo = edges[:-1, None]
    hi = edges[1:, None]
    nodes = (0.5 * (hi - lo) * xg + 0.5 * (hi + lo)).ravel()
    weights = (0.5 * (hi - lo) * wg).ravel()
    return nodes, weights


_S_EDGES = np.array([0.0, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 0.05, 0.2, 0.5, 1.0,
                     2.0, 3.5, 5.5, 8.0, 11.0, 15.0, 20.0, 26.0, 33.0, 41.0, 50.0, 60.0])


@lru_cache(maxsize=16)
def _s_rule(y_cutoff: float, n: int):
    edges = _S_EDGES.copy()
    if y_cutoff > 60.0:
        edges = np.append(edges, np.arange(70.0, y_cutoff + 10.0, 10.0))
        edges[-1] = y_cutoff
    return _panel_rule(edges, n)


def _x_rule(b_max: float, settings: QuadratureSettings):
    """Panels fine enough for ``cos(b_max x)``, geometrically graded towards x = 0.

    ``H`` behaves like ``x^2 ln x`` near the origin for metals, hence the
    grading inside the first panel.
    """
    x_max = settings.y_cutoff
    h = 0.5 if b_max <= 0 else min(0.5, 2.0 * math.pi / b_max)
    n_panels = int(math.ceil(x_max / h))
    if n_panels > settings.max_subdivisions:
        raise ConvergenceError(
            f"frequency grid needs {n_panels} panels, above max_subdivisions="
            f"{settings.max_subdivisions}",
            achieved=math.nan, requested=settings.rel_tol, terms=n_panels)
    grading = h * np.logspace(-8, -1, 8)
    edges = np.concatenate([[0.0], grading, np.arange(1, n_panels + 1) * h])
    edges[-1] = max(edges[-1], x_max)
    return _panel_rule(edges, settings.nodes_per_panel)


def _inner(x, kind, param, mode, kernel, settings):
    s_nodes, s_weights = _s_rule(settings.y_cutoff, settings.nodes_per_panel)
    return K.inner_integrals(x, s_nodes, s_weights, kind, param, _MODES[mode], kernel)


# -- Poisson representation ----------------------------------------------------

#: harmonics with l t above this are free of exponentially small parts
_ASYMPTOTIC_B = 7.0
#: the power-law expansion of the harmonics converges slowly for dielectrics,
#: so the remainder is fitted only on harmonics with l t above half of this
_FIT_B = 100.0


def _default_harmonics(t: float) -> int:
    return max(16, math.ceil(_FIT_B / t))


def _tail_sum(l: np.ndarray, terms: np.ndarray, t: float, l_last: int):
    """Sum of the harmonics beyond ``l_last`` from a power-law fit.

    Returns the tail and an error estimate from the spread of fits of
    different order.
    """
    b = l * t
    use = b >= max(_ASYMPTOTIC_B, 0.5 * b[-1])
    if use.sum() < 8:
        use = np.zeros_like(use)
        use[-8:] = True
    b_fit = b[use]
    y_fit = terms[use]
    scale_b = b_fit[0]
    tails = []
    for p_max in (6, 7, 8):
        powers = np.arange(3, p_max + 1)
        if len(b_fit) <= len(powers):
            continue
        A = (scale_b / b_fit[:, None]) ** powers[None, :]
        coef, *_ = np.linalg.lstsq(A, y_fit, rcond=None)
        # c_p (b0/b)^p summed over l > l_last
        tail = sum(c * (scale_b / t) ** p * hurwitz_zeta(p, l_last + 1) for c, p in zip(coef, powers))
        tails.append(tail)
    if not tails:
        return 0.0, abs(terms[-1]) * l_last
    tail = tails[-1]
    err = max(abs(tk - tail) for tk in tails) if len(tails) > 1 else abs(tail)
    return float(tail), float(err)


@dataclass(frozen=True)
class _Harmonics:
    f0: float
    fl: np.ndarray
    tail: float
    tail_err: float

    @property
    def thermal(self) -> float:
        return float(np.sum(self.fl)) + self.tail


@lru_cache(maxsize=512)
def _poisson_harmonics(kind, param, mode, kernel, t, n_harm, settings) -> _Harmonics:
    if n_harm == 0:
        x, w = _x_rule(0.0, settings)
        h = _inner(x, kind, param, mode, kernel, settings)
        return _Harmonics(float(w @ h), np.empty(0), 0.0, 0.0)
    x, w = _x_rule(n_harm * t, settings)
    wh = w * _inner(x, kind, param, mode, kernel, settings)
    fl = K.cosine_moments(x, wh, t, n_harm)
    l = np.arange(1, n_harm + 1, dtype=float)
    tail, err = _tail_sum(l, fl, t, n_harm)
    return _Harmonics(float(np.sum(wh)), fl, tail, err)


def _harmonics(point: EvaluationPoint, model, mode, kernel, settings, l_range=None):
    kind, param = _encode(model, point.a, point.constants)
    if point.T == 0:
        return _poisson_harmonics(kind, param, mode, kernel, 0.0, 0, settings)
    t = point.t
    if l_range is not None:
        n_harm = int(l_range)
    elif settings.l_max is not None:
        n_harm = settings.l_max
    else:
        n_harm = _default_harmonics(t)
    h = _poisson_harmonics(kind, param, mode, kernel, t, n_harm, settings)
    if l_range is not None:
        # an explicit range means a plain partial sum
        return _Harmonics(h.f0, h.fl, 0.0, abs(h.tail))
    return h


def _plate_prefactor(point: EvaluationPoint) -> float:
    c = point.constants
    return -c.hbar * c.c / (32.0 * math.pi ** 2 * point.a ** 4)


def _sphere_prefactor(point: EvaluationPoint) -> float:
    c = point.constants
    return c.hbar * c.c * point.require_radius() / (16.0 * math.pi * point.a ** 3)


def _poisson_breakdown(point, model, settings, kernel, prefactor, l_range=None):
    t0, corr, err, used = {}, {}, 0.0, 0
    for mode in ("par", "perp"):
        h = _harmonics(point, model, mode, kernel, settings, l_range)
        t0[mode] = prefactor * h.f0
        corr[mode] = 2.0 * prefactor * h.thermal
        err += 2.0 * abs(prefactor) * h.tail_err
        used = max(used, len(h.fl))
    out = ForceBreakdown.assemble(ModeSplit(t0["par"], t0["perp"]),
                                  ModeSplit(corr["par"], corr["perp"]),
                                  form="poisson", l_max=used, tol_est=err)
    if l_range is None:
        _check_tolerance(out, settings)
    return out


def _check_tolerance(out: ForceBreakdown, settings: QuadratureSettings) -> None:
    err = out.metadata["tol_est"]
    # the tail estimate is conservative; allow two orders above the target
    limit = max(100.0 * settings.rel_tol * abs(out.total), settings.abs_tol)
    if err > limit:
        raise ConvergenceError(
            "harmonic series did not reach the requested accuracy",
            achieved=err / abs(out.total), requested=settings.rel_tol,
            terms=out.metadata.get("l_max", 0))


def force_plates_poisson(point: EvaluationPoint, model: MaterialModel,
                         settings: QuadratureSettings = DEFAULT_SETTINGS,
                         l_range: Optional[int] = None) -> ForceBreakdown:
    """Force per unit area between two plates from the cosine-transform form.

    Parameters
    ----------
    point : EvaluationPoint
        Separation and temperature.  ``T = 0`` keeps only the ``l = 0`` term.
    model : MaterialModel
        Ideal metal, plasma or dielectric.  Drude is refused.
    settings : QuadratureSettings
    l_range : int, optional
        Sum exactly harmonics ``1..l_range`` and no analytic remainder.  The
        size of the omitted remainder is reported as ``tol_est`` instead of
        being checked against ``settings``.

    Returns
    -------
    ForceBreakdown
        Pressure in Pa; ``t0_part`` is the ``l = 0`` term.
    """
    return _poisson_breakdown(point, model, settings, K.KERNEL_PLATE,
                              _plate_prefactor(point), l_range)


def temperature_correction_numeric(point: EvaluationPoint, model: MaterialModel,
                                   settings: QuadratureSettings = DEFAULT_SETTINGS,
                                   mode: str = "both") -> float:
    """Thermal correction to the plate pressure with exact reflection coefficients."""
    mode = normalize_mode(mode, allow_both=True)
    if point.T == 0:
        return 0.0
    res = force_plates_poisson(point, model, settings)
    if mode == "both":
        return res.temperature_correction
    return getattr(res.correction_per_mode, mode)


def t0_force_plates(a: float, model: MaterialModel,
                    settings: QuadratureSettings = DEFAULT_SETTINGS, constants=None) -> ModeSplit:
    """Zero-temperature plate pressure per polarisation (Pa)."""
    point = EvaluationPoint(a, 0.0) if constants is None else EvaluationPoint(a, 0.0, constants=constants)
    return force_plates_poisson(point, model, settings).per_mode


def t0_force_sphere(a: float, R: float, model: MaterialModel,
                    settings: QuadratureSettings = DEFAULT_SETTINGS) -> ModeSplit:
    """Zero-temperature sphere-plate force per polarisation (N)."""
    return force_sphere_plate(EvaluationPoint(a, 0.0, R), model, settings, "poisson").per_mode


# -- Matsubara representation ----------------------------------------------

def _matsubara_sum(point, model, mode, kernel, settings):
    """``H(0) + 2 sum_{l>=1} H(x_l)`` with its truncation estimate."""
    if point.T <= 0:
        raise DomainError("the Matsubara form needs T > 0")
    kind, param = _encode(model, point.a, point.constants)
    t = point.t
    step = 2.0 * math.pi / t
    n = max(int(math.ceil(10.0 / t)), int(math.ceil((settings.y_cutoff + 10.0) / step)), 3)
    x = step * np.arange(n + 1)
    h = _inner(x, kind, param, mode, kernel, settings)
    total = h[0] + 2.0 * np.sum(h[1:])
    # geometric bound on the terms beyond the last, which decay like exp(-x)
    ratio = math.exp(-step)
    err = 2.0 * abs(h[-1]) * ratio / (1.0 - ratio) if n > 0 else 0.0
    return float(total), float(err), n


def force_plates_matsubara(point: EvaluationPoint, model: MaterialModel,
                           settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """Plate pressure (Pa) as a Matsubara sum; requires ``T > 0``."""
    pref = -point.constants.hbar * point.constants.c / (32.0 * math.pi * point.a ** 4 * point.t)
    total = 0.0
    for mode in ("par", "perp"):
        s, _, _ = _matsubara_sum(point, model, mode, K.KERNEL_PLATE, settings)
        total += pref * s
    return total


def free_energy_plates_modes(point: EvaluationPoint, model: MaterialModel,
                             settings: QuadratureSettings = DEFAULT_SETTINGS) -> ModeSplit:
    c = point.constants
    pref = c.k_B * point.T / (16.0 * math.pi * point.a ** 2)
    vals = {}
    for mode in ("par", "perp"):
        s, _, _ = _matsubara_sum(point, model, mode, K.KERNEL_LOG, settings)
        vals[mode] = pref * s
    return ModeSplit(vals["par"], vals["perp"])


def free_energy_plates(point: EvaluationPoint, model: MaterialModel,
                       settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """Free energy per unit area (J/m^2) of two plates at temperature ``T > 0``.

    Computed as a Matsubara sum; the result is negative and vanishes as
    the separation grows.
    """
    return free_energy_plates_modes(point, model, settings).total


def force_sphere_plate(point: EvaluationPoint, model: MaterialModel,
                       settings: QuadratureSettings = DEFAULT_SETTINGS,
                       form: str = "poisson") -> ForceBreakdown:
    """Sphere-plate force (N) in the proximity-force approximation, ``2 pi R E(a)``.

    ``form="poisson"`` separates the zero-temperature part from the
    thermal correction.  ``form="matsubara"`` evaluates the free energy
    directly; its thermal correction is then obtained by subtracting the
    zero-temperature Poisson term.
    """
    point.require_radius()
    form = str(form).lower()
    if form == "poisson":
        return _poisson_breakdown(point, model, settings, K.KERNEL_LOG, _sphere_prefactor(point))
    if form != "matsubara":
        raise ConfigurationError(f"unknown form {form!r}; expected matsubara or poisson")
    energy = free_energy_plates_modes(point, model, settings)
    full = energy.scaled(2.0 * math.pi * point.R)
    cold = point.at_zero_temperature()
    t0 = force_sphere_plate(cold, model, settings, "poisson").per_mode
    corr = ModeSplit(full.par - t0.par, full.perp - t0.perp)
    return ForceBreakdown.assemble(t0, corr, form="matsubara", l_max=0, tol_est=0.0)
