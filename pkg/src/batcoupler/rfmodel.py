"""Quasi-static model of an edge-coupled microstrip pair.

The pair is reduced to two equivalent single microstrips, one per mode,
whose width-to-height ratios are ``whse`` (even mode) and ``whso`` (odd
mode). Each mode impedance is twice the impedance of its equivalent single
line, and the coupling coefficient follows from the two mode impedances.

Only ratios enter the chain, so W, S and H may be given in any one unit.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from batcoupler.errors import DomainError, InvalidInputError, ValidityError

EPS_R_MIN = 1.0
EPS_R_MAX = 6.0

# free-space wave impedance used by the branched closed form
ETA0 = 120.0 * math.pi

Z0_MODELS = ("wheeler", "hammerstad")
DEFAULT_Z0_MODEL = "wheeler"


def _check_eps_r(eps_r: float) -> None:
    if not EPS_R_MIN < eps_r < EPS_R_MAX:
        raise ValidityError(
            f"eps_r={eps_r} outside the model's validity range "
            f"({EPS_R_MIN:g} < eps_r < {EPS_R_MAX:g})"
        )


@dataclass(frozen=True)
class CouplerGeometry:
    """Strip width ``w``, gap ``s``, substrate height ``h_sub`` and ``eps_r``."""

    w: float
    s: float
    h_sub: float
    eps_r: float

    def __post_init__(self):
        for name in ("w", "s", "h_sub"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidInputError(f"{name} must be positive and finite, got {value}")
        _check_eps_r(self.eps_r)

    @property
    def w_over_h(self) -> float:
        return self.w / self.h_sub

    @property
    def s_over_h(self) -> float:
        return self.s / self.h_sub

    def scaled(self, k: float) -> "CouplerGeometry":
        return CouplerGeometry(k * self.w, k * self.s, k * self.h_sub, self.eps_r)


@dataclass(frozen=True)
class CouplerAnalysis:
    w_over_h: float
    s_over_h: float
    g: float
    h_param: float
    whse: float
    whso: float
    zoe: float
    zoo: float
    coupling: float

    def as_dict(self) -> dict:
        return asdict(self)


def g_param(s_over_h: float) -> float:
    if not s_over_h > 0:
        raise InvalidInputError(f"s/H must be positive, got {s_over_h}")
    return math.cosh(0.5 * math.pi * s_over_h)


def h_param(w_over_h: float, s_over_h: float) -> float:
    if not (w_over_h > 0 and s_over_h > 0):
        raise InvalidInputError(f"w/H and s/H must be positive, got {w_over_h}, {s_over_h}")
    return math.cosh(math.pi * w_over_h + 0.5 * math.pi * s_over_h)


def _acosh(arg: float, what: str) -> float:
    # one ulp of slack: arguments that are exactly 1 analytically may round below
    if arg < 1.0:
        if arg > 1.0 - 4 * math.ulp(1.0):
            return 0.0
        raise DomainError(f"{what}: acosh argument {arg} < 1")
    return math.acosh(arg)


def whse(g: float, h: float) -> float:
    """Even-mode equivalent single-line ratio."""
    if not (g >= 1 and h >= g):
        raise DomainError(f"need h >= g >= 1, got g={g}, h={h}")
    return (2.0 / math.pi) * _acosh((2.0 * h - g + 1.0) / (g + 1.0), "whse")


def whso(g: float, h: float, w_over_h: float, s_over_h: float, eps_r: float) -> float:
    """Odd-mode equivalent single-line ratio.

    Only valid for ``eps_r < 6``; ``g == 1`` (zero gap) is singular.
    """
    _check_eps_r(eps_r)
    if not g > 1:
        raise DomainError(f"odd-mode ratio is singular at g={g} (zero spacing)")
    if not h >= g:
        raise DomainError(f"need h >= g, got g={g}, h={h}")
    if not (w_over_h > 0 and s_over_h > 0):
        raise InvalidInputError(f"w/H and s/H must be positive, got {w_over_h}, {s_over_h}")
    first = (2.0 / math.pi) * _acosh((2.0 * h - g - 1.0) / (g - 1.0), "whso")
    second = 4.0 / (math.pi * (1.0 + eps_r / 2.0)) * math.acosh(1.0 + 2.0 * w_over_h / s_over_h)
    return first + second


def z0_wheeler(ratio: float, eps_r: float) -> float:
    """Wheeler's single-expression microstrip impedance (zero strip thickness)."""
    x = 4.0 / ratio
    k = (14.0 + 8.0 / eps_r) / 11.0 * x
    inner = x * (k + math.sqrt(k * k + math.pi**2 * (1.0 + 1.0 / eps_r) / 2.0))
    return 42.4 / math.sqrt(eps_r + 1.0) * math.log(1.0 + inner)


def eps_eff_hammerstad(ratio: float, eps_r: float) -> float:
    base = (1.0 + 12.0 / ratio) ** -0.5
    if ratio < 1.0:
        base += 0.04 * (1.0 - ratio) ** 2
    return (eps_r + 1.0) / 2.0 + (eps_r - 1.0) / 2.0 * base


def z0_hammerstad(ratio: float, eps_r: float) -> float:
    """Branched narrow/wide-strip closed forms, switching at ``ratio == 1``."""
    ee = eps_eff_hammerstad(ratio, eps_r)
    if ratio >= 1.0:
        return ETA0 / (math.sqrt(ee) * (ratio + 1.393 + 0.667 * math.log(ratio + 1.444)))
    return 60.0 / math.sqrt(ee) * math.log(8.0 / ratio + ratio / 4.0)


_Z0 = {"wheeler": z0_wheeler, "hammerstad": z0_hammerstad}


def z0_single(ratio: float, eps_r: float, model: str = DEFAULT_Z0_MODEL) -> float:
    """Characteristic impedance (ohms) of one microstrip with ``w/h = ratio``."""
    if not (math.isfinite(ratio) and ratio > 0):
        raise InvalidInputError(f"shape ratio must be positive, got {ratio}")
    if not eps_r > 1:
        raise ValidityError(f"eps_r must exceed 1, got {eps_r}")
    try:
        return _Z0[model](ratio, eps_r)
    except KeyError:
        raise InvalidInputError(
            f"unknown impedance model {model!r}; choose from {', '.join(Z0_MODELS)}"
        ) from None


def _ratios(geometry: CouplerGeometry) -> tuple[float, float, float, float, float, float]:
    u, v = geometry.w_over_h, geometry.s_over_h
    g = g_param(v)
    h = h_param(u, v)
    return u, v, g, h, whse(g, h), whso(g, h, u, v, geometry.eps_r)


def even_odd_impedances(
    geometry: CouplerGeometry, model: str = DEFAULT_Z0_MODEL
) -> tuple[float, float]:
    *_, se, so = _ratios(geometry)
    return 2.0 * z0_single(se, geometry.eps_r, model), 2.0 * z0_single(so, geometry.eps_r, model)


def coupling(zoe: float, zoo: float) -> float:
    if not (zoe > 0 and zoo > 0):
        raise InvalidInputError(f"impedances must be positive, got {zoe}, {zoo}")
    return (zoe - zoo) / (zoe + zoo)


def analyze(geometry: CouplerGeometry, model: str = DEFAULT_Z0_MODEL) -> CouplerAnalysis:
    u, v, g, h, se, so = _ratios(geometry)
    zoe = 2.0 * z0_single(se, geometry.eps_r, model)
    zoo = 2.0 * z0_single(so, geometry.eps_r, model)
    return CouplerAnalysis(
        w_over_h=u, s_over_h=v, g=g, h_param=h, whse=se, whso=so,
        zoe=zoe, zoo=zoo, coupling=coupling(zoe, zoo),
    )
