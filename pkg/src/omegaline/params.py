"""Per-unit-length electrical constants and derived propagation quantities.

A uniform line is described by its series resistance ``r``, series
inductance ``l``, shunt conductance ``g`` and shunt capacitance ``c``, all
per unit length.  From these follow

    delta = (r/l + g/c) / 2        sigma = (r/l - g/c) / 2
    u     = 1 / sqrt(l c)          alpha = sqrt(l c) * delta

``u`` is the propagation speed and ``alpha`` the attenuation constant of
the undistorted traveling wave that exists when ``sigma == 0``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import DomainError, ParameterError

Number = Union[int, float, Fraction]

#: Relative tolerance used to decide sigma == 0 when inputs are floats.
SIGMA_RTOL = 1e-12


class Regime(Enum):
    """Which closed-form solution path a line supports."""

    LOSSLESS = "LOSSLESS"
    DISTORTIONLESS = "DISTORTIONLESS"
    GENERAL = "GENERAL"


def _exact(*values: Number) -> bool:
    return all(isinstance(v, Rational) for v in values)


@dataclass(frozen=True)
class LineParams:
    """Per-unit-length constants; ``l`` and ``c`` must be positive.

    Values may be ints, floats or ``Fraction``s.  Rational inputs make the
    distortionless test (``r*c == g*l``) exact; float inputs fall back to a
    relative tolerance of ``SIGMA_RTOL``.  A line that is only *nearly*
    distortionless is classified GENERAL, never promoted.
    """

    r: Number
    l: Number
    g: Number
    c: Number

    def __post_init__(self):
        if not (self.l > 0 and self.c > 0):
            raise ParameterError("inductance and capacitance must be positive")
        if self.r < 0 or self.g < 0:
            raise ParameterError("resistance and conductance must be nonnegative")

    @property
    def regime(self) -> Regime:
        if self.r == 0 and self.g == 0:
            return Regime.LOSSLESS
        if self.r > 0 and self.g > 0:
            if _exact(self.r, self.l, self.g, self.c):
                balanced = Fraction(self.r) * Fraction(self.c) == Fraction(self.g) * Fraction(self.l)
            else:
                rc = float(self.r) * float(self.c)
                gl = float(self.g) * float(self.l)
                balanced = abs(rc - gl) <= SIGMA_RTOL * max(abs(rc), abs(gl))
            if balanced:
                return Regime.DISTORTIONLESS
        return Regime.GENERAL

    @property
    def delta(self) -> float:
        return 0.5 * (float(self.r) / float(self.l) + float(self.g) / float(self.c))

    @property
    def sigma(self) -> float:
        return 0.5 * (float(self.r) / float(self.l) - float(self.g) / float(self.c))

    @property
    def u(self) -> float:
        """Propagation speed 1/sqrt(lc)."""
        return 1.0 / math.sqrt(float(self.l) * float(self.c))

    @property
    def alpha(self) -> float:
        """Attenuation constant sqrt(lc)*delta."""
        return math.sqrt(float(self.l) * float(self.c)) * self.delta

    @property
    def z0_real(self) -> float | None:
        """Characteristic impedance sqrt(l/c) when it is a real constant.

        Only the lossless and distortionless regimes have a
        frequency-independent real Z0; otherwise None (use
        :func:`laplace_gamma_z0` for the s-dependent value).
        """
        if self.regime is Regime.GENERAL:
            return None
        return math.sqrt(float(self.l) / float(self.c))


@dataclass(frozen=True)
class DerivedQuantities:
    delta: float
    sigma: float
    alpha: float
    u: float
    z0: float | None
    regime: Regime


def derived_quantities(params: LineParams) -> DerivedQuantities:
    """Bundle delta, sigma, alpha, u, the real Z0 (if any) and the regime tag."""
    return DerivedQuantities(
        delta=params.delta,
        sigma=params.sigma,
        alpha=params.alpha,
        u=params.u,
        z0=params.z0_real,
        regime=params.regime,
    )


@dataclass(frozen=True)
class ReflectionPair:
    """Sending-end and receiving-end reflection coefficients.

    r_s lies in [-1, 1) because the sending resistance must be finite;
    r_r reaches 1 exactly for an open receiving end.
    """

    r_s: float
    r_r: float


def reflection_coefficients(R_s: Number, R_r: Number, z0: float) -> ReflectionPair:
    """(R - Z0)/(R + Z0) at each end; R_r may be infinite (open end -> +1)."""
    if not z0 > 0 or math.isinf(z0):
        raise ParameterError("characteristic impedance must be a positive real")
    R_s = float(R_s)
    R_r = float(R_r)
    if R_s < 0 or math.isinf(R_s):
        raise ParameterError("sending-end resistance must satisfy 0 <= R_s < inf")
    if R_r < 0:
        raise ParameterError("receiving-end resistance must satisfy 0 <= R_r <= inf")
    r_s = (R_s - z0) / (R_s + z0)
    r_r = 1.0 if math.isinf(R_r) else (R_r - z0) / (R_r + z0)
    return ReflectionPair(r_s=r_s, r_r=r_r)


def laplace_gamma_z0(params: LineParams, s: complex) -> tuple[complex, complex]:
    """Propagation constant and characteristic impedance at complex s.

    gamma = sqrt((l s + r)(c s + g)) and Z0 = sqrt((l s + r)/(c s + g)),
    both on the principal branch (Re >= 0), which matches decaying
    forward waves e^(-gamma x).  Requires Re s > 0.
    """
    s = complex(s)
    if not s.real > 0:
        raise DomainError(f"transform variable must satisfy Re s > 0, got s={s}")
    zs = float(params.l) * s + float(params.r)
    ys = float(params.c) * s + float(params.g)
    gamma = cmath.sqrt(zs * ys)
    z0 = cmath.sqrt(zs / ys)
    return gamma, z0
