"""Exact bounce-diagram response of one finite line, plus Laplace-domain checks.

A finite line of length L driven through R_s and terminated in R_r responds
with an alternating train of forward and backward wave fronts.  The m-th
forward front passes the point x after a path 2mL + x, the m-th backward
front after 2(m+1)L - x; each carries the reflection product picked up on
the way (r_s^m r_r^m forward, r_s^m r_r^(m+1) backward) and, on a
distortionless line, the damping e^(-alpha * path).  At any finite time only
finitely many fronts have arrived, so the time-domain response is an exact
finite sum -- no series tolerance anywhere.

The s-domain mirror of the same train is a geometric series with ratio
q = r_s r_r e^(-2 gamma L); it converges whenever |q| < 1 and then sums to

    V(x,s) = Z0/(Z0+R_s) W(s) (e^(-gamma x) + r_r e^(-2 gamma L) e^(gamma x)) / (1 - q).

The s-domain forms hold in every regime; the traveling-wave time-domain
form only for lossless/distortionless lines.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .errors import ConvergenceError, ParameterError, RegimeError
from .params import LineParams, Regime, laplace_gamma_z0, reflection_coefficients
from .source import SourceSpec

Number = Union[int, float]


class Direction(Enum):
    FORWARD = "FORWARD"
    BACKWARD = "BACKWARD"


@dataclass(frozen=True)
class ReflectionTerm:
    """One wave front of the bounce diagram.

    ``delay`` is the arrival time at x, ``attenuation`` the accumulated
    damping over the path (exactly 1 on a lossless line), ``coefficient``
    the product of reflection coefficients, and ``divider`` the common
    input factor Z0/(Z0+R_s).
    """

    m: int
    direction: Direction
    delay: float
    attenuation: float
    coefficient: float
    divider: float


def _traveling_wave_setup(L, x, params: LineParams, R_s, R_r):
    if params.regime is Regime.GENERAL:
        raise RegimeError(
            "time-domain traveling-wave evaluation needs a lossless or "
            "distortionless line; general lines are served in the s-domain only"
        )
    L = float(L)
    x = float(x)
    if L <= 0:
        raise ParameterError(f"line length must be positive, got {L}")
    if not 0 <= x <= L:
        raise ParameterError(f"observation point must satisfy 0 <= x <= L, got x={x}")
    z0 = params.z0_real
    pair = reflection_coefficients(R_s, R_r, z0)
    divider = z0 / (z0 + float(R_s))
    return L, x, params.u, params.alpha, pair.r_s, pair.r_r, divider


def enumerate_terms(
    L: Number, x: Number, t: Number, params: LineParams, R_s: Number, R_r: Number
) -> list[ReflectionTerm]:
    """All wave fronts with arrival delay <= t, ordered by delay.

    Coincident forward/backward arrivals (x = 0 or x = L) keep the forward
    term first.  For t < x/u the list is empty: nothing has arrived.
    """
    L, x, u, alpha, r_s, r_r, divider = _traveling_wave_setup(L, x, params, R_s, R_r)
    t = float(t)
    terms: list[ReflectionTerm] = []
    m = 0
    while (2 * m * L + x) / u <= t:
        path = 2 * m * L + x
        terms.append(
            ReflectionTerm(
                m=m,
                direction=Direction.FORWARD,
                delay=path / u,
                attenuation=math.exp(-alpha * path),
                coefficient=(r_s * r_r) ** m,
                divider=divider,
            )
        )
        m += 1
    m = 0
    while (2 * (m + 1) * L - x) / u <= t:
        path = 2 * (m + 1) * L - x
        terms.append(
            ReflectionTerm(
                m=m,
                direction=Direction.BACKWARD,
                delay=path / u,
                attenuation=math.exp(-alpha * path),
                coefficient=r_s**m * r_r ** (m + 1),
                divider=divider,
            )
        )
        m += 1
    terms.sort(key=lambda term: (term.delay, 0 if term.direction is Direction.FORWARD else 1))
    return terms


def voltage_response(
    L: Number,
    x: Number,
    t: Number,
    params: LineParams,
    R_s: Number,
    R_r: Number,
    source: SourceSpec,
) -> float:
    """v(x, t): the divider times the finite sum of arrived wave fronts.

    Equals divider * sum(coefficient * attenuation * w(t - delay)) over
    exactly the terms of :func:`enumerate_terms`; the loop below keeps the
    same recurrences without building term objects, because response
    assembly evaluates this over whole grids of n.
    """
    L, x, u, alpha, r_s, r_r, divider = _traveling_wave_setup(L, x, params, R_s, R_r)
    t = float(t)
    if t < x / u:
        return 0.0
    # coefficient*attenuation advances by the same factor each round trip
    step = r_s * r_r * math.exp(-2.0 * alpha * L)
    fwd_gain = math.exp(-alpha * x)
    bwd_gain = r_r * math.exp(-alpha * (2.0 * L - x))
    contributions: list[float] = []
    gain = 1.0
    m = 0
    while True:
        fwd_delay = (2 * m * L + x) / u
        bwd_delay = (2 * (m + 1) * L - x) / u
        if fwd_delay > t and bwd_delay > t:
            break
        if fwd_delay <= t:
            contributions.append(gain * fwd_gain * source(t - fwd_delay))
        if bwd_delay <= t:
            contributions.append(gain * bwd_gain * source(t - bwd_delay))
        gain *= step
        m += 1
    if not contributions:
        return 0.0
    return divider * math.fsum(contributions)


def _laplace_setup(params: LineParams, s: complex, R_s, R_r):
    gamma, z0 = laplace_gamma_z0(params, s)
    R_s = float(R_s)
    R_r = float(R_r)
    if R_s < 0 or math.isinf(R_s):
        raise ParameterError("sending-end resistance must satisfy 0 <= R_s < inf")
    if R_r < 0:
        raise ParameterError("receiving-end resistance must satisfy 0 <= R_r <= inf")
    r_s = (R_s - z0) / (R_s + z0)
    r_r = 1.0 + 0.0j if math.isinf(R_r) else (R_r - z0) / (R_r + z0)
    divider = z0 / (z0 + R_s)
    return gamma, z0, r_s, r_r, divider


def convergence_ratio(
    L: Number, s: complex, params: LineParams, R_s: Number, R_r: Number
) -> float:
    """|r_s r_r e^(-2 gamma L)|: the geometric ratio of the reflection series."""
    L = float(L)
    if L <= 0:
        raise ParameterError(f"line length must be positive, got {L}")
    gamma, _, r_s, r_r, _ = _laplace_setup(params, s, R_s, R_r)
    return abs(r_s * r_r * cmath.exp(-2.0 * gamma * L))


def laplace_partial_sum(
    L: Number,
    x: Number,
    s: complex,
    params: LineParams,
    R_s: Number,
    R_r: Number,
    w_s: complex,
    m_max: int,
) -> tuple[complex, float]:
    """Reflection series truncated after round trip m_max, any regime.

    ``w_s`` is the source transform W(s) evaluated at this s.  Returns the
    partial sum and the magnitude of the last-added forward/backward pair.
    """
    L = float(L)
    x = float(x)
    if L <= 0:
        raise ParameterError(f"line length must be positive, got {L}")
    if not 0 <= x <= L:
        raise ParameterError(f"observation point must satisfy 0 <= x <= L, got x={x}")
    if m_max < 0:
        raise ParameterError(f"m_max must be >= 0, got {m_max}")
    gamma, _, r_s, r_r, divider = _laplace_setup(params, s, R_s, R_r)
    pair_base = cmath.exp(-gamma * x) + r_r * cmath.exp(-gamma * (2.0 * L - x))
    q = r_s * r_r * cmath.exp(-2.0 * gamma * L)
    total = 0.0 + 0.0j
    gain = 1.0 + 0.0j
    last_pair = 0.0 + 0.0j
    for _ in range(m_max + 1):
        last_pair = gain * pair_base
        total += last_pair
        gain *= q
    scale = divider * complex(w_s)
    return scale * total, abs(scale * last_pair)


def laplace_closed_form(
    L: Number,
    x: Number,
    s: complex,
    params: LineParams,
    R_s: Number,
    R_r: Number,
    w_s: complex,
) -> complex:
    """Summed reflection series; requires |r_s r_r e^(-2 gamma L)| < 1."""
    L = float(L)
    x = float(x)
    if L <= 0:
        raise ParameterError(f"line length must be positive, got {L}")
    if not 0 <= x <= L:
        raise ParameterError(f"observation point must satisfy 0 <= x <= L, got x={x}")
    gamma, _, r_s, r_r, divider = _laplace_setup(params, s, R_s, R_r)
    decay = cmath.exp(-2.0 * gamma * L)
    q = r_s * r_r * decay
    if abs(q) >= 1.0:
        raise ConvergenceError(
            f"reflection series diverges: |r_s r_r e^(-2 gamma L)| = {abs(q)} >= 1"
        )
    numerator = cmath.exp(-gamma * x) + r_r * decay * cmath.exp(gamma * x)
    return divider * complex(w_s) * numerator / (1.0 - q)
