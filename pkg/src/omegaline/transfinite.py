"""Assemble per-truncation solves into hyperreal responses and bound them.

For a terminated cascade, the n-th truncation is an ordinary finite line of
length L_n; solving it at the sample point's distance K_n and at time t_n
yields one representative value v(K_n, t_n).  The map n -> v(K_n, t_n) is
the hyperreal response at the transfinite sample point under the chosen
time profile.

On a distortionless line, every wave front passing a point beyond the
initial constituent line has decayed over a path that grows linearly (or
polynomially, for higher ranks) with n, and the full reflection train is
dominated by the closed envelope

    M * (e^(-alpha*(K_n - k0*dx)) + e^(-alpha*(L_n - l0*dx)))
        / (1 - e^(-2*alpha*(L_1 - l0*dx)))

which tends to 0, so the total response is infinitesimal there.  The
envelope applies the attenuation constant alpha in every exponent and is
evaluated from the full digit polynomials, not their leading terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import ParameterError, RegimeError
from .geometry import (
    OrdinalIndex,
    TerminatedLineSpec,
    digits_poly,
    min_truncation_index,
    sample_distance,
    truncation_length,
    validate_sample,
)
from .hyper import HyperrealSequence
from .params import Regime, reflection_coefficients
from .solver import Direction, enumerate_terms, voltage_response

Number = Union[int, float]


@dataclass(frozen=True)
class TimeProfile:
    """How the sample time t_n grows with the truncation index.

    * ``linear(a, b)``: t_n = a*n + b.  Only finitely many reflections ever
      reach a fixed sample point under such a profile.
    * ``superlinear(a, p)``: t_n = a*n**p with p > 1, so t_n/n -> infinity
      and every reflection eventually arrives.
    * ``table(values, n_start)``: explicit times.
    """

    kind: str
    a: float = 0.0
    b: float = 0.0
    p: float = 1.0
    table_values: tuple[float, ...] = ()
    n_start: int = 1

    @classmethod
    def linear(cls, a: Number, b: Number = 0.0) -> "TimeProfile":
        if a < 0:
            raise ParameterError(f"linear profile slope must be >= 0, got {a}")
        return cls(kind="linear", a=float(a), b=float(b))

    @classmethod
    def superlinear(cls, a: Number, p: Number) -> "TimeProfile":
        if not a > 0:
            raise ParameterError(f"superlinear profile scale must be > 0, got {a}")
        if not p > 1:
            raise ParameterError(f"superlinear profile exponent must be > 1, got {p}")
        return cls(kind="superlinear", a=float(a), p=float(p))

    @classmethod
    def table(cls, values, n_start: int = 1) -> "TimeProfile":
        values = tuple(float(v) for v in values)
        if not values:
            raise ParameterError("profile table must not be empty")
        return cls(kind="table", table_values=values, n_start=int(n_start))

    def __call__(self, n: int) -> float:
        if self.kind == "linear":
            t = self.a * n + self.b
        elif self.kind == "superlinear":
            t = self.a * float(n) ** self.p
        else:
            i = n - self.n_start
            if not 0 <= i < len(self.table_values):
                raise ParameterError(
                    f"profile table covers n={self.n_start}.."
                    f"{self.n_start + len(self.table_values) - 1}, got n={n}"
                )
            t = self.table_values[i]
        if t < 0:
            raise ParameterError(f"time profile produced a negative time t_{n}={t}")
        return t

    @property
    def is_linear(self) -> bool:
        return self.kind == "linear"


@dataclass(frozen=True)
class AssemblyDiagnostics:
    n: int
    t_n: float
    length: float
    distance: float
    forward_count: int
    backward_count: int
    value: float


@dataclass(frozen=True)
class ResponseAssembly:
    """Hyperreal response at one sample point: spec, index, profile, sequence."""

    spec: TerminatedLineSpec
    idx: OrdinalIndex
    profile: TimeProfile
    seq: HyperrealSequence

    @property
    def n_min(self) -> int:
        return self.seq.n_min

    def diagnostics(self, n: int) -> AssemblyDiagnostics:
        L = float(truncation_length(self.spec, n))
        K = float(sample_distance(self.idx, self.spec, n))
        t = self.profile(n)
        terms = enumerate_terms(L, K, t, self.spec.params, self.spec.R_s, self.spec.R_r)
        fwd = sum(1 for term in terms if term.direction is Direction.FORWARD)
        return AssemblyDiagnostics(
            n=n,
            t_n=t,
            length=L,
            distance=K,
            forward_count=fwd,
            backward_count=len(terms) - fwd,
            value=self.seq(n),
        )


def assemble_response(
    spec: TerminatedLineSpec, idx: OrdinalIndex, profile: TimeProfile
) -> ResponseAssembly:
    """Wire n -> v(K_n, t_n) as a hyperreal sequence (traveling-wave regimes only)."""
    if spec.params.regime is Regime.GENERAL:
        raise RegimeError(
            "hyperreal response assembly needs a lossless or distortionless line"
        )
    if not validate_sample(idx, spec):
        raise ParameterError(
            f"sample {idx.digits} lies beyond the termination {spec.term_digits}"
        )
    n_min = min_truncation_index(idx, spec)

    def generator(n: int) -> float:
        L = float(truncation_length(spec, n))
        K = float(sample_distance(idx, spec, n))
        return voltage_response(L, K, profile(n), spec.params, spec.R_s, spec.R_r, spec.source)

    label = f"v at sample {idx.digits} of line {spec.term_digits}, profile {profile.kind}"
    return ResponseAssembly(
        spec=spec,
        idx=idx,
        profile=profile,
        seq=HyperrealSequence(generator=generator, n_min=n_min, label=label),
    )


def beyond_initial_line(idx: OrdinalIndex) -> bool:
    """True when some digit above the lowest is nonzero: the point lies past
    the initial constituent line, so its distance K_n grows without bound."""
    return any(d > 0 for d in idx.digits[1:])


def distortionless_bound(spec: TerminatedLineSpec, idx: OrdinalIndex, n: int) -> float:
    """Decay envelope dominating |v(K_n, t_n)| for every time profile.

    Valid for distortionless lines at sample points beyond the initial
    constituent line.  Monotone decreasing in n and tending to 0, which is
    what makes the summed reflection train infinitesimal there.
    """
    if spec.params.regime is not Regime.DISTORTIONLESS:
        raise RegimeError("the decay envelope needs a distortionless line (alpha > 0)")
    if not validate_sample(idx, spec):
        raise ParameterError(
            f"sample {idx.digits} lies beyond the termination {spec.term_digits}"
        )
    if not beyond_initial_line(idx):
        raise ParameterError(
            "the decay envelope applies only beyond the initial constituent line "
            "(some digit above the lowest must be >= 1)"
        )
    if n < 1:
        raise ParameterError(f"truncation index must be >= 1, got {n}")
    alpha = spec.params.alpha
    dx = float(spec.delta_x)
    M = spec.source.bound
    k = idx.digits
    l = spec.term_digits
    k_path = (digits_poly(k, n) - k[0]) * dx
    l_path = (digits_poly(l, n) - l[0]) * dx
    round_trip_1 = sum(l[1:]) * dx
    denom = 1.0 - math.exp(-2.0 * alpha * round_trip_1)
    return M * (math.exp(-alpha * k_path) + math.exp(-alpha * l_path)) / denom


@dataclass(frozen=True)
class RegimeReport:
    """Arrival accounting for one truncation.

    ``all_reflections_arrived`` is meaningful when the reflection train
    truncates (a zero reflection coefficient kills it exactly, or the
    per-round-trip magnitude ratio < 1 drives it below the smallest float);
    for a lossless short/open train it never truncates and
    ``unbounded_terms`` is set instead, with counts limited by t_n.
    """

    n: int
    t_n: float
    length: float
    distance: float
    forward_count: int
    backward_count: int
    first_arrival: float
    series_truncates: bool
    unbounded_terms: bool
    all_reflections_arrived: bool | None


#: Smallest positive double; term magnitudes below this are numerically zero.
_TINY = 5e-324


def regime_report(
    spec: TerminatedLineSpec, idx: OrdinalIndex, profile: TimeProfile, n: int
) -> RegimeReport:
    """Count arrivals at truncation n and say whether the train is exhausted."""
    L = float(truncation_length(spec, n))
    K = float(sample_distance(idx, spec, n))
    t = profile(n)
    params = spec.params
    terms = enumerate_terms(L, K, t, params, spec.R_s, spec.R_r)
    fwd = sum(1 for term in terms if term.direction is Direction.FORWARD)
    bwd = len(terms) - fwd

    pair = reflection_coefficients(spec.R_s, spec.R_r, params.z0_real)
    ratio = abs(pair.r_s * pair.r_r) * math.exp(-2.0 * params.alpha * L)
    truncates = pair.r_s == 0.0 or pair.r_r == 0.0
    unbounded = not truncates and ratio >= 1.0
    all_arrived: bool | None
    if truncates:
        # only the m = 0 pair can be nonzero; the backward front needs r_r != 0
        last_delay = K / params.u
        if pair.r_r != 0.0:
            last_delay = (2.0 * L - K) / params.u
        all_arrived = t >= last_delay
    elif unbounded:
        all_arrived = None
    else:
        trips = math.ceil(math.log(_TINY) / math.log(ratio))
        # the later of the two round-trip-m fronts is the backward one
        last_delay = (2.0 * (trips + 1) * L - K) / params.u
        all_arrived = t >= last_delay
    return RegimeReport(
        n=n,
        t_n=t,
        length=L,
        distance=K,
        forward_count=fwd,
        backward_count=bwd,
        first_arrival=K / params.u,
        series_truncates=truncates,
        unbounded_terms=unbounded,
        all_reflections_arrived=all_arrived,
    )


def open_line_steady_state(spec: TerminatedLineSpec) -> tuple[float, float] | None:
    """Steady state of a lossless step-driven line with an open receiving end.

    Returns (geometric_sum, settled_voltage): the raw reflected-train sum
    2*amplitude/(1 - r_s) in source units, and the same number scaled by the
    input divider Z0/(Z0+R_s), which is the voltage the line actually
    settles to.  The two differ exactly by the divider; reports print both.
    None when the shape does not apply (not lossless, not a step, not open).
    """
    params = spec.params
    if params.regime is not Regime.LOSSLESS:
        return None
    if spec.source.kind not in ("unit_step", "scaled_step"):
        return None
    z0 = params.z0_real
    pair = reflection_coefficients(spec.R_s, spec.R_r, z0)
    if pair.r_r != 1.0:
        return None
    divider = z0 / (z0 + float(spec.R_s))
    geometric = 2.0 * spec.source.amplitude / (1.0 - pair.r_s)
    return geometric, divider * geometric
