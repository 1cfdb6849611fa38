"""Sending-end source waveforms: causal, bounded, piecewise constant."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Union

from .errors import DomainError, ParameterError

Number = Union[int, float]


@dataclass(frozen=True)
class SourceSpec:
    """A causal source w(t) with w(t) = 0 for t < 0 and sup|w| <= bound.

    Kinds:
      * ``unit_step``   -- w(t) = 1 for t >= 0
      * ``scaled_step`` -- w(t) = amplitude for t >= 0
      * ``table``       -- piecewise constant, *left-continuous*: the level
        listed at breakpoint tau takes effect for t in (tau, next tau], and
        the final level holds forever after.  In particular w(times[0]) = 0.

    Step sources keep the closed-at-zero convention w(0) = amplitude, so a
    wave front contributes from the exact instant it arrives.
    """

    kind: str
    amplitude: float = 1.0
    times: tuple[float, ...] = ()
    levels: tuple[float, ...] = ()
    bound: float = field(default=1.0)

    @classmethod
    def unit_step(cls) -> "SourceSpec":
        return cls(kind="unit_step", amplitude=1.0, bound=1.0)

    @classmethod
    def scaled_step(cls, amplitude: Number) -> "SourceSpec":
        amplitude = float(amplitude)
        if amplitude == 0:
            raise ParameterError("step amplitude must be nonzero")
        return cls(kind="scaled_step", amplitude=amplitude, bound=abs(amplitude))

    @classmethod
    def table(
        cls,
        times: tuple[float, ...],
        levels: tuple[float, ...],
        bound: float | None = None,
    ) -> "SourceSpec":
        times = tuple(float(t) for t in times)
        levels = tuple(float(v) for v in levels)
        if len(times) != len(levels) or not times:
            raise ParameterError("table needs equally many times and levels, at least one")
        if times[0] < 0:
            raise ParameterError("table breakpoints must be nonnegative (causal source)")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ParameterError("table breakpoints must be strictly increasing")
        peak = max(abs(v) for v in levels)
        if bound is None:
            bound = peak
        elif bound < peak:
            raise ParameterError(f"declared bound {bound} is below the table peak {peak}")
        return cls(kind="table", times=times, levels=levels, bound=float(bound))

    def __call__(self, t: float) -> float:
        if t < 0:
            return 0.0
        if self.kind == "unit_step":
            return 1.0
        if self.kind == "scaled_step":
            return self.amplitude
        # left-continuous lookup: level i is active on (times[i], times[i+1]]
        if t <= self.times[0]:
            return 0.0
        for tau, level in zip(reversed(self.times), reversed(self.levels)):
            if t > tau:
                return level
        return 0.0

    def laplace(self, s: complex) -> complex:
        """Laplace transform W(s) for Re s > 0."""
        s = complex(s)
        if not s.real > 0:
            raise DomainError(f"transform variable must satisfy Re s > 0, got s={s}")
        if self.kind in ("unit_step", "scaled_step"):
            return self.amplitude / s
        total = 0.0 + 0.0j
        for i, level in enumerate(self.levels[:-1]):
            total += level * (cmath.exp(-s * self.times[i]) - cmath.exp(-s * self.times[i + 1]))
        total += self.levels[-1] * cmath.exp(-s * self.times[-1])
        return total / s
