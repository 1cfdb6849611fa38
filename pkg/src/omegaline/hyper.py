"""Hyperreals as tail-defined real sequences over the truncation index.

A hyperreal value is represented by a generator n -> real, defined for all
n >= n_min; two representatives that agree for all large n describe the
same hyperreal.  The classifier inspects a finite window of the sequence
and reports the strongest verdict the window supports:

    ZERO_TAIL        every window value is exactly 0
    INFINITESIMAL    the window decays toward 0 (below eps, or with a
                     validated geometric/power-law envelope)
    APPRECIABLE      the window converges to a limit of magnitude >= eps
    UNLIMITED        sustained monotone growth
    FILTER_AMBIGUOUS values recur around two or more separated points, so
                     the value depends on the choice of ultrafilter; the
                     classifier reports the candidate cluster values and
                     never picks one
    INCONCLUSIVE     none of the above patterns is established

A finite window is a numerical surrogate for a genuine tail property: the
verdict is reliable for eventually monotone or eventually periodic
behavior, and INCONCLUSIVE is the honest default otherwise.  Changing
finitely many terms below the window never changes the verdict.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Union

from .errors import ParameterError

#: Default classification window and resolution.  The window starts late
#: enough to sit past typical materialization indices and spans enough
#: points to expose the geometric decay rates e^(-alpha*digit*n*dx) arising
#: at physically plausible attenuation-per-sample values.
DEFAULT_WINDOW = (32, 96)
DEFAULT_EPS = 1e-9

Number = Union[int, float]


class VerdictKind(Enum):
    ZERO_TAIL = "ZERO_TAIL"
    INFINITESIMAL = "INFINITESIMAL"
    APPRECIABLE = "APPRECIABLE"
    UNLIMITED = "UNLIMITED"
    FILTER_AMBIGUOUS = "FILTER_AMBIGUOUS"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class ClassificationVerdict:
    kind: VerdictKind
    window: tuple[int, int]
    eps: float
    standard_part: float | None = None
    error_bar: float | None = None
    clusters: tuple[float, ...] | None = None
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind is VerdictKind.APPRECIABLE:
            if self.standard_part is None or self.standard_part == 0 or self.error_bar is None:
                raise ParameterError("APPRECIABLE needs a nonzero standard part and an error bar")
        if self.kind is VerdictKind.FILTER_AMBIGUOUS:
            if self.clusters is None or len(self.clusters) < 2:
                raise ParameterError("FILTER_AMBIGUOUS needs at least two cluster values")


@dataclass(frozen=True)
class HyperrealSequence:
    """Representative sequence of a hyperreal, total on n >= n_min."""

    generator: Callable[[int], float]
    n_min: int = 1
    label: str = ""

    def __call__(self, n: int) -> float:
        if n < self.n_min:
            raise ParameterError(f"sequence '{self.label}' starts at n={self.n_min}, got n={n}")
        return float(self.generator(n))

    def values(self, window: tuple[int, int]) -> list[float]:
        return [self(n) for n in range(window[0], window[1] + 1)]

    @classmethod
    def constant(cls, value: Number) -> "HyperrealSequence":
        v = float(value)
        return cls(generator=lambda n: v, n_min=1, label=f"constant {v}")

    def _lift(self, other) -> "HyperrealSequence":
        if isinstance(other, HyperrealSequence):
            return other
        if isinstance(other, (int, float)):
            return HyperrealSequence.constant(other)
        return NotImplemented

    def _combine(self, other, op, symbol: str) -> "HyperrealSequence":
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        n_min = max(self.n_min, other.n_min)
        a, b = self, other
        return HyperrealSequence(
            generator=lambda n: op(a(n), b(n)),
            n_min=n_min,
            label=f"({a.label}) {symbol} ({b.label})",
        )

    def __add__(self, other):
        return self._combine(other, lambda x, y: x + y, "+")

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda x, y: x - y, "-")

    def __mul__(self, other):
        return self._combine(other, lambda x, y: x * y, "*")

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        # probe the default-size tail window up front so a zero denominator
        # fails loudly with the offending indices, not deep inside classify
        n_min = max(self.n_min, other.n_min)
        start = max(n_min, DEFAULT_WINDOW[0])
        zeros = [
            n
            for n in range(start, start + DEFAULT_WINDOW[1] - DEFAULT_WINDOW[0] + 1)
            if other(n) == 0.0
        ]
        if zeros:
            raise ParameterError(
                f"division by a sequence with zeros in its tail window at n={zeros[:8]}"
            )
        return self._combine(other, lambda x, y: x / y, "/")


def tail_equal(a: HyperrealSequence, b: HyperrealSequence, window: tuple[int, int]) -> bool:
    """Representative equality over an explicit window."""
    return all(a(n) == b(n) for n in range(window[0], window[1] + 1))


def _quarter_maxima(avals: list[float]) -> list[float]:
    q = max(1, len(avals) // 4)
    slices = [avals[0:q], avals[q : 2 * q], avals[2 * q : 3 * q], avals[3 * q :]]
    return [max(s) for s in slices if s]


def _oscillation(vals: list[float]) -> float:
    return max(vals) - min(vals)


def _power_fit(ns: list[int], avals: list[float]) -> tuple[float, float] | None:
    """Least-squares fit of log|v| against log n; (slope, rel residual) or None."""
    if any(v <= 0 for v in avals):
        return None
    xs = [math.log(n) for n in ns]
    ys = [math.log(v) for v in avals]
    span = max(ys) - min(ys)
    if span == 0:
        return None
    fit = statistics.linear_regression(xs, ys)
    worst = max(abs(y - (fit.intercept + fit.slope * x)) for x, y in zip(xs, ys))
    return fit.slope, worst / span


def _limit_estimate(vals: list[float]) -> tuple[float, float]:
    """Estimate the limit of a converging window and an error bar.

    Consecutive duplicates are collapsed first (staircase sequences plateau
    between truncation events); when the distinct-level differences shrink
    with a consistent ratio q, the remaining tail is extrapolated as the
    geometric sum diff * q / (1 - q), which is exact for geometric
    approach.  Otherwise the last level with the tail oscillation as the
    error bar.
    """
    quarter = max(1, len(vals) // 4)
    tail = vals[-quarter:]
    if all(v == tail[0] for v in tail):
        half = vals[len(vals) // 2 :]
        return tail[0], _oscillation(half)
    levels = [vals[0]]
    for v in vals[1:]:
        if v != levels[-1]:
            levels.append(v)
    diffs = [b - a for a, b in zip(levels, levels[1:])]
    ratios = [d2 / d1 for d1, d2 in zip(diffs, diffs[1:])][-6:]
    if len(ratios) >= 2 and all(abs(q) < 0.95 for q in ratios):
        q = statistics.median(ratios)
        spread = max(ratios) - min(ratios)
        if abs(q) < 0.95 and spread <= 0.25:
            correction = diffs[-1] * q / (1.0 - q)
            return levels[-1] + correction, abs(correction) + abs(diffs[-1]) * spread
    third = max(1, len(vals) // 3)
    return levels[-1], _oscillation(vals[-third:]) + abs(diffs[-1])


def _cluster_groups(vals: list[float], eps: float) -> list[list[float]]:
    ordered = sorted(vals)
    groups = [[ordered[0]]]
    for v in ordered[1:]:
        if v - groups[-1][-1] > eps:
            groups.append([v])
        else:
            groups[-1].append(v)
    return groups


def classify(
    seq: HyperrealSequence,
    window: tuple[int, int] = DEFAULT_WINDOW,
    eps: float = DEFAULT_EPS,
) -> ClassificationVerdict:
    """Classify the hyperreal represented by ``seq`` over ``window``.

    The window must satisfy window[1] - window[0] >= 8 and start at or
    after the sequence's first valid index.
    """
    n0, n1 = int(window[0]), int(window[1])
    if n1 - n0 < 8:
        raise ParameterError(f"window [{n0}, {n1}] too small: need at least 8 steps")
    if n0 < seq.n_min:
        raise ParameterError(f"window starts at {n0} but sequence starts at n={seq.n_min}")
    if not eps > 0:
        raise ParameterError("eps must be positive")

    ns = list(range(n0, n1 + 1))
    vals = [seq(n) for n in ns]
    avals = [abs(v) for v in vals]
    stats: dict = {
        "first": vals[0],
        "last": vals[-1],
        "abs_max": max(avals),
        "abs_min": min(avals),
        "points": len(vals),
    }

    def verdict(kind, **kw):
        return ClassificationVerdict(kind=kind, window=(n0, n1), eps=eps, stats=stats, **kw)

    if all(v == 0.0 for v in vals):
        return verdict(VerdictKind.ZERO_TAIL)

    # tail already below the resolution eps
    quarter = max(1, len(vals) // 4)
    tail_peak = max(avals[-quarter:])
    stats["tail_peak"] = tail_peak
    if tail_peak < eps:
        stats["decay"] = "tail below eps"
        return verdict(VerdictKind.INFINITESIMAL, standard_part=0.0, error_bar=tail_peak)

    # sustained multiplicative decay of the envelope (quarter maxima)
    env = _quarter_maxima(avals)
    stats["envelope"] = env
    if len(env) == 4 and env[-1] > 0 and all(a >= b for a, b in zip(env, env[1:])):
        total = env[0] / env[-1]
        late = env[1] / env[-1]
        if total >= 8.0 and late >= 2.0:
            stats["decay"] = f"envelope shrank {total:.3g}x across window"
            return verdict(VerdictKind.INFINITESIMAL, standard_part=0.0, error_bar=tail_peak)

    # slow monotone decay fitting a power law
    if all(a >= b for a, b in zip(avals, avals[1:])) and avals[-1] > 0:
        if avals[0] >= 2.0 * avals[-1]:
            fitted = _power_fit(ns, avals)
            if fitted is not None:
                slope, rel_resid = fitted
                stats["power_fit"] = (slope, rel_resid)
                if slope <= -0.3 and rel_resid <= 0.02:
                    stats["decay"] = f"power-law fit, exponent {slope:.3g}"
                    return verdict(
                        VerdictKind.INFINITESIMAL, standard_part=0.0, error_bar=avals[-1]
                    )

    # convergence: window oscillation collapses toward the end
    third = max(1, len(vals) // 3)
    osc_first = _oscillation(vals[: third + 1])
    osc_last = _oscillation(vals[-third:])
    stats["osc_first"] = osc_first
    stats["osc_last"] = osc_last
    if osc_last <= 0.3 * osc_first:
        est, err = _limit_estimate(vals)
        stats["estimate"] = est
        stats["estimate_error"] = err
        if abs(est) < eps:
            stats["decay"] = "converges below eps"
            return verdict(VerdictKind.INFINITESIMAL, standard_part=0.0, error_bar=abs(est) + err)
        return verdict(VerdictKind.APPRECIABLE, standard_part=est, error_bar=err)

    # sustained growth
    nondecreasing = all(a <= b for a, b in zip(avals, avals[1:]))
    strict_steps = sum(1 for a, b in zip(avals, avals[1:]) if b > a)
    if nondecreasing and strict_steps * 2 >= len(avals) - 1 and avals[-1] >= 2.0 * avals[0]:
        stats["growth"] = avals[-1] / max(avals[0], 5e-324)
        return verdict(VerdictKind.UNLIMITED)

    # recurring separated values: the verdict depends on the ultrafilter
    groups = _cluster_groups(vals, eps)
    stats["cluster_sizes"] = [len(g) for g in groups]
    if len(groups) >= 2 and all(len(g) >= 3 for g in groups):
        centers = tuple(statistics.fmean(g) for g in groups)
        return verdict(VerdictKind.FILTER_AMBIGUOUS, clusters=centers)

    return verdict(VerdictKind.INCONCLUSIVE)
