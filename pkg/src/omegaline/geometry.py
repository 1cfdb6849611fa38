"""Sample-point indexing and truncation geometry for terminated cascades.

A rank-``mu`` line is a cascade of one-way-infinite lines nested ``mu``
levels deep.  Sample points sit a uniform ``delta_x`` apart and are indexed
by a digit vector (k0, k1, ..., k_{mu-1}), lowest digit first: k0 counts
sample steps inside the innermost line, k1 counts innermost lines, and so
on.  The n-th truncation cuts every infinite constituent after n sample
intervals, so the point's distance from the sending end becomes

    K_n = (k_{mu-1} n^{mu-1} + ... + k_1 n + k0) * delta_x

and the terminated line's length L_n is the same polynomial in the
termination digits (l0, ..., l_{mu-1}).  Digit polynomials are evaluated in
exact integer arithmetic and scaled by delta_x only at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DimensionError, NotMaterializedError, ParameterError
from .params import LineParams
from .source import SourceSpec

Scalar = Union[int, float, Fraction]


@dataclass(frozen=True)
class OrdinalIndex:
    """Digit vector locating one sample point, lowest digit first."""

    digits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        if not self.digits:
            raise ParameterError("an ordinal index needs at least one digit")
        if any(d < 0 for d in self.digits):
            raise ParameterError(f"digits must be nonnegative, got {self.digits}")

    @property
    def mu(self) -> int:
        return len(self.digits)


@dataclass(frozen=True)
class TerminatedLineSpec:
    """A cascade terminated at the sample point with digits ``term_digits``.

    The sending end carries a source in series with a resistor R_s
    (0 <= R_s < inf); the receiving end carries a resistor R_r
    (0 <= R_r <= inf, where inf is an open).  The leading termination digit
    must be at least 1 so the line is genuinely a cascade (for mu == 1 this
    degenerates to a plain finite line of l0 sample steps).
    """

    term_digits: tuple[int, ...]
    delta_x: Scalar
    R_s: Scalar
    R_r: Scalar
    params: LineParams
    source: SourceSpec

    def __post_init__(self):
        object.__setattr__(self, "term_digits", tuple(int(d) for d in self.term_digits))
        if not self.term_digits:
            raise ParameterError("termination needs at least one digit")
        if any(d < 0 for d in self.term_digits):
            raise ParameterError(f"termination digits must be nonnegative, got {self.term_digits}")
        if self.term_digits[-1] < 1:
            raise ParameterError("leading termination digit must be >= 1")
        if not self.delta_x > 0:
            raise ParameterError("sample spacing delta_x must be positive")
        if self.R_s < 0 or math.isinf(float(self.R_s)):
            raise ParameterError("sending-end resistance must satisfy 0 <= R_s < inf")
        if self.R_r < 0:
            raise ParameterError("receiving-end resistance must satisfy 0 <= R_r <= inf")

    @property
    def mu(self) -> int:
        return len(self.term_digits)


def digits_poly(digits: tuple[int, ...], n: int) -> int:
    """Evaluate sum(digits[p] * n**p) exactly (Horner, integer arithmetic)."""
    acc = 0
    for d in reversed(digits):
        acc = acc * n + d
    return acc


def transfinite_precedes(i: OrdinalIndex, j: OrdinalIndex) -> bool:
    """Strict order of the underlying ordinals: lexicographic, highest digit first."""
    if i.mu != j.mu:
        raise DimensionError(f"rank mismatch: {i.mu} vs {j.mu}")
    return tuple(reversed(i.digits)) < tuple(reversed(j.digits))


def validate_sample(idx: OrdinalIndex, spec: TerminatedLineSpec) -> bool:
    """True iff the indexed point lies on the terminated line.

    A digit may exceed its termination digit as long as some higher digit
    is strictly below its own: such a point sits inside a full (untruncated)
    constituent line.  Only when all higher digits equal the termination's
    does k_p <= l_p bind.  Equivalently: the index precedes or equals the
    receiving-end index in transfinite order.
    """
    if idx.mu != len(spec.term_digits):
        raise DimensionError(
            f"index rank {idx.mu} does not match termination rank {len(spec.term_digits)}"
        )
    return tuple(reversed(idx.digits)) <= tuple(reversed(spec.term_digits))


def truncation_length(spec: TerminatedLineSpec, n: int):
    """Length L_n of the n-th truncation of the terminated line."""
    if n < 1:
        raise ParameterError(f"truncation index must be >= 1, got {n}")
    return digits_poly(spec.term_digits, n) * spec.delta_x


def min_truncation_index(idx: OrdinalIndex, spec: TerminatedLineSpec) -> int:
    """Smallest n such that the point exists in every truncation m >= n.

    Existence needs every non-leading digit to fit its truncated block
    (n >= max of those digits) and the position to stay within the
    terminated length (K_m <= L_m).  The second condition matters when a
    digit legitimately exceeds its termination digit; the scan is bounded
    because all integer roots of the length-difference polynomial lie below
    1 + max|l_p - k_p|.
    """
    if not validate_sample(idx, spec):
        raise ParameterError(f"sample {idx.digits} lies beyond the termination {spec.term_digits}")
    k = idx.digits
    l = spec.term_digits
    base = max(1, *k[:-1]) if len(k) > 1 else 1
    diffs = [lp - kp for lp, kp in zip(l, k)]
    if all(d == 0 for d in diffs):
        return base
    hi = max(base, 1 + max(abs(d) for d in diffs))
    minimal = base
    for m in range(base, hi + 1):
        if digits_poly(k, m) > digits_poly(l, m):
            minimal = m + 1
    return minimal


def sample_distance(idx: OrdinalIndex, spec: TerminatedLineSpec, n: int):
    """Distance K_n of the point from the sending end in the n-th truncation."""
    if n < 1:
        raise ParameterError(f"truncation index must be >= 1, got {n}")
    minimal = min_truncation_index(idx, spec)
    if n < minimal:
        raise NotMaterializedError(n, minimal)
    return digits_poly(idx.digits, n) * spec.delta_x


def distance_to_receiving_end(idx: OrdinalIndex, spec: TerminatedLineSpec, n: int):
    """L_n - K_n: how far the point sits from the terminating resistor."""
    return truncation_length(spec, n) - sample_distance(idx, spec, n)


@dataclass(frozen=True)
class OrderingRow:
    n: int
    first_present: bool
    second_present: bool
    first_distance: Scalar | None
    second_distance: Scalar | None


@dataclass(frozen=True)
class OrderingReport:
    """Per-truncation presence/position of two points plus the settling index.

    ``threshold`` is the smallest n from which on both points exist and the
    transfinitely-earlier point is strictly nearer the sending end.  Below
    it, truncations can briefly show the counterintuitive picture of the
    farther point existing first.
    """

    rows: tuple[OrderingRow, ...]
    threshold: int


def ordering_anomaly_window(
    i: OrdinalIndex, j: OrdinalIndex, spec: TerminatedLineSpec, n_max: int
) -> OrderingReport:
    """Tabulate presence and distances of i and j for n = 1..n_max.

    Requires i to precede j in transfinite order; the report's threshold is
    computed symbolically from the digit polynomials, so it is valid even
    when it exceeds n_max.
    """
    if not transfinite_precedes(i, j):
        raise ParameterError("first index must strictly precede the second in transfinite order")
    if not (validate_sample(i, spec) and validate_sample(j, spec)):
        raise ParameterError("both sample points must lie on the terminated line")
    if n_max < 1:
        raise ParameterError(f"n_max must be >= 1, got {n_max}")

    min_i = min_truncation_index(i, spec)
    min_j = min_truncation_index(j, spec)
    rows = []
    for n in range(1, n_max + 1):
        pi = n >= min_i
        pj = n >= min_j
        rows.append(
            OrderingRow(
                n=n,
                first_present=pi,
                second_present=pj,
                first_distance=digits_poly(i.digits, n) * spec.delta_x if pi else None,
                second_distance=digits_poly(j.digits, n) * spec.delta_x if pj else None,
            )
        )

    both = max(min_i, min_j)
    diffs = [jd - id_ for jd, id_ in zip(j.digits, i.digits)]
    hi = max(both, 1 + max(abs(d) for d in diffs))
    threshold = both
    for m in range(both, hi + 1):
        if digits_poly(j.digits, m) - digits_poly(i.digits, m) <= 0:
            threshold = m + 1
    return OrderingReport(rows=tuple(rows), threshold=threshold)
