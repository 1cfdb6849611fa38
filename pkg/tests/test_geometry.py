from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from omegaline import (
    DimensionError,
    LineParams,
    NotMaterializedError,
    OrdinalIndex,
    ParameterError,
    SourceSpec,
    TerminatedLineSpec,
    distance_to_receiving_end,
    min_truncation_index,
    ordering_anomaly_window,
    sample_distance,
    transfinite_precedes,
    truncation_length,
    validate_sample,
)

LOSSLESS = LineParams(r=0, l=1, g=0, c=1)


def make_spec(term_digits, delta_x=1, R_s=0, R_r=0):
    return TerminatedLineSpec(
        term_digits=tuple(term_digits),
        delta_x=delta_x,
        R_s=R_s,
        R_r=R_r,
        params=LOSSLESS,
        source=SourceSpec.unit_step(),
    )


def test_validate_sample_basic():
    spec = make_spec((3, 2))
    assert validate_sample(OrdinalIndex((2, 1)), spec)
    assert validate_sample(OrdinalIndex((0, 0)), spec)
    assert validate_sample(OrdinalIndex((3, 2)), spec)  # the receiving end itself
    assert not validate_sample(OrdinalIndex((4, 2)), spec)  # past the end in the last block
    assert not validate_sample(OrdinalIndex((0, 3)), spec)


def test_validate_sample_interior_blocks_are_unbounded():
    # a digit may exceed its termination digit while a higher digit is
    # strictly below its own: the point sits inside a full constituent line
    spec = make_spec((3, 2))
    assert validate_sample(OrdinalIndex((4, 1)), spec)
    assert validate_sample(OrdinalIndex((1000, 0)), spec)


def test_validate_sample_mu3():
    spec = make_spec((5, 5, 1))
    assert validate_sample(OrdinalIndex((0, 0, 0)), spec)
    assert validate_sample(OrdinalIndex((9, 9, 0)), spec)
    assert not validate_sample(OrdinalIndex((6, 5, 1)), spec)


def test_rank_mismatch():
    with pytest.raises(DimensionError):
        validate_sample(OrdinalIndex((1, 1, 0)), make_spec((3, 2)))


def test_truncation_length_examples():
    assert truncation_length(make_spec((3, 2)), 5) == 13
    assert truncation_length(make_spec((0, 0, 1), delta_x=2), 4) == 32
    # rank 1 degenerates to a finite line, constant in n
    spec1 = make_spec((4,))
    assert truncation_length(spec1, 1) == truncation_length(spec1, 9) == 4


def test_spec_validation():
    with pytest.raises(ParameterError):
        make_spec((3, 0))  # leading digit must be >= 1
    with pytest.raises(ParameterError):
        make_spec((3, 2), delta_x=0)
    with pytest.raises(ParameterError):
        make_spec((3, 2), R_s=float("inf"))
    with pytest.raises(ParameterError):
        make_spec((3, 2), R_r=-1)


def test_sample_distance_examples():
    spec = make_spec((3, 2))
    idx = OrdinalIndex((2, 1))
    assert sample_distance(idx, spec, 5) == 7
    assert distance_to_receiving_end(idx, spec, 5) == 6
    assert sample_distance(OrdinalIndex((0, 0)), spec, 1) == 0
    assert sample_distance(OrdinalIndex((0, 0)), spec, 17) == 0


def test_sample_distance_exact_with_rational_spacing():
    spec = make_spec((3, 2), delta_x=Fraction(1, 3))
    assert sample_distance(OrdinalIndex((2, 1)), spec, 5) == Fraction(7, 3)
    assert truncation_length(spec, 5) == Fraction(13, 3)


def test_not_yet_materialized():
    spec = make_spec((0, 2))
    idx = OrdinalIndex((100, 0))
    with pytest.raises(NotMaterializedError) as err:
        sample_distance(idx, spec, 50)
    assert err.value.minimal_n == 100
    assert sample_distance(idx, spec, 100) == 100


def test_min_truncation_index_keeps_point_inside_line():
    # a lower digit above its termination digit can push the point past the
    # receiving end in early truncations: K_5 = 30 > L_5 = 25 here
    spec = make_spec((0, 0, 1))
    idx = OrdinalIndex((5, 5, 0))
    minimal = min_truncation_index(idx, spec)
    assert minimal == 6
    for n in range(minimal, minimal + 40):
        assert sample_distance(idx, spec, n) <= truncation_length(spec, n)


def test_transfinite_order():
    assert transfinite_precedes(OrdinalIndex((100, 0)), OrdinalIndex((0, 1)))
    assert transfinite_precedes(OrdinalIndex((0, 1)), OrdinalIndex((1, 1)))
    assert not transfinite_precedes(OrdinalIndex((2, 1)), OrdinalIndex((2, 1)))
    assert not transfinite_precedes(OrdinalIndex((0, 2)), OrdinalIndex((1000, 1)))


def test_ordering_anomaly_materialization_inversion():
    # the transfinitely-nearer point (100, 0) is missing from truncations the
    # farther point (0, 1) already inhabits; the picture settles at n = 101
    spec = make_spec((0, 2))
    report = ordering_anomaly_window(OrdinalIndex((100, 0)), OrdinalIndex((0, 1)), spec, n_max=120)
    assert report.threshold == 101
    for row in report.rows:
        assert row.second_present
        assert row.first_present == (row.n >= 100)
        if row.n <= 99:
            assert row.first_distance is None and row.second_distance == row.n
        if row.n >= 101:
            assert row.first_distance == 100 < row.second_distance


def test_ordering_anomaly_threshold_example():
    spec = make_spec((0, 3))
    report = ordering_anomaly_window(OrdinalIndex((5, 1)), OrdinalIndex((0, 2)), spec, n_max=10)
    assert report.threshold == 6


def test_ordering_anomaly_same_line():
    spec = make_spec((0, 2))
    report = ordering_anomaly_window(OrdinalIndex((0, 0)), OrdinalIndex((1, 0)), spec, n_max=5)
    assert report.threshold == 1
    assert all(row.first_present and row.second_present for row in report.rows)


def test_ordering_anomaly_requires_order():
    spec = make_spec((0, 2))
    with pytest.raises(ParameterError):
        ordering_anomaly_window(OrdinalIndex((0, 1)), OrdinalIndex((100, 0)), spec, n_max=5)


digit_pairs = st.tuples(st.integers(0, 60), st.integers(0, 5))


@given(a=digit_pairs, b=digit_pairs)
def test_transfinite_order_implies_eventual_distance_order(a, b):
    if tuple(reversed(a)) == tuple(reversed(b)):
        return
    i, j = sorted([a, b], key=lambda d: tuple(reversed(d)))
    spec = make_spec((0, max(i[1], j[1]) + 1))
    report = ordering_anomaly_window(OrdinalIndex(i), OrdinalIndex(j), spec, n_max=1)
    # symbolic check: the leading distinct digit decides the polynomial order
    diffs = [jj - ii for ii, jj in zip(i, j)]
    top = max(p for p, d in enumerate(diffs) if d != 0)
    assert diffs[top] > 0
    n0 = report.threshold
    for n in range(n0, n0 + 40):
        ki = sample_distance(OrdinalIndex(i), spec, n)
        kj = sample_distance(OrdinalIndex(j), spec, n)
        assert ki < kj
    if n0 > 1:
        mi = min_truncation_index(OrdinalIndex(i), spec)
        mj = min_truncation_index(OrdinalIndex(j), spec)
        n = n0 - 1
        settled = (
            n >= mi
            and n >= mj
            and sample_distance(OrdinalIndex(i), spec, n) < sample_distance(OrdinalIndex(j), spec, n)
        )
        assert not settled  # threshold is minimal


@given(
    digits=st.lists(st.integers(0, 9), min_size=1, max_size=4),
    term=st.lists(st.integers(0, 9), min_size=1, max_size=4),
    n_probe=st.integers(1, 30),
)
def test_distance_within_length(digits, term, n_probe):
    if len(digits) != len(term):
        return
    term = term[:-1] + [max(1, term[-1])]
    spec = make_spec(tuple(term))
    idx = OrdinalIndex(tuple(digits))
    if not validate_sample(idx, spec):
        return
    n = min_truncation_index(idx, spec) + n_probe
    k = sample_distance(idx, spec, n)
    assert 0 <= k <= truncation_length(spec, n)


def test_strictly_increasing_in_n():
    spec = make_spec((3, 2))
    lengths = [truncation_length(spec, n) for n in range(1, 20)]
    assert all(b > a for a, b in zip(lengths, lengths[1:]))
    moving = [sample_distance(OrdinalIndex((2, 1)), spec, n) for n in range(2, 20)]
    assert all(b > a for a, b in zip(moving, moving[1:]))
    fixed = [sample_distance(OrdinalIndex((2, 0)), spec, n) for n in range(2, 20)]
    assert len(set(fixed)) == 1


def test_rank_two_closed_forms():
    # K_n = (n k1 + k0) dx and L_n - K_n = (n (l1-k1) + l0 - k0) dx
    spec = make_spec((3, 2), delta_x=Fraction(1, 2))
    idx = OrdinalIndex((2, 1))
    for n in range(2, 12):
        assert sample_distance(idx, spec, n) == (n * 1 + 2) * Fraction(1, 2)
        assert distance_to_receiving_end(idx, spec, n) == (n * (2 - 1) + 3 - 2) * Fraction(1, 2)
