import csv
import io
from fractions import Fraction

import pytest

from omegaline import ConfigError
from omegaline.cli import main
from omegaline.config import parse_config

BASE_62 = """\
[line]
delta_x = 1
termination = 0 2
r = 0
l = 1
g = 0
c = 1
R_s = 0
R_r = 0

[sample]
digits = 0 1

[profile]
kind = superlinear
a = 1
p = 2

[simulate]
t_max = 40
points = 41
"""

BASE_61 = """\
[line]
delta_x = 1
termination = 0 1
r = 0
l = 1
g = 0
c = 1
R_s = 3
R_r = inf

[sample]
digits = 0 1

[profile]
kind = superlinear
a = 1
p = 2
"""

DLESS = """\
[line]
delta_x = 1
termination = 1 2
r = 1/10
l = 1
g = 1/10
c = 1
R_s = 2
R_r = 1/2

[sample]
digits = 0 1

[profile]
kind = linear
a = 3
b = 1

[simulate]
t_max = 30
points = 31
bound_column = true

[xcheck]
n = 1
m_max = 60
"""


def write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def rows_of(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_parse_config_keeps_rationals_exact():
    config = parse_config(DLESS.replace("delta_x = 1", "delta_x = 1/2"))
    assert config.spec.delta_x == Fraction(1, 2)
    assert config.spec.params.r == Fraction(1, 10)
    assert config.window == (32, 96)
    assert config.eps == 1e-9
    assert config.xcheck_s[:2] == (0.25, 0.5)


def test_parse_config_open_end():
    config = parse_config(BASE_61)
    assert config.spec.R_r == float("inf")


@pytest.mark.parametrize(
    "mangle, fragment",
    [
        (("R_s = 3", "R_s = -3"), "R_s"),
        (("R_s = 3", "R_s = nonsense"), "not a number"),
        (("digits = 0 1", "digits = 0 1 1"), "rank mismatch"),
        (("digits = 0 1", "digits = 0 2"), "beyond the termination"),
        (("termination = 0 1", "termination = 1 0"), "leading"),
        (("kind = superlinear", "kind = cubic"), "profile kind"),
        (("[sample]\ndigits = 0 1\n", ""), "missing required section"),
    ],
)
def test_config_errors_carry_location(mangle, fragment):
    broken = BASE_61.replace(*mangle)
    with pytest.raises(ConfigError) as err:
        parse_config(broken, filename="run.cfg")
    assert fragment in str(err.value)
    assert "run.cfg" in str(err.value)


def test_unknown_key_is_rejected():
    with pytest.raises(ConfigError) as err:
        parse_config(BASE_61 + "\n[line]\nz = 1\n")
    assert "unknown key" in str(err.value) or "duplicate" in str(err.value)


def test_main_exit_2_on_bad_config(tmp_path, capsys):
    path = write(tmp_path, BASE_61.replace("R_s = 3", "R_s = -3"))
    assert main(["describe", "--config", path]) == 2
    assert "error:" in capsys.readouterr().err


def test_main_exit_2_on_missing_file(capsys):
    assert main(["describe", "--config", "/nonexistent/x.cfg"]) == 2
    capsys.readouterr()


def test_describe_report(tmp_path, capsys):
    cfg = BASE_62.replace("termination = 0 2", "termination = 3 2").replace(
        "digits = 0 1", "digits = 2 1"
    )
    path = write(tmp_path, cfg)
    assert main(["describe", "--config", path, "--n", "5,10"]) == 0
    out = capsys.readouterr().out
    assert "regime: LOSSLESS" in out
    assert "r_s: -1.0" in out
    assert "n=5: L_n=13.0 K_n=7.0 to_receiving=6.0" in out
    assert "n=10: L_n=23.0 K_n=12.0 to_receiving=11.0" in out


def test_describe_reports_absent_sample(tmp_path, capsys):
    cfg = BASE_62.replace("digits = 0 1", "digits = 9 1")
    path = write(tmp_path, cfg)
    assert main(["describe", "--config", path, "--n-range", "2:4"]) == 0
    out = capsys.readouterr().out
    assert "not present" in out and "first admissible n: 9" in out


def test_simulate_alternating_and_causal(tmp_path):
    path = write(tmp_path, BASE_62)
    out_csv = str(tmp_path / "sim.csv")
    assert main(["simulate", "--config", path, "--n", "8", "--out", out_csv]) == 0
    rows = rows_of(out_csv)
    assert list(rows[0]) == ["n", "t", "L_n", "K_n", "fwd_count", "bwd_count", "v"]
    by_t = {float(r["t"]): r for r in rows}
    # front reaches K_8 = 8 at t = 8; backward front at 2L - K = 24 cancels it
    assert all(float(r["v"]) == 0.0 for r in rows if float(r["t"]) < 8)
    assert float(by_t[9.0]["v"]) == 1.0 and by_t[9.0]["fwd_count"] == "1"
    assert float(by_t[23.0]["v"]) == 1.0
    assert float(by_t[25.0]["v"]) == 0.0 and by_t[25.0]["bwd_count"] == "1"
    assert all(float(r["v"]) in (0.0, 1.0) for r in rows)


def test_simulate_bound_column_dominates(tmp_path):
    path = write(tmp_path, DLESS)
    out_csv = str(tmp_path / "sim.csv")
    assert main(["simulate", "--config", path, "--n", "6", "--out", out_csv]) == 0
    rows = rows_of(out_csv)
    assert "bound" in rows[0]
    bounds = {row["bound"] for row in rows}
    assert len(bounds) == 1  # the envelope is a per-truncation constant
    assert all(abs(float(r["v"])) <= float(r["bound"]) for r in rows)


def test_simulate_needs_t_max(tmp_path, capsys):
    path = write(tmp_path, BASE_61)
    assert main(["simulate", "--config", path, "--n", "5"]) == 2
    capsys.readouterr()


def test_hyper_ambiguous_report(tmp_path, capsys):
    path = write(tmp_path, BASE_62)
    out_csv = str(tmp_path / "h.csv")
    assert main(["hyper", "--config", path, "--out", out_csv]) == 0
    out = capsys.readouterr().out
    assert "verdict: FILTER_AMBIGUOUS" in out
    assert "clusters: 0.0, 1.0" in out
    rows = rows_of(out_csv)
    assert list(rows[0]) == ["n", "t_n", "v_n"]
    assert [r["n"] for r in rows] == [str(n) for n in range(32, 97)]


def test_hyper_appreciable_report_prints_both_steady_numbers(tmp_path, capsys):
    path = write(tmp_path, BASE_61)
    assert main(["hyper", "--config", path, "--out", str(tmp_path / "h.csv")]) == 0
    out = capsys.readouterr().out
    assert "verdict: APPRECIABLE" in out
    assert "standard part: 1.0" in out
    assert "open-line geometric sum 2A/(1 - r_s): 4.0" in out
    assert "settles with source divider to: 1.0" in out


def test_hyper_bound_column_for_distortionless(tmp_path):
    path = write(tmp_path, DLESS)
    out_csv = str(tmp_path / "h.csv")
    assert main(["hyper", "--config", path, "--out", out_csv]) == 0
    rows = rows_of(out_csv)
    assert list(rows[0]) == ["n", "t_n", "v_n", "bound_n"]
    assert all(abs(float(r["v_n"])) <= float(r["bound_n"]) for r in rows)


def test_hyper_window_too_small_after_materialization(tmp_path, capsys):
    cfg = BASE_62.replace("digits = 0 1", "digits = 92 1")
    path = write(tmp_path, cfg)
    assert main(["hyper", "--config", path]) == 2
    assert "fewer than 8 steps" in capsys.readouterr().err


def test_hyper_window_override(tmp_path, capsys):
    path = write(tmp_path, BASE_62)
    assert main(["hyper", "--config", path, "--window", "40:60", "--out", str(tmp_path / "h.csv")]) == 0
    out = capsys.readouterr().out
    assert "window: 40..60" in out


def test_hyper_inconclusive_is_flagged_but_exits_zero(tmp_path, capsys):
    # two recurring levels, but one visited only twice inside the window:
    # not enough recurrence to call the clustering
    times = []
    for n in range(32, 97):
        times.append(str(2.0 * n if n in (60, 88) else 3.5 * n))
    cfg = BASE_62.replace(
        "kind = superlinear\na = 1\np = 2",
        "kind = table\nn_start = 32\nvalues = " + " ".join(times),
    )
    path = write(tmp_path, cfg)
    assert main(["hyper", "--config", path, "--out", str(tmp_path / "h.csv")]) == 0
    out = capsys.readouterr().out
    assert "verdict: INCONCLUSIVE" in out
    assert "note: INCONCLUSIVE" in out


def test_describe_general_regime(tmp_path, capsys):
    cfg = BASE_62.replace("r = 0", "r = 1")
    path = write(tmp_path, cfg)
    assert main(["describe", "--config", path]) == 0
    out = capsys.readouterr().out
    assert "regime: GENERAL" in out
    assert "s-dependent" in out


def test_simulate_before_materialization_exits_3(tmp_path, capsys):
    cfg = BASE_62.replace("digits = 0 1", "digits = 9 1")
    path = write(tmp_path, cfg)
    out_csv = tmp_path / "never.csv"
    assert main(["simulate", "--config", path, "--n", "4", "--out", str(out_csv)]) == 3
    assert "first admissible truncation is n=9" in capsys.readouterr().err
    assert not out_csv.exists()  # no partial output on failure


def test_general_regime_exits_3(tmp_path, capsys):
    cfg = BASE_62.replace("r = 0", "r = 1")
    path = write(tmp_path, cfg)
    assert main(["simulate", "--config", path, "--n", "5"]) == 3
    assert main(["hyper", "--config", path]) == 3
    capsys.readouterr()


def test_xcheck_report(tmp_path, capsys):
    path = write(tmp_path, DLESS)
    out_csv = str(tmp_path / "x.csv")
    assert main(["xcheck", "--config", path, "--out", out_csv]) == 0
    out = capsys.readouterr().out
    worst = float(out.split("worst relative discrepancy among converged samples: ")[1].split()[0])
    assert worst < 1e-10
    rows = rows_of(out_csv)
    assert len(rows) == 20
    assert all(r["converged"] == "true" for r in rows)
    assert all(float(r["ratio"]) < 0.9 for r in rows)


def test_xcheck_matched_source_is_exact_at_any_truncation_depth(tmp_path, capsys):
    cfg = DLESS.replace("R_s = 2", "R_s = 1")  # R_s = Z0: the series truncates
    path = write(tmp_path, cfg)
    for m in ("0", "7"):
        assert main(["xcheck", "--config", path, "--m-max", m, "--out", str(tmp_path / "x.csv")]) == 0
        out = capsys.readouterr().out
        worst = float(
            out.split("worst relative discrepancy among converged samples: ")[1].split()[0]
        )
        assert worst < 1e-12


def test_xcheck_general_regime_allowed(tmp_path, capsys):
    cfg = DLESS.replace("g = 1/10", "g = 0")
    path = write(tmp_path, cfg)
    assert main(["xcheck", "--config", path, "--out", str(tmp_path / "x.csv")]) == 0
    capsys.readouterr()
    rows = rows_of(str(tmp_path / "x.csv"))
    assert all(float(r["rel_discrepancy"]) < 1e-9 for r in rows if r["converged"] == "true")
