"""Run configuration files: flat key=value text with [section] headers.

Numbers may be written as decimals ("0.25"), scientific ("1e-9"), or exact
rationals ("1/3"); rationals and decimals are kept as Fractions so sample
spacing and line constants stay exact.  ``inf`` is accepted where an open
termination is allowed.  Lists (digits, times, ...) are whitespace- or
comma-separated.  ``#`` starts a comment.  Every value error reports
file:line:column.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Union

from .errors import ConfigError, OmegalineError
from .geometry import OrdinalIndex, TerminatedLineSpec, validate_sample
from .hyper import DEFAULT_EPS, DEFAULT_WINDOW
from .params import LineParams
from .source import SourceSpec
from .transfinite import TimeProfile

Scalar = Union[Fraction, float]


@dataclass(frozen=True)
class Item:
    value: str
    line: int
    col: int


_SECTIONS = {
    "line": {"delta_x", "termination", "r", "l", "g", "c", "R_s", "R_r"},
    "source": {"kind", "amplitude", "times", "levels", "bound"},
    "sample": {"digits"},
    "profile": {"kind", "a", "b", "p", "values", "n_start"},
    "run": {"window", "eps"},
    "simulate": {"t_max", "points", "bound_column"},
    "xcheck": {"m_max", "n", "s_values", "s_count", "s_max"},
}


def _parse_items(text: str, filename: str) -> dict[str, dict[str, Item]]:
    sections: dict[str, dict[str, Item]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ConfigError("unterminated section header", f"{filename}:{lineno}")
            name = stripped[1:-1].strip()
            if name not in _SECTIONS:
                raise ConfigError(
                    f"unknown section [{name}]; expected one of {sorted(_SECTIONS)}",
                    f"{filename}:{lineno}",
                )
            current = name
            sections.setdefault(name, {})
            continue
        if current is None:
            raise ConfigError("key outside any [section]", f"{filename}:{lineno}")
        if "=" not in line:
            raise ConfigError("expected 'key = value'", f"{filename}:{lineno}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _SECTIONS[current]:
            raise ConfigError(
                f"unknown key '{key}' in [{current}]; expected one of {sorted(_SECTIONS[current])}",
                f"{filename}:{lineno}",
            )
        if key in sections[current]:
            raise ConfigError(f"duplicate key '{key}' in [{current}]", f"{filename}:{lineno}")
        col = line.index("=") + 2 + (len(value) - len(value.lstrip()))
        sections[current][key] = Item(value=value.strip(), line=lineno, col=col)
    return sections


class _Section:
    def __init__(self, name: str, items: dict[str, Item], filename: str):
        self.name = name
        self.items = items
        self.filename = filename

    def loc(self, key: str) -> str:
        item = self.items.get(key)
        if item is None:
            return f"{self.filename}: [{self.name}] {key}"
        return f"{self.filename}:{item.line}:{item.col}: [{self.name}] {key}"

    def fail(self, key: str, message: str):
        raise ConfigError(message, self.loc(key))

    def require(self, key: str) -> Item:
        if key not in self.items:
            raise ConfigError(f"missing required key '{key}'", f"{self.filename}: [{self.name}]")
        return self.items[key]

    def raw(self, key: str, default: str | None = None) -> str | None:
        item = self.items.get(key)
        return item.value if item is not None else default

    def number(self, key: str, default=None, allow_inf: bool = False) -> Scalar:
        if key not in self.items:
            if default is None:
                self.require(key)
            return default
        token = self.items[key].value
        if token.lower() in ("inf", "infinity"):
            if not allow_inf:
                self.fail(key, "infinity is not allowed here")
            return float("inf")
        try:
            return Fraction(token)
        except (ValueError, ZeroDivisionError):
            self.fail(key, f"not a number: {token!r}")

    def floatval(self, key: str, default=None) -> float:
        value = self.number(key, default=default)
        return float(value)

    def intval(self, key: str, default=None) -> int:
        value = self.number(key, default=default)
        if isinstance(value, Fraction) and value.denominator != 1:
            self.fail(key, f"expected an integer, got {value}")
        return int(value)

    def int_list(self, key: str) -> tuple[int, ...]:
        tokens = self.require(key).value.replace(",", " ").split()
        if not tokens:
            self.fail(key, "expected a list of integers")
        out = []
        for token in tokens:
            try:
                out.append(int(token))
            except ValueError:
                self.fail(key, f"not an integer: {token!r}")
        return tuple(out)

    def float_list(self, key: str) -> tuple[float, ...]:
        tokens = self.require(key).value.replace(",", " ").split()
        if not tokens:
            self.fail(key, "expected a list of numbers")
        out = []
        for token in tokens:
            try:
                out.append(float(Fraction(token)))
            except (ValueError, ZeroDivisionError):
                self.fail(key, f"not a number: {token!r}")
        return tuple(out)

    def boolval(self, key: str, default: bool) -> bool:
        token = self.raw(key)
        if token is None:
            return default
        if token.lower() in ("true", "yes", "1"):
            return True
        if token.lower() in ("false", "no", "0"):
            return False
        self.fail(key, f"expected true/false, got {token!r}")


@dataclass(frozen=True)
class RunConfig:
    spec: TerminatedLineSpec
    idx: OrdinalIndex
    profile: TimeProfile | None
    window: tuple[int, int]
    eps: float
    sim_t_max: float | None
    sim_points: int
    sim_bound: bool
    xcheck_n: int
    xcheck_m_max: int
    xcheck_s: tuple[float, ...]


def parse_config(text: str, filename: str = "<config>") -> RunConfig:
    """Parse and fully validate a configuration; raises ConfigError."""
    items = _parse_items(text, filename)

    def section(name: str) -> _Section:
        if name not in items:
            raise ConfigError(f"missing required section [{name}]", filename)
        return _Section(name, items[name], filename)

    def optional(name: str) -> _Section:
        return _Section(name, items.get(name, {}), filename)

    line = section("line")
    delta_x = line.number("delta_x")
    if not delta_x > 0:
        line.fail("delta_x", f"must be positive, got {delta_x}")
    termination = line.int_list("termination")
    if any(d < 0 for d in termination):
        line.fail("termination", f"digits must be nonnegative, got {termination}")
    if termination[-1] < 1:
        line.fail("termination", "leading (last) digit must be >= 1")
    r = line.number("r", default=Fraction(0))
    g = line.number("g", default=Fraction(0))
    l = line.number("l")
    c = line.number("c")
    for key, value in (("r", r), ("g", g)):
        if value < 0:
            line.fail(key, f"must be nonnegative, got {value}")
    for key, value in (("l", l), ("c", c)):
        if not value > 0:
            line.fail(key, f"must be positive, got {value}")
    R_s = line.number("R_s")
    if R_s < 0:
        line.fail("R_s", f"must satisfy 0 <= R_s < inf, got {R_s}")
    R_r = line.number("R_r", allow_inf=True)
    if R_r < 0:
        line.fail("R_r", f"must satisfy 0 <= R_r <= inf, got {R_r}")

    src = optional("source")
    kind = src.raw("kind", "unit_step")
    try:
        if kind == "unit_step":
            source = SourceSpec.unit_step()
        elif kind == "scaled_step":
            source = SourceSpec.scaled_step(src.floatval("amplitude", default=1))
        elif kind == "table":
            bound_raw = src.raw("bound")
            source = SourceSpec.table(
                src.float_list("times"),
                src.float_list("levels"),
                bound=src.floatval("bound") if bound_raw is not None else None,
            )
        else:
            src.fail("kind", f"unknown source kind {kind!r}")
    except OmegalineError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc), src.loc("kind")) from exc

    sample = section("sample")
    digits = sample.int_list("digits")
    if any(d < 0 for d in digits):
        sample.fail("digits", f"digits must be nonnegative, got {digits}")
    if len(digits) != len(termination):
        sample.fail(
            "digits",
            f"rank mismatch: sample has {len(digits)} digits, termination has {len(termination)}",
        )

    params = LineParams(r=r, l=l, g=g, c=c)
    spec = TerminatedLineSpec(
        term_digits=termination,
        delta_x=delta_x,
        R_s=R_s,
        R_r=R_r,
        params=params,
        source=source,
    )
    idx = OrdinalIndex(digits=digits)
    if not validate_sample(idx, spec):
        sample.fail("digits", f"sample {digits} lies beyond the termination {termination}")

    profile: TimeProfile | None = None
    if "profile" in items:
        prof = _Section("profile", items["profile"], filename)
        pkind = prof.raw("kind")
        if pkind is None:
            prof.require("kind")
        try:
            if pkind == "linear":
                profile = TimeProfile.linear(
                    prof.floatval("a"), prof.floatval("b", default=0)
                )
            elif pkind == "superlinear":
                profile = TimeProfile.superlinear(prof.floatval("a"), prof.floatval("p"))
            elif pkind == "table":
                profile = TimeProfile.table(
                    prof.float_list("values"), prof.intval("n_start", default=1)
                )
            else:
                prof.fail("kind", f"unknown profile kind {pkind!r}")
        except OmegalineError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc), prof.loc("kind")) from exc

    run = optional("run")
    window_item = run.raw("window")
    if window_item is None:
        window = DEFAULT_WINDOW
    else:
        pair = run.int_list("window")
        if len(pair) != 2:
            run.fail("window", f"expected two integers, got {pair}")
        window = (pair[0], pair[1])
    if window[1] - window[0] < 8 or window[0] < 1:
        run.fail("window", f"need 1 <= lo and hi - lo >= 8, got {window}")
    eps = run.floatval("eps", default=DEFAULT_EPS)
    if not eps > 0:
        run.fail("eps", f"must be positive, got {eps}")

    sim = optional("simulate")
    sim_t_max = sim.floatval("t_max") if sim.raw("t_max") is not None else None
    if sim_t_max is not None and not sim_t_max > 0:
        sim.fail("t_max", f"must be positive, got {sim_t_max}")
    sim_points = sim.intval("points", default=201)
    if sim_points < 2:
        sim.fail("points", f"need at least 2 grid points, got {sim_points}")
    sim_bound = sim.boolval("bound_column", default=False)

    xc = optional("xcheck")
    xcheck_n = xc.intval("n", default=1)
    if xcheck_n < 1:
        xc.fail("n", f"must be >= 1, got {xcheck_n}")
    xcheck_m_max = xc.intval("m_max", default=60)
    if xcheck_m_max < 0:
        xc.fail("m_max", f"must be >= 0, got {xcheck_m_max}")
    if xc.raw("s_values") is not None:
        s_values = xc.float_list("s_values")
    else:
        s_count = xc.intval("s_count", default=20)
        s_max = xc.floatval("s_max", default=5)
        if s_count < 1:
            xc.fail("s_count", f"must be >= 1, got {s_count}")
        if not s_max > 0:
            xc.fail("s_max", f"must be positive, got {s_max}")
        s_values = tuple(s_max * j / s_count for j in range(1, s_count + 1))
    if any(not s > 0 for s in s_values):
        xc.fail("s_values", "all transform samples must satisfy s > 0")

    return RunConfig(
        spec=spec,
        idx=idx,
        profile=profile,
        window=window,
        eps=eps,
        sim_t_max=sim_t_max,
        sim_points=sim_points,
        sim_bound=sim_bound,
        xcheck_n=xcheck_n,
        xcheck_m_max=xcheck_m_max,
        xcheck_s=tuple(s_values),
    )


def load_config(path: str) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", str(path)) from exc
    return parse_config(text, filename=str(path))
