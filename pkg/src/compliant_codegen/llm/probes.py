"""Numeric probes: in-context linear regression and sinusoid continuation.

Both probes talk to the model through a plain ``prompt -> text`` callable, so
they run the same against a live client, the replay cache or a stub.
"""
from __future__ import annotations

import csv
import enum
import math
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np


class InvalidLiteral(ValueError):
    pass


class Formatting(enum.Enum):
    PLAIN = "Plain"
    DIGIT_SPACED = "DigitSpaced"


_DECIMAL = re.compile(r"(\d+)\.(\d+)")
_NUMBER = re.compile(r"-?\d+(?:\.\d+)?")


def digit_space_format(text: str) -> str:
    """Space out fractional digits after the first: "4.107" -> "4.1 0 7".

    Already formatted text is returned unchanged.
    """
    if not any(ch.isdigit() for ch in text):
        raise InvalidLiteral(f"no digits in {text!r}")

    def spread(m):
        frac = m.group(2)
        return f"{m.group(1)}.{frac[0]}" + "".join(" " + d for d in frac[1:])

    return _DECIMAL.sub(spread, text)


def format_value(v: float, decimals: int, formatting: Formatting) -> str:
    s = f"{v:.{decimals}f}"
    return digit_space_format(s) if formatting is Formatting.DIGIT_SPACED else s


def parse_value(text: str) -> float:
    """First number in a response, joining digit-spaced fractions back together."""
    joined = re.sub(r"(?<=\d) (?=\d)", "", text)
    m = _NUMBER.search(joined)
    if m is None:
        raise InvalidLiteral(f"no number in response {text!r}")
    return float(m.group())


@dataclass(frozen=True)
class RegressionConfig:
    num_pairs: int = 10
    decimals: int = 3
    formatting: Formatting = Formatting.DIGIT_SPACED
    seed: int = 0


@dataclass
class RegressionResult:
    config: RegressionConfig
    slope: float
    intercept: float
    x_query: float
    y_true: float
    y_pred: float
    prompt: str = field(repr=False, default="")

    @property
    def error(self) -> float:
        return abs(self.y_pred - self.y_true)


def regression_prompt(pairs, x_query: float, decimals: int, formatting: Formatting) -> str:
    lines = [
        f"f({format_value(x, decimals, formatting)})={format_value(y, decimals, formatting)}"
        for x, y in pairs
    ]
    lines.append(f"f({format_value(x_query, decimals, formatting)})=")
    return "\n".join(lines)


def regression_probe(cfg: RegressionConfig, client) -> RegressionResult:
    rng = np.random.default_rng(cfg.seed)
    a, b = rng.uniform(-3.0, 3.0, 2)
    xs = np.round(rng.uniform(0.0, 5.0, cfg.num_pairs + 1), cfg.decimals)
    pairs = [(x, a * x + b) for x in xs[:-1]]
    xq = float(xs[-1])
    prompt = regression_prompt(pairs, xq, cfg.decimals, cfg.formatting)
    y_true = float(a * xq + b)
    y_pred = parse_value(client(prompt))
    return RegressionResult(cfg, float(a), float(b), xq, y_true, y_pred, prompt)


def regression_sweep(client, num_pairs=(5, 10, 20), decimals=(1, 2, 3, 4),
                     formatting=tuple(Formatting), seed: int = 0, out=None) -> list[dict]:
    rows = []
    for fmt in formatting:
        for n in num_pairs:
            for d in decimals:
                r = regression_probe(RegressionConfig(n, d, fmt, seed), client)
                rows.append({"formatting": fmt.value, "num_pairs": n, "decimals": d,
                             "seed": seed, "error": r.error})
    if out is not None:
        write_csv(rows, out)
    return rows


@dataclass(frozen=True)
class SinusoidConfig:
    amplitude: float = 1.0
    frequency: float = 1.0       # cycles per unit x
    prefix_len: int = 40
    decimals: int = 3
    horizon: int = 10
    step: float = 0.05
    formatting: Formatting = Formatting.DIGIT_SPACED


@dataclass
class SinusoidRecord:
    config: SinusoidConfig
    x: list
    y_true: list
    y_pred: list

    @property
    def rms_error(self) -> float:
        if not self.y_true:
            return 0.0
        d = np.asarray(self.y_pred) - np.asarray(self.y_true)
        return float(np.sqrt(np.mean(d * d)))


def sinusoid_prompt(points, x_next: float, decimals: int, formatting: Formatting) -> str:
    lines = [f"{format_value(x, decimals, formatting)}, {format_value(y, decimals, formatting)}" for x, y in points]
    lines.append(f"{format_value(x_next, decimals, formatting)},")
    return "\n".join(lines)


def sinusoid_probe(cfg: SinusoidConfig, client) -> SinusoidRecord:
    """Feed a prefix and extend it one sample at a time with the model's own output."""
    def f(x):
        return cfg.amplitude * math.sin(2 * math.pi * cfg.frequency * x)

    xs = [round(i * cfg.step, 10) for i in range(cfg.prefix_len + cfg.horizon)]
    points = [(x, round(f(x), cfg.decimals)) for x in xs[: cfg.prefix_len]]
    future = xs[cfg.prefix_len:]
    preds = []
    for x in future:
        y = parse_value(client(sinusoid_prompt(points, x, cfg.decimals, cfg.formatting)))
        preds.append(y)
        points.append((x, y))
    return SinusoidRecord(cfg, future, [f(x) for x in future], preds)


def sinusoid_sweep(client, frequencies=(0.5, 1.0, 2.0), decimals=(2, 3), out=None, **kw) -> list[dict]:
    rows = []
    for fr in frequencies:
        for d in decimals:
            rec = sinusoid_probe(SinusoidConfig(frequency=fr, decimals=d, **kw), client)
            row = {k: (v.value if isinstance(v, enum.Enum) else v) for k, v in asdict(rec.config).items()}
            row["error"] = rec.rms_error
            rows.append(row)
    if out is not None:
        write_csv(rows, out)
    return rows


def write_csv(rows: list[dict], path) -> Path:
    path = Path(path)
    cols = list(rows[0]) if rows else ["error"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=cols)
        w.writeheader()
        w.writerows(rows)
    return path
