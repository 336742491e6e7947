"""Line-oriented experiment configuration.

::

    h = 0.0078125
    measure = 1
    alpha_min = 0
    alpha_max = 2 alpha_c      # multiples of the threshold at this measure
    alpha_steps = 21

    [shape]
    kind = annulus
    inner_ratio = 0.5

Top-level keys come before the first ``[shape]`` block. Unknown keys are
errors. A value written as ``<number> alpha_c`` means that many times
alpha_c / measure^{2/n}; ``alpha_c`` alone means one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

from .closed_form import alpha_critical
from .grid import SHAPE_KINDS, DomainMask, shape_with_measure

__all__ = ["ConfigError", "ShapeSpec", "ExperimentConfig", "parse_config", "load_config",
           "default_zoo"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ShapeSpec:
    kind: str
    id: str = ""
    measure: float | None = None
    aspect: float = 2.0
    inner_ratio: float = 0.5
    fraction: float = 0.5

    def build(self, h: float, measure: float) -> DomainMask:
        return shape_with_measure(self.kind, self.measure or measure, h, self.id or self.kind,
                                  aspect=self.aspect, inner_ratio=self.inner_ratio,
                                  fraction=self.fraction)

    @property
    def is_equal_two_disks(self) -> bool:
        return self.kind == "two_disks" and self.fraction == 0.5


@dataclass(frozen=True)
class ExperimentConfig:
    shapes: tuple = ()
    h: float = 1.0 / 64
    measure: float = 1.0
    n: int = 2
    alpha_min: float = 0.0
    alpha_max: float = 40.0
    alpha_steps: int = 21
    tol: float = 1e-8
    restarts: int = 4
    slack: float = 0.02
    seed: int = 0
    output_dir: str = "out"
    radius_grid: int = 33
    crosscheck_alphas: tuple = (0.0, 1.0, 5.0, 50.0)

    def __post_init__(self):
        if self.alpha_min > self.alpha_max:
            raise ConfigError("alpha_min must not exceed alpha_max")
        if self.alpha_steps < 2:
            raise ConfigError("alpha_steps must be at least 2")
        if not self.h > 0 or not self.measure > 0:
            raise ConfigError("h and measure must be positive")

    @property
    def alphas(self) -> list[float]:
        k = self.alpha_steps - 1
        return [self.alpha_min + (self.alpha_max - self.alpha_min) * i / k
                for i in range(self.alpha_steps)]

    @property
    def alpha_c_scaled(self) -> float:
        """Threshold in alpha itself at this measure: alpha_c / |Omega|^{2/n}."""
        return alpha_critical(self.n) / self.measure ** (2.0 / self.n)

    def with_overrides(self, **kw) -> "ExperimentConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw)


def default_zoo() -> tuple:
    return (
        ShapeSpec("disk"),
        ShapeSpec("square"),
        ShapeSpec("rectangle", id="rectangle_2to1", aspect=2.0),
        ShapeSpec("annulus"),
        ShapeSpec("L_shape"),
        ShapeSpec("two_disks", id="two_disks_unequal", fraction=0.7),
        ShapeSpec("two_disks", id="two_disks_equal", fraction=0.5),
    )


_FLOAT_KEYS = {"h", "measure", "alpha_min", "alpha_max", "tol", "slack"}
_INT_KEYS = {"n", "alpha_steps", "restarts", "seed", "radius_grid"}
_STR_KEYS = {"output_dir"}
_SHAPE_FLOAT = {"measure", "aspect", "inner_ratio", "fraction"}
_SHAPE_STR = {"kind", "id"}


def _number(text: str, alpha_unit: float | None, key: str) -> float:
    parts = text.replace("*", " ").split()
    factor = 1.0
    if parts and parts[-1] == "alpha_c":
        if alpha_unit is None:
            raise ConfigError(f"{key}: alpha_c multiples are only allowed for alpha bounds")
        factor = alpha_unit
        parts = parts[:-1] or ["1"]
    try:
        if len(parts) != 1:
            raise ValueError
        return factor * float(parts[0])
    except ValueError:
        raise ConfigError(f"{key}: cannot parse number from {text!r}") from None


def parse_config(text: str) -> ExperimentConfig:
    top: dict[str, str] = {}
    shapes: list[dict[str, str]] = []
    current = top
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if line != "[shape]":
                raise ConfigError(f"line {lineno}: unknown section {line!r}")
            current = {}
            shapes.append(current)
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        allowed = (_FLOAT_KEYS | _INT_KEYS | _STR_KEYS) if current is top else (_SHAPE_FLOAT | _SHAPE_STR)
        if key not in allowed:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in current:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        current[key] = value

    kw = {}
    for key in _INT_KEYS & top.keys():
        try:
            kw[key] = int(top[key])
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {top[key]!r}") from None
    for key in _STR_KEYS & top.keys():
        kw[key] = top[key]
    for key in ("h", "measure", "tol", "slack"):
        if key in top:
            kw[key] = _number(top[key], None, key)
    n = kw.get("n", 2)
    measure = kw.get("measure", 1.0)
    unit = alpha_critical(n) / measure ** (2.0 / n)
    for key in ("alpha_min", "alpha_max"):
        if key in top:
            kw[key] = _number(top[key], unit, key)

    specs = []
    for block in shapes:
        if "kind" not in block:
            raise ConfigError("every [shape] block needs a kind")
        if block["kind"] not in SHAPE_KINDS:
            raise ConfigError(f"unknown shape kind {block['kind']!r}; expected one of {SHAPE_KINDS}")
        skw = {k: block[k] for k in _SHAPE_STR & block.keys()}
        for k in _SHAPE_FLOAT & block.keys():
            skw[k] = _number(block[k], None, k)
        specs.append(ShapeSpec(**skw))
    ids = [s.id or s.kind for s in specs]
    if len(set(ids)) != len(ids):
        raise ConfigError(f"shape ids must be unique, got {ids}")
    if any(s.measure is not None and not math.isclose(s.measure, measure) for s in specs):
        raise ConfigError("all shapes must share the configured measure")
    return ExperimentConfig(shapes=tuple(specs), **kw)


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)
