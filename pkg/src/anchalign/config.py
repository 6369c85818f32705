"""Run configuration: every tunable of the pipeline in one flat record.

Values can come from three layers with increasing precedence: built-in
defaults, a ``key=value`` config file, and command-line flags. Unknown keys
are rejected so typos never silently fall back to a default.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .errors import ConfigError


@dataclass
class AlignConfig:
    # anchor extraction
    k: int = 3
    margin_threshold: float = 0.05
    cos_threshold: float = 0.4
    delta_x: float = 20.0
    delta_y: float = 3.0
    min_density_ratio: float = 0.3

    # alignable interval detection
    deviation_ignore_threshold: float = 10.0
    max_dist_to_the_diagonal: float = 20.0
    max_gap_size: float = 100.0
    min_horizontal_density: float = 0.15
    detect_intervals: bool = False
    adaptive: bool = False

    # DP cost model
    c: float = 0.6
    p: float = 0.06
    w: float = 0.33
    max_group_size: int = 4
    allow22: bool = False
    allow_empty: bool = True
    empty_bead_cost: float = 1.0
    local_diag_beam: float = 20.0
    length_slope: float = 1.0

    # ratio overrides; None means "compute from the documents"
    sent_ratio: float | None = None
    char_ratio: float | None = None

    threads: int = 1

    # I/O settings (align subcommand)
    src_text: str | None = None
    tgt_text: str | None = None
    src_emb: str | None = None
    tgt_emb: str | None = None
    emb_format: str = "binary"
    out: str | None = None
    format: str = "tsv"
    text_delimiter: str = " ||| "
    dump_anchors: str | None = None
    dump_intervals: str | None = None
    timings: bool = False

    def validate(self) -> None:
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.delta_x < 1 or self.delta_y < 1:
            raise ConfigError("delta_x and delta_y must be >= 1")
        for name in ("margin_threshold", "cos_threshold", "min_density_ratio"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        for name in (
            "deviation_ignore_threshold",
            "max_dist_to_the_diagonal",
            "max_gap_size",
            "min_horizontal_density",
            "local_diag_beam",
        ):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be > 0")
        for name in ("c", "p", "w", "length_slope"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.w > 1:
            raise ConfigError("w must be <= 1")
        if self.max_group_size < 1:
            raise ConfigError("max_group_size must be >= 1")
        if not 0.0 <= self.empty_bead_cost <= 1.0:
            raise ConfigError("empty_bead_cost must lie in [0, 1]")
        if self.sent_ratio is not None and self.sent_ratio <= 0:
            raise ConfigError("sent_ratio must be > 0")
        if self.char_ratio is not None and self.char_ratio <= 0:
            raise ConfigError("char_ratio must be > 0")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.emb_format not in ("binary", "tsv"):
            raise ConfigError("emb_format must be 'binary' or 'tsv'")
        if self.format not in ("tsv", "bertalign", "text"):
            raise ConfigError("format must be one of tsv, bertalign, text")
        if self.adaptive and not self.detect_intervals:
            # --adaptive implies interval detection
            self.detect_intervals = True

    def echo_lines(self) -> list[str]:
        """Fully-resolved config as sorted key=value lines (config-file syntax)."""
        lines = []
        for f in sorted(dataclasses.fields(self), key=lambda f: f.name):
            value = getattr(self, f.name)
            if value is None:
                value = ""
            elif isinstance(value, bool):
                value = "true" if value else "false"
            lines.append(f"{f.name}={value}")
        return lines


_FIELDS = {f.name: f for f in dataclasses.fields(AlignConfig)}


def _coerce(key: str, raw: str):
    f = _FIELDS[key]
    text = raw.strip()
    if f.type in ("float | None", "str | None") and text == "":
        return None
    try:
        if f.type == "int":
            return int(text)
        if f.type in ("float", "float | None"):
            return float(text)
        if f.type == "bool":
            low = text.lower()
            if low in ("true", "1", "yes"):
                return True
            if low in ("false", "0", "no"):
                return False
            raise ValueError(text)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None
    return raw if key == "text_delimiter" else text


def parse_config_file(path: str) -> dict:
    """Parse key=value lines; '#' starts a comment, blank lines are skipped."""
    overrides = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{line_no}: expected key=value, got {stripped!r}")
            key, _, raw = line.rstrip("\n").partition("=")
            key = key.strip().replace("-", "_")
            if key not in _FIELDS:
                raise ConfigError(f"{path}:{line_no}: unknown config key {key!r}")
            try:
                overrides[key] = _coerce(key, raw)
            except ConfigError as exc:
                raise ConfigError(f"{path}:{line_no}: {exc}") from None
    return overrides


def resolve_config(file_overrides: dict | None = None, cli_overrides: dict | None = None) -> AlignConfig:
    """Build a validated config: defaults < config file < CLI flags."""
    cfg = AlignConfig()
    for layer in (file_overrides, cli_overrides):
        if not layer:
            continue
        for key, value in layer.items():
            if key not in _FIELDS:
                raise ConfigError(f"unknown config key {key!r}")
            setattr(cfg, key, value)
    cfg.validate()
    return cfg
