import json
from dataclasses import asdict, dataclass, fields

from .errors import ConfigError
from .maskops import MAP_MODES


@dataclass(frozen=True)
class PipelineConfig:
    samples: int = 200
    anchors: int = 16
    patch_size: int = 28
    grid: int = 4
    canvas: int = 112
    threshold: int = 128
    map_mode: str = "segmentation"

    def __post_init__(self):
        for name in ("samples", "anchors", "patch_size", "grid", "canvas"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if self.anchors != self.grid ** 2:
            raise ConfigError(f"anchors ({self.anchors}) must equal grid^2 ({self.grid ** 2})")
        if self.canvas != self.grid * self.patch_size:
            raise ConfigError(f"canvas ({self.canvas}) must equal grid * patch_size "
                              f"({self.grid * self.patch_size})")
        if self.samples < 2 * self.anchors:
            raise ConfigError(f"samples ({self.samples}) must be at least 2 * anchors")
        if not 0 <= self.threshold <= 255:
            raise ConfigError(f"threshold must lie in [0, 255], got {self.threshold}")
        if self.map_mode not in MAP_MODES:
            raise ConfigError(f"map_mode must be one of {MAP_MODES}, got {self.map_mode!r}")

    @classmethod
    def from_json(cls, path, **overrides):
        """Load a flat JSON document; non-None keyword overrides win."""
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a flat JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)

    def to_dict(self):
        return asdict(self)
