"""Pipeline configuration: parsing, defaults, validation, digests.

Config files are YAML (or JSON via the ``.json`` suffix; JSON is a YAML
subset anyway).  Every key has a default, unknown keys are rejected by
name, and the effective merged configuration has a stable FNV-1a digest
so artifacts can be tied back to the exact settings that produced them.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import yaml

from .classify import make_params, normalize_kind
from .embed import SubwordConfig, TrainConfig
from .errors import ConfigError
from .evaluation import SplitConfig
from .ingest import EMBEDDING_MODE, ONEHOT_MODE, SyntheticConfig
from .hashing import fnv1a_64_hex
from .simaug import AugmentConfig

DEFAULT_MODELS = ("DT", "RF", "LR", "KNN", "MLP")

# value-kind tags for config key checking
_INT, _FLOAT, _BOOL, _STR, _OPT_INT = "int", "float", "bool", "str", "opt_int"

_FIELD_KINDS: dict[str, dict[str, str]] = {
    "synthetic": {
        "n_customers": _INT,
        "n_transactions": _INT,
        "n_categories": _INT,
        "n_rings": _INT,
        "ring_size": _INT,
        "fraud_rate": _FLOAT,
        "seed": _INT,
        "meetings_per_ring": _INT,
        "ring_fraud_share": _FLOAT,
        "ring_amount_shift": _FLOAT,
    },
    "embed": {
        "dim": _INT,
        "window": _INT,
        "min_count": _INT,
        "epochs": _INT,
        "negatives": _INT,
        "lr_start": _FLOAT,
        "lr_floor": _FLOAT,
        "seed": _INT,
        "threads": _INT,
    },
    "embed.subword": {
        "enabled": _BOOL,
        "ngram_min": _INT,
        "ngram_max": _INT,
        "buckets": _INT,
    },
    "augment": {
        "tau": _FLOAT,
        "smote_k": _INT,
        "smote_extra": _OPT_INT,
        "seed": _INT,
    },
    "split": {
        "test_fraction": _FLOAT,
        "seed": _INT,
        "stratified": _BOOL,
    },
    "features": {
        "mode": _STR,
        "keep_category_in_group2": _BOOL,
    },
}


def _checked(section: str, key: str, value, kind: str):
    path = f"{section}.{key}" if section else key
    if kind == _BOOL:
        if not isinstance(value, bool):
            raise ConfigError(f"config key '{path}' must be a boolean")
        return value
    if kind == _INT:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"config key '{path}' must be an integer")
        return value
    if kind == _OPT_INT:
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"config key '{path}' must be an integer or null")
        return value
    if kind == _FLOAT:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"config key '{path}' must be a number")
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"config key '{path}' must be a string")
    return value


def _section_dict(name: str, value) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"config section '{name}' must be a mapping")
    return value


def _apply_section(obj, section: str, data: dict) -> None:
    kinds = _FIELD_KINDS[section]
    for key, value in data.items():
        if key not in kinds:
            raise ConfigError(f"unknown config key '{section}.{key}'")
        setattr(obj, key, _checked(section, key, value, kinds[key]))


def _build_synthetic(data: dict) -> SyntheticConfig:
    kinds = _FIELD_KINDS["synthetic"]
    for key in data:
        if key not in kinds:
            raise ConfigError(f"unknown config key 'synthetic.{key}'")
    if "n_customers" not in data or "n_transactions" not in data:
        raise ConfigError(
            "config keys 'synthetic.n_customers' and 'synthetic.n_transactions' are required"
        )
    kwargs = {k: _checked("synthetic", k, v, kinds[k]) for k, v in data.items()}
    return SyntheticConfig(**kwargs)


def _build_embed(data: dict) -> TrainConfig:
    cfg = TrainConfig()
    sub = data.pop("subword", None)
    _apply_section(cfg, "embed", data)
    if sub is not None:
        _apply_section(cfg.subword, "embed.subword", _section_dict("embed.subword", sub))
    return cfg


@dataclass
class PipelineConfig:
    """Fully merged pipeline settings with documented defaults."""

    input_path: str | None = None
    synthetic: SyntheticConfig | None = None
    embed: TrainConfig = field(default_factory=TrainConfig)
    augment: AugmentConfig = field(default_factory=AugmentConfig)
    split: SplitConfig = field(default_factory=SplitConfig)
    feature_mode: str = ONEHOT_MODE
    keep_category_in_group2: bool = False
    models: list[str] = field(default_factory=lambda: list(DEFAULT_MODELS))
    model_params: dict[str, dict] = field(default_factory=dict)
    threads: int = 0
    output: str | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        if not isinstance(data, dict):
            raise ConfigError("config document must be a mapping")
        cfg = cls()
        for key, value in data.items():
            if key == "input":
                # null unsets; to_dict output stays loadable
                cfg.input_path = (
                    None if value is None else _checked("", "input", value, _STR).strip() or None
                )
            elif key == "synthetic":
                cfg.synthetic = (
                    None if value is None else _build_synthetic(_section_dict("synthetic", value))
                )
            elif key == "embed":
                cfg.embed = _build_embed(dict(_section_dict("embed", value)))
            elif key == "augment":
                _apply_section(cfg.augment, "augment", _section_dict("augment", value))
            elif key == "split":
                _apply_section(cfg.split, "split", _section_dict("split", value))
            elif key == "features":
                feats = _section_dict("features", value)
                for fk, fv in feats.items():
                    if fk == "mode":
                        cfg.feature_mode = _checked("features", "mode", fv, _STR)
                    elif fk == "keep_category_in_group2":
                        cfg.keep_category_in_group2 = _checked(
                            "features", "keep_category_in_group2", fv, _BOOL
                        )
                    else:
                        raise ConfigError(f"unknown config key 'features.{fk}'")
            elif key == "models":
                if not isinstance(value, list) or not all(isinstance(m, str) for m in value):
                    raise ConfigError("config key 'models' must be a list of strings")
                cfg.models = list(value)
            elif key == "model_params":
                mp = _section_dict("model_params", value)
                cfg.model_params = {k: dict(_section_dict(f"model_params.{k}", v)) for k, v in mp.items()}
            elif key == "threads":
                cfg.threads = _checked("", "threads", value, _INT)
            elif key == "output":
                cfg.output = None if value is None else _checked("", "output", value, _STR)
            else:
                raise ConfigError(f"unknown config key '{key}'")
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        text = path.read_text(encoding="utf-8")
        try:
            if path.suffix.lower() == ".json":
                data = json.loads(text)
            else:
                data = yaml.safe_load(text)
        except (json.JSONDecodeError, yaml.YAMLError) as exc:
            raise ConfigError(f"config file {path} is not parseable: {exc}") from exc
        if data is None:
            data = {}
        return cls.from_dict(data)

    def validate(self) -> None:
        self.embed.validate()
        self.augment.validate()
        self.split.validate()
        if self.feature_mode not in (ONEHOT_MODE, EMBEDDING_MODE):
            raise ConfigError(
                f"features.mode must be '{ONEHOT_MODE}' or '{EMBEDDING_MODE}', "
                f"got '{self.feature_mode}'"
            )
        if self.threads < 0:
            raise ConfigError("threads must be >= 0")
        if not self.models:
            raise ConfigError("models must name at least one model kind")
        self.models = [normalize_kind(m) for m in self.models]
        for kind, overrides in self.model_params.items():
            canonical = normalize_kind(kind)
            make_params(canonical, overrides)

    def apply_overrides(
        self,
        seed: int | None = None,
        threads: int | None = None,
        output: str | None = None,
        input_path: str | None = None,
    ) -> None:
        """Fold command-line flag values over the file-derived settings."""
        if seed is not None:
            if self.synthetic is not None:
                self.synthetic.seed = seed
            self.embed.seed = seed
            self.augment.seed = seed
            self.split.seed = seed
        if threads is not None:
            if threads < 0:
                raise ConfigError("threads must be >= 0")
            self.threads = threads
            self.embed.threads = threads
        if output is not None:
            self.output = output
        if input_path is not None:
            self.input_path = input_path
        self.validate()

    def to_dict(self) -> dict:
        return {
            "input": self.input_path,
            "synthetic": None if self.synthetic is None else asdict(self.synthetic),
            "embed": asdict(self.embed),
            "augment": asdict(self.augment),
            "split": asdict(self.split),
            "features": {
                "mode": self.feature_mode,
                "keep_category_in_group2": self.keep_category_in_group2,
            },
            "models": list(self.models),
            "model_params": {k: dict(v) for k, v in sorted(self.model_params.items())},
            "threads": self.threads,
            "output": self.output,
        }

    def digest(self) -> str:
        """Digest of the experiment-identifying settings.

        The output directory is where artifacts land, not part of the
        experiment, so two runs of one config into different directories
        share a digest.
        """
        payload = self.to_dict()
        payload.pop("output")
        canonical = json.dumps(payload, sort_keys=True)
        return fnv1a_64_hex(canonical.encode("utf-8"))
