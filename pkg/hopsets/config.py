"""
Run configuration for the command line.

A :class:`RunConfig` is built from parsed arguments, with defaults taken
from an optional JSON file. The file is found in this order:

1. ``--config PATH`` on the command line
2. ``$HOPSET_CONFIG``
3. none: built-in defaults only

Flags given explicitly always win over the file. The file holds a flat
object whose keys are the long option names with dashes or underscores::

    {"eps": "1/4", "model": "congest", "seed": 7}
"""

import argparse
import json
import logging
import os
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any, Dict, Optional

from .constants import CONFIG_ENV, DEFAULT_EPSILON, DEFAULT_ID_WIDTH, MODELS
from .exceptions import ConfigurationError
from .numeric import parse_epsilon

logger = logging.getLogger(__name__)

FAMILIES = ("path", "grid", "random")

#: Built-in values for everything a config file may set.
DEFAULTS: Dict[str, Any] = {
    "eps": str(DEFAULT_EPSILON),
    "model": "sequential",
    "ell": None,
    "a": DEFAULT_ID_WIDTH,
    "p": None,
    "source": 0,
    "seed": 0,
    "finish_range": None,
    "family": "path",
    "n_min": None,
    "n_max": None,
    "weight": 1,
    "verify": False,
}


def config_path(explicit: Optional[str] = None) -> Optional[str]:
    return explicit or os.environ.get(CONFIG_ENV) or None


def load_defaults(explicit: Optional[str] = None) -> Dict[str, Any]:
    """Values from the config file, keys normalised to underscores."""
    path = config_path(explicit)
    if path is None:
        return {}
    if not os.path.exists(path):
        raise ConfigurationError(f"no config file at {path}")
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{path}: not valid JSON ({e})") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: expected a JSON object")
    out = {key.replace("-", "_"): value for key, value in data.items()}
    unknown = sorted(set(out) - set(DEFAULTS))
    if unknown:
        raise ConfigurationError(f"{path}: unknown keys {', '.join(unknown)}")
    logger.debug("defaults from %s: %s", path, out)
    return out


@dataclass
class RunConfig:
    """One validated command."""

    command: str
    input: Optional[str] = None
    gen: Optional[str] = None
    model: str = "sequential"
    epsilon: Fraction = DEFAULT_EPSILON
    ell: Optional[int] = None
    a: int = DEFAULT_ID_WIDTH
    p: Optional[int] = None
    source: int = 0
    output: Optional[str] = None
    verify: bool = False
    seed: int = 0
    finish_range: Optional[int] = None
    family: str = "path"
    n_min: Optional[int] = None
    n_max: Optional[int] = None
    weight: int = 1
    origin: Optional[str] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        """
        Merge flags over the config file over the defaults, then validate.

        Raises:
            ConfigurationError: On an invalid ε, model, input choice or range.
        """
        explicit = getattr(args, "config", None)
        values = dict(DEFAULTS)
        values.update(load_defaults(explicit))
        for key in DEFAULTS:
            flag = getattr(args, key, None)
            if flag is not None and flag is not False:
                values[key] = flag

        config = cls(
            command=args.command,
            input=getattr(args, "input", None),
            gen=getattr(args, "gen", None),
            model=values["model"],
            epsilon=parse_epsilon(values["eps"]),
            ell=values["ell"],
            a=int(values["a"]),
            p=values["p"],
            source=int(values["source"]),
            output=getattr(args, "output", None),
            verify=bool(values["verify"]),
            seed=int(values["seed"]),
            finish_range=values["finish_range"],
            family=values["family"],
            n_min=values["n_min"],
            n_max=values["n_max"],
            weight=int(values["weight"]),
            origin=config_path(explicit),
        )
        config.validate()
        return config

    def validate(self) -> None:
        if self.model not in MODELS:
            raise ConfigurationError(
                f"unknown model {self.model!r}; choose one of {', '.join(MODELS)}"
            )
        if self.a < 1:
            raise ConfigurationError(f"a must be at least 1, got {self.a}")
        for name in ("ell", "p", "finish_range"):
            value = getattr(self, name)
            if value is not None and int(value) < 1:
                raise ConfigurationError(f"{name} must be at least 1, got {value}")
        if self.source < 0:
            raise ConfigurationError(f"source must be a node ID, got {self.source}")
        if self.weight < 1:
            raise ConfigurationError(f"weight bound must be at least 1, got {self.weight}")
        if self.command in ("hopset", "sssp"):
            if (self.input is None) == (self.gen is None):
                raise ConfigurationError("give exactly one of --input and --gen")
        elif self.command == "generate":
            if self.gen is None or self.output is None:
                raise ConfigurationError("generate needs --gen and --output")
        elif self.command == "sweep":
            if self.family not in FAMILIES:
                raise ConfigurationError(
                    f"unknown family {self.family!r}; choose one of {', '.join(FAMILIES)}"
                )
            if self.n_min is None or self.n_max is None or not 2 <= self.n_min <= self.n_max:
                raise ConfigurationError(
                    f"empty sweep range: n-min={self.n_min} n-max={self.n_max}"
                )

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["epsilon"] = str(self.epsilon)
        return out
