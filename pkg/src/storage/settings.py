"""
Layered settings: built-in defaults < config file < command-line flags
"""
import logging
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import toml
import yaml
from dotenv import load_dotenv

from ..core.models.experiment import ExperimentSpec
from ..core.models.vsp_config import VspConfig

logger = logging.getLogger(__name__)

THREADS_ENV = "VSP_THREADS"

PathLike = Union[str, Path]


def load_mapping(path: PathLike) -> Dict[str, Any]:
    """
    Parse a YAML (.yaml/.yml) or TOML (anything else) file into a dict

    Raises:
        ValueError: the file does not hold a mapping or cannot be parsed
    """
    path = Path(path)
    text = path.read_text()
    try:
        if path.suffix.lower() in (".yaml", ".yml"):
            data = yaml.safe_load(text)
        else:
            data = toml.loads(text)
    except (yaml.YAMLError, toml.TomlDecodeError) as e:
        raise ValueError(f"cannot parse {path}: {e}") from e
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ValueError(f"{path} must hold a key/value mapping")
    logger.info(f"✓ Loaded configuration from: {path}")
    return data


def load_config_file(path: PathLike) -> Dict[str, Any]:
    """Flat key = value solver settings; nested tables are rejected"""
    data = load_mapping(path)
    nested = [key for key, value in data.items() if isinstance(value, dict)]
    if nested:
        raise ValueError(f"{path}: settings must be flat key/value pairs, found tables {nested}")
    return data


def resolve_config(
    config_file: Optional[PathLike] = None,
    *layers: Mapping[str, Any],
) -> VspConfig:
    """
    Apply the config file and then each override layer over the defaults

    None values in a layer are ignored so unset flags keep lower layers.

    Raises:
        ValueError: unknown key or constraint violation
    """
    config = VspConfig()
    if config_file is not None:
        config = config.with_overrides(load_config_file(config_file))
    for layer in layers:
        config = config.with_overrides(layer)
    return config


def load_experiment_spec(path: PathLike) -> ExperimentSpec:
    """
    Raises:
        pydantic.ValidationError: invalid spec contents
        ValueError: unparseable file
    """
    return ExperimentSpec.model_validate(load_mapping(path))


def worker_cap(requested: int) -> int:
    """Clamp a requested worker count to VSP_THREADS (environment or .env) when set"""
    load_dotenv()
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return requested
    try:
        cap = int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {THREADS_ENV}={raw!r}")
        return requested
    if cap < 1:
        return requested
    if requested > cap:
        logger.info(f"Worker pool capped at {cap} by {THREADS_ENV}")
    return min(requested, cap)
