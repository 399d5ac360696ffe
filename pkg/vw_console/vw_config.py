import json
import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Union

from dotenv import load_dotenv
from werkzeug.datastructures import MultiDict

from twisted_vw.surface_kind import OutputFormat, SurfaceKind, SurfaceSpec
from twisted_vw.utils import parse_rat
from twisted_vw.vw_base import LOGGER_NAME

from .form_helpers import form_errors_text, generate_form_class_from_schema

logger = logging.getLogger(LOGGER_NAME)

CONFIG_DIR = Path(__file__).parent / "config"
SCHEMA_FILE = CONFIG_DIR / "config_schema.json"
DEFAULTS_FILE = CONFIG_DIR / "vwlab_defaults.json"

ENV_PRECISION = "VWLAB_PRECISION"
ENV_LOG_LEVEL = "VWLAB_LOG_LEVEL"


class InvalidConfigError(ValueError):
    pass


def load_json(path: Union[str, Path]) -> Dict[str, Any]:
    with Path(path).open(mode="r", encoding="utf-8") as f:
        return json.load(f)


def dict_to_multidict(d: Dict[str, Any]) -> MultiDict:
    """
    Convert a plain dict to the MultiDict WTForms expects.

    List values are expanded into repeated keys, None becomes '' and every
    value is converted to a string.
    """
    items = []
    for key, value in d.items():
        if isinstance(value, (list, tuple)):
            items.extend((key, str(v)) for v in value)
        else:
            items.append((key, str(value) if value is not None else ""))
    return MultiDict(items)


def environment_overrides(dotenv_path: Optional[Union[str, Path]] = None) -> Dict[str, str]:
    """VWLAB_* variables, after loading a .env file if present."""
    load_dotenv(dotenv_path=dotenv_path)
    overrides = {}
    if os.getenv(ENV_PRECISION):
        overrides["precision"] = os.getenv(ENV_PRECISION)
    if os.getenv(ENV_LOG_LEVEL):
        overrides["log_level"] = os.getenv(ENV_LOG_LEVEL).upper()
    return overrides


@dataclass(frozen=True)
class Config:
    precision: Fraction
    rank: int
    picard: int
    format: OutputFormat
    c1: int = 0
    inertia: int = 0
    c2_max: Fraction = Fraction(5)
    workers: int = 1
    drop_divisor_term: bool = False
    full_lattice_enumeration: bool = False
    as_stated_higher_rank: bool = False
    log_level: str = "WARNING"
    # Set when the command names a surface
    surface: Optional[SurfaceSpec] = None

    def to_dict(self) -> dict:
        return {
            "precision": str(self.precision),
            "rank": self.rank,
            "picard": self.picard,
            "format": str(self.format),
            "surface": str(self.surface.kind) if self.surface else None,
        }


def build_config(
    options: Optional[Dict[str, Any]] = None,
    surface: Optional[SurfaceKind] = None,
    use_environment: bool = True,
    dotenv_path: Optional[Union[str, Path]] = None,
) -> Config:
    """
    Merge defaults, environment and explicit options (in that order), validate
    the result through the schema-generated form and return a Config.
    """
    schema = load_json(SCHEMA_FILE)
    data = load_json(DEFAULTS_FILE)
    if use_environment:
        data.update(environment_overrides(dotenv_path))
    data.update({k: v for k, v in (options or {}).items() if v is not None})
    logger.debug(f"config inputs: {data}")

    form_class = generate_form_class_from_schema(schema)
    form = form_class(formdata=dict_to_multidict(data))
    if not form.validate():
        raise InvalidConfigError(f"invalid configuration: {form_errors_text(form)}")

    values = form.data
    if values["workers"] is None or values["workers"] < 1:
        raise InvalidConfigError(f"workers must be at least 1, got {values['workers']}")
    spec = None
    if surface is not None:
        try:
            spec = SurfaceSpec(
                surface,
                rank=values["rank"],
                picard=values["picard"] if surface is SurfaceKind.K3 else None,
            )
        except ValueError as e:
            raise InvalidConfigError(str(e)) from e
    return Config(
        precision=parse_rat(values["precision"]),
        rank=values["rank"],
        picard=values["picard"],
        format=OutputFormat.from_string(values["format"]),
        c1=values["c1"],
        inertia=values["inertia"],
        c2_max=parse_rat(values["c2_max"]),
        workers=values["workers"],
        drop_divisor_term=values["drop_divisor_term"],
        full_lattice_enumeration=values["full_lattice_enumeration"],
        as_stated_higher_rank=values["as_stated_higher_rank"],
        log_level=values["log_level"],
        surface=spec,
    )
