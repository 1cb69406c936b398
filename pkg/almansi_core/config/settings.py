"""
Suite settings loaded from YAML with environment overrides
"""

import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from pydantic import BaseModel, Field, ValidationError, validator

from ..errors import InputFormatError
from ..logging import get_logger

logger = get_logger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).parent / "suites.yaml"
CONFIG_ENV = "ALMANSI_CONFIG"
SEED_ENV = "ALMANSI_SEED"


class CorpusSettings(BaseModel):
    size: int = Field(50, ge=1)
    max_variables: int = Field(3, ge=1, le=6)
    max_degree: int = Field(4, ge=0)
    max_terms: int = Field(4, ge=1)
    points: int = Field(20, ge=1)
    beta_min: float = Field(0.1, gt=0)
    beta_max: float = 2.0
    explicit_points: int = Field(1000, ge=1)
    slice_preserving: int = Field(20, ge=1)
    circular_units: int = Field(10, ge=1)
    vanishing_points: int = Field(100, ge=1)
    zonal_max_order: int = Field(8, ge=0)

    @validator("beta_max")
    def beta_range_nonempty(cls, v, values):
        if "beta_min" in values and v < values["beta_min"]:
            raise ValueError("beta_max must not be below beta_min")
        return v


class ToleranceSettings(BaseModel):
    reconstruction: float = 1e-9
    ordered: float = 1e-10
    explicit: float = 1e-10
    closed_form: float = 1e-9
    exact: float = 1e-11
    zonal: float = 1e-10
    circularity: float = 1e-11
    slice_preserving: float = 1e-12
    nonreal_probe: float = 1e-3
    vanishing: float = 1e-12
    finite_difference: float = 1e-7

    def override(self, value: Optional[float]) -> "ToleranceSettings":
        """Same tolerance for every deterministic check, as requested by --tol"""
        if value is None:
            return self
        fields = {name: value for name in self.__fields__ if name != "nonreal_probe"}
        return self.copy(update=fields)


class MonteCarloSettings(BaseModel):
    samples: int = Field(200_000, ge=1)
    polynomials: int = Field(5, ge=1)
    max_m: int = Field(2, ge=1)
    sigmas: float = Field(3.0, gt=0)
    floor: float = Field(1e-3, ge=0)
    poisson_radius: float = Field(0.9, gt=0, lt=1)
    workers: int = Field(1, ge=1)


class SuiteSettings(BaseModel):
    seed: int = Field(0, ge=0)
    corpus: CorpusSettings = Field(default_factory=CorpusSettings)
    tolerances: ToleranceSettings = Field(default_factory=ToleranceSettings)
    monte_carlo: MonteCarloSettings = Field(default_factory=MonteCarloSettings)

    def with_overrides(self, seed: Optional[int] = None, samples: Optional[int] = None,
                       tol: Optional[float] = None) -> "SuiteSettings":
        data: Dict[str, Any] = self.dict()
        data["tolerances"] = self.tolerances.override(tol).dict()
        if seed is not None:
            data["seed"] = seed
        if samples is not None:
            data["monte_carlo"]["samples"] = samples
        try:
            return self.__class__.parse_obj(data)
        except ValidationError as e:
            raise InputFormatError(f"invalid command line override: {e}", document="config")


def _read_yaml(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f) or {}
    except FileNotFoundError:
        raise InputFormatError(f"configuration file not found: {path}", document="config")
    except yaml.YAMLError as e:
        raise InputFormatError(f"configuration file {path} is not valid YAML: {e}", document="config")
    if not isinstance(data, dict):
        raise InputFormatError(f"configuration file {path} must hold a mapping", document="config")
    return data


def load_settings(path: Optional[Union[str, Path]] = None) -> SuiteSettings:
    """Settings from path, else $ALMANSI_CONFIG, else the packaged suites.yaml; $ALMANSI_SEED wins over the file seed"""
    source = Path(path or os.getenv(CONFIG_ENV) or DEFAULT_CONFIG_PATH)
    data = _read_yaml(source)
    env_seed = os.getenv(SEED_ENV)
    if env_seed is not None:
        try:
            data["seed"] = int(env_seed)
        except ValueError:
            raise InputFormatError(f"{SEED_ENV} must be an integer, got {env_seed!r}", document="config")
    try:
        settings = SuiteSettings.parse_obj(data)
    except ValidationError as e:
        raise InputFormatError(f"invalid configuration in {source}: {e}", document="config")
    logger.debug(f"Loaded suite settings from {source} (seed {settings.seed})")
    return settings
