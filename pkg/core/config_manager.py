import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, TypeVar

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator

logger = logging.getLogger(__name__)

# Base directory for tunable schedules and templates, relative to the project root.
CONFIG_BASE_DIR = "config"
DEFAULTS_MODULE = "defaults"
TEMPLATES_DIR = "templates"

# middle-hedgehog-lab/
# |-- core/
# |   |-- config_manager.py  <- __file__
# |-- config/
# |   |-- defaults/
# |   |-- templates/
PROJECT_ROOT = Path(__file__).resolve().parent.parent

SettingsT = TypeVar("SettingsT", bound=BaseModel)


def load_yaml_file(file_path: Path) -> Optional[Dict[str, Any]]:
    """Loads a YAML file and returns its content as a dictionary."""
    try:
        with file_path.open("r", encoding="utf-8") as f:
            return yaml.safe_load(f)
    except FileNotFoundError:
        logger.debug("Config file not found at %s", file_path)
        return None
    except yaml.YAMLError as e:
        logger.error("Error parsing YAML file %s: %s", file_path, e)
        return None
    except OSError as e:
        logger.error("Could not read %s: %s", file_path, e)
        return None


def get_config(config_key: str, module_name: str = DEFAULTS_MODULE) -> Optional[Dict[str, Any]]:
    """
    Retrieves a configuration mapping from a YAML file.

    Args:
        config_key (str): File name with or without the ".yaml" extension.
        module_name (str): Directory under CONFIG_BASE_DIR to look in first.

    Returns:
        Optional[Dict[str, Any]]: The parsed mapping, or None if no file was found.
    """
    filename = config_key if config_key.endswith(".yaml") else f"{config_key}.yaml"
    data = load_yaml_file(PROJECT_ROOT / CONFIG_BASE_DIR / module_name / filename)
    if data is None:
        # Fallback: directly under CONFIG_BASE_DIR
        data = load_yaml_file(PROJECT_ROOT / CONFIG_BASE_DIR / filename)
    return data


def get_template(template_key: str, module_name: str) -> Optional[str]:
    """Returns the ``template`` entry of ``config/templates/<module_name>/<key>.yaml``."""
    data = get_config(template_key, f"{TEMPLATES_DIR}/{module_name}")
    if not data or not isinstance(data.get("template"), str):
        logger.error("Template '%s' for module '%s' is missing", template_key, module_name)
        return None
    return data["template"]


class SandwichSettings(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    initial_vertices: int = Field(9, ge=9, description="Odd number of support directions to start with")
    max_attempts: int = Field(24, ge=1, description="Retries, each adding two directions")
    jitter: float = Field(0.15, ge=0, lt=0.5, description="Angular jitter as a fraction of the step")
    tangent_denominator: int = Field(1000, ge=8, description="Denominator bound for rational direction tangents")
    offset_fraction: Fraction = Field(Fraction(1, 2), description="Offset d = offset_fraction * eps")
    smooth_check_samples: int = Field(2048, ge=64, description="Support grid used to check smooth bodies")

    @field_validator("offset_fraction", mode="before")
    @classmethod
    def _parse_fraction(cls, v: Any) -> Fraction:
        value = Fraction(str(v))
        if not 0 < value < 1:
            raise ValueError("offset_fraction must lie in (0, 1)")
        return value


class PerturbSettings(BaseModel):
    gamma_halvings: int = Field(24, ge=1, description="How often the separating line L_q is moved towards q")
    tau_steps: int = Field(6, ge=1, description="tau runs through 3/4, 7/8, ...")
    sigma_exponents: int = Field(24, ge=1, description="sigma runs through 1 + 2^-m for m = 1..sigma_exponents")
    lambda_halvings: int = Field(40, ge=1, description="lambda runs through 1, 1/2, ..., 2^-lambda_halvings")
    support_denominators: List[int] = Field(default_factory=lambda: [8, 64, 512, 4096])
    max_cuts: int = Field(256, ge=1)


class SmoothingSettings(BaseModel):
    initial_radius_factor: float = Field(10.0, gt=0, description="First radius as a multiple of the diameter")
    doublings: int = Field(12, ge=1)
    samples: int = Field(4096, ge=8, description="Uniform hedgehog samples on [0, pi)")
    refine: int = Field(3, ge=0, description="Extra samples per elementary interval")
    cluster_gap: int = Field(3, ge=1, description="Index gap merging hull samples into one vertex")
    support_grid: int = Field(4096, ge=64)


class RenderSettings(BaseModel):
    width: int = Field(800, ge=64)
    height: int = Field(800, ge=64)
    margin: float = Field(0.1, ge=0, lt=1)
    precision: int = Field(6, ge=1, le=12)
    corner_radius: float = Field(4.0, gt=0)
    smooth_samples: int = Field(720, ge=16)
    colors: Dict[str, str] = Field(default_factory=lambda: {
        "body": "#1f3b73",
        "hedgehog": "#c0392b",
        "hull": "#27ae60",
        "corners": "#2c3e50",
        "convexity-points": "#8e44ad",
        "affine-diameters": "#95a5a6",
        "cut-overlay": "#e67e22",
    })


class SamplingSettings(BaseModel):
    hedgehog_samples: int = Field(1024, ge=8)
    convexity_samples: int = Field(4096, ge=64, description="Boundary samples for the smooth convexity test")
    convexity_tolerance: float = Field(1e-9, gt=0)
    fourier_check_grid: int = Field(2048, ge=64)
    hausdorff_chunk: int = Field(128, ge=1, description="Rows per block in sampled Hausdorff distances")


def load_settings(model: Type[SettingsT], config_key: str) -> SettingsT:
    """Validates ``config/defaults/<config_key>.yaml`` into ``model``; defaults if absent."""
    data = get_config(config_key)
    if data is None:
        logger.debug("Using built-in defaults for %s", config_key)
        return model()
    return model(**data)
