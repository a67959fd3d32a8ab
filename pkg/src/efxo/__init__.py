"""EFX orientations of graph instances: solvers, reductions and oracles."""

from .model import (
    FormatError,
    Instance,
    InstanceError,
    Orientation,
    OrientationError,
    VerifyReport,
    one_forest,
    parse_instance,
    parse_orientation,
    serialize_instance,
    serialize_orientation,
    verify_efx,
)

__version__ = "0.1.0"

__all__ = [
    "FormatError",
    "Instance",
    "InstanceError",
    "Orientation",
    "OrientationError",
    "VerifyReport",
    "one_forest",
    "parse_instance",
    "parse_orientation",
    "serialize_instance",
    "serialize_orientation",
    "verify_efx",
]
