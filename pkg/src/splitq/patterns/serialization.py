"""Json (de)serialisation of designs."""
import json
import logging
from typing import IO, Any, Dict

from splitq.exceptions import DataFormatError

from .designs import DesignDistribution, item_inclusion
from .space import Pattern, PatternSet


logger = logging.getLogger(__name__)

__all__ = ["design_to_dict", "design_from_dict", "write_design", "read_design"]

SIGNIFICANT_DIGITS = 12


def _round(value: float) -> float:
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}")


def design_to_dict(design: DesignDistribution) -> Dict[str, Any]:
    """Json friendly representation with 0-based pattern indices."""
    return {
        "K": design.K,
        "m": design.m,
        "patterns": [list(p.items) for p in design.pattern_set],
        "probs": [_round(p) for p in design.probs],
        "item_inclusion": [_round(p) for p in item_inclusion(design)],
    }


def design_from_dict(data: Dict[str, Any]) -> DesignDistribution:
    """Rebuild a design, ignoring the derived item inclusions."""
    try:
        pattern_set = PatternSet(
            int(data["K"]), int(data["m"]), (Pattern(tuple(p)) for p in data["patterns"])
        )
        return DesignDistribution(pattern_set, data["probs"])
    except (KeyError, TypeError, ValueError) as e:
        logger.error("Error while parsing design json")
        raise DataFormatError(f"invalid design json: {e}") from e


def write_design(design: DesignDistribution, writer: IO[str]) -> None:
    """Write the design as json."""
    json.dump(design_to_dict(design), writer, indent=2)
    writer.write("\n")


def read_design(reader: IO[str]) -> DesignDistribution:
    """Read a design written by `write_design`."""
    try:
        data = json.load(reader)
    except json.JSONDecodeError as e:
        raise DataFormatError(f"invalid design json at line {e.lineno}: {e.msg}") from e
    return design_from_dict(data)
