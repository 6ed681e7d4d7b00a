"""Json and csv output of study results."""
import dataclasses
import json
import math
from typing import IO, Any, Dict

import pandas as pd

from .study import StudyResult


__all__ = ["study_to_dict", "study_to_frame", "write_study_json", "write_study_csv", "CSV_COLUMNS"]

CSV_COLUMNS = [
    "scenario",
    "model",
    "setup",
    "design",
    "n",
    "replications",
    "mse",
    "mse_sum",
    "criterion",
    "re_mse",
    "re_a",
    "se_re",
    "failures",
]


def _clean(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def study_to_dict(result: StudyResult) -> Dict[str, Any]:
    """Json friendly representation including the scenario."""
    return {
        "scenario": dataclasses.asdict(result.scenario),
        "designs": [
            {key: _clean(value) for key, value in dataclasses.asdict(summary).items()}
            for summary in result.summaries
        ],
        "warnings": list(result.warnings),
    }


def study_to_frame(result: StudyResult) -> pd.DataFrame:
    """One row per design."""
    scenario = result.scenario
    rows = [
        {
            "scenario": scenario.name,
            "model": scenario.population.model,
            "setup": scenario.setup,
            "replications": scenario.replications,
            **dataclasses.asdict(summary),
            "design": summary.name,
        }
        for summary in result.summaries
    ]
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def write_study_json(result: StudyResult, writer: IO[str]) -> None:
    """Write the result as json."""
    json.dump(study_to_dict(result), writer, indent=2)
    writer.write("\n")


def write_study_csv(result: StudyResult, writer: IO[str]) -> None:
    """Write the flat per-design table as csv."""
    study_to_frame(result).to_csv(writer, index=False, float_format="%.10g")
