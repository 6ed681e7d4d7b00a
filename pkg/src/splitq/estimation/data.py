"""Response matrices with their observation masks, and their csv form."""
import dataclasses
import logging
from typing import IO, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from splitq.exceptions import DataFormatError


logger = logging.getLogger(__name__)

__all__ = ["ObservedDataset", "read_dataset", "write_dataset"]


@dataclasses.dataclass(frozen=True, eq=False)
class ObservedDataset:
    """n x K responses; observed[i, k] flags that item k was administered to respondent i.

    Cells that were not administered hold NaN.
    """

    values: np.ndarray
    observed: np.ndarray
    item_names: Tuple[str, ...] = ()

    def __post_init__(self):
        """Validate shapes and blank out the cells that were not administered."""
        observed = np.array(self.observed, dtype=bool)
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or observed.shape != values.shape:
            raise ValueError(
                f"values and observed must be matching matrices, got {values.shape} "
                f"and {observed.shape}"
            )
        if not np.all(np.isfinite(values[observed])):
            raise ValueError("Observed cells must hold finite values")
        values[~observed] = np.nan
        values.setflags(write=False)
        observed.setflags(write=False)
        names = tuple(self.item_names) or tuple(f"item{k + 1}" for k in range(values.shape[1]))
        if len(names) != values.shape[1]:
            raise ValueError(f"Expected {values.shape[1]} item names, got {len(names)}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "observed", observed)
        object.__setattr__(self, "item_names", names)

    @classmethod
    def complete(cls, values: np.ndarray, item_names: Sequence[str] = ()) -> "ObservedDataset":
        """Fully observed data."""
        values = np.asarray(values, dtype=float)
        return cls(values, np.ones(values.shape, dtype=bool), tuple(item_names))

    @property
    def n(self) -> int:
        """Number of respondents."""
        return self.values.shape[0]

    @property
    def K(self) -> int:
        """Number of items."""
        return self.values.shape[1]

    def filled(self, fill: float = 0.0) -> np.ndarray:
        """Values with the cells that were not administered replaced by fill."""
        return np.where(self.observed, self.values, fill)

    def rows(self, index: np.ndarray) -> "ObservedDataset":
        """Dataset restricted to the given rows."""
        return ObservedDataset(self.values[index], self.observed[index], self.item_names)

    def columns(self, index: np.ndarray) -> "ObservedDataset":
        """Dataset restricted to the given items."""
        names = tuple(self.item_names[k] for k in index)
        return ObservedDataset(self.values[:, index], self.observed[:, index], names)


def read_dataset(reader: IO[str], item_names: Optional[Sequence[str]] = None) -> ObservedDataset:
    """Parse a csv with a header of item names; an empty cell was not administered.

    A "0" cell was administered and answered zero.
    """
    try:
        frame = pd.read_csv(reader, dtype=str, keep_default_na=False, skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        logger.error("Error while reading the csv data")
        raise DataFormatError(f"invalid csv: {e}") from e
    if frame.shape[1] == 0:
        raise DataFormatError("csv has no item columns")
    cells = frame.apply(lambda column: column.str.strip())
    observed = (cells != "").to_numpy()
    values = cells.apply(pd.to_numeric, errors="coerce").to_numpy(dtype=float)
    bad = observed & ~np.isfinite(values)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        # header is line 1
        value = cells.iat[row, col]
        msg = f"line {row + 2}: cannot parse {value!r} in column {frame.columns[col]}"
        logger.error(msg)
        raise DataFormatError(msg)
    return ObservedDataset(values, observed, tuple(item_names or frame.columns))


def write_dataset(data: ObservedDataset, writer: IO[str]) -> None:
    """Write the data as csv, leaving cells that were not administered empty."""
    frame = pd.DataFrame(
        np.where(data.observed, data.values, np.nan), columns=list(data.item_names)
    )
    frame.to_csv(writer, index=False, na_rep="", float_format="%.17g")
