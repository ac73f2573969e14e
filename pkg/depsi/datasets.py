"""
CSV and JSON ingestion/export.

Floats are written with 17 significant digits so a dataset written here and
read back is bit-identical.
"""
import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from .exceptions import InvalidInputError
from .models import Dataset

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


def _numeric_column(frame, name):
    """Column as float64; names the first offending cell (1-based data row)."""
    raw = frame[name]
    try:
        values = raw.astype(float).to_numpy()
    except ValueError:
        for row, cell in enumerate(raw, start=1):
            try:
                float(cell)
            except ValueError:
                raise InvalidInputError(
                    f"Non-numeric value '{cell}' at row {row}, column '{name}'."
                ) from None
        raise
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        row = int(bad[0]) + 1
        raise InvalidInputError(
            f"Missing or non-finite value '{raw.iloc[bad[0]]}' at row {row}, column '{name}'."
        )
    return values


def read_dataset(source, y_column, x_columns=None):
    """
    Load a Dataset from a headed CSV file (path or text buffer).

    Args:
        source: path or file-like object
        y_column: name of the response column
        x_columns: covariate column names; default every column except y

    Returns:
        Dataset with column_names = x_columns + (y_column,)
    """
    if isinstance(source, (str, Path)) and not Path(source).is_file():
        raise InvalidInputError(f"Input file '{source}' does not exist.")
    try:
        # strings first so every cell goes through float() and reports its position
        frame = pd.read_csv(source, dtype=str, keep_default_na=False, encoding='utf-8')
    except (pd.errors.EmptyDataError, pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise InvalidInputError(f"Cannot parse CSV input: {exc}") from None

    frame.columns = [str(c).strip() for c in frame.columns]
    available = list(frame.columns)
    if y_column not in available:
        raise InvalidInputError(
            f"Column '{y_column}' not found; available columns: {', '.join(available)}."
        )
    if x_columns:
        missing = [c for c in x_columns if c not in available]
        if missing:
            raise InvalidInputError(
                f"Column(s) {', '.join(missing)} not found; available columns: {', '.join(available)}."
            )
        if y_column in x_columns:
            raise InvalidInputError(f"Column '{y_column}' cannot be both response and covariate.")
    else:
        x_columns = [c for c in available if c != y_column]
    if not x_columns:
        raise InvalidInputError("The input has no covariate columns.")

    x = np.column_stack([_numeric_column(frame, c) for c in x_columns])
    y = _numeric_column(frame, y_column)
    logger.debug("Read %d rows, covariates %s, response %s", len(frame), x_columns, y_column)
    return Dataset(x, y, tuple(x_columns) + (y_column,))


def dataset_to_frame(ds):
    data = {name: ds.x[:, k] for k, name in enumerate(ds.x_names)}
    data[ds.y_name] = ds.y
    return pd.DataFrame(data, columns=list(ds.column_names))


def dataset_to_csv(ds):
    return dataset_to_frame(ds).to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


def frame_to_csv(frame):
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


def grid_to_frame(grid):
    """Long format s, t, value in row-major order (s outer, t inner)."""
    nodes = grid.nodes
    s, t = np.meshgrid(nodes, nodes, indexing='ij')
    return pd.DataFrame({'s': s.ravel(), 't': t.ravel(), 'value': grid.values.ravel()})


def grid_to_dict(grid):
    return {
        'resolution': grid.resolution,
        'nodes': grid.nodes.tolist(),
        'values': grid.values.tolist(),
    }


def dumps_json(payload):
    """Deterministic JSON: sorted keys, shortest round-trip floats."""
    return json.dumps(payload, sort_keys=True, indent=2) + '\n'
