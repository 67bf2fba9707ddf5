"""
Backend-agnostic summaries of result frames.

Every function accepts a pandas or polars DataFrame and, where it returns a frame,
returns one of the same native type.
"""

import math
from typing import Optional

import narwhals as nw
import numpy as np
from narwhals.typing import IntoFrameT

from numeric_core import FitFailure, error_message


def summarize_column(df_native: IntoFrameT, target_column: str) -> IntoFrameT:
    """
    Minimum, maximum and mean of a column of decimal strings or floats, as a one-row frame.

    :param df_native: The input DataFrame in native format.
    :param target_column: The column to summarize.
    :return: A new DataFrame with the calculated values, of the input's native type.
    """
    df = nw.from_native(df_native, eager_only=True)
    values = nw.col(target_column).cast(nw.Float64)
    df = df.select(
        a_min=values.min(),
        a_max=values.max(),
        a_mean=values.mean(),
    )
    return nw.to_native(df)


def tail_rows(df_native: IntoFrameT, order_column: str = "n", fraction: float = 0.5) -> IntoFrameT:
    """The last ceil(fraction · rows) rows after sorting by `order_column`."""
    df = nw.from_native(df_native, eager_only=True).sort(order_column)
    count = max(2, math.ceil(fraction * len(df)))
    return nw.to_native(df.tail(count))


def fit_log_log_rate(df_native: IntoFrameT, x_column: str = "n", y_column: str = "error",
                     fraction: float = 0.5) -> float:
    """Least-squares slope of log y against log x over the tail of the frame."""
    df = nw.from_native(tail_rows(df_native, x_column, fraction), eager_only=True)
    df = df.select(nw.col(x_column).cast(nw.Float64), nw.col(y_column).cast(nw.Float64))
    x = df.get_column(x_column).to_numpy()
    y = df.get_column(y_column).to_numpy()
    if len(x) < 2 or np.any(y <= 0) or np.any(x <= 0):
        raise FitFailure(error_message("frame_summary", f"need at least two positive rows, got {len(x)}",
                                       "fit_log_log_rate"))
    slope, _ = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope)


def is_strictly_decreasing(df_native: IntoFrameT, column: str = "error", order_column: str = "n",
                           burn_in: Optional[int] = 0) -> bool:
    """True iff `column` strictly decreases along `order_column` after skipping `burn_in` rows."""
    df = nw.from_native(df_native, eager_only=True).sort(order_column)
    if burn_in:
        df = df.tail(max(len(df) - burn_in, 0))
    if len(df) < 2:
        return True
    steps = df.select(step=nw.col(column).cast(nw.Float64).diff()).drop_nulls()
    return bool(steps.get_column("step").max() < 0)
