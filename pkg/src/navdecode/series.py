"""Dated series containers, calendar alignment, return/NAV conversions and CSV I/O.

Dates are opaque ordered labels (``datetime.date``); there is no business-day
arithmetic. Quarter and year membership is derived from the ISO date. Returns
are simple (not log) returns throughout. All containers are immutable after
construction, so they can be shared freely between threads.

CSV formats
-----------
single : header ``date,value``, ISO-8601 dates, ``.`` decimal separator.
panel  : header ``date,<name1>,...,<nameK>`` with unique asset names.

Both accept UTF-8 with LF or CRLF line endings.
"""

from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    AlignmentError,
    CsvParseError,
    InsufficientDataError,
    InvalidSeriesError,
)

SERIES_KINDS = ("price", "nav", "return")


def _frozen_array(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True)
    if arr.ndim != ndim:
        raise InvalidSeriesError(f"expected {ndim}-dimensional values, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidSeriesError("values must be finite (no NaN/inf)")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DateIndex:
    """Strictly increasing sequence of calendar dates."""

    dates: tuple[dt.date, ...]

    def __post_init__(self):
        dates = tuple(self.dates)
        object.__setattr__(self, "dates", dates)
        if len(dates) == 0:
            raise InvalidSeriesError("date index must not be empty")
        for a, b in zip(dates, dates[1:]):
            if a >= b:
                raise InvalidSeriesError(f"dates must be strictly increasing: {a} then {b}")

    def __len__(self) -> int:
        return len(self.dates)

    def __iter__(self) -> Iterator[dt.date]:
        return iter(self.dates)

    def __getitem__(self, i):
        return self.dates[i]

    @property
    def first(self) -> dt.date:
        return self.dates[0]

    @property
    def last(self) -> dt.date:
        return self.dates[-1]

    def mask_between(self, start: dt.date | None, end: dt.date | None) -> np.ndarray:
        """Boolean mask selecting dates in the inclusive window [start, end]."""
        mask = np.ones(len(self.dates), dtype=bool)
        if start is not None:
            mask &= np.array([d >= start for d in self.dates])
        if end is not None:
            mask &= np.array([d <= end for d in self.dates])
        return mask


@dataclass(frozen=True)
class ValueSeries:
    """A dated sequence of values tagged as prices, NAV levels or simple returns.

    Invariants: values and index have equal length, values are finite, and
    price/NAV values are strictly positive.
    """

    index: DateIndex
    values: np.ndarray
    kind: str

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values, ndim=1))
        if self.kind not in SERIES_KINDS:
            raise InvalidSeriesError(f"kind must be one of {SERIES_KINDS}, got {self.kind!r}")
        if len(self.values) != len(self.index):
            raise InvalidSeriesError(
                f"length mismatch: {len(self.values)} values vs {len(self.index)} dates"
            )
        if self.kind in ("price", "nav") and np.any(self.values <= 0.0):
            raise InvalidSeriesError(f"{self.kind} series must be strictly positive")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def dates(self) -> tuple[dt.date, ...]:
        return self.index.dates

    def between(self, start: dt.date | None = None, end: dt.date | None = None) -> "ValueSeries":
        """Restrict to the inclusive date window [start, end]."""
        mask = self.index.mask_between(start, end)
        if not mask.any():
            raise AlignmentError(f"no dates in window [{start}, {end}]")
        dates = tuple(d for d, m in zip(self.index.dates, mask) if m)
        return ValueSeries(DateIndex(dates), self.values[mask], self.kind)


@dataclass(frozen=True)
class PricePanel:
    """Per-asset value columns sharing one date index.

    Columns may hold price levels or returns; positivity is only enforced by
    the operations that require it.
    """

    index: DateIndex
    asset_names: tuple[str, ...]
    columns: np.ndarray  # shape (T, K)

    def __post_init__(self):
        names = tuple(str(n) for n in self.asset_names)
        object.__setattr__(self, "asset_names", names)
        object.__setattr__(self, "columns", _frozen_array(self.columns, ndim=2))
        if len(set(names)) != len(names):
            raise InvalidSeriesError("asset names must be unique")
        if any(not n for n in names):
            raise InvalidSeriesError("asset names must be non-empty")
        if self.columns.shape != (len(self.index), len(names)):
            raise InvalidSeriesError(
                f"columns shape {self.columns.shape} does not match "
                f"{len(self.index)} dates x {len(names)} assets"
            )

    def __len__(self) -> int:
        return len(self.index)

    @property
    def n_assets(self) -> int:
        return len(self.asset_names)

    def column(self, name: str) -> np.ndarray:
        return self.columns[:, self.asset_names.index(name)]

    def between(self, start: dt.date | None = None, end: dt.date | None = None) -> "PricePanel":
        mask = self.index.mask_between(start, end)
        if not mask.any():
            raise AlignmentError(f"no dates in window [{start}, {end}]")
        dates = tuple(d for d, m in zip(self.index.dates, mask) if m)
        return PricePanel(DateIndex(dates), self.asset_names, self.columns[mask])


def returns_from_prices(prices: ValueSeries) -> ValueSeries:
    """Simple returns p_t / p_{t-1} - 1; the output index drops the first date."""
    if prices.kind not in ("price", "nav"):
        raise InvalidSeriesError(f"expected a price or nav series, got kind {prices.kind!r}")
    if len(prices) < 2:
        raise InsufficientDataError("need at least 2 points to compute returns")
    vals = prices.values
    rets = vals[1:] / vals[:-1] - 1.0
    return ValueSeries(DateIndex(prices.index.dates[1:]), rets, "return")


def panel_returns_from_prices(panel: PricePanel) -> PricePanel:
    """Column-wise simple returns of a price panel; drops the first date."""
    if len(panel) < 2:
        raise InsufficientDataError("need at least 2 rows to compute panel returns")
    if np.any(panel.columns <= 0.0):
        raise InvalidSeriesError("price panel must be strictly positive")
    rets = panel.columns[1:] / panel.columns[:-1] - 1.0
    return PricePanel(DateIndex(panel.index.dates[1:]), panel.asset_names, rets)


def nav_from_returns(returns: ValueSeries, initial: float) -> ValueSeries:
    """Compound returns into a NAV path: nav_t = nav_{t-1} * (1 + r_t).

    The first output equals ``initial * (1 + r_1)``; the input index is kept.
    """
    if returns.kind != "return":
        raise InvalidSeriesError(f"expected a return series, got kind {returns.kind!r}")
    if not initial > 0.0:
        raise InvalidSeriesError(f"initial NAV must be positive, got {initial}")
    if np.any(returns.values <= -1.0):
        t = int(np.argmax(returns.values <= -1.0))
        raise InvalidSeriesError(
            f"return {returns.values[t]} at {returns.index[t]} drives NAV non-positive"
        )
    nav = initial * np.cumprod(1.0 + returns.values)
    return ValueSeries(returns.index, nav, "nav")


def _period_key(d: dt.date, target: str):
    if target == "quarterly":
        return (d.year, (d.month - 1) // 3)
    if target == "yearly":
        return d.year
    raise InvalidSeriesError(f"unknown resampling target {target!r}")


def resample_compound(returns: ValueSeries, target: str) -> ValueSeries:
    """Compound returns within each calendar quarter or year.

    The per-period return is prod(1 + r_t) - 1 over the dates falling in the
    period, stamped at the last such date. Partial periods at the edges are
    compounded from the dates present.
    """
    if returns.kind != "return":
        raise InvalidSeriesError(f"expected a return series, got kind {returns.kind!r}")
    out_dates: list[dt.date] = []
    out_vals: list[float] = []
    growth = 1.0
    current_key = None
    last_date = None
    for d, r in zip(returns.index.dates, returns.values):
        key = _period_key(d, target)
        if current_key is not None and key != current_key:
            out_dates.append(last_date)
            out_vals.append(growth - 1.0)
            growth = 1.0
        growth *= 1.0 + r
        current_key = key
        last_date = d
    out_dates.append(last_date)
    out_vals.append(growth - 1.0)
    return ValueSeries(DateIndex(tuple(out_dates)), np.array(out_vals), "return")


def align(series_list: Sequence[ValueSeries | PricePanel]) -> list:
    """Inner-join every series/panel on the common dates, order preserved."""
    if len(series_list) < 1:
        raise AlignmentError("align needs at least one series")
    common = set(series_list[0].index.dates)
    for s in series_list[1:]:
        common &= set(s.index.dates)
    if not common:
        raise AlignmentError("series have no dates in common")
    out = []
    for s in series_list:
        mask = np.array([d in common for d in s.index.dates])
        dates = DateIndex(tuple(d for d in s.index.dates if d in common))
        if isinstance(s, PricePanel):
            out.append(PricePanel(dates, s.asset_names, s.columns[mask]))
        else:
            out.append(ValueSeries(dates, s.values[mask], s.kind))
    return out


def _parse_date(token: str, line_no: int) -> dt.date:
    try:
        return dt.date.fromisoformat(token.strip())
    except ValueError:
        raise CsvParseError(f"invalid ISO-8601 date {token!r}", line_no) from None


def _parse_value(token: str, line_no: int) -> float:
    try:
        v = float(token)
    except ValueError:
        raise CsvParseError(f"invalid number {token!r}", line_no) from None
    if not np.isfinite(v):
        raise CsvParseError(f"non-finite value {token!r}", line_no)
    return v


def load_csv(path, schema: str = "single", kind: str = "nav") -> ValueSeries | PricePanel:
    """Load a single-series or panel CSV (see module docstring for formats).

    Malformed rows raise :class:`CsvParseError` with the offending line
    number; unsorted or duplicate dates are reported the same way.
    """
    path = Path(path)
    if schema not in ("single", "panel"):
        raise InvalidSeriesError(f"schema must be 'single' or 'panel', got {schema!r}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvParseError("empty file", 1) from None
        header = [h.strip() for h in header]
        if not header or header[0] != "date":
            raise CsvParseError(f"first header column must be 'date', got {header[:1]!r}", 1)
        if schema == "single":
            if header != ["date", "value"]:
                raise CsvParseError(f"expected header 'date,value', got {','.join(header)!r}", 1)
            n_cols = 2
        else:
            names = header[1:]
            if not names:
                raise CsvParseError("panel header needs at least one asset column", 1)
            if len(set(names)) != len(names):
                raise CsvParseError("panel asset names must be unique", 1)
            n_cols = 1 + len(names)

        dates: list[dt.date] = []
        rows: list[list[float]] = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != n_cols:
                raise CsvParseError(f"expected {n_cols} columns, got {len(row)}", line_no)
            d = _parse_date(row[0], line_no)
            if dates and d <= dates[-1]:
                raise CsvParseError(f"dates out of order or duplicated at {d}", line_no)
            vals = [_parse_value(tok, line_no) for tok in row[1:]]
            if schema == "single" and kind in ("price", "nav") and vals[0] <= 0.0:
                raise CsvParseError(f"non-positive {kind} value {vals[0]}", line_no)
            dates.append(d)
            rows.append(vals)

    if not dates:
        raise CsvParseError("no data rows", 2)
    index = DateIndex(tuple(dates))
    if schema == "single":
        return ValueSeries(index, np.array([r[0] for r in rows]), kind)
    return PricePanel(index, tuple(names), np.array(rows))


def write_series_csv(series: ValueSeries, path) -> None:
    """Write a single-series CSV with header ``date,value``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["date", "value"])
        for d, v in zip(series.index.dates, series.values):
            writer.writerow([d.isoformat(), repr(float(v))])


def write_panel_csv(panel: PricePanel, path) -> None:
    """Write a panel CSV with header ``date,<name1>,...,<nameK>``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["date", *panel.asset_names])
        for d, row in zip(panel.index.dates, panel.columns):
            writer.writerow([d.isoformat(), *(repr(float(v)) for v in row)])
