"""Dynamic binary symmetric relational data with missing entries.

Only the strict lower triangle is stored: pairs are ordered
(1,0), (2,0), (2,1), (3,0), ... over 0-based node indices i > j. The
on-disk CSV format uses 1-based node ids (header ``t,i,j,y``).
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing real-valued time stamps; unequal spacing allowed."""

    times: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size < 1:
            raise DataError("time grid must be a nonempty 1-d array")
        if not np.all(np.isfinite(t)):
            raise DataError("time stamps must be finite")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise DataError("time stamps must be strictly increasing")
        object.__setattr__(self, "times", t)

    @property
    def T(self):
        return self.times.size


def n_pairs(V):
    return V * (V - 1) // 2


def pair_arrays(V):
    """0-based (i, j) node indices for each stored pair, i > j."""
    i_idx = np.repeat(np.arange(V), np.arange(V))
    j_idx = np.concatenate([np.arange(i) for i in range(V)]).astype(int)
    return i_idx, j_idx


def pair_index(i, j, V):
    """Index of pair (i, j), 0-based, order-insensitive, i != j."""
    if i == j:
        raise DataError("diagonal entries are not stored")
    if i < j:
        i, j = j, i
    if not (0 <= j < i < V):
        raise DataError(f"pair ({i}, {j}) out of range for V={V}")
    return i * (i - 1) // 2 + j


class DynamicNetwork:
    """Observed binary symmetric matrices over a time grid.

    ``y`` holds the lower-triangular values, shape (P, T) with
    P = V(V-1)/2; ``observed`` is the matching mask (False = missing).
    Immutable by convention after construction.
    """

    def __init__(self, V, grid, y, observed, node_labels=None, held_out=None):
        if V < 2:
            raise DataError("need at least 2 nodes")
        y = np.asarray(y, dtype=np.int8)
        observed = np.asarray(observed, dtype=bool)
        P = n_pairs(V)
        if y.shape != (P, grid.T) or observed.shape != (P, grid.T):
            raise DataError(
                f"expected arrays of shape ({P}, {grid.T}), got {y.shape}"
            )
        if np.any((y[observed] != 0) & (y[observed] != 1)):
            raise DataError("observed values must be 0 or 1")
        self.V = V
        self.grid = grid
        self.y = y
        self.observed = observed
        self.node_labels = list(node_labels) if node_labels is not None else None
        # values removed by mask_entries, keyed (i, j, t_index), for scoring
        self.held_out = dict(held_out) if held_out else {}
        self.y.setflags(write=False)
        self.observed.setflags(write=False)

    @property
    def T(self):
        return self.grid.T

    @property
    def P(self):
        return n_pairs(self.V)

    def get(self, i, j, t_index):
        """Value at (i, j) and time index; None if missing. Symmetric."""
        p = pair_index(i, j, self.V)
        if not self.observed[p, t_index]:
            return None
        return int(self.y[p, t_index])

    def n_missing(self):
        return int((~self.observed).sum())


def mask_entries(net, slots):
    """Set the listed (i, j, t_index) slots to missing.

    Previously observed values at those slots are kept in ``held_out`` on
    the returned network for later scoring.
    """
    y = net.y.copy()
    observed = net.observed.copy()
    held = dict(net.held_out)
    for i, j, t in slots:
        p = pair_index(i, j, net.V)
        if not (0 <= t < net.T):
            raise DataError(f"time index {t} out of range")
        if observed[p, t]:
            held[(max(i, j), min(i, j), t)] = int(y[p, t])
        observed[p, t] = False
        y[p, t] = 0
    return DynamicNetwork(net.V, net.grid, y, observed, net.node_labels, held)


@dataclass
class ReturnsTable:
    """Rectangular table of log-returns: times (T,), values (T, V), labels."""

    times: np.ndarray
    values: np.ndarray
    labels: list = field(default_factory=list)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise DataError("returns table must be rectangular")
        if self.values.shape[0] != self.times.size:
            raise DataError("one row of returns per time stamp required")
        if self.values.shape[1] < 2:
            raise DataError("need at least 2 return series")
        if not self.labels:
            self.labels = [f"series_{k + 1}" for k in range(self.values.shape[1])]
        if len(self.labels) != self.values.shape[1]:
            raise DataError("label count must match series count")


def from_log_returns(returns, tie_rule="missing"):
    """Build a co-movement network: y=1 if both returns share a strict
    sign, y=0 if the signs are strictly opposite.

    Zero returns carry no direction; ``tie_rule`` decides the label:
    "missing" leaves the slot missing, "zero_as_positive" treats 0 as a
    positive move. Non-finite returns always produce missing slots.
    """
    if tie_rule not in ("missing", "zero_as_positive"):
        raise DataError(f"unknown tie_rule {tie_rule!r}")
    vals = returns.values
    T, V = vals.shape
    finite = np.isfinite(vals)
    if tie_rule == "zero_as_positive":
        sign = np.where(vals >= 0, 1, -1)
        defined = finite
    else:
        sign = np.sign(vals)
        defined = finite & (vals != 0)

    i_idx, j_idx = pair_arrays(V)
    si = sign[:, i_idx].T  # (P, T)
    sj = sign[:, j_idx].T
    observed = (defined[:, i_idx].T) & (defined[:, j_idx].T)
    y = np.where((si == sj) & observed, 1, 0).astype(np.int8)
    grid = TimeGrid(returns.times)
    return DynamicNetwork(V, grid, y, observed, node_labels=returns.labels)


def save_network(net, path, format="csv"):
    """Write the long-form CSV ``t,i,j,y`` (1-based nodes, NA = missing)."""
    if format != "csv":
        raise DataError(f"unknown format {format!r}")
    i_idx, j_idx = pair_arrays(net.V)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "i", "j", "y"])
        for k in range(net.T):
            t = float(net.grid.times[k])
            for p in range(net.P):
                val = str(int(net.y[p, k])) if net.observed[p, k] else "NA"
                w.writerow([repr(t), i_idx[p] + 1, j_idx[p] + 1, val])


def load_network(path, format="csv"):
    """Read a long-form network CSV; absent slots are treated as missing."""
    if format != "csv":
        raise DataError(f"unknown format {format!r}")
    rows = []
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r, None)
        if header is None or [h.strip() for h in header] != ["t", "i", "j", "y"]:
            raise DataError(f"{path}: expected header t,i,j,y")
        for lineno, row in enumerate(r, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise DataError(f"{path}:{lineno}: expected 4 fields")
            try:
                t = float(row[0])
                i = int(row[1])
                j = int(row[2])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: malformed row") from exc
            yraw = row[3].strip()
            if yraw == "NA":
                yval = None
            elif yraw in ("0", "1"):
                yval = int(yraw)
            else:
                raise DataError(f"{path}:{lineno}: y must be 0, 1 or NA")
            if i <= j or j < 1:
                raise DataError(f"{path}:{lineno}: require i > j >= 1")
            rows.append((t, i, j, yval))
    if not rows:
        raise DataError(f"{path}: no data rows")
    times = np.array(sorted({t for t, _, _, _ in rows}))
    t_pos = {t: k for k, t in enumerate(times)}
    V = max(i for _, i, _, _ in rows)
    grid = TimeGrid(times)
    P = n_pairs(V)
    y = np.zeros((P, times.size), dtype=np.int8)
    observed = np.zeros((P, times.size), dtype=bool)
    seen = set()
    for t, i, j, yval in rows:
        p = pair_index(i - 1, j - 1, V)
        k = t_pos[t]
        if (p, k) in seen:
            raise DataError(f"duplicate entry for (t={t}, i={i}, j={j})")
        seen.add((p, k))
        if yval is not None:
            y[p, k] = yval
            observed[p, k] = True
    return DynamicNetwork(V, grid, y, observed)


def save_returns(table, path):
    """Write the wide CSV ``t,label_1,...,label_V``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t"] + list(table.labels))
        for k in range(table.times.size):
            row = [repr(float(table.times[k]))]
            for v in table.values[k]:
                row.append("NA" if not np.isfinite(v) else repr(float(v)))
            w.writerow(row)


def load_returns(path):
    """Read a wide returns CSV; NA / empty cells become NaN."""
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r, None)
        if header is None or len(header) < 3 or header[0].strip() != "t":
            raise DataError(f"{path}: expected header t,label_1,...,label_V")
        labels = [h.strip() for h in header[1:]]
        times, values = [], []
        for lineno, row in enumerate(r, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(f"{path}:{lineno}: ragged row")
            try:
                times.append(float(row[0]))
                values.append(
                    [
                        np.nan if c.strip() in ("NA", "") else float(c)
                        for c in row[1:]
                    ]
                )
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: malformed row") from exc
    if not times:
        raise DataError(f"{path}: no data rows")
    return ReturnsTable(np.array(times), np.array(values), labels)
