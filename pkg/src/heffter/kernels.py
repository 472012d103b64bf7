"""Hot integer kernels: tour stepping, orientation scans, orbit tracing.

Each kernel exists twice: a plain-Python/NumPy implementation (the ``*_py``
names) and, when numba is importable, an ``@njit(cache=True)`` compilation of
the same function.  Set ``HEFFTER_PURE_NUMPY=1`` to force the fallback path;
``HEFFTER_THREADS`` caps numba's threading layer.  Kernels are serial so that
output order never depends on scheduling.

All kernel inputs are 0-based int64 arrays; the public modules translate to
and from 1-based grid positions.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np


def _env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() not in ("", "0", "false", "no")


PURE_NUMPY = _env_flag("HEFFTER_PURE_NUMPY")

try:  # pragma: no cover - absence exercised only on stripped installs
    if PURE_NUMPY:
        raise ImportError("pure-numpy path requested")
    import numba
    from numba import njit

    HAVE_NUMBA = True
    _threads = os.environ.get("HEFFTER_THREADS")
    if _threads:
        numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))
except ImportError:
    HAVE_NUMBA = False


# -- scan tables -----------------------------------------------------------------


@dataclass(frozen=True)
class ScanTables:
    """Per-cell successor lookup tables for a fixed skeleton.

    ``row_next[c]``/``row_prev[c]`` give the cell id of the next filled cell in
    c's row scanning right/left (cyclically; a single-cell line wraps to
    itself), ``col_next``/``col_prev`` the same along columns.  ``rows`` and
    ``cols`` are 0-based coordinates per cell id; ids are row-major.
    """

    m: int
    n: int
    rows: np.ndarray
    cols: np.ndarray
    row_next: np.ndarray
    row_prev: np.ndarray
    col_next: np.ndarray
    col_prev: np.ndarray
    index: dict  # (row, col) 0-based -> cell id

    @property
    def ncells(self) -> int:
        return int(self.rows.size)


def build_scan_tables(m: int, n: int, filled: list[tuple[int, int]]) -> ScanTables:
    """Build :class:`ScanTables` from 0-based filled positions (row-major sorted)."""
    cells = sorted(filled)
    if not cells:
        raise ValueError("empty skeleton")
    idx = {pos: c for c, pos in enumerate(cells)}
    nc = len(cells)
    rows = np.fromiter((p[0] for p in cells), dtype=np.int64, count=nc)
    cols = np.fromiter((p[1] for p in cells), dtype=np.int64, count=nc)
    row_next = np.empty(nc, dtype=np.int64)
    row_prev = np.empty(nc, dtype=np.int64)
    col_next = np.empty(nc, dtype=np.int64)
    col_prev = np.empty(nc, dtype=np.int64)

    by_row: dict[int, list[int]] = {}
    by_col: dict[int, list[int]] = {}
    for (i, j) in cells:
        by_row.setdefault(i, []).append(j)
        by_col.setdefault(j, []).append(i)
    for i, js in by_row.items():
        L = len(js)
        for a, j in enumerate(js):
            row_next[idx[(i, j)]] = idx[(i, js[(a + 1) % L])]
            row_prev[idx[(i, j)]] = idx[(i, js[(a - 1) % L])]
    for j, is_ in by_col.items():
        L = len(is_)
        for a, i in enumerate(is_):
            col_next[idx[(i, j)]] = idx[(is_[(a + 1) % L], j)]
            col_prev[idx[(i, j)]] = idx[(is_[(a - 1) % L], j)]
    return ScanTables(m, n, rows, cols, row_next, row_prev, col_next, col_prev, idx)


# -- kernel sources ---------------------------------------------------------------
# Written in nopython-compatible style; compiled by numba when available.


def tour_orbit_py(
    rows, cols, row_next, row_prev, col_next, col_prev,
    row_rev, col_rev, start, out,
):
    """Walk the successor orbit from ``start``; fill ``out``; return its length.

    ``row_rev[i]`` is 1 when row i scans right-to-left, ``col_rev[j]`` 1 when
    column j scans bottom-to-top.
    """
    cur = start
    cnt = 0
    while True:
        out[cnt] = cur
        cnt += 1
        mid = row_prev[cur] if row_rev[rows[cur]] else row_next[cur]
        cur = col_prev[mid] if col_rev[cols[mid]] else col_next[mid]
        if cur == start:
            return cnt


def orbit_length_py(
    rows, cols, row_next, row_prev, col_next, col_prev, row_rev, col_rev, start,
):
    cur = start
    cnt = 0
    while True:
        cnt += 1
        mid = row_prev[cur] if row_rev[rows[cur]] else row_next[cur]
        cur = col_prev[mid] if col_rev[cols[mid]] else col_next[mid]
        if cur == start:
            return cnt


def scan_orientations_py(
    rows, cols, row_next, row_prev, col_next, col_prev,
    m, n, trivial_rows, out_masks,
):
    """Test every orientation pair; return the number of solutions found.

    Masks are iterated ascending, which is lexicographic order over the
    direction vectors with +1 before -1 (first position = most significant
    bit, row vector above column vector).  A mask bit 1 means direction -1.
    Solutions are recorded in ``out_masks`` as (row_mask << n) | col_mask.
    """
    nc = rows.size
    row_rev = np.zeros(m, dtype=np.uint8)
    col_rev = np.zeros(n, dtype=np.uint8)
    n_row_masks = 1 if trivial_rows else (1 << m)
    found = 0
    for rmask in range(n_row_masks):
        for i in range(m):
            row_rev[i] = (rmask >> (m - 1 - i)) & 1
        for cmask in range(1 << n):
            for j in range(n):
                col_rev[j] = (cmask >> (n - 1 - j)) & 1
            cur = 0
            cnt = 0
            while True:
                cnt += 1
                mid = row_prev[cur] if row_rev[rows[cur]] else row_next[cur]
                cur = col_prev[mid] if col_rev[cols[mid]] else col_next[mid]
                if cur == 0:
                    break
            if cnt == nc:
                out_masks[found] = (rmask << n) | cmask
                found += 1
    return found


def trace_orbits_py(succ, orbit_order, orbit_ids, orbit_lens):
    """Partition {0..len(succ)-1} into orbits of the successor map ``succ``.

    Orbits are discovered in ascending order of their least element and laid
    out consecutively in ``orbit_order``; returns the number of orbits.
    """
    ne = succ.size
    pos = 0
    nf = 0
    for e0 in range(ne):
        if orbit_ids[e0] >= 0:
            continue
        e = e0
        ln = 0
        while orbit_ids[e] < 0:
            orbit_ids[e] = nf
            orbit_order[pos] = e
            pos += 1
            ln += 1
            e = succ[e]
        orbit_lens[nf] = ln
        nf += 1
    return nf


if HAVE_NUMBA:
    tour_orbit = njit(cache=True)(tour_orbit_py)
    orbit_length = njit(cache=True)(orbit_length_py)
    scan_orientations = njit(cache=True)(scan_orientations_py)
    trace_orbits = njit(cache=True)(trace_orbits_py)
else:
    tour_orbit = tour_orbit_py
    orbit_length = orbit_length_py
    scan_orientations = scan_orientations_py
    trace_orbits = trace_orbits_py


def active_backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def warm_up() -> None:
    """Compile the kernels on a 1x1 skeleton so later timings are steady-state."""
    t = build_scan_tables(1, 1, [(0, 0)])
    one = np.zeros(1, dtype=np.uint8)
    out = np.empty(1, dtype=np.int64)
    tour_orbit(t.rows, t.cols, t.row_next, t.row_prev, t.col_next, t.col_prev,
               one, one, 0, out)
    orbit_length(t.rows, t.cols, t.row_next, t.row_prev, t.col_next, t.col_prev,
                 one, one, 0)
    masks = np.empty(4, dtype=np.int64)
    scan_orientations(t.rows, t.cols, t.row_next, t.row_prev, t.col_next,
                      t.col_prev, 1, 1, False, masks)
    succ = np.zeros(1, dtype=np.int64)
    ids = np.full(1, -1, dtype=np.int64)
    lens = np.empty(1, dtype=np.int64)
    order = np.empty(1, dtype=np.int64)
    trace_orbits(succ, order, ids, lens)
