"""Partially filled arrays over cyclic groups, skeletons, and diagonal structure.

Conventions used across the package:

* all public row/column/diagonal indices are 1-based;
* entries are residues stored in [0, v-1]; display uses the symmetric signed
  form in [-v//2, v//2] because that is how such arrays are usually printed;
* equality of entries is always mod v.

The *i*-th diagonal of an n x n array is D_i = {(i,1),(i+1,2),...,(i-1,n)}
with row indices wrapping on the residues {1,...,n}.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence


class ArrayFormatError(ValueError):
    """Raised for malformed array files."""


class NotDiagonalError(ValueError):
    """Raised when a skeleton is not a union of full diagonals."""


def signed(x: int, v: int) -> int:
    """Symmetric representative of x mod v, in [-(v//2), v//2]."""
    x %= v
    return x if x <= v // 2 else x - v


@dataclass(frozen=True)
class Skeleton:
    """The set of filled positions of an array (1-based)."""

    m: int
    n: int
    filled: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError("skeleton dimensions must be positive")
        for (i, j) in self.filled:
            if not (1 <= i <= self.m and 1 <= j <= self.n):
                raise ValueError(f"position {(i, j)} outside {self.m}x{self.n} grid")

    def positions(self) -> tuple[tuple[int, int], ...]:
        """Filled positions sorted row-major."""
        return tuple(sorted(self.filled))

    def row_columns(self, i: int) -> tuple[int, ...]:
        return tuple(sorted(j for (r, j) in self.filled if r == i))

    def column_rows(self, j: int) -> tuple[int, ...]:
        return tuple(sorted(i for (i, c) in self.filled if c == j))

    def transpose(self) -> "Skeleton":
        return Skeleton(self.n, self.m, frozenset((j, i) for (i, j) in self.filled))

    def row_translated(self, shift: int) -> "Skeleton":
        """Cyclic row shift: row i of the result is row i-shift of self.

        Content moves down by ``shift``; diagonal indices increase by it.
        """
        if self.m != self.n:
            raise ValueError("row translation is defined for square skeletons")
        n = self.n
        return Skeleton(
            n, n,
            frozenset(((i - 1 + shift) % n + 1, j) for (i, j) in self.filled),
        )

    def to_json_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "filled": [list(p) for p in self.positions()]}


@dataclass(frozen=True)
class PartiallyFilledArray:
    """An m x n grid over Z_v with empty cells.

    ``t`` is the order of the distinguished subgroup J of Z_v (the subgroup of
    the multiples of v/t); ``fold`` is the multiplicity lambda of the signed
    support (1 for ordinary arrays).
    """

    m: int
    n: int
    v: int
    t: int
    fold: int
    cells: tuple[tuple[int | None, ...], ...]

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError("array dimensions must be positive")
        if self.v < 1 or self.t < 1 or self.fold < 1:
            raise ValueError("v, t and fold must be positive")
        if self.v % self.t != 0:
            raise ValueError(f"t={self.t} does not divide v={self.v}")
        if len(self.cells) != self.m or any(len(r) != self.n for r in self.cells):
            raise ValueError("cell grid does not match declared dimensions")
        for row in self.cells:
            for x in row:
                if x is not None and not (0 <= x < self.v):
                    raise ValueError(f"entry {x} outside [0, {self.v - 1}]")

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_rows(
        cls,
        rows: Sequence[Sequence[int | None]],
        v: int,
        t: int = 1,
        fold: int = 1,
    ) -> "PartiallyFilledArray":
        """Build from signed integer rows; entries are reduced mod v."""
        cells = tuple(
            tuple(None if x is None else x % v for x in row) for row in rows
        )
        return cls(len(cells), len(cells[0]) if cells else 0, v, t, fold, cells)

    # -- cell access (1-based) --------------------------------------------------

    def entry(self, i: int, j: int) -> int | None:
        return self.cells[i - 1][j - 1]

    def signed_entry(self, i: int, j: int) -> int | None:
        x = self.entry(i, j)
        return None if x is None else signed(x, self.v)

    def row_values(self, i: int) -> tuple[int, ...]:
        """Entries of row i, left to right."""
        return tuple(x for x in self.cells[i - 1] if x is not None)

    def column_values(self, j: int) -> tuple[int, ...]:
        """Entries of column j, top to bottom."""
        return tuple(r[j - 1] for r in self.cells if r[j - 1] is not None)

    def entries(self) -> tuple[int, ...]:
        """All filled entries, row-major."""
        return tuple(x for row in self.cells for x in row if x is not None)

    def skeleton(self) -> Skeleton:
        filled = frozenset(
            (i + 1, j + 1)
            for i, row in enumerate(self.cells)
            for j, x in enumerate(row)
            if x is not None
        )
        return Skeleton(self.m, self.n, filled)

    # -- transformations --------------------------------------------------------

    def transpose(self) -> "PartiallyFilledArray":
        cells = tuple(
            tuple(self.cells[i][j] for i in range(self.m)) for j in range(self.n)
        )
        return PartiallyFilledArray(self.n, self.m, self.v, self.t, self.fold, cells)

    def row_translated(self, shift: int) -> "PartiallyFilledArray":
        """Cyclic row shift: row i of the result is row i-shift of self."""
        if self.m != self.n:
            raise ValueError("row translation is defined for square arrays")
        n = self.n
        cells = tuple(self.cells[(i - shift) % n] for i in range(n))
        return PartiallyFilledArray(n, n, self.v, self.t, self.fold, cells)

    def negated(self) -> "PartiallyFilledArray":
        cells = tuple(
            tuple(None if x is None else (-x) % self.v for x in row)
            for row in self.cells
        )
        return PartiallyFilledArray(self.m, self.n, self.v, self.t, self.fold, cells)

    # -- serialization -----------------------------------------------------------

    def to_text(self) -> str:
        header = f"v={self.v} t={self.t} lambda={self.fold} m={self.m} n={self.n}"
        lines = [header]
        for i in range(1, self.m + 1):
            lines.append(
                ",".join(
                    "" if x is None else str(signed(x, self.v))
                    for x in self.cells[i - 1]
                )
            )
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "v": self.v,
            "t": self.t,
            "lambda": self.fold,
            "m": self.m,
            "n": self.n,
            "cells": [
                [None if x is None else signed(x, self.v) for x in row]
                for row in self.cells
            ],
        }

    def canonical_key(self) -> tuple:
        """Hashable identity used for provenance bookkeeping."""
        return (self.m, self.n, self.v, self.t, self.fold, self.cells)


# -- parsing ---------------------------------------------------------------------

_HEADER_KEYS = {"v": "v", "t": "t", "lambda": "fold", "λ": "fold", "m": "m", "n": "n"}


def _parse_header(line: str) -> dict[str, int]:
    out: dict[str, int] = {}
    for token in line.split():
        m = re.fullmatch(r"([^=\s]+)=(-?\d+)", token)
        if not m or m.group(1) not in _HEADER_KEYS:
            raise ArrayFormatError(f"malformed header token {token!r}")
        out[_HEADER_KEYS[m.group(1)]] = int(m.group(2))
    if "v" not in out or "t" not in out:
        raise ArrayFormatError("header must define v= and t=")
    return out


def parse_array(text: str) -> PartiallyFilledArray:
    """Parse the text format (header line + comma-separated rows) or its JSON mirror.

    Empty fields are empty cells; integers may be negative and are reduced mod v.
    """
    stripped = text.lstrip()
    if not stripped:
        raise ArrayFormatError("empty input")
    if stripped.startswith("{"):
        return _parse_array_json(stripped)

    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = _parse_header(lines[0])
    v, t = head["v"], head["t"]
    if v < 1 or t < 1 or v % t != 0:
        raise ArrayFormatError(f"t={t} does not divide v={v}")
    fold = head.get("fold", 1)

    rows: list[list[int | None]] = []
    for ln in lines[1:]:
        row: list[int | None] = []
        for field in ln.split(","):
            field = field.strip()
            if not field:
                row.append(None)
                continue
            try:
                row.append(int(field) % v)
            except ValueError:
                raise ArrayFormatError(f"non-integer token {field!r}") from None
        rows.append(row)

    if not rows:
        raise ArrayFormatError("no data rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ArrayFormatError("ragged rows")
    if "m" in head and head["m"] != len(rows):
        raise ArrayFormatError(f"header m={head['m']} but {len(rows)} rows given")
    if "n" in head and head["n"] != width:
        raise ArrayFormatError(f"header n={head['n']} but rows have {width} fields")
    return PartiallyFilledArray(len(rows), width, v, t, fold, tuple(map(tuple, rows)))


def _parse_array_json(text: str) -> PartiallyFilledArray:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArrayFormatError(f"invalid JSON: {exc}") from None
    try:
        v = int(data["v"])
        t = int(data["t"])
        fold = int(data.get("lambda", 1))
        rows = data["cells"]
    except (KeyError, TypeError) as exc:
        raise ArrayFormatError(f"missing field in JSON array: {exc}") from None
    if v < 1 or t < 1 or v % t != 0:
        raise ArrayFormatError(f"t={t} does not divide v={v}")
    grid: list[list[int | None]] = []
    for row in rows:
        grid.append([None if x is None else int(x) % v for x in row])
    if not grid or any(len(r) != len(grid[0]) for r in grid):
        raise ArrayFormatError("ragged or empty cell grid")
    if "m" in data and int(data["m"]) != len(grid):
        raise ArrayFormatError("JSON m does not match cell grid")
    if "n" in data and int(data["n"]) != len(grid[0]):
        raise ArrayFormatError("JSON n does not match cell grid")
    return PartiallyFilledArray(
        len(grid), len(grid[0]), v, t, fold, tuple(map(tuple, grid))
    )


def parse_skeleton_json(text: str) -> Skeleton:
    """Parse a bare skeleton: {"m": .., "n": .., "filled": [[i, j], ...]}."""
    try:
        data = json.loads(text)
        return Skeleton(
            int(data["m"]),
            int(data["n"]),
            frozenset((int(i), int(j)) for i, j in data["filled"]),
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ArrayFormatError(f"invalid skeleton JSON: {exc}") from None


# -- diagonal structure -----------------------------------------------------------


@dataclass(frozen=True)
class DiagonalProfile:
    """Exact diagonal structure of a square skeleton.

    ``strip_widths`` lists the widths of the maximal runs of empty diagonals in
    cyclic order of their starting index; ``strip_gcds`` holds, per strip,
    gcd(n, width+1), the modulus governing which reversed-column positions can
    reconnect the tour across that strip (width+1 is the index step between the
    filled diagonals bounding the strip).
    """

    n: int
    filled_diagonals: tuple[int, ...]
    k: int
    strip_widths: tuple[int, ...]
    cyclic: bool
    strip_gcds: tuple[int, ...]


def diagonal_cells(n: int, i: int) -> tuple[tuple[int, int], ...]:
    """Cells of the i-th diagonal of an n x n grid: (i,1),(i+1,2),...,(i-1,n)."""
    return tuple(((i - 1 + c) % n + 1, c + 1) for c in range(n))


def diagonal_skeleton(n: int, diagonals: Iterable[int]) -> Skeleton:
    """Square skeleton whose filled cells are exactly the given full diagonals."""
    filled: set[tuple[int, int]] = set()
    for d in diagonals:
        d = (d - 1) % n + 1
        filled.update(diagonal_cells(n, d))
    return Skeleton(n, n, frozenset(filled))


def cyclic_diagonal_skeleton(n: int, k: int, start: int = 1) -> Skeleton:
    """Skeleton of a cyclically k-diagonal array: k consecutive diagonals."""
    if not (1 <= k <= n):
        raise ValueError("need 1 <= k <= n")
    return diagonal_skeleton(n, range(start, start + k))


def classify_diagonality(obj: Skeleton | PartiallyFilledArray) -> DiagonalProfile:
    """Diagonal profile of a square skeleton.

    Raises :class:`NotDiagonalError` if some diagonal is only partially filled
    (the structure theory assumes unions of full diagonals) and ValueError on
    non-square input.
    """
    skel = obj.skeleton() if isinstance(obj, PartiallyFilledArray) else obj
    if skel.m != skel.n:
        raise ValueError("diagonal classification needs a square skeleton")
    n = skel.n
    filled_diags: list[int] = []
    for i in range(1, n + 1):
        cells = diagonal_cells(n, i)
        hits = sum(1 for c in cells if c in skel.filled)
        if hits == n:
            filled_diags.append(i)
        elif hits != 0:
            raise NotDiagonalError(
                f"diagonal {i} is partially filled: not diagonal-structured"
            )
    if not filled_diags:
        raise NotDiagonalError("empty skeleton has no diagonal structure")

    k = len(filled_diags)
    filled_set = set(filled_diags)
    widths: list[int] = []
    for d in filled_diags:
        # strip starting just after filled diagonal d
        w = 0
        j = d % n + 1
        while j not in filled_set:
            w += 1
            j = j % n + 1
        if w:
            widths.append(w)
    cyclic = len(widths) <= 1
    return DiagonalProfile(
        n=n,
        filled_diagonals=tuple(filled_diags),
        k=k,
        strip_widths=tuple(widths),
        cyclic=cyclic,
        strip_gcds=tuple(gcd(n, w + 1) for w in widths),
    )
