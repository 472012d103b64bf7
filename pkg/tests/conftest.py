"""Shared fixtures: bundled arrays, golden files, and searched test arrays."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import pytest

from heffter import kernels
from heffter.pfarray import (
    PartiallyFilledArray,
    Skeleton,
    diagonal_skeleton,
    parse_array,
    parse_skeleton_json,
)
from heffter.validation import search_heffter

GOLDEN_DIR = Path(__file__).parent / "golden"


def load_golden(name: str) -> dict:
    with open(GOLDEN_DIR / name) as f:
        return json.load(f)


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("heffter") / "data" / name))


@pytest.fixture(scope="session", autouse=True)
def warm_kernels() -> None:
    # compile (or no-op) once so acceptance timings measure steady state
    kernels.warm_up()


@pytest.fixture(scope="session")
def ex_array() -> PartiallyFilledArray:
    """The bundled 11x11 array over Z_207 relative to the order-9 subgroup."""
    return parse_array(fixture_path("h9_11_9.arr").read_text())


@pytest.fixture(scope="session")
def ex_pair() -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The orientation pair (all +1 rows; first column reversed) of the goldens."""
    return (1,) * 11, (-1,) + (1,) * 10


@pytest.fixture(scope="session")
def lambda2_array() -> PartiallyFilledArray:
    return parse_array(fixture_path("lambda2_2x5.arr").read_text())


@pytest.fixture(scope="session")
def cr_skeleton() -> Skeleton:
    return parse_skeleton_json(fixture_path("cr_6x6.skel.json").read_text())


@pytest.fixture(scope="session")
def h33() -> PartiallyFilledArray:
    """A searched 3x3 fully filled array over Z_19."""
    found = search_heffter(3, 3, 3, 3, 1, limit=1)
    assert found
    return found[0]


@pytest.fixture(scope="session")
def h53_cyclic() -> PartiallyFilledArray:
    """A searched 5x5 cyclically 3-diagonal array over Z_31."""
    found = search_heffter(5, 5, 3, 3, 1, limit=1, skeleton="cyclic")
    assert found
    return found[0]


@pytest.fixture(scope="session")
def h53_centered() -> PartiallyFilledArray:
    """A 5x5 cyclic array on diagonals {5, 1, 2}, whose skeleton equals its transpose."""
    skel = diagonal_skeleton(5, (5, 1, 2))
    found = search_heffter(5, 5, 3, 3, 1, limit=1, skeleton=skel)
    assert found
    return found[0]
