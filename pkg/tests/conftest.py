import functools
import pathlib

import pytest

from siltkit.algebra import build_algebra, load_spec
from siltkit.silting import enumerate_d_silt
from siltkit.torsion import build_engine

ALG_DIR = pathlib.Path(__file__).resolve().parent.parent / "algebras"


@functools.lru_cache(maxsize=None)
def algebra(name: str):
    return build_algebra(load_spec(ALG_DIR / f"{name}.alg"))


@functools.lru_cache(maxsize=None)
def silt(name: str, d: int):
    return enumerate_d_silt(algebra(name), d)


@functools.lru_cache(maxsize=None)
def engine(name: str, d: int):
    return build_engine(algebra(name), d)


@pytest.fixture
def a2():
    return algebra("a2")


@pytest.fixture
def nak2():
    return algebra("nakayama2")
