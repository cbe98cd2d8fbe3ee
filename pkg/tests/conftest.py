import functools
from pathlib import Path

import pytest

from adetorelli.instance import parse_instance

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


@functools.lru_cache(maxsize=None)
def load(name: str):
    """Parsed bundled instance; cached so memoized pieces are shared across tests."""
    return parse_instance(INSTANCES / f"{name}.json")


@pytest.fixture
def instance_path():
    return lambda name: INSTANCES / f"{name}.json"
