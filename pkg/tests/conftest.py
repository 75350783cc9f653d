"""Shared fixtures: memoized operator caches for the built-in structures."""

import pytest

from nilcoh.catalog import get
from nilcoh.deform import frame_change
from nilcoh.dsl import parse_gauss
from nilcoh.linalg import OperatorCache

_CACHE = {}
_VALIDATIONS = {}


def validation_for(name):
    """Memoized full validation report for a catalog entry (grids are costly)."""
    if name not in _VALIDATIONS:
        _VALIDATIONS[name] = get(name).spec.validate()
    return _VALIDATIONS[name]


def ops_for(name, **assign):
    """OperatorCache for a catalog entry, optionally at a sample.

    String values go through the scalar parser, so ops_for("example31", t="1/2")
    concretizes the deformation family at t = 1/2.  Caches are shared across
    tests; callers must not mutate them.
    """
    key = (name, tuple(sorted(assign.items())))
    if key not in _CACHE:
        entry = get(name)
        spec = entry.spec
        if assign:
            values = {k: parse_gauss(v) for k, v in assign.items()}
            if entry.family is not None and not spec.params:
                spec = frame_change(entry.family, values)
            else:
                spec = spec.evaluate(values)
        _CACHE[key] = OperatorCache(spec)
    return _CACHE[key]


@pytest.fixture(scope="session")
def ops():
    return ops_for
