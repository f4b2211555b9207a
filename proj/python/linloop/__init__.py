"""Validated robust escape analysis for linear and affine loops."""

import json

from . import _core
from ._core import InstanceError, PreconditionError, char_poly, decide_1x1, root_enclosures

__all__ = [
    "InstanceError",
    "PreconditionError",
    "analyze",
    "char_poly",
    "decide_1x1",
    "homogenise",
    "replay_certificate",
    "root_enclosures",
    "sample_instances",
    "simulate",
]


def _text(instance):
    return instance if isinstance(instance, str) else json.dumps(instance)


def analyze(instance, max_budget=8):
    """Verdict dict {verdict, budget_used, certificate?, stats}."""
    return json.loads(_core.decide_json(_text(instance), max_budget))


def replay_certificate(instance, certificate):
    return _core.replay_certificate(_text(instance), _text(certificate))


def homogenise(instance):
    return json.loads(_core.homogenise(_text(instance)))


def simulate(instance, point, steps, closed=False):
    """(status, steps) for the exact orbit of `point`; coordinates may be ints or fraction strings."""
    return _core.simulate(_text(instance), [str(x) for x in point], steps, closed)


def sample_instances(n, m, kind, count, seed):
    return [json.loads(s) for s in _core.sample_instances(n, m, kind, count, seed)]
