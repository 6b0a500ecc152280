"""Index iteration, common index jumps and Morse bookkeeping for closed geodesics on S^3."""

import json

from ._geoindex import GeoindexError, System
from . import _geoindex

__all__ = ["GeoindexError", "System", "load_system", "jump_search", "run_pipeline", "reverify"]


def load_system(source):
    """Builds a System from a dict or a JSON string."""
    text = source if isinstance(source, str) else json.dumps(source)
    return System.from_json(text)


def jump_search(system, delta, epsilon=None, n_min=1, n_max=10_000_000, curves=()):
    return json.loads(_geoindex.jump_search(system, str(delta), None if epsilon is None else str(epsilon),
                                            n_min, n_max, list(curves)))


def run_pipeline(system, delta="1/64", epsilon="1/64", n_min=1, n_max=10_000_000, p_hat=4):
    return json.loads(_geoindex.run_pipeline(system, str(delta), str(epsilon), n_min, n_max, p_hat))


def reverify(report):
    text = report if isinstance(report, str) else json.dumps(report)
    return json.loads(_geoindex.reverify(text))
