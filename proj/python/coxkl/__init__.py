"""Springer's poset V, twisted Bruhat orders and their R- and KL-polynomials."""

import json
import os

from ._coxkl import InfiniteGroupError, NotInOmegaError, Session, __version__, suite_names

__all__ = ["InfiniteGroupError", "NotInOmegaError", "Session", "__version__", "suite_names", "load"]


def load(system, hat=None):
    """Build a Session from file paths or already-parsed JSON objects."""

    def read(obj):
        if obj is None:
            return {}
        if isinstance(obj, (str, os.PathLike)):
            with open(obj, encoding="utf-8") as fh:
                return json.load(fh)
        return obj

    return Session(json.dumps(read(system)), json.dumps(read(hat)))
