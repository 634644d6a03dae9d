"""Python access to the KZ verifier: certificates come back as dicts."""

import json

from . import _core
from ._core import KzpError, check_names, formal_dimension, genus, psi

__all__ = [
    "KzpError",
    "check_names",
    "families",
    "formal_dimension",
    "genus",
    "psi",
    "run_check",
    "run_suite",
]


def families(n, p, h):
    """Both p-hypergeometric families as polynomial JSON objects."""
    return json.loads(_core.families(n, p, h))


def run_suite(n, p, h, **kwargs):
    return [json.loads(s) for s in _core.run_suite(n, p, h, **kwargs)]


def run_check(name, n, p, h, **kwargs):
    return [json.loads(s) for s in _core.run_check(name, n, p, h, **kwargs)]
