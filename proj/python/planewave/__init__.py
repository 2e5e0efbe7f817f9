"""Plane-wave metrics: form conversions, symmetry algebras and equivalence decisions.

Documents (metrics, profiles, sequences, maps, fields) are plain dicts in the
JSON layout of the shipped schemas; reports come back as dicts.
"""

import json as _json

from . import _planewave as _core
from ._planewave import (
    PlanewaveError,
    bump_exponent,
    bump_exponent_minimum,
    run_cli,
    trace_decompose,
)

__all__ = [
    "PlanewaveError",
    "bernoulli_shift",
    "bump_exponent",
    "bump_exponent_minimum",
    "conformal",
    "convert",
    "equiv",
    "error_code",
    "family",
    "family_profile",
    "hilbert_distance",
    "is_conformally_curved",
    "is_flat",
    "is_vacuum",
    "killing",
    "metric_components",
    "profile_eval",
    "rosen_equiv",
    "run_cli",
    "shift_equivalent",
    "trace_decompose",
    "verify",
]


def _dump(doc):
    return doc if isinstance(doc, str) else _json.dumps(doc)


def _opt(doc):
    return None if doc is None else _dump(doc)


def error_code(exc):
    """Machine-readable code of a PlanewaveError, e.g. "schema" or "out_of_domain"."""
    return exc.args[0] if exc.args else None


def convert(metric, to="", u0=None, **settings):
    return _json.loads(_core.convert(_dump(metric), to, u0, **settings))


def killing(metric, **settings):
    return _json.loads(_core.killing(_dump(metric), **settings))


def conformal(metric, microcosm=False, **settings):
    return _json.loads(_core.conformal(_dump(metric), microcosm, **settings))


def equiv(first, second, **settings):
    return _json.loads(_core.equiv(_dump(first), _dump(second), **settings))


def rosen_equiv(first, second, **settings):
    return _json.loads(_core.rosen_equiv(_dump(first), _dump(second), **settings))


def family(alpha, beta=None, shift=None, crosscheck=False, k_max=30, **settings):
    return _json.loads(_core.family(_dump(alpha), _opt(beta), shift, crosscheck, k_max, **settings))


def verify(metric, field=None, map=None, target=None, factor=None, **settings):
    return _json.loads(_core.verify(_dump(metric), _opt(field), _opt(map), _opt(target), factor, **settings))


def profile_eval(profile, u, order=0):
    return _core.profile_eval(_dump(profile), u, order)


def metric_components(metric, u, v, x):
    return _core.metric_components(_dump(metric), u, v, x)


def is_vacuum(metric, tol=1e-10):
    return _core.is_vacuum(_dump(metric), tol)


def is_flat(metric, tol=1e-10):
    return _core.is_flat(_dump(metric), tol)


def is_conformally_curved(metric, tol=1e-10):
    return _core.is_conformally_curved(_dump(metric), tol)


def family_profile(alpha, u, order=0):
    return _core.family_profile(_dump(alpha), u, order)


def bernoulli_shift(alpha, m):
    return _json.loads(_core.bernoulli_shift(_dump(alpha), m))


def shift_equivalent(alpha, beta):
    return _core.shift_equivalent(_dump(alpha), _dump(beta))


def hilbert_distance(alpha, beta, k_max=30):
    return _core.hilbert_distance(_dump(alpha), _dump(beta), k_max)
