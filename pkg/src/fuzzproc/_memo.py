"""Opt-in call memoization for the operator functions.

The law engine sweeps millions of operator applications over a small interned
process space, so repeated calls dominate. Inside an ``op_memo()`` block the
decorated functions cache results keyed by their arguments; outside it they
are plain pure functions. A ContextVar keeps the cache local to the current
thread of control.
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from functools import wraps

_ACTIVE: ContextVar[dict | None] = ContextVar("fuzzproc_op_memo", default=None)
_MISS = object()


@contextmanager
def op_memo():
    token = _ACTIVE.set({})
    try:
        yield
    finally:
        _ACTIVE.reset(token)


def memoized_op(fn):
    name = fn.__name__

    @wraps(fn)
    def wrapper(*args):
        cache = _ACTIVE.get()
        if cache is None:
            return fn(*args)
        key = (name, *args)
        hit = cache.get(key, _MISS)
        if hit is _MISS:
            hit = fn(*args)
            cache[key] = hit
        return hit

    return wrapper
