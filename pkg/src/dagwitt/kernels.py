"""Hot inner loop: sparse polynomial products.

The compiled extension ``dagwitt._ext._kernels`` is used when it imports and
the coefficient modulus fits in 31 bits; otherwise the pure-Python loop runs.
Set ``DAGWITT_PURE=1`` to force the fallback at import time, or call
:func:`set_backend` at runtime.
"""
from __future__ import annotations

import os

import numpy as np

try:
    if os.environ.get("DAGWITT_PURE"):
        raise ImportError("pure backend forced")
    from ._ext._kernels import mul_packed as _c_mul_packed
except ImportError:
    _c_mul_packed = None

BACKEND = "cython" if _c_mul_packed is not None else "python"

_SMALL = 48  # below na*nb the conversion overhead dominates
_MOD_LIMIT = 1 << 31


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _c_mul_packed is not None else [])


def set_backend(name: str) -> None:
    global BACKEND
    if name not in available_backends():
        raise ValueError(f"backend {name!r} unavailable")
    BACKEND = name


def mul_terms_python(a: dict, b: dict, modulus: int | None) -> dict:
    out: dict = {}
    get = out.get
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = get(e, 0) + ca * cb
    if modulus is None:
        return {e: c for e, c in out.items() if c}
    res = {}
    for e, c in out.items():
        c %= modulus
        if c:
            res[e] = c
    return res


def _pack(terms: dict, radices: list[int]):
    keys = np.empty(len(terms), dtype=np.int64)
    coefs = np.empty(len(terms), dtype=np.int64)
    for n, (e, c) in enumerate(terms.items()):
        k = 0
        for x, r in zip(reversed(e), reversed(radices)):
            k = k * r + x
        keys[n] = k
        coefs[n] = c
    return keys, coefs


def _unpack(keys, coefs, radices: list[int]) -> dict:
    out = {}
    nv = len(radices)
    for k, c in zip(keys.tolist(), coefs.tolist()):
        e = [0] * nv
        for i, r in enumerate(radices):
            k, e[i] = divmod(k, r)
        out[tuple(e)] = c
    return out


def mul_terms(a: dict, b: dict, modulus: int | None) -> dict:
    """Product of two term dictionaries ``{exponent tuple: int}``."""
    if not a or not b:
        return {}
    if (
        BACKEND == "cython"
        and modulus is not None
        and modulus < _MOD_LIMIT
        and len(a) * len(b) > _SMALL
    ):
        nv = len(next(iter(a)))
        radices = []
        for i in range(nv):
            radices.append(max(e[i] for e in a) + max(e[i] for e in b) + 1)
        keyrange = 1
        for r in radices:
            keyrange *= r
        if keyrange < (1 << 62):
            ka, ca = _pack({e: c % modulus for e, c in a.items()}, radices)
            kb, cb = _pack({e: c % modulus for e, c in b.items()}, radices)
            keys, coefs = _c_mul_packed(ka, ca, kb, cb, modulus, keyrange)
            return _unpack(keys, coefs, radices)
    return mul_terms_python(a, b, modulus)
