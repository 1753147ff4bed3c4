"""Real entire kernels ``cos(sqrt(a))``, ``sin(sqrt(a))/sqrt(a)`` and the
quotient ``tan(sqrt(a))/sqrt(a)``.

Writing every transfer-matrix element and resonance function through these
keeps the arithmetic real for wells (``a > 0``) and barriers (``a < 0``)
alike: for negative arguments the trigonometric functions turn into their
hyperbolic counterparts automatically.

All three functions accept scalars or array-likes and return a ``float`` for
scalar input.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import PoleProximity

SERIES_CUTOFF = 1e-4
SERIES_TERMS = 6
POLE_GUARD = 1e-8

# Taylor coefficients (-1)^n/(2n)! and (-1)^n/(2n+1)!, highest order first
_C_COEF = [(-1) ** n / math.factorial(2 * n) for n in reversed(range(SERIES_TERMS))]
_S_COEF = [(-1) ** n / math.factorial(2 * n + 1) for n in reversed(range(SERIES_TERMS))]


def _horner(coef, a):
    acc = np.zeros_like(a)
    for c in coef:
        acc = acc * a + c
    return acc


def _as_float_array(a):
    arr = np.asarray(a, dtype=float)
    if np.any(np.isnan(arr)):
        raise ValueError("argument must not be NaN")
    return arr


def _cfun_scalar(a):
    if math.isnan(a):
        raise ValueError("argument must not be NaN")
    if abs(a) < SERIES_CUTOFF:
        acc = 0.0
        for c in _C_COEF:
            acc = acc * a + c
        return acc
    if a >= 0:
        return math.cos(math.sqrt(a))
    try:
        return math.cosh(math.sqrt(-a))
    except OverflowError:
        return math.inf


def _sfun_scalar(a):
    if math.isnan(a):
        raise ValueError("argument must not be NaN")
    if abs(a) < SERIES_CUTOFF:
        acc = 0.0
        for c in _S_COEF:
            acc = acc * a + c
        return acc
    if a >= 0:
        x = math.sqrt(a)
        return math.sin(x) / x
    y = math.sqrt(-a)
    try:
        return math.sinh(y) / y
    except OverflowError:
        return math.inf


def cfun(a):
    """``cos(sqrt(a))`` for ``a >= 0`` and ``cosh(sqrt(-a))`` for ``a < 0``."""
    if np.ndim(a) == 0:
        return _cfun_scalar(float(a))
    a = np.atleast_1d(_as_float_array(a))
    out = np.empty_like(a)
    small = np.abs(a) < SERIES_CUTOFF
    pos = (a >= 0) & ~small
    neg = (a < 0) & ~small
    out[small] = _horner(_C_COEF, a[small])
    out[pos] = np.cos(np.sqrt(a[pos]))
    with np.errstate(over="ignore"):
        out[neg] = np.cosh(np.sqrt(-a[neg]))
    return out


def sfun(a):
    """``sin(sqrt(a))/sqrt(a)``, continued through ``a = 0`` (value 1) and
    to ``sinh(sqrt(-a))/sqrt(-a)`` for negative arguments.

    The normalisation is chosen so that ``sqrt(a)*sin(sqrt(a)) == a*sfun(a)``.
    """
    if np.ndim(a) == 0:
        return _sfun_scalar(float(a))
    a = np.atleast_1d(_as_float_array(a))
    out = np.empty_like(a)
    small = np.abs(a) < SERIES_CUTOFF
    pos = (a >= 0) & ~small
    neg = (a < 0) & ~small
    out[small] = _horner(_S_COEF, a[small])
    x = np.sqrt(a[pos])
    out[pos] = np.sin(x) / x
    y = np.sqrt(-a[neg])
    with np.errstate(over="ignore"):
        out[neg] = np.sinh(y) / y
    return out


def ufun(a, guard=POLE_GUARD):
    """``tan(sqrt(a))/sqrt(a)`` (``tanh(sqrt(-a))/sqrt(-a)`` for ``a < 0``).

    Raises
    ------
    PoleProximity
        If ``|cfun(a)| < guard`` for any element, i.e. ``a`` sits next to a
        pole ``((n + 1/2) pi)^2``.
    """
    if np.ndim(a) == 0:
        c = cfun(a)
        if abs(c) < guard:
            raise PoleProximity(float(a), c)
        return sfun(a) / c
    c = cfun(a)
    s = sfun(a)
    bad = np.abs(np.atleast_1d(c)) < guard
    if np.any(bad):
        where = np.atleast_1d(np.asarray(a, dtype=float))[bad][0]
        raise PoleProximity(float(where), np.atleast_1d(c)[bad][0])
    return s / c
