"""Exact transfer matrices of the layered (regularized) multi-delta profile.

Convention: a matrix maps ``(psi, psi')`` on the left edge of a region to the
right edge, so a stack is the right-to-left product
``layer_N . gap . ... . gap . layer_1``.

Products are accumulated in double-double arithmetic. The ``m21`` element
grows like ``1/eps`` while the determinant must stay 1, and plain double
products lose the Wronskian at the ``1e-10`` level once the entries reach
``~1e5``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .entire import cfun, sfun
from .errors import DomainError

# ---------------------------------------------------------------------------
# double-double helpers (Dekker / Knuth error-free transforms)

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    if not math.isfinite(p):
        return p, 0.0
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_mul(xh, xl, yh, yl):
    p, e = _two_prod(xh, yh)
    e += xh * yl + xl * yh
    s = p + e
    return s, e - (s - p)


def _dd_add(xh, xl, yh, yl):
    s, e = _two_sum(xh, yh)
    e += xl + yl
    h = s + e
    return h, e - (h - s)


def _dd_dot2(a, b, c, d):
    """``a*b + c*d`` for double-double operands given as (hi, lo) pairs."""
    return _dd_add(*_dd_mul(*a, *b), *_dd_mul(*c, *d))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransferMatrix:
    """Real 2x2 matrix ``[[m11, m12], [m21, m22]]`` at fixed wavenumber.

    ``lo`` carries the low-order words of a double-double representation;
    it is zero for matrices built directly from closed forms.
    """

    m11: float
    m12: float
    m21: float
    m22: float
    lo: tuple = field(default=(0.0, 0.0, 0.0, 0.0), compare=False, repr=False)

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr, dtype=float)
        return cls(float(arr[0, 0]), float(arr[0, 1]), float(arr[1, 0]), float(arr[1, 1]))

    def _dd(self):
        l11, l12, l21, l22 = self.lo
        return (self.m11, l11), (self.m12, l12), (self.m21, l21), (self.m22, l22)

    def __matmul__(self, other):
        if not isinstance(other, TransferMatrix):
            return NotImplemented
        a11, a12, a21, a22 = self._dd()
        b11, b12, b21, b22 = other._dd()
        c11 = _dd_dot2(a11, b11, a12, b21)
        c12 = _dd_dot2(a11, b12, a12, b22)
        c21 = _dd_dot2(a21, b11, a22, b21)
        c22 = _dd_dot2(a21, b12, a22, b22)
        return TransferMatrix(
            c11[0], c12[0], c21[0], c22[0], lo=(c11[1], c12[1], c21[1], c22[1])
        )

    @property
    def det(self):
        """Determinant, evaluated in double-double from the stored words."""
        a11, a12, a21, a22 = self._dd()
        h1, l1 = _dd_mul(*a11, *a22)
        h2, l2 = _dd_mul(*a12, *a21)
        h, lo = _dd_add(h1, l1, -h2, -l2)
        return h + lo

    @property
    def entries(self):
        return (self.m11, self.m12, self.m21, self.m22)

    def as_array(self):
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def is_finite(self):
        return all(math.isfinite(x) for x in self.entries)


@dataclass(frozen=True)
class RegularizedSystem:
    """Layered profile of ``N`` rectangular wells/barriers of width ``l``
    and depth ``-a_j/(eps*l)``, separated by equal gaps ``r``.

    ``l = 0`` means ideal delta functions of strength ``-a_j/eps``.
    """

    intensities: tuple
    eps: float
    l: float
    r: float
    k: float

    def __post_init__(self):
        a = tuple(float(x) for x in self.intensities)
        object.__setattr__(self, "intensities", a)
        if len(a) < 1:
            raise DomainError("at least one intensity is required")
        if any(x == 0.0 or not math.isfinite(x) for x in a):
            raise DomainError("intensity must be nonzero and finite")
        if not self.eps > 0:
            raise DomainError("eps must be positive")
        if not self.k > 0:
            raise DomainError("k must be positive")
        if self.l < 0 or self.r < 0:
            raise DomainError("layer width l and gap r must be non-negative")

    @property
    def n(self):
        return len(self.intensities)


def gap_matrix(r, k):
    """Free propagation across a gap of length ``r`` at wavenumber ``k``."""
    if r < 0 or k <= 0:
        raise DomainError("gap_matrix needs r >= 0 and k > 0")
    c = math.cos(k * r)
    s = math.sin(k * r)
    return TransferMatrix(c, s / k, -k * s, c)


def layer_matrix(a, eps, l, k):
    """One rectangular layer of width ``l`` and depth ``-a/(eps*l)``.

    With ``w = k_j^2 l^2 = (k^2 + a/(eps*l)) l^2`` the matrix is
    ``[[cfun(w), l*sfun(w)], [-(w/l)*sfun(w), cfun(w)]]``, real for either
    sign of ``k_j^2``.
    """
    if eps <= 0 or l <= 0 or k <= 0:
        raise DomainError("layer_matrix needs eps > 0, l > 0, k > 0")
    # w/l computed without dividing by a possibly tiny l
    w_over_l = k * k * l + a / eps
    w = w_over_l * l
    c = cfun(w)
    s = sfun(w)
    return TransferMatrix(c, l * s, -w_over_l * s, c)


def delta_matrix(a, eps):
    """Ideal delta of strength ``-a/eps``: ``[[1, 0], [-a/eps, 1]]``."""
    if eps <= 0:
        raise DomainError("delta_matrix needs eps > 0")
    q = a / eps
    # remainder of the division, so that sums of -a_j/eps cancel exactly
    p, e = _two_prod(q, eps)
    lo = ((a - p) - e) / eps
    return TransferMatrix(1.0, 0.0, -q, 1.0, lo=(0.0, 0.0, -lo, 0.0))


def _factors(system: RegularizedSystem):
    a, eps, l, r, k = system.intensities, system.eps, system.l, system.r, system.k
    if l == 0.0:
        layers = [delta_matrix(x, eps) for x in a]
    else:
        layers = [layer_matrix(x, eps, l, k) for x in a]
    gap = gap_matrix(r, k) if r > 0 else None
    return layers, gap


def stack_matrix(system: RegularizedSystem) -> TransferMatrix:
    """Transfer matrix of the whole stack (layer 1 applied first)."""
    layers, gap = _factors(system)
    m = layers[0]
    for layer in layers[1:]:
        if gap is not None:
            m = gap @ m
        m = layer @ m
    return m


def stack_factors(system: RegularizedSystem) -> list:
    """The individual factors of :func:`stack_matrix`, rightmost first."""
    layers, gap = _factors(system)
    out = [layers[0]]
    for layer in layers[1:]:
        out.append(gap if gap is not None else TransferMatrix.identity())
        out.append(layer)
    return out


def stack(a: Sequence[float], eps, l, r, k=1.0) -> TransferMatrix:
    """Shorthand for ``stack_matrix(RegularizedSystem(a, eps, l, r, k))``."""
    return stack_matrix(RegularizedSystem(tuple(a), eps, l, r, k))
