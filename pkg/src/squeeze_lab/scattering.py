"""Reflection and transmission amplitudes of a transfer matrix.

Incidence is from the left: ``psi = e^{ikx} + r e^{-ikx}`` for ``x < 0`` and
``psi = t e^{ikx}`` for ``x > 0``.  Requiring ``M (psi, psi')(-0) =
(psi, psi')(+0)`` gives, with ``A = ik m11 - m21`` and
``B = ik m22 + k^2 m12``::

    t = 2ik det(M) / (A + B),   r = (B - A) / (A + B).

Complex numbers appear only here; everything upstream is real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classify import LimitInteraction, LimitKind, classify
from .errors import DomainError, NonUnimodular, NotConvergedInput
from .paths import SqueezePath
from .transfer import RegularizedSystem, TransferMatrix, stack_matrix

DET_TOL = 1e-8


@dataclass(frozen=True)
class ScatteringResult:
    t_re: float
    t_im: float
    r_re: float
    r_im: float
    T: float
    R: float

    @property
    def t(self) -> complex:
        return complex(self.t_re, self.t_im)

    @property
    def r(self) -> complex:
        return complex(self.r_re, self.r_im)

    @classmethod
    def from_amplitudes(cls, t, r):
        return cls(t.real, t.imag, r.real, r.imag, abs(t) ** 2, abs(r) ** 2)


def scatter(m: TransferMatrix, k) -> ScatteringResult:
    """Amplitudes for a plane wave of wavenumber ``k`` hitting ``m`` from the left.

    Raises
    ------
    NonUnimodular
        When ``|det m - 1| > 1e-8``.
    """
    if not k > 0:
        raise DomainError("k must be positive")
    det = m.det
    if not abs(det - 1.0) <= DET_TOL:
        raise NonUnimodular(f"det = {det!r} differs from 1 by more than {DET_TOL:g}")
    A = 1j * k * m.m11 - m.m21
    B = 1j * k * m.m22 + k * k * m.m12
    den = A + B
    t = 2j * k * det / den
    r = (B - A) / den
    return ScatteringResult.from_amplitudes(t, r)


def scatter_limit(li: LimitInteraction, k) -> ScatteringResult:
    """Scattering off a limit interaction; the separated limit is opaque."""
    if not k > 0:
        raise DomainError("k must be positive")
    if li.kind is LimitKind.NOT_CONVERGED:
        raise NotConvergedInput("no scattering data for a limit that did not converge")
    if li.kind is LimitKind.SEPARATED_DIRICHLET:
        return ScatteringResult(0.0, 0.0, -1.0, 0.0, 0.0, 1.0)
    return scatter(li.matrix, k)


@dataclass
class SweepTable:
    k: np.ndarray
    T: np.ndarray
    R: np.ndarray
    mode: str

    def rows(self):
        return list(zip(self.k.tolist(), self.T.tolist(), self.R.tolist()))


def transmission_sweep(
    a=None,
    path: SqueezePath | None = None,
    eps=None,
    l=None,
    r=None,
    k_range=(0.1, 10.0),
    samples=50,
    interaction: LimitInteraction | None = None,
) -> SweepTable:
    """``T(k)`` and ``R(k)`` on a uniform ``k`` grid.

    Modes, picked from the arguments:

    * ``interaction`` given: scatter off that limit interaction;
    * ``a`` and ``path`` without ``eps``: scatter off ``classify(a, path)``;
    * ``a`` with ``eps`` and ``path``: finite regularization along the path;
    * ``a`` with ``eps``, ``l``, ``r``: explicit finite regularization.
    """
    if samples < 1:
        raise DomainError("samples must be >= 1")
    lo, hi = float(k_range[0]), float(k_range[1])
    if not (0 < lo <= hi):
        raise DomainError("k_range must satisfy 0 < k_min <= k_max")
    ks = np.linspace(lo, hi, samples)
    if interaction is None and a is not None and path is not None and eps is None:
        interaction = classify(a, path)
    if interaction is not None:
        res = [scatter_limit(interaction, float(k)) for k in ks]
        mode = "limit"
    else:
        if a is None or eps is None:
            raise DomainError("finite mode needs intensities and eps")
        if path is not None:
            l, r = path.lengths(float(eps))
        if l is None or r is None:
            raise DomainError("finite mode needs a path or explicit l and r")
        res = [
            scatter(stack_matrix(RegularizedSystem(tuple(a), float(eps), l, r, float(k))), float(k))
            for k in ks
        ]
        mode = "finite"
    return SweepTable(
        ks, np.array([x.T for x in res]), np.array([x.R for x in res]), mode
    )


def diagonal_transmission(theta) -> float:
    """``T = 4 / (theta + 1/theta)^2`` for ``diag(theta, 1/theta)``."""
    if theta == 0 or not math.isfinite(theta):
        raise DomainError("theta must be finite and nonzero")
    return 4.0 / (theta + 1.0 / theta) ** 2
