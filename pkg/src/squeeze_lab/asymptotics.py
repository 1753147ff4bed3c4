"""Asymptotic forms of the two- and three-layer transfer matrix.

Two levels are provided, both used only as validation oracles against
:func:`squeeze_lab.transfer.stack_matrix`:

``leading_forms``
    Small-gap expansion of the exact product (``cos(kr) -> 1``,
    ``sin(kr)/k -> r``, selected ``k^2 r^2`` terms kept) with the layer
    trigonometry left intact. The difference to the exact product vanishes
    as ``eps -> 0`` along every admissible path.

``scaling_forms``
    The further reduction along ``l = eps^(mu-1)``, ``r = eps^tau`` into
    powers of ``eps``: one branch for ``mu > 2`` (layer phases ``-> 0``),
    one for ``mu = 2`` (layer phases ``-> sqrt(a_j)``).  For ``mu > 2`` these
    keep only ``sin x ~ x`` and ``cos x ~ 1``; the ``O(x^2)`` corrections
    multiply ``1/eps`` terms into ``eps^(mu-3)`` contributions that are
    finite at ``mu = 3`` and divergent for ``2 < mu < 3``, which these
    reduced forms omit.
"""

from __future__ import annotations

import math

from .entire import cfun, sfun
from .errors import ArityMismatch


def _layer_parts(a, eps, l, k):
    """Return (C, P, Q) = (cos k_j l, k_j sin k_j l, sin(k_j l)/k_j)."""
    if l == 0.0:
        return 1.0, a / eps, 0.0
    w_over_l = k * k * l + a / eps
    w = w_over_l * l
    s = sfun(w)
    return cfun(w), w_over_l * s, l * s


def leading_forms(a, eps, l, r, k=1.0):
    """Small-gap asymptotes of ``(m11, m12, m21, m22)`` for ``N = 2, 3``."""
    if len(a) == 2:
        (C1, P1, Q1), (C2, P2, Q2) = (_layer_parts(x, eps, l, k) for x in a)
        m11 = C1 * C2 - P1 * Q2 - r * P1 * C2
        m12 = 0.0
        m21 = -P1 * C2 - C1 * P2 + r * P1 * P2
        m22 = C1 * C2 - P2 * Q1 - r * C1 * P2
        return m11, m12, m21, m22
    if len(a) == 3:
        (C1, P1, Q1), (C2, P2, Q2), (C3, P3, Q3) = (_layer_parts(x, eps, l, k) for x in a)
        r2 = r * r
        m11 = (
            C1 * C2 * C3 - P1 * Q2 * C3 - P1 * C2 * Q3 - C1 * P2 * Q3
            - 2 * r * P1 * C2 * C3 - r * C1 * P2 * C3
            + r2 * P1 * P2 * C3 + r * P1 * P2 * Q3
        )
        m12 = -r2 * C1 * P2 * C3
        m21 = (
            -P1 * C2 * C3 - C1 * P2 * C3 - C1 * C2 * P3
            + r * P1 * P2 * C3 + 2 * r * P1 * C2 * P3 + r * C1 * P2 * P3
            + P1 * P3 * Q2 - r2 * P1 * P2 * P3
            + k * k * r2 * C2 * (P1 * C3 + C1 * P3)
        )
        m22 = (
            C1 * C2 * C3 - P2 * Q1 * C3 - P3 * Q1 * C2 - C1 * P3 * Q2
            - 2 * r * C1 * C2 * P3 - r * C1 * P2 * C3
            + r2 * C1 * P2 * P3 + r * P2 * P3 * Q1
        )
        return m11, m12, m21, m22
    raise ArityMismatch("asymptotic forms exist for N = 2 and N = 3 only")


def _pow(eps, p):
    if p == math.inf:
        return 0.0
    if p == -math.inf:
        return math.inf
    return eps ** p


def scaling_forms(a, eps, mu, tau, k=1.0):
    """Power-of-``eps`` asymptotes along the path ``(mu, tau)``."""
    n = len(a)
    if n not in (2, 3):
        raise ArityMismatch("asymptotic forms exist for N = 2 and N = 3 only")
    e_t1 = _pow(eps, tau - 1)
    e_t2 = _pow(eps, tau - 2)
    e_2t1 = _pow(eps, 2 * tau - 1)
    e_2t3 = _pow(eps, 2 * tau - 3)
    if mu == 2:
        c = [cfun(x) for x in a]
        s = [sfun(x) for x in a]
        if n == 2:
            (a1, a2), (c1, c2), (s1, s2) = a, c, s
            m11 = c1 * c2 - a1 * s1 * s2 - a1 * s1 * c2 * e_t1
            m22 = c1 * c2 - a2 * s1 * s2 - a2 * c1 * s2 * e_t1
            m21 = -(a1 * s1 * c2 + a2 * c1 * s2) / eps + a1 * a2 * s1 * s2 * e_t2
            return m11, 0.0, m21, m22
        (a1, a2, a3), (c1, c2, c3), (s1, s2, s3) = a, c, s
        e_2t2 = _pow(eps, 2 * (tau - 1))
        m11 = (
            c1 * c2 * c3 - a1 * s1 * s2 * c3 - a1 * s1 * c2 * s3 - a2 * c1 * s2 * s3
            + (a1 * a2 * s1 * s2 * s3 - 2 * a1 * s1 * c2 * c3 - a2 * c1 * s2 * c3) * e_t1
            + a1 * a2 * s1 * s2 * c3 * e_2t2
        )
        m22 = (
            c1 * c2 * c3 - a2 * s1 * s2 * c3 - a3 * s1 * c2 * s3 - a3 * c1 * s2 * s3
            + (a2 * a3 * s1 * s2 * s3 - 2 * a3 * c1 * c2 * s3 - a2 * c1 * s2 * c3) * e_t1
            + a2 * a3 * c1 * s2 * s3 * e_2t2
        )
        m12 = -a2 * s2 * c1 * c3 * e_2t1
        m21 = (
            (a1 * a3 * s1 * s2 * s3 - a1 * s1 * c2 * c3 - a2 * c1 * s2 * c3 - a3 * c1 * c2 * s3) / eps
            + (a1 * a2 * s1 * s2 * c3 + 2 * a1 * a3 * s1 * c2 * s3 + a2 * a3 * c1 * s2 * s3) * e_t2
            - a1 * a2 * a3 * s1 * s2 * s3 * e_2t3
            + k * k * c2 * (a1 * s1 * c3 + a3 * c1 * s3) * e_2t1
        )
        return m11, m12, m21, m22
    e_m2 = _pow(eps, mu - 2)
    e_m1 = _pow(eps, mu - 1)
    e_m3 = _pow(eps, mu - 3)
    if n == 2:
        a1, a2 = a
        m11 = 1 - a1 * (e_m2 + e_t1)
        m22 = 1 - a2 * (e_m2 + e_t1)
        m21 = -(a1 + a2) / eps + a1 * a2 * e_t2
        return m11, 0.0, m21, m22
    a1, a2, a3 = a
    spread = e_m1 + _pow(eps, tau)
    m11 = 1 - ((2 * a1 + a2) / eps - a1 * a2 * e_t2) * spread
    m22 = 1 - ((a2 + 2 * a3) / eps - a2 * a3 * e_t2) * spread
    m12 = -a2 * e_2t1
    m21 = (
        -(a1 + a2 + a3) / eps
        + (a1 * a2 + 2 * a1 * a3 + a2 * a3) * e_t2
        + a1 * a3 * e_m3
        - a1 * a2 * a3 * e_2t3
        + k * k * (a1 + a3) * e_2t1
    )
    return m11, m12, m21, m22
