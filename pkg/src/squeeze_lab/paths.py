"""Power-law squeezing paths ``l = eps^(mu-1)``, ``r = eps^tau`` through the
``(eps, l, r)`` cube, exact matrices along them, and numerical limit /
divergence-exponent estimation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, Inconclusive, OutOfDomain
from .transfer import RegularizedSystem, TransferMatrix, stack_matrix

ELEMENTS = ("m11", "m12", "m21", "m22")

DEFAULT_START = 1e-1
DEFAULT_FACTOR = 10 ** -0.5
DEFAULT_STEPS = 24

R2_THRESHOLD = 0.999
# slack on the factor**0.5 contraction test: an O(eps^0.5) approach sits
# exactly on the threshold
CONTRACTION_SLACK = 1.05
# a divergent element must have grown beyond rounding-noise size
DIVERGENCE_FLOOR = 1e-6
_EXACT = 1e-12


class LimitOrder(enum.Enum):
    MU_FIRST = "mu-first"
    TAU_FIRST = "tau-first"
    JOINT = "joint"


class Family(enum.IntEnum):
    F1 = 1  # 3 < mu <= inf
    F2 = 2  # mu == 3
    F3 = 3  # 2 < mu < 3
    F4 = 4  # mu == 2


class Branch(enum.Enum):
    A = "a"  # tau == 1
    B = "b"  # 1 < tau < 2
    C = "c"  # tau == 2
    D = "d"  # 2 < tau <= inf


@dataclass(frozen=True)
class PathLabel:
    family: Family
    branch: Branch

    def __str__(self):
        return f"{int(self.family)}{self.branch.value}"

    @classmethod
    def parse(cls, text):
        text = text.strip().lower()
        return cls(Family(int(text[0])), Branch(text[1]))


def _is(x, value):
    return abs(x - value) <= _EXACT


def path_family(mu, tau) -> PathLabel:
    """Label ``(mu, tau)`` with its path family ``1..4`` and branch ``a..d``."""
    if not mu >= 2 - _EXACT:
        raise OutOfDomain(f"mu must be >= 2 (got {mu})")
    if not tau >= 1 - _EXACT:
        raise OutOfDomain(f"tau must be >= 1 (got {tau})")
    if _is(mu, 2):
        family = Family.F4
    elif mu < 3 - _EXACT:
        family = Family.F3
    elif _is(mu, 3):
        family = Family.F2
    else:
        family = Family.F1
    if _is(tau, 1):
        branch = Branch.A
    elif tau < 2 - _EXACT:
        branch = Branch.B
    elif _is(tau, 2):
        branch = Branch.C
    else:
        branch = Branch.D
    return PathLabel(family, branch)


@dataclass(frozen=True)
class SqueezePath:
    """Path ``l = eps^(mu - 1)``, ``r = eps^tau``; ``inf`` stands for the
    edge descents ``l = 0`` / ``r = 0``.

    ``limit_order`` records which repeated limit is meant when both
    exponents are infinite. Both orders end on ideal deltas with no gap, so
    the matrices at finite ``eps`` coincide.
    """

    mu: float
    tau: float
    limit_order: LimitOrder = LimitOrder.JOINT

    def __post_init__(self):
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "tau", float(self.tau))
        if isinstance(self.limit_order, str):
            object.__setattr__(self, "limit_order", LimitOrder(self.limit_order))
        path_family(self.mu, self.tau)
        both_inf = math.isinf(self.mu) and math.isinf(self.tau)
        if self.limit_order is not LimitOrder.JOINT and not both_inf:
            raise OutOfDomain("limit_order is only meaningful when mu and tau are both inf")

    @property
    def label(self) -> PathLabel:
        return path_family(self.mu, self.tau)

    def lengths(self, eps):
        """Layer width and gap at ``eps``."""
        l = 0.0 if math.isinf(self.mu) else eps ** (self.mu - 1)
        r = 0.0 if math.isinf(self.tau) else eps ** self.tau
        return l, r

    def system(self, a, eps, k=1.0) -> RegularizedSystem:
        l, r = self.lengths(eps)
        return RegularizedSystem(tuple(a), eps, l, r, k)

    def matrix(self, a, eps, k=1.0) -> TransferMatrix:
        return stack_matrix(self.system(a, eps, k))


def eps_sequence(start=DEFAULT_START, factor=DEFAULT_FACTOR, steps=DEFAULT_STEPS):
    """Geometric sequence ``start * factor**n``, ``n = 0 .. steps-1``."""
    if not 0 < start <= 1:
        raise DomainError("start must lie in (0, 1]")
    if not 0 < factor < 1:
        raise DomainError("factor must lie in (0, 1)")
    if steps < 2:
        raise DomainError("steps must be >= 2")
    return start * factor ** np.arange(steps, dtype=float)


@dataclass
class PathTrace:
    eps: np.ndarray
    matrices: list
    k: float
    path: SqueezePath | None = None
    saturated: np.ndarray = field(default=None)

    def __post_init__(self):
        self.eps = np.asarray(self.eps, dtype=float)
        if len(self.eps) != len(self.matrices):
            raise ValueError("eps and matrices differ in length")
        if np.any(np.diff(self.eps) >= 0):
            raise ValueError("eps values must be strictly decreasing")
        if self.saturated is None:
            self.saturated = np.zeros((len(self.eps), 4), dtype=bool)

    @property
    def entries(self):
        """``(n, 4)`` array of ``m11, m12, m21, m22`` per eps."""
        return np.array([m.entries for m in self.matrices], dtype=float)

    def element(self, name):
        return self.entries[:, ELEMENTS.index(name)]

    @property
    def factor(self):
        ratios = self.eps[1:] / self.eps[:-1]
        return float(np.median(ratios))


def evaluate_along_path(a, path: SqueezePath, k=1.0, seq=None) -> PathTrace:
    """Exact stack matrix at every ``eps`` of ``seq`` along ``path``.

    Non-finite entries are replaced by the largest float of matching sign
    and flagged in ``trace.saturated``.
    """
    seq = eps_sequence() if seq is None else np.asarray(seq, dtype=float)
    big = np.finfo(float).max
    mats = []
    saturated = np.zeros((len(seq), 4), dtype=bool)
    for i, eps in enumerate(seq):
        m = path.matrix(a, float(eps), k)
        if not m.is_finite():
            vals = []
            for j, x in enumerate(m.entries):
                if math.isfinite(x):
                    vals.append(x)
                else:
                    saturated[i, j] = True
                    vals.append(math.copysign(big, x) if not math.isnan(x) else big)
            m = TransferMatrix(*vals)
        mats.append(m)
    return PathTrace(seq, mats, float(k), path, saturated)


# ---------------------------------------------------------------------------
# limit estimation


@dataclass(frozen=True)
class ElementLimit:
    """Outcome for one matrix element.

    ``kind`` is ``"converged"`` (``value`` +- ``uncertainty``),
    ``"divergent"`` (``|element| ~ eps^exponent``) or ``"inconclusive"``.
    A converged element that decays to zero as a clean power law also
    reports its ``exponent``.
    """

    kind: str
    value: float = math.nan
    uncertainty: float = math.nan
    exponent: float | None = None
    r_squared: float | None = None

    @property
    def converged(self):
        return self.kind == "converged"

    @property
    def divergent(self):
        return self.kind == "divergent"


@dataclass(frozen=True)
class LimitEstimate:
    elements: dict

    def __getitem__(self, name):
        return self.elements[name]

    @property
    def converged(self):
        return all(e.converged for e in self.elements.values())

    def matrix(self):
        if not self.converged:
            raise Inconclusive("not every element converged")
        return TransferMatrix(*(self.elements[n].value for n in ELEMENTS))

    def exponents(self):
        return {n: e.exponent for n, e in self.elements.items() if e.divergent}


def fit_power_law(eps, values):
    """Least-squares slope of ``log|values|`` against ``log eps``.

    Returns ``(exponent, r_squared)``; ``r_squared`` is ``nan`` when the
    data are flat or contain zeros.
    """
    eps = np.asarray(eps, dtype=float)
    v = np.abs(np.asarray(values, dtype=float))
    if len(v) < 3 or np.any(v == 0) or not np.all(np.isfinite(v)):
        return math.nan, math.nan
    x = np.log(eps)
    y = np.log(v)
    slope, intercept = np.polyfit(x, y, 1)
    ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        return float(slope), math.nan
    return float(slope), 1.0 - ss_res / ss_tot


def _tail(n):
    return slice(n // 2, n)


def _estimate_element(eps, v, factor):
    n = len(v)
    floor = 64 * np.finfo(float).eps
    tail = _tail(n)
    slope, r2 = fit_power_law(eps[tail], v[tail])
    if (
        not math.isnan(r2)
        and r2 > R2_THRESHOLD
        and slope < -0.05
        and abs(v[-1]) > DIVERGENCE_FLOOR
    ):
        return ElementLimit("divergent", exponent=slope, r_squared=r2)

    d = np.diff(v)
    ad = np.abs(d)
    contraction = CONTRACTION_SLACK * factor ** 0.5
    best = None
    for m in range(2, len(d)):
        noise = floor * max(1.0, abs(v[m + 1]))
        ok = all(
            ad[i + 1] <= contraction * ad[i] or ad[i + 1] <= noise
            for i in (m - 2, m - 1)
        )
        if ok and (best is None or ad[m] < ad[best]):
            best = m
    if best is not None:
        last = v[best + 1]
        q = d[best] / d[best - 1] if ad[best - 1] > 0 else 0.0
        correction = d[best] * q / (1 - q) if abs(q) < 1 else 0.0
        value = float(last + correction)
        unc = float(ad[best] + abs(correction))
        exponent = None
        if abs(value) <= max(unc, floor):
            slope0, r20 = fit_power_law(eps[: best + 2], v[: best + 2])
            if not math.isnan(r20) and r20 > R2_THRESHOLD and slope0 > 0:
                exponent, r2 = slope0, r20
                value = 0.0
        return ElementLimit("converged", value, unc, exponent, r2 if exponent else None)
    return ElementLimit("inconclusive", exponent=slope if not math.isnan(slope) else None, r_squared=r2)


def estimate_limit(trace: PathTrace, strict=True) -> LimitEstimate:
    """Per-element limit (or divergence exponent) of a path trace.

    An element counts as divergent when ``log|element|`` on the small-eps
    half of the trace follows a straight line of negative slope with
    ``R^2 > 0.999``.  Otherwise it counts as converged if two consecutive
    differences contract by at least ``factor**0.5`` (``factor`` being the
    eps ratio of the trace); the limit is then the Aitken-corrected value
    at the smallest difference, with the size of that difference plus the
    correction as uncertainty.  Rounding noise that grows at tiny eps is
    skipped because the best (smallest) difference is taken.

    Raises
    ------
    Inconclusive
        With ``strict=True`` when an element matches neither pattern.
    """
    if len(trace.eps) < 4:
        raise DomainError("estimate_limit needs at least 4 trace points")
    entries = trace.entries
    factor = trace.factor
    out = {}
    for j, name in enumerate(ELEMENTS):
        out[name] = _estimate_element(trace.eps, entries[:, j], factor)
        if strict and out[name].kind == "inconclusive":
            raise Inconclusive(f"{name}: neither contracting nor a clean power law")
    return LimitEstimate(out)
