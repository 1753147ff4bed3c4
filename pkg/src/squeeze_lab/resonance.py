"""Resonance sets on which the squeezing limits stay connected.

The algebraic sets ``K`` and ``L`` come with closed-form solutions for the
last intensity.  The transcendental sets ``F`` and ``G`` are handled through
*cleared* residuals: the tan-form equations multiplied through by the cosine
factors, which turns them into entire functions of the intensities.  Root
finding uses only the cleared forms; the tan forms survive as cross-checks.

Point subsets ``P`` (all sines vanish) and ``Q`` (two cosines and one sine
vanish) are recognised from their defining conditions.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .entire import cfun, sfun, ufun
from .errors import ArityMismatch, DegenerateDenominator, DomainError, NoRootInInterval

SCAN_CELLS = 2000
SCAN_WIDTH = 100.0
ROOT_XTOL = 1e-12
LINK_FACTOR = 5.0
MEMBERSHIP_TOL = 1e-9


class ResonanceSetId(enum.Enum):
    K2 = "K2"
    K3 = "K3"
    L2 = "L2"
    L3 = "L3"
    F2 = "F2"
    F3 = "F3"
    G2 = "G2"
    G3 = "G3"
    P2 = "P2"
    P3 = "P3"
    Q2 = "Q2"
    Q3_1 = "Q3_1"
    Q3_2 = "Q3_2"
    Q3_3 = "Q3_3"

    @property
    def arity(self) -> int:
        return int(self.value[1])

    @property
    def letter(self) -> str:
        return self.value[0]

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        key = str(text).strip().upper().replace("(", "_").replace(")", "")
        return cls(key)


CURVE_SETS = (ResonanceSetId.K2, ResonanceSetId.L2, ResonanceSetId.F2, ResonanceSetId.G2)
SURFACE_SETS = (ResonanceSetId.K3, ResonanceSetId.L3, ResonanceSetId.F3, ResonanceSetId.G3)
POINT_SETS = (
    ResonanceSetId.P2,
    ResonanceSetId.P3,
    ResonanceSetId.Q2,
    ResonanceSetId.Q3_1,
    ResonanceSetId.Q3_2,
    ResonanceSetId.Q3_3,
)


def _check(set_id: ResonanceSetId, a):
    a = tuple(float(x) for x in a)
    if len(a) != set_id.arity:
        raise ArityMismatch(f"{set_id.value} needs {set_id.arity} intensities, got {len(a)}")
    if any(x == 0.0 for x in a):
        raise DomainError("intensity must be nonzero")
    return a


def _cs(a):
    return [cfun(x) for x in a], [sfun(x) for x in a]


def _g2(a, c, s):
    (a1, a2), (c1, c2), (s1, s2) = a, c, s
    return a1 * s1 * c2 + a2 * c1 * s2


def _g3(a, c, s):
    (a1, a2, a3), (c1, c2, c3), (s1, s2, s3) = a, c, s
    return (
        a1 * s1 * c2 * c3 + a2 * c1 * s2 * c3 + a3 * c1 * c2 * s3
        - a1 * a3 * s1 * s2 * s3
    )


def _f3(a, c, s):
    (a1, a2, a3), (c1, c2, c3), (s1, s2, s3) = a, c, s
    return (
        _g3(a, c, s)
        - a1 * a2 * s1 * s2 * c3
        - 2 * a1 * a3 * s1 * c2 * s3
        - a2 * a3 * c1 * s2 * s3
        + a1 * a2 * a3 * s1 * s2 * s3
    )


def _point_conditions(set_id):
    """Per-entry condition ('s' for sin sqrt(a) = 0, 'c' for cos sqrt(a) = 0)."""
    return {
        ResonanceSetId.P2: "ss",
        ResonanceSetId.P3: "sss",
        ResonanceSetId.Q2: "cc",
        ResonanceSetId.Q3_3: "ccs",
        ResonanceSetId.Q3_2: "csc",
        ResonanceSetId.Q3_1: "scc",
    }[set_id]


def _point_residual(set_id, a):
    worst = 0.0
    for kind, x in zip(_point_conditions(set_id), a):
        if kind == "s":
            # sin sqrt(a) = 0 needs a = (n pi)^2 with n >= 1
            v = abs(x * sfun(x)) if x > 0 else math.inf
        else:
            v = abs(cfun(x)) if x > 0 else math.inf
        worst = max(worst, v)
    return worst


def residual(set_id, a) -> float:
    """Cleared (entire) residual of ``a`` with respect to ``set_id``.

    Zero exactly on the set.  For the point subsets the value is the
    largest violation of the defining sine/cosine conditions (``inf`` for
    non-positive entries, which can never satisfy them).
    """
    set_id = ResonanceSetId.parse(set_id)
    a = _check(set_id, a)
    if set_id is ResonanceSetId.K2:
        a1, a2 = a
        return a1 + a2 - a1 * a2
    if set_id is ResonanceSetId.K3:
        a1, a2, a3 = a
        return a1 + a2 + a3 - a1 * a2 - 2 * a1 * a3 - a2 * a3 + a1 * a2 * a3
    if set_id in (ResonanceSetId.L2, ResonanceSetId.L3):
        return math.fsum(a)
    if set_id in POINT_SETS:
        return _point_residual(set_id, a)
    c, s = _cs(a)
    if set_id is ResonanceSetId.G2:
        return _g2(a, c, s)
    if set_id is ResonanceSetId.F2:
        a1, a2 = a
        return _g2(a, c, s) - a1 * a2 * s[0] * s[1]
    if set_id is ResonanceSetId.G3:
        return _g3(a, c, s)
    return _f3(a, c, s)


def tan_form_residual(set_id, a) -> float:
    """Literal tan-form residual of ``F``/``G`` (``sqrt(a) tan sqrt(a) = a*ufun(a)``).

    Raises
    ------
    PoleProximity
        When an entry sits next to a pole of ``tan sqrt(a)``.
    """
    set_id = ResonanceSetId.parse(set_id)
    if set_id.letter not in "FG":
        raise DomainError("tan forms exist only for the F and G sets")
    a = _check(set_id, a)
    u = [ufun(x) for x in a]
    t = [x * v for x, v in zip(a, u)]
    if set_id is ResonanceSetId.G2:
        return t[0] + t[1]
    if set_id is ResonanceSetId.F2:
        return t[0] + t[1] - a[0] * a[1] * u[0] * u[1]
    a1, a2, a3 = a
    u1, u2, u3 = u
    triple = a1 * a3 * u1 * u2 * u3
    if set_id is ResonanceSetId.G3:
        return sum(t) - triple
    return (
        sum(t)
        - a1 * a2 * u1 * u2
        - 2 * a1 * a3 * u1 * u3
        - a2 * a3 * u2 * u3
        + (a2 - 1) * triple
    )


def cosine_factor(set_id, a) -> float:
    """Product of ``cfun(a_j)`` relating the cleared and tan forms."""
    return math.prod(cfun(x) for x in a)


# ---------------------------------------------------------------------------
# root finding


def _last_entry_residual(set_id, partial, x):
    """Cleared residual of ``partial + (x,)`` for an array of last entries."""
    x = np.asarray(x, dtype=float)
    a = list(partial) + [x]
    c = [cfun(v) for v in partial] + [cfun(x)]
    s = [sfun(v) for v in partial] + [sfun(x)]
    if set_id is ResonanceSetId.G2:
        return _g2(a, c, s)
    if set_id is ResonanceSetId.F2:
        return _g2(a, c, s) - a[0] * a[1] * s[0] * s[1]
    if set_id is ResonanceSetId.G3:
        return _g3(a, c, s)
    return _f3(a, c, s)


def _scan_roots(f, lo, hi, cells=None, fvec=None):
    """All sign-change roots of ``f`` on ``[lo, hi]``, refined by brentq.

    ``fvec`` optionally evaluates ``f`` on the whole scan grid at once.
    """
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise DomainError("search interval must be finite with lo < hi")
    if cells is None:
        cells = max(SCAN_CELLS, int(math.ceil(SCAN_CELLS * (hi - lo) / SCAN_WIDTH)))
    x = np.linspace(lo, hi, cells + 1)
    with np.errstate(over="ignore", invalid="ignore"):
        y = fvec(x) if fvec is not None else np.array([f(v) for v in x])
    roots = []
    for i in range(cells):
        y0, y1 = y[i], y[i + 1]
        if not (math.isfinite(y0) and math.isfinite(y1)):
            continue
        if y0 == 0.0:
            roots.append(float(x[i]))
        elif y0 * y1 < 0:
            roots.append(float(brentq(f, x[i], x[i + 1], xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps)))
    if y[-1] == 0.0:
        roots.append(float(x[-1]))
    # a root sitting exactly on a grid node can be found from both sides
    out = []
    for r in roots:
        if not out or abs(r - out[-1]) > 10 * ROOT_XTOL:
            out.append(r)
    return [r for r in out if r != 0.0]


def solve_last(set_id, partial, search=(-50.0, 50.0), cells=None) -> list:
    """Roots for the last intensity given the leading ones.

    ``K``/``L`` sets are solved in closed form (``search`` is then only used
    to filter); ``F``/``G`` roots come from a uniform sign-change scan of the
    cleared residual refined to ``|da| < 1e-12``.

    Raises
    ------
    DegenerateDenominator
        For ``K2`` at ``a1 = 1`` or ``K3`` with ``1 - 2a1 - a2 + a1a2 = 0``.
    NoRootInInterval
        When no root lies inside ``search``.
    """
    set_id = ResonanceSetId.parse(set_id)
    if set_id in POINT_SETS:
        raise DomainError("point subsets are not solved for a last entry")
    partial = tuple(float(x) for x in partial)
    if len(partial) != set_id.arity - 1:
        raise ArityMismatch(f"{set_id.value} needs {set_id.arity - 1} leading intensities")
    if any(x == 0.0 for x in partial):
        raise DomainError("intensity must be nonzero")
    lo, hi = float(search[0]), float(search[1])
    letter = set_id.letter
    if letter in "KL":
        if set_id is ResonanceSetId.K2:
            (a1,) = partial
            if a1 == 1.0:
                raise DegenerateDenominator("K2 root needs a1 != 1", denominator="a1 - 1")
            root = a1 / (a1 - 1)
        elif set_id is ResonanceSetId.K3:
            a1, a2 = partial
            den = 1 - 2 * a1 - a2 + a1 * a2
            if den == 0.0:
                raise DegenerateDenominator(
                    "K3 root needs 1 - 2a1 - a2 + a1a2 != 0", denominator="1 - 2a1 - a2 + a1a2"
                )
            root = (a1 * a2 - a1 - a2) / den
        else:
            root = -math.fsum(partial)
        if root == 0.0 or not lo <= root <= hi:
            raise NoRootInInterval(f"{set_id.value}: root {root!r} outside [{lo}, {hi}]")
        return [root]

    def f(x):
        if x == 0.0:
            x = 1e-300
        return residual(set_id, partial + (x,))

    roots = _scan_roots(f, lo, hi, cells, lambda x: _last_entry_residual(set_id, partial, x))
    if not roots:
        raise NoRootInInterval(f"{set_id.value}: no sign change in [{lo}, {hi}]")
    return roots


# ---------------------------------------------------------------------------
# curves and surface slices


@dataclass
class ResonanceBranch:
    """One connected run of samples on a resonance curve or slice."""

    set_id: ResonanceSetId
    points: list = field(default_factory=list)

    def as_array(self):
        return np.array(self.points, dtype=float)

    def residuals(self):
        return [residual(self.set_id, p) for p in self.points]

    def __len__(self):
        return len(self.points)


def _workers():
    try:
        n = int(os.environ.get("SQUEEZE_LAB_THREADS", "0"))
    except ValueError:
        n = 0
    return max(1, n) if n else min(8, os.cpu_count() or 1)


def _parallel_map(fn, items):
    """Order-preserving map, capped by ``SQUEEZE_LAB_THREADS``."""
    n = _workers()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _column_roots(set_id, lead, window, cells):
    try:
        return solve_last(set_id, lead, window, cells)
    except (NoRootInInterval, DegenerateDenominator):
        return []


def _link(set_id, columns, step):
    """Greedy nearest-neighbour linking of root columns into branches.

    ``columns`` is a list of ``(x, roots)``; a root joins the branch whose
    last point is closest, provided the jump stays below ``LINK_FACTOR``
    times the typical step.
    """
    finished, active = [], []
    for x, roots in columns:
        new_active = []
        unused = sorted(roots)
        # pair closest first so crossings do not steal each other's points
        pairs = sorted(
            ((abs(r - b[-1][1]), i, j) for i, b in enumerate(active) for j, r in enumerate(unused)),
        )
        taken_b, taken_r = set(), set()
        for dist, i, j in pairs:
            if i in taken_b or j in taken_r:
                continue
            jump = math.hypot(dist, x - active[i][-1][0])
            if jump > step:
                continue
            active[i].append((x, unused[j]))
            taken_b.add(i)
            taken_r.add(j)
        for i, b in enumerate(active):
            (new_active if i in taken_b else finished).append(b)
        for j, r in enumerate(unused):
            if j not in taken_r:
                new_active.append([(x, r)])
        active = new_active
    finished.extend(active)
    finished.sort(key=lambda b: (b[0][0], b[0][1]))
    return finished


def _link_step(xs, columns):
    """Jump threshold: ``LINK_FACTOR`` times the median sampling step."""
    dx = float(np.median(np.diff(xs))) if len(xs) > 1 else 1.0
    gaps = []
    for (_, r0), (_, r1) in zip(columns[:-1], columns[1:]):
        if r0 and r1:
            for r in r1:
                gaps.append(min(abs(r - q) for q in r0))
    dy = float(np.median(gaps)) if gaps else 0.0
    return LINK_FACTOR * max(math.hypot(dx, dy), dx)


def trace_curve(set_id, a1_range, samples, window=(-50.0, 50.0), cells=None) -> list:
    """Sample a resonance curve ``(a1, a2)`` of ``K2``, ``L2``, ``F2`` or ``G2``.

    Every ``a1`` sample contributes all roots in ``window``; samples are
    linked into :class:`ResonanceBranch` objects by nearest-neighbour
    continuation.  Empty results are allowed.
    """
    set_id = ResonanceSetId.parse(set_id)
    if set_id not in CURVE_SETS:
        raise DomainError("trace_curve handles K2, L2, F2 and G2")
    if samples < 2:
        raise DomainError("samples must be >= 2")
    xs = [x for x in np.linspace(a1_range[0], a1_range[1], samples) if x != 0.0]
    roots = _parallel_map(lambda x: _column_roots(set_id, (float(x),), window, cells), xs)
    columns = list(zip(xs, roots))
    step = _link_step(xs, columns)
    return [
        ResonanceBranch(set_id, [(float(x), float(y)) for x, y in b])
        for b in _link(set_id, columns, step)
    ]


def slice_surface(set_id, a1, a2_range, samples, window=(-50.0, 50.0), cells=None) -> list:
    """Slice of a resonance surface (``K3``, ``L3``, ``F3``, ``G3``) at fixed ``a1``.

    Points are ``(a1, a2, a3)`` triples with ``a3`` solved per ``a2`` sample.
    """
    set_id = ResonanceSetId.parse(set_id)
    if set_id not in SURFACE_SETS:
        raise DomainError("slice_surface handles K3, L3, F3 and G3")
    if samples < 2:
        raise DomainError("samples must be >= 2")
    a1 = float(a1)
    if a1 == 0.0:
        raise DomainError("intensity must be nonzero")
    xs = [x for x in np.linspace(a2_range[0], a2_range[1], samples) if x != 0.0]
    roots = _parallel_map(lambda x: _column_roots(set_id, (a1, float(x)), window, cells), xs)
    columns = list(zip(xs, roots))
    step = _link_step(xs, columns)
    return [
        ResonanceBranch(set_id, [(a1, float(x), float(y)) for x, y in b])
        for b in _link(set_id, columns, step)
    ]


def membership(a, tol=MEMBERSHIP_TOL) -> set:
    """All resonance sets (of matching arity) that contain ``a``.

    Point subsets are tested through their sine/cosine conditions, which
    also decides ``G`` membership at ``Q`` points where the tan form of the
    ``G`` equation is singular.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    a = tuple(float(x) for x in a)
    out = set()
    for set_id in ResonanceSetId:
        if set_id.arity != len(a):
            continue
        if abs(residual(set_id, a)) < tol:
            out.add(set_id)
    q_ids = {ResonanceSetId.Q2, ResonanceSetId.Q3_1, ResonanceSetId.Q3_2, ResonanceSetId.Q3_3}
    if out & q_ids:
        out.add(ResonanceSetId.G2 if len(a) == 2 else ResonanceSetId.G3)
    if out & {ResonanceSetId.P2, ResonanceSetId.P3}:
        out.add(ResonanceSetId.F2 if len(a) == 2 else ResonanceSetId.F3)
    return out
