"""Cross-validation suite behind ``squeeze-lab verify``.

Every check returns ``(passed, detail)``.  Checks carry their own tolerance;
``run_suite(tol_override=...)`` replaces all of them at once, which is how a
fault is injected on purpose.

The table witnesses reproduce each row of the two path tables twice: once
through :func:`classify` (closed form) and once from an exact trace
(numeric).  Their agreement is measured by the relative matrix error
``max|L_num - L_cf| / max(1, max|L_cf|)``.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import entire
from .asymptotics import leading_forms
from .classify import (
    LimitKind,
    classify,
    classify_numeric,
    gamma_from_theta,
    k2_from_gamma,
    k3_from_gamma,
    lambda22_F,
    rho_K,
    symmetric_branch_a1,
    theta_F,
    theta_alpha_G,
    theta_from_gamma,
    theta_G_forms,
    theta_K,
)
from .errors import PoleProximity
from .paths import (
    Branch,
    Family,
    PathLabel,
    SqueezePath,
    estimate_limit,
    evaluate_along_path,
    fit_power_law,
    path_family,
)
from .resonance import (
    ResonanceSetId,
    membership,
    residual,
    solve_last,
    tan_form_residual,
    trace_curve,
)
from .scattering import scatter, scatter_limit, transmission_sweep
from .transfer import (
    RegularizedSystem,
    TransferMatrix,
    gap_matrix,
    layer_matrix,
    stack_factors,
    stack_matrix,
)

INF = math.inf
PI = math.pi
SEED = 20240611


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class Witness:
    """One concrete point reproducing a table row."""

    row: str
    a: tuple
    mu: float
    tau: float
    kind: LimitKind
    theta: float | None = None
    alpha: float | None = None
    sign: int | None = None

    @property
    def path(self):
        return SqueezePath(self.mu, self.tau)

    @property
    def label(self) -> PathLabel:
        return path_family(self.mu, self.tau)

    def expected_matrix(self):
        k = self.kind
        if k is LimitKind.DELTA_PRIME_POTENTIAL:
            return np.array([[self.theta, 0.0], [0.0, 1 / self.theta]])
        if k is LimitKind.DELTA_PRIME_PLUS_DELTA:
            return np.array([[self.theta, 0.0], [self.alpha, 1 / self.theta]])
        if k is LimitKind.DELTA:
            return np.array([[self.sign, 0.0], [self.alpha, self.sign]], dtype=float)
        if k is LimitKind.REFLECTIONLESS:
            return self.sign * np.eye(2)
        return None


def relative_matrix_error(num, ref):
    num = np.asarray(num, dtype=float)
    ref = np.asarray(ref, dtype=float)
    return float(np.max(np.abs(num - ref)) / max(1.0, float(np.max(np.abs(ref)))))


def _first_root(set_id, partial, window=(0.05, 50.0)):
    return solve_last(set_id, partial, window)[0]


def table1_witnesses():
    """Witness points for every row of the resonant-interaction table."""
    W, K = Witness, LimitKind
    q = (PI / 2) ** 2
    k3 = k3_from_gamma(1.0, 3.0, eta=0.0)  # (4, 3, 2.5)
    f2 = (1.0, _first_root(ResonanceSetId.F2, (1.0,)))
    f3 = (1.0, 2.0, _first_root(ResonanceSetId.F3, (1.0, 2.0)))
    g2 = (-1.0, _first_root(ResonanceSetId.G2, (-1.0,), (0.05, q)))
    g3 = (1.0, 2.0, _first_root(ResonanceSetId.G3, (1.0, 2.0)))
    sym_p = symmetric_branch_a1(3.0, +1, (0.05, 30.0))[0]
    sym_m = symmetric_branch_a1(3.0, -1, (0.05, 30.0))[0]
    p2 = (PI**2, 4 * PI**2)
    p3 = (PI**2, 4 * PI**2, PI**2)
    th_f2 = theta_F(f2)
    th_f3 = theta_F(f3)
    th_g2, al_g2 = theta_alpha_G(g2, "4c")
    th_g3, al_g3 = theta_alpha_G(g3, "4c")
    out = [
        W("T1 dp 1a K2", (3.0, 1.5), INF, 1.0, K.DELTA_PRIME_POTENTIAL, theta=-2.0),
        W("T1 dp 1a K3", k3, 4.0, 1.0, K.DELTA_PRIME_POTENTIAL, theta=theta_K(k3)),
        W("T1 dp 2a K2", (3.0, 1.5), 3.0, 1.0, K.DELTA_PRIME_POTENTIAL, theta=-2.0),
        W("T1 dp 3a K2", (3.0, 1.5), 2.5, 1.0, K.DELTA_PRIME_POTENTIAL, theta=-2.0),
        W("T1 dp 4a F2", f2, 2.0, 1.0, K.DELTA_PRIME_POTENTIAL, theta=th_f2),
        W("T1 dp 4a F3", f3, 2.0, 1.0, K.DELTA_PRIME_POTENTIAL, theta=th_f3),
        W("T1 dp 4d G2", g2, 2.0, 3.0, K.DELTA_PRIME_POTENTIAL, theta=th_g2),
        W("T1 dp 4d G3", g3, 2.0, 3.0, K.DELTA_PRIME_POTENTIAL, theta=th_g3),
        W("T1 d 1c L2", (1.0, -1.0), 4.0, 2.0, K.DELTA, alpha=-1.0, sign=1),
        W("T1 d 1c L3", (1.0, 2.0, -3.0), 4.0, 2.0, K.DELTA, alpha=-10.0, sign=1),
        W("T1 d 2c L2", (1.0, -1.0), 3.0, 2.0, K.DELTA, alpha=-1.0, sign=1),
        W("T1 d 2c L3", (1.0, 2.0, -3.0), 3.0, 2.0, K.DELTA, alpha=-13.0, sign=1),
        W("T1 d 2d L3", (1.0, 2.0, -3.0), 3.0, 3.0, K.DELTA, alpha=-3.0, sign=1),
        W("T1 d 3c L2", (1.0, -1.0), 2.5, 2.0, K.DELTA, alpha=-1.0, sign=1),
        W("T1 d 4c Q2", (q, q), 2.0, 2.0, K.DELTA, alpha=q, sign=-1),
        W("T1 d 4c Q3(3)", (q, q, PI**2), 2.0, 2.0, K.DELTA, alpha=-q, sign=1),
        W("T1 d 4c Q3(2)", (q, PI**2, q), 2.0, 2.0, K.DELTA, alpha=-2 * q, sign=1),
        W("T1 d 4c Q3(1)", (PI**2, q, q), 2.0, 2.0, K.DELTA, alpha=-q, sign=1),
        W(
            "T1 d 4c sym+", (sym_p, 3.0, sym_p), 2.0, 2.0, K.DELTA,
            alpha=-2 * sym_p * math.sin(math.sqrt(sym_p)) ** 2, sign=1,
        ),
        W(
            "T1 d 4c sym-", (sym_m, 3.0, sym_m), 2.0, 2.0, K.DELTA,
            alpha=2 * sym_m * math.sin(math.sqrt(sym_m)) ** 2, sign=-1,
        ),
        W("T1 dpd 2a K3", k3, 3.0, 1.0, K.DELTA_PRIME_PLUS_DELTA, theta=theta_K(k3), alpha=k3[0] * k3[2]),
        W("T1 dpd 4c G2", g2, 2.0, 2.0, K.DELTA_PRIME_PLUS_DELTA, theta=th_g2, alpha=al_g2),
        W("T1 dpd 4c G3", g3, 2.0, 2.0, K.DELTA_PRIME_PLUS_DELTA, theta=th_g3, alpha=al_g3),
        W("T1 rl 1a K3 +I", (2.0, 4.0, 2.0), 4.0, 1.0, K.REFLECTIONLESS, sign=1),
        W("T1 rl 1a K2 -I", (2.0, 2.0), 4.0, 1.0, K.REFLECTIONLESS, sign=-1),
        W("T1 rl 1a K3 -I", (0.5, 2.0, 1.5), 4.0, 1.0, K.REFLECTIONLESS, sign=-1),
        W("T1 rl 1d L2", (1.0, -1.0), 4.0, 3.0, K.REFLECTIONLESS, sign=1),
        W("T1 rl 1d L3", (1.0, 2.0, -3.0), INF, INF, K.REFLECTIONLESS, sign=1),
        W("T1 rl 2d L2", (1.0, -1.0), 3.0, 3.0, K.REFLECTIONLESS, sign=1),
        W("T1 rl 3d L2", (1.0, -1.0), 2.5, 3.0, K.REFLECTIONLESS, sign=1),
        W("T1 rl 4a P2", p2, 2.0, 1.0, K.REFLECTIONLESS, sign=-1),
        W("T1 rl 4b P2", p2, 2.0, 1.5, K.REFLECTIONLESS, sign=-1),
        W("T1 rl 4c P2", p2, 2.0, 2.0, K.REFLECTIONLESS, sign=-1),
        W("T1 rl 4d P2", p2, 2.0, 3.0, K.REFLECTIONLESS, sign=-1),
        W("T1 rl 4a P3", p3, 2.0, 1.0, K.REFLECTIONLESS, sign=1),
        W("T1 rl 4d P3", p3, 2.0, 3.0, K.REFLECTIONLESS, sign=1),
        W("T1 rl 4d Q2", (q, q), 2.0, 3.0, K.REFLECTIONLESS, sign=-1),
        W("T1 rl 4d Q3(3)", (q, q, PI**2), 2.0, 3.0, K.REFLECTIONLESS, sign=1),
        W("T1 rl 4d Q3(2)", (q, PI**2, q), 2.0, 3.0, K.REFLECTIONLESS, sign=1),
        W("T1 rl 4d Q3(1)", (PI**2, q, q), 2.0, 3.0, K.REFLECTIONLESS, sign=1),
        W("T1 rl 4d sym+", (sym_p, 3.0, sym_p), 2.0, 3.0, K.REFLECTIONLESS, sign=1),
    ]
    return out


def table2_witnesses():
    """Off-set points realising the separated (Dirichlet) limit on each row."""
    W, D = Witness, LimitKind.SEPARATED_DIRICHLET
    k3 = k3_from_gamma(1.0, 3.0, eta=0.0)
    f2 = (1.0, _first_root(ResonanceSetId.F2, (1.0,)))
    out = []
    for mu in (4.0, 3.0):
        out.append(W(f"T2 {'1' if mu > 3 else '2'}a off K2", (1.0, 1.0), mu, 1.0, D))
        out.append(W(f"T2 {'1' if mu > 3 else '2'}a off K3", (1.0, 1.0, 2.0), mu, 1.0, D))
    for mu, fam in ((4.0, 1), (3.0, 2), (2.5, 3)):
        out.append(W(f"T2 {fam}b any N=2", (2.0, 2.0), mu, 1.5, D))
        out.append(W(f"T2 {fam}b any N=3", (1.0, 2.0, -3.0), mu, 1.5, D))
    for mu, fam in ((4.0, 1), (3.0, 2)):
        for tau, br in ((2.0, "c"), (3.0, "d")):
            out.append(W(f"T2 {fam}{br} off L2", (1.0, 1.0), mu, tau, D))
            out.append(W(f"T2 {fam}{br} off L3", (1.0, 1.0, 1.0), mu, tau, D))
    out += [
        W("T2 3a off K2", (1.0, 1.0), 2.5, 1.0, D),
        W("T2 3a any N=3", k3, 2.5, 1.0, D),
        W("T2 3c off L2", (1.0, 1.0), 2.5, 2.0, D),
        W("T2 3c any N=3", (1.0, 2.0, -3.0), 2.5, 2.0, D),
        W("T2 3d off L2", (1.0, 1.0), 2.5, 3.0, D),
        W("T2 3d any N=3", (1.0, 2.0, -3.0), 2.5, 3.0, D),
        W("T2 4a off F2", (1.0, 1.0), 2.0, 1.0, D),
        W("T2 4a off F3", (1.0, 1.0, 1.0), 2.0, 1.0, D),
        W("T2 4b off P2", f2, 2.0, 1.5, D),
        W("T2 4b off P3", (1.0, 1.0, 1.0), 2.0, 1.5, D),
        W("T2 4c off G2", (1.0, 1.0), 2.0, 2.0, D),
        W("T2 4c off G3", (1.0, 1.0, 1.0), 2.0, 2.0, D),
        W("T2 4d off G2", (1.0, 1.0), 2.0, 3.0, D),
        W("T2 4d off G3", (1.0, 1.0, 1.0), 2.0, 3.0, D),
    ]
    return out


def numeric_tolerance(w: Witness):
    return 1e-2 if w.label.family is Family.F4 else 1e-3


def closed_form_agrees(w: Witness, tol=1e-9):
    li = classify(w.a, w.path)
    detail = {"kind": li.kind.value}
    if li.kind is not w.kind:
        detail["expected"] = w.kind.value
        return False, detail
    ref = w.expected_matrix()
    if ref is None:
        return True, detail
    err = relative_matrix_error(li.matrix.as_array(), ref)
    detail["error"] = err
    return err <= tol, detail


def numeric_agrees(w: Witness, tol=None):
    tol = numeric_tolerance(w) if tol is None else tol
    li = classify_numeric(w.a, w.path)
    detail = {"kind": li.kind.value}
    if li.exponents:
        detail["exponents"] = li.exponents
    ref = w.expected_matrix()
    if ref is None:
        ok = li.kind is LimitKind.SEPARATED_DIRICHLET
        if not ok:
            detail["expected"] = w.kind.value
        return ok, detail
    if li.matrix is None:
        detail["expected"] = w.kind.value
        return False, detail
    err = relative_matrix_error(li.matrix.as_array(), ref)
    detail["error"] = err
    return err <= tol, detail


# ---------------------------------------------------------------------------
# checks


@dataclass
class Check:
    name: str
    fn: object
    tol: float


@dataclass
class CheckResult:
    name: str
    passed: bool
    tol: float
    seconds: float
    detail: dict = field(default_factory=dict)


@dataclass
class Report:
    results: list

    @property
    def ok(self):
        return all(r.passed for r in self.results)

    @property
    def failed(self):
        return [r.name for r in self.results if not r.passed]

    def to_dict(self):
        return {
            "ok": self.ok,
            "passed": sum(r.passed for r in self.results),
            "failed": self.failed,
            "checks": [asdict(r) for r in self.results],
        }


def _rng():
    return np.random.default_rng(SEED)


def check_pythagorean(tol):
    a = np.linspace(-100, 100, 20001)
    c2 = entire.cfun(a) ** 2
    as2 = a * entire.sfun(a) ** 2
    # relative to the size of the cancelling terms (cosh^2 - sinh^2 for a < 0)
    err = float(np.max(np.abs(c2 + as2 - 1) / (c2 + np.abs(as2))))
    return err <= tol, {"max_error": err}


def check_series_switchover(tol):
    mags = np.geomspace(1e-5, 1e-3, 200)
    a = np.concatenate([mags, -mags])
    series_c = entire._horner(entire._C_COEF, a)
    series_s = entire._horner(entire._S_COEF, a)
    closed_c = np.where(a >= 0, np.cos(np.sqrt(np.abs(a))), np.cosh(np.sqrt(np.abs(a))))
    root = np.sqrt(np.abs(a))
    closed_s = np.where(a >= 0, np.sin(root) / root, np.sinh(root) / root)
    err = float(max(np.max(np.abs(series_c - closed_c)), np.max(np.abs(series_s - closed_s))))
    return err <= tol, {"max_error": err}


def check_ufun_identity(tol):
    a = np.linspace(-50, 50, 5001)
    c = entire.cfun(a)
    a = a[np.abs(c) > 1e-6]
    err = float(np.max(np.abs(entire.ufun(a) * entire.cfun(a) - entire.sfun(a))))
    return err <= tol, {"max_error": err}


def random_systems(n, rng):
    """Random stacks on power paths (bounded layer phases, so no overflow)."""
    out = []
    for _ in range(n):
        N = int(rng.integers(1, 4))
        a = rng.uniform(-10, 10, N)
        a[a == 0] = 1.0
        eps = 10 ** rng.uniform(-6, 0)
        mu = rng.uniform(2, 6)
        tau = rng.uniform(1, 4)
        k = rng.uniform(0.1, 10)
        out.append(RegularizedSystem(tuple(a), eps, eps ** (mu - 1), eps**tau, k))
    return out


def check_wronskian(tol, n=10_000):
    worst = 0.0
    for sys in random_systems(n, _rng()):
        worst = max(worst, abs(stack_matrix(sys).det - 1.0))
    return worst <= tol, {"draws": n, "max_det_error": worst}


def check_mirror(tol):
    rng = _rng()
    worst = 0.0
    for sys in random_systems(500, rng):
        a1, a2 = rng.uniform(-10, 10, 2)
        s = RegularizedSystem((a1, a2, a1), sys.eps, sys.l, sys.r, sys.k)
        m = stack_matrix(s)
        worst = max(worst, abs(m.m11 - m.m22) / max(1.0, abs(m.m11)))
    return worst <= tol, {"max_relative": worst}


def check_composition(tol):
    rng = _rng()
    worst = 0.0
    for sys in random_systems(500, rng):
        a = tuple(rng.uniform(-10, 10, 3))
        s3 = RegularizedSystem(a, sys.eps, sys.l, sys.r, sys.k)
        s2 = RegularizedSystem(a[:2], sys.eps, sys.l, sys.r, sys.k)
        lay = layer_matrix(a[2], sys.eps, sys.l, sys.k)
        comp = lay @ (gap_matrix(sys.r, sys.k) @ stack_matrix(s2))
        m = stack_matrix(s3)
        scale = max(1.0, max(abs(x) for x in m.entries))
        worst = max(worst, max(abs(x - y) for x, y in zip(m.entries, comp.entries)) / scale)
    return worst <= tol, {"max_relative": worst}


def check_naive_chain(tol):
    sys = RegularizedSystem((1.0, 2.0, -1.0), 1e-3, 1e-6, 1e-3, 1.0)
    prod = np.eye(2)
    for f in stack_factors(sys):
        prod = f.as_array() @ prod
    m = stack_matrix(sys).as_array()
    err = relative_matrix_error(m, prod)
    return err <= tol, {"relative": err}


ASYMPTOTE_PATHS = [(4.0, 1.0), (3.0, 1.0), (2.5, 1.0), (4.0, 1.5), (3.0, 2.0), (2.5, 3.0), (6.0, 2.5)]


def check_leading_forms(tol):
    eps = np.geomspace(1e-2, 1e-6, 9)
    rng = _rng()
    worst_slope = math.inf
    detail = {}
    for a in (tuple(rng.uniform(-3, 3, 2)), tuple(rng.uniform(-3, 3, 3))):
        for mu, tau in ASYMPTOTE_PATHS:
            path = SqueezePath(mu, tau)
            diffs = []
            for e in eps:
                l, r = path.lengths(e)
                exact = stack_matrix(RegularizedSystem(a, e, l, r, 1.0)).entries
                approx = leading_forms(a, e, l, r, 1.0)
                diffs.append(max(abs(x - y) for x, y in zip(exact, approx)))
            diffs = np.array(diffs)
            if np.max(diffs) < 1e-12:
                continue
            slope, _ = fit_power_law(eps, np.maximum(diffs, 1e-300))
            worst_slope = min(worst_slope, slope)
            detail[f"N{len(a)} mu={mu} tau={tau}"] = slope
    # decay order must be positive; the tolerance shifts the threshold
    return worst_slope > tol, {"min_decay_order": worst_slope, "orders": detail}


def check_path_table(tol):
    mus = {Family.F1: 4.0, Family.F2: 3.0, Family.F3: 2.5, Family.F4: 2.0}
    taus = {Branch.A: 1.0, Branch.B: 1.5, Branch.C: 2.0, Branch.D: 3.0}
    bad = []
    for fam, mu in mus.items():
        for br, tau in taus.items():
            if path_family(mu, tau) != PathLabel(fam, br):
                bad.append(f"{int(fam)}{br.value}")
    ok = not bad and str(path_family(INF, INF)) == "1d"
    return ok, {"mismatches": bad}


OFFSET_PATHS = [(4.0, 1.5), (3.0, 1.5), (2.5, 1.5), (INF, 1.5), (4.0, 1.0), (4.0, 2.0), (4.0, 3.0)]


def check_m21_exponent(tol):
    rng = _rng()
    worst = 0.0
    for _ in range(3):
        a = tuple(rng.uniform(0.5, 4, 2) * rng.choice([-1, 1], 2))
        for mu, tau in OFFSET_PATHS:
            est = estimate_limit(evaluate_along_path(a, SqueezePath(mu, tau)), strict=False)
            e = est["m21"]
            dev = abs(e.exponent + 1.0) if e.divergent else math.inf
            worst = max(worst, dev)
    return worst <= tol, {"max_deviation": worst}


def check_m12_exponent(tol):
    worst = math.inf
    for mu, tau in [(4.0, 1.0), (4.0, 1.5), (3.0, 2.0), (2.5, 3.0), (2.0, 1.0), (2.0, 2.0)]:
        est = estimate_limit(evaluate_along_path((1.0, 1.0, 1.0), SqueezePath(mu, tau)), strict=False)
        e = est["m12"]
        if not e.converged or abs(e.value) > 1e-9:
            return False, {"path": [mu, tau], "kind": e.kind}
        if e.exponent is not None:
            worst = min(worst, e.exponent - min(2 * tau - 1, 1.0))
    return worst >= -tol, {"min_margin": worst}


def check_k_independence(tol):
    cases = [((3.0, 1.5), 4.0, 1.0), ((1.0, -1.0), 4.0, 2.0), ((1.0, 2.0, -3.0), 4.0, 3.0)]
    worst = 0.0
    for a, mu, tau in cases:
        e1 = estimate_limit(evaluate_along_path(a, SqueezePath(mu, tau), k=0.5))
        e2 = estimate_limit(evaluate_along_path(a, SqueezePath(mu, tau), k=2.0))
        for n in e1.elements:
            x, y = e1[n], e2[n]
            allowed = 10 * max(x.uncertainty, y.uncertainty) + tol
            worst = max(worst, abs(x.value - y.value) / allowed)
    return worst <= 1.0, {"max_ratio_to_allowed": worst}


def _roots_sample():
    roots = []
    for a1 in (3.0, -2.0, 0.5):
        roots.append((ResonanceSetId.K2, (a1, solve_last(ResonanceSetId.K2, (a1,))[0])))
    roots.append((ResonanceSetId.K3, (1.0, 3.0, solve_last(ResonanceSetId.K3, (1.0, 3.0))[0])))
    roots.append((ResonanceSetId.L3, (1.0, 2.0, solve_last(ResonanceSetId.L3, (1.0, 2.0))[0])))
    for sid, part in [
        (ResonanceSetId.F2, (1.0,)),
        (ResonanceSetId.F2, (-3.0,)),
        (ResonanceSetId.G2, (-1.0,)),
        (ResonanceSetId.G2, (7.0,)),
        (ResonanceSetId.F3, (1.0, 2.0)),
        (ResonanceSetId.G3, (1.0, 2.0)),
        (ResonanceSetId.G3, (-2.0, 5.0)),
    ]:
        for r in solve_last(sid, part, (-40.0, 40.0)):
            roots.append((sid, part + (r,)))
    return roots


def check_root_residuals(tol):
    roots = _roots_sample()
    worst = max(abs(residual(sid, a)) for sid, a in roots)
    return worst <= tol, {"roots": len(roots), "max_residual": worst}


def check_k2_theta_rho(tol):
    worst = 0.0
    for a1 in np.linspace(-5, 5, 41):
        if a1 in (0.0, 1.0):
            continue
        a = (a1, a1 / (a1 - 1))
        worst = max(worst, abs(theta_K(a) * rho_K(a) - 1))
    return worst <= tol, {"max_error": worst}


def check_cleared_vs_tan(tol, n=1000):
    rng = _rng()
    worst = 0.0
    done = 0
    for _ in range(20 * n):
        if done >= n:
            break
        sid = [ResonanceSetId.F2, ResonanceSetId.G2, ResonanceSetId.F3, ResonanceSetId.G3][done % 4]
        a = tuple(rng.uniform(-30, 30, sid.arity))
        try:
            tan = tan_form_residual(sid, a)
        except PoleProximity:
            continue
        cfac = math.prod(entire.cfun(x) for x in a)
        if abs(cfac) < 1e-3:
            continue
        err = abs(residual(sid, a) / cfac - tan) / max(1.0, abs(tan))
        worst = max(worst, err)
        done += 1
    return worst <= tol, {"points": done, "max_relative": worst}


def check_p_points(tol):
    worst = 0.0
    for n1 in (1, 2, 3):
        for n2 in (1, 2, 3):
            a = ((n1 * PI) ** 2, (n2 * PI) ** 2)
            for sid in (ResonanceSetId.F2, ResonanceSetId.G2):
                worst = max(worst, abs(residual(sid, a)))
            for n3 in (1, 2):
                b = a + ((n3 * PI) ** 2,)
                for sid in (ResonanceSetId.F3, ResonanceSetId.G3):
                    worst = max(worst, abs(residual(sid, b)))
    return worst <= tol, {"max_residual": worst}


def check_branch_continuity(tol):
    worst = 0.0
    for sid, rng_, n in [(ResonanceSetId.K2, (2.0, 6.0), 41), (ResonanceSetId.F2, (0.5, 20.0), 200)]:
        step = (rng_[1] - rng_[0]) / (n - 1)
        for br in trace_curve(sid, rng_, n, window=(-30.0, 30.0)):
            pts = br.as_array()
            if len(pts) < 2:
                continue
            jumps = np.hypot(*np.diff(pts, axis=0).T)
            local = np.median(jumps) if len(jumps) else step
            worst = max(worst, float(np.max(jumps)) / (5 * max(local, step)))
    return worst <= 1.0 + tol, {"max_jump_over_threshold": worst}


def check_theta_rho_k3(tol):
    worst = 0.0
    for gamma in (-0.7, 0.3, 1.0, 2.5):
        for a2 in (-1.0, 0.5, 3.0, 7.0):
            a = k3_from_gamma(gamma, a2, eta=0.25)
            worst = max(worst, abs(theta_K(a, 1e-8) * rho_K(a) - 1))
    return worst <= tol, {"max_error": worst}


def check_eq26(tol):
    worst = 0.0
    for gamma in (-3.0, -0.5, 0.7, 1.0, 4.0):
        for eta in (0.0, 0.25, 0.5, 0.8):
            try:
                a = k2_from_gamma(gamma, eta)
            except ZeroDivisionError:
                continue
            worst = max(worst, abs(residual(ResonanceSetId.K2, a)))
            worst = max(worst, abs(theta_K(a, 1e-9) - theta_from_gamma(gamma, eta)))
    return worst <= tol, {"max_error": worst}


def check_gamma_roundtrip(tol):
    worst = 0.0
    for gamma in (-3.0, -0.5, 0.0, 0.7, 1.0, 4.0):
        for eta in (0.0, 0.25, 0.5, 0.8):
            if 1 - eta * gamma == 0:
                continue
            back = gamma_from_theta(theta_from_gamma(gamma, eta), eta)
            worst = max(worst, abs(back - gamma))
    return worst <= tol, {"max_error": worst}


def check_fg_product(tol):
    worst = 0.0
    count = 0
    for sid, a in _roots_sample():
        if sid.letter == "F":
            prod = theta_F(a, 1e-8) * lambda22_F(a)
        elif sid.letter == "G":
            prod = theta_G_forms(a)[0] * theta_G_forms(tuple(reversed(a)))[0]
        else:
            continue
        worst = max(worst, abs(prod - 1))
        count += 1
    return worst <= tol, {"roots": count, "max_error": worst}


def check_totality(tol):
    rng = _rng()
    paths = [(m, t) for m in (INF, 4.0, 3.0, 2.5, 2.0) for t in (1.0, 1.5, 2.0, 3.0, INF)]
    fails = []
    for _ in range(200):
        n = int(rng.integers(2, 4))
        a = tuple(rng.uniform(-10, 10, n))
        for mu, tau in paths:
            try:
                classify(a, SqueezePath(mu, tau))
            except Exception as exc:  # noqa: BLE001 - totality is the property under test
                fails.append(f"{a} {mu} {tau}: {exc}")
    return not fails, {"failures": fails[:5]}


def check_membership_examples(tol):
    S = ResonanceSetId
    got = [
        membership((PI**2, 4 * PI**2), tol),
        membership(((PI / 2) ** 2, (3 * PI / 2) ** 2), tol),
        membership((2.0, 2.0), tol),
    ]
    ok = (
        {S.P2, S.F2} <= got[0]
        and {S.Q2, S.G2} <= got[1]
        and got[2] == {S.K2}
    )
    return ok, {"sets": [sorted(s.value for s in g) for g in got]}


def _random_unimodular(rng):
    m11, m12, m21 = rng.uniform(-5, 5, 3)
    if abs(m11) < 0.1:
        m11 = 1.0
    return TransferMatrix(m11, m12, m21, (1 + m12 * m21) / m11)


def check_unitarity(tol):
    rng = _rng()
    worst = 0.0
    for _ in range(500):
        m = _random_unimodular(rng)
        if abs(m.det - 1) > 1e-12:
            continue
        res = scatter(m, float(rng.uniform(0.1, 10)))
        worst = max(worst, abs(res.T + res.R - 1))
    for a, path, eps in [((1.0, 1.0), SqueezePath(4.0, 1.0), 1e-3), ((3.0, 1.5), SqueezePath(2.0, 1.0), 1e-2)]:
        sw = transmission_sweep(a, path, eps=eps, k_range=(0.1, 10), samples=100)
        worst = max(worst, float(np.max(np.abs(sw.T + sw.R - 1))))
    return worst <= tol, {"max_error": worst}


def check_diag_k_independence(tol):
    worst = 0.0
    for theta in (-2.0, 0.3, 5.0):
        li = classify((1 - theta, 1 - 1 / theta), SqueezePath(4.0, 1.0))
        Ts = [scatter_limit(li, k).T for k in np.linspace(0.1, 10, 200)]
        worst = max(worst, max(Ts) - min(Ts))
    return worst <= tol, {"max_variation": worst}


def _finite_to_limit(mu, tol):
    a = (3.0, 1.5)
    li = classify(a, SqueezePath(mu, 1.0))
    worst = 0.0
    for k in (0.5, 1.0, 2.0):
        finite = transmission_sweep(a, SqueezePath(mu, 1.0), eps=1e-5, k_range=(k, k), samples=1).T[0]
        worst = max(worst, abs(finite - scatter_limit(li, k).T))
    return worst <= tol, {"max_difference": worst}


def all_checks():
    """The check list, in report order."""
    checks = [
        Check("entire.pythagorean", check_pythagorean, 1e-12),
        Check("entire.series_switchover", check_series_switchover, 1e-12),
        Check("entire.ufun_identity", check_ufun_identity, 1e-12),
        Check("transfer.wronskian", check_wronskian, 1e-10),
        Check("transfer.mirror_symmetry", check_mirror, 1e-10),
        Check("transfer.composition", check_composition, 1e-10),
        Check("transfer.naive_chain", check_naive_chain, 1e-10),
        Check("transfer.leading_forms_vanish", check_leading_forms, 0.0),
        Check("paths.family_table", check_path_table, 0.0),
        Check("paths.m21_exponent_offset", check_m21_exponent, 0.05),
        Check("paths.m12_decay", check_m12_exponent, 0.05),
        Check("paths.k_independence", check_k_independence, 1e-9),
        Check("resonance.root_residuals", check_root_residuals, 1e-9),
        Check("resonance.k2_theta_rho", check_k2_theta_rho, 1e-12),
        Check("resonance.cleared_vs_tan", check_cleared_vs_tan, 1e-9),
        Check("resonance.p_points", check_p_points, 1e-9),
        Check("resonance.branch_continuity", check_branch_continuity, 1e-9),
        Check("resonance.membership_examples", check_membership_examples, 1e-9),
        Check("classify.theta_rho_k3", check_theta_rho_k3, 1e-12),
        Check("classify.eq26_points", check_eq26, 1e-12),
        Check("classify.gamma_roundtrip", check_gamma_roundtrip, 1e-12),
        Check("classify.fg_product", check_fg_product, 1e-9),
        Check("classify.totality", check_totality, 1e-9),
        Check("scattering.unitarity", check_unitarity, 1e-10),
        Check("scattering.diag_k_independence", check_diag_k_independence, 1e-12),
        Check("scattering.finite_to_limit_K2_mu4", lambda t: _finite_to_limit(4.0, t), 1e-2),
        Check("scattering.finite_to_limit_K2_mu3", lambda t: _finite_to_limit(3.0, t), 1e-2),
    ]
    for w in table1_witnesses() + table2_witnesses():
        checks.append(Check(f"table.{w.row}.closed", lambda t, w=w: closed_form_agrees(w, t), 1e-9))
        checks.append(
            Check(f"table.{w.row}.numeric", lambda t, w=w: numeric_agrees(w, t), numeric_tolerance(w))
        )
    return checks


def run_suite(tol_override=None, only=None) -> Report:
    """Run every check (or those whose name starts with ``only``)."""
    results = []
    for chk in all_checks():
        if only and not chk.name.startswith(only):
            continue
        tol = chk.tol if tol_override is None else tol_override
        t0 = time.perf_counter()
        try:
            ok, detail = chk.fn(tol)
        except Exception as exc:  # noqa: BLE001 - a crashing check is a failing check
            ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
        results.append(
            CheckResult(chk.name, bool(ok), tol, round(time.perf_counter() - t0, 4), _plain(detail))
        )
    return Report(results)


def _plain(obj):
    """Make a detail dict JSON-serialisable."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj
