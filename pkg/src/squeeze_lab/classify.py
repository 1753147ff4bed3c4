"""Classification of squeezing limits into one-point interactions.

:func:`classify` is table driven: every ``(family, branch, N)`` cell of the
path taxonomy maps to one rule, and each rule checks resonance-set
membership and returns the closed-form limit.  :func:`classify_numeric`
reaches a verdict from an exact trace instead, so the two can be compared.

Conventions for the limit matrix ``Lambda``:

* delta-prime potential: ``diag(theta, 1/theta)``
* delta: ``[[sign, 0], [alpha, sign]]`` (``sign = -1`` covers ``theta = -1``)
* delta-prime + delta: ``[[theta, 0], [alpha, 1/theta]]``
* reflectionless: ``sign * I``
* separated (Dirichlet): no matrix; the point is opaque.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .entire import cfun, sfun
from .errors import (
    AmbiguousMembership,
    ArityMismatch,
    BothFormsDegenerate,
    DegenerateDenominator,
    DomainError,
    NoRootInInterval,
    OffSet,
)
from .paths import Branch, Family, SqueezePath, estimate_limit, evaluate_along_path
from .resonance import ResonanceSetId, _scan_roots, residual
from .transfer import TransferMatrix

DEFAULT_TOL = 1e-9
DEFAULT_ETA = 0.5
FORM_GUARD = 1e-8

S = ResonanceSetId


class LimitKind(enum.Enum):
    DELTA_PRIME_POTENTIAL = "delta_prime_potential"
    DELTA = "delta"
    DELTA_PRIME_INTERACTION = "delta_prime_interaction"
    DELTA_PRIME_PLUS_DELTA = "delta_prime_plus_delta"
    REFLECTIONLESS = "reflectionless"
    SEPARATED_DIRICHLET = "separated_dirichlet"
    NOT_CONVERGED = "not_converged"


class Provenance(enum.Enum):
    CLOSED_FORM = "closed_form"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class LimitInteraction:
    """Tagged limit interaction.

    Only the fields relevant to ``kind`` are set: ``theta`` for the
    delta-prime kinds, ``alpha`` for the delta kinds, ``sign`` for delta and
    reflectionless, ``beta`` for the (never emitted) delta-prime interaction
    and ``exponents`` for :attr:`LimitKind.NOT_CONVERGED`.
    """

    kind: LimitKind
    theta: float | None = None
    alpha: float | None = None
    beta: float | None = None
    sign: int | None = None
    exponents: dict | None = None
    provenance: Provenance = Provenance.CLOSED_FORM
    sets: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.theta is not None and self.theta == 0:
            raise DomainError("theta must be nonzero")

    @property
    def connected(self):
        return self.kind not in (LimitKind.SEPARATED_DIRICHLET, LimitKind.NOT_CONVERGED)

    @property
    def matrix(self) -> TransferMatrix | None:
        """Limit transfer matrix, ``None`` for separated or unconverged limits."""
        k = self.kind
        if k is LimitKind.DELTA_PRIME_POTENTIAL:
            return TransferMatrix(self.theta, 0.0, 0.0, 1.0 / self.theta)
        if k is LimitKind.DELTA:
            s = float(self.sign)
            return TransferMatrix(s, 0.0, self.alpha, s)
        if k is LimitKind.DELTA_PRIME_PLUS_DELTA:
            return TransferMatrix(self.theta, 0.0, self.alpha, 1.0 / self.theta)
        if k is LimitKind.REFLECTIONLESS:
            s = float(self.sign)
            return TransferMatrix(s, 0.0, 0.0, s)
        if k is LimitKind.DELTA_PRIME_INTERACTION:
            return TransferMatrix(1.0, self.beta, 0.0, 1.0)
        return None

    def to_dict(self):
        out = {"kind": self.kind.value, "provenance": self.provenance.value}
        for name in ("theta", "alpha", "beta", "sign", "exponents"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        m = self.matrix
        out["matrix"] = None if m is None else [[m.m11, m.m12], [m.m21, m.m22]]
        return out


def from_theta_alpha(theta, alpha, tol=DEFAULT_TOL, provenance=Provenance.CLOSED_FORM, sets=()):
    """Normalise a lower-triangular limit ``[[theta, 0], [alpha, 1/theta]]``."""
    unit = abs(abs(theta) - 1.0) <= tol
    zero = abs(alpha) <= tol
    sign = 1 if theta > 0 else -1
    if unit and zero:
        return LimitInteraction(LimitKind.REFLECTIONLESS, sign=sign, provenance=provenance, sets=sets)
    if unit:
        return LimitInteraction(
            LimitKind.DELTA, alpha=float(alpha), sign=sign, provenance=provenance, sets=sets
        )
    if zero:
        return LimitInteraction(
            LimitKind.DELTA_PRIME_POTENTIAL, theta=float(theta), provenance=provenance, sets=sets
        )
    return LimitInteraction(
        LimitKind.DELTA_PRIME_PLUS_DELTA,
        theta=float(theta),
        alpha=float(alpha),
        provenance=provenance,
        sets=sets,
    )


def separated(provenance=Provenance.CLOSED_FORM, exponents=None):
    return LimitInteraction(
        LimitKind.SEPARATED_DIRICHLET, exponents=exponents, provenance=provenance
    )


# ---------------------------------------------------------------------------
# closed forms


def _intensities(a, sizes=(2, 3)):
    a = tuple(float(x) for x in a)
    if len(a) not in sizes:
        raise ArityMismatch(f"expected N in {sizes}, got N={len(a)}")
    if any(x == 0.0 or not math.isfinite(x) for x in a):
        raise DomainError("intensity must be nonzero and finite")
    return a


def _require(set_id, a, tol):
    if abs(residual(set_id, a)) >= tol:
        raise OffSet(f"{a} is not on {set_id.value} (tol {tol:g})")


def theta_K(a, tol=DEFAULT_TOL) -> float:
    """Diagonal limit element on the ``K`` sets.

    ``1 - a1`` for ``N = 2`` and ``1 - 2a1 - a2 + a1a2`` for ``N = 3``.
    """
    a = _intensities(a)
    _require(S.K2 if len(a) == 2 else S.K3, a, tol)
    if len(a) == 2:
        return 1.0 - a[0]
    a1, a2, _ = a
    return 1.0 - 2 * a1 - a2 + a1 * a2


def rho_K(a) -> float:
    """Companion element ``lambda_22`` on ``K``; equals ``1/theta`` there."""
    a = _intensities(a)
    if len(a) == 2:
        return 1.0 - a[1]
    _, a2, a3 = a
    return 1.0 - a2 - 2 * a3 + a2 * a3


def _dual(num1, den1, num2, den2, guard=FORM_GUARD):
    """Pick the quotient with the larger denominator; report both."""
    forms = []
    for num, den in ((num1, den1), (num2, den2)):
        forms.append(num / den if abs(den) > guard else math.nan)
    if abs(den1) <= guard and abs(den2) <= guard:
        raise BothFormsDegenerate("both quotient forms have vanishing denominators")
    best = forms[0] if abs(den1) >= abs(den2) else forms[1]
    return best, forms


def _cs(a):
    return [cfun(x) for x in a], [sfun(x) for x in a]


def theta_F_forms(a):
    """Both quotient representations of ``lambda_11`` on the ``F`` sets.

    Returns ``(theta, (form1, form2))``; a form is ``nan`` when its
    denominator is below the guard.
    """
    a = _intensities(a)
    c, s = _cs(a)
    if len(a) == 2:
        (a1, a2), (c1, c2), (s1, s2) = a, c, s
        return _dual(c1 - a1 * s1, c2, -a1 * s1, a2 * s2)
    (a1, a2, a3), (c1, c2, c3), (s1, s2, s3) = a, c, s
    num1 = c1 * c2 - 2 * a1 * s1 * c2 - a2 * c1 * s2 + (a1 * a2 - a1) * s1 * s2
    num2 = a1 * a2 * s1 * s2 - a1 * s1 * c2 - a2 * c1 * s2
    return _dual(num1, c3, num2, a3 * s3)


def theta_F(a, tol=DEFAULT_TOL) -> float:
    """``theta = lambda_11`` of the delta-prime potential on ``F2``/``F3``.

    Raises
    ------
    OffSet
        When ``a`` is not on the F set.
    BothFormsDegenerate
        When neither representation has a usable denominator.
    """
    a = _intensities(a)
    _require(S.F2 if len(a) == 2 else S.F3, a, tol)
    return theta_F_forms(a)[0]


def lambda22_F(a) -> float:
    """``lambda_22`` on the F sets, from its own pair of representations."""
    a = _intensities(a)
    return theta_F_forms(tuple(reversed(a)))[0]


def theta_G_forms(a):
    """Both representations of ``lambda_11`` on the ``G`` sets."""
    a = _intensities(a)
    c, s = _cs(a)
    if len(a) == 2:
        (a1, a2), (c1, c2), (s1, s2) = a, c, s
        return _dual(c1, c2, -a1 * s1, a2 * s2)
    (a1, a2, a3), (c1, c2, c3), (s1, s2, s3) = a, c, s
    return _dual(c1 * c2 - a1 * s1 * s2, c3, -(a1 * s1 * c2 + a2 * c1 * s2), a3 * s3)


def alpha_G(a) -> float:
    """Off-diagonal limit element along path 4c on the ``G`` sets (entire form)."""
    a = _intensities(a)
    c, s = _cs(a)
    if len(a) == 2:
        (a1, a2), (s1, s2) = a, s
        return a1 * a2 * s1 * s2
    (a1, a2, a3), (c1, c2, c3), (s1, s2, s3) = a, c, s
    return a1 * a2 * s1 * s2 * c3 + 2 * a1 * a3 * s1 * c2 * s3 + a2 * a3 * c1 * s2 * s3


def theta_alpha_G(a, branch="4c", tol=DEFAULT_TOL):
    """``(theta, alpha)`` on the G sets along path ``4c`` or ``4d``."""
    a = _intensities(a)
    _require(S.G2 if len(a) == 2 else S.G3, a, tol)
    branch = str(branch).lower().lstrip("4")
    if branch not in ("c", "d"):
        raise DomainError("branch must be 4c or 4d")
    theta = theta_G_forms(a)[0]
    return theta, (alpha_G(a) if branch == "c" else 0.0)


def p_sign(a) -> int:
    """``(-1)^(n1 + ... + nN)`` for ``a_j = (n_j pi)^2``."""
    n = sum(int(round(math.sqrt(x) / math.pi)) for x in a)
    return -1 if n % 2 else 1


def symmetric_branch_a1(a2, sign=+1, window=(-50.0, 50.0), cells=None) -> list:
    """``a1`` roots of the symmetric ``(a1, a2, a1)`` reduction of ``G3``.

    ``sign = +1`` gives the ``theta = +1`` branch, ``sign = -1`` the
    ``theta = -1`` branch.  Half-angle cleared forms (``q = a2/4``) are used,
    so there is no pole at ``sin sqrt(a2) = 0``:

    * ``+1``: ``2 a1 s(a1) c(q) + a2 s(q) c(a1) = 0``
    * ``-1``: ``a1 s(a1) s(q) - 2 c(a1) c(q) = 0``
    """
    a2 = float(a2)
    if a2 == 0.0:
        raise DomainError("intensity must be nonzero")
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    q = a2 / 4.0
    cq, sq = cfun(q), sfun(q)

    def f(x):
        if sign == 1:
            return 2 * x * sfun(x) * cq + a2 * sq * cfun(x)
        return x * sfun(x) * sq - 2 * cfun(x) * cq

    def fvec(x):
        if sign == 1:
            return 2 * x * sfun(x) * cq + a2 * sq * cfun(x)
        return x * sfun(x) * sq - 2 * cfun(x) * cq

    roots = _scan_roots(f, float(window[0]), float(window[1]), cells, fvec)
    if not roots:
        raise NoRootInInterval(f"no symmetric-branch root for a2={a2} in {window}")
    return roots


# ---------------------------------------------------------------------------
# boundary-condition maps


@dataclass(frozen=True)
class BoundaryParams:
    """Averaging weight ``eta`` and delta-prime intensity ``gamma``."""

    eta: float = DEFAULT_ETA
    gamma: float = 0.0

    @property
    def theta(self):
        return theta_from_gamma(self.gamma, self.eta)


def theta_from_gamma(gamma, eta=DEFAULT_ETA) -> float:
    """``theta = (1 + (1 - eta) gamma) / (1 - eta gamma)``."""
    den = 1.0 - eta * gamma
    if den == 0.0:
        raise DegenerateDenominator("1 - eta*gamma vanishes", denominator="1 - eta*gamma")
    return (1.0 + (1.0 - eta) * gamma) / den


def gamma_from_theta(theta, eta=DEFAULT_ETA) -> float:
    """Inverse map ``gamma = (theta - 1) / (eta theta + 1 - eta)``."""
    den = eta * theta + 1.0 - eta
    if den == 0.0:
        raise DegenerateDenominator(
            "eta*theta + 1 - eta vanishes", denominator="eta*theta + 1 - eta"
        )
    return (theta - 1.0) / den


def k2_from_gamma(gamma, eta=DEFAULT_ETA):
    """Point of ``K2`` realising the delta-prime potential of intensity ``gamma``."""
    d1 = 1.0 - eta * gamma
    d2 = 1.0 + (1.0 - eta) * gamma
    if d1 == 0.0:
        raise DegenerateDenominator("1 - eta*gamma vanishes", denominator="1 - eta*gamma")
    if d2 == 0.0:
        raise DegenerateDenominator(
            "1 + (1 - eta)*gamma vanishes", denominator="1 + (1 - eta)*gamma"
        )
    return -gamma / d1, gamma / d2


def k3_from_gamma(gamma, a2, eta=DEFAULT_ETA):
    """Point ``(a1, a2, a3)`` of ``K3`` for given ``gamma`` and free ``a2 != 2``."""
    if a2 == 2.0:
        raise DegenerateDenominator("a2 - 2 vanishes", denominator="a2 - 2")
    d1 = 1.0 - eta * gamma
    d2 = 1.0 + (1.0 - eta) * gamma
    if d1 == 0.0:
        raise DegenerateDenominator("1 - eta*gamma vanishes", denominator="1 - eta*gamma")
    if d2 == 0.0:
        raise DegenerateDenominator(
            "1 + (1 - eta)*gamma vanishes", denominator="1 + (1 - eta)*gamma"
        )
    return (a2 + gamma / d1) / (a2 - 2), a2, (a2 - gamma / d2) / (a2 - 2)


# ---------------------------------------------------------------------------
# table-driven classification


def _on(set_id, a, tol):
    """Membership with an explicit ambiguity band ``(tol, 10 tol)``."""
    r = abs(residual(set_id, a))
    if r < tol:
        return True
    if r < 10 * tol:
        raise AmbiguousMembership(
            f"{set_id.value} residual {r:.3g} lies between tol={tol:g} and 10*tol"
        )
    return False


def _rule_dirichlet(a, tol):
    return separated()


def _rule_k(a, tol):
    sid = S.K2 if len(a) == 2 else S.K3
    if not _on(sid, a, tol):
        return separated()
    return from_theta_alpha(theta_K(a, 10 * tol), 0.0, tol, sets=(sid,))


def _rule_k_alpha13(a, tol):
    if not _on(S.K3, a, tol):
        return separated()
    return from_theta_alpha(theta_K(a, 10 * tol), a[0] * a[2], tol, sets=(S.K3,))


def _l_rule(alpha_fn):
    def rule(a, tol):
        sid = S.L2 if len(a) == 2 else S.L3
        if not _on(sid, a, tol):
            return separated()
        return from_theta_alpha(1.0, alpha_fn(a), tol, sets=(sid,))

    return rule


def _alpha_1c(a):
    if len(a) == 2:
        return a[0] * a[1]
    a1, a2, a3 = a
    return a1 * a2 + 2 * a1 * a3 + a2 * a3


def _alpha_2c(a):
    if len(a) == 2:
        return a[0] * a[1]
    a1, a2, a3 = a
    return a1 * a2 + 3 * a1 * a3 + a2 * a3


_rule_l_1c = _l_rule(_alpha_1c)
_rule_l_2c = _l_rule(_alpha_2c)
_rule_l_identity = _l_rule(lambda a: 0.0)
_rule_l_alpha13 = _l_rule(lambda a: a[0] * a[2])


def _p_point(a, tol):
    sid = S.P2 if len(a) == 2 else S.P3
    if _on(sid, a, tol):
        return LimitInteraction(LimitKind.REFLECTIONLESS, sign=p_sign(a), sets=(sid,))
    return None


def _rule_4a(a, tol):
    hit = _p_point(a, tol)
    if hit is not None:
        return hit
    sid = S.F2 if len(a) == 2 else S.F3
    if not _on(sid, a, tol):
        return separated()
    return from_theta_alpha(theta_F(a, 10 * tol), 0.0, tol, sets=(sid,))


def _rule_4b(a, tol):
    hit = _p_point(a, tol)
    return hit if hit is not None else separated()


def _g_rule(branch):
    def rule(a, tol):
        hit = _p_point(a, tol)
        if hit is not None:
            return hit
        sid = S.G2 if len(a) == 2 else S.G3
        if not _on(sid, a, tol):
            return separated()
        theta, alpha = theta_alpha_G(a, branch, 10 * tol)
        return from_theta_alpha(theta, alpha, tol, sets=(sid,))

    return rule


_rule_4c = _g_rule("c")
_rule_4d = _g_rule("d")

F1, F2, F3, F4 = Family.F1, Family.F2, Family.F3, Family.F4
A, B, C, D = Branch.A, Branch.B, Branch.C, Branch.D

# (family, branch, N) -> rule; the literal content of the path tables
RULES = {
    (F1, A, 2): _rule_k, (F1, A, 3): _rule_k,
    (F2, A, 2): _rule_k, (F2, A, 3): _rule_k_alpha13,
    (F3, A, 2): _rule_k, (F3, A, 3): _rule_dirichlet,
    (F1, B, 2): _rule_dirichlet, (F1, B, 3): _rule_dirichlet,
    (F2, B, 2): _rule_dirichlet, (F2, B, 3): _rule_dirichlet,
    (F3, B, 2): _rule_dirichlet, (F3, B, 3): _rule_dirichlet,
    (F1, C, 2): _rule_l_1c, (F1, C, 3): _rule_l_1c,
    (F2, C, 2): _rule_l_2c, (F2, C, 3): _rule_l_2c,
    (F3, C, 2): _rule_l_1c, (F3, C, 3): _rule_dirichlet,
    (F1, D, 2): _rule_l_identity, (F1, D, 3): _rule_l_identity,
    (F2, D, 2): _rule_l_identity, (F2, D, 3): _rule_l_alpha13,
    (F3, D, 2): _rule_l_identity, (F3, D, 3): _rule_dirichlet,
    (F4, A, 2): _rule_4a, (F4, A, 3): _rule_4a,
    (F4, B, 2): _rule_4b, (F4, B, 3): _rule_4b,
    (F4, C, 2): _rule_4c, (F4, C, 3): _rule_4c,
    (F4, D, 2): _rule_4d, (F4, D, 3): _rule_4d,
}


def classify(a, path: SqueezePath, tol=DEFAULT_TOL) -> LimitInteraction:
    """Closed-form limit interaction of ``a`` along ``path``.

    Parameters
    ----------
    a : sequence of float
        Two or three nonzero intensities.
    path : SqueezePath
    tol : float
        Membership tolerance on the cleared residuals.

    Raises
    ------
    ArityMismatch
        For ``N`` outside ``{2, 3}``.
    AmbiguousMembership
        When a deciding residual lies in ``(tol, 10 tol)``.
    """
    a = _intensities(a)
    if not tol > 0:
        raise DomainError("tol must be positive")
    label = path.label
    return RULES[(label.family, label.branch, len(a))](a, tol)


def classify_numeric(a, path: SqueezePath, k=1.0, seq=None, tol=1e-4) -> LimitInteraction:
    """Limit interaction read off an exact trace along ``path``.

    A divergent ``m21`` with finite diagonal means the separated limit;
    any other divergence, or an inconclusive element, is reported as
    :attr:`LimitKind.NOT_CONVERGED` with the fitted exponents.
    """
    trace = evaluate_along_path(a, path, k, seq)
    est = estimate_limit(trace, strict=False)
    exps = {n: e.exponent for n, e in est.elements.items() if e.divergent}
    if any(e.kind == "inconclusive" for e in est.elements.values()):
        return LimitInteraction(LimitKind.NOT_CONVERGED, exponents=exps, provenance=Provenance.NUMERIC)
    if exps:
        if set(exps) == {"m21"}:
            return separated(Provenance.NUMERIC, exps)
        return LimitInteraction(LimitKind.NOT_CONVERGED, exponents=exps, provenance=Provenance.NUMERIC)
    return from_theta_alpha(est["m11"].value, est["m21"].value, tol, Provenance.NUMERIC)
