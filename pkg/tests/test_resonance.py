import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given
from hypothesis import strategies as st

from squeeze_lab.classify import rho_K, theta_K
from squeeze_lab.errors import ArityMismatch, DegenerateDenominator, DomainError, NoRootInInterval
from squeeze_lab.resonance import (
    ResonanceSetId as S,
    cosine_factor,
    membership,
    residual,
    slice_surface,
    solve_last,
    tan_form_residual,
    trace_curve,
)

PI = math.pi
Q = (PI / 2) ** 2


def test_parse_ids():
    assert S.parse("k2") is S.K2
    assert S.parse("Q3(2)") is S.Q3_2
    assert S.parse(S.F3) is S.F3
    assert S.G3.arity == 3 and S.G3.letter == "G"


def test_theta_rho_product_is_one_on_k3_symbolically():
    a1, a2 = sp.symbols("a1 a2")
    den = 1 - 2 * a1 - a2 + a1 * a2
    a3 = (a1 * a2 - a1 - a2) / den
    theta = 1 - 2 * a1 - a2 + a1 * a2
    rho = 1 - a2 - 2 * a3 + a2 * a3
    assert sp.simplify(theta * rho - 1) == 0


def test_k2_closed_form_roots():
    for a1 in (2.0, 3.0, 4.0, 5.0, 6.0):
        (a2,) = solve_last(S.K2, (a1,))
        assert a2 == pytest.approx(a1 / (a1 - 1))
        assert abs(residual(S.K2, (a1, a2))) < 1e-12
        assert theta_K((a1, a2)) * rho_K((a1, a2)) == pytest.approx(1.0, abs=1e-12)


def test_k2_degenerate():
    with pytest.raises(DegenerateDenominator) as info:
        solve_last(S.K2, (1.0,))
    assert info.value.denominator == "a1 - 1"


def test_l3_line():
    assert solve_last(S.L3, (1.0, 2.0)) == [-3.0]
    with pytest.raises(NoRootInInterval):
        solve_last(S.L3, (10.0, 20.0), search=(-5, 5))


def test_trace_k2_follows_hyperbola():
    branches = trace_curve(S.K2, (2.0, 6.0), 5)
    pts = [p for b in branches for p in b.points]
    assert len(pts) == 5
    for a1, a2 in pts:
        assert a2 == pytest.approx(a1 / (a1 - 1), rel=1e-14)


def test_slice_l3_is_a_line():
    # a2 = 0 and a3 = 0 are excluded, so the line comes back in pieces
    pts = [p for b in slice_surface(S.L3, 1.0, (-5.0, 5.0), 11) for p in b.points]
    assert len(pts) == 9
    for a1, a2, a3 in pts:
        assert a3 == pytest.approx(-1 - a2, abs=1e-14)


@pytest.mark.parametrize("set_id", [S.F2, S.G2])
def test_traced_roots_are_roots(set_id):
    branches = trace_curve(set_id, (0.5, 40.0), 200)
    res = [r for b in branches for r in b.residuals()]
    assert len(res) > 200
    assert max(abs(r) for r in res) < 1e-9


@pytest.mark.parametrize("set_id", [S.F3, S.G3])
def test_sliced_roots_are_roots(set_id):
    branches = slice_surface(set_id, 1.0, (0.5, 20.0), 40)
    res = [r for b in branches for r in b.residuals()]
    assert res and max(abs(r) for r in res) < 1e-9


def test_branches_are_continuous():
    for b in trace_curve(S.F2, (0.5, 40.0), 300):
        arr = b.as_array()
        if len(arr) > 2:
            jumps = np.abs(np.diff(arr[:, 1]))
            assert np.max(jumps) < 5.0


@given(
    st.floats(min_value=-20, max_value=20).filter(lambda x: abs(x) > 0.05),
    st.floats(min_value=-20, max_value=20).filter(lambda x: abs(x) > 0.05),
)
def test_cleared_equals_tan_form_times_cosines(a1, a2):
    for set_id in (S.F2, S.G2):
        cf = cosine_factor(set_id, (a1, a2))
        assume(abs(cf) > 1e-3)
        lhs = residual(set_id, (a1, a2))
        rhs = cf * tan_form_residual(set_id, (a1, a2))
        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize(
    "a,expected",
    [
        ((PI**2, 4 * PI**2), {S.F2, S.G2, S.P2}),
        ((Q, Q), {S.G2, S.Q2}),
        ((2.0, 2.0), {S.K2}),
        ((1.0, -1.0), {S.L2}),
        ((1.0, 2.0, -3.0), {S.L3}),
        ((1.0, 1.0), set()),
    ],
)
def test_membership_examples(a, expected):
    assert membership(a) == expected


def test_point_sets_need_positive_entries():
    assert residual(S.P2, (-PI**2, PI**2)) == math.inf
    assert residual(S.Q3_3, (Q, Q, PI**2)) < 1e-12
    assert residual(S.Q3_2, (Q, PI**2, Q)) < 1e-12


def test_residual_validation():
    with pytest.raises(ArityMismatch):
        residual(S.K2, (1.0, 2.0, 3.0))
    with pytest.raises(DomainError):
        residual(S.K2, (1.0, 0.0))
    with pytest.raises(DomainError):
        membership((1.0, 1.0), tol=0)


def test_f2_p_points_lie_on_f2():
    for n1 in (1, 2, 3):
        for n2 in (1, 2, 3):
            a = ((n1 * PI) ** 2, (n2 * PI) ** 2)
            assert abs(residual(S.F2, a)) < 1e-9
