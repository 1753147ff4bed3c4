import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from squeeze_lab.errors import DomainError
from squeeze_lab.transfer import (
    RegularizedSystem,
    TransferMatrix,
    delta_matrix,
    gap_matrix,
    layer_matrix,
    stack,
    stack_factors,
    stack_matrix,
)

mpmath.mp.dps = 50


def mp_layer(a, eps, l, k):
    """Layer matrix written with explicit (possibly imaginary) wavenumber."""
    kj = mpmath.sqrt(mpmath.mpf(k) ** 2 + mpmath.mpf(a) / (mpmath.mpf(eps) * l))
    x = kj * l
    c = mpmath.cos(x)
    s = mpmath.sin(x)
    return mpmath.matrix([[c, s / kj], [-kj * s, c]])


def mp_gap(r, k):
    c, s = mpmath.cos(k * r), mpmath.sin(k * r)
    return mpmath.matrix([[c, s / k], [-k * s, c]])


def mp_chain(a, eps, l, r, k):
    l, r, k = mpmath.mpf(l), mpmath.mpf(r), mpmath.mpf(k)
    m = mp_layer(a[0], eps, l, k)
    for x in a[1:]:
        m = mp_layer(x, eps, l, k) * mp_gap(r, k) * m
    return np.array([[float(mpmath.re(m[i, j])) for j in range(2)] for i in range(2)])


intensity = st.floats(min_value=-10, max_value=10, allow_nan=False).filter(lambda x: abs(x) > 1e-3)


@given(
    st.lists(intensity, min_size=2, max_size=3),
    st.floats(min_value=1e-6, max_value=1.0),
    st.floats(min_value=0.1, max_value=10.0),
    st.floats(min_value=2.0, max_value=5.0),
    st.floats(min_value=1.0, max_value=4.0),
)
def test_unit_determinant(a, eps, k, mu, tau):
    m = stack(a, eps, eps ** (mu - 1), eps**tau, k)
    assert m.is_finite()
    assert abs(m.det - 1) <= 1e-10


@pytest.mark.parametrize(
    "a,eps,mu,tau,k",
    [
        ((1.0, 2.0, -1.0), 1e-2, 3.0, 1.0, 1.0),
        ((2.0, 2.0), 1e-3, 4.0, 1.0, 1.0),
        ((-3.0, 0.5), 0.3, 2.0, 2.0, 2.5),
        ((5.0, -1.0, 4.0), 1e-1, 2.5, 1.5, 0.7),
    ],
)
def test_matches_high_precision_chain(a, eps, mu, tau, k):
    l, r = eps ** (mu - 1), eps**tau
    got = stack(a, eps, l, r, k).as_array()
    ref = mp_chain(a, eps, l, r, k)
    scale = max(1.0, np.max(np.abs(ref)))
    assert np.max(np.abs(got - ref)) <= 1e-10 * scale


def test_layer_matches_closed_form_well():
    a, eps, l, k = 2.0, 0.1, 0.5, 1.3
    kj = math.sqrt(k * k + a / (eps * l))
    m = layer_matrix(a, eps, l, k)
    ref = [math.cos(kj * l), math.sin(kj * l) / kj, -kj * math.sin(kj * l), math.cos(kj * l)]
    np.testing.assert_allclose(m.entries, ref, rtol=1e-13, atol=1e-14)


def test_layer_barrier_is_real_and_hyperbolic():
    a, eps, l, k = -2.0, 0.1, 0.5, 1.0
    kap = math.sqrt(-(k * k + a / (eps * l)))
    m = layer_matrix(a, eps, l, k)
    ref = [math.cosh(kap * l), math.sinh(kap * l) / kap, kap * math.sinh(kap * l), math.cosh(kap * l)]
    np.testing.assert_allclose(m.entries, ref, rtol=1e-13)


def test_gap_matrix_is_free_propagation():
    m = gap_matrix(0.7, 2.0)
    np.testing.assert_allclose(
        m.entries, [math.cos(1.4), math.sin(1.4) / 2, -2 * math.sin(1.4), math.cos(1.4)]
    )
    assert gap_matrix(0.0, 1.0) == TransferMatrix.identity()


def test_delta_matrix_cancels_exactly():
    # -a/eps summed over a zero-sum stack must leave no rounding residue
    eps = 1e-9
    m = stack((1.0, 2.0, -3.0), eps, 0.0, 0.0, 1.0)
    assert m.m21 == 0.0
    assert m.det == 1.0


def test_mirror_swaps_diagonal():
    a, eps, l, r, k = (1.0, 2.5, -0.5), 0.05, 0.05**2, 0.05, 1.2
    m = stack(a, eps, l, r, k)
    w = stack(a[::-1], eps, l, r, k)
    np.testing.assert_allclose([w.m11, w.m12, w.m21, w.m22], [m.m22, m.m12, m.m21, m.m11], rtol=1e-11)


def test_factors_multiply_to_stack():
    sys_ = RegularizedSystem((1.0, -2.0, 3.0), 0.1, 0.01, 0.1, 1.0)
    prod = TransferMatrix.identity()
    for f in stack_factors(sys_):
        prod = f @ prod
    np.testing.assert_allclose(prod.entries, stack_matrix(sys_).entries, rtol=1e-14)


def test_double_double_product_beats_numpy_on_cancellation():
    big = 1e8
    m1 = TransferMatrix(1.0, 0.0, big, 1.0)
    m2 = TransferMatrix(1.0, 1e-8, -big, 0.0)
    prod = m2 @ m1
    exact = np.array([[1 + 1e-8 * big, 1e-8], [-big, 0.0]])
    np.testing.assert_allclose(prod.as_array(), exact, rtol=1e-15)
    assert prod.det == pytest.approx(np.linalg.det(exact), rel=1e-12)


@given(
    st.floats(min_value=-5, max_value=5).filter(lambda x: abs(x) > 0.01),
    st.floats(min_value=1e-4, max_value=1.0),
    st.floats(min_value=0.0, max_value=2.0),
)
def test_composition_over_split_stack(a1, eps, r):
    assume(eps > 0)
    k, l = 1.1, eps
    a = (a1, 2.0, -1.0)
    whole = stack(a, eps, l, r, k)
    left = stack(a[:2], eps, l, r, k)
    right = layer_matrix(a[2], eps, l, k)
    glued = right @ (gap_matrix(r, k) @ left)
    np.testing.assert_allclose(glued.entries, whole.entries, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize(
    "kwargs,field",
    [
        (dict(intensities=(1.0, 0.0), eps=0.1, l=0.1, r=0.1, k=1.0), "intensity"),
        (dict(intensities=(1.0, math.inf), eps=0.1, l=0.1, r=0.1, k=1.0), "intensity"),
        (dict(intensities=(1.0,), eps=0.0, l=0.1, r=0.1, k=1.0), "eps"),
        (dict(intensities=(1.0,), eps=0.1, l=0.1, r=0.1, k=0.0), "k"),
        (dict(intensities=(1.0,), eps=0.1, l=-1.0, r=0.1, k=1.0), "l"),
        (dict(intensities=(), eps=0.1, l=0.1, r=0.1, k=1.0), "intensity"),
    ],
)
def test_system_validation_names_field(kwargs, field):
    with pytest.raises(DomainError, match=field):
        RegularizedSystem(**kwargs)


def test_delta_matrix_rejects_bad_eps():
    with pytest.raises(DomainError):
        delta_matrix(1.0, 0.0)
