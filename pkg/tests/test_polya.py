import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from hardedge import polya
from hardedge.complexmath import DomainError
from hardedge.quadrature import integrate_interval

# Ginibre weights from a 30-digit reference (mpmath Laguerre polynomials)
QN_FROZEN = {(1, 0.5): 0.30326532985631671, (2, 0.5): 0.15163266492815836, (3, 1.7): -0.31997019237836477}
WN_FROZEN = {(1, 0.5): 0.60653065971263342, (2, 0.5): 0.90979598956895014, (3, 1.7): -0.11965770825454119}


def transforms(**kw):
    return polya.PolyaTransforms(polya.ginibre(**kw))


def generic(**kw):
    return polya.PolyaTransforms(polya.ginibre(closed_forms=False, **kw))


def test_spec_validation():
    with pytest.raises(ValueError):
        polya.MellinSpec("laguerre")
    with pytest.raises(ValueError):
        polya.ginibre(nu=-1)
    with pytest.raises(ValueError):
        polya.ginibre(n=0)
    with pytest.raises(ValueError):
        polya.ginibre(tilt=2.0)
    with pytest.raises(ValueError):
        polya.custom()
    spec = polya.ginibre(n=4)
    assert spec.with_n(None).is_limit and not spec.is_limit
    assert spec.without_closed_forms().closed_forms == frozenset()
    assert "ginibre" in spec.describe()


def test_custom_matches_ginibre():
    spec = polya.custom(mellin=special.gamma, n=3)
    t = polya.PolyaTransforms(spec)
    g = generic(n=3)
    lam = np.array([0.2, 0.6])
    assert np.allclose(t.qn_weight(lam), g.qn_weight(lam), atol=1e-10)
    assert np.allclose(t.chi(0.7 + 0.1j), g.chi(0.7 + 0.1j), atol=1e-14)


@pytest.mark.parametrize("key", list(QN_FROZEN))
def test_weights_closed_form(key):
    n, lam = key
    t = transforms(n=n)
    assert abs(t.qn_weight(lam) - QN_FROZEN[key]) <= 1e-14
    assert abs(t.wn_weight(lam) - WN_FROZEN[key]) <= 1e-14


@pytest.mark.parametrize("key", [(1, 0.5), (2, 0.5)])
def test_weights_ray_route(key):
    n, lam = key
    t = generic(n=n)
    assert abs(t.qn_weight(lam) - QN_FROZEN[key]) <= 1e-9
    assert abs(t.wn_weight(lam) - WN_FROZEN[key]) <= 1e-9


def test_w1_is_omega_and_q1_is_derivative():
    lam = np.linspace(0.1, 3.0, 7)
    t = transforms(n=1)
    assert np.allclose(t.wn_weight(lam), np.exp(-lam), atol=1e-15)
    assert np.allclose(t.qn_weight(lam), (1 - lam) * np.exp(-lam), atol=1e-15)


def test_qn_is_derivative_of_lambda_wn():
    t = transforms(n=4, nu=1)
    lam, h = 1.3, 1e-5
    fd = ((lam + h) * t.wn_weight(lam + h) - (lam - h) * t.wn_weight(lam - h)) / (2 * h)
    assert abs(fd - t.qn_weight(lam)) <= 1e-8


def test_qn_moments():
    # int l^j q_3 dl: zero for j < 3, (-1)^3 3! Gamma(4) / Gamma(3) = -18 at j = 3
    t = transforms(n=3)
    moments = [integrate_interval(lambda l, j=j: l ** j * t.qn_weight(l), 0.0, 80.0, 1e-12).real
               for j in range(4)]
    assert np.allclose(moments[:3], 0.0, atol=1e-10)
    assert abs(moments[3] + 18) <= 1e-9


def test_pn_polynomial_routes_agree():
    lam = np.array([0.1, 1.0, 4.0])
    for nu in (0, 2):
        a = transforms(n=6, nu=nu).pn_polynomial(lam)
        b = generic(n=6, nu=nu).pn_polynomial(lam)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-14)


def test_chi_and_jomega_finite():
    t = transforms(n=3)
    # chi(z) = sum_{j<3} z^j / j!
    assert abs(t.chi(2.0) - 5.0) <= 1e-14
    assert abs(t.jomega(2.0) - (1 + 2j - 1.0)) <= 1e-14
    with pytest.raises(DomainError):
        transforms().chi(1.0)


@pytest.mark.parametrize("nu", [0, 1])
def test_jomega_limit_routes(nu):
    z = np.array([0.5, -3 + 1j, 7j, 12.0])
    a = transforms(nu=nu).jomega(z)
    b = generic(nu=nu).jomega(z)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-13)


@pytest.mark.parametrize("z", [1.0, -0.5 + 0.3j, 2.0 + 1.0j, 0.7 - 0.2j, -3 - 2j])
def test_komega_routes(z):
    a = transforms().komega(z)
    b = generic().komega(z)
    assert abs(a - b) <= 1e-9 * max(1, abs(a))


def test_komega_cut():
    with pytest.raises(DomainError):
        transforms().komega(1j)
    with pytest.raises(DomainError):
        generic().komega(0.0)


@given(st.floats(-4, 4), st.floats(-4, 4), st.floats(0.15, 1.4), st.floats(0.15, 1.4))
@settings(max_examples=15, deadline=None)
def test_komega_tilt_invariance(x, y, th1, th2):
    if abs(complex(x, y)) < 0.1:
        return
    t = generic()
    a = t.komega_tilted(complex(x, y), th1)
    b = t.komega_tilted(complex(x, y), th2)
    assert abs(a - b) <= 1e-8 * max(1, abs(a))


def test_jtilde_routes_and_cut_jump():
    ys = np.array([0.2, 1.0, 3.0])
    t = transforms()
    g = generic()
    assert np.allclose(t.jtilde(ys), g.jtilde(ys), atol=1e-10)
    y, eps = 0.5, 1e-7
    jump = 1j / (2 * math.pi) * (g.komega(1j * y + eps) - g.komega(1j * y - eps))
    assert abs(jump - t.jtilde(y)) <= 1e-5
    with pytest.raises(DomainError):
        t.jtilde(-1.0)


def test_module_level_helpers():
    spec = polya.ginibre(n=2)
    assert polya.qn_weight(spec, 0.5) == transforms(n=2).qn_weight(0.5)
    assert polya.wn_weight(spec, 0.5) == transforms(n=2).wn_weight(0.5)
    assert np.ndim(polya.jtilde(polya.ginibre(), np.array([0.5, 1.0]))) == 1


def test_conditions_and_bound():
    rep = polya.check_conditions(polya.ginibre(), warn=False)
    assert rep.c_tilde == pytest.approx(1.0)
    assert rep.condition1_ok and rep.condition2_ok
    rng = np.random.default_rng(5)
    z = 8 * (rng.random(50) - 0.5) + 8j * (rng.random(50) - 0.5)
    assert np.all(np.abs(generic().jomega(z)) <= polya.jomega_bound(rep.c_tilde, z))


def test_conditions_warn_for_growing_mellin():
    spec = polya.custom(log_mellin=lambda s: s * s, n=3)
    with pytest.warns(RuntimeWarning):
        rep = polya.check_conditions(spec)
    assert not rep.condition2_ok


def test_weight_domain():
    with pytest.raises(DomainError):
        transforms(n=2).qn_weight(0.0)
    with pytest.raises(DomainError):
        transforms().qn_weight(0.5)
