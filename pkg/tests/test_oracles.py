import math

import numpy as np
import pytest

from hardedge import oracles


def test_loggamma_stirling_known_values():
    assert abs(oracles.loggamma_stirling(0.5) - 0.5 * math.log(math.pi)) <= 1e-14
    assert abs(oracles.loggamma_stirling(10) - math.log(362880)) <= 1e-13
    # principal branch far from the real axis: Im log Gamma(-2.5 + 0.5i) = -8.8709628852474561
    assert abs(oracles.loggamma_stirling(-2.5 + 0.5j).imag + 8.8709628852474561) <= 1e-13


def test_bessel_series_known_values():
    assert oracles.bessel_j_series(0, 0.0) == 1.0
    assert abs(oracles.bessel_j_series(0, 2.404825557695773)) <= 1e-15
    assert abs(oracles.bessel_i_series(1, 1.0) - 0.56515910399248503) <= 1e-15
    assert abs(oracles.bessel_k_integral(0, 1.0) - 0.42102443824070834) <= 1e-13
    with pytest.raises(ValueError):
        oracles.bessel_k_integral(0, 0.0)


def test_bessel_hard_edge_diagonal_and_limit():
    y = 1.7
    off = oracles.bessel_hard_edge_closed_form(y, y + 1e-6)
    assert abs(off - oracles.bessel_hard_edge_closed_form(y, y)) <= 1e-5
    # y -> 0: the kernel tends to int_0^1 dt = 1
    assert abs(oracles.bessel_hard_edge_closed_form(1e-10, 1e-10) - 1) <= 1e-9


def test_laguerre_cd_reproducing_property():
    # int K(l, m) K(m, l') dm = K(l, l') for a projection kernel
    from scipy.integrate import quad
    n = 4
    lhs = quad(lambda m: oracles.laguerre_cd_kernel(n, 0.7, m) * oracles.laguerre_cd_kernel(n, m, 1.9), 0, 80,
               limit=200)[0]
    assert abs(lhs - oracles.laguerre_cd_kernel(n, 0.7, 1.9)) <= 1e-9
    trace = quad(lambda m: oracles.laguerre_cd_kernel(n, m, m), 0, 80, limit=200)[0]
    assert abs(trace - n) <= 1e-8


def test_hermite_cd_trace():
    from scipy.integrate import quad
    n = 6
    trace = quad(lambda u: oracles.hermite_cd_kernel(n, u, u), -60, 60, limit=200)[0]
    assert abs(trace - n) <= 1e-8


def test_sine_and_semicircle():
    assert oracles.sine_kernel(0.0) == 1 / math.pi
    assert abs(oracles.sine_kernel(math.pi)) <= 1e-16
    assert oracles.semicircle(3.0) == 0.0
    xs = np.linspace(-2, 2, 20001)
    assert abs(np.trapezoid([oracles.semicircle(x) for x in xs], xs) - 1) <= 1e-5
