import numpy as np
import pytest

from hardedge import rmt
from hardedge.rmt import RngState


def test_rng_state_validation_and_determinism():
    with pytest.raises(ValueError):
        RngState(-1)
    with pytest.raises(ValueError):
        RngState(0, 2 ** 64)
    a = RngState(7, 3).generator().standard_normal(4)
    b = RngState(7, 3).generator().standard_normal(4)
    c = RngState(7, 4).generator().standard_normal(4)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
    assert RngState(7).child(9) == RngState(7, 9)


def test_gue_hermitian_and_variance():
    n = 40
    h = rmt.sample_gue(n, RngState(1))
    assert np.allclose(h, h.conj().T)
    diag = np.concatenate([np.diag(rmt.sample_gue(n, RngState(2, k))).real for k in range(50)])
    assert np.var(diag) == pytest.approx(n, rel=0.1)
    off = np.concatenate([rmt.sample_gue(n, RngState(3, k))[np.triu_indices(n, 1)] for k in range(20)])
    assert np.var(off.real) == pytest.approx(n / 2, rel=0.05)
    assert np.var(off.imag) == pytest.approx(n / 2, rel=0.05)


def test_ginibre_shape_and_variance():
    g = rmt.sample_ginibre(30, RngState(4), nu=2)
    assert g.shape == (30, 32)
    assert np.mean(np.abs(g) ** 2) == pytest.approx(1.0, rel=0.05)
    with pytest.raises(ValueError):
        rmt.sample_ginibre(0, RngState(4))
    with pytest.raises(ValueError):
        rmt.sample_gue(0, RngState(4))


def test_build_product():
    g = rmt.sample_ginibre(5, RngState(5))
    h = rmt.sample_gue(5, RngState(6))
    w = rmt.build_product(g, h, 1.0)
    expected = g @ (h - 5 * np.eye(5)) @ g.conj().T
    assert np.allclose(w, (expected + expected.conj().T) / 2)
    assert np.allclose(w, w.conj().T)
    with pytest.raises(ValueError):
        rmt.build_product(g[:, :4], h, 0.0)
    with pytest.raises(ValueError):
        rmt.build_product(g, h[:, :4], 0.0)


def test_eigenvalues():
    m = np.diag([3.0, -1.0, 2.0]).astype(complex)
    assert rmt.hermitian_eigenvalues(m).tolist() == [-1.0, 2.0, 3.0]
    with pytest.raises(ValueError):
        rmt.hermitian_eigenvalues(np.zeros((2, 3)))
    bad = np.full((3, 3), np.nan)
    with pytest.raises(rmt.ConvergenceError):
        rmt.hermitian_eigenvalues(bad)


def test_sample_spectrum_kinds():
    rng = RngState(11, 2)
    s = rmt.sample_spectrum("product", 12, rng, x=1.0)
    assert s.eigenvalues.shape == (12,) and s.seed_info == (11, 2)
    again = rmt.sample_spectrum("product", 12, rng, x=1.0)
    assert np.array_equal(s.eigenvalues, again.eigenvalues)
    sq = rmt.sample_spectrum("ginibre-squared", 12, rng)
    assert np.all(sq.eigenvalues > 0)
    with pytest.raises(ValueError):
        rmt.sample_spectrum("product", 12, rng, nu=1)
    with pytest.raises(ValueError):
        rmt.sample_spectrum("wishart", 12, rng)


def test_product_uses_independent_substreams():
    # G of sample k and H of sample k come from streams 2k and 2k+1
    rng = RngState(13, 4)
    g = rmt.sample_ginibre(6, RngState(13, 8))
    h = rmt.sample_gue(6, RngState(13, 9))
    ref = rmt.hermitian_eigenvalues(rmt.build_product(g, h, 0.5))
    assert np.allclose(rmt.sample_spectrum("product", 6, rng, x=0.5).eigenvalues, ref)


def test_spectral_sample_validation():
    with pytest.raises(ValueError):
        rmt.SpectralSample(np.array([2.0, 1.0]), 2, 0.0, "gue", (0, 0))
    with pytest.raises(ValueError):
        rmt.SpectralSample(np.array([1.0]), 2, 0.0, "gue", (0, 0))
    with pytest.raises(ValueError):
        rmt.SpectralSample(np.array([1.0]), 1, 0.0, "lue", (0, 0))


def test_gue_second_moment():
    vals = [np.sum(np.abs(rmt.sample_gue(20, RngState(21, k))) ** 2) / 20 ** 3 for k in range(100)]
    assert np.mean(vals) == pytest.approx(1.0, abs=0.05)
