import math

import numpy as np
import pytest

from hardedge import experiments as ex


def cfg(**kw):
    base = dict(ensemble="product", n=12, samples=64, x=1.0, window=(-12.0, 12.0), bins=24, seed=3)
    base.update(kw)
    return ex.ExperimentConfig(**base)


def test_config_validation():
    for bad in (dict(ensemble="lue"), dict(n=0), dict(samples=0), dict(window=(1.0, -1.0)), dict(bins=5),
                dict(seed=-1), dict(parallelism=0), dict(reference="exact"), dict(analytic_mode="median")):
        with pytest.raises(ValueError):
            cfg(**bad)
    c = cfg()
    assert c.bins == 24 and len(c.edges) == 25
    assert c.to_dict()["window"] == [-12.0, 12.0]
    assert ex.rebin(c, 48).bins == 48


def test_collect_window_deterministic_across_threads():
    a = ex.collect_window(cfg(parallelism=1), chunk_size=16)
    b = ex.collect_window(cfg(parallelism=3), chunk_size=16)
    c = ex.collect_window(cfg(parallelism=1), chunk_size=64)
    assert np.array_equal(a.values, b.values) and np.array_equal(a.values, c.values)
    d = ex.collect_window(cfg(seed=4))
    assert not np.array_equal(a.values, d.values)


def test_histogram_normalisation():
    c = cfg(window=(-1e6, 1e6), bins=10)
    res = ex.histogram(c, analytic=np.zeros(10))
    # whole spectrum inside the window: n eigenvalues per matrix
    assert res.mass == pytest.approx(12.0)
    assert res.counts.sum() == 12 * 64


def test_empty_window():
    with pytest.raises(ex.EmptyWindowError):
        ex.run_experiment(cfg(ensemble="ginibre-hard-edge", window=(-20.0, -10.0), x=0.0))


def test_histogram_sample_mismatch():
    sample = ex.collect_window(cfg())
    with pytest.raises(ValueError):
        ex.histogram(cfg(samples=65), sample)
    with pytest.raises(ValueError):
        ex.histogram(cfg(window=(-13.0, 12.0)), sample)
    with pytest.raises(ValueError):
        ex.run_gue_bulk(cfg(), sample)


def test_bin_average_log_peak():
    edges = np.linspace(-1.0, 1.0, 5)
    avg = ex._bin_average(lambda a: -math.log(abs(a)) if a else 0.0, edges)
    # mean of -log|a| over (0, 1/2) is 1 + log 2
    assert np.allclose(avg[1:3], 1 + math.log(2), atol=1e-6)


def test_semicircle_curve_mass():
    c = cfg(ensemble="gue-bulk", window=(-2.5, 2.5), bins=50, x=0.0)
    curve = ex.analytic_curve(c)
    assert np.sum(curve) * 0.1 == pytest.approx(1.0, abs=1e-12)
    centre = ex.analytic_curve(ex.ExperimentConfig("gue-bulk", 10, 1, window=(-2.5, 2.5), bins=50,
                                                   analytic_mode="center"))
    assert np.max(np.abs(centre - curve)) <= 0.02


def test_gue_bulk_small_run():
    res = ex.run_gue_bulk(cfg(ensemble="gue-bulk", n=100, samples=40, window=(-2.5, 2.5), bins=25, x=0.0))
    assert res.mass == pytest.approx(1.0, abs=1e-12)
    assert res.l1_distance <= 0.08


def test_ginibre_hard_edge_small_run():
    res = ex.run_ginibre_hard_edge(cfg(ensemble="ginibre-hard-edge", n=50, samples=3000, window=(0.0, 10.0),
                                       bins=20, x=0.0))
    assert res.l1_distance <= 0.15
    assert np.all(res.analytic > 0)


def test_product_finite_reference_small_run():
    c = cfg(n=8, samples=400, reference="finite")
    res = ex.run_hard_edge_experiment(c)
    assert res.analytic.shape == (24,)
    assert res.l1_distance <= 0.3
    with pytest.raises(ValueError):
        ex.analytic_curve(cfg(nu=1))


def test_convergence_sweep_interface():
    cache = {12: ex.collect_window(cfg())}
    trace = ex.convergence_sweep(1.0, [12], 64, seed=3, bins=24, samples_cache=cache)
    assert trace[0][0] == 12 and trace[0][1] > 0
    with pytest.raises(ValueError):
        ex.convergence_sweep(1.0, [20, 10], 10)
