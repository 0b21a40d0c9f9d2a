import numpy as np
import pytest

from favprop.channels import ChannelModelSpec
from favprop.montecarlo import (
    EnsembleConfig,
    EnsembleError,
    empirical_cdf,
    run_ensemble,
    variance_study,
)
from favprop.occupancy import beam_grid


def test_empirical_cdf():
    assert empirical_cdf([1, 2, 3], 2) == pytest.approx(2 / 3)
    assert empirical_cdf([1, 2, 3], 0.5) == 0
    assert empirical_cdf([1, 2, 3], 3) == 1
    assert empirical_cdf([1, 2, 3], 10) == 1
    with pytest.raises(ValueError):
        empirical_cdf([], 1.0)


def test_config_validation():
    spec = ChannelModelSpec("rayleigh")
    with pytest.raises(ValueError):
        EnsembleConfig(spec, 10, 2, trials=0)
    with pytest.raises(ValueError):
        EnsembleConfig(spec, 10, 2, collect=set())
    with pytest.raises(ValueError):
        EnsembleConfig(spec, 10, 2, collect={"nonsense"})
    with pytest.raises(ValueError):
        EnsembleConfig(spec, 10, 1, collect={"inner_products"})
    with pytest.raises(ValueError):
        EnsembleConfig(spec, 10, 2, seed=2 ** 64)


def test_pool_lengths_and_cdf_shape():
    cfg = EnsembleConfig(ChannelModelSpec("urlos"), 20, 4, trials=300, seed=3)
    res = run_ensemble(cfg)
    assert res.pool("spectrum").size == 300 * 4
    assert res.pool("inner_products").size == 300 * 6
    for name in ("capacity", "hadamard", "jensen", "delta_c", "condition_number"):
        assert res.pool(name).size == 300
    pool = res.pool("capacity")
    xs = np.linspace(pool[0] - 1, pool[-1] + 1, 50)
    F = [res.cdf("capacity", x) for x in xs]
    assert F[0] == 0 and F[-1] == 1
    assert np.all(np.diff(F) >= 0)
    s = res.summary("capacity")
    assert s["q01"] <= s["q10"] <= s["q50"] <= s["q90"] <= s["q99"]
    assert s["count"] == 300


def test_chain_holds_every_trial():
    res = run_ensemble(EnsembleConfig(ChannelModelSpec("rayleigh"), 30, 6, trials=500, seed=1))
    s = res.samples
    assert np.all(s["capacity"] <= s["hadamard"] + 1e-9)
    assert np.all(s["hadamard"] <= s["jensen"] + 1e-9)


def test_reproducible_and_worker_independent():
    cfg = EnsembleConfig(ChannelModelSpec("rayleigh"), 16, 3, trials=700, seed=42)
    a = run_ensemble(cfg)
    b = run_ensemble(cfg, workers=3)
    for k in a.samples:
        assert a.samples[k].tobytes() == b.samples[k].tobytes()
    c = run_ensemble(EnsembleConfig(ChannelModelSpec("rayleigh"), 16, 3, trials=700, seed=43))
    assert a.samples["capacity"].tobytes() != c.samples["capacity"].tobytes()


def test_trial_prefix_is_stable():
    # trial t sees the same draws whatever the ensemble size
    small = run_ensemble(EnsembleConfig(ChannelModelSpec("urlos"), 16, 3, trials=10, seed=8))
    large = run_ensemble(EnsembleConfig(ChannelModelSpec("urlos"), 16, 3, trials=600, seed=8))
    np.testing.assert_array_equal(small.samples["spectrum"], large.samples["spectrum"][:10])


def test_fixed_beam_grid_ensemble_is_degenerate():
    angles = tuple(beam_grid(16).angles)
    cfg = EnsembleConfig(ChannelModelSpec("fixedlos", angles=angles), 16, 16, trials=20)
    res = run_ensemble(cfg)
    assert np.all(res.samples["spectrum"] == res.samples["spectrum"][0])
    np.testing.assert_allclose(res.samples["condition_number"], 1.0, atol=1e-9)
    assert np.all(res.samples["delta_c"] <= 1e-10)


def test_undefined_delta_c_is_counted_then_fatal():
    cfg = EnsembleConfig(ChannelModelSpec("rayleigh", betas=(0.0, 0.0)), 4, 2, trials=5,
                         collect={"delta_c"})
    with pytest.raises(EnsembleError):
        run_ensemble(cfg)


def test_error_tally_below_limit(monkeypatch):
    import favprop.montecarlo as mc

    monkeypatch.setattr(mc, "MAX_ERROR_FRACTION", 1.0)
    cfg = EnsembleConfig(ChannelModelSpec("rayleigh", betas=(0.0, 0.0)), 4, 2, trials=5,
                         collect={"delta_c", "capacity"})
    res = run_ensemble(cfg)
    assert res.errors == {"delta_c": 5}
    assert res.pool("delta_c").size == 0
    assert res.pool("capacity").size == 5


def test_convergence_direction_both_models():
    for kind in ("rayleigh", "urlos"):
        med = [np.median(run_ensemble(EnsembleConfig(ChannelModelSpec(kind), M, 10, trials=200,
                                                     seed=0, collect={"inner_products"}))
                         .max_inner_product())
               for M in (32, 128, 512)]
        assert med[0] > med[1] > med[2], (kind, med)


def test_spectrum_spread_rayleigh_vs_urlos():
    iqr = {}
    for kind in ("rayleigh", "urlos"):
        res = run_ensemble(EnsembleConfig(ChannelModelSpec(kind), 100, 10, trials=10_000, seed=0,
                                          collect={"spectrum"}))
        fifth_largest = res.samples["spectrum"][:, 10 - 5] / 100
        q75, q25 = np.quantile(fifth_largest, [0.75, 0.25])
        iqr[kind] = q75 - q25
    assert iqr["rayleigh"] >= 3 * iqr["urlos"], iqr


def test_variance_study_single_antenna():
    row, = variance_study("rayleigh", [1], 100_000, seed=0)
    assert row.var_ip_predicted == 1.0
    assert 0.95 <= row.var_ip_sample <= 1.05


def test_variance_study_validation():
    with pytest.raises(ValueError):
        variance_study("rayleigh", [10], 100, seed=0)
    with pytest.raises(ValueError):
        variance_study("fixedlos", [10], 10_000, seed=0)
    with pytest.raises(ValueError):
        variance_study("urlos", [10], 10_000, seed=0, spacing=1.0)


def test_variance_study_deterministic():
    a = variance_study("urlos", [20], 10_000, seed=2)
    b = variance_study("urlos", [20], 10_000, seed=2, workers=4)
    assert a == b


def test_rayleigh_capacity_close_to_bound():
    res = run_ensemble(EnsembleConfig(ChannelModelSpec("rayleigh"), 100, 10, rho=1.0,
                                      trials=10_000, seed=0, collect={"capacity"}))
    med_cap = np.median(res.samples["capacity"] / 10)
    med_bound = np.median(res.samples["hadamard"] / 10)
    assert med_cap == pytest.approx(med_bound, rel=0.03)
