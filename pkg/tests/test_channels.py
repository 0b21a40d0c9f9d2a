import math

import numpy as np
import pytest

from favprop.channels import (
    ChannelModelSpec,
    critical_pair,
    generate,
    steering_matrix,
    steering_vector,
    substream,
)
from favprop.occupancy import beam_grid


def test_steering_vector_boresight():
    np.testing.assert_allclose(steering_vector(0.0, 4, 0.5), np.ones(4))


def test_steering_vector_endfire():
    np.testing.assert_allclose(steering_vector(math.pi / 2, 2, 0.5), [1, -1], atol=1e-15)


def test_steering_vector_norm_and_phase():
    a = steering_vector(0.7, 64, 0.5)
    assert np.linalg.norm(a) ** 2 == pytest.approx(64, rel=1e-12)
    m = np.arange(64)
    np.testing.assert_allclose(a, np.exp(-1j * 2 * np.pi * m * 0.5 * math.sin(0.7)))


@pytest.mark.parametrize("theta,spacing", [(math.nan, 0.5), (0.1, math.inf), (0.1, 0.0)])
def test_steering_vector_rejects_bad_input(theta, spacing):
    with pytest.raises(ValueError):
        steering_vector(theta, 4, spacing)


def test_spec_validation():
    with pytest.raises(ValueError):
        ChannelModelSpec("rayleigh", betas=[1.0, -1.0])
    with pytest.raises(ValueError):
        ChannelModelSpec("urlos", spacing=0)
    with pytest.raises(ValueError):
        ChannelModelSpec("fixedlos")
    with pytest.raises(ValueError):
        ChannelModelSpec("fixedlos", angles=[2.0])
    with pytest.raises(ValueError):
        ChannelModelSpec("bogus")


def test_generate_dimension_mismatch():
    rng = substream(0, 0)
    with pytest.raises(ValueError):
        generate(ChannelModelSpec("rayleigh", betas=[1, 1]), 4, 3, rng)
    with pytest.raises(ValueError):
        generate(ChannelModelSpec("fixedlos", angles=[0.1]), 4, 2, rng)
    with pytest.raises(ValueError):
        generate(ChannelModelSpec("rayleigh"), 0, 2, rng)


def test_zero_beta_gives_zero_column():
    G, _ = generate(ChannelModelSpec("rayleigh", betas=[1, 0, 2]), 8, 3, substream(1, 2))
    assert np.all(G[:, 1] == 0)
    assert np.all(G[:, 0] != 0)


def test_betas_scale_columns():
    spec = ChannelModelSpec("fixedlos", betas=[4.0, 0.25], angles=[0.1, -0.3])
    G, _ = generate(spec, 16, 2, None)
    np.testing.assert_allclose(np.abs(G[:, 0]), 2.0)
    np.testing.assert_allclose(np.abs(G[:, 1]), 0.5)


@pytest.mark.parametrize("kind", ["rayleigh", "urlos"])
def test_generate_is_deterministic(kind):
    spec = ChannelModelSpec(kind)
    a, _ = generate(spec, 32, 5, substream(123, 7))
    b, _ = generate(spec, 32, 5, substream(123, 7))
    c, _ = generate(spec, 32, 5, substream(123, 8))
    assert a.tobytes() == b.tobytes()
    assert a.tobytes() != c.tobytes()


def test_urlos_angles_metadata_and_unit_modulus():
    G, angles = generate(ChannelModelSpec("urlos"), 50, 6, substream(5, 0))
    assert angles.shape == (6,)
    assert np.all(np.abs(angles) <= math.pi / 2)
    np.testing.assert_allclose(np.abs(G), 1.0, atol=1e-12)
    np.testing.assert_allclose(G[:, 2], steering_vector(angles[2], 50), atol=1e-12)
    np.testing.assert_allclose(np.sum(np.abs(G) ** 2, axis=0), 50, rtol=1e-10)


def test_rayleigh_norm_law_of_large_numbers():
    spec = ChannelModelSpec("rayleigh")
    vals = [np.sum(np.abs(generate(spec, 100, 1, substream(9, t))[0]) ** 2) / 100 for t in range(10_000)]
    assert np.mean(vals) == pytest.approx(1.0, abs=0.01)


def test_rayleigh_entry_moments():
    N = 100_000
    rng = substream(2024, 0)
    G = np.stack([generate(ChannelModelSpec("rayleigh"), 3, 2, rng)[0] for _ in range(N)])
    mean = G.mean(axis=0)
    assert np.all(np.abs(mean) <= 4 / math.sqrt(N))
    var = np.mean(np.abs(G - mean) ** 2, axis=0)
    assert np.all((var >= 0.98) & (var <= 1.02))
    # circular symmetry: real and imaginary parts each carry half the power
    np.testing.assert_allclose(np.var(G.real, axis=0), 0.5, atol=0.01)
    np.testing.assert_allclose(np.var(G.imag, axis=0), 0.5, atol=0.01)


def test_urlos_cross_product_mean_is_one_over_M():
    # the m = 0 antenna contributes 1 to every g_k^H g_j, so the mean is 1/M
    M, N = 100, 10_000
    spec = ChannelModelSpec("urlos")
    ip = np.array([np.vdot(*generate(spec, M, 2, substream(77, t))[0].T) / M for t in range(N)])
    se = math.sqrt((1 / M - 1 / M ** 2) / N)
    assert abs(ip.mean() - 1 / M) <= 3 * se


def test_critical_pair_limit():
    G = critical_pair(1000)
    v = abs(np.vdot(G[:, 0], G[:, 1])) / 1000
    assert v == pytest.approx(2 / math.pi, abs=1e-3)


def test_critical_pair_two_antennas():
    G = critical_pair(2)
    # (1 + exp(-i pi/2)) / 2
    assert abs(np.vdot(G[:, 0], G[:, 1])) / 2 == pytest.approx(math.sqrt(2) / 2, rel=1e-14)


@pytest.mark.parametrize("M", [2, 3, 17, 256])
def test_critical_pair_norms(M):
    np.testing.assert_allclose(np.sum(np.abs(critical_pair(M)) ** 2, axis=0), M, rtol=1e-12)


def test_critical_pair_needs_two_antennas():
    with pytest.raises(ValueError):
        critical_pair(1)


@pytest.mark.parametrize("M", [1, 2, 7, 16, 64])
def test_beam_directions_are_orthogonal(M):
    A = steering_matrix(beam_grid(M).sines, M, 0.5)
    R = A.conj().T @ A
    off = R - np.diag(np.diag(R))
    assert np.max(np.abs(off), initial=0) <= 1e-9 * M
    np.testing.assert_allclose(np.diag(R).real, M, rtol=1e-10)
