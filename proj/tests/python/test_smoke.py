"""Smoke tests for the python bindings: frozen scalar values, operator
assembly, SVD agreement with numpy, and the simulate/reconstruct loop."""

import math

import numpy as np
import pytest

import mpi1d


def test_frozen_scalar_values():
    assert mpi1d.widom_rate(20.0) == pytest.approx(0.23847518975657075, rel=0, abs=1e-14)
    assert mpi1d.elliptic_k(1.0 / math.sqrt(2.0)) == pytest.approx(
        1.8540746773013719, rel=0, abs=1e-14
    )
    assert mpi1d.langevin_deriv_fourier(0.0) == pytest.approx(
        math.sqrt(2.0 / math.pi), rel=0, abs=1e-15
    )
    assert mpi1d.langevin(0.0) == 0.0
    assert mpi1d.langevin_deriv(0.0) == pytest.approx(1.0 / 3.0, rel=0, abs=1e-16)
    # kernel at the origin: a * beta * G * L'(0)
    p = mpi1d.PhysicalParams(a=3.0, beta=2.0, G=5.0)
    assert mpi1d.kernel_mg_deriv(0.0, p) == pytest.approx(3.0 * 2.0 * 5.0 / 3.0, rel=1e-15)


def test_params_validate_and_repr():
    p = mpi1d.PhysicalParams(A=2.0)
    assert p.fov_half_width() == 2.0
    assert "A=2" in repr(p)
    with pytest.raises(Exception, match="must be > 0"):
        mpi1d.PhysicalParams(G=-1.0)


def test_fov_grid():
    p = mpi1d.PhysicalParams()
    x = mpi1d.fov_points(41, p)
    w = mpi1d.fov_weights(41, p)
    assert x[0] == -20.0 and x[-1] == 20.0
    assert np.all(np.diff(x) > 0)
    assert w[0] == pytest.approx(0.5 * w[1])
    assert np.sum(w) == pytest.approx(40.0, rel=1e-13)


def test_s_conv_symmetric_and_svd_matches_numpy():
    p = mpi1d.PhysicalParams()
    a = mpi1d.s_conv(301, p)
    assert a.shape == (301, 301)
    assert np.max(np.abs(a - a.T)) == 0.0  # symmetrization is exact, not approximate
    ours = mpi1d.singular_values(a)
    ref = np.linalg.svd(a, compute_uv=False)
    assert ours.shape == ref.shape
    assert np.max(np.abs(ours - ref)) <= 1e-10 * ref[0]


def test_fit_decay_rate_synthetic():
    n = np.arange(1, 61, dtype=float)
    slope, intercept, residual = mpi1d.fit_decay_rate(np.exp(1.5 - 0.3 * n), 2, 40)
    assert slope == pytest.approx(-0.3, rel=0, abs=1e-12)
    assert intercept == pytest.approx(1.5, rel=0, abs=1e-11)
    assert residual < 1e-12


def test_forward_tsvd_roundtrip():
    p = mpi1d.PhysicalParams()
    n = 301
    m = mpi1d.s_time(n, p, oversample=2)
    assert m.shape == (602, 301)
    c = mpi1d.phantom("gaussian", [(0.0, 2.0, 1.0)], n, p)
    u = m @ c
    c_hat = mpi1d.reconstruct_tsvd(m, u, 25)
    assert mpi1d.rel_error(c, c_hat, p) < 0.05
    # tikhonov with a tiny penalty should do at least as well qualitatively
    s1 = mpi1d.singular_values(m)[0]
    c_tik = mpi1d.reconstruct_tikhonov(m, u, 1e-8 * s1 * s1)
    assert mpi1d.rel_error(c, c_tik, p) < 0.05


def test_phantom_warns_near_field_of_view_edge():
    p = mpi1d.PhysicalParams()
    with pytest.warns(UserWarning, match="field-of-view boundary"):
        mpi1d.phantom("gaussian", [(0.0, 8.0, 1.0)], 201, p)


def test_add_noise_reproducible():
    u = np.sin(0.37 * np.arange(200, dtype=float))
    a = mpi1d.add_noise(u, 0.05, 1234)
    b = mpi1d.add_noise(u, 0.05, 1234)
    c = mpi1d.add_noise(u, 0.05, 1235)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.array_equal(mpi1d.add_noise(u, 0.0, 7), u)
    with pytest.raises(Exception, match="sigma must be >= 0"):
        mpi1d.add_noise(u, -0.1, 7)


def test_matrix_file_roundtrip(tmp_path):
    rng = np.random.default_rng(99)
    a = rng.standard_normal((7, 5))
    path = str(tmp_path / "m.mat")
    mpi1d.save_matrix(a, path, domain="fov", codomain="time")
    b, dom, cod = mpi1d.load_matrix(path)
    assert (dom, cod) == ("fov", "time")
    assert np.array_equal(a, b)
