import math
import os

import numpy as np
import pytest

import spcs


def smooth_image(n):
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return 0.5 + 0.3 * np.sin(0.2 * i) * np.cos(0.15 * j) + 0.15 * ((i > n // 2) & (j < n // 3))


def test_crosscorr_taps_for_cubic():
    taps = spcs.crosscorr_taps(3)
    assert np.allclose(np.array(taps) * 384, [1, 76, 230, 76, 1], atol=1e-12)
    assert spcs.bspline(3, 0.0) == pytest.approx(2.0 / 3.0)


def test_wavelet_round_trip():
    img = smooth_image(40)
    for bank in spcs.filter_bank_names():
        x = spcs.dwt2(img, bank, 3)
        assert x.size == 40 * 40
        back = spcs.idwt2(x, 40, 40, bank, 3)
        assert np.max(np.abs(back - img)) < 1e-10


def test_srm_is_orthonormal_at_full_rate():
    cfg = spcs.SrmConfig.make(64, 64, 7)
    v = np.random.default_rng(0).standard_normal(64)
    y = spcs.srm_forward(cfg, v)
    assert np.linalg.norm(y) == pytest.approx(np.linalg.norm(v))
    assert np.allclose(spcs.srm_adjoint(cfg, y), v)


def test_sensing_adjoint_identity():
    op = spcs.SensingOp(spcs.SrmConfig.make(256, 80, 3), 3, "bior2.2", 2, 16, 16)
    rows, cols = op.shape
    rng = np.random.default_rng(1)
    x = rng.standard_normal(cols)
    y = rng.standard_normal(rows)
    assert np.dot(op.apply(x), y) == pytest.approx(np.dot(x, op.adjoint(y)), rel=1e-12)


def test_acquire_reconstruct_and_metrics():
    img = smooth_image(32)
    y, blob = spcs.acquire(img, spcs.SrmConfig.make(1024, 512, 5, keep_dc=True))
    assert y.shape == (512,)
    assert blob.startswith(b"m=512 n=1024 k=32 l=32 seed=5")
    r = spcs.reconstruct(blob, 1, "bior2.2", 3, 1e-3)
    assert r["samples"].shape == (32, 32)
    assert r["a0"].shape == (34, 34)
    assert spcs.psnr(img, r["samples"]) > 25.0
    assert 0.5 < spcs.ssim(img, r["samples"]) <= 1.0
    assert math.isinf(spcs.psnr(img, img))


def test_errors_are_python_exceptions():
    with pytest.raises(spcs.DimensionError):
        spcs.psnr(np.zeros((4, 4)), np.zeros((4, 5)))
    with pytest.raises(spcs.SpcsError):
        spcs.crosscorr_taps(9)
    with pytest.raises(spcs.SpcsError):
        spcs.reconstruct(b"garbage", 0)


@pytest.mark.skipif("SPCS_DATA_DIR" not in os.environ, reason="data directory not provided")
def test_bundled_image_is_readable_size():
    assert os.path.getsize(os.path.join(os.environ["SPCS_DATA_DIR"], "cameraman.pgm")) > 512 * 512
