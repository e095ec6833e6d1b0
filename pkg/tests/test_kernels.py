import os
import subprocess
import sys

import numpy as np
import pytest

from fibcirc import _kernels

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba disabled or missing")


@pytest.mark.parametrize("n", [1, 2, 3, 7, 12, 64])
def test_numpy_dft_matches_fft(n):
    # numpy.fft uses exp(-2 pi i m k / n), the same orientation as w^(-mk)
    row = np.random.default_rng(n).normal(size=n)
    np.testing.assert_allclose(_kernels.dft_eigenvalues_numpy(row), np.fft.fft(row), atol=1e-10 * n)


@needs_numba
@pytest.mark.parametrize("n", [1, 2, 5, 12, 33])
def test_numba_and_numpy_agree(n):
    rng = np.random.default_rng(100 + n)
    row = rng.normal(size=n)
    np.testing.assert_allclose(
        _kernels.dft_eigenvalues_numba(row), _kernels.dft_eigenvalues_numpy(row), atol=1e-10 * n
    )
    a = rng.normal(size=(n, n))
    assert _kernels.pivoted_det_numba(a) == pytest.approx(_kernels.pivoted_det_numpy(a), rel=1e-10)
    assert _kernels.pivoted_det_numpy(a) == pytest.approx(np.linalg.det(a), rel=1e-9)


def test_pivoted_det_singular():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    assert _kernels.pivoted_det(a) == 0.0
    assert _kernels.pivoted_det_numpy(np.zeros((3, 3))) == 0.0


def test_env_flag_selects_numpy_path():
    code = (
        "from fibcirc import _kernels, encode, det_closed_F, RatioCirculantParams, RecurrenceParams;"
        "from fibcirc.circulant import eigenvalues_dft, build_F_matrix;"
        "rp = RatioCirculantParams(RecurrenceParams(1, 1), 1, 2, 2);"
        "print(_kernels.USE_NUMBA, _kernels.dft_eigenvalues is _kernels.dft_eigenvalues_numpy,"
        " round(eigenvalues_dft(build_F_matrix(rp))[1].real, 12))"
    )
    env = dict(os.environ, FIBCIRC_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "True", "-0.5"]
