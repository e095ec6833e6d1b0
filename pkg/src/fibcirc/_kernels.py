"""Float inner loops: DFT eigenvalue sum and pivoted-elimination determinant.

Each kernel exists twice, a numba ``@njit`` version and a pure-numpy one.
The active pair is chosen at import time: numba is used when importable
unless ``FIBCIRC_DISABLE_NUMBA`` is set to a non-empty value other than
``0``.  Both variants stay importable under explicit names so tests and the
benchmark can compare them.
"""

import os

import numpy as np

__all__ = [
    "USE_NUMBA",
    "dft_eigenvalues",
    "pivoted_det",
    "dft_eigenvalues_numpy",
    "pivoted_det_numpy",
]


def _numba_requested():
    flag = os.environ.get("FIBCIRC_DISABLE_NUMBA", "")
    return flag in ("", "0")


try:
    if not _numba_requested():
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def dft_eigenvalues_numpy(row):
    """lambda_m = sum_k row[k] * w^(-m k), w = exp(2 pi i / n)."""
    row = np.asarray(row, dtype=np.complex128)
    n = row.shape[0]
    k = np.arange(n)
    # reduce m*k mod n first so the phase stays small for larger n
    phase = -2.0 * np.pi * (np.outer(k, k) % n) / n
    return np.exp(1j * phase) @ row


def pivoted_det_numpy(a):
    """Determinant by Gaussian elimination with partial pivoting."""
    u = np.array(a, dtype=np.float64, copy=True)
    n = u.shape[0]
    det = 1.0
    for i in range(n):
        piv = i + int(np.argmax(np.abs(u[i:, i])))
        if u[piv, i] == 0.0:
            return 0.0
        if piv != i:
            u[[i, piv]] = u[[piv, i]]
            det = -det
        det *= u[i, i]
        if i + 1 < n:
            factors = u[i + 1 :, i] / u[i, i]
            u[i + 1 :, i:] -= np.outer(factors, u[i, i:])
    return det


def _dft_eigenvalues_loop(row):
    n = row.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    for m in range(n):
        acc = 0.0 + 0.0j
        for k in range(n):
            phase = -2.0 * np.pi * ((m * k) % n) / n
            acc += row[k] * (np.cos(phase) + 1j * np.sin(phase))
        out[m] = acc
    return out


def _pivoted_det_loop(a):
    u = a.copy()
    n = u.shape[0]
    det = 1.0
    for i in range(n):
        piv = i
        best = abs(u[i, i])
        for r in range(i + 1, n):
            if abs(u[r, i]) > best:
                best = abs(u[r, i])
                piv = r
        if best == 0.0:
            return 0.0
        if piv != i:
            for c in range(n):
                tmp = u[i, c]
                u[i, c] = u[piv, c]
                u[piv, c] = tmp
            det = -det
        det *= u[i, i]
        for r in range(i + 1, n):
            f = u[r, i] / u[i, i]
            if f != 0.0:
                for c in range(i, n):
                    u[r, c] -= f * u[i, c]
    return det


if HAVE_NUMBA:
    _dft_jit = njit(cache=True)(_dft_eigenvalues_loop)
    _det_jit = njit(cache=True)(_pivoted_det_loop)

    def dft_eigenvalues_numba(row):
        return _dft_jit(np.ascontiguousarray(row, dtype=np.complex128))

    def pivoted_det_numba(a):
        return float(_det_jit(np.ascontiguousarray(a, dtype=np.float64)))

    dft_eigenvalues = dft_eigenvalues_numba
    pivoted_det = pivoted_det_numba
    USE_NUMBA = True
else:
    dft_eigenvalues_numba = None
    pivoted_det_numba = None
    dft_eigenvalues = dft_eigenvalues_numpy
    pivoted_det = pivoted_det_numpy
    USE_NUMBA = False
