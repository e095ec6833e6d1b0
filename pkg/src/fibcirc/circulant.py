"""Right circulant and g-circulant matrices built from recurrence sequences.

Closed forms for the spectrum and determinant of the ratio circulant
``RCirc(F_0/a, F_1/(a r), ..., F_{n-1}/(a r^{n-1}))`` and for the
determinants of ``G_n = RCirc(F_1..F_n)`` and ``H_n = RCirc(L_1..L_n)`` live
next to the oracles they are checked against: the DFT eigenvalue sum and
elimination determinants (Bareiss for exact entries, pivoted LU for floats).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral

import numpy as np

from . import _kernels
from .errors import FallbackUsed, InvalidParameters, SingularDenominator
from .polyseq import (
    IntRecurrenceParams,
    Params,
    RecurrenceParams,
    char_roots,
    fibonacci_seq,
    lucas_seq,
)

__all__ = [
    "MAX_DENSE_N",
    "SINGULAR_TOL",
    "RightCirculant",
    "GCirculant",
    "RatioCirculantParams",
    "Spectrum",
    "rcirc_from_row",
    "gcirc_from_row",
    "build_F_matrix",
    "build_G_matrix",
    "build_H_matrix",
    "eigenvalues_dft",
    "eigenvalues_closed_F",
    "det_closed_F",
    "det_closed_G",
    "det_closed_H",
    "h_ratio_degenerate",
    "det_bruteforce",
    "det_bareiss",
]

MAX_DENSE_N = 4096
SINGULAR_TOL = 1e-9


def _check_dense(n):
    if n > MAX_DENSE_N:
        raise ValueError(f"dense materialization is capped at n={MAX_DENSE_N}, got {n}")


@dataclass(frozen=True)
class RightCirculant:
    """Square matrix whose (i, j) entry is ``first_row[(j - i) % n]``."""

    first_row: tuple

    @property
    def n(self) -> int:
        return len(self.first_row)

    def entry(self, i: int, j: int):
        return self.first_row[(j - i) % self.n]

    def to_rows(self) -> list:
        _check_dense(self.n)
        n, row = self.n, self.first_row
        return [[row[(j - i) % n] for j in range(n)] for i in range(n)]

    def to_array(self, dtype=float) -> np.ndarray:
        return np.array(self.to_rows(), dtype=dtype)

    @property
    def is_exact(self) -> bool:
        return all(_is_exact_scalar(v) for v in self.first_row)


@dataclass(frozen=True)
class GCirculant:
    """Row j+1 is row j shifted right by ``g`` positions (indices mod n)."""

    first_row: tuple
    g: int

    @property
    def n(self) -> int:
        return len(self.first_row)

    def entry(self, i: int, j: int):
        return self.first_row[(j - i * self.g) % self.n]

    def to_rows(self) -> list:
        _check_dense(self.n)
        n = self.n
        return [[self.entry(i, j) for j in range(n)] for i in range(n)]

    def to_array(self, dtype=float) -> np.ndarray:
        return np.array(self.to_rows(), dtype=dtype)


@dataclass(frozen=True)
class RatioCirculantParams:
    """Parameters of the circulant with first row F_k / (a r^k)."""

    params: RecurrenceParams
    a: float
    r: float
    n: int

    def __post_init__(self):
        if isinstance(self.params, IntRecurrenceParams):
            object.__setattr__(self, "params", self.params.to_float())
        if not isinstance(self.n, Integral) or self.n < 1:
            raise InvalidParameters(f"n must be a positive integer, got {self.n!r}")
        if self.a == 0 or self.r == 0:
            raise InvalidParameters("a and r must be nonzero")
        roots = char_roots(self.params)
        for name, root in (("alpha", roots.alpha), ("beta", roots.beta)):
            if abs(self.r - root) <= SINGULAR_TOL:
                raise InvalidParameters(f"r={self.r} is within {SINGULAR_TOL} of {name}={root}")


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues indexed by m, where lambda_m pairs with w^(-m)."""

    eigenvalues: tuple

    def __len__(self):
        return len(self.eigenvalues)

    def __getitem__(self, m):
        return self.eigenvalues[m]

    def __iter__(self):
        return iter(self.eigenvalues)

    def product(self) -> complex:
        out = 1 + 0j
        for v in self.eigenvalues:
            out *= v
        return out

    def to_array(self) -> np.ndarray:
        return np.array(self.eigenvalues, dtype=np.complex128)


def rcirc_from_row(row) -> RightCirculant:
    row = tuple(row)
    if not row:
        raise ValueError("circulant first row must be non-empty")
    return RightCirculant(row)


def gcirc_from_row(row, g: int) -> GCirculant:
    row = tuple(row)
    if not row:
        raise ValueError("circulant first row must be non-empty")
    if g < 0:
        raise ValueError("g must be nonnegative")
    return GCirculant(row, g % len(row))


def build_F_matrix(rp: RatioCirculantParams) -> RightCirculant:
    fib = fibonacci_seq(rp.params, rp.n)
    return RightCirculant(tuple(f / (rp.a * rp.r**k) for k, f in enumerate(fib)))


def build_G_matrix(params: Params, n: int) -> RightCirculant:
    if n < 1:
        raise ValueError("n must be at least 1")
    return RightCirculant(tuple(fibonacci_seq(params, n + 1)[1:]))


def build_H_matrix(params: Params, n: int) -> RightCirculant:
    if n < 1:
        raise ValueError("n must be at least 1")
    return RightCirculant(tuple(lucas_seq(params, n + 1)[1:]))


def _unit_root_powers(n):
    """w^(-m) for m = 0..n-1, with the angle reduced exactly."""
    return [cmath.exp(-2j * math.pi * m / n) for m in range(n)]


def eigenvalues_dft(matrix: RightCirculant) -> Spectrum:
    row = np.array([complex(v) for v in matrix.first_row], dtype=np.complex128)
    return Spectrum(tuple(complex(v) for v in _kernels.dft_eigenvalues(row)))


def eigenvalues_closed_F(rp: RatioCirculantParams) -> Spectrum:
    p, q = rp.params.p, rp.params.q
    a, r, n = rp.a, rp.r, rp.n
    fib = fibonacci_seq(rp.params, n + 1)
    f_n, f_prev = fib[n], fib[n - 1]
    roots = char_roots(rp.params)
    rn = r**n
    out = []
    for m, z in enumerate(_unit_root_powers(n)):
        da = r - roots.alpha * z
        db = r - roots.beta * z
        if abs(da) <= SINGULAR_TOL or abs(db) <= SINGULAR_TOL:
            which = "r - alpha*w^-m" if abs(da) <= SINGULAR_TOL else "r - beta*w^-m"
            raise SingularDenominator(f"{which} vanishes at m={m}", factor=which)
        num = -r * f_n - z * (q * f_prev - rn)
        out.append(num / (a * r ** (n - 1) * da * db))
    return Spectrum(tuple(out))


def det_closed_F(rp: RatioCirculantParams) -> float:
    """Determinant of the ratio circulant.

    The denominator is the product a^n r^(n(n-1)) (r^2n - r^n L_n + (-q)^n);
    the variant with a difference in place of that product does not match
    the eigenvalue product and is not used.
    """
    q = rp.params.q
    a, r, n = rp.a, rp.r, rp.n
    fib = fibonacci_seq(rp.params, n + 1)
    luc_n = lucas_seq(rp.params, n + 1)[n]
    rn = r**n
    quad_terms = (rn * rn, rn * luc_n, (-q) ** n)
    quad = quad_terms[0] - quad_terms[1] + quad_terms[2]
    scale = max(abs(t) for t in quad_terms)
    if abs(quad) <= SINGULAR_TOL * scale:
        raise SingularDenominator(
            "r^2n - r^n L_n + (-q)^n vanishes (r^n close to alpha^n or beta^n)",
            factor="r^2n - r^n L_n + (-q)^n",
        )
    num = (-1) ** n * rn * fib[n] ** n - (q * fib[n - 1] - rn) ** n
    return num / (a**n * r ** (n * (n - 1)) * quad)


def _det_F_statement_form(rp: RatioCirculantParams) -> float:
    # denominator printed as a difference; kept only to show it disagrees
    q = rp.params.q
    a, r, n = rp.a, rp.r, rp.n
    fib = fibonacci_seq(rp.params, n + 1)
    luc_n = lucas_seq(rp.params, n + 1)[n]
    rn = r**n
    num = (-1) ** n * rn * fib[n] ** n - (q * fib[n - 1] - rn) ** n
    return num / (a**n * r ** (n * (n - 1)) - (rn * rn - rn * luc_n + (-q) ** n))


def _exact(params):
    return isinstance(params, IntRecurrenceParams)


def _finish(value, exact):
    if exact:
        if value.denominator != 1:
            raise ArithmeticError(f"closed form produced a non-integer {value}")
        return int(value)
    return float(value)


def det_closed_G(params: Params, n: int):
    """det RCirc(F_1, ..., F_n); an exact int for integer parameters."""
    if n < 1:
        raise ValueError("n must be at least 1")
    exact = _exact(params)
    num = Fraction if exact else float
    fib = fibonacci_seq(params, n + 2)
    q = params.q
    base = num(1 - fib[n + 1])
    step = num(q * fib[n])
    if step == 0:
        # impossible for p, q != 0 and p^2 + 4q > 0
        raise SingularDenominator("q*F_n vanishes", factor="q*F_n")
    ratio = base / step
    total = base ** (n - 1)
    if n >= 2:
        acc = sum(ratio ** (k - 1) * q * fib[k] for k in range(1, n))
        total += step ** (n - 2) * acc
    return _finish(total, exact)


def h_ratio_degenerate(params: Params, n: int) -> bool:
    """True when q(L_n - 2) vanishes, so det_closed_H must use the oracle."""
    if n < 2:
        return False
    luc = lucas_seq(params, n + 1)
    step = params.q * (luc[n] - 2)
    if _exact(params):
        return step == 0
    return abs(step) <= SINGULAR_TOL * max(1.0, abs(params.q * luc[n]))


def det_closed_H(params: Params, n: int):
    """det RCirc(L_1, ..., L_n).

    When q(L_n - 2) vanishes the ratio terms are undefined; the value then
    comes from :func:`det_bruteforce` and a :class:`FallbackUsed` warning is
    issued.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if h_ratio_degenerate(params, n):
        warnings.warn(
            f"q(L_n - 2) vanishes for n={n}; using elimination", FallbackUsed, stacklevel=2
        )
        return det_bruteforce(build_H_matrix(params, n).to_rows())
    exact = _exact(params)
    num = Fraction if exact else float
    luc = lucas_seq(params, n + 2)
    q = num(params.q)
    l1 = luc[1]
    base = num(l1 - luc[n + 1])
    total = l1 * base ** (n - 1)
    if n >= 2:
        step = q * luc[n] - 2 * q
        ratio = base / step
        lead = q ** (n - 1) * num(luc[n] - 2) ** (n - 2)
        total += l1 * lead * sum(ratio ** (k - 1) * luc[k] for k in range(1, n))
        total -= 2 * lead * sum(ratio ** (k - 1) * luc[k + 1] for k in range(1, n))
    return _finish(total, exact)


def _is_exact_scalar(v):
    return isinstance(v, (Integral, Fraction)) and not isinstance(v, bool)


def det_bareiss(rows):
    """Fraction-free elimination; exact for integer or Fraction entries."""
    m = [list(r) for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
    integral = all(isinstance(v, Integral) for r in m for v in r)
    if integral:
        m = [[int(v) for v in r] for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                t = m[i][j] * pivot - m[i][k] * m[k][j]
                # division is exact by Sylvester's identity
                m[i][j] = t // prev if integral else t / prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def det_bruteforce(matrix):
    """Oracle determinant for a dense square matrix.

    Exact entries (ints, Fractions) go through Bareiss elimination; anything
    else through partially pivoted elimination in double precision.
    """
    if isinstance(matrix, (RightCirculant, GCirculant)):
        matrix = matrix.to_rows()
    if isinstance(matrix, np.ndarray):
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("matrix must be square")
        if matrix.dtype.kind in "iu":
            return det_bareiss(matrix.tolist())
        if matrix.dtype == object:
            matrix = matrix.tolist()
        else:
            return _kernels.pivoted_det(matrix.astype(np.float64))
    rows = [list(r) for r in matrix]
    if any(len(r) != len(rows) for r in rows):
        raise ValueError("matrix must be square")
    if all(_is_exact_scalar(v) for r in rows for v in r):
        return det_bareiss(rows)
    if not rows:
        return 1.0
    return _kernels.pivoted_det(np.array(rows, dtype=np.float64))
