"""Generalized Fibonacci and Lucas sequences over evaluated p(x), q(x).

Both sequences obey ``v[n+1] = p*v[n] + q*v[n-1]``; Fibonacci starts from
(0, 1), Lucas from (2, p).  Parameters given as :class:`IntRecurrenceParams`
keep every term an exact Python integer, :class:`RecurrenceParams` works in
double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import InvalidParameters

__all__ = [
    "Polynomial",
    "RecurrenceParams",
    "IntRecurrenceParams",
    "CharacteristicRoots",
    "eval_polynomial",
    "char_roots",
    "fibonacci_seq",
    "lucas_seq",
    "fibonacci_binet",
    "lucas_binet",
    "fibonacci_term",
    "lucas_term",
]


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial, constant term first."""

    coefficients: tuple

    def __init__(self, coefficients: Sequence[float]):
        coeffs = tuple(coefficients)
        if not coeffs:
            raise InvalidParameters("polynomial needs at least one coefficient")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def __call__(self, x):
        return eval_polynomial(self, x)


def _check(p, q):
    if p == 0 or q == 0:
        raise InvalidParameters(f"p and q must be nonzero (p={p}, q={q})")
    if not p * p + 4 * q > 0:
        raise InvalidParameters(f"p^2 + 4q must be positive (p={p}, q={q})")


@dataclass(frozen=True)
class RecurrenceParams:
    """Float parameters (p, q) with p, q != 0 and p^2 + 4q > 0."""

    p: float
    q: float

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise InvalidParameters(f"{name} must be a real number, got {v!r}")
            if not math.isfinite(v):
                raise InvalidParameters(f"{name} must be finite, got {v!r}")
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "q", float(self.q))
        _check(self.p, self.q)

    @classmethod
    def from_polynomials(cls, p_poly: Polynomial, q_poly: Polynomial, x: float):
        if p_poly.is_zero() or q_poly.is_zero():
            raise InvalidParameters("p(x) and q(x) must be nonzero polynomials")
        return cls(eval_polynomial(p_poly, x), eval_polynomial(q_poly, x))

    @property
    def discriminant(self) -> float:
        return self.p * self.p + 4 * self.q


@dataclass(frozen=True)
class IntRecurrenceParams:
    """Integer parameters; every derived quantity stays exact."""

    p: int
    q: int

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise InvalidParameters(f"{name} must be an integer, got {v!r}")
        _check(self.p, self.q)

    @property
    def discriminant(self) -> int:
        return self.p * self.p + 4 * self.q

    def to_float(self) -> RecurrenceParams:
        return RecurrenceParams(float(self.p), float(self.q))


Params = Union[RecurrenceParams, IntRecurrenceParams]


@dataclass(frozen=True)
class CharacteristicRoots:
    alpha: float
    beta: float


def eval_polynomial(poly: Polynomial, x: float) -> float:
    """Horner evaluation of ``poly`` at ``x``."""
    acc = 0
    for c in reversed(poly.coefficients):
        acc = acc * x + c
    return acc


def char_roots(params: Params) -> CharacteristicRoots:
    """Roots of v^2 - p v - q = 0, ordered alpha > beta."""
    p, q = float(params.p), float(params.q)
    disc = p * p + 4 * q
    if not disc > 0:
        raise InvalidParameters(f"p^2 + 4q must be positive (got {disc})")
    s = math.sqrt(disc)
    # take the root without cancellation, recover the other from alpha*beta = -q
    if p >= 0:
        alpha = (p + s) / 2
        beta = -q / alpha
    else:
        beta = (p - s) / 2
        alpha = -q / beta
    return CharacteristicRoots(alpha, beta)


def _recurrence(params: Params, first, second, count: int) -> list:
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    p, q = params.p, params.q
    out = [first, second][:count]
    a, b = first, second
    for _ in range(count - 2):
        a, b = b, p * b + q * a
        out.append(b)
    return out


def fibonacci_seq(params: Params, count: int) -> list:
    """F_0 .. F_{count-1}."""
    if isinstance(params, IntRecurrenceParams):
        return _recurrence(params, 0, 1, count)
    return _recurrence(params, 0.0, 1.0, count)


def lucas_seq(params: Params, count: int) -> list:
    """L_0 .. L_{count-1}."""
    if isinstance(params, IntRecurrenceParams):
        return _recurrence(params, 2, params.p, count)
    return _recurrence(params, 2.0, params.p, count)


def fibonacci_term(params: Params, n: int):
    """Single term F_n by recurrence (exact for integer params)."""
    return fibonacci_seq(params, n + 1)[n]


def lucas_term(params: Params, n: int):
    return lucas_seq(params, n + 1)[n]


def fibonacci_binet(params: Params, n: int) -> float:
    if n < 0:
        raise ValueError("n must be nonnegative")
    roots = char_roots(params)
    a, b = roots.alpha, roots.beta
    return (a**n - b**n) / (a - b)


def lucas_binet(params: Params, n: int) -> float:
    if n < 0:
        raise ValueError("n must be nonnegative")
    roots = char_roots(params)
    return roots.alpha**n + roots.beta**n
