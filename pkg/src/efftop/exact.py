"""Exact arithmetic over rationals extended by square roots.

An ``Alg`` is a finite sum ``c0 + sum(c_S * sqrt(prod S))`` with rational
coefficients, where each ``S`` is a set of integer radicands > 1.  This is
enough to compare Euclidean distances between rational points of the plane
with rational radii, which is all the exact oracles need.

The sign of a value is found by splitting off the largest radicand ``g``::

    E = P + Q*sqrt(g)

If ``P`` and ``Q`` agree in sign (or one vanishes) the answer is immediate;
otherwise ``sign(E) = sign(P) * sign(P*P - g*Q*Q)`` and the right-hand side
has one radicand fewer.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt, sqrt
from typing import Union

Number = Union[int, Fraction, "Alg"]

_SMALL_PRIMES = [p for p in range(2, 200) if all(p % d for d in range(2, isqrt(p) + 1))]


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Return sqrt(q) when it is rational, else None."""
    q = Fraction(q)
    if q < 0:
        return None
    a, b = q.numerator, q.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def _strip_squares(n: int) -> tuple[int, int]:
    # n = s*s*m with m free of small square factors
    s = 1
    for p in _SMALL_PRIMES:
        pp = p * p
        if pp > n:
            break
        while n % pp == 0:
            n //= pp
            s *= p
    r = isqrt(n)
    if r * r == n:
        return s * r, 1
    return s, n


@lru_cache(maxsize=65536)
def _sqrt_terms(q: Fraction) -> tuple:
    r = rational_sqrt(q)
    if r is not None:
        return ((), r),
    # sqrt(a/b) = sqrt(a*b)/b
    s, m = _strip_squares(q.numerator * q.denominator)
    if m == 1:
        return ((), Fraction(s, q.denominator)),
    return ((m,), Fraction(s, q.denominator)),


def _mul_terms(x: dict, y: dict) -> dict:
    out: dict = {}
    for kx, cx in x.items():
        sx = set(kx)
        for ky, cy in y.items():
            c = cx * cy
            common = sx.intersection(ky)
            for r in common:
                c *= r
            key = tuple(sorted(sx.symmetric_difference(ky)))
            out[key] = out.get(key, 0) + c
    return {k: c for k, c in out.items() if c}


def _add_terms(x: dict, y: dict, sign: int = 1) -> dict:
    out = dict(x)
    for k, c in y.items():
        out[k] = out.get(k, 0) + sign * c
    return {k: c for k, c in out.items() if c}


def _sign(terms: dict) -> int:
    if not terms:
        return 0
    gens = {r for k in terms for r in k}
    if not gens:
        c = terms[()]
        return (c > 0) - (c < 0)
    g = max(gens)
    p = {k: c for k, c in terms.items() if g not in k}
    q = {tuple(r for r in k if r != g): c for k, c in terms.items() if g in k}
    sp, sq = _sign(p), _sign(q)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    qq = _mul_terms(q, q)
    rest = _add_terms(_mul_terms(p, p), {k: c * g for k, c in qq.items()}, -1)
    return sp * _sign(rest)


class Alg:
    """An exact element of Q(sqrt(r1), sqrt(r2), ...)."""

    __slots__ = ("terms",)
    __hash__ = None  # equality is semantic, so no cheap canonical hash

    def __init__(self, terms: dict | None = None):
        self.terms = {k: c if type(c) is Fraction else Fraction(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def of(cls, x: Number) -> "Alg":
        if isinstance(x, Alg):
            return x
        q = Fraction(x)
        return cls({(): q} if q else {})

    @classmethod
    def sqrt(cls, q: Number) -> "Alg":
        """Square root of a non-negative rational (or of a rational Alg)."""
        if isinstance(q, Alg):
            q = q.to_fraction()
        q = Fraction(q)
        if q < 0:
            raise ValueError(f"square root of negative rational {q}")
        return cls(dict(_sqrt_terms(q)))

    # arithmetic -----------------------------------------------------------

    def __add__(self, other: Number) -> "Alg":
        return Alg(_add_terms(self.terms, Alg.of(other).terms))

    __radd__ = __add__

    def __sub__(self, other: Number) -> "Alg":
        return Alg(_add_terms(self.terms, Alg.of(other).terms, -1))

    def __rsub__(self, other: Number) -> "Alg":
        return Alg.of(other) - self

    def __neg__(self) -> "Alg":
        return Alg({k: -c for k, c in self.terms.items()})

    def __mul__(self, other: Number) -> "Alg":
        return Alg(_mul_terms(self.terms, Alg.of(other).terms))

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "Alg":
        if isinstance(other, Alg):
            other = other.to_fraction()
        q = Fraction(other)
        return Alg({k: c / q for k, c in self.terms.items()})

    # order ----------------------------------------------------------------

    def sign(self) -> int:
        # floating-point filter: accept the float sign when it clears the
        # worst-case rounding error, otherwise fall back to exact elimination
        approx = mag = 0.0
        try:
            for key, c in self.terms.items():
                m = 1
                for r in key:
                    m *= r
                v = float(c) * sqrt(m)
                approx += v
                mag += abs(v)
        except OverflowError:
            return _sign(self.terms)
        if mag > 1e-250 and abs(approx) > 1e-12 * mag:
            return 1 if approx > 0 else -1
        return _sign(self.terms)

    def _cmp(self, other: Number) -> int:
        return (self - other).sign()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (Alg, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other: Number) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: Number) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: Number) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: Number) -> bool:
        return self._cmp(other) >= 0

    def __abs__(self) -> "Alg":
        return -self if self.sign() < 0 else self

    # conversions ----------------------------------------------------------

    def is_rational(self) -> bool:
        return all(k == () for k in self.terms)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is irrational")
        return self.terms.get((), Fraction(0))

    def lower(self, bits: int = 64) -> Fraction:
        """A rational q with q <= self < q + 2**-bits."""
        # every radicand product is bracketed by isqrt at 2*bits + slack
        k = bits + 8 + 4 * len(self.terms)
        total = Fraction(0)
        for key, c in self.terms.items():
            if not key:
                total += c
                continue
            m = 1
            for r in key:
                m *= r
            lo = Fraction(isqrt(m << (2 * k)), 1 << k)
            total += c * (lo if c > 0 else lo + Fraction(1, 1 << k))
        step = Fraction(1, 1 << bits)
        # correct the floor exactly using the sign oracle
        q = Fraction((total / step).__floor__()) * step
        while self < q:
            q -= step
        while self >= q + step:
            q += step
        return q

    def __float__(self) -> float:
        return float(self.lower(60))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key, c in sorted(self.terms.items()):
            if not key:
                parts.append(str(c))
            else:
                rad = "*".join(str(r) for r in key)
                parts.append(f"{c}*sqrt({rad})")
        return " + ".join(parts)


def amin(a: Number, b: Number) -> Alg:
    a, b = Alg.of(a), Alg.of(b)
    return a if a <= b else b


def amax(a: Number, b: Number) -> Alg:
    a, b = Alg.of(a), Alg.of(b)
    return a if a >= b else b
