"""Rationals, Cauchy reals and left-computable reals as programs.

* ``c_Q``: the name <p, q, r> denotes (-1)^p * q / (r + 1).
* Cauchy real: a program n -> c_Q name of q_n with |q_n - x| < 2^-n.
* Left real: a program m -> c_Q name, nondecreasing, every term < x,
  converging to x (unbounded when x = +inf).

Constructors intern their programs, so equal constructions share an index.
Programs built from exactly known inputs carry an ``exact`` value
(``efftop.exact.Alg``); it is used by test oracles and to recognise
comparisons that can never succeed.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable

from .exact import Alg, amax, amin
from .kernel import (
    DIVERGE,
    REGISTRY,
    Call,
    Done,
    Forward,
    Func,
    Garbage,
    Halted,
    Program,
    Running,
    Schedule,
    Script,
    intern,
    pair,
    run,
    run_counted,
    tup,
    unpair,
    untup,
)
from .numberings import NOT_YET, YES, Verdict

# --------------------------------------------------------------------------
# c_Q


def cq_encode(q) -> int:
    q = Fraction(q)
    return tup(1 if q < 0 else 0, abs(q.numerator), q.denominator - 1)


def cq_decode(n: int) -> Fraction:
    p, q, r = untup(n, 3)
    return Fraction(-q if p % 2 else q, r + 1)


_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")


def parse_rational(text: str) -> Fraction:
    """Parse an exact literal such as ``-3/7``; errors report the offending position."""
    m = _RATIONAL.match(text)
    if m is None or m.end() != len(text):
        pos = 0 if m is None else m.end()
        raise ValueError(f"bad rational {text!r} at position {pos}")
    q = Fraction(text)
    return q


def exact_value(x: int) -> Alg | None:
    return REGISTRY[x].exact


def _pow2(n: int) -> Fraction:
    return Fraction(1, 1 << n) if n >= 0 else Fraction(1 << -n)


# --------------------------------------------------------------------------
# Cauchy reals


def const_real(q) -> int:
    q = Fraction(q)
    name = cq_encode(q)
    return intern(("real-const", q), lambda: Func(lambda n: name, label=f"real {q}", exact=Alg.of(q)))


ONE = const_real(1)
ZERO_REAL = const_real(0)


class SqrtReal(Program):
    """sqrt(q) by bisection, one halving per step."""

    def __init__(self, q: Fraction):
        if q < 0:
            raise ValueError("sqrt of a negative rational")
        self.q = q
        self.exact = Alg.sqrt(q)
        self.label = f"sqrt {q}"

    def step(self, reg, n, state):
        if state is None:
            lo, hi = Fraction(0), max(Fraction(1), self.q)
        else:
            lo, hi = state
            mid = (lo + hi) / 2
            if mid * mid <= self.q:
                lo = mid
            else:
                hi = mid
        if hi - lo < _pow2(n - 1):
            return Halted(cq_encode((lo + hi) / 2))
        return Running((lo, hi))


def sqrt_real(q) -> int:
    q = Fraction(q)
    return intern(("real-sqrt", q), lambda: SqrtReal(q))


class _Binary(Script):
    def __init__(self, op: str, a: int, b: int):
        self.op, self.a, self.b = op, a, b
        self.label = f"{op} {a} {b}"
        ea, eb = REGISTRY[a].exact, REGISTRY[b].exact
        if ea is not None and eb is not None:
            self.exact = _EXACT_OPS[op](ea, eb)

    def begin(self, n):
        return Call(self.a, n + 1, None)

    def after(self, n, local, value):
        if local is None:
            return Call(self.b, n + 1, cq_decode(value))
        return Done(cq_encode(_RAT_OPS[self.op](local, cq_decode(value))))


_RAT_OPS = {"add": lambda x, y: x + y, "sub": lambda x, y: x - y, "min": min, "max": max}
_EXACT_OPS = {"add": lambda x, y: x + y, "sub": lambda x, y: x - y, "min": amin, "max": amax}


def add(a: int, b: int) -> int:
    return intern(("real-add", a, b), lambda: _Binary("add", a, b))


def sub(a: int, b: int) -> int:
    return intern(("real-sub", a, b), lambda: _Binary("sub", a, b))


def rmin(a: int, b: int) -> int:
    return intern(("real-min", a, b), lambda: _Binary("min", a, b))


def rmax(a: int, b: int) -> int:
    return intern(("real-max", a, b), lambda: _Binary("max", a, b))


class _Scale(Script):
    def __init__(self, c: Fraction, a: int):
        self.c, self.a = c, a
        self.m = max(0, (abs(c.numerator) // c.denominator).bit_length())  # 2^m > |c|
        self.label = f"scale {c} {a}"
        ea = REGISTRY[a].exact
        if ea is not None:
            self.exact = ea * c

    def begin(self, n):
        return Call(self.a, n + self.m)

    def after(self, n, local, value):
        return Done(cq_encode(self.c * cq_decode(value)))


def scale(c, a: int) -> int:
    c = Fraction(c)
    if c == 0:
        return ZERO_REAL
    return intern(("real-scale", c, a), lambda: _Scale(c, a))


class _Limit(Script):
    # n -> (n+2)-th approximation of the (n+2)-th term
    def __init__(self, s: int, exact=None):
        self.s = s
        self.exact = exact
        self.label = f"limit {s}"

    def begin(self, n):
        return Call(self.s, n + 2, "term")

    def after(self, n, local, value):
        if local == "term":
            return Call(value, n + 2, "approx")
        return Done(value)


def limit(s: int, exact: Alg | None = None) -> int:
    """Cauchy real for the limit of a fast sequence ``s`` of Cauchy reals."""
    return intern(("real-limit", s), lambda: _Limit(s, exact))


def rational_sequence(key: str, fn: Callable[[int], Fraction]) -> int:
    """Program k -> Cauchy name of the rational fn(k)."""
    return intern(("rat-seq", key), lambda: Func(lambda k: const_real(fn(k)), label=f"sequence {key}"))


def opaque(x: int) -> int:
    """A copy of ``x`` without exact metadata, so no fast path applies."""
    return intern(("opaque", x), lambda: Forward(x))


def cauchy_approx(x: int, n: int, fuel: int) -> Fraction | Verdict:
    res = run(x, n, fuel)
    if isinstance(res, Halted):
        return cq_decode(res.value)
    return NOT_YET


class _LessThan(Script):
    """<a, b> -> least n with a(n) + 2^-n < b(n) - 2^-n; diverges when a >= b."""

    label = "less-than"

    def begin(self, n):
        a, b = unpair(n)
        pa, pb = REGISTRY.get(a), REGISTRY.get(b)
        if pa is None or pb is None:
            return DIVERGE
        if pa.exact is not None and pb.exact is not None and pa.exact >= pb.exact:
            return DIVERGE
        return Call(a, 0, (0, None))

    def after(self, n, local, value):
        k, qa = local
        a, b = unpair(n)
        if qa is None:
            return Call(b, k, (k, cq_decode(value)))
        eps = _pow2(k)
        if qa + eps < cq_decode(value) - eps:
            return Done(k)
        return Call(a, k + 1, (k + 1, None))


LESS_THAN = intern(("less-than",), _LessThan)


def less_than(a: int, b: int) -> int:
    """Index of the SD program (on any input) that halts iff a < b."""
    return intern(("lt", a, b), lambda: _Fixed(LESS_THAN, pair(a, b)))


class _Fixed(Script):
    # ignore the input and run phi_i(arg)
    def __init__(self, i: int, arg: int):
        self.i, self.arg = i, arg

    def begin(self, n):
        return Call(self.i, self.arg)

    def after(self, n, local, value):
        return Done(value)


def semidecide_lt_counted(a: int, b: int, fuel: int) -> tuple[Verdict, int]:
    res, used = run_counted(LESS_THAN, pair(a, b), fuel)
    return (YES if isinstance(res, Halted) else NOT_YET), used


def semidecide_lt(a: int, b: int, fuel: int) -> Verdict:
    return semidecide_lt_counted(a, b, fuel)[0]


# --------------------------------------------------------------------------
# left reals


class _RunningMax(Script):
    # m -> max_{k <= m} (f(k) - 2^-k) where f(k) = a(k) (minus c(k) if given)
    def __init__(self, a: int, c: int | None = None, exact=None, label="to-left"):
        self.a, self.c = a, c
        self.exact = exact
        self.label = label

    def begin(self, m):
        return Call(self.a, 0, (0, None, None))

    def after(self, m, local, value):
        k, best, qa = local
        if self.c is not None and qa is None:
            return Call(self.c, k, (k, best, cq_decode(value)))
        q = cq_decode(value)
        if self.c is not None:
            q = qa - q
        q -= _pow2(k)
        best = q if best is None or q > best else best
        if k == m:
            return Done(cq_encode(best))
        return Call(self.a, k + 1, (k + 1, best, None))


def cauchy_to_left(a: int) -> int:
    return intern(("to-left", a), lambda: _RunningMax(a, exact=REGISTRY[a].exact))


def left_const(q) -> int:
    return cauchy_to_left(const_real(q))


def left_minus(l: int, a: int) -> int:
    """Left real l - a for a left real l and a Cauchy real a."""

    def make():
        el, ea = REGISTRY[l].exact, REGISTRY[a].exact
        ex = el - ea if el is not None and ea is not None else None
        return _RunningMax(l, a, exact=ex, label=f"left-minus {l} {a}")

    return intern(("left-minus", l, a), make)


class _LeftMin(Script):
    def __init__(self, a: int, b: int):
        self.a, self.b = a, b
        ea, eb = REGISTRY[a].exact, REGISTRY[b].exact
        if ea is not None and eb is not None:
            self.exact = amin(ea, eb)

    def begin(self, m):
        return Call(self.a, m, None)

    def after(self, m, local, value):
        if local is None:
            return Call(self.b, m, cq_decode(value))
        return Done(cq_encode(min(local, cq_decode(value))))


def left_min(a: int, b: int) -> int:
    return intern(("left-min", a, b), lambda: _LeftMin(a, b))


class _LeftScale(Script):
    def __init__(self, c: Fraction, a: int):
        self.c, self.a = c, a
        ea = REGISTRY[a].exact
        if ea is not None:
            self.exact = ea * c

    def begin(self, m):
        return Call(self.a, m)

    def after(self, m, local, value):
        return Done(cq_encode(self.c * cq_decode(value)))


def left_scale(c, a: int) -> int:
    c = Fraction(c)
    if c <= 0:
        raise ValueError("left reals are only closed under positive scaling")
    if c == 1:
        return a
    return intern(("left-scale", c, a), lambda: _LeftScale(c, a))


class _SupProbe(Script):
    # <k, i> -> i-th emission of the k-th enumerated left real
    def __init__(self, f: int):
        self.f = f

    def begin(self, n):
        k, i = unpair(n)
        return Call(self.f, k, i)

    def after(self, n, local, value):
        if isinstance(local, int):
            return Call(value, local, "emit")
        return Done(value)


class _LeftSup(Program):
    """m -> largest value emitted by the dovetailed family through stage m.

    If nothing has been emitted by then, waits for the first emission.
    """

    def __init__(self, f: int):
        self.f = f
        self.probe = intern(("sup-probe", f), lambda: _SupProbe(f))
        self.label = f"left-sup {f}"

    def advance(self, reg, m, state, budget):
        if budget <= 0:
            return Running(state), 0
        if state is None:
            probe = self.probe
            state = (Schedule(lambda r: (probe, r)), None)
        sched, best = state
        if sched.stage <= m:
            out, used = sched.advance(reg, budget, stop_stage=m + 1)
            for e in out:
                q = cq_decode(e[2])
                best = q if best is None or q > best else best
            if sched.stage <= m or used == budget:
                return Running((sched, best)), used
            if best is not None:
                return Halted(cq_encode(best)), used + 1
            return self.advance_late(reg, sched, budget - used, used)
        if best is not None:
            return Halted(cq_encode(best)), 1
        return self.advance_late(reg, sched, budget, 0)

    def advance_late(self, reg, sched, budget, used):
        out, u = sched.advance(reg, budget, first_only=True)
        if out:
            return Halted(out[0][2]), used + u
        return Running((sched, None)), used + u


def left_sup(f: int) -> int:
    """Left real for the supremum of the left reals enumerated by ``f``."""
    return intern(("left-sup", f), lambda: _LeftSup(f))


def left_emission(l: int, m: int, fuel: int) -> Fraction | Verdict:
    return cauchy_approx(l, m, fuel)


class _LtLeft(Script):
    """<a, l> -> least k with a(k) + 2^-k < l(k): halts iff Cauchy a < left l."""

    label = "lt-left"

    def begin(self, n):
        a, l = unpair(n)
        pa, pl = REGISTRY.get(a), REGISTRY.get(l)
        if pa is None or pl is None:
            return DIVERGE
        if pa.exact is not None and pl.exact is not None and pa.exact >= pl.exact:
            return DIVERGE
        return Call(a, 0, (0, None))

    def after(self, n, local, value):
        k, qa = local
        a, l = unpair(n)
        if qa is None:
            return Call(l, k, (k, cq_decode(value)))
        if qa + _pow2(k) < cq_decode(value):
            return Done(k)
        return Call(a, k + 1, (k + 1, None))


LT_LEFT = intern(("lt-left",), _LtLeft)


def lt_left(a: int, l: int, fuel: int) -> Verdict:
    res = run(LT_LEFT, pair(a, l), fuel)
    return YES if isinstance(res, Halted) else NOT_YET


__all__ = [
    "cq_encode", "cq_decode", "parse_rational", "const_real", "sqrt_real", "add", "sub",
    "rmin", "rmax", "scale", "limit", "opaque", "cauchy_approx", "semidecide_lt",
    "cauchy_to_left", "left_const", "left_min", "left_scale", "left_minus", "left_sup",
    "left_emission", "lt_left", "less_than", "LESS_THAN", "LT_LEFT", "ONE", "ZERO_REAL",
    "exact_value", "rational_sequence", "Garbage",
]
