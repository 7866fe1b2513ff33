"""Effective open sets: Spreen, metric (left radius), Nogina, Lacombe and Ershov names.

A Spreen open is ``<A, F>``: ``A`` semi-decides membership and ``F`` maps
``<n, p>`` to the p-th basic name of the stream at point name n.  Streams
are range programs, so a position may diverge; only the emitted set and
its order of appearance matter.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..kernel import (
    LOOP,
    Call,
    Done,
    Func,
    Script,
    compose,
    const,
    curry,
    dovetail,
    intern,
    pair,
    tup,
    unpair,
    untup,
)
from ..metric import MetricSpace, ball_sd
from ..numberings import ALWAYS, NOWHERE, NOT_YET, YES, Verdict, finite_ce, sd_intersect, sd_member, sd_union_ce
from ..reals import LT_LEFT, cauchy_to_left, const_real, cq_decode, left_minus, left_sup, sub
from .bases import LacombeBasisData, SpreenBasis


@dataclass(frozen=True)
class SpreenOpen:
    A: int
    F: int

    @property
    def code(self) -> int:
        return pair(self.A, self.F)

    @classmethod
    def from_code(cls, code: int) -> "SpreenOpen":
        return cls(*unpair(code))


@dataclass(frozen=True)
class MetricOpen:
    """``F`` maps a point name to a left-real radius with B(x, F(x)) inside the set."""

    A: int
    F: int

    @property
    def code(self) -> int:
        return pair(self.A, self.F)

    @classmethod
    def from_code(cls, code: int) -> "MetricOpen":
        return cls(*unpair(code))


@dataclass(frozen=True)
class NoginaOpen:
    """``C`` maps a point name to one basic name around it inside the set."""

    A: int
    C: int

    @property
    def code(self) -> int:
        return pair(self.A, self.C)


@dataclass(frozen=True)
class ErshovOpen:
    A: int


def open_member(o, n: int, fuel: int) -> Verdict:
    return sd_member(o.A, n, fuel)


def spreen_stream(o: SpreenOpen, n: int, fuel: int | None = None, stages: int | None = None) -> list[int]:
    return [e.value for e in dovetail([curry(o.F, n)], fuel=fuel, stages=stages)]


# --------------------------------------------------------------------------
# constructors


def basic_as_open(basis: SpreenBasis, b: int) -> SpreenOpen:
    return SpreenOpen(curry(basis.member, b), const(b))


def whole_space_open(basis: SpreenBasis) -> SpreenOpen:
    return SpreenOpen(ALWAYS, basis.g1)


EMPTY_OPEN = SpreenOpen(NOWHERE, LOOP)


class _First(Script):
    # k -> first component of phi_o(k)
    def __init__(self, o: int):
        self.o = o

    def begin(self, k):
        return Call(self.o, k)

    def after(self, k, local, value):
        return Done(unpair(value)[0])


class _UnionF(Script):
    # <n, <i, q>>: gate on A_i(n), then the q-th element of F_i(n)
    def __init__(self, o: int):
        self.o = o

    def begin(self, n):
        _, p = unpair(n)
        i, _ = unpair(p)
        return Call(self.o, i, "code")

    def after(self, n, local, value):
        x, p = unpair(n)
        if local == "code":
            a, f = unpair(value)
            return Call(a, x, ("gate", f))
        if local[0] == "gate":
            return Call(local[1], pair(x, unpair(p)[1]), ("out",))
        return Done(value)


def spreen_union(basis: SpreenBasis, opens: int) -> SpreenOpen:
    """Union of the Spreen opens whose codes the range program ``opens`` enumerates."""
    firsts = intern(("first", opens), lambda: _First(opens))
    return SpreenOpen(sd_union_ce(firsts), intern(("union-F", opens), lambda: _UnionF(opens)))


def spreen_union_of(basis: SpreenBasis, parts: list[SpreenOpen]) -> SpreenOpen:
    return spreen_union(basis, finite_ce([o.code for o in parts]))


class _InterF(Script):
    # <n, <i, j, q>> -> q-th element of G2(n, F1(n)_i, F2(n)_j)
    def __init__(self, g2: int, f1: int, f2: int):
        self.g2, self.f1, self.f2 = g2, f1, f2

    def begin(self, n):
        x, p = unpair(n)
        i, _, _ = untup(p, 3)
        return Call(self.f1, pair(x, i), ())

    def after(self, n, local, value):
        x, p = unpair(n)
        _, j, q = untup(p, 3)
        if local == ():
            return Call(self.f2, pair(x, j), (value,))
        if len(local) == 1:
            return Call(self.g2, tup(x, local[0], value, q), (0, 0))
        return Done(value)


def spreen_intersect(basis: SpreenBasis, o1: SpreenOpen, o2: SpreenOpen) -> SpreenOpen:
    f = intern(("inter-F", basis.g2, o1.F, o2.F), lambda: _InterF(basis.g2, o1.F, o2.F))
    return SpreenOpen(sd_intersect(o1.A, o2.A), f)


class _PreF(Script):
    # <n, <k, q>>: m = f(n); b = F_o(<m, k>); <A', F'> = pre(b); q-th of F'(n)
    def __init__(self, fr: int, pre: int, fo: int):
        self.fr, self.pre, self.fo = fr, pre, fo

    def begin(self, n):
        x, _ = unpair(n)
        return Call(self.fr, x, "m")

    def after(self, n, local, value):
        x, p = unpair(n)
        k, q = unpair(p)
        if local == "m":
            return Call(self.fo, pair(value, k), "b")
        if local == "b":
            return Call(self.pre, value, "pre")
        if local == "pre":
            return Call(unpair(value)[1], pair(x, q), "out")
        return Done(value)


def spreen_preimage(fr: int, basic_pre: int, o: SpreenOpen) -> SpreenOpen:
    """Preimage of ``o`` under the map realized by ``fr``.

    ``basic_pre`` maps a codomain basic name to the code of a domain Spreen
    open equal to its preimage, monotonically for formal inclusion.
    """
    f = intern(("pre-F", fr, basic_pre, o.F), lambda: _PreF(fr, basic_pre, o.F))
    return SpreenOpen(compose(o.A, fr), f)


def basic_as_open_program(basis: SpreenBasis) -> int:
    """Program b -> code of basic_as_open(b); a monotone basicPre for identity maps."""
    return intern(("basic-as-open", basis.member), lambda: Func(lambda b: basic_as_open(basis, b).code,
                                                                label="basic-as-open"))


# --------------------------------------------------------------------------
# metric opens


class _BallRadius(Script):
    # p -> left real r - d(c, p)
    def __init__(self, dist: int, c: int, r: int):
        self.dist, self.c, self.r = dist, c, r

    def begin(self, p):
        return Call(self.dist, pair(self.c, p))

    def after(self, p, local, value):
        return Done(cauchy_to_left(sub(self.r, value)))


def metric_open(space: MetricSpace, A: int, F: int) -> MetricOpen:
    """Wrap a membership program and a radius program; the caller vouches for
    B(x, F(x)) inside the set and the non-vanishing condition."""
    return MetricOpen(A, F)


def ball_metric_open(space: MetricSpace, b: int) -> MetricOpen:
    c, r = unpair(b)
    f = intern(("ball-radius", space.key, b), lambda: _BallRadius(space.dist, c, r))
    return MetricOpen(ball_sd(space, b), f)


def interval_open(space: MetricSpace, a, b) -> MetricOpen:
    """(a, b) on a line space: A is the ball around the midpoint, F(x) = min(x - a, b - x)."""
    from fractions import Fraction

    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise ValueError("empty interval")
    ball = pair(space.encode_point((a + b) / 2), const_real((b - a) / 2))
    return ball_metric_open(space, ball)


class _LeftBallA(Script):
    # p -> halts iff d(c, p) < e for a left real e
    def __init__(self, dist: int, c: int, e: int):
        self.dist, self.c, self.e = dist, c, e

    def begin(self, p):
        return Call(self.dist, pair(self.c, p), "d")

    def after(self, p, local, value):
        if local == "d":
            return Call(LT_LEFT, pair(value, self.e), "lt")
        return Done(0)


class _LeftBallF(Script):
    def __init__(self, dist: int, c: int, e: int):
        self.dist, self.c, self.e = dist, c, e

    def begin(self, p):
        return Call(self.dist, pair(self.c, p))

    def after(self, p, local, value):
        return Done(left_minus(self.e, value))


def left_ball_open(space: MetricSpace, c: int, e: int) -> MetricOpen:
    """B(c, e) for a left-real radius e, as a metric open."""
    a = intern(("left-ball-A", space.key, c, e), lambda: _LeftBallA(space.dist, c, e))
    f = intern(("left-ball-F", space.key, c, e), lambda: _LeftBallF(space.dist, c, e))
    return MetricOpen(a, f)


# --------------------------------------------------------------------------
# Nogina and Ershov


class _ThetaCenter(Script):
    # n -> <n, Theta(n, b, b)>
    def __init__(self, theta_prog: int, b: int):
        self.theta_prog, self.b = theta_prog, b

    def begin(self, n):
        return Call(self.theta_prog, tup(n, self.b, self.b))

    def after(self, n, local, value):
        return Done(pair(n, value))


def nogina_basic(space: MetricSpace, b: int) -> NoginaOpen:
    """The ball b as a Nogina open: C(n) = ball at n of radius Theta(n, b, b)."""
    c = intern(("theta-center", space.key, b), lambda: _ThetaCenter(space.theta, b))
    return NoginaOpen(ball_sd(space, b), c)


EMPTY_NOGINA = NoginaOpen(NOWHERE, LOOP)


def ershov_open(A: int) -> ErshovOpen:
    """Every SD set is open in the Ershov topology; the name is A itself."""
    return ErshovOpen(A)


def ershov_preimage(fr: int, o) -> ErshovOpen:
    """Preimage under a computable map of any open with an SD part is Ershov open."""
    return ErshovOpen(compose(o.A, fr))


# --------------------------------------------------------------------------
# Lacombe opens


def lacombe_member(lb: LacombeBasisData, l: int, n: int, fuel: int) -> Verdict:
    """Dovetail the enumerated basics of ``l`` against membership of n."""
    probe = intern(("lacombe-probe", lb.member, l), lambda: _EnumMember(lb.member, l))
    for _ in dovetail([curry(probe, n)], fuel=fuel):
        return YES
    return NOT_YET


class _EnumMember(Script):
    # <x, k>: b = l(k); member(b, x)
    def __init__(self, member: int, l: int):
        self.member, self.l = member, l

    def begin(self, n):
        _, k = unpair(n)
        return Call(self.l, k, "b")

    def after(self, n, local, value):
        if local == "b":
            return Call(self.member, pair(value, unpair(n)[0]), "m")
        return Done(0)
