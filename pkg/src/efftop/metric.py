"""Computable metric spaces, balls, the ball formal inclusion and Theta.

A space supplies a distance realizer ``<n1, n2> -> Cauchy real index``.  Ball
names are ``<center name, radius name>`` with a Cauchy radius; a radius <= 0
names the empty ball.

Formal inclusion of balls is ``d(c1, c2) + r1 <= r2``.  On exactly presented
data it is decided with ``efftop.exact``; otherwise only the strict forms are
semi-decided, in both directions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable

from .exact import Alg
from .kernel import (
    DIVERGE,
    LOOP,
    REGISTRY,
    Call,
    Done,
    Func,
    Garbage,
    Script,
    dovetail,
    intern,
    pair,
    run,
    tup,
    unpair,
    untup,
)
from .numberings import NO, NOT_YET, YES, SpaceHandle, Verdict, sd_member
from .reals import (
    LESS_THAN,
    ONE,
    ZERO_REAL,
    add,
    const_real,
    cq_decode,
    cq_encode,
    parse_rational,
    rmin,
    sqrt_real,
    sub,
)


class NotExact(ValueError):
    """Raised when an exact check meets data without an exact presentation."""


# --------------------------------------------------------------------------
# dense orderings


def fusc(n: int) -> int:
    a, b = 1, 0
    while n:
        if n & 1:
            b += a
        else:
            a += b
        n >>= 1
    return b


def calkin_wilf(m: int) -> Fraction:
    """m-th positive rational in Calkin-Wilf order, m >= 1 (1, 1/2, 2, 1/3, ...)."""
    return Fraction(fusc(m), fusc(m + 1))


def signed_rational(k: int) -> Fraction:
    """0, 1, -1, 1/2, -1/2, 2, -2, ...: every rational exactly once."""
    if k == 0:
        return Fraction(0)
    q = calkin_wilf((k + 1) // 2)
    return q if k % 2 else -q


def unit_rational(k: int) -> Fraction:
    """0, 1, then every rational in (0, 1) once (the left half of the Calkin-Wilf tree)."""
    if k < 2:
        return Fraction(k)
    return calkin_wilf(2 * (k - 1))


# --------------------------------------------------------------------------
# spaces


class MetricSpace:
    """Base class.  Subclasses define the point codec and the distance."""

    key = "space"
    reading = ""
    exact_tier = True
    has_limit = False

    def __init__(self):
        self.handle = SpaceHandle(self.key, self.reading)
        self.dist = intern(("dist", self.key), self._make_dist)
        self.dense = self._make_dense()
        self.limit = None
        self.ball_sd = intern(("ball-sd", self.key), lambda: _BallMember(self.dist))
        self.theta = intern(("theta", self.key), lambda: _Theta(self.dist))

    # to override -----------------------------------------------------------
    def _make_dist(self):
        raise NotImplementedError

    def _make_dense(self) -> int | None:
        return None

    def exact_point(self, n: int):
        """Point denoted by name ``n``, for oracles; None if unknown."""
        raise NotImplementedError

    def exact_distance(self, p, q) -> Alg:
        raise NotImplementedError

    def encode_point(self, p) -> int:
        raise NotImplementedError

    def co_name(self, p, k: int) -> int:
        """Another name of ``p`` (k selects which)."""
        return self.encode_point(p)

    def sample_point(self, rng: random.Random, height: int = 12):
        raise NotImplementedError

    def parse_point(self, text: str):
        raise NotImplementedError

    def format_point(self, p) -> str:
        return str(p)

    def __repr__(self) -> str:
        return f"<space {self.key}>"


def _random_fraction(rng: random.Random, lo: Fraction, hi: Fraction, height: int) -> Fraction:
    q = rng.randint(1, height)
    a = rng.randint(0, q)
    return lo + (hi - lo) * Fraction(a, q)


class RationalLine(MetricSpace):
    key = "rationals"
    reading = "c_Q names; d(x, y) = |x - y|"

    def _make_dist(self):
        return Func(lambda n: const_real(abs(cq_decode(unpair(n)[0]) - cq_decode(unpair(n)[1]))),
                    label="dist |x-y|")

    def _make_dense(self):
        return intern(("dense", self.key), lambda: Func(lambda k: cq_encode(signed_rational(k)),
                                                        label="dense rationals"))

    def exact_point(self, n):
        return cq_decode(n)

    def exact_distance(self, p, q):
        return Alg.of(abs(Fraction(p) - Fraction(q)))

    def encode_point(self, p):
        return cq_encode(Fraction(p))

    def co_name(self, p, k):
        p = Fraction(p)
        m = k + 1
        return tup(1 if p < 0 else 0, abs(p.numerator) * m, p.denominator * m - 1)

    def sample_point(self, rng, height=12, lo=Fraction(-4), hi=Fraction(4)):
        return _random_fraction(rng, lo, hi, height)

    def parse_point(self, text):
        return parse_rational(text)


class UnitInterval(RationalLine):
    key = "unit-interval"
    reading = "c_Q names of rationals in [0, 1]"

    def _make_dense(self):
        return intern(("dense", self.key), lambda: Func(lambda k: cq_encode(unit_rational(k)),
                                                        label="dense unit interval"))

    def exact_point(self, n):
        q = cq_decode(n)
        return q if 0 <= q <= 1 else None

    def sample_point(self, rng, height=12, lo=Fraction(0), hi=Fraction(1)):
        return _random_fraction(rng, lo, hi, height)

    def parse_point(self, text):
        q = parse_rational(text)
        if not 0 <= q <= 1:
            raise ValueError(f"{text} is outside [0, 1]")
        return q


class UnitSquare(MetricSpace):
    key = "unit-square"
    reading = "<c_Q, c_Q> names of rational points of [0,1]^2; Euclidean distance"

    def _make_dist(self):
        def body(n):
            a, b = unpair(n)
            p, q = self.exact_point(a), self.exact_point(b)
            if p is None or q is None:
                raise Garbage
            return sqrt_real(_sq(p, q))

        return Func(body, label="dist euclid")

    def _make_dense(self):
        def body(k):
            i, j = unpair(k)
            return pair(cq_encode(unit_rational(i)), cq_encode(unit_rational(j)))

        return intern(("dense", self.key), lambda: Func(body, label="dense unit square"))

    def exact_point(self, n):
        a, b = unpair(n)
        x, y = cq_decode(a), cq_decode(b)
        if 0 <= x <= 1 and 0 <= y <= 1:
            return (x, y)
        return None

    def exact_distance(self, p, q):
        return Alg.sqrt(_sq(p, q))

    def encode_point(self, p):
        return pair(cq_encode(p[0]), cq_encode(p[1]))

    def co_name(self, p, k):
        line = RationalLine.co_name
        return pair(line(self, p[0], k), line(self, p[1], k))

    def sample_point(self, rng, height=12):
        return (_random_fraction(rng, Fraction(0), Fraction(1), height),
                _random_fraction(rng, Fraction(0), Fraction(1), height))

    def parse_point(self, text):
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"expected x,y in {text!r}")
        p = (parse_rational(parts[0]), parse_rational(parts[1]))
        if not all(0 <= c <= 1 for c in p):
            raise ValueError(f"{text} is outside the unit square")
        return p

    def format_point(self, p):
        return f"{p[0]},{p[1]}"


def _sq(p, q) -> Fraction:
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


class DiscreteNaturals(MetricSpace):
    key = "discrete"
    reading = "identity numbering of N; d(a, b) = 1 for a != b"

    def _make_dist(self):
        return Func(lambda n: ZERO_REAL if unpair(n)[0] == unpair(n)[1] else ONE, label="dist discrete")

    def _make_dense(self):
        return intern(("dense", self.key), lambda: Func(lambda k: k, label="dense naturals"))

    def exact_point(self, n):
        return n

    def exact_distance(self, p, q):
        return Alg.of(0 if p == q else 1)

    def encode_point(self, p):
        return int(p)

    def sample_point(self, rng, height=12):
        return rng.randint(0, 4 * height)

    def parse_point(self, text):
        if not text.isdigit():
            raise ValueError(f"bad natural {text!r} at position 0")
        return int(text)


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))


# decidable stand-ins for the subset X
PREDICATES: dict[str, Callable[[int], bool]] = {
    "primes": _is_prime,
    "squares": lambda n: int(n ** 0.5 + 0.5) ** 2 == n,
    "evens": lambda n: n % 2 == 0,
    "all": lambda n: True,
}


class ParitySpace(MetricSpace):
    """Y = 2X u (2X+1) (discrete metric) or Y = 2N u (2X+1) (metric |n - m|).

    Names are the points themselves (identity subnumbering on Y); the set X is
    given by a predicate id.  No dense sequence is provided.
    """

    exact_tier = True

    def __init__(self, pred: str, line: bool = False):
        if pred not in PREDICATES:
            raise KeyError(f"unknown predicate {pred!r}")
        self.pred_id = pred
        self.pred = PREDICATES[pred]
        self.line = line
        self.key = f"parity-{'line' if line else 'oracle'}:{pred}"
        self.reading = ("Y = 2N u (2X+1), d = |n - m|" if line else "Y = 2X u (2X+1), discrete") + f", X = {pred}"
        super().__init__()

    def in_space(self, n: int) -> bool:
        if n % 2 == 0 and self.line:
            return True
        return self.pred(n // 2)

    def _make_dist(self):
        if self.line:
            return Func(lambda n: const_real(abs(unpair(n)[0] - unpair(n)[1])), label="dist |n-m|")
        return Func(lambda n: ZERO_REAL if unpair(n)[0] == unpair(n)[1] else ONE, label="dist discrete")

    def exact_point(self, n):
        return n if self.in_space(n) else None

    def exact_distance(self, p, q):
        if self.line:
            return Alg.of(abs(p - q))
        return Alg.of(0 if p == q else 1)

    def encode_point(self, p):
        return int(p)

    def sample_point(self, rng, height=12):
        while True:
            n = rng.randint(0, 8 * height)
            if self.in_space(n):
                return n

    def parse_point(self, text):
        if not text.isdigit():
            raise ValueError(f"bad natural {text!r} at position 0")
        n = int(text)
        if not self.in_space(n):
            raise ValueError(f"{n} is not a point of {self.key}")
        return n


# --------------------------------------------------------------------------
# Cauchy completion


class _ConstSeq(Func):
    def __init__(self, b: int, exact):
        super().__init__(lambda k: b, label=f"const-seq {b}", exact=exact)


class _LiftedDist(Script):
    # n -> base distance of the (n+2)-th terms, approximated at n+1
    def __init__(self, base_dist: int, s: int, t: int, exact):
        self.base_dist, self.s, self.t = base_dist, s, t
        self.exact = exact
        self.label = f"lifted-dist {s} {t}"

    def begin(self, n):
        return Call(self.s, n + 2, ("s",))

    def after(self, n, local, value):
        tag = local[0]
        if tag == "s":
            return Call(self.t, n + 2, ("t", value))
        if tag == "t":
            return Call(self.base_dist, pair(local[1], value), ("d",))
        if tag == "d":
            return Call(value, n + 1, ("q",))
        return Done(value)


class _LimSeq(Script):
    # m -> (m+2)-th term of the (m+2)-th name in the sequence
    def __init__(self, sigma: int, exact):
        self.sigma = sigma
        self.exact = exact
        self.label = f"lim-seq {sigma}"

    def begin(self, m):
        return Call(self.sigma, m + 2, "name")

    def after(self, m, local, value):
        if local == "name":
            return Call(value, m + 2, "term")
        return Done(value)


class CompletedSpace(MetricSpace):
    """Names are programs k -> base name with d(term_k, x) < 2^-k."""

    has_limit = True

    def __init__(self, base: MetricSpace):
        self.base = base
        self.key = f"completed:{base.key}"
        self.reading = f"fast Cauchy sequences of {base.key} names"
        super().__init__()
        self.limit = intern(("limit-realizer", self.key), lambda: Func(self.limit_name, label="limit"))

    def _make_dist(self):
        def body(n):
            s, t = unpair(n)
            return self.lifted(s, t)

        return Func(body, label="dist lifted")

    def lifted(self, s: int, t: int) -> int:
        def make():
            p, q = self.exact_point(s), self.exact_point(t)
            try:
                ex = self.base.exact_distance(p, q) if p is not None and q is not None else None
            except (TypeError, ValueError):
                ex = None  # metadata of something that is not a point
            return _LiftedDist(self.base.dist, s, t, ex)

        if REGISTRY.get(s) is None or REGISTRY.get(t) is None:
            raise Garbage
        return intern(("lifted", self.key, s, t), make)

    def _make_dense(self):
        if self.base.dense is None:
            return None
        base_dense = self.base.dense

        class _Embed(Script):
            def begin(s, k):
                return Call(base_dense, k)

            def after(s, k, local, value):
                return Done(self.embed(value))

        return intern(("dense", self.key), _Embed)

    def embed(self, b: int) -> int:
        """The constant sequence at base name ``b``."""
        return intern(("const-seq", self.key, b), lambda: _ConstSeq(b, self.base.exact_point(b)))

    def limit_name(self, sigma: int, exact=None) -> int:
        if REGISTRY.get(sigma) is None:
            raise Garbage
        return intern(("lim-seq", self.key, sigma), lambda: _LimSeq(sigma, exact))

    def exact_point(self, n):
        prog = REGISTRY.get(n)
        return None if prog is None else prog.exact

    def exact_distance(self, p, q):
        return self.base.exact_distance(p, q)

    def encode_point(self, p):
        return self.embed(self.base.encode_point(p))

    def co_name(self, p, k):
        return self.embed(self.base.co_name(p, k))

    def sample_point(self, rng, height=12, **kw):
        return self.base.sample_point(rng, height, **kw)

    def parse_point(self, text):
        return self.base.parse_point(text)

    def format_point(self, p):
        return self.base.format_point(p)


_SPACES: dict[str, MetricSpace] = {}


def get_space(key: str) -> MetricSpace:
    """Space by CLI key: rationals, unit-interval, unit-square, discrete,
    parity-oracle:<pred>, parity-line:<pred>, completed:<key>."""
    if key in _SPACES:
        return _SPACES[key]
    if key == "rationals":
        space: MetricSpace = RationalLine()
    elif key == "unit-interval":
        space = UnitInterval()
    elif key == "unit-square":
        space = UnitSquare()
    elif key == "discrete":
        space = DiscreteNaturals()
    elif key.startswith("parity-oracle:"):
        space = ParitySpace(key.split(":", 1)[1])
    elif key.startswith("parity-line:"):
        space = ParitySpace(key.split(":", 1)[1], line=True)
    elif key.startswith("completed:"):
        space = CompletedSpace(get_space(key.split(":", 1)[1]))
    else:
        raise KeyError(f"unknown space {key!r}")
    _SPACES[key] = space
    return space


def cauchy_completion(space: MetricSpace) -> CompletedSpace:
    return get_space(f"completed:{space.key}")  # type: ignore[return-value]


# --------------------------------------------------------------------------
# distance, balls, Theta


def distance(space: MetricSpace, n1: int, n2: int, fuel: int = 10_000) -> int:
    """Cauchy real index of d(nu(n1), nu(n2))."""
    res = run(space.dist, pair(n1, n2), fuel)
    if not hasattr(res, "value"):
        raise RuntimeError("distance realizer did not halt")
    return res.value


def ball(center: int, radius: int) -> int:
    return pair(center, radius)


def make_ball(space: MetricSpace, center, radius) -> int:
    """Ball name from an exact point and a rational radius."""
    return pair(space.encode_point(center), const_real(Fraction(radius)))


class _BallMember(Script):
    # <<c, r>, p>: d(c, p) < r
    def __init__(self, dist: int):
        self.dist = dist

    def begin(self, n):
        b, p = unpair(n)
        c, _ = unpair(b)
        return Call(self.dist, pair(c, p), "d")

    def after(self, n, local, value):
        if local == "d":
            r = unpair(unpair(n)[0])[1]
            return Call(LESS_THAN, pair(value, r), "lt")
        return Done(0)


def ball_member(space: MetricSpace, b: int, p: int, fuel: int) -> Verdict:
    return sd_member(space.ball_sd, pair(b, p), fuel)


def ball_sd(space: MetricSpace, b: int) -> int:
    """SD program of the ball b alone (input: point name)."""
    return intern(("ball-of", space.key, b), lambda: _BallOf(space.ball_sd, b))


class _BallOf(Script):
    def __init__(self, sd: int, b: int):
        self.sd, self.b = sd, b

    def begin(self, n):
        return Call(self.sd, pair(self.b, n))

    def after(self, n, local, value):
        return Done(0)


@dataclass(frozen=True)
class ExactBall:
    center: object
    radius: Alg


def exact_ball(space: MetricSpace, b: int) -> ExactBall:
    c, r = unpair(b)
    p = space.exact_point(c)
    prog = REGISTRY.get(r)
    if p is None or prog is None or prog.exact is None:
        raise NotExact(f"ball {b} has no exact presentation")
    return ExactBall(p, prog.exact)


def ball_formal_incl_exact(space: MetricSpace, b1: int, b2: int) -> bool:
    x, y = exact_ball(space, b1), exact_ball(space, b2)
    return space.exact_distance(x.center, y.center) + x.radius <= y.radius


def ball_formal_incl(space: MetricSpace, b1: int, b2: int, mode: str = "exact",
                     fuel: int = 100_000) -> Verdict:
    """(c1, r1) formally inside (c2, r2) iff d(c1, c2) + r1 <= r2."""
    if mode == "exact":
        if not space.exact_tier:
            raise NotExact(f"{space.key} has no exact tier")
        return YES if ball_formal_incl_exact(space, b1, b2) else NO
    if mode != "semidecide":
        raise ValueError(f"unknown mode {mode!r}")
    c1, r1 = unpair(b1)
    c2, r2 = unpair(b2)
    d = distance(space, c1, c2)
    lhs = add(d, r1)
    # task 0 confirms d + r1 < r2, task 1 confirms r2 < d + r1
    for e in dovetail([less_than_prog(lhs, r2), less_than_prog(r2, lhs)], fuel=fuel):
        return YES if e.task == 0 else NO
    return NOT_YET


def less_than_prog(a: int, b: int) -> int:
    from .reals import less_than
    return less_than(a, b)


class _Theta(Script):
    # <x, b1, b2> -> Cauchy index of min(r1 - d(c1, x), r2 - d(c2, x))
    def __init__(self, dist: int):
        self.dist = dist

    def begin(self, n):
        x, b1, _ = untup(n, 3)
        return Call(self.dist, pair(unpair(b1)[0], x), ())

    def after(self, n, local, value):
        x, b1, b2 = untup(n, 3)
        if local == ():
            return Call(self.dist, pair(unpair(b2)[0], x), (value,))
        d1, d2 = local[0], value
        return Done(rmin(sub(unpair(b1)[1], d1), sub(unpair(b2)[1], d2)))


def theta(space: MetricSpace, x: int, b1: int, b2: int, fuel: int = 10_000) -> int:
    """Cauchy index of Theta: a radius r with B(x, r) inside both balls."""
    res = run(space.theta, tup(x, b1, b2), fuel)
    if not hasattr(res, "value"):
        raise RuntimeError("theta did not halt")
    return res.value


def theta_exact(space: MetricSpace, x, b1: int, b2: int) -> Alg:
    """Exact oracle for Theta from points and exact balls (independent of programs)."""
    e1, e2 = exact_ball(space, b1), exact_ball(space, b2)
    t1 = e1.radius - space.exact_distance(e1.center, x)
    t2 = e2.radius - space.exact_distance(e2.center, x)
    return t1 if t1 <= t2 else t2


def check_third_lemma(space: MetricSpace, b: int, x: int, z: int) -> bool:
    """With F(p) = r - d(c, p): d(x,z) <= F(x)/3 implies d(x,z) + F(x)/3 <= F(z)."""
    eb = exact_ball(space, b)
    px, pz = space.exact_point(x), space.exact_point(z)
    if px is None or pz is None:
        raise NotExact("points without exact presentation")
    fx = eb.radius - space.exact_distance(eb.center, px)
    fz = eb.radius - space.exact_distance(eb.center, pz)
    dxz = space.exact_distance(px, pz)
    if not dxz <= fx / 3:
        return True
    return dxz + fx / 3 <= fz


# --------------------------------------------------------------------------
# literals


def parse_ball(space: MetricSpace, text: str) -> int:
    """Ball literal ``center;radius`` (optionally parenthesised)."""
    t = text.strip()
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1]
    if t.count(";") != 1:
        raise ValueError(f"ball literal {text!r} needs exactly one ';' (position {len(text)})")
    c, r = t.split(";")
    return make_ball(space, space.parse_point(c), parse_rational(r))


def format_ball(space: MetricSpace, b: int) -> str:
    try:
        e = exact_ball(space, b)
    except NotExact:
        return f"<{b}>"
    rad = e.radius.to_fraction() if e.radius.is_rational() else e.radius
    return f"{space.format_point(e.center)};{rad}"


# --------------------------------------------------------------------------
# the ball Spreen basis


class _G2(Script):
    # <n, b1, b2, q> -> <n, Theta(n, b1, b2)> (a constant sequence)
    def __init__(self, theta_prog: int):
        self.theta_prog = theta_prog

    def begin(self, n):
        x, b1, b2, _ = untup(n, 4)
        return Call(self.theta_prog, tup(x, b1, b2))

    def after(self, n, local, value):
        return Done(pair(untup(n, 4)[0], value))


def balls_spreen_basis(space: MetricSpace):
    """Balls with the formal inclusion d + r1 <= r2; G1 is the constant
    sequence <n, 1>, G2 the constant sequence <n, Theta>."""
    from .topology.bases import FormalInclusion, SpreenBasis

    g1 = intern(("g1", space.key), lambda: Func(lambda n: pair(unpair(n)[0], ONE), label="G1"))
    g2 = intern(("g2", space.key), lambda: _G2(space.theta))
    incl = FormalInclusion(
        (lambda a, b: ball_formal_incl_exact(space, a, b)) if space.exact_tier else None,
        lambda a, b, fuel: ball_formal_incl(space, a, b, "semidecide", fuel),
        "ball inclusion",
    )
    return SpreenBasis(space.ball_sd, incl, g1, g2, f"balls of {space.key}", space)
