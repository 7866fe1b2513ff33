"""Metric continuity witnessed by a modulus program, checked on samples.

A modulus phi maps <x, e> (point name, left real e) to a left real delta
such that d(x, y) < delta forces d(f(x), f(y)) < e.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..kernel import Call, Done, Func, Halted, Script, intern, pair, run, unpair
from ..metric import MetricSpace, RationalLine
from ..numberings import YES
from ..reals import (
    cq_decode,
    cq_encode,
    const_real,
    left_const,
    left_emission,
    left_min,
    left_scale,
    lt_left,
    semidecide_lt,
)
from .opens import MetricOpen


@dataclass
class ModulusConfig:
    samples: int = 1000
    seed: int = 0
    fuel: int = 100_000
    lo: Fraction = Fraction(-10)
    hi: Fraction = Fraction(10)
    eps_height: int = 10  # eps = 1/k for k <= eps_height, or 2^-j
    emission: int = 24  # index of the delta emission used to place y


@dataclass
class ModulusReport:
    checked: int = 0
    confirmed: int = 0
    inconclusive: int = 0
    violations: list = field(default_factory=list)  # (x, y, eps) triples

    @property
    def ok(self) -> bool:
        return not self.violations


# --------------------------------------------------------------------------
# function realizers on the rational line


def _rational_map(key: str, fn) -> int:
    return intern(("qmap", key), lambda: Func(lambda n: cq_encode(fn(cq_decode(n))), label=key))


FUNCTIONS = {
    "identity": lambda: _rational_map("identity", lambda q: q),
    "double": lambda: _rational_map("double", lambda q: 2 * q),
    "square": lambda: _rational_map("square", lambda q: q * q),
}


def function_realizer(name: str) -> int:
    if name not in FUNCTIONS:
        raise KeyError(f"unknown function {name!r} (known: {', '.join(FUNCTIONS)})")
    return FUNCTIONS[name]()


class _Modulus(Script):
    # <x, e> -> delta built from the left real e and the rational x
    def __init__(self, kind: str):
        self.kind = kind
        self.label = f"modulus {kind}"

    def begin(self, n):
        x, e = unpair(n)
        if self.kind == "eps":
            return Done(e)
        if self.kind == "half-eps":
            return Done(left_scale(Fraction(1, 2), e))
        # min(1, e / (2|x| + 1))
        c = Fraction(1) / (2 * abs(cq_decode(x)) + 1)
        return Done(left_min(left_const(1), left_scale(c, e)))


MODULI = ("eps", "half-eps", "square-local")


def modulus_program(kind: str) -> int:
    if kind not in MODULI:
        raise KeyError(f"unknown modulus {kind!r} (known: {', '.join(MODULI)})")
    return intern(("modulus", kind), lambda: _Modulus(kind))


# --------------------------------------------------------------------------
# the check


def _check_one(s1, s2, fr, phi, x, y, eps, fuel, report):
    report.checked += 1
    nx, ny = s1.encode_point(x), s1.encode_point(y)
    res = run(phi, pair(nx, left_const(eps)), fuel)
    if not isinstance(res, Halted):
        report.inconclusive += 1
        return
    d1 = run(s1.dist, pair(nx, ny), fuel)
    if not isinstance(d1, Halted) or lt_left(d1.value, res.value, fuel) is not YES:
        report.inconclusive += 1
        return
    fx, fy = run(fr, nx, fuel), run(fr, ny, fuel)
    if not (isinstance(fx, Halted) and isinstance(fy, Halted)):
        report.inconclusive += 1
        return
    d2 = run(s2.dist, pair(fx.value, fy.value), fuel)
    if not isinstance(d2, Halted):
        report.inconclusive += 1
        return
    e = const_real(eps)
    if semidecide_lt(d2.value, e, fuel) is YES:
        report.confirmed += 1
    elif semidecide_lt(e, d2.value, fuel) is YES:
        report.violations.append((x, y, eps))
    else:
        report.inconclusive += 1


def _delta_lower(phi, s1, x, eps, cfg) -> Fraction | None:
    res = run(phi, pair(s1.encode_point(x), left_const(eps)), cfg.fuel)
    if not isinstance(res, Halted):
        return None
    q = left_emission(res.value, cfg.emission, cfg.fuel)
    return q if isinstance(q, Fraction) and q > 0 else None


def modulus_check(s1: MetricSpace, s2: MetricSpace, fr: int, phi: int, cfg: ModulusConfig) -> ModulusReport:
    """Sample (x, y, eps) with y inside a confirmed lower bound of phi(x, eps)
    and look for a confirmed d(f(x), f(y)) > eps.  The boundary witness
    x = hi, y = hi - delta/2 is always included."""
    if not isinstance(s1, RationalLine):
        raise ValueError("modulus sampling needs a rational line domain")
    rng = random.Random(cfg.seed)
    report = ModulusReport()
    eps_pool = [Fraction(1, k) for k in range(1, cfg.eps_height + 1)]
    eps_pool += [Fraction(1, 1 << j) for j in range(4, cfg.eps_height + 4)]
    cases = [(cfg.hi, eps, Fraction(-1, 2)) for eps in (Fraction(1), Fraction(1, 2))]
    while len(cases) < cfg.samples:
        x = s1.sample_point(rng, lo=cfg.lo, hi=cfg.hi)
        s = Fraction(rng.randrange(-999, 1000), 1000)
        cases.append((x, rng.choice(eps_pool), s))
    for x, eps, s in cases[: cfg.samples]:
        q = _delta_lower(phi, s1, x, eps, cfg)
        if q is None:
            report.checked += 1
            report.inconclusive += 1
            continue
        _check_one(s1, s2, fr, phi, x, x + s * q, eps, cfg.fuel, report)
    return report


# --------------------------------------------------------------------------
# preimages of metric opens


class _PreRadius(Script):
    # x -> phi(<x, F(f(x))>)
    def __init__(self, fr: int, f: int, phi: int):
        self.fr, self.f, self.phi = fr, f, phi

    def begin(self, x):
        return Call(self.fr, x, "fx")

    def after(self, x, local, value):
        if local == "fx":
            return Call(self.f, value, "r")
        if local == "r":
            return Call(self.phi, pair(x, value), "d")
        return Done(value)


def metric_preimage(fr: int, phi: int, o: MetricOpen) -> MetricOpen:
    """f^-1(O) for a realizer with modulus phi: A = A o f, F(x) = phi(x, F(f(x)))."""
    from ..kernel import compose

    f = intern(("metric-pre", fr, o.F, phi), lambda: _PreRadius(fr, o.F, phi))
    return MetricOpen(compose(o.A, fr), f)
