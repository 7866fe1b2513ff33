"""Semi-decidable, c.e. and decidable sets of names, realizers and products.

Everything here acts on program indices.  A c.e. set is presented as the
*range* of a partial program: ``{phi_c(k) : k in N, phi_c(k) halts}``.  Range
and domain presentations are uniformly interchangeable, and ranges are what
the conversion theorems produce naturally.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .kernel import (
    DIVERGE,
    IDENTITY,
    LOOP,
    ZERO,
    Call,
    Done,
    Func,
    Halted,
    Script,
    StepResult,
    dovetail,
    intern,
    pair,
    run,
    run_counted,
    search,
    unpair,
)


class Verdict(Enum):
    YES = "YES"
    NO = "NO"
    NOT_YET = "NOT_YET"

    def __str__(self) -> str:
        return self.value


YES, NO, NOT_YET = Verdict.YES, Verdict.NO, Verdict.NOT_YET


@dataclass(frozen=True)
class SpaceHandle:
    """Identifier of a numbered space; ``reading`` documents what a name denotes."""

    key: str
    reading: str = ""


ALWAYS = ZERO  # halts everywhere: the whole space
NOWHERE = LOOP  # halts nowhere: the empty set


def sd_member_counted(a: int, n: int, fuel: int) -> tuple[Verdict, int]:
    res, used = run_counted(a, n, fuel)
    return (YES if isinstance(res, Halted) else NOT_YET), used


def sd_member(a: int, n: int, fuel: int) -> Verdict:
    """YES iff the SD program ``a`` halts on name ``n`` within ``fuel`` steps."""
    return sd_member_counted(a, n, fuel)[0]


class _Both(Script):
    def __init__(self, a: int, b: int):
        self.a, self.b = a, b
        self.label = f"intersect {a} {b}"

    def begin(self, n):
        return Call(self.a, n, 0)

    def after(self, n, local, value):
        if local == 0:
            return Call(self.b, n, 1)
        return Done(0)


def sd_intersect(a: int, b: int) -> int:
    return intern(("sd-and", a, b), lambda: _Both(a, b))


class _UnionProbe(Script):
    # <x, k>: fetch the k-th enumerated SD code and run it on x
    def __init__(self, f: int):
        self.f = f
        self.label = f"union-probe {f}"

    def begin(self, n):
        x, k = unpair(n)
        return Call(self.f, k, x)

    def after(self, n, local, value):
        if isinstance(local, int):
            return Call(value, local, "member")
        return Done(0)


def sd_union_ce(f: int) -> int:
    """SD program for the union of the sets whose codes ``f`` enumerates."""
    probe = intern(("union-probe", f), lambda: _UnionProbe(f))
    return search(probe)


def ce_enumerate(c: int, fuel: int) -> list[int]:
    """Values of the range program ``c`` that appear within ``fuel`` dovetail steps."""
    return [e.value for e in dovetail([c], fuel=fuel)]


def finite_ce(values: Sequence[int]) -> int:
    """Range program enumerating ``values`` (position k -> values[k])."""
    vals = tuple(values)

    def body(k):
        return vals[k] if k < len(vals) else DIVERGE

    return intern(("finite", vals), lambda: Func(body, label=f"finite {list(vals)}"))


def decidable_to_sd(d: int) -> int:
    """SD program that halts where the decision program ``d`` answers 1."""
    return intern(("dec-sd", d), lambda: _DecToSD(d))


class _DecToSD(Script):
    def __init__(self, d: int):
        self.d = d

    def begin(self, n):
        return Call(self.d, n)

    def after(self, n, local, value):
        return Done(0) if value == 1 else DIVERGE


def decide(d: int, n: int, fuel: int) -> Verdict:
    res = run(d, n, fuel)
    if not isinstance(res, Halted):
        return NOT_YET
    return YES if res.value == 1 else NO


def apply_realizer(r: int, n: int, fuel: int) -> StepResult:
    return run(r, n, fuel)


def product_name(n: int, m: int) -> int:
    return pair(n, m)


def product_split(n: int) -> tuple[int, int]:
    return unpair(n)


IDENTITY_REALIZER = IDENTITY
