"""Formal inclusions, Spreen bases, Lacombe bases and basis transport."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from ..kernel import Call, Done, Func, Script, curry, dovetail, intern, pair, tup, unpair, untup
from ..numberings import NO, NOT_YET, YES, Verdict, sd_member


@dataclass(frozen=True)
class FormalInclusion:
    """A preorder on basic names with an exact tier and a semi-decidable tier.

    ``exact(b1, b2)`` decides the relation on exactly presented names (or
    raises); ``semidecide(b1, b2, fuel)`` returns YES/NO only on strict
    evidence and NOT_YET otherwise.
    """

    exact: Callable[[int, int], bool] | None
    semidecide: Callable[[int, int, int], Verdict]
    name: str = "incl"

    def check(self, b1: int, b2: int, mode: str = "exact", fuel: int = 100_000) -> Verdict:
        if mode == "exact" and self.exact is not None:
            return YES if self.exact(b1, b2) else NO
        return self.semidecide(b1, b2, fuel)

    def below_some(self, b: int, bs: Iterable[int], mode: str = "exact", fuel: int = 100_000) -> bool:
        """b formally below some element of ``bs`` (the name-vs-sequence extension)."""
        return any(self.check(b, c, mode, fuel) is YES for c in bs)

    def dominated(self, us: Sequence[int], ws: Sequence[int], mode: str = "exact",
                  fuel: int = 100_000) -> list[int]:
        """Elements of ``us`` not below any element of ``ws`` (empty list: us formally below ws)."""
        return [u for u in us if not self.below_some(u, ws, mode, fuel)]


def equality_inclusion() -> FormalInclusion:
    return FormalInclusion(lambda a, b: a == b, lambda a, b, fuel: YES if a == b else NO, "equality")


@dataclass(frozen=True)
class SpreenBasis:
    """Basis numbering with formal inclusion and the two basic-set producers.

    ``member``: <b, n> halts iff nu(n) is in beta(b).
    ``g1``: <n, q> -> q-th basic set around n (the whole space is open).
    ``g2``: <n, b1, b2, q> -> q-th basic set around n inside beta(b1) and beta(b2).
    """

    member: int
    incl: FormalInclusion
    g1: int
    g2: int
    label: str = "basis"
    space: object = None


@dataclass(frozen=True)
class LacombeBasisData:
    """``cover`` enumerates basic names covering the space; ``intersector``
    maps <b1, b2> to a range program whose basics union to beta(b1) n beta(b2)."""

    member: int
    cover: int
    intersector: int
    label: str = "lacombe basis"
    space: object = None


def stream(f: int, n: int, fuel: int | None = None, stages: int | None = None) -> list[int]:
    """Values of the basic-name stream p -> phi_f(<n, p>), in emission order."""
    return [e.value for e in dovetail([curry(f, n)], fuel=fuel, stages=stages)]


# --------------------------------------------------------------------------
# transport along formal-inclusion preserving translations


class _Post(Script):
    # apply f12 to the output of phi_g
    def __init__(self, g: int, f12: int, f21: int, arity: int):
        self.g, self.f12, self.f21, self.arity = g, f12, f21, arity

    def begin(self, n):
        if self.arity == 2:
            return Call(self.g, n, "g")
        x, m1, m2, q = untup(n, 4)
        return Call(self.f21, m1, ("m1", x, m2, q))

    def after(self, n, local, value):
        if local == "g":
            return Call(self.f12, value, "out")
        if local == "out":
            return Done(value)
        tag = local[0]
        if tag == "m1":
            _, x, m2, q = local
            return Call(self.f21, m2, ("m2", x, value, q))
        _, x, b1, q = local
        return Call(self.g, tup(x, b1, value, q), "g")


class _PreMember(Script):
    def __init__(self, member: int, f21: int):
        self.member, self.f21 = member, f21

    def begin(self, n):
        m, x = unpair(n)
        return Call(self.f21, m, x)

    def after(self, n, local, value):
        if isinstance(local, int):
            return Call(self.member, pair(value, local), "m")
        return Done(0)


def transport_basis(basis: SpreenBasis, f12: int, f21: int,
                    decode: Callable[[int], int] | None = None) -> SpreenBasis:
    """The same basis renamed by translators f12 (old -> new) and f21 (new -> old).

    ``decode`` evaluates f21 in Python for the inclusion checks; by default it
    runs the program.
    """
    from ..kernel import run

    def back(m: int) -> int:
        if decode is not None:
            return decode(m)
        res = run(f21, m, 10_000)
        if not hasattr(res, "value"):
            raise RuntimeError("translator did not halt")
        return res.value

    incl = FormalInclusion(
        None if basis.incl.exact is None else (lambda a, b: basis.incl.exact(back(a), back(b))),
        lambda a, b, fuel: basis.incl.semidecide(back(a), back(b), fuel),
        f"{basis.incl.name} via translation",
    )
    member = intern(("pre-member", basis.member, f21), lambda: _PreMember(basis.member, f21))
    g1 = intern(("post", basis.g1, f12, 2), lambda: _Post(basis.g1, f12, f21, 2))
    g2 = intern(("post", basis.g2, f12, 4), lambda: _Post(basis.g2, f12, f21, 4))
    return SpreenBasis(member, incl, g1, g2, f"{basis.label} (translated)", basis.space)


def roundtrip_failures(basis: SpreenBasis, f12: Callable[[int], int], f21: Callable[[int], int],
                       names: Iterable[int]) -> list[int]:
    """Names b for which b and f21(f12(b)) are not mutually formally included."""
    bad = []
    for b in names:
        c = f21(f12(b))
        if basis.incl.check(b, c) is not YES or basis.incl.check(c, b) is not YES:
            bad.append(b)
    return bad


def check_finer(translate: Callable[[int], int], member1: Callable[[int, int, int], Verdict],
                member2: Callable[[int, int, int], Verdict], opens: Sequence[int],
                points: Sequence[int], fuel: int, inflation: int = 4,
                incl_pairs: Sequence[tuple[int, int]] = (),
                incl2: Callable[[int, int], bool] | None = None) -> list[tuple]:
    """Harness for a claimed translator from tau1-names to tau2-names.

    Reports (open, point) pairs where tau1 confirms membership within ``fuel``
    but the translated name is not confirmed within ``inflation * fuel``, and
    ("incl", o, o') for given formally included pairs whose translations are
    not formally included according to ``incl2``.
    """
    bad: list[tuple] = []
    for o in opens:
        t = translate(o)
        for n in points:
            if member1(o, n, fuel) is YES and member2(t, n, inflation * fuel) is not YES:
                bad.append((o, n))
    if incl2 is not None:
        for o, o2 in incl_pairs:
            if not incl2(translate(o), translate(o2)):
                bad.append(("incl", o, o2))
    return bad
