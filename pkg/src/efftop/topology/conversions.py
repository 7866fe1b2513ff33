"""Conversions between Lacombe, Spreen and metric presentations of opens."""

from __future__ import annotations

from ..kernel import Call, Done, Func, Script, curry, intern, pair, search, tup, unpair, untup
from ..metric import MetricSpace
from ..reals import const_real, cq_decode, left_sup, sub, cauchy_to_left
from .bases import LacombeBasisData, SpreenBasis, equality_inclusion
from .opens import MetricOpen, SpreenOpen, _EnumMember


class _LacombeF(Script):
    # <n, p>: b = l(p); if n in beta(b) emit b
    def __init__(self, member: int, l: int):
        self.member, self.l = member, l

    def begin(self, n):
        return Call(self.l, unpair(n)[1], "b")

    def after(self, n, local, value):
        if local == "b":
            return Call(self.member, pair(value, unpair(n)[0]), ("m", value))
        return Done(local[1])


def lacombe_to_spreen(lb: LacombeBasisData, l: int) -> SpreenOpen:
    """A = union of the enumerated basics; F(n) = enumerated basics containing n."""
    probe = intern(("lacombe-probe", lb.member, l), lambda: _EnumMember(lb.member, l))
    f = intern(("lacombe-F", lb.member, l), lambda: _LacombeF(lb.member, l))
    return SpreenOpen(search(probe), f)


class _FilteredEnum(Script):
    # <n, p>: b = phi_e(p) (or phi_e applied to <b1,b2> first); emit b if n in beta(b)
    def __init__(self, member: int, e: int, inter: bool):
        self.member, self.e, self.inter = member, e, inter

    def begin(self, n):
        x, p = unpair(n)
        if not self.inter:
            return Call(self.e, p, "b")
        b1, b2, q = untup(p, 3)
        return Call(self.e, pair(b1, b2), ("c", q))

    def after(self, n, local, value):
        x = unpair(n)[0]
        if local == "b":
            return Call(self.member, pair(value, x), ("m", value))
        if local[0] == "c":
            return Call(value, local[1], "b")
        return Done(local[1])


def lacombe_as_spreen_basis(lb: LacombeBasisData) -> SpreenBasis:
    """A Lacombe basis read as a Spreen basis whose formal inclusion is equality."""
    g1 = intern(("lacombe-G1", lb.member, lb.cover), lambda: _FilteredEnum(lb.member, lb.cover, False))
    g2 = intern(("lacombe-G2", lb.member, lb.intersector),
                lambda: _G2FromIntersector(lb.member, lb.intersector))
    return SpreenBasis(lb.member, equality_inclusion(), g1, g2, f"{lb.label} (equality)", lb.space)


class _G2FromIntersector(Script):
    # <n, b1, b2, q>: c = I(<b1, b2>); b = c(q); emit b if n in beta(b)
    def __init__(self, member: int, inter: int):
        self.member, self.inter = member, inter

    def begin(self, n):
        x, b1, b2, q = untup(n, 4)
        return Call(self.inter, pair(b1, b2), "c")

    def after(self, n, local, value):
        x, b1, b2, q = untup(n, 4)
        if local == "c":
            return Call(value, q, "b")
        if local == "b":
            return Call(self.member, pair(value, x), ("m", value))
        return Done(local[1])


class _DenseEnum(Script):
    # k = <j, p>: x = u(j); [gate x in A]; emit the p-th element of F(x)
    def __init__(self, dense: int, gate: int | None, f: int):
        self.dense, self.gate, self.f = dense, gate, f

    def begin(self, k):
        j, _ = unpair(k)
        return Call(self.dense, j, "x")

    def after(self, k, local, value):
        p = unpair(k)[1]
        if local == "x":
            if self.gate is None:
                return Call(self.f, pair(value, p), "out")
            return Call(self.gate, value, ("gate", value))
        if local[0] == "gate":
            return Call(self.f, pair(local[1], p), "out")
        return Done(value)


def spreen_to_lacombe(basis: SpreenBasis, dense: int, o: SpreenOpen) -> int:
    """Range program enumerating F(u_j)(p) over dense names u_j confirmed in A."""
    return intern(("spreen-to-lacombe", dense, o.A, o.F), lambda: _DenseEnum(dense, o.A, o.F))


class _DenseInter(Script):
    # k = <j, p>: x = u(j); x in b1; x in b2; emit p-th element of G2(x, b1, b2)
    def __init__(self, dense: int, member: int, g2: int, b1: int, b2: int):
        self.dense, self.member, self.g2, self.b1, self.b2 = dense, member, g2, b1, b2

    def begin(self, k):
        return Call(self.dense, unpair(k)[0], "x")

    def after(self, k, local, value):
        p = unpair(k)[1]
        if local == "x":
            return Call(self.member, pair(self.b1, value), ("m1", value))
        if local[0] == "m1":
            return Call(self.member, pair(self.b2, local[1]), ("m2", local[1]))
        if local[0] == "m2":
            return Call(self.g2, tup(local[1], self.b1, self.b2, p), "out")
        return Done(value)


def spreen_basis_to_lacombe_basis(basis: SpreenBasis, dense: int) -> LacombeBasisData:
    """Cover: G1 at every dense name.  Intersector: G2 at dense names in both balls."""
    cover = intern(("dense-cover", dense, basis.g1), lambda: _DenseEnum(dense, None, basis.g1))

    def inter(n):
        b1, b2 = unpair(n)
        return intern(("dense-inter", dense, basis.member, basis.g2, b1, b2),
                      lambda: _DenseInter(dense, basis.member, basis.g2, b1, b2))

    intersector = intern(("dense-intersector", dense, basis.member, basis.g2),
                         lambda: Func(inter, label="intersector"))
    return LacombeBasisData(basis.member, cover, intersector, f"{basis.label} via dense sequence", basis.space)


# --------------------------------------------------------------------------
# metric <-> Spreen


class _MetricToSpreenF(Script):
    # <n, p>: l = F(n); first positive emission q of l at index >= p; emit <n, q>
    def __init__(self, f: int):
        self.f = f

    def begin(self, n):
        return Call(self.f, unpair(n)[0], "l")

    def after(self, n, local, value):
        x, p = unpair(n)
        if local == "l":
            return Call(value, p, (value, p))
        l, i = local
        q = cq_decode(value)
        if q > 0:
            return Done(pair(x, const_real(q)))
        return Call(l, i + 1, (l, i + 1))


def metric_to_spreen(space: MetricSpace, mo: MetricOpen) -> SpreenOpen:
    """Each positive left-rational q of F(n) becomes the ball <n, q>."""
    f = intern(("metric-to-spreen", mo.F), lambda: _MetricToSpreenF(mo.F))
    return SpreenOpen(mo.A, f)


class _RadiusFamily(Script):
    # k: ball <m, r> = F(<n, k>); left real r - d(n, m)
    def __init__(self, dist: int, f: int, n: int):
        self.dist, self.f, self.n = dist, f, n

    def begin(self, k):
        return Call(self.f, pair(self.n, k), "b")

    def after(self, k, local, value):
        if local == "b":
            m, r = unpair(value)
            return Call(self.dist, pair(self.n, m), ("d", r))
        return Done(cauchy_to_left(sub(local[1], value)))


def spreen_to_metric(space: MetricSpace, so: SpreenOpen) -> MetricOpen:
    """F(n) = sup over the stream's balls <m, r> of r - d(n, m)."""

    def radius(n):
        fam = intern(("radius-family", space.key, so.F, n), lambda: _RadiusFamily(space.dist, so.F, n))
        return left_sup(fam)

    f = intern(("spreen-to-metric", space.key, so.F), lambda: Func(radius, label="sup radius"))
    return MetricOpen(so.A, f)
