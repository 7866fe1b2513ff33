"""Universal dense names and the passage from Nogina opens to Lacombe opens.

For program indices n, k and a dense sequence u::

    P_{n,k}(t) = u[phi_k(t)]    while phi_n(n) has not halted after t steps
               = u[phi_k(t0)]   afterwards, t0 the 0-based halting step

Surviving P_{n,k} (phi_n(n) halts, phi_k defined up to t0, and the sequence
is fast: d(x_t, x_t0) < 2^-t for t < t0) are passed through the limit
realizer, giving a c.e. family of names dense in the completion.

Programs are drawn from a virtual enumeration of the registry: odd indices
2i+1 are the constant i, even indices 2i are registry entry i below a
horizon fixed when the enumeration is built (and loop beyond it).
"""

from __future__ import annotations

from fractions import Fraction

from ..kernel import (
    BOUNDED,
    LOOP,
    NEVER,
    REGISTRY,
    RUN_NEVER,
    TIMED,
    Call,
    Done,
    Program,
    Script,
    const,
    dovetail,
    intern,
    pair,
    tup,
    unpair,
)
from ..metric import CompletedSpace, MetricSpace
from ..reals import LESS_THAN, const_real
from .opens import NoginaOpen


class PnK(Script):
    def __init__(self, n_index: int, n_input: int, k: int, u: int):
        self.n_index, self.n_input, self.k, self.u = n_index, n_input, k, u
        self.label = f"P[{n_index}({n_input}), {k}]"

    def begin(self, t):
        return Call(BOUNDED, tup(self.n_index, self.n_input, t + 1), "bounded")

    def after(self, t, local, value):
        if local == "bounded":
            tt = t if value == 0 else unpair(value - 1)[0]
            return Call(self.k, tt, "a")
        if local == "a":
            return Call(self.u, value, "x")
        return Done(value)


def pnk(n_index: int, n_input: int, k: int, u: int) -> int:
    return intern(("pnk", n_index, n_input, k, u), lambda: PnK(n_index, n_input, k, u))


def moschovakis_pnk(n: int, k: int, u: int) -> int:
    """Register P_{n,k} over the dense sequence u (phi_n runs on its own index)."""
    return pnk(n, n, k, u)


class Sandboxed(Program):
    """Runs registry entry i; any exception it raises counts as divergence.

    Registered programs are written for well-formed inputs, and the virtual
    enumeration feeds them arbitrary ones."""

    def __init__(self, i: int):
        self.i = i
        self.label = f"sandboxed {i}"

    def advance(self, reg, n, state, budget):
        if state is NEVER:
            return RUN_NEVER, budget
        try:
            return reg[self.i].advance(reg, n, state, budget)
        except Exception:
            return RUN_NEVER, budget


def virtual_phi(m: int, horizon: int) -> int:
    """Registry index standing for phi_m in the virtual enumeration."""
    i, odd = divmod(m, 2)
    if odd:
        return const(i)
    if i >= horizon:
        return LOOP
    return intern(("sandboxed", i), lambda: Sandboxed(i))


class UniversalDense(Script):
    """j = <n, k> -> limit name of P_{n,k} if it survives the filters."""

    def __init__(self, space: MetricSpace, u: int, horizon: int):
        self.space, self.u, self.horizon = space, u, horizon
        self.label = f"universal dense names over {u}"

    def _nk(self, j):
        n, k = unpair(j)
        return n, virtual_phi(n, self.horizon), virtual_phi(k, self.horizon)

    def begin(self, j):
        n, pn, _ = self._nk(j)
        return Call(TIMED, pair(pn, n), ("timed",))

    def after(self, j, local, value):
        tag = local[0]
        _, _, pk = self._nk(j)
        if tag == "timed":
            t0 = unpair(value)[0]
            return Call(pk, 0, ("a", t0, 0, ()))
        if tag == "a":
            _, t0, t, xs = local
            return Call(self.u, value, ("x", t0, t, xs))
        if tag == "x":
            _, t0, t, xs = local
            xs = xs + (value,)
            if t < t0:
                return Call(pk, t + 1, ("a", t0, t + 1, xs))
            return self._check(j, xs, 0)
        if tag == "d":
            _, xs, t = local
            return Call(LESS_THAN, pair(value, const_real(Fraction(1, 1 << t))), ("lt", xs, t))
        _, xs, t = local
        return self._check(j, xs, t + 1)

    def _check(self, j, xs, t):
        # strict fastness filter: d(x_t, x_t0) < 2^-t for every t < t0
        t0 = len(xs) - 1
        if t < t0:
            return Call(self.space.dist, pair(xs[t], xs[t0]), ("d", xs, t))
        n, pn, pk = self._nk(j)
        p = pnk(pn, n, pk, self.u)
        return Done(self.space.limit_name(p, self.space.exact_point(xs[-1])))


def universal_dense_program(space: MetricSpace, u: int, horizon: int | None = None) -> int:
    """Range program j -> universal dense name (diverges when P_{n,k} is filtered out)."""
    if not getattr(space, "has_limit", False):
        raise ValueError("universal dense names need a space with a limit realizer")
    if horizon is None:
        horizon = len(REGISTRY)
    return intern(("universal-dense", space.key, u, horizon), lambda: UniversalDense(space, u, horizon))


def universal_dense_names(space: MetricSpace, u: int, fuel: int, horizon: int | None = None) -> list[int]:
    w = universal_dense_program(space, u, horizon)
    return [e.value for e in dovetail([w], fuel=fuel)]


class _NoginaEnum(Script):
    # j: w = W(j); w in A; emit C(w)
    def __init__(self, w: int, a: int, c: int):
        self.w, self.a, self.c = w, a, c

    def begin(self, j):
        return Call(self.w, j, "w")

    def after(self, j, local, value):
        if local == "w":
            return Call(self.a, value, ("a", value))
        if local[0] == "a":
            return Call(self.c, local[1], "c")
        return Done(value)


def nogina_to_lacombe(space: MetricSpace, u: int, o: NoginaOpen, horizon: int | None = None) -> int:
    """Range program of basic names C(w) over universal dense names w in O."""
    w = universal_dense_program(space, u, horizon)
    return intern(("nogina-to-lacombe", w, o.A, o.C), lambda: _NoginaEnum(w, o.A, o.C))
