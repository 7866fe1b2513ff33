"""Fuel-bounded partial programs, Cantor pairing and the dovetail scheduler.

A program is a deterministic step machine.  ``advance(reg, n, state, budget)``
runs at most ``budget`` steps from ``state`` (``None`` before the first step)
and returns ``(Halted(v) | Running(state'), used)``.  Advancing by ``b`` steps
is observationally the same as ``b`` single steps.

Divergence that a program can recognise is reported as the state ``NEVER``;
such a program keeps consuming every step it is given, but the scheduler can
account for it without calling it again.

Step states are treated linearly: once a state has been advanced it is not
reused.  ``resume`` copies its token so that callers may replay freely.
"""

from __future__ import annotations

import copy
import threading
from dataclasses import dataclass
from math import isqrt
from typing import Callable, Iterator, NamedTuple, Sequence, Union

import numpy as np

# --------------------------------------------------------------------------
# pairing


def pair(a: int, b: int) -> int:
    """Cantor pairing (a+b)(a+b+1)/2 + b."""
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(n: int) -> tuple[int, int]:
    w = (isqrt(8 * n + 1) - 1) // 2
    b = n - w * (w + 1) // 2
    return w - b, b


def tup(*xs: int) -> int:
    """Right-nested tuple code <x0, <x1, ... <x_{k-2}, x_{k-1}>>>."""
    if len(xs) == 1:
        return xs[0]
    code = xs[-1]
    for x in reversed(xs[:-1]):
        code = pair(x, code)
    return code


def untup(n: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k - 1):
        a, n = unpair(n)
        out.append(a)
    out.append(n)
    return tuple(out)


def pair_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    s = a + b
    return s * (s + 1) // 2 + b


def unpair_array(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = np.asarray(n, dtype=np.int64)
    w = ((np.sqrt(8.0 * n + 1.0) - 1.0) // 2).astype(np.int64)
    # float sqrt can be off by one near perfect squares
    w -= (w * (w + 1) // 2 > n).astype(np.int64)
    w += ((w + 1) * (w + 2) // 2 <= n).astype(np.int64)
    b = n - w * (w + 1) // 2
    return w - b, b


# --------------------------------------------------------------------------
# step results


class Halted(NamedTuple):
    value: int


class Running(NamedTuple):
    state: object


class _Never:
    __slots__ = ()

    def __repr__(self) -> str:
        return "NEVER"

    def __deepcopy__(self, memo):
        return self

    def __reduce__(self):
        return "NEVER"


NEVER = _Never()
RUN_NEVER = Running(NEVER)
DIVERGE = object()  # returned by Func bodies and Script hooks

StepResult = Union[Halted, Running]


class UnknownProgram(LookupError):
    """Raised at top level when an index is not registered."""


class Garbage(Exception):
    """Raised by a program body on input outside its domain; means divergence."""


# --------------------------------------------------------------------------
# programs


class Program:
    """Base step program.  Subclasses override ``step`` or ``advance``."""

    exact = None  # known exact denotation, used only by oracles and fast paths
    label = "program"

    def step(self, reg: "Registry", n: int, state) -> StepResult:
        return self.advance(reg, n, state, 1)[0]

    def advance(self, reg: "Registry", n: int, state, budget: int) -> tuple[StepResult, int]:
        used = 0
        while used < budget:
            if state is NEVER:
                return RUN_NEVER, budget
            res = self.step(reg, n, state)
            used += 1
            if isinstance(res, Halted):
                return res, used
            state = res.state
        return Running(state), used

    def __repr__(self) -> str:
        return f"<{self.label}>"


class Func(Program):
    """One-step program computing ``fn(n)``; ``DIVERGE`` or ``Garbage`` diverge."""

    def __init__(self, fn: Callable[[int], object], label: str = "func", exact=None):
        self.fn = fn
        self.label = label
        self.exact = exact

    def advance(self, reg, n, state, budget):
        if budget <= 0:
            return Running(state), 0
        if state is NEVER:
            return RUN_NEVER, budget
        try:
            v = self.fn(n)
        except Garbage:
            v = DIVERGE
        if v is DIVERGE:
            return RUN_NEVER, budget
        return Halted(v), 1


def Const(v: int, exact=None) -> Func:
    return Func(lambda n: v, label=f"const {v}", exact=exact)


def Identity() -> Func:
    return Func(lambda n: n, label="identity")


class Loop(Program):
    label = "loop"

    def advance(self, reg, n, state, budget):
        return RUN_NEVER, max(budget, 0)


class HaltAfter(Program):
    """Halts with ``value`` on exactly its ``steps``-th step (steps >= 1)."""

    def __init__(self, steps: int, value: int = 0):
        if steps < 1:
            raise ValueError("a program needs at least one step to halt")
        self.steps = steps
        self.value = value
        self.label = f"halt-after {steps}"

    def advance(self, reg, n, state, budget):
        done = 0 if state is None else state
        left = self.steps - done
        if budget >= left:
            return Halted(self.value), left
        return Running(done + budget), max(budget, 0)


@dataclass(frozen=True)
class Call:
    index: int
    arg: int
    local: object = None


@dataclass(frozen=True)
class Done:
    value: int


class Script(Program):
    """Sequential composition of sub-calls.

    ``begin(n)`` and ``after(n, local, value)`` return ``Call``, ``Done`` or
    ``DIVERGE``.  ``begin`` costs one step; a child's steps are charged to the
    parent and its halting is handled in the same step.
    """

    label = "script"

    def begin(self, n: int):
        raise NotImplementedError

    def after(self, n: int, local, value: int):
        raise NotImplementedError

    def _act(self, act):
        # returns (result-or-None, state)
        if isinstance(act, Call):
            return None, (act.local, act.index, act.arg, None)
        if isinstance(act, Done):
            return Halted(act.value), None
        return RUN_NEVER, NEVER

    def advance(self, reg, n, state, budget):
        if budget <= 0:
            return Running(state), 0
        if state is NEVER:
            return RUN_NEVER, budget
        used = 0
        if state is None:
            used = 1
            try:
                act = self.begin(n)
            except Garbage:
                act = DIVERGE
            res, state = self._act(act)
            if res is not None:
                return (res, 1) if isinstance(res, Halted) else (RUN_NEVER, budget)
        while used < budget:
            local, idx, arg, cstate = state
            prog = reg.get(idx)
            if prog is None:
                return RUN_NEVER, budget
            res, u = prog.advance(reg, arg, cstate, budget - used)
            used += u
            if isinstance(res, Halted):
                try:
                    act = self.after(n, local, res.value)
                except Garbage:
                    act = DIVERGE
                res2, state = self._act(act)
                if res2 is not None:
                    return (res2, used) if isinstance(res2, Halted) else (RUN_NEVER, budget)
            elif res.state is NEVER:
                return RUN_NEVER, budget
            else:
                state = (local, idx, arg, res.state)
        return Running(state), used


class Curry(Script):
    """n -> phi_i(<a, n>)."""

    def __init__(self, i: int, a: int):
        self.i, self.a = i, a
        self.label = f"curry {i} {a}"

    def begin(self, n):
        return Call(self.i, pair(self.a, n))

    def after(self, n, local, value):
        return Done(value)


class Compose(Script):
    """n -> phi_g(phi_f(n))."""

    def __init__(self, g: int, f: int):
        self.g, self.f = g, f
        self.label = f"compose {g} {f}"

    def begin(self, n):
        return Call(self.f, n, "f")

    def after(self, n, local, value):
        if local == "f":
            return Call(self.g, value, "g")
        return Done(value)


class Forward(Script):
    """Behaves like phi_i but carries no metadata (an opaque copy)."""

    def __init__(self, i: int):
        self.i = i
        self.label = f"forward {i}"

    def begin(self, n):
        return Call(self.i, n)

    def after(self, n, local, value):
        return Done(value)


class Timed(Program):
    """<i, x> -> <t0, phi_i(x)> where t0 is the 0-based step on which phi_i(x) halts."""

    label = "timed"

    def advance(self, reg, n, state, budget):
        if budget <= 0:
            return Running(state), 0
        if state is NEVER:
            return RUN_NEVER, budget
        i, x = unpair(n)
        prog = reg.get(i)
        if prog is None:
            return RUN_NEVER, budget
        count, cstate = (0, None) if state is None else state
        res, u = prog.advance(reg, x, cstate, budget)
        count += u
        if isinstance(res, Halted):
            return Halted(pair(count - 1, res.value)), u
        if res.state is NEVER:
            return RUN_NEVER, budget
        return Running((count, res.state)), u


class Bounded(Program):
    """<i, x, f> -> 0 if phi_i(x) does not halt within f steps, else 1 + <t0, value>.

    Always halts: uses min(f, steps of phi_i(x)) steps, plus one step to
    report a timeout.
    """

    label = "bounded"

    def advance(self, reg, n, state, budget):
        if budget <= 0:
            return Running(state), 0
        i, x, f = untup(n, 3)
        count, cstate = (0, None) if state is None else state
        used = 0
        if count < f and cstate is not NEVER:
            prog = reg.get(i)
            if prog is None:
                cstate = NEVER
            else:
                res, u = prog.advance(reg, x, cstate, min(budget, f - count))
                used += u
                if isinstance(res, Halted):
                    return Halted(1 + pair(count + u - 1, res.value)), used
                cstate = res.state
                count += u
        if cstate is NEVER and count < f:
            # the child would burn its remaining allowance
            take = min(budget - used, f - count)
            used += take
            count += take
        if count >= f and used < budget:
            return Halted(0), used + 1
        return Running((count, cstate)), used


class Search(Program):
    """x -> <r, v> for the first run r (in dovetail order) of phi_p(<x, r>) to halt."""

    def __init__(self, p: int):
        self.p = p
        self.label = f"search {p}"

    def advance(self, reg, n, state, budget):
        if budget <= 0:
            return Running(state), 0
        if state is NEVER:
            return RUN_NEVER, budget
        sched = Schedule(lambda r, p=self.p, x=n: (p, pair(x, r))) if state is None else state
        out, used = sched.advance(reg, budget, first_only=True)
        if out:
            stage, r, v, _ = out[0]
            return Halted(pair(r, v)), used
        return Running(sched), used


# --------------------------------------------------------------------------
# dovetailing


class Schedule:
    """Triangular round-robin over runs 0, 1, 2, ...

    Stage t admits run t; then every live run, in admission order, receives
    one step.  A run admitted at stage r that halts on its own step s (0-based)
    therefore emits during stage r + s.  Runs that report ``NEVER`` are parked
    and charged one step per later stage without being called.
    """

    __slots__ = ("spawn", "stage", "pos", "live", "parked", "due")

    def __init__(self, spawn: Callable[[int], tuple[int, int]]):
        self.spawn = spawn
        self.stage = 0
        self.pos = -1  # -1: stage not yet opened
        self.live: list = []
        self.parked = 0
        self.due = 0

    def __deepcopy__(self, memo):
        s = Schedule(self.spawn)
        s.stage, s.pos, s.parked, s.due = self.stage, self.pos, self.parked, self.due
        s.live = [None if run is None else [run[0], run[1], run[2], copy.deepcopy(run[3], memo)]
                  for run in self.live]
        return s

    def advance(self, reg: "Registry", budget: int, first_only: bool = False,
                stop_stage: int | None = None) -> tuple[list, int]:
        used = 0
        out: list = []
        live = self.live
        while used < budget:
            if self.pos == -1:
                if stop_stage is not None and self.stage >= stop_stage:
                    break
                idx, arg = self.spawn(self.stage)
                live.append([self.stage, idx, arg, None])
                self.pos = 0
                self.due = self.parked
            if self.pos < len(live):
                run = live[self.pos]
                self.pos += 1
                if run is None:
                    continue
                prog = reg.get(run[1])
                if prog is None:
                    res = RUN_NEVER
                else:
                    res, _ = prog.advance(reg, run[2], run[3], 1)
                used += 1
                if isinstance(res, Halted):
                    live[self.pos - 1] = None
                    out.append((self.stage, run[0], res.value, used))
                    if first_only:
                        break
                elif res.state is NEVER:
                    live[self.pos - 1] = None
                    self.parked += 1
                else:
                    run[3] = res.state
                continue
            pay = min(self.due, budget - used)
            used += pay
            self.due -= pay
            if self.due == 0:
                live[:] = [run for run in live if run is not None]
                self.stage += 1
                self.pos = -1
        return out, used


class Emission(NamedTuple):
    stage: int
    task: int
    arg: int
    value: int
    fuel: int  # cumulative fuel when the value appeared


def dovetail(tasks: Sequence[int] | Callable[[int], int], fuel: int | None = None,
             stages: int | None = None, reg: "Registry | None" = None) -> Iterator[Emission]:
    """Merge the range enumerations of a family of programs.

    ``tasks`` is a finite sequence of program indices or a callable ``j -> index``
    for an infinite family.  Run r is task j on input k, with
    ``(j, k) = (r % w, r // w)`` for a family of width w and ``unpair(r)`` otherwise.
    """
    if fuel is None and stages is None:
        raise ValueError("dovetail needs a fuel or stage bound")
    reg = REGISTRY if reg is None else reg
    if callable(tasks):
        def where(r):
            return unpair(r)
        family = tasks
    else:
        width = len(tasks)
        if width == 0:
            return

        def where(r):
            return r % width, r // width

        def family(j):
            return tasks[j]

    def spawn(r):
        j, k = where(r)
        return family(j), k

    sched = Schedule(spawn)
    spent = 0
    chunk = 1024
    while fuel is None or spent < fuel:
        budget = chunk if fuel is None else min(chunk, fuel - spent)
        out, used = sched.advance(reg, budget, stop_stage=stages)
        for stage, r, v, at in out:
            j, k = where(r)
            yield Emission(stage, j, k, v, spent + at)
        spent += used
        if used < budget:
            return  # stage bound reached


# --------------------------------------------------------------------------
# registry


class Registry:
    """Append-only table of programs.  Lookup is lock-free; registration is serialised."""

    def __init__(self):
        self._programs: list[Program] = []
        self._keys: dict = {}
        self._lock = threading.RLock()

    def __len__(self) -> int:
        return len(self._programs)

    def register(self, prog: Program) -> int:
        with self._lock:
            self._programs.append(prog)
            return len(self._programs) - 1

    def intern(self, key, factory: Callable[[], Program]) -> int:
        """Register ``factory()`` once per key and return the shared index."""
        i = self._keys.get(key)
        if i is not None:
            return i
        with self._lock:
            i = self._keys.get(key)
            if i is None:
                self._programs.append(factory())
                i = len(self._programs) - 1
                self._keys[key] = i
            return i

    def get(self, i: int) -> Program | None:
        if 0 <= i < len(self._programs):
            return self._programs[i]
        return None

    def __getitem__(self, i: int) -> Program:
        prog = self.get(i)
        if prog is None:
            raise UnknownProgram(i)
        return prog

    def run_counted(self, i: int, n: int, fuel: int) -> tuple[StepResult, int]:
        res, used = self[i].advance(self, n, None, fuel)
        if isinstance(res, Running) and res.state is NEVER:
            used = fuel
        return res, used

    def run(self, i: int, n: int, fuel: int) -> StepResult:
        return self.run_counted(i, n, fuel)[0]

    def resume(self, i: int, n: int, state, fuel: int) -> tuple[StepResult, int]:
        return self[i].advance(self, n, copy.deepcopy(state), fuel)


REGISTRY = Registry()


def register(prog: Program) -> int:
    return REGISTRY.register(prog)


def intern(key, factory: Callable[[], Program]) -> int:
    return REGISTRY.intern(key, factory)


def run(i: int, n: int, fuel: int) -> StepResult:
    return REGISTRY.run(i, n, fuel)


def run_counted(i: int, n: int, fuel: int) -> tuple[StepResult, int]:
    return REGISTRY.run_counted(i, n, fuel)


def resume(i: int, n: int, state, fuel: int) -> tuple[StepResult, int]:
    return REGISTRY.resume(i, n, state, fuel)


def program(i: int) -> Program:
    return REGISTRY[i]


# programs every layer uses
ZERO = intern(("const", 0), lambda: Const(0))
IDENTITY = intern(("identity",), Identity)
LOOP = intern(("loop",), Loop)
TIMED = intern(("timed",), Timed)
BOUNDED = intern(("bounded",), Bounded)


def curry(i: int, a: int) -> int:
    return intern(("curry", i, a), lambda: Curry(i, a))


def compose(g: int, f: int) -> int:
    return intern(("compose", g, f), lambda: Compose(g, f))


def search(p: int) -> int:
    return intern(("search", p), lambda: Search(p))


def const(v: int) -> int:
    return intern(("const", v), lambda: Const(v))
