"""Command-line front end.

Every command prints tab-separated records ``stage<TAB>kind<TAB>payload``
and exits with 0 (YES / no violation), 2 (NOT_YET), 3 (NO / violation) or
1 (usage, parse or configuration error).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction

from .kernel import DIVERGE, Func, dovetail, intern, run
from .metric import (
    CompletedSpace,
    MetricSpace,
    NotExact,
    UnitSquare,
    ball_formal_incl,
    balls_spreen_basis,
    cauchy_completion,
    exact_ball,
    format_ball,
    get_space,
    make_ball,
    parse_ball,
    theta,
    theta_exact,
)
from .numberings import NO, NOT_YET, YES, Verdict, finite_ce, sd_member_counted
from .reals import cauchy_approx, left_emission, parse_rational
from .topology.continuity import ModulusConfig, function_realizer, modulus_check, modulus_program
from .topology.conversions import (
    lacombe_to_spreen,
    metric_to_spreen,
    spreen_basis_to_lacombe_basis,
    spreen_to_lacombe,
    spreen_to_metric,
)
from .topology.moschovakis import nogina_to_lacombe
from .topology.opens import (
    MetricOpen,
    SpreenOpen,
    basic_as_open,
    ball_metric_open,
    ershov_open,
    interval_open,
    nogina_basic,
    spreen_intersect,
    spreen_stream,
    spreen_union_of,
)

EXIT = {YES: 0, NOT_YET: 2, NO: 3}


class UsageError(Exception):
    pass


def record(stage, kind: str, payload) -> None:
    print(f"{stage}\t{kind}\t{payload}")


# --------------------------------------------------------------------------
# open-set literals


@dataclass
class Lit:
    kind: str  # basic | interval | union | inter
    args: tuple


class _Parser:
    """open := basic:BALL | interval:Q,Q | union:[open,...] | inter:(open,open)"""

    def __init__(self, text: str):
        self.text, self.pos = text, 0

    def fail(self, msg: str):
        raise UsageError(f"open literal {self.text!r}: {msg} at position {self.pos}")

    def expect(self, s: str):
        if not self.text.startswith(s, self.pos):
            self.fail(f"expected {s!r}")
        self.pos += len(s)

    def atom(self) -> str:
        # up to a top-level ',' ']' ')' or blank, keeping balanced parentheses
        start, depth = self.pos, 0
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    break
                depth -= 1
            elif (ch in ",]" or ch.isspace()) and depth == 0:
                break
            self.pos += 1
        if self.pos == start:
            self.fail("empty item")
        return self.text[start:self.pos]

    def open(self) -> Lit:
        for tag in ("basic:", "interval:", "union:", "inter:"):
            if self.text.startswith(tag, self.pos):
                self.pos += len(tag)
                return getattr(self, "_" + tag[:-1])()
        self.fail("expected basic:, interval:, union: or inter:")

    def _basic(self):
        return Lit("basic", (self.atom(),))

    def _interval(self):
        a = self.atom()
        self.expect(",")
        return Lit("interval", (a, self.atom()))

    def _union(self):
        self.expect("[")
        parts = [self.open()]
        while self.text.startswith(",", self.pos):
            self.pos += 1
            parts.append(self.open())
        self.expect("]")
        return Lit("union", tuple(parts))

    def _inter(self):
        self.expect("(")
        a = self.open()
        self.expect(",")
        b = self.open()
        self.expect(")")
        return Lit("inter", (a, b))

    def parse(self) -> Lit:
        lit = self.open()
        if self.pos != len(self.text):
            self.fail("trailing input")
        return lit


def parse_open(text: str) -> Lit:
    return _Parser(text).parse()


def _ball(space: MetricSpace, text: str) -> int:
    try:
        return parse_ball(space, text)
    except ValueError as e:
        raise UsageError(str(e)) from None


def build_spreen(space: MetricSpace, lit: Lit) -> SpreenOpen:
    basis = balls_spreen_basis(space)
    if lit.kind == "basic":
        return basic_as_open(basis, _ball(space, lit.args[0]))
    if lit.kind == "interval":
        return metric_to_spreen(space, build_metric(space, lit))
    if lit.kind == "union":
        return spreen_union_of(basis, [build_spreen(space, p) for p in lit.args])
    return spreen_intersect(basis, build_spreen(space, lit.args[0]), build_spreen(space, lit.args[1]))


def build_metric(space: MetricSpace, lit: Lit) -> MetricOpen:
    if lit.kind == "basic":
        return ball_metric_open(space, _ball(space, lit.args[0]))
    if lit.kind == "interval":
        if isinstance(space, UnitSquare):
            raise UsageError("interval literals need a line space")
        try:
            a, b = (parse_rational(x) for x in lit.args)
            return interval_open(space, a, b)
        except ValueError as e:
            raise UsageError(str(e)) from None
    return spreen_to_metric(space, build_spreen(space, lit))


def lacombe_balls(space: MetricSpace, lit: Lit) -> list[int]:
    if lit.kind == "basic":
        return [_ball(space, lit.args[0])]
    if lit.kind == "union":
        return [b for p in lit.args for b in lacombe_balls(space, p)]
    raise UsageError("a Lacombe open is written as basic:... or union:[basic:..., ...]")


# --------------------------------------------------------------------------
# commands


def _space(args) -> MetricSpace:
    try:
        return get_space(args.space)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None


def _point(space: MetricSpace, text: str) -> int:
    try:
        return space.encode_point(space.parse_point(text))
    except ValueError as e:
        raise UsageError(f"point {text!r}: {e}") from None


def _header(args) -> None:
    record(0, "config", f"space={args.space} fuel={args.fuel} seed={args.seed}")


def cmd_member(args) -> int:
    space = _space(args)
    o = build_spreen(space, parse_open(args.open))
    n = _point(space, args.point)
    verdict, used = sd_member_counted(o.A, n, args.fuel)
    record(0, "member", f"{verdict} fuel_used={used}")
    return EXIT[verdict]


def cmd_incl(args) -> int:
    space = _space(args)
    b1, b2 = _ball(space, args.ball1), _ball(space, args.ball2)
    try:
        verdict = ball_formal_incl(space, b1, b2, args.mode, args.fuel)
    except (NotExact, ValueError) as e:
        raise UsageError(str(e)) from None
    record(0, "incl", f"{format_ball(space, b1)} <= {format_ball(space, b2)}: {verdict}")
    return EXIT[verdict]


def _emit_balls(space, prog, args) -> int:
    count = 0
    for e in dovetail([prog], fuel=args.fuel):
        record(e.stage, "ball", format_ball(space, e.value))
        count += 1
        if args.limit and count >= args.limit:
            break
    record("-", "count", count)
    return 0


def cmd_convert(args) -> int:
    space = _space(args)
    d = args.direction
    lit = parse_open(args.open)
    if d == "spreen-lacombe":
        if space.dense is None:
            raise UsageError(f"{space.key} has no dense sequence")
        o = build_spreen(space, lit)
        return _emit_balls(space, spreen_to_lacombe(balls_spreen_basis(space), space.dense, o), args)
    if d == "nogina-lacombe":
        if args.dense is None:
            raise UsageError("nogina-lacombe needs --dense (use --dense default)")
        if not isinstance(space, CompletedSpace):
            space = cauchy_completion(space)
        if space.dense is None:
            raise UsageError(f"{space.key} has no dense sequence")
        if lit.kind != "basic":
            raise UsageError("nogina-lacombe takes a basic:<ball> literal")
        o = nogina_basic(space, _ball(space, lit.args[0]))
        return _emit_balls(space, nogina_to_lacombe(space, space.dense, o), args)
    if args.point is None:
        raise UsageError(f"{d} needs --point")
    n = _point(space, args.point)
    if d == "lacombe-spreen":
        if space.dense is None:
            raise UsageError(f"{space.key} has no dense sequence")
        lb = spreen_basis_to_lacombe_basis(balls_spreen_basis(space), space.dense)
        o = lacombe_to_spreen(lb, finite_ce(lacombe_balls(space, lit)))
        return _emit_stream(space, o, n, args)
    if d == "metric-spreen":
        return _emit_stream(space, metric_to_spreen(space, build_metric(space, lit)), n, args)
    if d == "spreen-metric":
        mo = spreen_to_metric(space, build_spreen(space, lit))
        verdict, used = sd_member_counted(mo.A, n, args.fuel)
        record(0, "member", f"{verdict} fuel_used={used}")
        if verdict is YES:
            radius = run(mo.F, n, args.fuel).value
            for i in range(args.limit or 8):
                m = 64 * i  # the sup needs many stages to see the larger balls
                record(m, "radius", left_emission(radius, m, args.fuel))
        return EXIT[verdict]
    raise UsageError(f"unknown direction {d!r}")


def _emit_stream(space, o: SpreenOpen, n: int, args) -> int:
    verdict, used = sd_member_counted(o.A, n, args.fuel)
    record(0, "member", f"{verdict} fuel_used={used}")
    if verdict is YES:
        for b in spreen_stream(o, n, fuel=args.fuel)[: args.limit or None]:
            record("-", "ball", format_ball(space, b))
    return EXIT[verdict]


def cmd_enumerate(args) -> int:
    space = _space(args)
    o = build_spreen(space, parse_open(args.open))
    return _emit_stream(space, o, _point(space, args.point), args)


def cmd_modulus(args) -> int:
    s1 = s2 = _space(args)
    try:
        fr, phi = function_realizer(args.function), modulus_program(args.phi)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None
    cfg = ModulusConfig(samples=args.samples, seed=args.seed, fuel=args.fuel,
                        lo=parse_rational(args.lo), hi=parse_rational(args.hi))
    try:
        rep = modulus_check(s1, s2, fr, phi, cfg)
    except ValueError as e:
        raise UsageError(str(e)) from None
    record(0, "modulus", f"checked={rep.checked} confirmed={rep.confirmed} "
                         f"inconclusive={rep.inconclusive} violations={len(rep.violations)}")
    if rep.violations:
        x, y, eps = rep.violations[0]
        record(0, "witness", f"x={x} y={y} eps={eps}")
        return 3
    return 0


# --------------------------------------------------------------------------
# demos


def demo_theta_epsilon(args) -> int:
    space = get_space("unit-interval")
    z = space.encode_point(1)
    for eps in (Fraction(1, 2), Fraction(1, 10), Fraction(1, 1000)):
        b1 = make_ball(space, Fraction(1, 2), Fraction(1, 2) + eps)
        b2 = make_ball(space, 1, 1)
        t = theta(space, z, b1, b2)
        approx = cauchy_approx(t, 20, args.fuel)
        exact = theta_exact(space, Fraction(1), b1, b2)
        record(0, "theta", f"eps={eps} exact={exact} approx20={approx} equal={exact == eps}")
    return 0


def demo_square(args) -> int:
    space = get_space("unit-square")
    c = (Fraction(1, 2), Fraction(1, 2))
    b1, b2 = make_ball(space, c, 1), make_ball(space, c, Fraction(3, 4))
    e1, e2 = exact_ball(space, b1), exact_ball(space, b2)
    grid = [(Fraction(i, 16), Fraction(j, 16)) for i in range(17) for j in range(17)]
    inside1 = [p for p in grid if space.exact_distance(e1.center, p) < e1.radius]
    actual = all(space.exact_distance(e2.center, p) < e2.radius for p in inside1)
    formal = ball_formal_incl(space, b1, b2, "exact")
    record(0, "balls", f"b1={format_ball(space, b1)} b2={format_ball(space, b2)}")
    record(0, "actual", f"b1 inside b2 on {len(grid)} grid points: {actual}")
    record(0, "formal", f"b1 formally inside b2: {formal}")
    return 0


def demo_parity(args) -> int:
    space = get_space("parity-oracle:primes")
    evens = intern(("even-sd",), lambda: Func(lambda n: 0 if n % 2 == 0 else DIVERGE, label="even"))
    o = ershov_open(evens)
    record(0, "space", space.reading)
    for n in range(0, 16):
        if space.in_space(n):
            verdict, _ = sd_member_counted(o.A, n, args.fuel)
            record(0, "member", f"{n} in 2X: {verdict}")
    record(0, "lacombe", "no enumeration of balls covering 2X is attempted")
    return 0


DEMOS = {
    "theta-epsilon": demo_theta_epsilon,
    "square-formal-vs-actual": demo_square,
    "parity-oracle": demo_parity,
}


def cmd_demo(args) -> int:
    if args.name not in DEMOS:
        raise UsageError(f"unknown demo {args.name!r} (known: {', '.join(DEMOS)})")
    return DEMOS[args.name](args)


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", default="rationals")
    common.add_argument("--fuel", type=int, default=100_000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=1000)
    common.add_argument("--mode", choices=("exact", "semidecide"), default="exact")
    common.add_argument("--dense", default=None)
    common.add_argument("--limit", type=int, default=0, help="stop after this many records (0: no limit)")

    p = argparse.ArgumentParser(prog="efftop", description="Effective topology on numbered spaces")
    sub = p.add_subparsers(dest="cmd", required=True)
    m = sub.add_parser("member", parents=[common])
    m.add_argument("--open", required=True)
    m.add_argument("--point", required=True)
    i = sub.add_parser("incl", parents=[common])
    i.add_argument("ball1")
    i.add_argument("ball2")
    c = sub.add_parser("convert", parents=[common])
    c.add_argument("--direction", required=True,
                   choices=("spreen-lacombe", "lacombe-spreen", "nogina-lacombe", "metric-spreen", "spreen-metric"))
    c.add_argument("--open", required=True)
    c.add_argument("--point")
    mo = sub.add_parser("modulus", parents=[common])
    mo.add_argument("--function", required=True)
    mo.add_argument("--phi", required=True)
    mo.add_argument("--lo", default="-10")
    mo.add_argument("--hi", default="10")
    d = sub.add_parser("demo", parents=[common])
    d.add_argument("name")
    e = sub.add_parser("enumerate", parents=[common])
    e.add_argument("--open", required=True)
    e.add_argument("--point", required=True)
    return p


COMMANDS = {
    "member": cmd_member,
    "incl": cmd_incl,
    "convert": cmd_convert,
    "modulus": cmd_modulus,
    "demo": cmd_demo,
    "enumerate": cmd_enumerate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    try:
        _header(args)
        return COMMANDS[args.cmd](args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
