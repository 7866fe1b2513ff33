import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from efftop.kernel import DIVERGE, IDENTITY, REGISTRY, Func, dovetail, intern, pair, register, run, unpair
from efftop.metric import (
    ball_formal_incl_exact,
    balls_spreen_basis,
    exact_ball,
    get_space,
    make_ball,
)
from efftop.numberings import ALWAYS, NOT_YET, YES, finite_ce, sd_member
from efftop.reals import cq_decode, cq_encode, left_emission, scale
from efftop.topology import (
    basic_as_open,
    interval_open,
    lacombe_as_spreen_basis,
    lacombe_member,
    lacombe_to_spreen,
    metric_to_spreen,
    open_member,
    spreen_basis_to_lacombe_basis,
    spreen_intersect,
    spreen_stream,
    spreen_to_lacombe,
    spreen_to_metric,
    spreen_union,
    spreen_union_of,
)
from efftop.topology.bases import check_finer, roundtrip_failures, stream, transport_basis
from efftop.topology.continuity import (
    ModulusConfig,
    function_realizer,
    metric_preimage,
    modulus_check,
    modulus_program,
)
from efftop.topology.opens import (
    EMPTY_OPEN,
    SpreenOpen,
    ball_metric_open,
    basic_as_open_program,
    ershov_open,
    ershov_preimage,
    left_ball_open,
    spreen_preimage,
    whole_space_open,
)
from efftop.reals import left_const

Q = get_space("rationals")
B = balls_spreen_basis(Q)
enc = Q.encode_point


def balls_of(names):
    return [exact_ball(Q, b) for b in names]


def inside(e, lo, hi):
    return lo <= e.center - e.radius and e.center + e.radius <= hi


def test_basic_open_membership():
    o = basic_as_open(B, make_ball(Q, 0, 1))
    assert open_member(o, enc(Fraction(1, 2)), 1000) is YES
    assert open_member(o, enc(2), 5000) is NOT_YET


def test_whole_and_empty_opens():
    w = whole_space_open(B)
    n = enc(Fraction(7, 3))
    assert open_member(w, n, 10) is YES
    e = exact_ball(Q, spreen_stream(w, n, stages=5)[0])
    assert e.center == Fraction(7, 3) and e.radius == 1
    assert open_member(EMPTY_OPEN, n, 1000) is NOT_YET
    assert spreen_stream(EMPTY_OPEN, n, fuel=2000) == []


def test_union_stream_contains_part_emissions():
    p1 = basic_as_open(B, make_ball(Q, 0, 1))
    p2 = metric_to_spreen(Q, interval_open(Q, Fraction(1, 2), 3))
    u = spreen_union_of(B, [p1, p2])
    n = enc(Fraction(3, 4))
    assert open_member(u, n, 10_000) is YES
    ws = spreen_stream(u, n, stages=1000)
    for part in (p1, p2):
        for b in spreen_stream(part, n, stages=200)[:6]:
            assert any(ball_formal_incl_exact(Q, b, w) for w in ws)
    assert all(inside(e, -1, 3) and abs(e.center - Fraction(3, 4)) < e.radius for e in balls_of(ws))


def test_union_of_infinite_family():
    # B(k, 1/4) for k = 0, 1, 2, ...
    fam = intern(("test-union-fam",), lambda: Func(lambda k: basic_as_open(B, make_ball(Q, k, Fraction(1, 4))).code))
    u = spreen_union(B, fam)
    assert open_member(u, enc(Fraction(81, 8)), 50_000) is YES
    assert open_member(u, enc(Fraction(1, 2)), 20_000) is NOT_YET


def test_intersection_streams_sound_and_monotone():
    b1, b2 = make_ball(Q, 0, 1), make_ball(Q, Fraction(1, 2), 1)
    o = spreen_intersect(B, basic_as_open(B, b1), basic_as_open(B, b2))
    n = enc(Fraction(1, 4))
    assert open_member(o, n, 10_000) is YES
    small = spreen_stream(o, n, stages=200)
    for e in balls_of(small):
        assert inside(e, Fraction(-1, 2), 1)
    big = spreen_intersect(B, basic_as_open(B, make_ball(Q, 0, 2)), basic_as_open(B, b2))
    large = spreen_stream(big, n, stages=400)
    assert all(any(ball_formal_incl_exact(Q, s, w) for w in large) for s in small[:5])


def test_preimage_under_doubling():
    double = function_realizer("double")

    def pre(b):
        c, r = unpair(b)
        half = pair(enc(cq_decode(c) / 2), scale(Fraction(1, 2), r))
        return basic_as_open(B, half).code

    pre_prog = register(Func(pre, label="preimage of a ball under doubling"))
    o = basic_as_open(B, make_ball(Q, 2, 1))  # (1, 3)
    p = spreen_preimage(double, pre_prog, o)  # (1/2, 3/2)
    assert open_member(p, enc(1), 10_000) is YES
    assert open_member(p, enc(2), 5_000) is NOT_YET
    for e in balls_of(spreen_stream(p, enc(1), stages=100)):
        assert inside(e, Fraction(1, 2), Fraction(3, 2))


def test_preimage_under_identity_is_the_open():
    o = basic_as_open(B, make_ball(Q, 0, 1))
    p = spreen_preimage(IDENTITY, basic_as_open_program(B), o)
    n = enc(Fraction(-1, 3))
    assert open_member(p, n, 10_000) is YES
    assert balls_of(spreen_stream(p, n, stages=50))[0].radius == 1


def test_ershov_opens():
    evens = register(Func(lambda n: 0 if n % 2 == 0 else DIVERGE))
    o = ershov_open(evens)
    assert open_member(o, 4, 10) is YES and open_member(o, 5, 100) is NOT_YET
    pre = ershov_preimage(register(Func(lambda n: n + 1)), o)
    assert open_member(pre, 5, 10) is YES


def test_metric_opens():
    mo = ball_metric_open(Q, make_ball(Q, 0, 1))
    n = enc(Fraction(1, 4))
    r = run(mo.F, n, 1000).value
    assert max(left_emission(r, m, 10_000) for m in range(20)) < Fraction(3, 4)
    assert left_emission(r, 19, 10_000) > Fraction(3, 4) - Fraction(1, 2 ** 17)
    lb = left_ball_open(Q, enc(0), left_const(1))
    assert open_member(lb, enc(Fraction(99, 100)), 10_000) is YES
    assert open_member(lb, enc(1), 5_000) is NOT_YET


def test_metric_to_spreen_balls_sit_inside():
    so = metric_to_spreen(Q, interval_open(Q, 0, 1))
    n = enc(Fraction(1, 5))
    bs = balls_of(spreen_stream(so, n, fuel=20_000))
    assert bs and all(e.center == Fraction(1, 5) and e.radius <= Fraction(1, 5) for e in bs)


def test_spreen_to_metric_radius():
    so = basic_as_open(B, make_ball(Q, 0, 1))
    mo = spreen_to_metric(Q, so)
    r = run(mo.F, enc(Fraction(1, 2)), 10_000).value
    ems = [left_emission(r, m, 10**5) for m in (0, 50, 400)]
    assert ems == sorted(ems) and ems[-1] < Fraction(1, 2)
    assert ems[-1] > Fraction(1, 2) - Fraction(1, 16)


def test_spreen_to_lacombe_on_interval():
    so = metric_to_spreen(Q, interval_open(Q, 0, 1))
    lac = spreen_to_lacombe(B, Q.dense, so)
    bs = [exact_ball(Q, e.value) for e in dovetail([lac], fuel=200_000)]
    assert len(bs) > 20 and all(inside(e, 0, 1) for e in bs)


def test_lacombe_round_trip():
    lb = spreen_basis_to_lacombe_basis(B, Q.dense)
    l = finite_ce([make_ball(Q, 0, 1), make_ball(Q, 5, Fraction(1, 2))])
    so = lacombe_to_spreen(lb, l)
    for x, want in ((Fraction(1, 2), YES), (Fraction(21, 4), YES), (3, NOT_YET)):
        assert lacombe_member(lb, l, enc(x), 20_000) is want
        assert sd_member(so.A, enc(x), 20_000) is want
    s = balls_of(spreen_stream(so, enc(Fraction(21, 4)), fuel=20_000))
    assert s and all(e.center == 5 for e in s)


def test_lacombe_basis_from_dense_sequence():
    lb = spreen_basis_to_lacombe_basis(B, Q.dense)
    cover = [exact_ball(Q, e.value) for e in dovetail([lb.cover], fuel=100_000)]
    assert any(abs(e.center - Fraction(17, 3)) < e.radius for e in cover)
    inter = run(lb.intersector, pair(make_ball(Q, 0, 1), make_ball(Q, Fraction(1, 2), 1)), 100).value
    got = [exact_ball(Q, e.value) for e in dovetail([inter], fuel=100_000)][:100]
    assert got and all(inside(e, Fraction(-1, 2), 1) for e in got)
    same = run(lb.intersector, pair(make_ball(Q, 0, 1), make_ball(Q, 0, 1)), 100).value
    balls = [exact_ball(Q, e.value) for e in dovetail([same], fuel=200_000)]
    for x in (Fraction(0), Fraction(1, 2), Fraction(-3, 4)):
        assert any(abs(e.center - x) < e.radius for e in balls)


def test_lacombe_basis_as_spreen_basis():
    lb = spreen_basis_to_lacombe_basis(B, Q.dense)
    sb = lacombe_as_spreen_basis(lb)
    b = make_ball(Q, 0, 1)
    assert sb.incl.check(b, b) is YES
    assert sb.incl.check(b, make_ball(Q, 0, 2)).value == "NO"
    n = enc(Fraction(1, 3))
    g1 = [exact_ball(Q, v) for v in stream(sb.g1, n, fuel=50_000)]
    assert g1 and all(abs(e.center - Fraction(1, 3)) < e.radius for e in g1)


def test_transport_along_a_renaming():
    # new name of ball b is 2b + 1; the translated basis behaves identically
    f12 = register(Func(lambda b: 2 * b + 1))
    f21 = register(Func(lambda m: (m - 1) // 2))
    tb = transport_basis(B, f12, f21, decode=lambda m: (m - 1) // 2)
    b = make_ball(Q, 0, 1)
    m = 2 * b + 1
    assert sd_member(curry_member(tb, m), enc(Fraction(1, 2)), 10_000) is YES
    assert tb.incl.check(m, 2 * make_ball(Q, 0, 2) + 1) is YES
    assert roundtrip_failures(B, lambda b: 2 * b + 1, lambda m: (m - 1) // 2, [b, make_ball(Q, 3, 2)]) == []


def curry_member(basis, b):
    from efftop.kernel import curry

    return curry(basis.member, b)


def test_check_finer_harness():
    opens = [basic_as_open(B, make_ball(Q, c, 1)) for c in range(3)]
    codes = [o.code for o in opens]
    pts = [enc(Fraction(k, 4)) for k in range(-4, 12)]

    def member(code, n, fuel):
        return open_member(SpreenOpen.from_code(code), n, fuel)

    assert check_finer(lambda c: c, member, member, codes, pts, 10_000) == []
    # a translator that shrinks every open is caught
    small = lambda c: basic_as_open(B, make_ball(Q, 100, 1)).code
    assert check_finer(small, member, member, codes, pts, 10_000)


@pytest.mark.parametrize("f,phi", [("identity", "eps"), ("double", "half-eps"), ("square", "square-local")])
def test_moduli_hold(f, phi):
    rep = modulus_check(Q, Q, function_realizer(f), modulus_program(phi), ModulusConfig(samples=150, seed=1))
    assert rep.ok and rep.confirmed == 150


def test_wrong_modulus_is_caught_at_the_boundary():
    rep = modulus_check(Q, Q, function_realizer("square"), modulus_program("eps"), ModulusConfig(samples=5))
    x, y, eps = rep.violations[0]
    assert x == 10 and abs(x * x - y * y) > eps


def test_metric_preimage_with_modulus():
    square, phi = function_realizer("square"), modulus_program("square-local")
    mo = ball_metric_open(Q, make_ball(Q, 4, 1))  # squares in (3, 5)
    pre = metric_preimage(square, phi, mo)
    n = enc(2)
    assert open_member(pre, n, 10_000) is YES
    r = run(pre.F, n, 10_000).value
    delta = left_emission(r, 30, 10**5)
    assert delta > 0
    # every y with |y - 2| < delta squares into (3, 5)
    for y in (2 - delta, 2 + delta):
        assert 3 < y * y < 5


def test_unknown_realizers():
    with pytest.raises(KeyError):
        function_realizer("cube")
    with pytest.raises(KeyError):
        modulus_program("tiny")
