import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from efftop.exact import Alg
from efftop.kernel import REGISTRY, Func, Halted, dovetail, pair, register, run, tup, unpair
from efftop.metric import (
    NotExact,
    ball_formal_incl,
    ball_formal_incl_exact,
    ball_member,
    balls_spreen_basis,
    calkin_wilf,
    cauchy_completion,
    check_third_lemma,
    distance,
    exact_ball,
    format_ball,
    get_space,
    make_ball,
    parse_ball,
    signed_rational,
    theta,
    theta_exact,
    unit_rational,
)
from efftop.numberings import NO, NOT_YET, YES
from efftop.reals import cauchy_approx, cq_decode, cq_encode, sqrt_real

Q = get_space("rationals")
I = get_space("unit-interval")
SQ = get_space("unit-square")
D = get_space("discrete")
CQ = cauchy_completion(Q)

qs = st.fractions(min_value=-5, max_value=5, max_denominator=40)


def approx(x, n=30):
    return cauchy_approx(x, n, 10**5)


def test_dense_orderings_list_each_rational_once():
    assert [signed_rational(k) for k in range(7)] == [0, 1, -1, Fraction(1, 2), Fraction(-1, 2), 2, -2]
    cw = {calkin_wilf(m) for m in range(1, 2000)}
    assert len(cw) == 1999
    unit = [unit_rational(k) for k in range(300)]
    assert unit[:2] == [0, 1] and len(set(unit)) == 300 and all(0 <= u <= 1 for u in unit)


def test_distance_examples():
    d = distance(Q, Q.encode_point(Fraction(1, 2)), Q.encode_point(Fraction(1, 3)))
    assert REGISTRY[d].exact == Fraction(1, 6)
    assert approx(distance(Q, 5, 5)) == 0
    assert approx(distance(D, 3, 8)) == 1 and approx(distance(D, 4, 4)) == 0


@given(qs, qs, qs)
def test_metric_axioms_on_the_line(a, b, c):
    na, nb, nc = (Q.encode_point(x) for x in (a, b, c))
    k = 12
    e = Fraction(2, 2 ** k)
    dab = cauchy_approx(distance(Q, na, nb), k, 10**4)
    dba = cauchy_approx(distance(Q, nb, na), k, 10**4)
    dbc = cauchy_approx(distance(Q, nb, nc), k, 10**4)
    dac = cauchy_approx(distance(Q, na, nc), k, 10**4)
    assert abs(dab - dba) < e
    assert dac <= dab + dbc + 2 * e


def _sq_point():
    return st.tuples(st.fractions(0, 1, max_denominator=20), st.fractions(0, 1, max_denominator=20))


@given(_sq_point(), _sq_point(), _sq_point())
def test_metric_axioms_on_the_square(p, q, r):
    k = 10
    e = Fraction(1, 2 ** k)
    n = [SQ.encode_point(x) for x in (p, q, r)]
    d = lambda i, j: cauchy_approx(distance(SQ, n[i], n[j]), k, 10**4)
    assert abs(d(0, 1) - d(1, 0)) < 2 * e
    assert d(0, 2) <= d(0, 1) + d(1, 2) + 3 * e
    # against the exact oracle
    assert abs(d(0, 1) - SQ.exact_distance(p, q)) < e


@pytest.mark.parametrize("point,ball,verdict", [
    (0, (0, 1), YES),
    (1, (0, 1), NOT_YET),
    (Fraction(2, 3), (Fraction(1, 2), Fraction(1, 4)), YES),
])
def test_ball_member_examples(point, ball, verdict):
    b = make_ball(Q, *ball)
    assert ball_member(Q, b, Q.encode_point(point), 10_000) is verdict


def test_empty_ball_has_no_members():
    b = make_ball(Q, 0, -1)
    assert ball_member(Q, b, Q.encode_point(0), 5000) is NOT_YET


@pytest.mark.parametrize("space,b1,b2,want", [
    (Q, (0, 1), (0, 2), YES),
    (I, (Fraction(1, 2), 2), (Fraction(1, 2), 1), NO),
    (Q, (1, 1), (0, 3), YES),
])
def test_formal_inclusion_examples(space, b1, b2, want):
    assert ball_formal_incl(space, make_ball(space, *b1), make_ball(space, *b2)) is want


def test_semidecide_inclusion_is_strict():
    b1, b2, b3 = make_ball(Q, 0, 1), make_ball(Q, 0, 2), make_ball(Q, 1, 1)
    assert ball_formal_incl(Q, b1, b2, "semidecide", 10_000) is YES
    assert ball_formal_incl(Q, b2, b1, "semidecide", 10_000) is NO
    assert ball_formal_incl(Q, b1, b1, "semidecide", 5_000) is NOT_YET
    # d + r1 = 2 > 1: refuted
    assert ball_formal_incl(Q, b3, b1, "semidecide", 10_000) is NO


def test_exact_mode_needs_exact_data():
    with pytest.raises(NotExact):
        exact_ball(Q, pair(Q.encode_point(0), register(Func(lambda n: 0))))


def test_theta_examples():
    x = Q.encode_point(Fraction(1, 2))
    t = theta(Q, x, make_ball(Q, 0, 1), make_ball(Q, 1, 1))
    assert REGISTRY[t].exact == Fraction(1, 2)
    b = make_ball(Q, 3, Fraction(2, 5))
    t = theta(Q, Q.encode_point(3), b, b)
    assert REGISTRY[t].exact == Fraction(2, 5)


@pytest.mark.parametrize("eps", [Fraction(1, 2), Fraction(1, 10), Fraction(1, 1000)])
def test_theta_is_exactly_epsilon_at_the_end_of_the_interval(eps):
    b1 = make_ball(I, Fraction(1, 2), Fraction(1, 2) + eps)
    b2 = make_ball(I, 1, 1)
    t = theta(I, I.encode_point(1), b1, b2)
    assert REGISTRY[t].exact == eps
    assert abs(approx(t) - eps) < Fraction(1, 2 ** 30)
    assert theta_exact(I, Fraction(1), b1, b2) == eps


@given(st.integers(1, 6), st.integers(1, 6))
def test_theta_name_independence(k1, k2):
    x = Fraction(1, 3)
    b1, b2 = make_ball(Q, 0, 1), make_ball(Q, Fraction(1, 2), Fraction(1, 2))
    t1 = theta(Q, Q.co_name(x, k1), b1, b2)
    t2 = theta(Q, Q.co_name(x, k2), b1, b2)
    assert REGISTRY[t1].exact == REGISTRY[t2].exact


def test_theta_containment_on_samples():
    rng = random.Random(3)
    b1, b2 = make_ball(SQ, (0, 0), 1), make_ball(SQ, (1, 1), 1)
    x = (Fraction(1, 2), Fraction(1, 2))
    t = theta_exact(SQ, x, b1, b2)
    for _ in range(200):
        p = (Fraction(rng.randint(0, 64), 64), Fraction(rng.randint(0, 64), 64))
        if SQ.exact_distance(x, p) < t:
            for b in (b1, b2):
                e = exact_ball(SQ, b)
                assert SQ.exact_distance(e.center, p) < e.radius


def test_third_lemma_examples():
    b = make_ball(Q, 0, 1)
    enc = Q.encode_point
    assert check_third_lemma(Q, b, enc(Fraction(2, 5)), enc(Fraction(1, 2)))
    assert check_third_lemma(Q, b, enc(Fraction(2, 5)), enc(Fraction(2, 5)))


def test_spreen_basis_producers():
    basis = balls_spreen_basis(I)
    n = I.encode_point(Fraction(1, 4))
    g1 = [run(basis.g1, pair(n, q), 100).value for q in range(3)]
    assert all(unpair(v) == (n, unpair(g1[0])[1]) for v in g1)
    assert REGISTRY[unpair(g1[0])[1]].exact == 1
    eps = Fraction(1, 10)
    b1, b2 = make_ball(I, Fraction(1, 2), Fraction(1, 2) + eps), make_ball(I, 1, 1)
    z = I.encode_point(1)
    outs = [run(basis.g2, tup(z, b1, b2, q), 1000).value for q in range(3)]
    assert len(set(outs)) == 1
    assert REGISTRY[unpair(outs[0])[1]].exact == eps


def test_ball_literals():
    b = parse_ball(Q, "(1/2;3)")
    assert format_ball(Q, b) == "1/2;3"
    assert format_ball(SQ, parse_ball(SQ, "1/2,1/4;1/8")) == "1/2,1/4;1/8"
    with pytest.raises(ValueError):
        parse_ball(Q, "1/2")


def test_completion_embedding():
    a, b = CQ.encode_point(Fraction(1, 3)), CQ.encode_point(Fraction(3, 4))
    for k in (0, 5, 15):
        v = cauchy_approx(distance(CQ, a, b), k, 10**4)
        assert abs(v - Fraction(5, 12)) < Fraction(2, 2 ** k)


def test_completion_sqrt2_distance_to_one():
    root = sqrt_real(2)
    name = register(Func(lambda k: cq_encode(cauchy_approx(root, k, 10**4)), label="sqrt2 names"))
    one = CQ.encode_point(1)
    for k in (4, 10, 20):
        v = cauchy_approx(distance(CQ, name, one), k, 10**5)
        # |v - (sqrt2 - 1)| < 2^-k, checked exactly
        e = Fraction(1, 2 ** k)
        target = Alg.sqrt(2) - 1
        assert v - e < target < v + e


def test_completion_limit_of_names():
    sigma = register(Func(lambda m: CQ.embed(Q.encode_point(1 - Fraction(1, 2 ** m)))))
    lim = CQ.limit_name(sigma)
    one = CQ.encode_point(1)
    for k in (3, 10, 18):
        assert abs(cauchy_approx(distance(CQ, lim, one), k, 10**5)) < Fraction(2, 2 ** k)


def test_parity_space():
    Y = get_space("parity-oracle:primes")
    assert Y.in_space(4) and Y.in_space(5) and not Y.in_space(8)
    assert approx(distance(Y, 4, 5)) == 1
    with pytest.raises(ValueError):
        Y.parse_point("8")


def test_unknown_space():
    with pytest.raises(KeyError):
        get_space("hilbert-cube")
