from efftop.kernel import DIVERGE, Func, register
from efftop.numberings import (
    ALWAYS,
    NO,
    NOT_YET,
    NOWHERE,
    YES,
    ce_enumerate,
    decidable_to_sd,
    decide,
    finite_ce,
    product_name,
    product_split,
    sd_intersect,
    sd_member,
    sd_member_counted,
    sd_union_ce,
)

EVEN = register(Func(lambda n: 0 if n % 2 == 0 else DIVERGE, label="even"))
DIV3 = register(Func(lambda n: 0 if n % 3 == 0 else DIVERGE, label="div3"))
IS_EVEN = register(Func(lambda n: int(n % 2 == 0), label="is-even"))


def test_trivial_sets():
    assert sd_member(ALWAYS, 17, 10) is YES
    assert sd_member(NOWHERE, 17, 1000) is NOT_YET
    assert sd_member_counted(NOWHERE, 0, 123) == (NOT_YET, 123)


def test_intersection():
    both = sd_intersect(EVEN, DIV3)
    assert [n for n in range(20) if sd_member(both, n, 50) is YES] == [0, 6, 12, 18]


def test_union_of_enumerated_sets():
    u = sd_union_ce(finite_ce([EVEN, DIV3]))
    got = [n for n in range(12) if sd_member(u, n, 5000) is YES]
    assert got == [0, 2, 3, 4, 6, 8, 9, 10]
    assert sd_member(u, 7, 5000) is NOT_YET


def test_finite_ce_enumerates_exactly():
    assert sorted(ce_enumerate(finite_ce([5, 1, 9]), 2000)) == [1, 5, 9]
    assert ce_enumerate(finite_ce([]), 500) == []


def test_decidable_sets():
    assert decide(IS_EVEN, 4, 5) is YES and decide(IS_EVEN, 5, 5) is NO
    sd = decidable_to_sd(IS_EVEN)
    assert sd_member(sd, 8, 10) is YES and sd_member(sd, 9, 100) is NOT_YET


def test_products():
    assert product_split(product_name(3, 11)) == (3, 11)


def test_verdict_text():
    assert str(YES) == "YES" and str(NOT_YET) == "NOT_YET"
