"""expr core: parsing, exact arithmetic, differentiation, rational functions."""
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from diskeds.errors import (
    DivisionByZeroFunction,
    MalformedSyntax,
    NegativeOrNonIntegerExponent,
    NotComplexifiedMode,
    UnknownVariable,
)
from diskeds.exact import GaussianRational, gaussian
from diskeds.expr import (
    Polynomial,
    RationalFunction,
    conjugate_involution,
    parse_expression,
    print_polynomial,
    ratfn_arithmetic,
)

F2 = ("f1", "f2")
CX = ("z1", "z2", "zb1", "zb2", "w1", "w2", "wb1", "wb2")


def test_parse_basic():
    p = parse_expression("2*f1^2 - 1/3*f2", F2)
    assert p.terms == {(2, 0): Fraction(2), (0, 1): Fraction(-1, 3)}


def test_parse_negative_exponent():
    with pytest.raises(NegativeOrNonIntegerExponent):
        parse_expression("f1^-2", F2)


def test_parse_fractional_exponent():
    with pytest.raises(NegativeOrNonIntegerExponent):
        parse_expression("f1^1/2", F2)


def test_parse_float_rejected():
    with pytest.raises(MalformedSyntax) as exc:
        parse_expression("0.5*f1", F2)
    assert exc.value.offset == 1


def test_parse_unknown_variable():
    with pytest.raises(UnknownVariable):
        parse_expression("f1 + g7", F2)


def test_parse_stray_division():
    with pytest.raises(MalformedSyntax):
        parse_expression("f1/f2", F2)


def test_parse_hyperquadric_stratum_constraint():
    p = parse_expression("z1*zb1 - z2*zb2", CX, complexified=True)
    z1 = CX.index("z1")
    zb1 = CX.index("zb1")
    e = [0] * len(CX)
    e[z1] = 1
    e[zb1] = 1
    assert p.terms[tuple(e)] == 1
    assert len(p.terms) == 2
    assert conjugate_involution(p) == p  # real constraint


def test_parse_imaginary_unit_complex_mode_only():
    p = parse_expression("i*w1", CX, complexified=True)
    assert list(p.terms.values()) == [gaussian(0, 1)]
    with pytest.raises(UnknownVariable):
        parse_expression("i*f1", F2)


def test_differentiate_power_rule():
    p = parse_expression("f1^2 + 2*f1*f2", F2)
    assert p.differentiate("f1") == parse_expression("2*f1 + 2*f2", F2)
    assert parse_expression("f1*f2", ("f1", "f2", "f3")).differentiate("f3").is_zero()


def test_differentiate_pseudo_ellipsoid_gradient():
    ys = tuple(f"y{i}" for i in range(1, 7))
    p = Polynomial.var(ys, "y3") ** 4  # alpha3 = 1, k3 = 2
    assert p.differentiate("y3") == Polynomial.var(ys, "y3").__pow__(3).scale(4)


def test_evaluate_examples():
    p = parse_expression("f1^2 - f2", F2)
    assert p.evaluate((3, 4)) == 5
    vs = tuple(f"f{i}" for i in range(1, 7))
    rho = parse_expression("f5 + f1^2 + f2^2 - f3^2 - f4^2", vs)
    assert rho.evaluate((1, 0, 1, 0, 0, 0)) == 0
    assert Polynomial.zero(F2).evaluate((7, 9)) == 0


def test_conjugate_involution_examples():
    p = parse_expression("z1^2*zb2", CX, complexified=True)
    assert conjugate_involution(p) == parse_expression("zb1^2*z2", CX,
                                                       complexified=True)
    q = parse_expression("i*w1", CX, complexified=True)
    assert conjugate_involution(q) == parse_expression("-i*wb1", CX,
                                                       complexified=True)
    with pytest.raises(NotComplexifiedMode):
        conjugate_involution(parse_expression("f1", F2))


def test_ratfn_common_denominator():
    vs = ("f1", "f2")
    f1 = RationalFunction(Polynomial.var(vs, "f1"))
    f2 = RationalFunction(Polynomial.var(vs, "f2"))
    s = 1 / f1 + 1 / f2
    assert s == RationalFunction(parse_expression("f1 + f2", vs),
                                 parse_expression("f1*f2", vs))


def test_ratfn_cross_multiplication_equality():
    vs = ("f1", "f2")
    lhs = RationalFunction(parse_expression("f1^2 - f2^2", vs),
                           parse_expression("f1 - f2", vs))
    assert ratfn_arithmetic(lhs, RationalFunction(parse_expression("f1 + f2", vs)),
                            "equal")


def test_ratfn_division_by_zero_function():
    vs = ("f1",)
    one = RationalFunction.from_const(vs, 1)
    zero = RationalFunction.from_const(vs, 0)
    with pytest.raises(DivisionByZeroFunction):
        ratfn_arithmetic(one, zero, "div")


def test_gamma_symbolic_matches_pointwise():
    # gamma^1_3 of the hyperquadric as a rational function equals its
    # pointwise evaluations at 20 random chart points
    from diskeds.geometry import HypersurfaceProblem, complex_standard, compute_gamma_beta
    vs = tuple(f"f{i}" for i in range(1, 7))
    rho = parse_expression("f5 + f1^2 + f2^2 - f3^2 - f4^2", vs)
    prob = HypersurfaceProblem(rho, complex_standard(3, vs), (1, 2))
    sym = compute_gamma_beta(prob)
    rng = random.Random(0)
    hits = 0
    while hits < 20:
        pt = tuple(Fraction(rng.randint(-4, 4)) for _ in range(6))
        if sym.D.evaluate(pt) == 0:
            continue
        pw = compute_gamma_beta(prob, pt)
        assert sym.gamma1[0].evaluate(pt) == pw.gamma1[0]
        hits += 1


# ---------------------------------------------------------------------
# properties

names = st.sampled_from(["f1", "f2", "f3"])
V3 = ("f1", "f2", "f3")


@st.composite
def polys(draw, variables=V3, maxdeg=3):
    terms = {}
    for _ in range(draw(st.integers(0, 5))):
        exps = tuple(draw(st.integers(0, maxdeg)) for _ in variables)
        coeff = Fraction(draw(st.integers(-9, 9)), draw(st.integers(1, 9)))
        if coeff:
            terms[exps] = coeff
    return Polynomial(variables, terms)


@given(polys(), polys(), polys())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + q == q + p
    assert p * q == q * p


@given(polys(), polys(), names)
@settings(max_examples=60, deadline=None)
def test_product_rule(p, q, v):
    assert (p * q).differentiate(v) == \
        p.differentiate(v) * q + p * q.differentiate(v)


@given(polys())
@settings(max_examples=80, deadline=None)
def test_print_parse_round_trip(p):
    text = print_polynomial(p)
    assert parse_expression(text, V3) == p


@given(polys(), polys(), st.tuples(st.integers(-5, 5), st.integers(-5, 5),
                                   st.integers(-5, 5)))
@settings(max_examples=60, deadline=None)
def test_evaluate_is_homomorphism(p, q, pt):
    assert (p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt)
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)


@st.composite
def cx_polys(draw):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        exps = tuple(draw(st.integers(0, 2)) for _ in CX)
        coeff = GaussianRational(Fraction(draw(st.integers(-5, 5))),
                                 Fraction(draw(st.integers(-5, 5))))
        if coeff:
            terms[exps] = coeff
    return Polynomial(CX, terms)


@given(cx_polys())
@settings(max_examples=60, deadline=None)
def test_conjugation_is_involution(p):
    assert conjugate_involution(conjugate_involution(p)) == p


@given(cx_polys())
@settings(max_examples=40, deadline=None)
def test_complexified_round_trip(p):
    assert parse_expression(print_polynomial(p), CX, complexified=True) == p
