"""Jet prolongation, strata, involution loops, Levi form, conversions."""
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from diskeds.errors import ProbeViolatesStratum
from diskeds.exact import gaussian
from diskeds.expr import Polynomial, conjugate_involution, parse_expression, print_polynomial
from diskeds.geometry import complex_standard
from diskeds.jets import (
    complexify,
    curve_probe,
    d_t,
    d_tbar,
    involution_loop,
    jet_table,
    jet_to_probe,
    levi_form,
    make_system,
    probe_from_values,
    probe_satisfies,
    prolong_constraints,
    realify,
    reduce_redundant,
    stratum_analyze,
    substitute_vanishing,
    var_jet_order,
)
from diskeds.reports import build_problem, load_problem

V6 = tuple(f"f{i}" for i in range(1, 7))


def cx(text, order=2, n=3):
    return parse_expression(text, jet_table(n, order), complexified=True)


def test_dt_basic_rules():
    assert d_t(cx("w3")) == cx("w3_1")
    assert d_t(cx("z2")) == cx("w2")
    assert d_t(cx("zb1")).is_zero()
    assert d_t(cx("wb2_1")).is_zero()


def test_dt_leibniz_z1_pattern():
    g = cx("2*z1*w1 + 3*z2^2*w2")
    assert d_t(g) == cx("2*w1^2 + 2*z1*w1_1 + 6*z2*w2^2 + 3*z2^2*w2_1")


def test_dt_hyperquadric_prolonged_lines():
    g = cx("w1*wb1 - w2*wb2")
    assert d_t(g) == cx("w1_1*wb1 - w2_1*wb2")
    assert d_tbar(d_t(g)) == cx("w1_1*wb1_1 - w2_1*wb2_1")


@st.composite
def cx_polys3(draw):
    table = jet_table(2, 2)
    big = jet_table(2, 4)
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        exps = tuple(draw(st.integers(0, 1)) for _ in table)
        coeff = gaussian(draw(st.integers(-4, 4)), draw(st.integers(-4, 4)))
        if coeff:
            terms[exps] = coeff
    return Polynomial(table, terms).extend_to(big)


@given(cx_polys3())
@settings(max_examples=40, deadline=None)
def test_dt_dtbar_commute(p):
    assert d_t(d_tbar(p)) == d_tbar(d_t(p))


@given(cx_polys3())
@settings(max_examples=40, deadline=None)
def test_conjugation_intertwines_derivations(p):
    assert conjugate_involution(d_t(p)) == d_tbar(conjugate_involution(p))


def _stratum(name, sname):
    lp = build_problem(load_problem(name), name)
    return lp.strata[sname]


def test_prolong_adds_first_prolongation_equalities():
    system, probes = _stratum("hyperquadric", "nonzero_velocity")
    P = prolong_constraints(system)
    want = [
        cx("w3_1 + w1_1*zb1 - w2_1*zb2", order=P.order),
        cx("w1_1*wb1 - w2_1*wb2", order=P.order),
        cx("w1_1*wb1_1 - w2_1*wb2_1", order=P.order),
    ]
    eqs = set(P.equalities)
    for g in want:
        assert g in eqs
    assert P.order == system.order + 1


def test_reduce_redundant_marks_square_norm_rows():
    # |w1^(1)|^2 - |w2^(1)|^2 has no affine part in the top jets, hence is
    # retained; the linear w^(2)-row drop happens one order up
    system, probes = _stratum("hyperquadric", "nonzero_velocity")
    probe = probes["Q0"]
    P = prolong_constraints(system)
    from diskeds.jets import extend_probe
    ext = extend_probe(P, probe)
    reduced, dropped = reduce_redundant(P, [ext])
    sq = cx("w1_1*wb1_1 - w2_1*wb2_1", order=P.order)
    assert sq in set(reduced.equalities)
    P2 = prolong_constraints(P)
    ext2 = extend_probe(P2, ext)
    reduced2, dropped2 = reduce_redundant(P2, [ext2])
    mixed_row = cx("w1_2*wb1_1 - w2_2*wb2_1", order=P2.order)
    assert mixed_row in set(dropped2)


def test_stratum_dims_fixtures():
    system, probes = _stratum("hyperquadric", "nonzero_velocity")
    rep = stratum_analyze(system, probes["Q0"])
    assert rep.tableau_dim == 3 and not rep.complex_split
    assert rep.torsion_free
    assert rep.next_dim == 2
    assert rep.verdict == "continue"

    system, probes = _stratum("cusp", "generic")
    rep_gen = stratum_analyze(system, probes["P_generic"])
    assert rep_gen.tableau_dim == 1 and rep_gen.complex_split
    assert rep_gen.torsion_free and rep_gen.verdict == "involutive_at_order_q"
    rep_org = stratum_analyze(system, probes["P_origin"],
                              reference_dims=[rep_gen.tableau_dim])
    assert rep_org.tableau_dim == 2
    assert not rep_org.torsion_free
    assert any("not locally constant" in w for w in rep_org.warnings)


def test_tableau_dim_bounded_by_2n_minus_2():
    for name, sname in [("hyperquadric", "nonzero_velocity"),
                        ("cusp", "generic"), ("cusp", "vertex"),
                        ("flat", "base")]:
        system, probes = _stratum(name, sname)
        for probe in probes.values():
            rep = stratum_analyze(system, probe)
            assert rep.tableau_dim <= 2 * system.n - 2


def test_involution_loop_hyperquadric_chain():
    system, probes = _stratum("hyperquadric", "nonzero_velocity")
    chain = involution_loop(system, probes["Q0"], max_rounds=3)
    assert chain.dims == (3, 2, 2)
    assert chain.verdict == "involutive"
    assert all(r.torsion_free for r in chain.reports)
    assert all(b <= a for a, b in zip(chain.dims, chain.dims[1:]))


def test_involution_loop_flat():
    system, probes = _stratum("flat", "base")
    chain = involution_loop(system, probes["Q0"])
    assert chain.verdict == "involutive"
    assert chain.dims == (2, 2)
    assert chain.rounds == 1


def test_involution_loop_cusp_vertex_collapse():
    system, probes = _stratum("cusp", "vertex")
    chain = involution_loop(system, probes["R0"], max_rounds=4)
    assert chain.verdict == "involutive"
    assert chain.reports[-1].trivial_velocities
    final = chain.reports[-1].next_system
    low = sorted(print_polynomial(p) for p in final.equalities
                 if all(var_jet_order(v) <= 1 for v in p.used_variables()))
    assert low == ["w1", "w2", "w3", "wb1", "wb2", "wb3",
                   "z1", "z2", "z3 + zb3", "zb1", "zb2"]


def test_probe_validation():
    system, probes = _stratum("hyperquadric", "nonzero_velocity")
    bad = probe_from_values(3, 1, [1, 1, 1], [[1, 1, 0]])  # rho != 0
    with pytest.raises(ProbeViolatesStratum):
        stratum_analyze(system, bad)
    # opening violation: w = 0
    zero_w = probe_from_values(3, 1, [1, 1, 0], [[0, 0, 0]])
    with pytest.raises(ProbeViolatesStratum):
        stratum_analyze(system, zero_w)


def test_substitute_vanishing_collapses():
    n = 3
    table = jet_table(n, 1)
    rho = cx("1/2*z3 + 1/2*zb3 + (z1^2 - z2^3)*(zb1^2 - zb2^3)", order=1)
    sys0 = make_system(n, [rho, cx("z1", order=1), cx("z2", order=1)])
    out = substitute_vanishing(sys0)
    texts = {print_polynomial(p) for p in out.equalities}
    assert "z3 + zb3" in texts  # rho collapsed to the linear part (monic)


def test_levi_form_fixtures():
    J = complex_standard(3, V6)
    flat = parse_expression("f5", V6)
    for p in [(1, 0, 0, 0, 0, 0), (0, 1, 2, 3, 4, 5)]:
        v, warn = levi_form(flat, J, (0,) * 6, p)
        assert v == 0 and warn == ()
    hyper = parse_expression("2*f5 + f1^2 + f2^2 - f3^2 - f4^2", V6)
    v, _ = levi_form(hyper, J, (1, 0, 1, 0, 0, 0), (1, 0, 1, 0, 0, 0))
    assert v == 0
    ball = parse_expression("2*f5 + f1^2 + f2^2 + f3^2 + f4^2", V6)
    v, _ = levi_form(ball, J, (0,) * 6, (1, 0, 0, 0, 0, 0))
    assert v == 4


def test_levi_form_constant_J_is_hessian_trace():
    # with constant J the DJ terms vanish: value = D2r(p,p) + D2r(Jp,Jp)
    rng = random.Random(50)
    J = complex_standard(3, V6)
    from oracles import random_polynomial
    rho = random_polynomial(rng, V6, 3, 8)
    f0 = tuple(Fraction(rng.randint(-2, 2)) for _ in range(6))
    Jm = [[e.evaluate(f0) for e in row] for row in J.entries]
    hess = [[rho.differentiate(a).differentiate(b).evaluate(f0)
             for b in V6] for a in V6]
    for _ in range(5):
        p = [Fraction(rng.randint(-3, 3)) for _ in range(6)]
        Jp = [sum(Jm[r][s] * p[s] for s in range(6)) for r in range(6)]
        expect = (sum(hess[i][j] * p[i] * p[j] for i in range(6) for j in range(6))
                  + sum(hess[i][j] * Jp[i] * Jp[j] for i in range(6) for j in range(6)))
        got, _ = levi_form(rho, J, f0, p)
        assert got == expect


def test_levi_form_vanishes_on_t8_jets():
    # |w1| = |w2| in real coordinates: Levi = 4(|w1|^2 - |w2|^2) for the
    # hyperquadric, so it vanishes exactly on the stratum jets
    hyper = parse_expression("2*f5 + f1^2 + f2^2 - f3^2 - f4^2", V6)
    J = complex_standard(3, V6)
    rng = random.Random(51)
    for _ in range(10):
        p = [Fraction(rng.randint(-3, 3)) for _ in range(6)]
        v, _ = levi_form(hyper, J, (1, 0, 1, 0, 0, 0), p)
        w1sq = p[0] ** 2 + p[1] ** 2
        w2sq = p[2] ** 2 + p[3] ** 2
        assert v == 4 * (w1sq - w2sq)


def test_nonconstant_J_levi_form_terms():
    # J with polynomial entries and J^2 = -I at the point: DJ terms enter;
    # a wrong J produces the warning
    from diskeds.geometry import structure_from_entries
    from diskeds.expr import RationalFunction
    one = RationalFunction.from_const(V6, 1)
    f1 = RationalFunction(Polynomial.var(V6, "f1"))
    rows = [[one * 0 for _ in range(6)] for _ in range(6)]
    for i in range(3):
        rows[2 * i][2 * i + 1] = -one - f1 * f1 if i == 0 else -one
        rows[2 * i + 1][2 * i] = one
    J = structure_from_entries(3, rows)
    rho = parse_expression("2*f5 + f1^2*f3 + f2^2", V6)
    v, warn = levi_form(rho, J, (0, 0, 1, 0, 0, 0), (1, 1, 0, 0, 0, 0))
    assert warn == ()  # J^2 = -I holds at f1 = 0
    v2, warn2 = levi_form(rho, J, (1, 0, 1, 0, 0, 0), (1, 0, 0, 0, 0, 0))
    assert warn2  # J^2 != -I away from f1 = 0


def test_complexify_realify_roundtrip():
    hyper = parse_expression("2*f5 + f1^2 + f2^2 - f3^2 - f4^2", V6)
    cxp = complexify(hyper)
    assert print_polynomial(cxp) == "z1*zb1 - z2*zb2 + z3 + zb3"
    assert realify(cxp, V6) == hyper


def test_jet_to_probe_matches_stratum():
    lp = build_problem(load_problem("hyperquadric"), "hyperquadric")
    system, probes = lp.strata["nonzero_velocity"]
    jet = lp.jets["J0"]
    probe = jet_to_probe(lp.problem, jet)
    assert probe_satisfies(system, probe, strict=False)
    assert probe == probes["Q0"]


def test_flat_disk_satisfies_prolonged_system():
    lp = build_problem(load_problem("flat"), "flat")
    system, _ = lp.strata["base"]
    S = system
    for _ in range(3):
        S = prolong_constraints(S)
    t = Polynomial.var(("t",), "t")
    comps = [t, Polynomial.zero(("t",)), Polynomial.zero(("t",))]
    for t0 in (Fraction(0), Fraction(1, 2), Fraction(-2, 3)):
        assert probe_satisfies(S, curve_probe(3, S.order, comps, t0),
                               strict=False)


def test_cusp_escape_curve_on_t6_closure():
    # t -> (t^3, t^2, i a) lies in the cusp hypersurface; it satisfies the
    # prolonged equalities even at the closure point the loop flags
    lp = build_problem(load_problem("cusp"), "cusp")
    system, _ = lp.strata["generic"]
    P = prolong_constraints(system)
    t = Polynomial.var(("t",), "t")
    comps = [t ** 3, t ** 2, Polynomial.const(("t",), gaussian(0, 1))]
    for t0 in (Fraction(1, 3), Fraction(-1, 2)):
        assert probe_satisfies(P, curve_probe(3, P.order, comps, t0),
                               strict=False)


def test_involution_loop_rounds_exhausted_is_a_value():
    system, probes = _stratum("hyperquadric", "nonzero_velocity")
    chain = involution_loop(system, probes["Q0"], max_rounds=1)
    assert chain.verdict == "rounds_exhausted"
    assert chain.rounds == 1 and chain.dims == (3,)


def test_hyperquadric_second_probe_same_chain():
    system, probes = _stratum("hyperquadric", "nonzero_velocity")
    chain = involution_loop(system, probes["Q1"], max_rounds=3)
    assert chain.dims == (3, 2, 2)
    assert chain.verdict == "involutive"


def test_small_dimension_flat_model():
    # n = 2 hyperplane Re z2 = 0: one linear velocity constraint
    n = 2
    table = jet_table(n, 1)
    rho = parse_expression("1/2*z2 + 1/2*zb2", table, complexified=True)
    w2 = parse_expression("w2", table, complexified=True)
    system = make_system(n, [rho, w2])
    probe = probe_from_values(n, 1, [1, 0], [[1, 0]])
    rep = stratum_analyze(system, probe)
    assert rep.tableau_dim == 1 and rep.complex_split
    assert rep.torsion_free
    assert rep.verdict == "involutive_at_order_q"
