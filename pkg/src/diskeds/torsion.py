"""Structure-equation coefficients, torsion and its absorbability.

The torsion coefficients c^k_{1,2} are the dx1^dx2 components of d(theta^k)
modulo the ideal, quadratic forms in the reduced jet.  Writing beta_full
for all 2n rows (alpha_{i,1} gamma^1_j + alpha_{i,2} gamma^2_j + alpha_{i,j}),
the coefficient of p^j p^j' is

  k = 1, 2:   sum_m dgamma^k_j/df_m * beta_full[m][j']
              - ( dbeta_k,j/df_1 * gamma^1_j' + dbeta_k,j/df_2 * gamma^2_j'
                  + dbeta_k,j/df_j' )
  k >= 3:     - ( dbeta_k,j/df_1 * gamma^1_j' + dbeta_k,j/df_2 * gamma^2_j'
                  + dbeta_k,j/df_j' )

(the contracted first sum and the df_j' reading are fixed against an
independent exterior-derivative expansion in the test suite).  Torsion is
absorbable when the two-row system D1 v = residual_1, D2 v = residual_2
is solvable: for D0 = 0 both residuals must vanish; otherwise, since
D1 = rho_2 D0 and D2 = -rho_1 D0 exactly, the single cross condition
rho_1 * residual_1 + rho_2 * residual_2 = 0 decides.  Both the solvability
test and the closed form are evaluated and must agree.

The complex-case closed forms (first-order differential operators P^1_k,
P^2_k acting on the gammas, the B coefficient tables, the two quadratic
forms, the dimension-6 discriminants and the pseudo-ellipsoid product
condition) are implemented against the same exact substrate.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CrossCheckMismatch, SingularD, WrongDimension
from .exact import rat
from .expr import Polynomial, RationalFunction
from .geometry import (
    FirstJetPoint,
    HypersurfaceProblem,
    complex_standard,
    compute_gamma_beta,
)
from .involutivity import compute_D_vectors
from .linalg import det, solve_particular


# ----------------------------------------------------------------------
# general structure equations


@dataclass(frozen=True)
class StructureEquationData:
    """Structure-equation coefficient table and torsion forms at a jet."""

    A_coeffs: dict          # (k, j, i) -> value, k=1..2n, j=3..2n, i=1,2
    c_matrices: tuple       # 2n symmetric (2n-2)x(2n-2) Fraction matrices
    c_values: tuple         # c^k_{1,2} evaluated at the jet (length 2n)
    gamma1: tuple
    gamma2: tuple
    rho_grad: tuple


def _symmetrize(raw):
    m = len(raw)
    half = Fraction(1, 2)
    return tuple(tuple((raw[a][b] + raw[b][a]) * half for b in range(m))
                 for a in range(m))


def _coefficient_tables(problem: HypersurfaceProblem, pt_int):
    """Values and f-gradients of gamma and beta_full at the internal point."""
    gb = compute_gamma_beta(problem)  # symbolic
    if gb.D.evaluate(pt_int) == 0:
        raise SingularD("D = 0 at this point; try another distinguished pair")
    g1v, g1d, g2v, g2d = [], [], [], []
    for r in gb.gamma1:
        v, grad = r.value_and_gradient(pt_int)
        g1v.append(v)
        g1d.append(grad)
    for r in gb.gamma2:
        v, grad = r.value_and_gradient(pt_int)
        g2v.append(v)
        g2d.append(grad)
    bv, bd = [], []
    for row in gb.beta_full:
        vals, grads = [], []
        for r in row:
            v, grad = r.value_and_gradient(pt_int)
            vals.append(v)
            grads.append(grad)
        bv.append(tuple(vals))
        bd.append(tuple(grads))
    return gb, (tuple(g1v), tuple(g1d)), (tuple(g2v), tuple(g2d)), tuple(bv), tuple(bd)


def structure_equation_coefficients(problem: HypersurfaceProblem,
                                    jet: FirstJetPoint) -> StructureEquationData:
    two_n = problem.two_n
    m = two_n - 2
    order = problem.internal_order()
    pt_int = tuple(jet.f[i] for i in order)
    gb, (g1v, g1d), (g2v, g2d), bv, bd = _coefficient_tables(problem, pt_int)

    def N(i):
        # - on the caller; raw row: dbeta_{i,j}/df contracted with gammas
        out = []
        for j in range(m):
            grad = bd[i][j]
            row = []
            for jp in range(m):
                row.append(grad[0] * g1v[jp] + grad[1] * g2v[jp] + grad[jp + 2])
            out.append(row)
        return out

    raw = []
    for k in range(2):
        gd = g1d if k == 0 else g2d
        nk = N(k)
        mat = []
        for j in range(m):
            row = []
            for jp in range(m):
                s = sum(gd[j][mm] * bv[mm][jp] for mm in range(two_n))
                row.append(s - nk[j][jp])
            mat.append(row)
        raw.append(mat)
    for i in range(2, two_n):
        ni = N(i)
        raw.append([[-ni[j][jp] for jp in range(m)] for j in range(m)])

    c_matrices = tuple(_symmetrize(mat) for mat in raw)
    p = tuple(Fraction(x) for x in jet.p_reduced)
    c_values = tuple(
        sum(raw[k][j][jp] * p[j] * p[jp] for j in range(m) for jp in range(m))
        for k in range(two_n))
    A_coeffs = {}
    for j in range(m):
        A_coeffs[(1, j + 3, 1)] = -g1v[j]
        A_coeffs[(2, j + 3, 1)] = -g2v[j]
        for i in range(2, two_n):
            A_coeffs[(i + 1, j + 3, 1)] = Fraction(-1) if i == j + 2 else Fraction(0)
        for k in range(two_n):
            A_coeffs[(k + 1, j + 3, 2)] = -bv[k][j]
    return StructureEquationData(A_coeffs, c_matrices, c_values,
                                 tuple(g1v), tuple(g2v),
                                 tuple(g.evaluate(pt_int) for g in
                                       (gb.rho_int.differentiate(v) for v in gb.internal_vars)))


def structure_coefficient_forms(problem: HypersurfaceProblem):
    """Symbolic torsion quadratic-form matrices (RationalFunction entries)."""
    gb = compute_gamma_beta(problem)
    two_n = problem.two_n
    m = two_n - 2
    fvars = gb.internal_vars
    dgamma = [[[r.differentiate(v) for v in fvars] for r in gb.gamma1],
              [[r.differentiate(v) for v in fvars] for r in gb.gamma2]]
    raw = []
    for k in range(2):
        mat = []
        for j in range(m):
            row = []
            for jp in range(m):
                s = sum((dgamma[k][j][mm] * gb.beta_full[mm][jp]
                         for mm in range(two_n)),
                        RationalFunction.from_const(fvars, 0))
                db = [gb.beta_full[k][j].differentiate(v) for v in fvars]
                s = s - (db[0] * gb.gamma1[jp] + db[1] * gb.gamma2[jp] + db[jp + 2])
                row.append(s)
            mat.append(row)
        raw.append(mat)
    for i in range(2, two_n):
        mat = []
        for j in range(m):
            db = [gb.beta_full[i][j].differentiate(v) for v in fvars]
            mat.append([-(db[0] * gb.gamma1[jp] + db[1] * gb.gamma2[jp] + db[jp + 2])
                        for jp in range(m)])
        raw.append(mat)
    return gb, raw


# ----------------------------------------------------------------------
# absorbability


@dataclass(frozen=True)
class TorsionVerdict:
    case: str                # "D0_zero" | "D0_nonzero"
    residual_1: Fraction
    residual_2: Fraction
    absorbable: bool
    witness_v: tuple = None  # one solution of D0 v = residual, minimal support


def torsion_absorbable(problem: HypersurfaceProblem, jet: FirstJetPoint) -> TorsionVerdict:
    sed = structure_equation_coefficients(problem, jet)
    gb = compute_gamma_beta(problem, jet.f)
    dv = compute_D_vectors(gb)
    m = problem.two_n - 2
    res1 = sed.c_values[0] - sum(sed.gamma1[i] * sed.c_values[i + 2] for i in range(m))
    res2 = sed.c_values[1] - sum(sed.gamma2[i] * sed.c_values[i + 2] for i in range(m))
    r1, r2 = gb.rho_grad[0], gb.rho_grad[1]
    if all(x == 0 for x in dv.D0):
        absorbable = res1 == 0 and res2 == 0
        return TorsionVerdict("D0_zero", res1, res2, absorbable)
    solution = solve_particular([list(dv.D1), list(dv.D2)], [res1, res2])
    absorbable = solution is not None
    if absorbable != (r1 * res1 + r2 * res2 == 0):
        raise CrossCheckMismatch(
            "absorbability solvability disagrees with the rho cross condition")
    witness = None
    if absorbable:
        target = res1 / r2 if r2 != 0 else -res2 / r1
        v = [Fraction(0)] * m
        for k, x in enumerate(dv.D0):
            if x != 0:
                v[k] = target / x
                break
        witness = tuple(v)
    return TorsionVerdict("D0_nonzero", res1, res2, absorbable, witness)


# ----------------------------------------------------------------------
# complex case closed forms


@dataclass(frozen=True)
class ComplexTorsionData:
    n: int
    gamma1: tuple        # symbolic or evaluated, indices j = 3..2n
    gamma2: tuple
    B_lower: dict        # (j, k) -> value, j,k = 2..n
    B_upper: dict
    c1: tuple            # symmetric quadratic-form matrices in p^3..p^{2n}
    c2: tuple


def _complex_problem(rho: Polynomial) -> HypersurfaceProblem:
    two_n = len(rho.vars)
    if two_n % 2 or two_n < 4:
        raise WrongDimension(f"need an even number >= 4 of variables, got {two_n}")
    return HypersurfaceProblem(rho, complex_standard(two_n // 2, rho.vars), (1, 2))


def complex_gammas(rho: Polynomial):
    """Symbolic gammas for the standard complex structure (pair 1,2)."""
    problem = _complex_problem(rho)
    gb = compute_gamma_beta(problem)
    return problem, gb


def _p_operator(which, k, gamma1, gamma2, fvars, target):
    """P^1_k / P^2_k applied to a RationalFunction in the y variables."""
    g1_2k = gamma1[2 * k - 3]   # index j=2k -> tuple slot 2k-3
    g2_2k = gamma2[2 * k - 3]
    d1 = target.differentiate(fvars[0])
    d2 = target.differentiate(fvars[1])
    if which == 1:
        return g2_2k * d1 - g1_2k * d2 + target.differentiate(fvars[2 * k - 2])
    return g1_2k * d1 + g2_2k * d2 + target.differentiate(fvars[2 * k - 1])


def complex_B_coefficients(rho: Polynomial, f_point=None) -> ComplexTorsionData:
    """B_{j,k} = P^2_k(gamma^1_{2j}) + P^1_k(gamma^2_{2j}),
    B^{j,k} = P^2_k(gamma^2_{2j}) - P^1_k(gamma^1_{2j}), for j,k = 2..n."""
    problem, gb = complex_gammas(rho)
    n = problem.n
    fvars = gb.internal_vars
    if f_point is not None:
        f_point = tuple(Fraction(x) for x in f_point)
        r1 = gb.rho_grad[0].num.evaluate(f_point)
        r2 = gb.rho_grad[1].num.evaluate(f_point)
        if r1 * r1 + r2 * r2 == 0:
            raise SingularD("rho_1^2 + rho_2^2 = 0 at the point")
    B_lower, B_upper = {}, {}
    for j in range(2, n + 1):
        g1_2j = gb.gamma1[2 * j - 3]
        g2_2j = gb.gamma2[2 * j - 3]
        for k in range(2, n + 1):
            low = (_p_operator(2, k, gb.gamma1, gb.gamma2, fvars, g1_2j)
                   + _p_operator(1, k, gb.gamma1, gb.gamma2, fvars, g2_2j))
            up = (_p_operator(2, k, gb.gamma1, gb.gamma2, fvars, g2_2j)
                  - _p_operator(1, k, gb.gamma1, gb.gamma2, fvars, g1_2j))
            if f_point is not None:
                low = low.evaluate(f_point)
                up = up.evaluate(f_point)
            B_lower[(j, k)] = low
            B_upper[(j, k)] = up
    c1, c2 = quadratics_from_B(n, B_lower, B_upper)
    gamma1 = gb.gamma1 if f_point is None else tuple(g.evaluate(f_point) for g in gb.gamma1)
    gamma2 = gb.gamma2 if f_point is None else tuple(g.evaluate(f_point) for g in gb.gamma2)
    return ComplexTorsionData(n, gamma1, gamma2, B_lower, B_upper, c1, c2)


def quadratics_from_B(n: int, B_lower: dict, B_upper: dict):
    """Assemble the two torsion quadratic forms as symmetric matrices over
    the reduced jet variables p^3..p^{2n} (slot a <-> p^{a+3})."""
    m = 2 * n - 2
    zero = B_lower[(2, 2)] * 0
    raw1 = [[zero for _ in range(m)] for _ in range(m)]
    raw2 = [[zero for _ in range(m)] for _ in range(m)]
    for j in range(2, n + 1):
        a, b = 2 * j - 4, 2 * j - 3     # p^{2j-1}, p^{2j}
        for k in range(2, n + 1):
            c, d = 2 * k - 4, 2 * k - 3
            up = B_upper[(j, k)]
            low = B_lower[(j, k)]
            # c1: [p^{2j-1}p^{2k-1} + p^{2j}p^{2k}] B^{j,k}
            #     + [p^{2j}p^{2k-1} - p^{2j-1}p^{2k}] B_{j,k}
            raw1[a][c] = raw1[a][c] + up
            raw1[b][d] = raw1[b][d] + up
            raw1[b][c] = raw1[b][c] + low
            raw1[a][d] = raw1[a][d] - low
            # c2: -[..] B_{j,k} + [..] B^{j,k}
            raw2[a][c] = raw2[a][c] - low
            raw2[b][d] = raw2[b][d] - low
            raw2[b][c] = raw2[b][c] + up
            raw2[a][d] = raw2[a][d] - up
    return _symmetrize(raw1), _symmetrize(raw2)


def complex_torsion_quadratics(rho: Polynomial, f_point):
    data = complex_B_coefficients(rho, f_point)
    return data.c1, data.c2


def evaluate_form(matrix, p):
    return sum(matrix[a][b] * p[a] * p[b]
               for a in range(len(matrix)) for b in range(len(matrix)))


def form_definiteness(matrix) -> str:
    """'positive_definite' | 'negative_definite' | 'not_definite' via
    exact leading principal minors."""
    m = len(matrix)
    minors = [det([row[:k] for row in matrix[:k]]) for k in range(1, m + 1)]
    if all(x > 0 for x in minors):
        return "positive_definite"
    if all((x < 0 if k % 2 == 0 else x > 0) for k, x in enumerate(minors)):
        return "negative_definite"
    return "not_definite"


# ----------------------------------------------------------------------
# dimension 6


@dataclass(frozen=True)
class Dim6Report:
    delta1: Fraction
    delta2: Fraction
    sign1: int
    sign2: int
    c1_definiteness: str
    c2_definiteness: str
    verdict: str   # necessary_condition_holds | necessary_condition_violated


def dim6_definiteness(rho: Polynomial, f_point) -> Dim6Report:
    if len(rho.vars) != 6:
        raise WrongDimension("the dimension-6 test needs exactly 6 variables")
    data = complex_B_coefficients(rho, f_point)
    Bl, Bu = data.B_lower, data.B_upper
    delta1 = (4 * Bl[(2, 2)] * Bl[(3, 3)]
              - (Bl[(2, 3)] + Bl[(3, 2)]) ** 2
              - (Bu[(2, 3)] - Bu[(3, 2)]) ** 2)
    delta2 = (4 * Bu[(2, 2)] * Bu[(3, 3)]
              - (Bu[(2, 3)] + Bu[(3, 2)]) ** 2
              - (Bl[(2, 3)] - Bl[(3, 2)]) ** 2)
    d1 = form_definiteness(data.c1)
    d2 = form_definiteness(data.c2)
    holds = d1 == "not_definite" and d2 == "not_definite"
    # completed-square branch must agree with the minor test where it applies
    if Bu[(2, 2)] != 0 and (delta2 > 0) != (d1 != "not_definite"):
        raise CrossCheckMismatch("dim-6 discriminant disagrees with c1 definiteness")
    if Bl[(2, 2)] != 0 and (delta1 > 0) != (d2 != "not_definite"):
        raise CrossCheckMismatch("dim-6 discriminant disagrees with c2 definiteness")
    sign = lambda x: (x > 0) - (x < 0)
    verdict = "necessary_condition_holds" if holds else "necessary_condition_violated"
    return Dim6Report(delta1, delta2, sign(delta1), sign(delta2), d1, d2, verdict)


def dim6_completed_square(B_values: dict, variables=("p3", "p4", "p5", "p6")):
    """The completed-square forms of the two dimension-6 torsion quadratics.

    ``B_values`` maps ('lower'|'upper', j, k) to rationals; the leading
    blocks require B^{2,2} != 0 (for c1) and B_{2,2} != 0 (for c2).
    Returns (c1, c2) as Polynomials for symbolic comparison with the
    bilinear expansion.
    """
    P = {v: Polynomial.var(variables, v) for v in variables}
    Bl = {k: rat(v) for k, v in B_values.items() if k[0] == "lower"}
    Bu = {k: rat(v) for k, v in B_values.items() if k[0] == "upper"}
    bu22, bu33 = Bu[("upper", 2, 2)], Bu[("upper", 3, 3)]
    bl22, bl33 = Bl[("lower", 2, 2)], Bl[("lower", 3, 3)]
    bu23, bu32 = Bu[("upper", 2, 3)], Bu[("upper", 3, 2)]
    bl23, bl32 = Bl[("lower", 2, 3)], Bl[("lower", 3, 2)]
    if bu22 == 0 or bl22 == 0:
        raise WrongDimension("completed-square branch needs B_{2,2}, B^{2,2} nonzero")
    p3, p4, p5, p6 = P["p3"], P["p4"], P["p5"], P["p6"]
    e1 = (bu23 + bu32) / (2 * bu22)
    f1 = (bl23 - bl32) / (2 * bu22)
    sq1 = p3 + p5.scale(e1) - p6.scale(f1)
    sq2 = p4 + p6.scale(e1) + p5.scale(f1)
    rem1 = (4 * bu22 * bu33 - (bu23 + bu32) ** 2 - (bl23 - bl32) ** 2) / (4 * bu22)
    c1 = (sq1 * sq1 + sq2 * sq2).scale(bu22) + (p5 * p5 + p6 * p6).scale(rem1)
    e2 = (bl23 + bl32) / (2 * bl22)
    f2 = (bu23 - bu32) / (2 * bl22)
    sq3 = p3 + p5.scale(e2) + p6.scale(f2)
    sq4 = p4 + p6.scale(e2) - p5.scale(f2)
    rem2 = (-4 * bl22 * bl33 + (bl23 + bl32) ** 2 + (bu23 - bu32) ** 2) / (4 * bl22)
    c2 = (sq3 * sq3 + sq4 * sq4).scale(-bl22) + (p5 * p5 + p6 * p6).scale(rem2)
    return c1, c2


# ----------------------------------------------------------------------
# pseudo-ellipsoids


@dataclass(frozen=True)
class PseudoEllipsoidReport:
    v: tuple
    w: tuple
    L: Fraction
    holds: bool
    rho_value: Fraction
    off_surface: bool


def pseudo_ellipsoid_rho(alphas, ks) -> Polynomial:
    variables = tuple(f"y{i}" for i in range(1, 7))
    p = Polynomial.zero(variables)
    for i in range(6):
        p = p + Polynomial.var(variables, variables[i]) ** (2 * ks[i]) * rat(alphas[i])
    return p


def pseudo_ellipsoid_check(alphas, ks, y_point) -> PseudoEllipsoidReport:
    """Single sign condition for the degenerate-pair branch of the
    six-dimensional diagonal examples; holds iff L <= 0."""
    alphas = tuple(rat(a) for a in alphas)
    ks = tuple(int(k) for k in ks)
    if len(alphas) != 6 or len(ks) != 6 or any(k < 1 for k in ks):
        raise WrongDimension("need 6 alphas and 6 positive integer exponents")
    y = tuple(rat(x) for x in y_point)
    if len(y) != 6:
        raise WrongDimension("need a 6-dimensional point")
    v = tuple(2 * alphas[i] * ks[i] * y[i] ** (2 * ks[i] - 1) for i in range(6))
    w = tuple(2 * ks[i] * (2 * ks[i] - 1) * alphas[i] * y[i] ** (2 * ks[i] - 2)
              for i in range(6))
    L = ((v[0] ** 2 + v[1] ** 2) * (w[2] + w[3]) * (w[4] + w[5])
         + (v[2] ** 2 + v[3] ** 2) * (w[0] + w[1]) * (w[4] + w[5])
         + (v[4] ** 2 + v[5] ** 2) * (w[0] + w[1]) * (w[2] + w[3]))
    rho_value = sum(alphas[i] * y[i] ** (2 * ks[i]) for i in range(6))
    return PseudoEllipsoidReport(v, w, L, L <= 0, rho_value, rho_value != 0)
