"""Polar-space linear algebra for integral flags and Kahler-regularity.

A candidate tangent plane is spanned by two vectors with x-components
a^1, a^2 and reduced-jet components c^1, c^2; the line E_1 is generated by
alpha*e_1 + beta*e_2, optionally perturbed by (eps_x, eps_theta, eps_p).
With the abbreviations

    A_1 = alpha a^1_1 + beta a^2_1 + eps_1      (and A_2 likewise)
    C_i = alpha c^1_i + beta c^2_i + eps''_i    (i = 3..2n)

the map F sends (v_1, v_2, v_{p^3}..v_{p^{2n}}) to the bilinear evaluations

    X_2       = A_1 v_2 - A_2 v_1
    X_i       = C_i v_1 - A_1 v_{p^i}
    X_{2n-2+i}= C_i v_2 - A_2 v_{p^i},

the rows of R are the relations C_i X_2 + A_2 X_i - A_1 X_{2n-2+i} = 0
cutting out Im(F), and G collects the structure-equation evaluations of
d(theta^k), k = 2..2n, on the X coordinates.  The x-derivatives inside G
are resolved by the chain rule through the full first jet: df/dx_1 = p_1
and df/dx_2 = A p_1 (this is the only reading that makes the coefficients
well-defined at a point).

Ker(g o f) is the polar space H(D') of the (perturbed) line, so the
stacked square system's determinant is nonzero exactly when the line
extends to no integral 2-plane.  A flag certifies a disk germ when its
plane E is an integral element with the independence form, H(E_1) = E
(one extension, dim 2), and that polar dimension survives the
deterministic epsilon samples -- sampled local constancy of the polar
rank, which is what Cartan-Kahler consumes.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import random

from .errors import InadmissibleFlag
from .geometry import FirstJetPoint, HypersurfaceProblem, full_jet
from .linalg import det, mat_mul, nullity
from .torsion import _coefficient_tables


def _zeros(k):
    return tuple(Fraction(0) for _ in range(k))


@dataclass(frozen=True)
class FlagSpec:
    a1: tuple
    a2: tuple
    c1: tuple
    c2: tuple
    alpha: Fraction = Fraction(1)
    beta: Fraction = Fraction(0)
    eps_x: tuple = None
    eps_theta: tuple = None
    eps_p: tuple = None

    def resolved(self, two_n):
        a1 = tuple(Fraction(x) for x in self.a1)
        a2 = tuple(Fraction(x) for x in self.a2)
        c1 = tuple(Fraction(x) for x in self.c1)
        c2 = tuple(Fraction(x) for x in self.c2)
        ex = tuple(Fraction(x) for x in (self.eps_x or (0, 0)))
        et = tuple(Fraction(x) for x in (self.eps_theta or _zeros(two_n)))
        ep = tuple(Fraction(x) for x in (self.eps_p or _zeros(two_n - 2)))
        if len(a1) != 2 or len(a2) != 2 or len(c1) != two_n - 2 or len(c2) != two_n - 2:
            raise InadmissibleFlag("flag component lengths do not match the problem")
        if len(ex) != 2 or len(et) != two_n or len(ep) != two_n - 2:
            raise InadmissibleFlag("perturbation lengths do not match the problem")
        if self.alpha == 0 and self.beta == 0:
            raise InadmissibleFlag("(alpha, beta) = (0, 0)")
        al, be = Fraction(self.alpha), Fraction(self.beta)
        A1 = al * a1[0] + be * a2[0] + ex[0]
        A2 = al * a1[1] + be * a2[1] + ex[1]
        C = tuple(al * c1[i] + be * c2[i] + ep[i] for i in range(two_n - 2))
        if A1 == 0 and A2 == 0 and all(x == 0 for x in C):
            raise InadmissibleFlag("E_1 generator is zero")
        return A1, A2, C, et


@dataclass(frozen=True)
class PolarSystem:
    F: tuple        # (4n-3) x 2n
    G: tuple        # (2n-1) x (4n-3)
    R: tuple        # (2n-2) x (4n-3)
    square: tuple   # (4n-3) x (4n-3): G stacked over R
    A1: Fraction
    A2: Fraction
    C: tuple
    x_degenerate: bool


def _dtheta_row_data(problem: HypersurfaceProblem, jet: FirstJetPoint):
    """gamma/beta values and their x-derivative contractions at the jet."""
    order = problem.internal_order()
    pt_int = tuple(jet.f[i] for i in order)
    gb_sym, (g1v, g1d), (g2v, g2d), bv, bd = _coefficient_tables(problem, pt_int)
    fj = full_jet(problem, jet)
    two_n = problem.two_n
    p1_int = tuple(fj.p1[i] for i in order)
    p2_int = tuple(fj.p2[i] for i in order)

    def ddx(grad, direction):
        return sum(grad[l] * direction[l] for l in range(two_n))

    m = two_n - 2
    p = tuple(Fraction(x) for x in jet.p_reduced)
    # Y_1 row data: sum_i (dgamma^2_i/dx_2 - dbeta_{2,i}/dx_1) p^i on X_2,
    # then -gamma^2_i on X_i and -beta_{2,i} on X_{2n-2+i}
    y1_x2 = sum((ddx(g2d[i], p2_int) - ddx(bd[1][i], p1_int)) * p[i] for i in range(m))
    rows = [(y1_x2, tuple(-x for x in g2v), tuple(-x for x in bv[1]))]
    # Y_j rows, j = 3..2n: sum_i dbeta_{j,i}/dx_1 p^i on X_2, +1 on X_j,
    # +beta_{j,i} on X_{2n-2+i}
    for j in range(2, two_n):
        x2 = sum(ddx(bd[j][i], p1_int) * p[i] for i in range(m))
        unit = tuple(Fraction(1) if i == j - 2 else Fraction(0) for i in range(m))
        rows.append((x2, unit, tuple(bv[j])))
    return rows


def build_polar_maps(problem: HypersurfaceProblem, jet: FirstJetPoint,
                     flag: FlagSpec) -> PolarSystem:
    two_n = problem.two_n
    m = two_n - 2
    A1, A2, C, _ = flag.resolved(two_n)
    x_degenerate = A1 == 0 and A2 == 0
    nx = 4 * problem.n - 3

    F = []
    row = [Fraction(0)] * two_n
    row[0], row[1] = -A2, A1
    F.append(tuple(row))
    for i in range(m):
        row = [Fraction(0)] * two_n
        row[0] = C[i]
        row[2 + i] = -A1
        F.append(tuple(row))
    for i in range(m):
        row = [Fraction(0)] * two_n
        row[1] = C[i]
        row[2 + i] = -A2
        F.append(tuple(row))
    F = tuple(F)

    R = []
    for i in range(m):
        row = [Fraction(0)] * nx
        row[0] = C[i]
        row[1 + i] = A2
        row[1 + m + i] = -A1
        R.append(tuple(row))
    R = tuple(R)

    G = []
    for x2, xi, xlast in _dtheta_row_data(problem, jet):
        row = [Fraction(0)] * nx
        row[0] = x2
        for i in range(m):
            row[1 + i] = xi[i]
            row[1 + m + i] = xlast[i]
        G.append(tuple(row))
    G = tuple(G)

    square = G + R
    return PolarSystem(F, G, R, square, A1, A2, C, x_degenerate)


@dataclass(frozen=True)
class KahlerVerdict:
    determinant: Fraction
    regular: bool
    verdict: str        # kahler_regular | not_an_integral_element |
                        # degenerate_independence |
                        # inconclusive_for_this_flag |
                        # inconclusive_degenerate_chart
    dim_ker_gf: int
    eps_samples: tuple  # ((label, det_nonzero, dim_ker_gf), ...)
    is_integral: bool = True
    independence: bool = True


def _pair_X(flag: FlagSpec, two_n):
    """X-coordinates of the plane spanned by the two flag generators."""
    a1 = tuple(Fraction(x) for x in flag.a1)
    a2 = tuple(Fraction(x) for x in flag.a2)
    c1 = tuple(Fraction(x) for x in flag.c1)
    c2 = tuple(Fraction(x) for x in flag.c2)
    m = two_n - 2
    X = [a1[0] * a2[1] - a1[1] * a2[0]]
    X += [c1[j] * a2[0] - c2[j] * a1[0] for j in range(m)]
    X += [c1[j] * a2[1] - c2[j] * a1[1] for j in range(m)]
    return X


def _is_integral_plane(ps: PolarSystem, flag: FlagSpec, two_n):
    """E annihilates every d(theta^k): the 2-plane is an integral element."""
    X = _pair_X(flag, two_n)
    return all(sum(row[i] * X[i] for i in range(len(X))) == 0 for row in ps.G)


_EPS_SAMPLES = (
    ("eps_x", (Fraction(1, 7), Fraction(-1, 9)), None),
    ("eps_p", None, "unit0/11"),
    ("eps_both", (Fraction(1, 13), Fraction(1, 17)), "alt/19"),
)


def _sample_eps_p(two_n, pattern):
    m = two_n - 2
    if pattern == "unit0/11":
        return tuple(Fraction(1, 11) if i == 0 else Fraction(0) for i in range(m))
    return tuple(Fraction(1 if i % 2 == 0 else -1, 19) for i in range(m))


def kahler_regularity(problem: HypersurfaceProblem, jet: FirstJetPoint,
                      flag: FlagSpec) -> KahlerVerdict:
    """Flag test for the sufficiency theorem.

    The certificate requires the spanned plane E to be an integral element
    carrying the independence form, the polar space of E_1 to be exactly E
    (dim Ker(g o f) = 2, one extension direction), and that dimension to
    persist at the deterministic epsilon perturbations (sampled local
    constancy of the polar rank).  The Cramer determinant of the stacked
    system is reported as well; note det != 0 says the perturbed line
    extends to *no* integral plane (dim H(D') = 1), so on an integral flag
    itself the determinant always vanishes -- E lies in the polar space.
    """
    ps = build_polar_maps(problem, jet, flag)
    two_n = problem.two_n
    d = det([list(r) for r in ps.square])
    gf = mat_mul([list(r) for r in ps.G], [list(r) for r in ps.F])
    dim_ker = nullity(gf, two_n)
    integral = _is_integral_plane(ps, flag, two_n)
    independence = _pair_X(flag, two_n)[0] != 0
    samples = []
    for label, ex, pat in _EPS_SAMPLES:
        eflag = FlagSpec(flag.a1, flag.a2, flag.c1, flag.c2, flag.alpha, flag.beta,
                         eps_x=ex, eps_theta=None,
                         eps_p=_sample_eps_p(two_n, pat) if pat else None)
        try:
            eps_ps = build_polar_maps(problem, jet, eflag)
        except InadmissibleFlag:
            continue
        ed = det([list(r) for r in eps_ps.square])
        egf = mat_mul([list(r) for r in eps_ps.G], [list(r) for r in eps_ps.F])
        samples.append((label, ed != 0, nullity(egf, two_n)))
    if ps.x_degenerate:
        verdict = "inconclusive_degenerate_chart"
    elif not integral:
        verdict = "not_an_integral_element"
    elif not independence:
        verdict = "degenerate_independence"
    elif dim_ker == 2 and all(dim == 2 for _, _, dim in samples):
        verdict = "kahler_regular"
    else:
        verdict = "inconclusive_for_this_flag"
    return KahlerVerdict(d, verdict == "kahler_regular", verdict, dim_ker,
                         tuple(samples), integral, independence)


@dataclass(frozen=True)
class SearchResult:
    flag: FlagSpec
    verdict: KahlerVerdict
    candidate_index: int
    attempted: int


def integral_flag_from_c1(problem: HypersurfaceProblem, jet: FirstJetPoint,
                          c1) -> FlagSpec:
    """Integral-element flag with x-parts e_1, e_2 and prescribed c^1.

    The rows d(theta^j) = 0 (j >= 3) determine c^2 uniquely; the remaining
    d(theta^2) row is then a consistency condition equivalent to torsion
    absorbability at the jet.  Returns None when it fails.
    """
    two_n = problem.two_n
    m = two_n - 2
    c1 = tuple(Fraction(x) for x in c1)
    rows = _dtheta_row_data(problem, jet)
    # rows[1:]: X_2 coeff q_j, own X_j coeff 1, X_{2n-2+i} coeffs beta_{j,i}
    c2 = []
    for j, (q, unit, betarow) in enumerate(rows[1:]):
        c2.append(q + sum(betarow[i] * c1[i] for i in range(m)))
    flag = FlagSpec((1, 0), (0, 1), c1, tuple(c2))
    X = _pair_X(flag, two_n)
    y1 = rows[0]
    val = y1[0] * X[0] + sum(y1[1][i] * X[1 + i] for i in range(m)) \
        + sum(y1[2][i] * X[1 + m + i] for i in range(m))
    if val != 0:
        return None
    return flag


def _candidate_c1(two_n, trials, seed):
    m = two_n - 2
    yield _zeros(m)
    for k in range(m):
        yield tuple(Fraction(1) if i == k else Fraction(0) for i in range(m))
    rng = random.Random(seed)
    produced = m + 1
    while produced < trials:
        yield tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 4))
                    for _ in range(m))
        produced += 1


def ordinary_element_search(problem: HypersurfaceProblem, jet: FirstJetPoint,
                            trials: int = 25, seed: int = 0):
    """First Kahler-regular integral flag (coordinate c^1 candidates first,
    then seeded rationals); None result carries the attempt count."""
    if trials < 1:
        raise InadmissibleFlag("trials must be >= 1")
    attempted = 0
    for index, c1 in enumerate(_candidate_c1(problem.two_n, trials, seed)):
        if attempted >= trials:
            break
        attempted += 1
        flag = integral_flag_from_c1(problem, jet, c1)
        if flag is None:
            continue
        try:
            verdict = kahler_regularity(problem, jet, flag)
        except InadmissibleFlag:
            continue
        if verdict.regular:
            return SearchResult(flag, verdict, index, attempted)
    return SearchResult(None, None, -1, attempted)


def perturbed_polar_matrix(problem: HypersurfaceProblem, jet: FirstJetPoint, flag: FlagSpec):
    """Full polar-space system for a perturbed line, unknowns
    (v_1, v_2, v_theta_1..v_theta_2n, v_p3..v_p2n)."""
    two_n = problem.two_n
    m = two_n - 2
    A1, A2, C, et = flag.resolved(two_n)
    dim = 2 + two_n + m
    vth = lambda k: 2 + k          # 0-based theta slot k = 0..2n-1
    vp = lambda i: 2 + two_n + i   # 0-based reduced-jet slot i = 0..m-1
    rows = []
    for k in range(two_n):
        for i in range(2):
            row = [Fraction(0)] * dim
            row[vth(k)] = (A1, A2)[i]
            row[i] = row[i] - et[k]
            rows.append(row)
        for ip in range(two_n):
            row = [Fraction(0)] * dim
            row[vth(k)] = row[vth(k)] + et[ip]
            row[vth(ip)] = row[vth(ip)] - et[k]
            rows.append(row)
        for i in range(m):
            row = [Fraction(0)] * dim
            row[vth(k)] = row[vth(k)] + C[i]
            row[vp(i)] = row[vp(i)] - et[k]
            rows.append(row)
    for x2c, xic, xlc in _dtheta_row_data(problem, jet):
        row = [Fraction(0)] * dim
        # X_2 = A1 v_2 - A2 v_1 ; X_i = C_i v_1 - A1 v_p_i ;
        # X_{2n-2+i} = C_i v_2 - A2 v_p_i
        row[1] += x2c * A1
        row[0] -= x2c * A2
        for i in range(m):
            row[0] += xic[i] * C[i]
            row[vp(i)] -= xic[i] * A1
            row[1] += xlc[i] * C[i]
            row[vp(i)] -= xlc[i] * A2
        rows.append(row)
    return rows, dim


def perturbed_polar_nullity(problem, jet, flag) -> int:
    rows, dim = perturbed_polar_matrix(problem, jet, flag)
    return nullity(rows, dim)
