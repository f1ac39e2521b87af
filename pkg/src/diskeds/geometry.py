"""Problem setup and the reduced first-jet relations.

A problem is a polynomial defining function rho on R^{2n}, a 2n x 2n
structure matrix of rational functions, and a distinguished coordinate
pair playing the elimination roles 1 and 2.  Internally coordinates are
relabeled so the distinguished pair sits in positions 1,2; every report
carries the permutation back to user coordinates.

The core computation solves the 2x2 linear system obtained by
differentiating rho(f(x)) = 0 along both disk directions:

    gamma^1_j = (-1/D)(rho_j mu_2 - rho_2 mu_j)
    gamma^2_j = (-1/D)(rho_1 mu_j - rho_j mu_1)
    D = rho_1 mu_2 - rho_2 mu_1,   mu_i = sum_j rho_j alpha_{j,i}

and then beta_{i,j} = alpha_{i,1} gamma^1_j + alpha_{i,2} gamma^2_j
+ alpha_{i,j}.  Both a symbolic mode (rational functions of f, feeding
torsion differentiation) and a pointwise mode (exact rationals, feeding
rank tests) are provided and must agree wherever both are defined.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CrossCheckMismatch,
    DimensionMismatch,
    IdenticallySingularD,
    SingularD,
    ZeroB,
)
from .expr import Polynomial, RationalFunction


def default_coordinates(two_n: int):
    return tuple(f"f{i}" for i in range(1, two_n + 1))


def permute_polynomial(p: Polynomial, order) -> Polynomial:
    """Reorder the variable table; ``order`` lists old 0-based indices."""
    new_vars = tuple(p.vars[i] for i in order)
    res = {}
    for exps, c in p.terms.items():
        res[tuple(exps[i] for i in order)] = c
    return Polynomial(new_vars, res)


def _permute_ratfn(r: RationalFunction, order) -> RationalFunction:
    return RationalFunction(permute_polynomial(r.num, order),
                            permute_polynomial(r.den, order))


@dataclass(frozen=True)
class StructureMatrix:
    """The matrix relating the two disk-direction derivatives, p_2 = A p_1."""

    n: int
    entries: tuple  # 2n x 2n tuple of tuples of RationalFunction
    kind: str = "general"
    warnings: tuple = ()

    @property
    def size(self):
        return 2 * self.n

    def entry(self, j, i):
        """1-based access to alpha_{j,i}."""
        return self.entries[j - 1][i - 1]

    def evaluated(self, point):
        return [[e.evaluate(point) for e in row] for row in self.entries]

    def squared(self):
        m = self.size
        return tuple(
            tuple(sum((self.entries[j][k] * self.entries[k][i] for k in range(m)),
                      RationalFunction.from_const(self.entries[0][0].vars, 0))
                  for i in range(m))
            for j in range(m))

    def permuted(self, order):
        return StructureMatrix(
            self.n,
            tuple(tuple(_permute_ratfn(self.entries[j][i], order)
                        for i in order) for j in order),
            self.kind,
            self.warnings,
        )


def complex_standard(n: int, variables=None) -> StructureMatrix:
    """alpha_{2i-1,2i} = -1, alpha_{2i,2i-1} = 1, zero elsewhere."""
    variables = tuple(variables) if variables else default_coordinates(2 * n)
    zero = RationalFunction.from_const(variables, 0)
    rows = [[zero] * (2 * n) for _ in range(2 * n)]
    for i in range(1, n + 1):
        rows[2 * i - 2][2 * i - 1] = RationalFunction.from_const(variables, -1)
        rows[2 * i - 1][2 * i - 2] = RationalFunction.from_const(variables, 1)
    return StructureMatrix(n, tuple(tuple(r) for r in rows), "complex_standard")


def structure_from_entries(n: int, entries) -> StructureMatrix:
    entries = tuple(tuple(row) for row in entries)
    if len(entries) != 2 * n or any(len(row) != 2 * n for row in entries):
        raise DimensionMismatch(f"structure matrix must be {2*n}x{2*n}")
    return StructureMatrix(n, entries, "general")


def make_structure_from_pair(a: RationalFunction, b: RationalFunction,
                             A_entries, n: int) -> StructureMatrix:
    """Almost-holomorphic reduction matrix b*(a*I - A)/(1 + a^2).

    A is the caller's candidate almost complex structure; A^2 = -I is
    checked exactly but a violation is only flagged as a warning since the
    general theory admits any matrix.
    """
    if b.is_zero():
        raise ZeroB("b is identically zero")
    A_entries = tuple(tuple(row) for row in A_entries)
    if len(A_entries) != 2 * n or any(len(row) != 2 * n for row in A_entries):
        raise DimensionMismatch(f"A must be {2*n}x{2*n}")
    variables = a.vars
    denom = RationalFunction.from_const(variables, 1) + a * a
    rows = []
    for j in range(2 * n):
        row = []
        for i in range(2 * n):
            diag = a if i == j else RationalFunction.from_const(variables, 0)
            row.append(b * (diag - A_entries[j][i]) / denom)
        rows.append(tuple(row))
    warnings = []
    m = 2 * n
    for j in range(m):
        for i in range(m):
            s = sum((A_entries[j][k] * A_entries[k][i] for k in range(m)),
                    RationalFunction.from_const(variables, 0))
            expected = -1 if i == j else 0
            if s != expected:
                warnings.append("NotAlmostComplex")
                break
        else:
            continue
        break
    return StructureMatrix(n, tuple(rows), "from_pair", tuple(warnings))


@dataclass(frozen=True)
class FirstJetPoint:
    f: tuple          # base point, user coordinate order
    p_reduced: tuple  # p^3_1..p^{2n}_1 in relabeled coordinates
    off_surface: bool = False


@dataclass(frozen=True)
class HypersurfaceProblem:
    rho: Polynomial
    structure: StructureMatrix
    pair: tuple = (1, 2)

    def __post_init__(self):
        two_n = 2 * self.structure.n
        if len(self.rho.vars) != two_n:
            raise DimensionMismatch(
                f"rho has {len(self.rho.vars)} variables, expected {two_n}")
        i1, i2 = self.pair
        if i1 == i2 or not (1 <= i1 <= two_n and 1 <= i2 <= two_n):
            raise DimensionMismatch(f"bad distinguished pair {self.pair}")

    @property
    def n(self):
        return self.structure.n

    @property
    def two_n(self):
        return 2 * self.structure.n

    def internal_order(self):
        """0-based original indices in internal order: pair first, rest ascending."""
        i1, i2 = self.pair
        rest = [k for k in range(self.two_n) if k not in (i1 - 1, i2 - 1)]
        return [i1 - 1, i2 - 1] + rest

    def sigma(self):
        """1-based map internal position -> original coordinate index."""
        return tuple(i + 1 for i in self.internal_order())

    def with_pair(self, pair):
        return HypersurfaceProblem(self.rho, self.structure, tuple(pair))

    def make_jet(self, f, p_reduced, allow_off_surface=False) -> FirstJetPoint:
        f = tuple(Fraction(x) for x in f)
        if len(f) != self.two_n:
            raise DimensionMismatch("base point has wrong length")
        p_reduced = tuple(Fraction(x) for x in p_reduced)
        if len(p_reduced) != self.two_n - 2:
            raise DimensionMismatch("reduced jet has wrong length")
        value = self.rho.evaluate(f)
        if value != 0 and not allow_off_surface:
            raise DimensionMismatch(
                f"point is off the hypersurface: rho = {value}")
        return FirstJetPoint(f, p_reduced, off_surface=(value != 0))


@dataclass(frozen=True)
class GammaBetaData:
    """Reduced first-jet data; entries are Fractions in pointwise mode and
    RationalFunctions over the internal table in symbolic mode."""

    problem: HypersurfaceProblem
    symbolic: bool
    sigma: tuple            # internal 1-based -> original 1-based
    internal_vars: tuple
    rho_int: Polynomial     # rho over the internal table
    alpha: tuple            # evaluated/symbolic structure entries, internal order
    rho_grad: tuple         # length 2n
    mu: tuple               # length 2n
    mu2: tuple              # length 2n
    D: object
    gamma1: tuple           # length 2n-2, internal j = 3..2n
    gamma2: tuple
    beta_full: tuple        # 2n rows x (2n-2) cols, internal order
    point_internal: tuple = None

    @property
    def two_n(self):
        return 2 * self.problem.n

    @property
    def beta(self):
        return self.beta_full[2:]

    @property
    def beta1(self):
        return self.beta_full[0]

    @property
    def beta2(self):
        return self.beta_full[1]

    def self_check(self):
        """Re-substitution identities of the defining 2x2 system, exact."""
        r1, r2 = self.rho_grad[0], self.rho_grad[1]
        m1, m2 = self.mu[0], self.mu[1]
        for j in range(self.two_n - 2):
            rj = self.rho_grad[j + 2]
            mj = self.mu[j + 2]
            if r1 * self.gamma1[j] + r2 * self.gamma2[j] + rj != 0:
                raise CrossCheckMismatch("rho re-substitution failed")
            if m1 * self.gamma1[j] + m2 * self.gamma2[j] + mj != 0:
                raise CrossCheckMismatch("mu re-substitution failed")
        for i in range(self.two_n):
            for j in range(self.two_n - 2):
                lhs = self.beta_full[i][j]
                rhs = (self.alpha[i][0] * self.gamma1[j]
                       + self.alpha[i][1] * self.gamma2[j]
                       + self.alpha[i][j + 2])
                if lhs != rhs:
                    raise CrossCheckMismatch("beta definition failed")
        return True


def _internal_pieces(problem: HypersurfaceProblem):
    order = problem.internal_order()
    rho_int = permute_polynomial(problem.rho, order)
    struct_int = problem.structure.permuted(order)
    return order, rho_int, struct_int


def compute_gamma_beta(problem: HypersurfaceProblem, point=None) -> GammaBetaData:
    """Symbolic mode when ``point`` is None, else exact pointwise mode.

    ``point`` is given in the user's coordinate order.
    """
    order, rho_int, struct_int = _internal_pieces(problem)
    two_n = problem.two_n
    grad = tuple(rho_int.differentiate(v) for v in rho_int.vars)

    if point is None:
        alpha = struct_int.entries
        one = RationalFunction.from_const(rho_int.vars, 1)
        grad_r = tuple(RationalFunction(g) for g in grad)
        mu = tuple(sum((grad_r[j] * alpha[j][i] for j in range(two_n)),
                       one * 0) for i in range(two_n))
        alpha2 = struct_int.squared()
        mu2 = tuple(sum((grad_r[j] * alpha2[j][i] for j in range(two_n)),
                        one * 0) for i in range(two_n))
        D = grad_r[0] * mu[1] - grad_r[1] * mu[0]
        if D.is_zero():
            raise IdenticallySingularD(
                "D vanishes identically for this distinguished pair")
        gamma1 = tuple((grad_r[j] * mu[1] - grad_r[1] * mu[j]) / (-D)
                       for j in range(2, two_n))
        gamma2 = tuple((grad_r[0] * mu[j] - grad_r[j] * mu[0]) / (-D)
                       for j in range(2, two_n))
        beta_full = tuple(
            tuple(alpha[i][0] * gamma1[j] + alpha[i][1] * gamma2[j] + alpha[i][j + 2]
                  for j in range(two_n - 2))
            for i in range(two_n))
        return GammaBetaData(problem, True, problem.sigma(), rho_int.vars,
                             rho_int, alpha, grad_r, mu, mu2, D, gamma1, gamma2,
                             beta_full)

    point = tuple(Fraction(x) for x in point)
    if len(point) != two_n:
        raise DimensionMismatch("point has wrong length")
    pt_int = tuple(point[i] for i in order)
    alpha = tuple(tuple(e.evaluate(pt_int) for e in row)
                  for row in struct_int.entries)
    grad_v = tuple(g.evaluate(pt_int) for g in grad)
    mu = tuple(sum(grad_v[j] * alpha[j][i] for j in range(two_n))
               for i in range(two_n))
    alpha2 = [[sum(alpha[j][k] * alpha[k][i] for k in range(two_n))
               for i in range(two_n)] for j in range(two_n)]
    mu2 = tuple(sum(grad_v[j] * alpha2[j][i] for j in range(two_n))
                for i in range(two_n))
    D = grad_v[0] * mu[1] - grad_v[1] * mu[0]
    if D == 0:
        raise SingularD(
            "D = 0 at this point; try another distinguished pair")
    gamma1 = tuple((grad_v[j] * mu[1] - grad_v[1] * mu[j]) / (-D)
                   for j in range(2, two_n))
    gamma2 = tuple((grad_v[0] * mu[j] - grad_v[j] * mu[0]) / (-D)
                   for j in range(2, two_n))
    beta_full = tuple(
        tuple(alpha[i][0] * gamma1[j] + alpha[i][1] * gamma2[j] + alpha[i][j + 2]
              for j in range(two_n - 2))
        for i in range(two_n))
    return GammaBetaData(problem, False, problem.sigma(), rho_int.vars,
                         rho_int, alpha, grad_v, mu, mu2, D, gamma1, gamma2,
                         beta_full, point_internal=pt_int)


@dataclass(frozen=True)
class FullJet:
    p11: Fraction
    p21: Fraction
    p1: tuple  # user coordinate order
    p2: tuple  # user coordinate order


def full_jet(problem: HypersurfaceProblem, jet: FirstJetPoint) -> FullJet:
    """Complete the reduced jet: p^1_1, p^2_1 from the gammas, then p_2 = A p_1."""
    gb = compute_gamma_beta(problem, jet.f)
    two_n = problem.two_n
    p_red = tuple(Fraction(x) for x in jet.p_reduced)
    p11 = sum(g * p for g, p in zip(gb.gamma1, p_red))
    p21 = sum(g * p for g, p in zip(gb.gamma2, p_red))
    p1_int = (p11, p21) + p_red
    p2_int = tuple(sum(gb.alpha[j][i] * p1_int[i] for i in range(two_n))
                   for j in range(two_n))
    order = problem.internal_order()
    p1 = [Fraction(0)] * two_n
    p2 = [Fraction(0)] * two_n
    for k, orig in enumerate(order):
        p1[orig] = p1_int[k]
        p2[orig] = p2_int[k]
    return FullJet(p11, p21, tuple(p1), tuple(p2))


def choose_pair(problem: HypersurfaceProblem, point=None):
    """First distinguished pair (scanned in index order) with D != 0."""
    two_n = problem.two_n
    last_error = None
    for i1 in range(1, two_n + 1):
        for i2 in range(i1 + 1, two_n + 1):
            candidate = problem.with_pair((i1, i2))
            try:
                compute_gamma_beta(candidate, point)
                return (i1, i2)
            except (SingularD, IdenticallySingularD) as exc:
                last_error = exc
    if point is None:
        raise IdenticallySingularD(
            "D vanishes identically for every distinguished pair") from last_error
    raise SingularD(
        "D = 0 at the point for every distinguished pair") from last_error
