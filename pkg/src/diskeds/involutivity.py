"""Tableau obstruction rows, prolongation dimensions, involutivity order.

The first prolongation of the tableau is the kernel of a single obstruction
row: both defining rows gamma^2 beta - beta_2 and gamma^1 beta - beta_1 are
rho-multiples of one vector D0 with the closed form

    D0_i = (-1/D^2) { rho_1 [mu_i mu2_2 - mu_2 mu2_i]
                    + rho_2 [mu_1 mu2_i - mu_i mu2_1]
                    + rho_i [mu_2 mu2_1 - mu_1 mu2_2] },

so dim A^(q) is the nullity of the stacked Krylov rows D0 beta^k,
k = 0..q-1, and A^(q) is involutive once q reaches the rank of the full
Krylov family (the Cartan-Kuranishi order here).  The closed form is
cross-checked against the definitional rows on every call; a mismatch is
an implementation bug, never a user error.

Sign caution: with D0 as above, expanding the definitional rows exactly
gives gamma^1 beta - beta_1 = +rho_2 D0 but gamma^2 beta - beta_2 =
-rho_1 D0 (the mu-bracket mu_1 gamma^1 + mu_2 gamma^2 + mu vanishes by
the defining system, and collecting the mu2-terms fixes the signs).  Both
rows stay proportional to D0, which is all the prolongation theory uses.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import CrossCheckMismatch
from .geometry import GammaBetaData, HypersurfaceProblem, compute_gamma_beta
from .linalg import nullity, mat_rank, row_times_matrix


@dataclass(frozen=True)
class DVectors:
    D0: tuple
    D1: tuple  # +rho_2 * D0 == gamma^1 beta - beta_1
    D2: tuple  # -rho_1 * D0 == gamma^2 beta - beta_2


def obstruction_bracket(gb: GammaBetaData):
    """The unnormalized bracket -D^2 * D0_i (scales by beta^3 under
    alpha*I + beta*A substitutions, unlike the normalized rows)."""
    r1, r2 = gb.rho_grad[0], gb.rho_grad[1]
    m1, m2 = gb.mu[0], gb.mu[1]
    s1, s2 = gb.mu2[0], gb.mu2[1]
    out = []
    for j in range(2, gb.two_n):
        rj, mj, sj = gb.rho_grad[j], gb.mu[j], gb.mu2[j]
        out.append(r1 * (mj * s2 - m2 * sj)
                   + r2 * (m1 * sj - mj * s1)
                   + rj * (m2 * s1 - m1 * s2))
    return tuple(out)


def compute_D_vectors(gb: GammaBetaData) -> DVectors:
    bracket = obstruction_bracket(gb)
    D2sq = gb.D * gb.D
    D0 = tuple(-b / D2sq for b in bracket)
    r1, r2 = gb.rho_grad[0], gb.rho_grad[1]
    if not gb.symbolic:
        # D = rho_1 mu_2 - rho_2 mu_1 != 0 forces a nonzero rho-pair, which
        # is what lets the two kernel rows collapse onto the single D0 row
        assert r1 != 0 or r2 != 0
    D1 = tuple(r2 * x for x in D0)
    D2 = tuple(-r1 * x for x in D0)
    if gb.symbolic:
        _cross_check_sampled(gb, D0)
    else:
        _cross_check_exact(gb, D1, D2)
    return DVectors(D0, D1, D2)


def _cross_check_exact(gb, D1, D2):
    """Definitional rows gamma^k beta - beta_k, entrywise exact."""
    for row, gamma, want in ((D2, gb.gamma2, gb.beta2), (D1, gb.gamma1, gb.beta1)):
        for i in range(gb.two_n - 2):
            direct = sum(gamma[j] * gb.beta[j][i] for j in range(gb.two_n - 2))
            direct = direct - want[i]
            if direct != row[i]:
                raise CrossCheckMismatch(
                    "closed-form obstruction row disagrees with gamma*beta - beta_k")


def _cross_check_sampled(gb, D0):
    """Symbolic mode: run the exact cross-check at deterministic points
    where the denominators do not vanish (full symbolic cross-products are
    needlessly expensive)."""
    from fractions import Fraction
    two_n = gb.two_n
    hits = 0
    for s in range(1, 40):
        pt = tuple(Fraction(((s * (i + 3) ** 2 + i + s) % 11) - 5, 1 + (s + i) % 3)
                   for i in range(two_n))
        try:
            if gb.D.evaluate(pt) == 0:
                continue
            g1 = [g.evaluate(pt) for g in gb.gamma1]
            g2 = [g.evaluate(pt) for g in gb.gamma2]
            beta = [[e.evaluate(pt) for e in row] for row in gb.beta_full]
            d0 = [x.evaluate(pt) for x in D0]
            r = [g.evaluate(pt) for g in gb.rho_grad[:2]]
        except ZeroDivisionError:
            continue
        m = two_n - 2
        for i in range(m):
            want1 = sum(g1[j] * beta[j + 2][i] for j in range(m)) - beta[0][i]
            want2 = sum(g2[j] * beta[j + 2][i] for j in range(m)) - beta[1][i]
            if want1 != r[1] * d0[i] or want2 != -r[0] * d0[i]:
                raise CrossCheckMismatch(
                    "closed-form obstruction row disagrees with gamma*beta - beta_k")
        hits += 1
        if hits >= 3:
            return
    raise CrossCheckMismatch("no valid sample point for the symbolic cross-check")


@dataclass(frozen=True)
class TableauReport:
    n: int
    dim_A: int
    dims: tuple       # dim A^(q) for q = 1..Q
    q0: int
    involutive_from: int
    involutive_at_0: bool
    symbolic: bool = False


def _normalize_row(row):
    """Scale a symbolic row by its first nonzero entry (rank-neutral);
    keeps rational-function growth flat along Krylov iterations."""
    for x in row:
        if x != 0:
            return [y / x for y in row]
    return row


def _krylov_rows(D0, beta, count, symbolic=False):
    rows = []
    row = list(D0)
    if symbolic:
        row = _normalize_row(row)
    for _ in range(count):
        rows.append(row)
        row = row_times_matrix(row, beta)
        if symbolic:
            row = _normalize_row(row)
    return rows


def prolongation_dims(problem: HypersurfaceProblem, f_point=None, Q=None) -> TableauReport:
    """dim A^(q) for q = 1..Q plus the involutivity order.

    ``f_point`` None runs the symbolic (generic-point) mode.
    """
    gb = compute_gamma_beta(problem, f_point)
    dv = compute_D_vectors(gb)
    m = gb.two_n - 2
    if Q is None:
        Q = m
    depth = max(Q, m)
    rows = _krylov_rows(dv.D0, gb.beta, depth, symbolic=gb.symbolic)
    dims = []
    prefix_ranks = []
    for q in range(1, depth + 1):
        stack = rows[:q]
        dims.append(nullity(stack, m))
        prefix_ranks.append(m - dims[-1])
    involutive_from = 0
    prev = 0
    for q, r in enumerate(prefix_ranks, start=1):
        if r == prev:
            involutive_from = q - 1
            break
        prev = r
    else:
        involutive_from = prefix_ranks[-1]
    q0 = prefix_ranks[m - 1] if m >= 1 else 0
    at0 = all(x == 0 for x in dv.D0)
    return TableauReport(problem.n, m, tuple(dims[:Q]), q0, involutive_from,
                         at0, symbolic=f_point is None)


def involutivity_order(problem: HypersurfaceProblem, f_point=None) -> int:
    """rank(D0, D0 beta, ..., D0 beta^{2n-3}); A^(q) is involutive for q >= this."""
    gb = compute_gamma_beta(problem, f_point)
    dv = compute_D_vectors(gb)
    m = gb.two_n - 2
    if m == 0:
        return 0
    return mat_rank(_krylov_rows(dv.D0, gb.beta, m, symbolic=gb.symbolic))
