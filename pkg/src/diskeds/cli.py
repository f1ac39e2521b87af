"""Command-line interface: dispatch, verdict payloads, exit codes.

Exit code 0 means the analysis ran (mathematical verdicts are data in the
report, never exit codes); 2 is an input problem; 3 is an internal
cross-check failure, which signals a bug.
"""
from __future__ import annotations

import argparse
import sys

from .errors import CrossCheckMismatch, DiskEdsError, SchemaViolation
from .geometry import choose_pair, compute_gamma_beta
from .involutivity import compute_D_vectors, involutivity_order, prolongation_dims
from .integral_element import kahler_regularity, ordinary_element_search
from .jets import involution_loop
from .reports import LoadedProblem, Report, build_problem, emit_report, load_problem
from .torsion import (
    complex_B_coefficients,
    dim6_definiteness,
    form_definiteness,
    pseudo_ellipsoid_check,
    structure_equation_coefficients,
    torsion_absorbable,
)

COMMANDS = ("involutivity", "torsion", "complex-forms", "dim6",
            "pseudo-ellipsoid", "integral-element", "jets", "all")


def _pick(named: dict, requested, what):
    if not named:
        raise SchemaViolation(f"the problem declares no {what}")
    if requested is None:
        return sorted(named)[0]
    if requested not in named:
        raise SchemaViolation(f"unknown {what[:-1]} {requested!r}; "
                              f"have {', '.join(sorted(named))}")
    return requested


def _reasoned_problem(lp: LoadedProblem, point=None):
    """Apply the distinguished-pair fallback scan when needed."""
    problem = lp.problem
    if problem is None:
        raise SchemaViolation("this command needs a rho/structure block")
    if lp.doc.get("distinguished_pair") is None:
        problem = problem.with_pair(choose_pair(problem, point))
    return problem


def cmd_involutivity(lp: LoadedProblem, opts) -> dict:
    pname = _pick(lp.points, opts.point, "points")
    point = lp.points[pname]
    problem = _reasoned_problem(lp, point)
    gb = compute_gamma_beta(problem, point)
    gb.self_check()
    dv = compute_D_vectors(gb)
    report = prolongation_dims(problem, point, Q=opts.order)
    q0 = involutivity_order(problem, point)
    return {
        "point": pname,
        "distinguished_pair": list(problem.pair),
        # gamma/D0 entries follow the relabeled order; these are the
        # user-coordinate indices they refer to
        "reduced_coordinates": list(gb.sigma[2:]),
        "D": gb.D,
        "gamma1": list(gb.gamma1),
        "gamma2": list(gb.gamma2),
        "D0": list(dv.D0),
        "D0_zero": all(x == 0 for x in dv.D0),
        "dim_A": report.dim_A,
        "dims": list(report.dims),
        "q0": q0,
        "involutive_from": report.involutive_from,
        "involutive_at_0": report.involutive_at_0,
    }


def cmd_torsion(lp: LoadedProblem, opts) -> dict:
    jname = _pick(lp.jets, opts.jet, "jets")
    jet = lp.jets[jname]
    problem = _reasoned_problem(lp, jet.f)
    sed = structure_equation_coefficients(problem, jet)
    verdict = torsion_absorbable(problem, jet)
    return {
        "jet": jname,
        "case": verdict.case,
        "residual_1": verdict.residual_1,
        "residual_2": verdict.residual_2,
        "absorbable": verdict.absorbable,
        "witness_v": list(verdict.witness_v) if verdict.witness_v else None,
        "c_values": list(sed.c_values),
    }


def cmd_complex_forms(lp: LoadedProblem, opts) -> dict:
    pname = _pick(lp.points, opts.point, "points")
    point = lp.points[pname]
    problem = lp.problem
    if problem is None or problem.structure.kind != "complex_standard":
        raise SchemaViolation("complex-forms needs a complex_standard problem")
    data = complex_B_coefficients(problem.rho, point)
    d1 = form_definiteness(data.c1)
    d2 = form_definiteness(data.c2)
    return {
        "point": pname,
        "B_lower": {f"{j},{k}": v for (j, k), v in sorted(data.B_lower.items())},
        "B_upper": {f"{j},{k}": v for (j, k), v in sorted(data.B_upper.items())},
        "c1_matrix": [list(r) for r in data.c1],
        "c2_matrix": [list(r) for r in data.c2],
        "c1_definiteness": d1,
        "c2_definiteness": d2,
        "only_points_possible": d1 != "not_definite" or d2 != "not_definite",
    }


def cmd_dim6(lp: LoadedProblem, opts) -> dict:
    pname = _pick(lp.points, opts.point, "points")
    point = lp.points[pname]
    if lp.problem is None:
        raise SchemaViolation("dim6 needs a rho block")
    rep = dim6_definiteness(lp.problem.rho, point)
    return {"point": pname, **{k: getattr(rep, k) for k in
                               ("delta1", "delta2", "sign1", "sign2",
                                "c1_definiteness", "c2_definiteness", "verdict")}}


def cmd_pseudo_ellipsoid(lp: LoadedProblem, opts) -> dict:
    pe = lp.pseudo_ellipsoid
    if not pe:
        raise SchemaViolation("the problem has no pseudo_ellipsoid block")
    pname = _pick(lp.points, opts.point, "points")
    rep = pseudo_ellipsoid_check(pe["alphas"], pe["ks"], lp.points[pname])
    return {
        "point": pname,
        "v": list(rep.v),
        "w": list(rep.w),
        "L": rep.L,
        "verdict": "holds" if rep.holds else "violated",
        "off_surface": rep.off_surface,
        "rho_value": rep.rho_value,
    }


def cmd_integral_element(lp: LoadedProblem, opts) -> dict:
    jname = _pick(lp.jets, opts.jet, "jets")
    jet = lp.jets[jname]
    problem = _reasoned_problem(lp, jet.f)
    if opts.flag is not None:
        flag = lp.flags.get(opts.flag)
        if flag is None:
            raise SchemaViolation(f"unknown flag {opts.flag!r}")
        verdict = kahler_regularity(problem, jet, flag)
        return {
            "jet": jname,
            "flag": opts.flag,
            "determinant": verdict.determinant,
            "verdict": verdict.verdict,
            "dim_ker_gf": verdict.dim_ker_gf,
            "eps_samples": [list(s) for s in verdict.eps_samples],
        }
    result = ordinary_element_search(problem, jet, trials=opts.trials,
                                     seed=opts.seed)
    out = {"jet": jname, "attempted": result.attempted,
           "found": result.flag is not None}
    if result.flag is not None:
        trivial = all(x == 0 for x in jet.p_reduced)
        out.update({
            "candidate_index": result.candidate_index,
            "determinant": result.verdict.determinant,
            "verdict": result.verdict.verdict,
            "flag_c1": list(result.flag.c1),
            "flag_c2": list(result.flag.c2),
            "eps_samples": [list(s) for s in result.verdict.eps_samples],
            "conclusion": ("ordinary integral element: a disk germ exists "
                           "through this jet"
                           + (" (zero velocity: the constant disk realizes it)"
                              if trivial else "")),
        })
    return out


def cmd_jets(lp: LoadedProblem, opts) -> dict:
    sname = _pick(lp.strata, opts.stratum, "strata")
    system, probes = lp.strata[sname]
    if not probes:
        raise SchemaViolation(f"stratum {sname!r} declares no probes")
    selected = sorted(probes) if opts.probe is None else [
        _pick(probes, opts.probe, "probes")]
    chains = {}
    for pname in sorted(probes):
        chains[pname] = involution_loop(system, probes[pname],
                                        max_rounds=opts.rounds)
    base_dims = {pname: chains[pname].dims[0] for pname in chains}
    min_dim = min(base_dims.values())
    out_probes = {}
    for pname in selected:
        chain = chains[pname]
        warnings = [w for r in chain.reports for w in r.warnings]
        if base_dims[pname] > min_dim:
            warnings.append(
                "tableau dimension is not locally constant on the stratum: "
                f"dimension {base_dims[pname]} here vs {min_dim} at other probes")
        out_probes[pname] = {
            "dims": list(chain.dims),
            "verdict": chain.verdict,
            "rounds": chain.rounds,
            "torsion_free": [r.torsion_free for r in chain.reports],
            "complex_split": [r.complex_split for r in chain.reports],
            "redundant_dropped": [[str(p) for p in r.redundant_dropped]
                                  for r in chain.reports],
            "trivial_velocities": chain.reports[-1].trivial_velocities,
            "warnings": warnings,
            "conclusion": _jets_conclusion(chain),
        }
    return {"stratum": sname, "probes": out_probes}


def _jets_conclusion(chain) -> str:
    if chain.verdict == "involutive":
        if chain.reports[-1].trivial_velocities:
            return ("involutive with all velocities pinned to zero: "
                    "only trivial (constant) disks through this stratum")
        return ("free torsion with tableau in involution: disk germs exist "
                "through every jet of this stratum (linear Pfaffian theory)")
    if chain.verdict == "blocked":
        return "blocked: torsion obstruction or no exact probe extension"
    return "not settled within the round budget"


def cmd_all(lp: LoadedProblem, opts) -> dict:
    out = {}
    if lp.problem is not None and lp.points:
        out["involutivity"] = cmd_involutivity(lp, opts)
        if lp.jets:
            out["torsion"] = cmd_torsion(lp, opts)
        if lp.two_n == 6 and lp.problem.structure.kind == "complex_standard":
            out["dim6"] = cmd_dim6(lp, opts)
    for sname in sorted(lp.strata):
        sub = argparse.Namespace(**vars(opts))
        sub.stratum = sname
        out[f"jets[{sname}]"] = cmd_jets(lp, sub)
    return out


_DISPATCH = {
    "involutivity": cmd_involutivity,
    "torsion": cmd_torsion,
    "complex-forms": cmd_complex_forms,
    "dim6": cmd_dim6,
    "pseudo-ellipsoid": cmd_pseudo_ellipsoid,
    "integral-element": cmd_integral_element,
    "jets": cmd_jets,
    "all": cmd_all,
}


def run_command(command: str, problem_source: str, opts) -> Report:
    doc = load_problem(problem_source)
    lp = build_problem(doc, name=problem_source)
    results = _DISPATCH[command](lp, opts)
    warnings = list(lp.structure_warnings)
    return Report(command, problem_source, lp.digest,
                  {k: getattr(opts, k) for k in
                   ("point", "jet", "order", "stratum", "probe", "rounds",
                    "seed", "trials") if getattr(opts, k, None) is not None},
                  results, warnings)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="diskeds",
        description="Exact Pfaffian-system analyzer for disk germs in "
                    "real-analytic hypersurfaces")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("problem", help="builtin name or JSON problem file")
    ap.add_argument("--point", default=None)
    ap.add_argument("--jet", default=None)
    ap.add_argument("--order", type=int, default=None)
    ap.add_argument("--stratum", default=None)
    ap.add_argument("--probe", default=None)
    ap.add_argument("--rounds", type=int, default=None)
    ap.add_argument("--flag", default=None)
    ap.add_argument("--trials", type=int, default=25)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", dest="fmt", choices=("json", "text"),
                    default="json")
    return ap


def main(argv=None) -> int:
    opts = build_parser().parse_args(argv)
    try:
        report = run_command(opts.command, opts.problem, opts)
    except CrossCheckMismatch as exc:
        sys.stderr.write(f"internal cross-check failure: {exc}\n")
        return 3
    except DiskEdsError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 2
    sys.stdout.buffer.write(emit_report(report, opts.fmt))
    return 0


if __name__ == "__main__":
    sys.exit(main())
