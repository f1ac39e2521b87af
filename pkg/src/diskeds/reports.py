"""Problem-file ingestion and deterministic report emission.

Problem files are JSON; every numeric quantity is an exact rational given
as a string 'p/q' (or 'p').  Floats are rejected outright.  Reports
serialize with sorted keys and canonical rational strings so identical
inputs give byte-identical output; the text format is a flat rendering of
the JSON tree.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import SchemaViolation
from .exact import GaussianRational, gaussian, rat, scalar_str
from .expr import Polynomial, parse_expression, print_polynomial
from .builtins import BUILTIN_PROBLEMS
from .geometry import (
    HypersurfaceProblem,
    RationalFunction,
    complex_standard,
    default_coordinates,
    make_structure_from_pair,
    structure_from_entries,
)
from .jets import Opening, jet_table, make_system, probe_from_values


def _reject_float(text):
    raise SchemaViolation(
        f"float literal {text!r} is not allowed; use exact 'p/q' strings")


def load_problem(source) -> dict:
    """Builtin name or path to a JSON problem file."""
    if source in BUILTIN_PROBLEMS:
        return json.loads(json.dumps(BUILTIN_PROBLEMS[source]))
    try:
        with open(source, "r", encoding="utf-8") as fh:
            return json.load(fh, parse_float=_reject_float)
    except FileNotFoundError:
        raise SchemaViolation(
            f"no such problem: {source!r} is neither a builtin "
            f"({', '.join(sorted(BUILTIN_PROBLEMS))}) nor a readable file")
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"invalid JSON in {source}: {exc}")


def problem_digest(doc: dict) -> str:
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def _field(doc, key, path, required=True, default=None):
    if key not in doc:
        if required:
            raise SchemaViolation(f"missing field {path}.{key}")
        return default
    return doc[key]


def _rat_vector(values, path):
    out = []
    for i, v in enumerate(values):
        try:
            out.append(rat(v))
        except SchemaViolation as exc:
            raise SchemaViolation(f"{path}[{i}]: {exc}")
    return tuple(out)


@dataclass
class LoadedProblem:
    doc: dict
    name: str
    digest: str
    two_n: int
    coordinates: tuple
    problem: HypersurfaceProblem   # None for complexified-only files
    points: dict
    jets: dict                     # name -> FirstJetPoint
    flags: dict
    strata: dict                   # name -> (JetConstraintSystem, {probe name -> dict})
    pseudo_ellipsoid: dict
    structure_warnings: tuple


def build_problem(doc: dict, name="problem") -> LoadedProblem:
    two_n = _field(doc, "dimension_2n", name)
    if not isinstance(two_n, int) or two_n < 4 or two_n % 2:
        raise SchemaViolation("dimension_2n must be an even integer >= 4")
    n = two_n // 2
    coords = tuple(_field(doc, "coordinates", name, required=False)
                   or default_coordinates(two_n))
    if len(coords) != two_n:
        raise SchemaViolation("coordinates must list dimension_2n names")

    problem = None
    structure_warnings = ()
    if "rho" in doc:
        rho = parse_expression(doc["rho"], coords)
        sdoc = _field(doc, "structure", name, required=False,
                      default={"kind": "complex_standard"})
        kind = _field(sdoc, "kind", f"{name}.structure")
        if kind == "complex_standard":
            structure = complex_standard(n, coords)
        elif kind == "matrix":
            entries = [[RationalFunction(parse_expression(e, coords))
                        for e in row]
                       for row in _field(sdoc, "entries", f"{name}.structure")]
            structure = structure_from_entries(n, entries)
        elif kind == "pair":
            a = RationalFunction(parse_expression(sdoc["a"], coords))
            b = RationalFunction(parse_expression(sdoc["b"], coords))
            A = [[RationalFunction(parse_expression(e, coords)) for e in row]
                 for row in sdoc["A"]]
            structure = make_structure_from_pair(a, b, A, n)
        else:
            raise SchemaViolation(f"unknown structure kind {kind!r}")
        structure_warnings = structure.warnings
        pair = tuple(doc.get("distinguished_pair") or (1, 2))
        problem = HypersurfaceProblem(rho, structure, pair)

    points = {}
    for pname, vec in (doc.get("points") or {}).items():
        if len(vec) != two_n:
            raise SchemaViolation(f"points.{pname} must have {two_n} entries")
        points[pname] = _rat_vector(vec, f"points.{pname}")

    jets = {}
    for jname, jdoc in (doc.get("jets") or {}).items():
        pname = _field(jdoc, "point", f"jets.{jname}")
        if pname not in points:
            raise SchemaViolation(f"jets.{jname}.point: unknown point {pname!r}")
        p_red = _rat_vector(_field(jdoc, "p_reduced", f"jets.{jname}"),
                            f"jets.{jname}.p_reduced")
        if problem is None:
            raise SchemaViolation("jets need a rho/structure block")
        jets[jname] = problem.make_jet(
            points[pname], p_red,
            allow_off_surface=bool(jdoc.get("allow_off_surface")))

    flags = {}
    for fname, fdoc in (doc.get("flags") or {}).items():
        from .integral_element import FlagSpec
        flags[fname] = FlagSpec(
            _rat_vector(fdoc["a1"], f"flags.{fname}.a1"),
            _rat_vector(fdoc["a2"], f"flags.{fname}.a2"),
            _rat_vector(fdoc["c1"], f"flags.{fname}.c1"),
            _rat_vector(fdoc["c2"], f"flags.{fname}.c2"),
            rat(fdoc.get("alpha", "1")),
            rat(fdoc.get("beta", "0")),
        )

    strata = {}
    for sname, sdoc in (doc.get("strata") or {}).items():
        eq_exprs = _field(sdoc, "equalities", f"strata.{sname}")
        probe_docs = sdoc.get("probes") or {}
        # parse over a generous table, then shrink to the real max order
        probe_orders = [len([k for k in pdoc if k == "w" or k.startswith("w_")])
                        for pdoc in probe_docs.values()]
        big = jet_table(n, max([4] + probe_orders))
        parsed = [parse_expression(expr, big, complexified=True)
                  for expr in eq_exprs]
        max_order = max([1] + [_order_of(v) for p in parsed
                               for v in p.used_variables()])
        small = jet_table(n, max_order)
        openings = []
        for odoc in (sdoc.get("openings") or []):
            if isinstance(odoc, str):
                odoc = {"expr": odoc, "sign": "nonzero"}
            op = parse_expression(odoc["expr"], big, complexified=True)
            openings.append(Opening(_shrink(op, small),
                                    odoc.get("sign", "nonzero")))
        system = make_system(n, [_shrink(p, small) for p in parsed],
                             openings, order=max_order)
        probes = {}
        for pname, pdoc in probe_docs.items():
            z_vals = [_gauss(v, f"strata.{sname}.probes.{pname}.z")
                      for v in _field(pdoc, "z", f"strata.{sname}.probes.{pname}")]
            w_jets = []
            k = 0
            while True:
                key = "w" if k == 0 else f"w_{k}"
                if key not in pdoc:
                    break
                w_jets.append([_gauss(v, f"...{key}") for v in pdoc[key]])
                k += 1
            while len(w_jets) < max_order:
                w_jets.append([Fraction(0)] * n)
            probes[pname] = probe_from_values(n, max_order, z_vals, w_jets)
        strata[sname] = (system, probes)

    return LoadedProblem(doc, name, problem_digest(doc), two_n, coords, problem,
                         points, jets, flags, strata,
                         doc.get("pseudo_ellipsoid") or {}, structure_warnings)


def _order_of(name):
    from .jets import var_jet_order
    return var_jet_order(name)


def _shrink(p: Polynomial, small):
    if any(v not in small for v in p.used_variables()):
        raise SchemaViolation("equality uses a jet above the declared order")
    keep = [p.vars.index(v) for v in small]
    return Polynomial(small, {tuple(e[i] for i in keep): c
                              for e, c in p.terms.items()})


def _gauss(value, path):
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise SchemaViolation(f"{path}: complex values are [re, im] pairs")
        return gaussian(rat(value[0]), rat(value[1]))
    return gaussian(rat(value), 0)


# ----------------------------------------------------------------------
# emission


def jsonable(value):
    """Exact canonical JSON form: rationals as strings, no floats ever."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, GaussianRational):
        return scalar_str(value)
    if isinstance(value, Polynomial):
        return print_polynomial(value)
    if isinstance(value, RationalFunction):
        return repr(value)
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, float):
        raise SchemaViolation("internal error: a float reached the report layer")
    if hasattr(value, "__dataclass_fields__"):
        return {k: jsonable(getattr(value, k))
                for k in value.__dataclass_fields__}
    return str(value)


@dataclass
class Report:
    command: str
    problem: str
    digest: str
    options: dict
    results: dict
    warnings: list

    def to_obj(self):
        return {
            "command": self.command,
            "problem": self.problem,
            "problem_digest": self.digest,
            "options": jsonable(self.options),
            "results": jsonable(self.results),
            "warnings": jsonable(list(self.warnings)),
        }


def _flatten(obj, prefix, lines):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(obj[k], f"{prefix}.{k}" if prefix else k, lines)
    elif isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            lines.append(f"{prefix} = [{', '.join(str(v) for v in obj)}]")
        else:
            for i, v in enumerate(obj):
                _flatten(v, f"{prefix}[{i}]", lines)
    else:
        lines.append(f"{prefix} = {obj}")


def emit_report(report: Report, fmt: str = "json") -> bytes:
    obj = report.to_obj()
    if fmt == "json":
        return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode()
    if fmt == "text":
        lines = [f"diskeds {report.command} on {report.problem}"]
        _flatten(obj, "", lines)
        return ("\n".join(lines) + "\n").encode()
    raise SchemaViolation(f"unknown format {fmt!r}")
