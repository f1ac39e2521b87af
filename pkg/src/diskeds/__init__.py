"""Exact analyzer for Pfaffian systems of disk germs in hypersurfaces."""

from .exact import GaussianRational, Rational, gaussian, rat
from .expr import (
    Polynomial,
    RationalFunction,
    conjugate_involution,
    differentiate,
    evaluate,
    parse_expression,
    print_polynomial,
    ratfn_arithmetic,
)
from .geometry import (
    FirstJetPoint,
    GammaBetaData,
    HypersurfaceProblem,
    StructureMatrix,
    choose_pair,
    complex_standard,
    compute_gamma_beta,
    full_jet,
    make_structure_from_pair,
    structure_from_entries,
)
from .involutivity import (
    DVectors,
    TableauReport,
    compute_D_vectors,
    involutivity_order,
    prolongation_dims,
)
from .torsion import (
    ComplexTorsionData,
    StructureEquationData,
    TorsionVerdict,
    complex_B_coefficients,
    complex_torsion_quadratics,
    dim6_definiteness,
    pseudo_ellipsoid_check,
    structure_equation_coefficients,
    torsion_absorbable,
)
from .integral_element import (
    FlagSpec,
    PolarSystem,
    build_polar_maps,
    kahler_regularity,
    ordinary_element_search,
)
from .jets import (
    JetConstraintSystem,
    StratumReport,
    involution_loop,
    levi_form,
    make_system,
    prolong_constraints,
    reduce_redundant,
    stratum_analyze,
)

__version__ = "0.1.0"
