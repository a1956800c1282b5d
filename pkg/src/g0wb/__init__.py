"""Exact-arithmetic workbench for formal q-series: modular equations and
their verification, Hauptmodul-candidate screening, replication recursions,
and the two-generator braid group with its matrix projection, multiplier
character, extended group law, and quilt action."""

from .exactnum import BigRational, CyclotomicNumber, cyclotomic_polynomial, galois_apply
from .matrices import IDENTITY, IntMatrix
from .qseries import (
    Comparison,
    PuiseuxSeries,
    SeriesMeta,
    compare_to_order,
    emit_qexp,
    parse_qexp,
    series_arith,
    substitute_coset,
)
from .modeq import (
    CosetSet,
    ModularPolynomial,
    UnivariatePoly,
    VerificationReport,
    average_sum,
    build_modular_polynomial,
    coset_set,
    emit_mpoly,
    express_in_generator,
    parse_mpoly,
    psi,
    symmetry_check,
    verify_modular_equation,
)
from .hauptmodul import (
    Classification,
    bootstrap_extend,
    check_replication,
    classify,
    congruence_membership,
    detect_fiction,
)
from .braid import (
    BraidWord,
    ExtendedElement,
    GroupTable,
    braid_multiplier,
    burau,
    degree,
    extended_mul,
    lift_braid,
    quilt_orbit,
    quilt_step,
    sigma_class,
)
from .corpus import CorpusEntry, ingest, load_corpus
from .goldens import GOLDEN_ORDER2

__version__ = "0.1.0"

__all__ = [
    "BigRational", "CyclotomicNumber", "cyclotomic_polynomial", "galois_apply",
    "IntMatrix", "IDENTITY",
    "PuiseuxSeries", "SeriesMeta", "Comparison", "series_arith",
    "substitute_coset", "compare_to_order", "emit_qexp", "parse_qexp",
    "CosetSet", "ModularPolynomial", "UnivariatePoly", "VerificationReport",
    "coset_set", "psi", "average_sum", "build_modular_polynomial",
    "verify_modular_equation", "express_in_generator", "symmetry_check",
    "emit_mpoly", "parse_mpoly",
    "Classification", "classify", "detect_fiction", "bootstrap_extend",
    "check_replication", "congruence_membership",
    "BraidWord", "ExtendedElement", "GroupTable", "burau", "degree",
    "braid_multiplier", "sigma_class", "extended_mul", "lift_braid",
    "quilt_step", "quilt_orbit",
    "CorpusEntry", "load_corpus", "ingest",
    "GOLDEN_ORDER2",
]
