"""Exact computation in the virtual Temperley-Lieb algebra VTL_n(d)."""

from .algebra import (
    ClassNonUniformError,
    ClassTable,
    Element,
    NumericElement,
    class_decompose,
    class_expand,
    class_mul,
    element_combine,
    element_eval,
    element_mul,
    markov_trace,
)
from .diagram import (
    CompositionResult,
    Diagram,
    DiagramError,
    canonical_k_element,
    closure_loops,
    compose,
    enumerate_diagrams,
    generator,
    is_planar,
    through_strands,
)
from .exactfield import PoleError, Polynomial, RationalFunction, poly_gcd, rf_arith, rf_eval
from .projector import (
    coeff_ce_recursive,
    coeff_explicit,
    f_explicit,
    f_kernel,
    f_recursive,
    f_simplified,
    jones_wenzl,
    trace_closed_form,
)
from .verify import Check, Report, run_suite

__version__ = "0.1.0"
