"""Exact rational-function kernel: arithmetic, derivations, operators, local analysis."""

from .derivation import Derivation, InertSymbolError, d_t, derive, partial
from .grammar import ParseError, format_ratfunc, parse
from .linop import GaugeLog, Jet, JetReducer, LinOp, conjugate
from .local import (
    INFINITY,
    IrregularSingularityError,
    PartialFractions,
    UndeclaredPoleError,
    at_infinity,
    frobenius_obstruction,
    indicial_exponents,
    partial_fractions_t,
    residue_t,
)
from .polys import (
    INERT,
    THETA_VARIABLES,
    VARIABLES,
    EvaluationBudgetExceeded,
    MultiPoly,
    RatFunc,
    const,
    is_zero,
    random_point,
    var,
)
