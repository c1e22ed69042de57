"""Maximum-likelihood combination of experimental evidence over propositions.

Experiments (``n`` of ``m`` trials, optionally conditional), propositional
axioms and probability bounds are compiled into a concave log-likelihood on
the simplex of joint distributions.  Queries are answered with the exact
interval of probabilities over every maximum-likelihood distribution.
"""

from importlib import resources

from .dsl import EvidenceFile, build_knowledge_base, format_evidence, parse_evidence
from .errors import (
    ContradictionError,
    EvidenceError,
    FormulaSyntaxError,
    InfeasibleError,
    PolynomialityError,
)
from .evidence import (
    Axiom,
    CompiledModel,
    Experiment,
    IntervalConstraint,
    KnowledgeBase,
    log_likelihood,
    log_likelihood_gradient,
)
from .formula import (
    FALSE,
    TRUE,
    Atom,
    AtomRegistry,
    Formula,
    Var,
    eval_formula,
    format_formula,
    iff,
    implies,
    observation_vector,
    parse_formula,
    prob_of,
    truth_table_order,
)
from .lp import LinearProgram, solve_lp
from .optimizer import FeasiblePolytope, SolveResult, find_interior_point, maximize
from .query import (
    ImpossibleConditionError,
    MaximizerPolytope,
    ProbabilityInterval,
    conditional_interval,
    maximizer_polytope,
    null_space_basis,
    prob_interval,
)


def example_path(name: str):
    """Path of a shipped evidence file, e.g. ``example_path("poker_12")``."""
    return resources.files(__package__) / "data" / f"{name}.ev"


__all__ = [name for name in dir() if not name.startswith("_") and name != "resources"]
