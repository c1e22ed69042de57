"""Knowledge base of experiments, axioms and interval constraints.

Compiling a knowledge base produces a :class:`CompiledModel`: the likelihood
as a product of powers of linear forms ``(o_i . j) ** k_i`` plus the linear
description of the feasible set of joint distributions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import ContradictionError, EvidenceError, InfeasibleError, PolynomialityError
from .formula import TRUE, And, AtomRegistry, Formula, Not, format_formula, observation_vector


@dataclass(frozen=True)
class Experiment:
    """``successes`` of ``trials`` iid trials found ``event`` true.

    With a non-trivial ``condition`` only trials where the condition held
    were counted.
    """

    event: Formula
    successes: int
    trials: int
    condition: Formula = TRUE

    def __post_init__(self):
        for name in ("successes", "trials"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise EvidenceError(f"{name} must be an integer, got {v!r}")
        if self.trials < 1:
            raise EvidenceError(f"trials must be positive, got {self.trials}")
        if not 0 <= self.successes <= self.trials:
            raise EvidenceError(
                f"successes must lie in [0, {self.trials}], got {self.successes}"
            )

    @property
    def conditional(self) -> bool:
        return self.condition != TRUE

    def __str__(self):
        ev = format_formula(self.event)
        if self.conditional:
            ev = f"{ev} given {format_formula(self.condition)}"
        return f"{ev}: {self.successes}/{self.trials}"


@dataclass(frozen=True)
class Axiom:
    formula: Formula


@dataclass(frozen=True)
class IntervalConstraint:
    formula: Formula
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise EvidenceError("interval bounds must be finite")
        if lo > hi:
            raise EvidenceError(f"empty interval: lower bound {lo} exceeds upper bound {hi}")
        if lo < 0.0 or hi > 1.0:
            raise EvidenceError(f"interval [{lo}, {hi}] is not inside [0, 1]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)


@dataclass(frozen=True)
class Term:
    vector: np.ndarray  # 0/1 over all worlds, zero on zeroed worlds
    exponent: int
    labels: tuple[str, ...] = field(default=(), compare=False)

    def __eq__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        return self.exponent == other.exponent and np.array_equal(self.vector, other.vector)

    def __hash__(self):
        return hash((self.vector.tobytes(), self.exponent))


@dataclass(frozen=True)
class LinearConstraint:
    vector: np.ndarray
    lo: float
    hi: float
    label: str = field(default="", compare=False)
    source: int | None = field(default=None, compare=False)

    def __eq__(self, other):
        if not isinstance(other, LinearConstraint):
            return NotImplemented
        return (self.lo, self.hi) == (other.lo, other.hi) and np.array_equal(
            self.vector, other.vector
        )

    def __hash__(self):
        return hash((self.vector.tobytes(), self.lo, self.hi))


@dataclass(frozen=True, eq=False)
class CompiledModel:
    n_atoms: int
    terms: tuple[Term, ...]
    zeroed_worlds: frozenset[int]
    linear_constraints: tuple[LinearConstraint, ...]
    atom_names: tuple[str, ...] = ()

    @property
    def n_worlds(self) -> int:
        return 1 << self.n_atoms

    @cached_property
    def live(self) -> np.ndarray:
        """Indices of worlds not removed by axioms, ascending."""
        mask = np.ones(self.n_worlds, dtype=bool)
        mask[list(self.zeroed_worlds)] = False
        idx = np.nonzero(mask)[0]
        idx.setflags(write=False)
        return idx

    @cached_property
    def term_matrix(self) -> np.ndarray:
        """Term vectors restricted to live worlds, one row per term (float64)."""
        if not self.terms:
            return np.zeros((0, len(self.live)))
        M = np.ascontiguousarray(
            np.stack([t.vector[self.live] for t in self.terms]).astype(float)
        )
        M.setflags(write=False)
        return M

    @cached_property
    def exponents(self) -> np.ndarray:
        k = np.array([t.exponent for t in self.terms], dtype=float)
        k.setflags(write=False)
        return k

    def restrict(self, jdv) -> np.ndarray:
        """Full-length JDV -> contiguous live-world coordinates."""
        jdv = np.asarray(jdv, dtype=float)
        if jdv.shape != (self.n_worlds,):
            raise ValueError(
                f"dimension mismatch: expected {self.n_worlds} worlds, got {jdv.shape}"
            )
        return np.ascontiguousarray(jdv[self.live])

    def expand(self, x) -> np.ndarray:
        """Live-world coordinates -> full-length vector (zeros elsewhere)."""
        out = np.zeros(self.n_worlds)
        out[self.live] = x
        return out

    @cached_property
    def registry(self) -> AtomRegistry:
        reg = AtomRegistry(max_atoms=max(self.n_atoms, 1))
        for name in self.atom_names:
            reg.register(name)
        reg.freeze()
        return reg

    def vector(self, f: Formula) -> np.ndarray:
        """Observation vector of ``f`` with zeroed worlds cleared."""
        ov = observation_vector(f, self.registry).copy()
        ov[list(self.zeroed_worlds)] = 0
        ov.setflags(write=False)
        return ov

    def term_multiset(self) -> dict[bytes, int]:
        return {t.vector.tobytes(): t.exponent for t in self.terms}

    def same_as(self, other: CompiledModel) -> bool:
        """Equality up to term ordering."""
        return (
            self.n_atoms == other.n_atoms
            and self.zeroed_worlds == other.zeroed_worlds
            and self.term_multiset() == other.term_multiset()
            and sorted(map(hash, self.linear_constraints))
            == sorted(map(hash, other.linear_constraints))
        )


class KnowledgeBase:
    """Mutable collection of evidence; ``compile`` freezes it."""

    def __init__(self, registry: AtomRegistry | None = None):
        self.registry = registry if registry is not None else AtomRegistry()
        self.experiments: list[tuple[Experiment, int | None]] = []
        self.axioms: list[tuple[Axiom, int | None]] = []
        self.intervals: list[tuple[IntervalConstraint, int | None]] = []
        self._compiled: CompiledModel | None = None

    def register_atom(self, name: str, description: str | None = None):
        return self.registry.register(name, description)

    def _check_open(self):
        if self._compiled is not None:
            raise EvidenceError("knowledge base is already compiled")

    def _check_atoms(self, *formulas: Formula, source=None):
        for f in formulas:
            for name in sorted(f.atoms()):
                if name not in self.registry:
                    raise EvidenceError(f"undeclared atom {name!r}", (source,))

    def add_experiment(self, e: Experiment, source: int | None = None) -> KnowledgeBase:
        self._check_open()
        self._check_atoms(e.event, e.condition, source=source)
        self.experiments.append((e, source))
        return self

    def add_axiom(self, a: Axiom | Formula, source: int | None = None) -> KnowledgeBase:
        self._check_open()
        if isinstance(a, Formula):
            a = Axiom(a)
        self._check_atoms(a.formula, source=source)
        if not observation_vector(a.formula, self.registry).any():
            raise InfeasibleError(
                f"axiom {format_formula(a.formula)} is unsatisfiable", (source,)
            )
        self.axioms.append((a, source))
        return self

    def add_interval(
        self, ic: IntervalConstraint, source: int | None = None
    ) -> KnowledgeBase:
        self._check_open()
        self._check_atoms(ic.formula, source=source)
        self.intervals.append((ic, source))
        return self

    def compile(self) -> CompiledModel:
        if self._compiled is not None:
            return self._compiled
        if len(self.registry) == 0:
            raise EvidenceError("no atoms registered")
        self.registry.freeze()
        reg = self.registry

        def ov(f):
            return observation_vector(f, reg)

        live = np.ones(reg.n_worlds, dtype=np.uint8)
        for a, _ in self.axioms:
            live &= ov(a.formula)
        if not live.any():
            raise InfeasibleError(
                "the axioms are jointly unsatisfiable", [s for _, s in self.axioms]
            )
        axiom_sources = [s for _, s in self.axioms]

        # key -> [vector, exponent, labels, negative contributors]
        acc: dict[bytes, list] = {}

        def contribute(f: Formula, k: int, label: str, source, condition=None):
            if k == 0:
                return
            vec = ov(f) & live
            if k > 0 and not vec.any():
                raise ContradictionError(
                    f"experiment '{label}' observes {format_formula(f)} {k} time(s) "
                    "but the axioms make it impossible; "
                    "discard the evidence or the axiom",
                    [source, *axiom_sources],
                )
            key = vec.tobytes()
            slot = acc.setdefault(key, [vec, 0, [], []])
            slot[1] += k
            slot[2].append(label)
            if k < 0:
                slot[3].append((condition, source))

        for e, src in self.experiments:
            label = str(e)
            n, m = e.successes, e.trials
            if e.conditional:
                x = e.condition
                contribute(And(x, e.event), n, label, src)
                contribute(And(x, Not(e.event)), m - n, label, src)
                contribute(x, -m, label, src, condition=x)
            else:
                contribute(e.event, n, label, src)
                contribute(Not(e.event), m - n, label, src)

        terms = []
        for key in sorted(acc):
            vec, k, labels, negatives = acc[key]
            if k == 0 or not vec.any() or np.array_equal(vec, live):
                # constant factors: x**0, or (sum of all live mass) == 1
                continue
            if k < 0:
                conds = sorted({format_formula(c) for c, _ in negatives})
                raise PolynomialityError(
                    "likelihood is not a polynomial: condition "
                    + ", ".join(repr(c) for c in conds)
                    + f" is used by conditional experiments more often than it was "
                    f"observed to hold (net exponent {k}); each condition used in N "
                    "conditional trials needs an experiment where it held at least N times",
                    [s for _, s in negatives],
                )
            vec = vec.copy()
            vec.setflags(write=False)
            terms.append(Term(vec, int(k), tuple(labels)))

        constraints = []
        for ic, src in self.intervals:
            vec = (ov(ic.formula) & live).copy()
            vec.setflags(write=False)
            constraints.append(
                LinearConstraint(vec, ic.lo, ic.hi, format_formula(ic.formula), src)
            )

        zeroed = frozenset(int(w) for w in np.nonzero(live == 0)[0])
        self._compiled = CompiledModel(
            n_atoms=len(reg),
            terms=tuple(terms),
            zeroed_worlds=zeroed,
            linear_constraints=tuple(constraints),
            atom_names=tuple(reg.names),
        )
        return self._compiled


def log_likelihood(model: CompiledModel, jdv) -> float:
    """``sum_i k_i log(o_i . j)``; ``-inf`` when some ``o_i . j <= 0``."""
    x = model.restrict(jdv)
    value, _, _ = _kernels.loglik_grad(model.term_matrix, model.exponents, x)
    return float(value)


def log_likelihood_gradient(model: CompiledModel, jdv) -> np.ndarray:
    """Gradient over all worlds; zeroed worlds get 0."""
    x = model.restrict(jdv)
    value, grad, s = _kernels.loglik_grad(model.term_matrix, model.exponents, x)
    if value == -math.inf:
        bad = [i for i, v in enumerate(s) if v <= 0.0]
        raise ValueError(
            f"gradient undefined: term(s) {bad} have zero probability at this JDV"
        )
    return model.expand(grad)
