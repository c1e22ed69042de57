import numpy as np
import pytest

from mlevidence import Experiment, KnowledgeBase, Var, example_path
from mlevidence.formula import And, Iff, Implies, Not, Or

A, B = Var("A"), Var("B")

# Harry's poker statements (1)-(4)
POKER = {
    1: Experiment(A, 9, 30),
    2: Experiment(B, 5, 40),
    3: Experiment(B, 5, 6, condition=A),
    4: Experiment(B, 0, 200),
}

# world index = bit 0 for A, bit 1 for B; the (a, b, c, d) order used below is
# (A&B, A&!B, !A&B, !A&!B)
ABCD_ORDER = [3, 1, 2, 0]


def abcd(vec):
    """Reorder a storage-order 4-vector into (a, b, c, d)."""
    return np.asarray(vec)[ABCD_ORDER]


def from_abcd(a, b, c, d):
    out = np.zeros(4)
    out[ABCD_ORDER] = [a, b, c, d]
    return out


def poker_kb(*statements, axioms=(), intervals=()):
    kb = KnowledgeBase()
    kb.register_atom("A", "Harry lit his pipe")
    kb.register_atom("B", "Harry has two pair")
    for s in statements:
        kb.add_experiment(POKER[s])
    for a in axioms:
        kb.add_axiom(a)
    for ic in intervals:
        kb.add_interval(ic)
    return kb


def poker_model(*statements, **kw):
    return poker_kb(*statements, **kw).compile()


def random_formula(rng, names, depth=3):
    if depth == 0 or rng.random() < 0.3:
        return Var(names[rng.integers(len(names))])
    op = rng.integers(5)
    if op == 0:
        return Not(random_formula(rng, names, depth - 1))
    cls = (And, Or, Implies, Iff)[op - 1]
    return cls(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1))


def random_model(rng, n_atoms=None, n_experiments=None, conditional=True):
    """Random polynomial-likelihood model; unconditional evidence on every
    condition is added first so compilation never fails."""
    n_atoms = n_atoms or int(rng.integers(1, 5))
    names = [f"X{i}" for i in range(n_atoms)]
    while True:
        kb = KnowledgeBase()
        for n in names:
            kb.register_atom(n)
        for _ in range(n_experiments or int(rng.integers(1, 6))):
            m = int(rng.integers(1, 40))
            n = int(rng.integers(0, m + 1))
            event = random_formula(rng, names)
            if conditional and rng.random() < 0.3:
                cond = random_formula(rng, names, 2)
                kb.add_experiment(Experiment(cond, m, m + int(rng.integers(0, 10))))
                kb.add_experiment(Experiment(event, n, m, condition=cond))
            else:
                kb.add_experiment(Experiment(event, n, m))
        try:
            model = kb.compile()
        except Exception:
            continue
        if model.terms:
            return model


SHIPPED_2ATOM = ["poker_12", "poker_123", "poker_1234", "poker_123_axiom", "coin"]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=SHIPPED_2ATOM)
def shipped_2atom(request):
    return example_path(request.param)


# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
