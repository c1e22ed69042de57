"""Compiled kernels vs the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times each kernel on representative inputs, then a full solve (maximize plus
every query) with each backend swapped in.
"""

import argparse
import timeit

import numpy as np

from mlevidence import (
    KnowledgeBase,
    _kernels,
    build_knowledge_base,
    conditional_interval,
    example_path,
    maximize,
    maximizer_polytope,
    parse_evidence,
    prob_interval,
)
from mlevidence._kernels import compiled_backend, python_backend
from mlevidence.evidence import Experiment
from mlevidence.formula import Var

NAMES = ("pivot", "choose_entering", "ratio_test", "loglik_grad", "line_search")


def kernel_cases(rng):
    T = np.ascontiguousarray(rng.normal(size=(40, 90)))
    T[:-1, -1] = np.abs(T[:-1, -1])
    basis = np.arange(50, 89, dtype=np.int64)
    costs = np.ascontiguousarray(rng.normal(size=90))
    M = np.ascontiguousarray((rng.random((12, 64)) < 0.5).astype(float))
    k = rng.integers(1, 50, 12).astype(float)
    x = rng.dirichlet(np.ones(64))
    s = M @ x
    delta = np.ascontiguousarray(M @ (rng.dirichlet(np.ones(64)) - x))
    return {
        "pivot": lambda be: be.pivot(T.copy(), 5, 7),
        "choose_entering": lambda be: be.choose_entering(costs, 89, 1e-9),
        "ratio_test": lambda be: be.ratio_test(T, 7, basis, 1e-9),
        "loglik_grad": lambda be: be.loglik_grad(M, k, x),
        "line_search": lambda be: be.line_search(s, delta, k, 1.0),
    }


def six_atom_model(rng):
    kb = KnowledgeBase()
    atoms = [Var(f"X{i}") for i in range(6)]
    for a in atoms:
        kb.register_atom(a.name)
    for i in range(6):
        kb.add_experiment(Experiment(atoms[i], int(rng.integers(1, 30)), 30))
        kb.add_experiment(Experiment(atoms[i] & atoms[(i + 1) % 6], int(rng.integers(0, 10)), 30))
    return kb.compile()


def full_solve(model, queries):
    r = maximize(model)
    mp = maximizer_polytope(model, r)
    for e, c in queries:
        if c is None:
            prob_interval(mp, e)
        else:
            conditional_interval(mp, e, c)


def use(backend):
    for name in NAMES:
        setattr(_kernels, name, getattr(backend, name))


def best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if compiled_backend is None:
        raise SystemExit("compiled extension not built: python3 setup.py build_ext --inplace")

    rng = np.random.default_rng(0)
    print(f"{'kernel':<18}{'numpy (us)':>12}{'cython (us)':>13}{'speedup':>9}")
    for name, case in kernel_cases(rng).items():
        slow = best(lambda: case(python_backend), args.repeat, 2000) * 1e6
        fast = best(lambda: case(compiled_backend), args.repeat, 2000) * 1e6
        print(f"{name:<18}{slow:>12.2f}{fast:>13.2f}{slow / fast:>8.1f}x")

    poker = example_path("poker_1234")
    ef = parse_evidence(poker.read_text())
    poker_model = build_knowledge_base(ef).compile()
    poker_q = [(q.event, q.condition) for q in ef.queries]
    big = six_atom_model(rng)
    big_q = [(Var("X0") & Var("X3"), None), (Var("X2"), Var("X5")), (Var("X1") | Var("X4"), Var("X0"))]

    print()
    print(f"{'full solve':<18}{'numpy (ms)':>12}{'cython (ms)':>13}{'speedup':>9}")
    for label, model, qs in (("poker (1)-(4)", poker_model, poker_q), ("6 atoms", big, big_q)):
        use(python_backend)
        slow = best(lambda: full_solve(model, qs), args.repeat, 5) * 1e3
        use(compiled_backend)
        fast = best(lambda: full_solve(model, qs), args.repeat, 5) * 1e3
        print(f"{label:<18}{slow:>12.2f}{fast:>13.2f}{slow / fast:>8.1f}x")


if __name__ == "__main__":
    main()
