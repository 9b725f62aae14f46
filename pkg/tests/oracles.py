"""Independent reference implementations used as test oracles.

These deliberately avoid the package's vectorized code paths: violation
counting walks clauses literal by literal, satisfiability uses the
implication-graph strong-components criterion, and expectations are plain
Python sums.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse
import scipy.sparse.csgraph

from qaoasat.instances import SatInstance


def count_violated(inst: SatInstance, index: int) -> int:
    """Violated clauses for one assignment given as a basis index."""
    violated = 0
    for clause in inst.clauses:
        sat = False
        for lit in clause:
            value = bool((index >> (lit.var - 1)) & 1)
            if lit.negated:
                value = not value
            if value:
                sat = True
                break
        if not sat:
            violated += 1
    return violated


def enumerate_min_violations(inst: SatInstance) -> tuple[int, list[int]]:
    best, argbest = None, []
    for z in range(1 << inst.n):
        c = count_violated(inst, z)
        if best is None or c < best:
            best, argbest = c, [z]
        elif c == best:
            argbest.append(z)
    return best, argbest


def _lit_node(var: int, negated: bool) -> int:
    return 2 * (var - 1) + (1 if negated else 0)


def two_sat_satisfiable(inst: SatInstance) -> bool:
    """Implication-graph criterion: unsatisfiable iff some variable shares a
    strong component with its own negation."""
    assert all(len(c) == 2 for c in inst.clauses)
    edges = []
    for (l1, l2) in inst.clauses:
        # (l1 or l2): not-l1 implies l2, not-l2 implies l1
        edges.append((_lit_node(l1.var, not l1.negated), _lit_node(l2.var, l2.negated)))
        edges.append((_lit_node(l2.var, not l2.negated), _lit_node(l1.var, l1.negated)))
    size = 2 * inst.n
    if not edges:
        return True
    rows, cols = zip(*edges)
    graph = scipy.sparse.csr_matrix(
        (np.ones(len(edges)), (rows, cols)), shape=(size, size)
    )
    _, labels = scipy.sparse.csgraph.connected_components(graph, directed=True, connection="strong")
    return all(labels[_lit_node(v, False)] != labels[_lit_node(v, True)] for v in range(1, inst.n + 1))


def naive_expectation(energies: np.ndarray, psi: np.ndarray) -> float:
    total = 0.0
    for z in range(len(psi)):
        amp = complex(psi[z])
        total += (amp.real**2 + amp.imag**2) * float(energies[z])
    return total


def transverse_field_unitary(n: int, beta: float) -> np.ndarray:
    """exp(-i beta sum X_i) built from the dense matrix exponential."""
    import scipy.linalg

    X = np.array([[0, 1], [1, 0]], dtype=complex)
    H = np.zeros((1 << n, 1 << n), dtype=complex)
    for q in range(n):
        factor = np.eye(1, dtype=complex)
        for qq in range(n):
            factor = np.kron(X if qq == q else np.eye(2, dtype=complex), factor)
        H += factor
    return scipy.linalg.expm(-1j * beta * H)


def plus_projector_unitary(n: int, beta: float) -> np.ndarray:
    import scipy.linalg

    dim = 1 << n
    s = np.full(dim, dim**-0.5, dtype=complex)
    return scipy.linalg.expm(-1j * beta * np.outer(s, s.conj()))
