"""Diagonal embedding of a SAT instance as a violated-clause-count operator.

The operator is diagonal in the computational basis, so it is stored as a
length-2**n integer array rather than a matrix. Each clause penalizes exactly
the assignments matching its unique violating local pattern (bit (i-1) of the
basis index holds variable i; bit 1 = TRUE).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError
from .instances import MAX_ENUMERATION_N, SatInstance


@dataclass(frozen=True)
class DiagonalObjective:
    """Energies per basis state plus ground-state data; immutable once built."""

    n: int
    energies: np.ndarray
    ground_energy: int
    ground_set: np.ndarray

    @property
    def degeneracy(self) -> int:
        return len(self.ground_set)

    @property
    def dim(self) -> int:
        return 1 << self.n


def embed(inst: SatInstance, max_n: int = MAX_ENUMERATION_N) -> DiagonalObjective:
    """Build the diagonal objective for a SAT instance.

    For every basis index z, energies[z] counts the clauses whose violating
    local assignment matches z on the clause's variables, i.e. each clause
    contributes a rank-one projector onto a 2**(n-k)-dimensional subcube.
    """
    if inst.n > max_n:
        raise ResourceLimitError(f"n={inst.n} exceeds the statevector bound {max_n}")
    dim = 1 << inst.n
    idx = np.arange(dim, dtype=np.int64)
    energies = np.zeros(dim, dtype=np.int32)
    for clause in inst.clauses:
        # Violating pattern: every literal false, i.e. bit == 1 exactly when negated.
        hit = np.ones(dim, dtype=bool)
        for lit in clause:
            bit = (idx >> (lit.var - 1)) & 1
            hit &= bit == (1 if lit.negated else 0)
        energies += hit
    ground_energy = int(energies.min())
    ground_set = np.flatnonzero(energies == ground_energy)
    energies.setflags(write=False)
    ground_set.setflags(write=False)
    return DiagonalObjective(
        n=inst.n, energies=energies, ground_energy=ground_energy, ground_set=ground_set
    )


def expectation(diag: DiagonalObjective, psi: np.ndarray) -> float:
    """<psi|H|psi> for the diagonal operator: sum_z |psi_z|^2 * energies[z]."""
    if psi.shape != diag.energies.shape:
        raise ValueError(f"statevector length {psi.shape} does not match 2**{diag.n}")
    probs = (psi.conj() * psi).real
    norm = probs.sum()
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"statevector is not normalized: |psi|^2 = {norm!r}")
    return float(probs @ diag.energies)
