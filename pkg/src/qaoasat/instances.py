"""Random k-SAT instances, DIMACS round-trip, and an exhaustive MAX-SAT oracle.

Assignments are encoded as basis indices: variable i lives in bit (i-1) of the
index, with bit value 1 meaning TRUE. This convention is shared project-wide.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .errors import DimacsError, ResourceLimitError

# 2**n enumeration/statevector cap shared with the diagonal embedding.
MAX_ENUMERATION_N = 24


class Literal(NamedTuple):
    var: int
    negated: bool

    def to_int(self) -> int:
        """DIMACS encoding: negative integer for a negated variable."""
        return -self.var if self.negated else self.var

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("0 is not a valid literal")
        return cls(abs(lit), lit < 0)


Clause = tuple[Literal, ...]


@dataclass(frozen=True)
class SatInstance:
    """An n-variable k-SAT formula; immutable and safe to share between workers."""

    n: int
    k: Optional[int]
    clauses: tuple[Clause, ...]
    seed: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one variable, got n={self.n}")
        for clause in self.clauses:
            vars_ = [lit.var for lit in clause]
            if len(set(vars_)) != len(vars_):
                raise ValueError(f"clause {clause} repeats a variable")
            if any(v < 1 or v > self.n for v in vars_):
                raise ValueError(f"clause {clause} references a variable outside [1, {self.n}]")
            if self.k is not None and len(clause) != self.k:
                raise ValueError(f"clause {clause} has width {len(clause)}, expected k={self.k}")

    @property
    def m(self) -> int:
        return len(self.clauses)

    def density(self) -> Fraction:
        """Clause density m/n as an exact rational."""
        return Fraction(self.m, self.n)


def generate_instance(
    n: int, m: int, k: int, seed: int, unique_clauses: bool = False
) -> SatInstance:
    """Draw a random k-SAT instance with m clauses over n variables.

    Each clause picks k distinct variables uniformly without replacement and an
    independent fair-coin polarity per literal. Clauses are drawn independently,
    so duplicates across the instance are allowed unless ``unique_clauses`` is
    set, in which case clauses are rejection-sampled to be pairwise distinct
    (compared with literals sorted by variable).

    RNG: numpy PCG64 seeded via SeedSequence(seed); identical arguments
    reproduce the identical instance.
    """
    if n < 1:
        raise ValueError(f"need at least one variable, got n={n}")
    if m < 0:
        raise ValueError(f"clause count must be nonnegative, got m={m}")
    if k < 1 or k > n:
        raise ValueError(f"clause width k={k} must satisfy 1 <= k <= n")

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    variables = np.arange(1, n + 1)

    def draw_clause() -> Clause:
        vars_ = rng.choice(variables, size=k, replace=False)
        negs = rng.random(k) < 0.5
        return tuple(Literal(int(v), bool(neg)) for v, neg in zip(vars_, negs))

    clauses: list[Clause] = []
    if unique_clauses:
        seen: set[Clause] = set()
        limit = math.comb(n, k) * 2**k
        if m > limit:
            raise ValueError(f"cannot draw {m} distinct clauses; only {limit} exist for n={n}, k={k}")
        while len(clauses) < m:
            canonical = tuple(sorted(draw_clause(), key=lambda lit: lit.var))
            if canonical not in seen:
                seen.add(canonical)
                clauses.append(canonical)
    else:
        clauses = [draw_clause() for _ in range(m)]

    return SatInstance(n=n, k=k, clauses=tuple(clauses), seed=seed)


def _assignment_index(n: int) -> np.ndarray:
    if n > MAX_ENUMERATION_N:
        raise ResourceLimitError(f"n={n} exceeds the enumeration bound {MAX_ENUMERATION_N}")
    return np.arange(1 << n, dtype=np.int64)


def violation_counts(inst: SatInstance, max_n: int = MAX_ENUMERATION_N) -> np.ndarray:
    """Violated-clause count for every assignment, by truth-evaluating each clause.

    A clause is violated iff all of its literals are false; this evaluates the
    satisfaction disjunction directly, independent of the projector embedding.
    """
    if inst.n > max_n:
        raise ResourceLimitError(f"n={inst.n} exceeds the enumeration bound {max_n}")
    idx = _assignment_index(inst.n)
    counts = np.zeros(idx.shape, dtype=np.int32)
    for clause in inst.clauses:
        sat = np.zeros(idx.shape, dtype=bool)
        for lit in clause:
            bit = (idx >> (lit.var - 1)) & 1
            sat |= (bit == 0) if lit.negated else (bit == 1)
        counts += ~sat
    return counts


def brute_force_min_violations(
    inst: SatInstance, max_n: int = MAX_ENUMERATION_N
) -> tuple[int, np.ndarray]:
    """Exhaustive MAX-SAT: (minimum violated-clause count, all achieving assignments).

    Assignments are returned as basis indices under the project bit convention.
    """
    counts = violation_counts(inst, max_n=max_n)
    best = int(counts.min())
    return best, np.flatnonzero(counts == best)


def write_dimacs(inst: SatInstance) -> str:
    """Serialize to DIMACS CNF: 'p cnf n m' header, 0-terminated clause lines."""
    lines = [f"p cnf {inst.n} {inst.m}"]
    for clause in inst.clauses:
        lines.append(" ".join(str(lit.to_int()) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> SatInstance:
    """Parse DIMACS CNF text produced by :func:`write_dimacs` (or compatible).

    Comment lines ('c ...') and blank lines are skipped. All clauses must share
    one width k; parsed instances carry no generator seed (k is None when the
    formula has no clauses).
    """
    n = None
    m_declared = None
    clauses: list[Clause] = []
    k: Optional[int] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if n is not None:
                raise DimacsError("duplicate problem line", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed problem line {line!r}", lineno)
            try:
                n, m_declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"non-integer counts in problem line {line!r}", lineno) from None
            if n < 1 or m_declared < 0:
                raise DimacsError(f"invalid counts in problem line {line!r}", lineno)
            continue
        if n is None:
            raise DimacsError("clause before problem line", lineno)
        try:
            tokens = [int(tok) for tok in line.split()]
        except ValueError:
            raise DimacsError(f"non-integer literal in {line!r}", lineno) from None
        if not tokens or tokens[-1] != 0:
            raise DimacsError("clause line must end with 0", lineno)
        lits = tokens[:-1]
        if 0 in lits:
            raise DimacsError("literal 0 inside clause", lineno)
        if any(abs(lit) > n for lit in lits):
            raise DimacsError(f"literal out of range [1, {n}]", lineno)
        clause = tuple(Literal.from_int(lit) for lit in lits)
        if len({lit.var for lit in clause}) != len(clause):
            raise DimacsError("clause repeats a variable", lineno)
        if k is None:
            k = len(clause)
        elif len(clause) != k:
            raise DimacsError(f"clause width {len(clause)} differs from {k}", lineno)
        clauses.append(clause)
    if n is None:
        raise DimacsError("missing problem line")
    if m_declared != len(clauses):
        raise DimacsError(f"header declares {m_declared} clauses but {len(clauses)} found")
    return SatInstance(n=n, k=k, clauses=tuple(clauses), seed=None)
