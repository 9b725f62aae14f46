"""Single-target search with the projector mixer, reduced to two amplitudes.

The layered dynamics never leave the span of the uniform non-target component
|u> = (N-1)^(-1/2) sum_{x != omega} |x> and the target |omega>, so a depth-p
circuit is a product of p complex 2x2 matrices. The phase layer here multiplies
the non-target component by e^{-i gamma} (the target has zero violation count),
matching the full-simulator embedding of ``search_objective`` amplitude for
amplitude.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .objective import DiagonalObjective
from .optimizer import OptimConfig, OptimResult, multistart_minimize
from .simulator import Params


@dataclass(frozen=True)
class TwoLevelState:
    """Amplitude pair (A on the uniform non-target component, B on the target)."""

    A: complex
    B: complex
    N: int

    def __post_init__(self):
        if self.N < 2:
            raise ValueError(f"search space must have at least 2 states, got N={self.N}")
        norm = abs(self.A) ** 2 + abs(self.B) ** 2
        if abs(norm - 1.0) > 1e-8:
            raise ValueError(f"state is not normalized: |A|^2 + |B|^2 = {norm!r}")


def initial_state(n: int) -> TwoLevelState:
    """|+>^n written in the two-level basis: A = sqrt((N-1)/N), B = 1/sqrt(N)."""
    if n < 1:
        raise ValueError(f"need at least one qubit, got n={n}")
    N = 1 << n
    return TwoLevelState(A=math.sqrt((N - 1) / N), B=math.sqrt(1 / N), N=N)


def layer_matrix(gamma: float, beta: float, N: int) -> np.ndarray:
    """One layer (phase, then rank-one mixer) restricted to the (A, B) subspace.

    With b = e^{-i beta} - 1, the mixer is [[1 + b(N-1)/N, b sqrt(N-1)/N],
    [b sqrt(N-1)/N, 1 + b/N]]; the phase multiplies the A column by e^{-i gamma}.
    Reproduces the full statevector simulation exactly (see tests).
    """
    eg = cmath.exp(-1j * gamma)
    b = cmath.exp(-1j * beta) - 1.0
    root = math.sqrt(N - 1) / N
    return np.array(
        [
            [(1.0 + b * (N - 1) / N) * eg, b * root],
            [b * root * eg, 1.0 + b / N],
        ],
        dtype=np.complex128,
    )


def layer_matrix_ab_swapped(gamma: float, beta: float, N: int) -> np.ndarray:
    """Variant with the phase/mixer factors interchanged and negated couplings.

    With a = e^{-i gamma} - 1 and b = e^{-i beta} - 1 this places a in the
    mixer-like positions and flips the sign of the off-diagonal terms. Retained
    for cross-checking only: it does not reproduce the layered statevector
    simulation except at trivial angles (see tests).
    """
    a = cmath.exp(-1j * gamma) - 1.0
    b = cmath.exp(-1j * beta) - 1.0
    root = math.sqrt(N - 1) / N
    return np.array(
        [
            [1.0 + a * (N - 1) / N, -a * (b + 1.0) * root],
            [-a * root, (b + 1.0) * (1.0 + a / N)],
        ],
        dtype=np.complex128,
    )


def step(s: TwoLevelState, gamma: float, beta: float) -> TwoLevelState:
    """Advance one layer; unitary, so the norm is preserved."""
    M = layer_matrix(gamma, beta, s.N)
    A = M[0, 0] * s.A + M[0, 1] * s.B
    B = M[1, 0] * s.A + M[1, 1] * s.B
    return TwoLevelState(A=complex(A), B=complex(B), N=s.N)


def grover_energy(s: TwoLevelState) -> float:
    """Expected violation count 1 - |B|^2 (the target is the unique zero-energy state)."""
    return 1.0 - (s.B.real**2 + s.B.imag**2)


def _amplitudes_after(x: np.ndarray, p: int, N: int) -> tuple[complex, complex]:
    # Inline recursion for the optimizer hot loop; agrees with chained step()
    # (asserted in tests). Layout [gamma_1..gamma_p, beta_1..beta_p].
    A = math.sqrt((N - 1) / N) + 0j
    B = math.sqrt(1 / N) + 0j
    frac = (N - 1) / N
    root = math.sqrt(N - 1) / N
    inv = 1.0 / N
    xs = [float(v) for v in x]
    for i in range(p):
        eg = cmath.exp(-1j * xs[i])
        b = cmath.exp(-1j * xs[p + i]) - 1.0
        A *= eg
        A, B = (1.0 + b * frac) * A + b * root * B, b * root * A + (1.0 + b * inv) * B
    return A, B


def search_objective(n: int, omega: int = 0) -> DiagonalObjective:
    """Diagonal with a single zero-energy target and unit energy elsewhere."""
    N = 1 << n
    if not 0 <= omega < N:
        raise ValueError(f"target index {omega} outside [0, {N})")
    energies = np.ones(N, dtype=np.int32)
    energies[omega] = 0
    energies.setflags(write=False)
    ground_set = np.array([omega], dtype=np.int64)
    ground_set.setflags(write=False)
    return DiagonalObjective(n=n, energies=energies, ground_energy=0, ground_set=ground_set)


def embed_two_level(s: TwoLevelState, omega: int = 0) -> np.ndarray:
    """Expand (A, B) into the full 2**n statevector with target index omega."""
    psi = np.full(s.N, s.A / math.sqrt(s.N - 1), dtype=np.complex128)
    psi[omega] = s.B
    return psi


def _full_rotation_start(p: int) -> np.ndarray:
    # All angles pi: each layer is then an exact amplitude-amplification step,
    # optimal while the accumulated rotation stays below a quarter turn.
    return np.full(2 * p, math.pi)


def grover_minimize(n: int, p: int, cfg: OptimConfig) -> OptimResult:
    """Minimize 1 - |B_p|^2 over the 2p angles via the two-amplitude recursion.

    Cost is independent of 2**n. The exact minimum is 0 at sufficient depth, so
    the deficit equals the energy.
    """
    if p < 0:
        raise ValueError(f"depth must be nonnegative, got p={p}")
    N = 1 << n
    if p == 0:
        s = initial_state(n)
        energy = grover_energy(s)
        return OptimResult(
            params=Params.empty(),
            energy=energy,
            deficit=energy,
            overlap=1.0 - energy,
            evals_used=1,
            restart_index=0,
            converged=True,
        )

    def energy_of(x: np.ndarray) -> float:
        _, B = _amplitudes_after(x, p, N)
        return 1.0 - (B.real**2 + B.imag**2)

    lows = np.zeros(2 * p)
    highs = np.full(2 * p, 2 * math.pi)
    x, _, evals, idx, converged = multistart_minimize(
        energy_of, p, lows, highs, cfg, extra_starts=[_full_rotation_start(p)]
    )
    energy = energy_of(x)
    return OptimResult(
        params=Params.from_vector(x),
        energy=energy,
        deficit=energy,
        overlap=1.0 - energy,
        evals_used=evals,
        restart_index=idx,
        converged=converged,
    )


def depth_sweep(
    n: int, p_max: int, cfg: OptimConfig, stop_tol: Optional[float] = None
) -> list[OptimResult]:
    """Optimize depths 0..p_max with warm starts; stop once energy <= stop_tol."""
    results: list[OptimResult] = []
    warm: Optional[Params] = None
    for p in range(p_max + 1):
        res = grover_minimize(n, p, replace(cfg, warm_start=warm))
        results.append(res)
        if stop_tol is not None and res.energy <= stop_tol:
            break
        warm = res.params
    return results


def grover_pstar(n: int, energy_tol: float, p_max: int, cfg: OptimConfig) -> Optional[int]:
    """Minimum depth with optimized energy <= energy_tol, or None if not reached."""
    if energy_tol <= 0:
        raise ValueError(f"energy tolerance must be positive, got {energy_tol}")
    results = depth_sweep(n, p_max, cfg, stop_tol=energy_tol)
    for p, res in enumerate(results):
        if res.energy <= energy_tol:
            return p
    return None
