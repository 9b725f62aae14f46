"""Layered ansatz construction on a dense statevector.

Statevectors are 1-D complex128 numpy arrays of length 2**n. The kernels
mutate their buffer in place and return it; a buffer must not be shared
between concurrent evaluations.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError
from .instances import MAX_ENUMERATION_N
from .objective import DiagonalObjective


class Driver(str, enum.Enum):
    """Mixer generator: per-qubit transverse field or the rank-one plus-state projector."""

    TRANSVERSE_FIELD = "x"
    PLUS_PROJECTOR = "plus"


@dataclass(frozen=True)
class Params:
    """Layer angles (gammas alternate with betas, one pair per layer)."""

    gammas: np.ndarray
    betas: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "gammas", np.asarray(self.gammas, dtype=float))
        object.__setattr__(self, "betas", np.asarray(self.betas, dtype=float))
        if self.gammas.shape != self.betas.shape or self.gammas.ndim != 1:
            raise ValueError("gammas and betas must be 1-D arrays of equal length")

    @property
    def p(self) -> int:
        return len(self.gammas)

    def to_vector(self) -> np.ndarray:
        """Flat layout [gamma_1..gamma_p, beta_1..beta_p] used by the optimizer."""
        return np.concatenate([self.gammas, self.betas])

    @classmethod
    def from_vector(cls, x: np.ndarray) -> "Params":
        x = np.asarray(x, dtype=float)
        if x.size % 2:
            raise ValueError(f"parameter vector length {x.size} is odd")
        p = x.size // 2
        return cls(gammas=x[:p], betas=x[p:])

    @classmethod
    def empty(cls) -> "Params":
        return cls(gammas=np.empty(0), betas=np.empty(0))

    def padded(self) -> "Params":
        """One extra layer with (gamma, beta) = (0, 0); reproduces this circuit exactly."""
        return Params(gammas=np.append(self.gammas, 0.0), betas=np.append(self.betas, 0.0))


def plus_state(n: int, max_n: int = MAX_ENUMERATION_N) -> np.ndarray:
    """Uniform superposition |+>^n: every amplitude 2**(-n/2)."""
    if n < 1:
        raise ValueError(f"need at least one qubit, got n={n}")
    if n > max_n:
        raise ResourceLimitError(f"n={n} exceeds the statevector bound {max_n}")
    return np.full(1 << n, 2.0 ** (-n / 2), dtype=np.complex128)


def apply_phase(psi: np.ndarray, diag: DiagonalObjective, gamma: float) -> np.ndarray:
    """psi_z *= exp(-i * gamma * energies[z]), in place."""
    if psi.shape != diag.energies.shape:
        raise ValueError(f"statevector length {psi.shape} does not match 2**{diag.n}")
    psi *= np.exp(-1j * gamma * diag.energies)
    return psi


# Below this size one dense matvec beats the per-qubit sweep (call overhead
# dominates on tiny buffers). The n-qubit rotation matrix factorizes per qubit,
# so its (z, z') entry is c^(n-d) * s^d with d the Hamming distance z ^ z';
# the distance matrix is cached per n.
_DENSE_MIXER_MAX_N = 8
_HAMMING_CACHE: dict[int, np.ndarray] = {}


def _hamming_matrix(n: int) -> np.ndarray:
    cached = _HAMMING_CACHE.get(n)
    if cached is None:
        idx = np.arange(1 << n, dtype=np.uint32)
        cached = np.bitwise_count(idx[:, None] ^ idx[None, :]).astype(np.intp)
        cached.setflags(write=False)
        _HAMMING_CACHE[n] = cached
    return cached


def _apply_transverse_field(psi: np.ndarray, n: int, beta: float) -> np.ndarray:
    # exp(-i beta sum_i X_i) factorizes into one 2x2 rotation per qubit.
    c = math.cos(beta)
    s = -1j * math.sin(beta)
    if n <= _DENSE_MIXER_MAX_N:
        ks = np.arange(n + 1)
        table = c ** (n - ks) * s**ks
        psi[:] = table[_hamming_matrix(n)] @ psi
        return psi
    for q in range(n):
        view = psi.reshape(-1, 2, 1 << q)
        a = view[:, 0, :]
        b = view[:, 1, :]
        ta = c * a + s * b
        tb = s * a + c * b
        view[:, 0, :] = ta
        view[:, 1, :] = tb
    return psi


def _apply_plus_projector(psi: np.ndarray, n: int, beta: float) -> np.ndarray:
    # exp(-i beta P) = 1 + (e^{-i beta} - 1) P for the rank-one projector
    # P = |+^n><+^n|; a single overlap and a scalar shift of all amplitudes.
    dim = 1 << n
    overlap_plus = psi.sum() / math.sqrt(dim)
    psi += (np.exp(-1j * beta) - 1.0) * overlap_plus / math.sqrt(dim)
    return psi


def apply_driver(psi: np.ndarray, kind: Driver, beta: float) -> np.ndarray:
    """Apply one mixer layer exp(-i beta H_x) in place."""
    dim = len(psi)
    n = dim.bit_length() - 1
    if dim != 1 << n:
        raise ValueError(f"statevector length {dim} is not a power of two")
    if kind == Driver.TRANSVERSE_FIELD:
        return _apply_transverse_field(psi, n, beta)
    if kind == Driver.PLUS_PROJECTOR:
        return _apply_plus_projector(psi, n, beta)
    raise ValueError(f"unknown driver {kind!r}")


def ansatz(diag: DiagonalObjective, kind: Driver, params: Params) -> np.ndarray:
    """Prepare the p-layer state: (mixer . phase) applied p times to |+>^n.

    Within each layer the phase unitary acts first.
    """
    psi = plus_state(diag.n)
    for gamma, beta in zip(params.gammas, params.betas):
        apply_phase(psi, diag, gamma)
        apply_driver(psi, kind, beta)
    return psi


def ground_overlap(psi: np.ndarray, diag: DiagonalObjective) -> float:
    """Summed probability on the degenerate ground set: sum_{z in gs} |psi_z|^2."""
    if psi.shape != diag.energies.shape:
        raise ValueError(f"statevector length {psi.shape} does not match 2**{diag.n}")
    amps = psi[diag.ground_set]
    return float((amps.conj() * amps).real.sum())


def search_box(kind: Driver, p: int) -> tuple[np.ndarray, np.ndarray]:
    """(lows, highs) for the 2p-parameter vector.

    gamma in [0, 2pi) for the integer spectrum; beta in [0, pi) for the
    transverse field (pi-periodic expectation) and [0, 2pi) for the projector.
    """
    beta_high = math.pi if kind == Driver.TRANSVERSE_FIELD else 2 * math.pi
    lows = np.zeros(2 * p)
    highs = np.concatenate([np.full(p, 2 * math.pi), np.full(p, beta_high)])
    return lows, highs
