"""Classical outer loop: multi-start simplex descent over the 2p layer angles.

Every stochastic choice derives from the config seed, so a run is reproducible
from (instance seed, config seed) alone. Restarts are independent; the winner
is the lowest energy, ties broken by lowest restart index.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.optimize

from .objective import DiagonalObjective, expectation
from .simulator import Driver, Params, ansatz, ground_overlap, search_box

DEFAULT_EVALS_PER_LAYER = 5000


@dataclass(frozen=True)
class OptimConfig:
    restarts: int = 20
    max_evals: Optional[int] = None  # per restart; None means 5000 * p
    tol: float = 1e-8  # simplex energy-spread termination
    xatol: float = 1e-6
    seed: int = 0
    warm_start: Optional[Params] = None
    polish: int = 1  # extra simplex re-descents from each restart's optimum

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("need at least one restart")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")

    def evals_budget(self, p: int) -> int:
        return self.max_evals if self.max_evals is not None else DEFAULT_EVALS_PER_LAYER * max(p, 1)


@dataclass(frozen=True)
class OptimResult:
    params: Params
    energy: float
    deficit: float
    overlap: float
    evals_used: int
    restart_index: int
    converged: bool


def _initial_simplex(x0: np.ndarray, step: float) -> np.ndarray:
    dim = len(x0)
    simplex = np.tile(x0, (dim + 1, 1))
    for i in range(dim):
        simplex[i + 1, i] += step
    return simplex


def _simplex_descent(
    fun: Callable[[np.ndarray], float],
    x0: np.ndarray,
    maxfev: int,
    tol: float,
    xatol: float,
    polish: int,
) -> tuple[np.ndarray, float, int, bool]:
    dim = len(x0)
    x, fx, evals, success = np.asarray(x0, dtype=float), None, 0, False
    step = 0.25
    for _ in range(1 + polish):
        remaining = maxfev - evals
        if fx is not None and remaining <= dim + 1:
            break
        remaining = max(remaining, dim + 2)
        res = scipy.optimize.minimize(
            fun,
            x,
            method="Nelder-Mead",
            options={
                "maxfev": remaining,
                "maxiter": remaining,
                "fatol": tol,
                "xatol": xatol,
                "adaptive": dim >= 10,
                "initial_simplex": _initial_simplex(x, step),
            },
        )
        evals += res.nfev
        success = bool(res.success)
        if fx is not None and res.fun >= fx - tol:
            # Re-descent stalled; keep the better of the two iterates.
            if res.fun < fx:
                x, fx = res.x, float(res.fun)
            break
        x, fx = res.x, float(res.fun)
        step = 0.02  # polish rounds restart the simplex tightly around the optimum
    assert fx is not None
    return x, fx, evals, success


def multistart_minimize(
    fun: Callable[[np.ndarray], float],
    p: int,
    lows: np.ndarray,
    highs: np.ndarray,
    cfg: OptimConfig,
    extra_starts: Sequence[np.ndarray] = (),
) -> tuple[np.ndarray, float, int, int, bool]:
    """Run cfg.restarts simplex descents; return (x, energy, evals, winner index, converged).

    Start points: the warm start (if any), then ``extra_starts``, then
    uniform-random draws from the search box seeded by (cfg.seed, restart index).
    """
    starts: list[np.ndarray] = []
    if cfg.warm_start is not None:
        warm = cfg.warm_start
        if warm.p == p - 1:
            warm = warm.padded()
        elif warm.p != p:
            raise ValueError(f"warm start has {warm.p} layers; expected {p - 1} or {p}")
        starts.append(warm.to_vector())
    starts.extend(np.asarray(x, dtype=float) for x in extra_starts)
    for i in range(len(starts), cfg.restarts):
        rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, i)))
        starts.append(rng.uniform(lows, highs))
    starts = starts[: max(cfg.restarts, 1)]

    maxfev = cfg.evals_budget(p)
    best: tuple[float, int, np.ndarray, bool] | None = None
    total_evals = 0
    for idx, x0 in enumerate(starts):
        x, fx, evals, success = _simplex_descent(fun, x0, maxfev, cfg.tol, cfg.xatol, cfg.polish)
        total_evals += evals
        if best is None or fx < best[0]:
            best = (fx, idx, x, success)
    assert best is not None
    fx, idx, x, success = best
    return x, fx, total_evals, idx, success


def minimize(diag: DiagonalObjective, kind: Driver, p: int, cfg: OptimConfig) -> OptimResult:
    """Best energy over the p-layer ansatz family, with deficit and ground overlap.

    Never raises on non-convergence: the best value found is returned with
    ``converged=False``.
    """
    if p < 0:
        raise ValueError(f"depth must be nonnegative, got p={p}")
    dim = diag.dim
    if p == 0:
        # No free parameters: the reference state itself. The mean of an integer
        # spectrum over a power-of-two dimension is exact in binary floating point.
        energy = float(diag.energies.sum(dtype=np.int64)) / dim
        overlap = diag.degeneracy / dim
        return OptimResult(
            params=Params.empty(),
            energy=energy,
            deficit=energy - diag.ground_energy,
            overlap=overlap,
            evals_used=1,
            restart_index=0,
            converged=True,
        )

    def energy_of(x: np.ndarray) -> float:
        return expectation(diag, ansatz(diag, kind, Params.from_vector(x)))

    lows, highs = search_box(kind, p)
    x, _, evals, idx, converged = multistart_minimize(energy_of, p, lows, highs, cfg)
    params = Params.from_vector(x)
    psi = ansatz(diag, kind, params)
    energy = expectation(diag, psi)
    return OptimResult(
        params=params,
        energy=energy,
        deficit=energy - diag.ground_energy,
        overlap=ground_overlap(psi, diag),
        evals_used=evals,
        restart_index=idx,
        converged=converged,
    )


def critical_depth(
    diag: DiagonalObjective,
    kind: Driver,
    eta_threshold: float,
    p_max: int,
    cfg: OptimConfig,
) -> tuple[Optional[int], list[float]]:
    """Smallest depth whose energy-optimized state reaches the overlap threshold.

    Depths are swept from 0 with warm-started optimization; returns
    (None, trace) when the threshold is not reached by p_max.
    """
    if not 0 <= eta_threshold <= 1:
        raise ValueError(f"eta threshold must be in [0, 1], got {eta_threshold}")
    etas: list[float] = []
    warm: Optional[Params] = None
    for p in range(p_max + 1):
        res = minimize(diag, kind, p, replace(cfg, warm_start=warm))
        etas.append(res.overlap)
        if res.overlap >= eta_threshold:
            return p, etas
        warm = res.params
    return None, etas


def finite_difference_gradient(
    fun: Callable[[np.ndarray], float], x: np.ndarray, eps: float = 1e-6
) -> np.ndarray:
    """Central-difference gradient; diagnostic cross-check only."""
    x = np.asarray(x, dtype=float)
    grad = np.zeros_like(x)
    for i in range(len(x)):
        up, down = x.copy(), x.copy()
        up[i] += eps
        down[i] -= eps
        grad[i] = (fun(up) - fun(down)) / (2 * eps)
    return grad
