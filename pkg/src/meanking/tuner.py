"""Multi-start quasi-Newton tuning of the phase shifters.

The loss is the negated objective (p_V by default); each restart draws
its initial point from a generator seeded by (seed, restart index), so
results are reproducible and independent of how restarts are scheduled.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import NonFiniteLoss
from .inference import pm_values, pv_value, subset_report
from .optics import SetupModel
from .qstate import MubFamily
from .vaa import VaaBasis

log = logging.getLogger(__name__)

OBJECTIVES = ("p_v", "p_m_average", "p_m_subset")

#: central-difference step used as the minimizer's gradient estimate
GRAD_STEP = 1e-6
#: inner BFGS termination
GRAD_TOL = 1e-8
MAX_ITER = 200


@dataclass
class OptimizationRun:
    seed: int
    restarts: int
    best_phases: np.ndarray
    best_loss: float
    history: list = field(default_factory=list)
    objective: str = "p_v"
    strategy: str = "vaa-map"
    post_select: bool = False


def make_objective(
    setup: SetupModel,
    vaa: VaaBasis,
    mubs: MubFamily | None = None,
    objective: str = "p_v",
    strategy: str = "vaa-map",
    post_select: bool = False,
    subset: Sequence[int] | None = None,
) -> Callable[[np.ndarray], float]:
    """Loss function L(phi) = -objective(phi)."""
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}; expected one of {OBJECTIVES}")
    if objective == "p_v":
        return lambda x: -pv_value(setup, x, vaa, post_select)
    if mubs is None:
        raise ValueError(f"objective {objective!r} requires a MUB family")
    if objective == "p_m_average":
        return lambda x: -float(
            pm_values(setup, x, mubs, vaa, strategy, post_select).mean()
        )
    if subset is None:
        raise ValueError("objective 'p_m_subset' requires a basis subset")
    chosen = list(subset)
    return lambda x: -subset_report(setup, x, mubs, vaa, chosen, strategy, post_select)


def central_gradient(f: Callable, x: np.ndarray, step: float = GRAD_STEP) -> np.ndarray:
    """Central finite-difference gradient, the minimizer's jac."""
    grad = np.empty_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = step
        grad[i] = (f(x + e) - f(x - e)) / (2 * step)
    return grad


def five_point_gradient(f: Callable, x: np.ndarray, step: float = 1e-3) -> np.ndarray:
    """Independent higher-order stencil used to check the gradient."""
    grad = np.empty_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = step
        grad[i] = (-f(x + 2 * e) + 8 * f(x + e) - 8 * f(x - e) + f(x - 2 * e)) / (12 * step)
    return grad


def _minimize_from(loss: Callable, x0: np.ndarray) -> tuple[float, np.ndarray]:
    res = minimize(
        loss,
        x0,
        method="BFGS",
        jac=lambda x: central_gradient(loss, x),
        options={"gtol": GRAD_TOL, "maxiter": MAX_ITER},
    )
    return float(res.fun), np.asarray(res.x, dtype=float)


def _restart_point(seed: int, restart: int, nphases: int) -> np.ndarray:
    rng = np.random.default_rng([seed, restart])
    return rng.uniform(0.0, 2 * np.pi, nphases)


# module-level worker so ProcessPoolExecutor can pickle it
def _run_restart(args) -> tuple[int, float, np.ndarray]:
    setup, vaa, mubs, objective, strategy, post_select, subset, seed, restart = args
    loss = make_objective(setup, vaa, mubs, objective, strategy, post_select, subset)
    x0 = _restart_point(seed, restart, setup.phase_count)
    return (restart, *_minimize_from(loss, x0))


def _worker_count(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("MKP_THREADS", "1"))
    return max(1, workers)


def optimize(
    setup: SetupModel,
    vaa: VaaBasis,
    mubs: MubFamily | None = None,
    objective: str = "p_v",
    restarts: int = 500,
    seed: int = 0,
    strategy: str = "vaa-map",
    post_select: bool = False,
    subset: Sequence[int] | None = None,
    workers: int | None = None,
) -> OptimizationRun:
    """Best result over ``restarts`` BFGS runs from random initial phases.

    Deterministic given (seed, restarts); restarts with a non-finite
    final loss are discarded and logged.  Raises NonFiniteLoss if no
    restart produced a finite loss.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    args = [
        (setup, vaa, mubs, objective, strategy, post_select, subset, seed, r)
        for r in range(restarts)
    ]
    nworkers = _worker_count(workers)
    if nworkers > 1:
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            results = list(pool.map(_run_restart, args, chunksize=8))
    else:
        results = [_run_restart(a) for a in args]
    results.sort(key=lambda t: t[0])

    history = [loss for _, loss, _ in results]
    best_r, best_loss, best_x = None, np.inf, None
    for r, loss, x in results:
        if not np.isfinite(loss):
            log.warning("restart %d discarded: non-finite loss %r", r, loss)
            continue
        if loss < best_loss:
            best_r, best_loss, best_x = r, loss, x
    if best_x is None:
        raise NonFiniteLoss("every restart produced a non-finite loss")
    return OptimizationRun(
        seed=seed,
        restarts=restarts,
        best_phases=best_x,
        best_loss=best_loss,
        history=history,
        objective=objective,
        strategy=strategy,
        post_select=post_select,
    )


def finite_difference_check(
    setup: SetupModel,
    vaa: VaaBasis,
    phases: Sequence[float],
    loss: Callable[[np.ndarray], float] | None = None,
) -> float:
    """Max deviation between the minimizer's gradient and a 5-point stencil."""
    if loss is None:
        loss = make_objective(setup, vaa, objective="p_v")
    x = np.asarray(phases, dtype=float)
    return float(np.abs(central_gradient(loss, x) - five_point_gradient(loss, x)).max())
