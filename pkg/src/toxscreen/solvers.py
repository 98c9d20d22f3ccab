"""From-scratch convex minimizers for the linear classifiers.

Three interchangeable routines minimize the same smooth objective:

* ``minimize_lbfgs``      -- limited-memory BFGS with Armijo backtracking
* ``minimize_newton_cg``  -- inexact Newton; the Newton system is solved
                             by conjugate gradients on Hessian-vector
                             products
* ``saga``                -- stochastic average gradient (SAGA variant)
                             over the sample sum, with the ridge term
                             taken as an exact gradient step

All three stop when the gradient infinity norm drops to ``tol`` or the
iteration budget runs out; results carry the objective history and an
explicit convergence flag.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .rng import XorShift64Star

FunGrad = Callable[[np.ndarray], tuple[float, np.ndarray]]
HessProd = Callable[[np.ndarray, np.ndarray], np.ndarray]

_ARMIJO_C1 = 1e-4
_BACKTRACK = 0.5
_MAX_BACKTRACKS = 60


@dataclass
class SolverResult:
    x: np.ndarray
    fun: float
    converged: bool
    n_iter: int
    objective_history: list[float] = field(default_factory=list)


def _grad_norm(g: np.ndarray) -> float:
    return float(np.max(np.abs(g))) if g.size else 0.0


def _armijo(
    fun_grad: FunGrad,
    x: np.ndarray,
    f0: float,
    g0: np.ndarray,
    direction: np.ndarray,
    alpha0: float,
) -> tuple[np.ndarray, float, np.ndarray] | None:
    """Backtrack until sufficient decrease; None when no step helps."""
    slope = float(g0 @ direction)
    if slope >= 0.0:
        return None
    alpha = alpha0
    for _ in range(_MAX_BACKTRACKS):
        x_try = x + alpha * direction
        f_try, g_try = fun_grad(x_try)
        if np.isfinite(f_try) and f_try <= f0 + _ARMIJO_C1 * alpha * slope:
            return x_try, f_try, g_try
        alpha *= _BACKTRACK
    return None


def minimize_lbfgs(
    fun_grad: FunGrad,
    x0: np.ndarray,
    tol: float = 1e-6,
    max_iter: int = 1000,
    memory: int = 10,
) -> SolverResult:
    x = np.asarray(x0, dtype=np.float64).copy()
    f, g = fun_grad(x)
    history = [f]
    pairs: deque[tuple[np.ndarray, np.ndarray, float]] = deque(maxlen=memory)

    for it in range(max_iter):
        if _grad_norm(g) <= tol:
            return SolverResult(x, f, True, it, history)

        # two-loop recursion
        q = g.copy()
        alphas = []
        for s, y, rho in reversed(pairs):
            a = rho * float(s @ q)
            q -= a * y
            alphas.append(a)
        if pairs:
            s, y, _ = pairs[-1]
            gamma = float(s @ y) / float(y @ y)
            q *= gamma
        for (s, y, rho), a in zip(pairs, reversed(alphas)):
            b = rho * float(y @ q)
            q += (a - b) * s
        direction = -q

        alpha0 = 1.0 if pairs else 1.0 / (1.0 + float(np.linalg.norm(g)))
        step = _armijo(fun_grad, x, f, g, direction, alpha0)
        if step is None and pairs:
            # stale curvature; retry along steepest descent
            pairs.clear()
            direction = -g
            step = _armijo(
                fun_grad, x, f, g, direction, 1.0 / (1.0 + float(np.linalg.norm(g)))
            )
        if step is None:
            return SolverResult(x, f, _grad_norm(g) <= tol, it, history)

        x_new, f_new, g_new = step
        s_vec = x_new - x
        y_vec = g_new - g
        sy = float(s_vec @ y_vec)
        if sy > 1e-10 * float(np.linalg.norm(s_vec)) * float(np.linalg.norm(y_vec)):
            pairs.append((s_vec, y_vec, 1.0 / sy))
        x, f, g = x_new, f_new, g_new
        history.append(f)

    return SolverResult(x, f, _grad_norm(g) <= tol, max_iter, history)


def minimize_newton_cg(
    fun_grad: FunGrad,
    hessp: HessProd,
    x0: np.ndarray,
    tol: float = 1e-6,
    max_iter: int = 1000,
    max_cg_iter: int | None = None,
) -> SolverResult:
    x = np.asarray(x0, dtype=np.float64).copy()
    dim = x.size
    cg_budget = max_cg_iter if max_cg_iter is not None else max(20, min(250, 2 * dim))
    f, g = fun_grad(x)
    history = [f]

    for it in range(max_iter):
        if _grad_norm(g) <= tol:
            return SolverResult(x, f, True, it, history)

        # inexact CG solve of (Hessian) d = -g with the usual forcing term
        g_norm = float(np.linalg.norm(g))
        forcing = min(0.5, np.sqrt(g_norm)) * g_norm
        d = np.zeros_like(x)
        r = g.copy()
        p = -r
        rs = float(r @ r)
        for _ in range(cg_budget):
            if np.sqrt(rs) <= forcing:
                break
            Hp = hessp(x, p)
            pHp = float(p @ Hp)
            if pHp <= 1e-16 * float(p @ p):
                break
            a = rs / pHp
            d += a * p
            r += a * Hp
            rs_new = float(r @ r)
            p = -r + (rs_new / rs) * p
            rs = rs_new

        if float(g @ d) >= 0.0:
            d = -g

        step = _armijo(fun_grad, x, f, g, d, 1.0)
        if step is None:
            step = _armijo(fun_grad, x, f, g, -g, 1.0 / (1.0 + g_norm))
        if step is None:
            return SolverResult(x, f, _grad_norm(g) <= tol, it, history)
        x, f, g = step
        history.append(f)

    return SolverResult(x, f, _grad_norm(g) <= tol, max_iter, history)


def saga(
    rows: list[tuple[np.ndarray, np.ndarray]],
    sample_grad_scalar: Callable[[int, np.ndarray], float],
    fun_grad: FunGrad,
    x0: np.ndarray,
    lipschitz_max: float,
    tol: float = 1e-6,
    max_epochs: int = 100,
    seed: int = 0,
) -> SolverResult:
    """SAGA over f(x) = (1/n) sum_i phi_i(x) + 0.5 ||x[:-1]||^2.

    ``rows[i]`` holds the sparse pattern (indices, values) of sample i;
    ``sample_grad_scalar(i, x)`` returns c_i with grad phi_i = c_i * [x_i; 1].
    ``fun_grad`` evaluates the full objective for the epoch-end stopping
    test.  The step size is the conservative 1/(3 L) choice.
    """
    n = len(rows)
    x = np.asarray(x0, dtype=np.float64).copy()
    dim = x.size
    gamma = 1.0 / (3.0 * (lipschitz_max + 1.0))

    # stored per-sample gradient scalars and their running average vector
    c = np.array([sample_grad_scalar(i, x) for i in range(n)])
    g_avg = np.zeros(dim)
    for i, (idx, vals) in enumerate(rows):
        g_avg[idx] += c[i] * vals
        g_avg[-1] += c[i]
    g_avg /= n

    f, g = fun_grad(x)
    history = [f]
    rng = XorShift64Star(seed)

    for epoch in range(max_epochs):
        if _grad_norm(g) <= tol:
            return SolverResult(x, f, True, epoch, history)
        for _ in range(n):
            j = rng.below(n)
            idx, vals = rows[j]
            c_new = sample_grad_scalar(j, x)
            delta = c_new - c[j]
            g_est = g_avg.copy()
            g_est[idx] += delta * vals
            g_est[-1] += delta
            g_est[:-1] += x[:-1]  # ridge gradient, bias unpenalized
            x -= gamma * g_est
            g_avg[idx] += (delta / n) * vals
            g_avg[-1] += delta / n
            c[j] = c_new
        f, g = fun_grad(x)
        history.append(f)

    return SolverResult(x, f, _grad_norm(g) <= tol, max_epochs, history)
