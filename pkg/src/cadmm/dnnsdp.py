# -*- coding: utf-8 -*-

"""
Corrected ADMM specialized to the dual of doubly nonnegative SDPs.

The primal problem is

    max { -<C, X> : A_E X = b_E, A_I X >= b_I, X psd, X - M in K }

with K an entrywise pattern cone; its dual is a 4-block (or 3-block when
the inequality data is absent) linearly constrained program over
(y_I, Z, y_E, S) with constraint A_I* y_I + Z + A_E* y_E + S = C. The
blocks are solved in the order y_I -> Z -> y_E -> S so that the hard
cone constraints sit in the first and last positions and hold exactly
at every iteration. All four subproblems have closed forms: a shifted
nonnegative projection, a dual-pattern projection, a Gram system solve,
and a PSD projection.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import engine
from .cones import (ConePattern, project_nonneg, project_pattern,
                    project_pattern_dual, prox_linear, prox_nonneg_linear,
                    prox_pattern_dual_linear, prox_psd_indicator)
from .engine import (CONVERGED, DIVERGED, MAX_ITERS, SolveResult, SolverConfig,
                     compute_delta, update_tau)
from .linalg import (SparseSymList, frob_inner, gram_factor, gram_solve,
                     identity_block_map, is_symmetric, lambda_max_gram,
                     project_psd)


@dataclass(frozen=True)
class DnnSdpProblem:
    """Data of one doubly nonnegative SDP in the max form above.

    ``meta`` carries builder bookkeeping (family name, objective offset
    and sense) and never affects the solver.
    """

    n: int
    C: np.ndarray
    A_E: SparseSymList
    b_E: np.ndarray
    A_I: Optional[SparseSymList] = None
    b_I: Optional[np.ndarray] = None
    M: Optional[np.ndarray] = None
    pattern: Optional[ConePattern] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.pattern is None:
            object.__setattr__(self, "pattern", ConePattern.all_nonneg(self.n))
        if self.M is None:
            object.__setattr__(self, "M", np.zeros((self.n, self.n)))
        if not is_symmetric(self.C, 1e-10):
            raise ValueError("C must be symmetric")
        if self.A_E.n != self.n or len(self.b_E) != self.A_E.m:
            raise ValueError("equality data dimensions disagree")
        if (self.A_I is None) != (self.b_I is None):
            raise ValueError("inequality data needs both A_I and b_I")
        if self.A_I is not None and (self.A_I.n != self.n or len(self.b_I) != self.A_I.m):
            raise ValueError("inequality data dimensions disagree")

    @property
    def four_block(self) -> bool:
        return self.A_I is not None

    def validate(self) -> None:
        """Check the structural invariants, including A_E surjectivity
        (the Gram factorization must succeed)."""
        gram_factor(self.A_E)
        if self.four_block and lambda_max_gram(self.A_I) <= 0.0:
            raise ValueError("inequality constraint map is zero")


@dataclass
class DnnSdpIterate:
    Z: np.ndarray
    yE: np.ndarray
    S: np.ndarray
    X: np.ndarray
    t_Z: np.ndarray
    t_yE: np.ndarray
    t_S: np.ndarray
    yI: Optional[np.ndarray] = None
    t_yI: Optional[np.ndarray] = None
    tau: float = 1.95
    sigma: float = 1.0
    k: int = 0


def initial_iterate(prob: DnnSdpProblem, sigma: float, tau0: float) -> DnnSdpIterate:
    """All-zero start; zero lies in every required cone."""
    n = prob.n
    zmat = np.zeros((n, n))
    it = DnnSdpIterate(
        Z=zmat.copy(), yE=np.zeros(prob.A_E.m), S=zmat.copy(), X=zmat.copy(),
        t_Z=zmat.copy(), t_yE=np.zeros(prob.A_E.m), t_S=zmat.copy(),
        tau=tau0, sigma=sigma, k=0)
    if prob.four_block:
        it.yI = np.zeros(prob.A_I.m)
        it.t_yI = np.zeros(prob.A_I.m)
    return it


# ---------------------------------------------------------------------------
# Closed-form subproblem solvers. Each takes the multiplier x, the partial
# residual r (all other blocks' constraint contributions minus C) and the
# proximal center, exactly as the generic engine passes them, so the same
# functions back both the specialized stepper and the generic BlockSpecs.

def update_yI(prob: DnnSdpProblem, lam: float, x: np.ndarray, r: np.ndarray,
              center: np.ndarray, sigma: float) -> np.ndarray:
    """First-block update with the rho*I - A_I A_I* proximal operator.

    The semi-proximal choice collapses the quadratic to sigma*lam/2 ||y||^2
    plus linear terms, so the minimizer is a nonnegative projection of
    center + (b_I/sigma - A_I(x/sigma + r + A_I* center)) / lam.
    """
    if lam <= 0.0:
        raise ValueError("lambda_max(A_I A_I*) must be positive")
    w_full = x / sigma + r + prob.A_I.adjoint(center)
    v = center + (prob.b_I / sigma - prob.A_I.apply(w_full)) / lam
    return project_nonneg(v)


def update_Z(prob: DnnSdpProblem, x: np.ndarray, r: np.ndarray,
             sigma: float) -> np.ndarray:
    """Projection onto the dual pattern cone of M/sigma - x/sigma - r."""
    return project_pattern_dual(prob.M / sigma - x / sigma - r, prob.pattern)


def update_yE(prob: DnnSdpProblem, x: np.ndarray, r: np.ndarray,
              sigma: float) -> np.ndarray:
    """Unconstrained linear-block minimizer via the cached Gram factor."""
    rhs = prob.b_E / sigma - prob.A_E.apply(x / sigma + r)
    return gram_solve(prob.A_E, rhs)


def update_S(x: np.ndarray, r: np.ndarray, sigma: float) -> np.ndarray:
    """PSD projection of -r - x/sigma."""
    return project_psd(-r - x / sigma)


def cached_lambda_max(prob: DnnSdpProblem) -> float:
    lam = prob.meta.get("_lam_cache")
    if lam is None:
        lam = lambda_max_gram(prob.A_I)
        prob.meta["_lam_cache"] = lam
    return lam


def cadmm_step(it: DnnSdpIterate, prob: DnnSdpProblem,
               cfg: SolverConfig) -> DnnSdpIterate:
    """One full corrected iteration: prediction sweep in the order
    y_I -> Z -> y_E -> S, adaptive multiplier step, then correction of the
    middle blocks (y_E, and Z in the 4-block case) against the corrected
    base points."""
    sigma = it.sigma
    x = it.X
    C = prob.C
    four = prob.four_block
    adjE_t = prob.A_E.adjoint(it.t_yE)

    if four:
        lam = cached_lambda_max(prob)
        r1 = it.t_Z + adjE_t + it.t_S - C
        yI_new = update_yI(prob, lam, x, r1, it.t_yI, sigma)
        adjI_new = prob.A_I.adjoint(yI_new)
        f_pred = adjI_new + it.t_Z + adjE_t + it.t_S - C
        rZ = adjI_new + adjE_t + it.t_S - C
    else:
        yI_new = None
        adjI_new = None
        rZ = adjE_t + it.t_S - C
    Z_new = update_Z(prob, x, rZ, sigma)
    if not four:
        f_pred = Z_new + adjE_t + it.t_S - C

    rE = (adjI_new + Z_new + it.t_S - C) if four else (Z_new + it.t_S - C)
    yE_new = update_yE(prob, x, rE, sigma)
    adjE_new = prob.A_E.adjoint(yE_new)

    rS = (adjI_new + Z_new + adjE_new - C) if four else (Z_new + adjE_new - C)
    S_new = update_S(x, rS, sigma)

    f_full = (adjI_new + Z_new + adjE_new + S_new - C) if four \
        else (Z_new + adjE_new + S_new - C)

    if it.k == 0:
        tau_k = cfg.tau0
    else:
        d_last = S_new - it.S
        delta = compute_delta(f_pred, f_full, float(np.vdot(d_last, d_last)), cfg.eps)
        tau_k = update_tau(it.tau, delta, cfg.tau_bar)
    X_new = x + (tau_k * sigma) * f_full

    # Correction, backwards over the middle blocks; last and first blocks
    # (and the multiplier) keep their predicted values.
    dS = S_new - it.t_S
    t_yE_new = it.t_yE + cfg.alpha * (yE_new - it.t_yE) - gram_solve(
        prob.A_E, prob.A_E.apply(dS))
    if four:
        d = prob.A_E.adjoint(t_yE_new - it.t_yE) + dS
        t_Z_new = it.t_Z + cfg.alpha * (Z_new - it.t_Z) - d
    else:
        t_Z_new = Z_new

    out = DnnSdpIterate(
        Z=Z_new, yE=yE_new, S=S_new, X=X_new,
        t_Z=t_Z_new, t_yE=t_yE_new, t_S=S_new,
        yI=yI_new, t_yI=yI_new,
        tau=tau_k, sigma=sigma, k=it.k + 1)
    return out


def dext_step(it: DnnSdpIterate, prob: DnnSdpProblem, cfg: SolverConfig,
              tau: float) -> DnnSdpIterate:
    """Directly extended sweep: same subproblems with proximal centers at
    the previous iterates, fixed multiplier step, no correction."""
    sigma = it.sigma
    x = it.X
    C = prob.C
    four = prob.four_block
    adjE_prev = prob.A_E.adjoint(it.yE)

    if four:
        lam = cached_lambda_max(prob)
        r1 = it.Z + adjE_prev + it.S - C
        yI_new = update_yI(prob, lam, x, r1, it.yI, sigma)
        adjI_new = prob.A_I.adjoint(yI_new)
        rZ = adjI_new + adjE_prev + it.S - C
    else:
        yI_new = None
        adjI_new = None
        rZ = adjE_prev + it.S - C
    Z_new = update_Z(prob, x, rZ, sigma)
    rE = (adjI_new + Z_new + it.S - C) if four else (Z_new + it.S - C)
    yE_new = update_yE(prob, x, rE, sigma)
    adjE_new = prob.A_E.adjoint(yE_new)
    rS = (adjI_new + Z_new + adjE_new - C) if four else (Z_new + adjE_new - C)
    S_new = update_S(x, rS, sigma)
    f_full = (adjI_new + Z_new + adjE_new + S_new - C) if four \
        else (Z_new + adjE_new + S_new - C)
    X_new = x + (tau * sigma) * f_full
    return DnnSdpIterate(
        Z=Z_new, yE=yE_new, S=S_new, X=X_new,
        t_Z=Z_new, t_yE=yE_new, t_S=S_new, yI=yI_new, t_yI=yI_new,
        tau=tau, sigma=sigma, k=it.k + 1)


# ---------------------------------------------------------------------------
# Residuals and certification.

@dataclass(frozen=True)
class ResidualReport:
    """Relative KKT residual components; ``eta`` is the max of the present
    ones and ``eta_g`` the signed relative gap (informational)."""

    eta_P: float
    eta_D: float
    eta_S: float
    eta_K: float
    eta_Sstar: float
    eta_Kstar: float
    eta_C1: float
    eta_C2: float
    eta_I: Optional[float] = None
    eta_Istar: Optional[float] = None
    eta_g: float = math.nan

    @property
    def eta(self) -> float:
        return max(v for v in self.components().values())

    def components(self) -> dict:
        out = {
            "eta_P": self.eta_P, "eta_D": self.eta_D, "eta_S": self.eta_S,
            "eta_K": self.eta_K, "eta_Sstar": self.eta_Sstar,
            "eta_Kstar": self.eta_Kstar, "eta_C1": self.eta_C1,
            "eta_C2": self.eta_C2,
        }
        if self.eta_I is not None:
            out["eta_I"] = self.eta_I
            out["eta_Istar"] = self.eta_Istar
        return out


def residuals(it: DnnSdpIterate, prob: DnnSdpProblem) -> ResidualReport:
    """Relative primal/dual feasibility, cone and complementarity
    residuals of the current primal-dual tuple.

    The pattern-cone feasibility of X is measured on the shifted matrix
    X - M; cone distances are computed through the complementary
    projection (the Moreau decomposition), which for the all-nonnegative
    self-dual patterns reduces to projecting the negated matrix.
    """
    X, S, Z, yE = it.X, it.S, it.Z, it.yE
    C = prob.C
    norm_X = float(np.linalg.norm(X))
    norm_S = float(np.linalg.norm(S))
    norm_Z = float(np.linalg.norm(Z))

    eta_P = float(np.linalg.norm(prob.A_E.apply(X) - prob.b_E)) / (
        1.0 + float(np.linalg.norm(prob.b_E)))
    if prob.four_block:
        dual_res = prob.A_I.adjoint(it.yI) + Z + prob.A_E.adjoint(yE) + S - C
    else:
        dual_res = prob.A_E.adjoint(yE) + S + Z - C
    eta_D = float(np.linalg.norm(dual_res)) / (1.0 + float(np.linalg.norm(C)))

    eta_S = float(np.linalg.norm(project_psd(-X))) / (1.0 + norm_X)
    shifted = X - prob.M
    eta_K = float(np.linalg.norm(project_pattern_dual(-shifted, prob.pattern))) / (
        1.0 + norm_X)
    eta_Sstar = float(np.linalg.norm(project_psd(-S))) / (1.0 + norm_S)
    eta_Kstar = float(np.linalg.norm(project_pattern(-Z, prob.pattern))) / (
        1.0 + norm_Z)
    eta_C1 = abs(frob_inner(X, S)) / (1.0 + norm_X + norm_S)
    eta_C2 = abs(frob_inner(shifted, Z)) / (1.0 + norm_X + norm_Z)

    cx = frob_inner(C, X)
    bey = float(prob.b_E @ yE)
    if prob.four_block:
        biy = float(prob.b_I @ it.yI)
        eta_I = float(np.linalg.norm(np.maximum(0.0, prob.b_I - prob.A_I.apply(X)))) / (
            1.0 + float(np.linalg.norm(prob.b_I)))
        eta_Istar = float(np.linalg.norm(np.maximum(0.0, -it.yI))) / (
            1.0 + float(np.linalg.norm(it.yI)))
        eta_g = (cx - (bey + biy)) / (1.0 + abs(cx + bey + biy))
        return ResidualReport(eta_P, eta_D, eta_S, eta_K, eta_Sstar, eta_Kstar,
                              eta_C1, eta_C2, eta_I, eta_Istar, eta_g)
    eta_g = (cx - bey) / (1.0 + abs(cx + bey))
    return ResidualReport(eta_P, eta_D, eta_S, eta_K, eta_Sstar, eta_Kstar,
                          eta_C1, eta_C2, None, None, eta_g)


# ---------------------------------------------------------------------------
# Penalty tuning and restarts.

@dataclass
class TuningPolicy:
    """Residual-balancing adjustment of sigma plus a stall-triggered
    restart of the corrected variables."""

    check_period: int = 50
    balance_ratio: float = 5.0
    sigma_factor: float = 1.5
    sigma_min: float = 1e-4
    sigma_max: float = 1e4
    freeze_after: Optional[int] = None      # default 0.75 * max_iters
    restart_stall_window: int = 100
    restart_decrease_threshold: float = 0.01

    @classmethod
    def disabled(cls) -> "TuningPolicy":
        return cls(check_period=0, restart_stall_window=0)

    def freeze_iteration(self, max_iters: int) -> int:
        if self.freeze_after is not None:
            return self.freeze_after
        return int(0.75 * max_iters)


def tune_sigma(report: ResidualReport, sigma: float, k: int,
               policy: TuningPolicy, freeze_after: int) -> float:
    """Rescale sigma to balance primal and dual feasibility progress.

    Larger sigma drives the dual-side residuals down and starves the
    primal side (the multiplier X carries the primal variable here), so
    when the primal group lags sigma is decreased and vice versa. Only
    acts every ``check_period`` iterations and while k is below the
    freeze point; afterwards sigma is left alone so the fixed-penalty
    convergence behaviour takes over.
    """
    if policy.check_period <= 0 or k % policy.check_period != 0 or k >= freeze_after:
        return sigma
    primal = max(report.eta_P, report.eta_S, report.eta_K)
    dual = max(report.eta_D, report.eta_Sstar, report.eta_Kstar, 1e-16)
    if report.eta_I is not None:
        # the inequality residuals sit on the same primal/dual split
        primal = max(primal, report.eta_I)
        dual = max(dual, report.eta_Istar)
    ratio = primal / dual
    if ratio > policy.balance_ratio:
        return max(sigma / policy.sigma_factor, policy.sigma_min)
    if ratio < 1.0 / policy.balance_ratio:
        return min(sigma * policy.sigma_factor, policy.sigma_max)
    return sigma


def maybe_restart(eta_history: list, it: DnnSdpIterate, policy: TuningPolicy,
                  tau0: float, last_restart: int) -> tuple:
    """Overwrite the corrected variables with the predicted ones and reset
    the step size when the residual stalled over the window."""
    w = policy.restart_stall_window
    if w <= 0 or len(eta_history) <= w or it.k - last_restart < w:
        return it, False
    now = eta_history[-1]
    then = eta_history[-1 - w]
    if now <= (1.0 - policy.restart_decrease_threshold) * then:
        return it, False
    out = replace(it, t_Z=it.Z.copy(), t_yE=it.yE.copy(), t_S=it.S.copy(),
                  t_yI=None if it.yI is None else it.yI.copy(), tau=tau0)
    return out, True


# ---------------------------------------------------------------------------
# Full solver loops.

def default_max_iters(prob: DnnSdpProblem) -> int:
    return 40000 if prob.four_block else 20000


def _iterate_blocks(it: DnnSdpIterate):
    blocks = [it.Z, it.yE, it.S, it.X]
    if it.yI is not None:
        blocks.append(it.yI)
    return blocks


def _diverged(it: DnnSdpIterate) -> bool:
    for b in _iterate_blocks(it):
        if not np.isfinite(b).all() or np.linalg.norm(b) > engine.DIVERGENCE_GUARD:
            return True
    return False


def cadmm_solve(prob: DnnSdpProblem, cfg: SolverConfig = None,
                policy: TuningPolicy = None, callback=None) -> SolveResult:
    """Corrected ADMM with sigma balancing and restarts; terminates when
    the max relative residual eta drops below ``cfg.tol``."""
    cfg = cfg or SolverConfig()
    policy = policy if policy is not None else TuningPolicy()
    max_iters = cfg.max_iters if cfg.max_iters is not None else default_max_iters(prob)
    freeze_after = policy.freeze_iteration(max_iters)
    gram_factor(prob.A_E)
    if prob.four_block:
        cached_lambda_max(prob)

    it = initial_iterate(prob, cfg.sigma, cfg.tau0)
    eta_history: list = []
    tau_history: list = []
    sigma_history: list = []
    restarts: list = []
    history = [] if cfg.record_history else None
    last_restart = 0
    report = None
    status = MAX_ITERS
    t0 = time.perf_counter()
    while it.k < max_iters:
        it = cadmm_step(it, prob, cfg)
        report = residuals(it, prob)
        eta = report.eta
        eta_history.append(eta)
        tau_history.append(it.tau)
        sigma_history.append(it.sigma)
        if history is not None:
            history.append({"iterate": it, "report": report})
        if callback is not None:
            callback(it, report)
        if _diverged(it):
            status = DIVERGED
            break
        if eta < cfg.tol:
            status = CONVERGED
            break
        new_sigma = tune_sigma(report, it.sigma, it.k, policy, freeze_after)
        if new_sigma != it.sigma:
            it = replace(it, sigma=new_sigma)
        it, restarted = maybe_restart(eta_history, it, policy, cfg.tau0, last_restart)
        if restarted:
            restarts.append(it.k)
            last_restart = it.k
    wall = time.perf_counter() - t0
    return SolveResult(
        status=status, iterations=it.k,
        residual=report.eta if report is not None else math.inf,
        z=[it.Z, it.yE, it.S] if not prob.four_block else [it.yI, it.Z, it.yE, it.S],
        x=it.X, tau_final=it.tau, tau_history=tau_history,
        wall_seconds=wall, restarts=restarts, history=history,
        report=report, sigma_final=it.sigma,
        message="" if status != DIVERGED else
        f"non-finite or oversized iterate at k={it.k}; last eta history "
        f"{[f'{e:.2e}' for e in eta_history[-3:]]}")


def dext_solve(prob: DnnSdpProblem, cfg: SolverConfig = None, tau: float = 1.618,
               policy: TuningPolicy = None, callback=None) -> SolveResult:
    """Directly extended ADMM baseline on the same problem; no convergence
    guarantee, same termination measure and sigma balancing."""
    cfg = cfg or SolverConfig()
    policy = policy if policy is not None else TuningPolicy()
    max_iters = cfg.max_iters if cfg.max_iters is not None else default_max_iters(prob)
    freeze_after = policy.freeze_iteration(max_iters)
    gram_factor(prob.A_E)
    if prob.four_block:
        cached_lambda_max(prob)

    it = initial_iterate(prob, cfg.sigma, cfg.tau0)
    report = None
    status = MAX_ITERS
    t0 = time.perf_counter()
    while it.k < max_iters:
        it = dext_step(it, prob, cfg, tau)
        report = residuals(it, prob)
        if callback is not None:
            callback(it, report)
        if _diverged(it):
            status = DIVERGED
            break
        if report.eta < cfg.tol:
            status = CONVERGED
            break
        new_sigma = tune_sigma(report, it.sigma, it.k, policy, freeze_after)
        if new_sigma != it.sigma:
            it = replace(it, sigma=new_sigma)
    wall = time.perf_counter() - t0
    return SolveResult(
        status=status, iterations=it.k,
        residual=report.eta if report is not None else math.inf,
        z=[it.Z, it.yE, it.S] if not prob.four_block else [it.yI, it.Z, it.yE, it.S],
        x=it.X, tau_final=tau, tau_history=[tau] * it.k,
        wall_seconds=wall, report=report, sigma_final=it.sigma)


def objective_values(prob: DnnSdpProblem, it_or_result) -> dict:
    """Primal/dual objective bookkeeping at a solution tuple."""
    if isinstance(it_or_result, SolveResult):
        X = it_or_result.x
        if prob.four_block:
            yI, Z, yE, S = it_or_result.z
        else:
            Z, yE, S = it_or_result.z
            yI = None
    else:
        it = it_or_result
        X, Z, yE, S, yI = it.X, it.Z, it.yE, it.S, it.yI
    cx = frob_inner(prob.C, X)
    out = {"cx": cx, "primal": -cx, "b_E_y": float(prob.b_E @ yE),
           "M_Z": frob_inner(prob.M, Z)}
    if yI is not None:
        out["b_I_y"] = float(prob.b_I @ yI)
    return out


# ---------------------------------------------------------------------------
# Bridge to the generic engine: the same closed-form solvers wrapped as
# BlockSpecs, for cross-checking the specialized loop trajectory.

def to_multiblock(prob: DnnSdpProblem):
    """Equivalent generic multi-block problem (shared right-hand side C).

    Returns ``(MultiBlockProblem, z0, x0)`` with all-zero starting data
    matching :func:`initial_iterate`.
    """
    n = prob.n
    ident = identity_block_map()
    z_block = engine.BlockSpec(
        map=ident,
        subsolve=lambda x, r, center, sigma: update_Z(prob, x, r, sigma),
        shape=(n, n), rho=None, einv=lambda v: v,
        prox=prox_pattern_dual_linear(prob.M, prob.pattern))
    ye_block = engine.BlockSpec(
        map=prob.A_E.as_block_map(),
        subsolve=lambda x, r, center, sigma: update_yE(prob, x, r, sigma),
        shape=(prob.A_E.m,), rho=None,
        einv=lambda v: gram_solve(prob.A_E, v),
        prox=prox_linear(prob.b_E))
    s_block = engine.BlockSpec(
        map=ident,
        subsolve=lambda x, r, center, sigma: update_S(x, r, sigma),
        shape=(n, n), rho=None, einv=lambda v: v,
        prox=prox_psd_indicator())
    if prob.four_block:
        lam = cached_lambda_max(prob)
        yi_block = engine.BlockSpec(
            map=prob.A_I.as_block_map(),
            subsolve=lambda x, r, center, sigma: update_yI(prob, lam, x, r, center, sigma),
            shape=(prob.A_I.m,), rho=lam,
            prox=prox_nonneg_linear(prob.b_I))
        blocks = (yi_block, z_block, ye_block, s_block)
        z0 = [np.zeros(prob.A_I.m), np.zeros((n, n)), np.zeros(prob.A_E.m),
              np.zeros((n, n))]
    else:
        blocks = (z_block, ye_block, s_block)
        z0 = [np.zeros((n, n)), np.zeros(prob.A_E.m), np.zeros((n, n))]
    mb = engine.MultiBlockProblem(blocks=blocks, c=np.asarray(prob.C, dtype=float))
    return mb, z0, np.zeros((n, n))
