"""Consensus criteria weights from heterogeneous fuzzy preference inputs.

The deviation model minimises, over the weight simplex, the DM-weighted sum
of interval violations plus squared distances to the modal values. Each
slack variable appears in exactly one constraint and is penalised linearly,
so at the optimum it equals the hinge violation of its constraint. That
removes the slacks and leaves a piecewise-smooth function of ``w`` alone,
which is minimised here by multi-start Nelder-Mead on a softmax chart of
the simplex.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .problem import (
    DecisionProblem,
    FuzzyPreferenceRelation,
    MultiplicativePreferenceRelation,
    UtilityVector,
    require_valid,
)

log = logging.getLogger(__name__)

WEIGHT_FLOOR = 1e-6
MULTIPLICATIVE_FLOOR = 1e-6
# hinge values at or below this are float noise, not deviations
_NOISE = 1e-12

KINDS = (
    "utility-lower", "utility-upper",
    "preference-lower", "preference-upper",
    "multiplicative-lower", "multiplicative-upper",
)
_KIND_PREFIX = {"utility": "utility", "fuzzy_preference": "preference", "multiplicative": "multiplicative"}


class WeightDomainError(ValueError):
    """Weight vector outside the open simplex the model is defined on."""


@dataclass(frozen=True)
class DeviationRecord:
    dm: str
    kind: str
    indices: tuple[int, ...]
    value: float

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown deviation kind {self.kind!r}")
        if self.value < 0:
            raise ValueError("deviation values are nonnegative")

    @property
    def side(self) -> str:
        return self.kind.rsplit("-", 1)[1]


@dataclass(frozen=True)
class SolverConfig:
    seed: int = 0
    starts: int = 32
    max_iterations: int = 2000
    zero_tol: float = 1e-3
    max_rounds: int = 20


@dataclass
class Round:
    problem: DecisionProblem
    weights: np.ndarray
    objective: float
    deviations: list[DeviationRecord]


@dataclass
class WeightSolution:
    weights: np.ndarray
    deviations: list[DeviationRecord]
    objective: float
    rounds: list[Round] = field(default_factory=list)
    converged: bool = False


class _Compiled:
    """Problem flattened into arrays for fast repeated evaluation."""

    def __init__(self, p: DecisionProblem) -> None:
        self.n = p.n
        self.utility = []
        self.additive = []
        self.multiplicative = []
        off = ~np.eye(p.n, dtype=bool)
        self.offdiag = off
        for dm in p.dms:
            pref = dm.preference
            if isinstance(pref, UtilityVector):
                self.utility.append((dm.weight, pref.data))
            elif isinstance(pref, FuzzyPreferenceRelation):
                self.additive.append((dm.weight, pref.data))
            elif isinstance(pref, MultiplicativePreferenceRelation):
                self.multiplicative.append((dm.weight, pref.data))
            else:
                raise TypeError(f"unsupported preference input {type(pref).__name__}")

    def objective(self, w: np.ndarray) -> float:
        total = 0.0
        for c, d in self.utility:
            total += c * _terms(w, d).sum()
        if self.additive:
            g = 0.5 * (w[:, None] - w[None, :] + 1.0)
            for c, d in self.additive:
                total += c * _terms(g, d)[self.offdiag].sum()
        if self.multiplicative:
            r = w[:, None] / w[None, :]
            for c, d in self.multiplicative:
                total += c * _terms(r, d)[self.offdiag].sum()
        return float(total)

    def max_hinge(self, w: np.ndarray) -> float:
        worst = 0.0
        for _, d in self.utility:
            worst = max(worst, _hinges(w, d).max(initial=0.0))
        g = 0.5 * (w[:, None] - w[None, :] + 1.0)
        for _, d in self.additive:
            worst = max(worst, _hinges(g, d)[self.offdiag].max(initial=0.0))
        r = w[:, None] / w[None, :]
        for _, d in self.multiplicative:
            worst = max(worst, _hinges(r, d)[self.offdiag].max(initial=0.0))
        return float(worst)


def _terms(x: np.ndarray, d: np.ndarray) -> np.ndarray:
    l, m, u = d[..., 0], d[..., 1], d[..., 2]
    return np.maximum(0.0, l - x) + np.maximum(0.0, x - u) + (x - m) ** 2


def _hinges(x: np.ndarray, d: np.ndarray) -> np.ndarray:
    return np.maximum(np.maximum(0.0, d[..., 0] - x), np.maximum(0.0, x - d[..., 2]))


def _check_weights(w, n: int) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (n,):
        raise WeightDomainError(f"expected {n} weights, got shape {w.shape}")
    if np.any(w < WEIGHT_FLOOR):
        raise WeightDomainError(f"every weight must be >= {WEIGHT_FLOOR:g}, got min {w.min():.3g}")
    if abs(w.sum() - 1.0) > 1e-6:
        raise WeightDomainError(f"weights must sum to 1, got {w.sum():.9g}")
    return w


def evaluate_objective(w, p: DecisionProblem) -> tuple[float, list[DeviationRecord]]:
    """Objective value at ``w`` and the nonzero interval deviations.

    Every ordered pair contributes to the objective; deviations are listed
    for ``i < j`` only (lower-triangle violations mirror them once the
    relation is reciprocal).
    """
    w = _check_weights(w, p.n)
    objective = _Compiled(p).objective(w)
    devs: list[DeviationRecord] = []
    for dm in p.dms:
        pref = dm.preference
        prefix = _KIND_PREFIX[pref.format]
        if isinstance(pref, UtilityVector):
            for j in range(p.n):
                l, _, u = pref.data[j]
                _append(devs, dm.id, prefix, (j,), l - w[j], w[j] - u)
            continue
        for i in range(p.n):
            for j in range(i + 1, p.n):
                x = 0.5 * (w[i] - w[j] + 1.0) if prefix == "preference" else w[i] / w[j]
                l, _, u = pref.data[i, j]
                _append(devs, dm.id, prefix, (i, j), l - x, x - u)
    return objective, devs


def _append(devs, dm_id, prefix, idx, lower_gap, upper_gap) -> None:
    if lower_gap > _NOISE:
        devs.append(DeviationRecord(dm_id, f"{prefix}-lower", idx, float(lower_gap)))
    if upper_gap > _NOISE:
        devs.append(DeviationRecord(dm_id, f"{prefix}-upper", idx, float(upper_gap)))


def _to_simplex(z: np.ndarray) -> np.ndarray:
    n = z.size + 1
    x = np.append(z, 0.0)
    x = np.exp(x - x.max())
    return WEIGHT_FLOOR + (1.0 - n * WEIGHT_FLOOR) * x / x.sum()


def _from_simplex(w: np.ndarray) -> np.ndarray:
    n = w.size
    s = np.clip((w - WEIGHT_FLOOR) / (1.0 - n * WEIGHT_FLOOR), 1e-12, None)
    logs = np.log(s)
    return logs[:-1] - logs[-1]


def _local_descent(fun, z0: np.ndarray, budget: int) -> tuple[np.ndarray, float]:
    """Nelder-Mead with restarts; a restart rebuilds a fresh simplex at the incumbent."""
    z, fz = z0, fun(z0)
    used = 0
    step = 0.5
    while used < budget:
        simplex = np.vstack([z] + [z + step * e for e in np.eye(z.size)])
        res = minimize(fun, z, method="Nelder-Mead",
                       options={"initial_simplex": simplex, "maxiter": budget - used,
                                "xatol": 1e-10, "fatol": 1e-13})
        used += max(int(res.nit), 1)
        improved = fz - res.fun
        if res.fun < fz:
            z, fz = res.x, float(res.fun)
        if improved <= 1e-12 and step <= 0.01:
            break
        step = max(step * 0.2, 0.01) if improved <= 1e-12 else step * 0.5
    return z, fz


def solve_weights(p: DecisionProblem, cfg: SolverConfig = SolverConfig()) -> WeightSolution:
    """Minimise the deviation objective over the simplex (one round, no adjustment)."""
    comp = _Compiled(p)
    n = p.n

    def fun(z: np.ndarray) -> float:
        return comp.objective(_to_simplex(z))

    rng = np.random.default_rng(cfg.seed)
    starts = [np.full(n, 1.0 / n)] + [rng.dirichlet(np.ones(n)) for _ in range(max(cfg.starts, 1) - 1)]

    best_z, best_f = None, np.inf
    for k, w0 in enumerate(starts):
        z, fz = _local_descent(fun, _from_simplex(w0), cfg.max_iterations)
        if fz < best_f:
            best_z, best_f = z, fz
            log.debug("start %d improved objective to %.10g", k, fz)

    w = _to_simplex(best_z)
    w = w / w.sum()
    objective, devs = evaluate_objective(w, p)
    converged = comp.max_hinge(w) < cfg.zero_tol
    return WeightSolution(
        weights=w,
        deviations=devs,
        objective=objective,
        rounds=[Round(p, w, objective, devs)],
        converged=converged,
    )


def adjust_preferences(p: DecisionProblem, deviations: list[DeviationRecord],
                       multiplicative_floor: float = MULTIPLICATIVE_FLOOR) -> DecisionProblem:
    """Widen each violated bound by exactly its deviation; modes stay fixed.

    Relation mirrors ``(j, i)`` are recomputed from reciprocity so adjusted
    relations remain reciprocal.
    """
    if not deviations:
        return p
    by_dm: dict[str, list[DeviationRecord]] = {}
    for dev in deviations:
        by_dm.setdefault(dev.dm, []).append(dev)

    prefs = []
    for dm in p.dms:
        pref = dm.preference
        devs = by_dm.get(dm.id)
        if not devs:
            prefs.append(pref)
            continue
        data = np.array(pref.data)
        mult = isinstance(pref, MultiplicativePreferenceRelation)
        for dev in devs:
            idx = dev.indices
            cell = data[idx]
            if dev.side == "lower":
                floor = multiplicative_floor if mult else 0.0
                cell[0] = max(floor, cell[0] - dev.value)
            else:
                cell[2] = cell[2] + dev.value if mult else min(1.0, cell[2] + dev.value)
            if len(idx) == 2:
                i, j = idx
                data[j, i] = pref.mirror(cell)
        prefs.append(pref.with_data(data))
    return p.with_preferences(prefs)


def elicit_weights(p: DecisionProblem, cfg: SolverConfig = SolverConfig()) -> WeightSolution:
    """Alternate solving and bound relaxation until no interval is violated.

    Only the upper triangle of each relation is taken as given; lower
    triangles are rebuilt from reciprocity before the first solve.
    """
    require_valid(p)
    current = p.reconciled()
    rounds: list[Round] = []
    sol = None
    for r in range(max(cfg.max_rounds, 1)):
        sol = solve_weights(current, cfg)
        rounds.append(sol.rounds[0])
        log.info("round %d: objective %.6g, %d deviations", r + 1, sol.objective, len(sol.deviations))
        if sol.converged:
            break
        current = adjust_preferences(current, sol.deviations)
    return WeightSolution(
        weights=sol.weights,
        deviations=sol.deviations,
        objective=sol.objective,
        rounds=rounds,
        converged=sol.converged,
    )
