"""Decision problem data model: DMs, their preference inputs and satisfaction matrices.

All fuzzy structures are stored as float arrays whose last axis holds
``(lower, mode, upper)``. Arrays are made read-only on construction so a
problem can be shared freely once built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar, Sequence, Union

import numpy as np

from .tfn import TFN

# additive reciprocity is checked absolutely, multiplicative relative to 1
ADDITIVE_TOL = 1e-9
MULTIPLICATIVE_TOL = 1e-6
DM_WEIGHT_TOL = 1e-9


def _frozen_array(data, ndim: int) -> np.ndarray:
    arr = np.array(data, dtype=float)
    if arr.ndim != ndim or arr.shape[-1] != 3:
        raise ValueError(f"expected an array of (l, m, u) triples with {ndim} axes, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


class _Fuzzy:
    format: ClassVar[str]
    data: np.ndarray

    def __eq__(self, other: object) -> bool:
        return type(self) is type(other) and np.array_equal(self.data, other.data)

    def __hash__(self) -> int:
        return hash((self.format, self.data.tobytes()))

    def to_list(self) -> list:
        return self.data.tolist()


class UtilityVector(_Fuzzy):
    """Per-criterion bounds ``(ul, um, uu)`` on a criterion's weight."""

    format = "utility"

    def __init__(self, values) -> None:
        self.data = _frozen_array(values, 2)

    @property
    def size(self) -> int:
        return self.data.shape[0]

    def entry(self, j: int) -> TFN:
        return TFN.of(self.data[j])

    def with_data(self, data: np.ndarray) -> "UtilityVector":
        return UtilityVector(data)

    def __repr__(self) -> str:
        return f"UtilityVector(n={self.size})"


class _Relation(_Fuzzy):
    identity: ClassVar[float]

    def __init__(self, matrix) -> None:
        self.data = _frozen_array(matrix, 3)

    @property
    def size(self) -> int:
        return self.data.shape[0]

    @property
    def is_square(self) -> bool:
        return self.data.shape[0] == self.data.shape[1]

    def entry(self, i: int, j: int) -> TFN:
        return TFN.of(self.data[i, j])

    def with_data(self, data: np.ndarray):
        return type(self)(data)

    @staticmethod
    def mirror(triple: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def reciprocal_closure(self):
        """Copy whose diagonal and lower triangle are rebuilt from the upper triangle."""
        out = np.array(self.data)
        n = self.size
        for i in range(n):
            out[i, i] = self.identity
            for j in range(i + 1, n):
                out[j, i] = self.mirror(out[i, j])
        return type(self)(out)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.size})"


class FuzzyPreferenceRelation(_Relation):
    """Additive reciprocal relation around ``0.5 (w_i - w_j + 1)``."""

    format = "fuzzy_preference"
    identity = 0.5

    @staticmethod
    def mirror(triple: np.ndarray) -> np.ndarray:
        l, m, u = triple
        return np.array([1.0 - u, 1.0 - m, 1.0 - l])


class MultiplicativePreferenceRelation(_Relation):
    """Multiplicative reciprocal relation around ``w_i / w_j``."""

    format = "multiplicative"
    identity = 1.0

    @staticmethod
    def mirror(triple: np.ndarray) -> np.ndarray:
        l, m, u = triple
        return np.array([1.0 / u, 1.0 / m, 1.0 / l])


PreferenceInput = Union[UtilityVector, FuzzyPreferenceRelation, MultiplicativePreferenceRelation]

PREFERENCE_TYPES: dict[str, type] = {
    cls.format: cls for cls in (UtilityVector, FuzzyPreferenceRelation, MultiplicativePreferenceRelation)
}


class SatisfactionMatrix(_Fuzzy):
    """Alternatives x criteria matrix of satisfaction degrees."""

    format = "satisfaction"

    def __init__(self, matrix) -> None:
        self.data = _frozen_array(matrix, 3)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]

    def entry(self, i: int, k: int) -> TFN:
        return TFN.of(self.data[i, k])

    def scaled(self, factor: float) -> "SatisfactionMatrix":
        return SatisfactionMatrix(self.data * factor)

    def __repr__(self) -> str:
        m, n = self.shape
        return f"SatisfactionMatrix({m}x{n})"


@dataclass(frozen=True, eq=True)
class DecisionMakerProfile:
    id: str
    weight: float
    preference: PreferenceInput
    satisfaction: SatisfactionMatrix

    @property
    def format(self) -> str:
        return self.preference.format


@dataclass(frozen=True, eq=True)
class DecisionProblem:
    alternatives: tuple[str, ...]
    criteria: tuple[str, ...]
    dms: tuple[DecisionMakerProfile, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "alternatives", tuple(self.alternatives))
        object.__setattr__(self, "criteria", tuple(self.criteria))
        object.__setattr__(self, "dms", tuple(self.dms))

    @property
    def m(self) -> int:
        return len(self.alternatives)

    @property
    def n(self) -> int:
        return len(self.criteria)

    @property
    def dm_weights(self) -> np.ndarray:
        return np.array([dm.weight for dm in self.dms])

    def dm(self, dm_id: str) -> DecisionMakerProfile:
        for dm in self.dms:
            if dm.id == dm_id:
                return dm
        raise KeyError(dm_id)

    def with_preferences(self, prefs: Sequence[PreferenceInput]) -> "DecisionProblem":
        dms = tuple(
            DecisionMakerProfile(dm.id, dm.weight, pref, dm.satisfaction) for dm, pref in zip(self.dms, prefs)
        )
        return DecisionProblem(self.alternatives, self.criteria, dms)

    def reconciled(self) -> "DecisionProblem":
        """Problem whose relations are rebuilt from their upper triangles."""
        return self.with_preferences(
            [dm.preference.reciprocal_closure() if isinstance(dm.preference, _Relation) else dm.preference
             for dm in self.dms]
        )

    def validate(self) -> "ValidationReport":
        return validate_problem(self)


@dataclass(frozen=True)
class Violation:
    dm: str | None
    location: str
    condition: str
    residual: float
    severity: str = "error"

    def __str__(self) -> str:
        who = f"{self.dm}: " if self.dm is not None else ""
        return f"[{self.severity}] {who}{self.location}: {self.condition} (residual {self.residual:.6g})"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def errors(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == "error"]

    @property
    def warnings(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)


class ProblemValidationError(ValueError):
    """Raised when a problem fails hard validation checks."""

    def __init__(self, report: ValidationReport) -> None:
        self.report = report
        lines = "\n".join(f"  {v}" for v in report.errors)
        super().__init__(f"problem failed validation:\n{lines}")


def require_valid(problem: DecisionProblem) -> ValidationReport:
    report = validate_problem(problem)
    if not report.ok:
        raise ProblemValidationError(report)
    return report


def _check_triples(out: list[Violation], dm: str, what: str, data: np.ndarray,
                   lo: float | None, hi: float | None, positive: bool = False) -> None:
    if not np.all(np.isfinite(data)):
        out.append(Violation(dm, what, "entries must be finite", float("nan")))
        return
    for idx in np.ndindex(data.shape[:-1]):
        l, m, u = data[idx]
        cell = f"{what}[{', '.join(str(i + 1) for i in idx)}]"
        if l > m or m > u:
            out.append(Violation(dm, cell, "triple must satisfy lower <= mode <= upper", max(l - m, m - u)))
        if positive and l <= 0:
            out.append(Violation(dm, cell, "multiplicative lower bound must be > 0", -l))
        if lo is not None and l < lo:
            out.append(Violation(dm, cell, f"lower bound must be >= {lo:g}", lo - l))
        if hi is not None and u > hi:
            out.append(Violation(dm, cell, f"upper bound must be <= {hi:g}", u - hi))


def _check_additive(out: list[Violation], dm: str, rel: FuzzyPreferenceRelation) -> None:
    d = rel.data
    n = rel.size
    for i in range(n):
        res = float(np.max(np.abs(d[i, i] - 0.5)))
        if res > ADDITIVE_TOL:
            out.append(Violation(dm, f"P({i + 1},{i + 1})", "diagonal must be (0.5, 0.5, 0.5)", res, "warning"))
        for j in range(i + 1, n):
            sums = {
                "pl_ij + pu_ji = 1": d[i, j, 0] + d[j, i, 2],
                "pm_ij + pm_ji = 1": d[i, j, 1] + d[j, i, 1],
                "pu_ij + pl_ji = 1": d[i, j, 2] + d[j, i, 0],
            }
            for cond, s in sums.items():
                res = abs(s - 1.0)
                if res > ADDITIVE_TOL:
                    out.append(Violation(dm, f"P({i + 1},{j + 1})/({j + 1},{i + 1})",
                                         f"reciprocity {cond}", float(res), "warning"))


def _check_multiplicative(out: list[Violation], dm: str, rel: MultiplicativePreferenceRelation) -> None:
    d = rel.data
    n = rel.size
    for i in range(n):
        res = float(np.max(np.abs(d[i, i] - 1.0)))
        if res > MULTIPLICATIVE_TOL:
            out.append(Violation(dm, f"B({i + 1},{i + 1})", "diagonal must be (1, 1, 1)", res, "warning"))
        for j in range(i + 1, n):
            prods = {
                "bl_ij * bu_ji = 1": d[i, j, 0] * d[j, i, 2],
                "bm_ij * bm_ji = 1": d[i, j, 1] * d[j, i, 1],
                "bu_ij * bl_ji = 1": d[i, j, 2] * d[j, i, 0],
            }
            for cond, p in prods.items():
                res = abs(p - 1.0)
                if res > MULTIPLICATIVE_TOL:
                    out.append(Violation(dm, f"B({i + 1},{j + 1})/({j + 1},{i + 1})",
                                         f"reciprocity {cond}", float(res), "warning"))


def validate_problem(p: DecisionProblem) -> ValidationReport:
    """Check every structural and reciprocity condition of ``p``.

    Shape, range and ordering problems are errors; reciprocity and diagonal
    residuals are warnings, since hand-entered relations are routinely
    rounded and the solver rebuilds lower triangles anyway.
    """
    out: list[Violation] = []
    m, n = p.m, p.n
    if m < 2:
        out.append(Violation(None, "alternatives", "need at least 2 alternatives", float(2 - m)))
    if n < 2:
        out.append(Violation(None, "criteria", "need at least 2 criteria", float(2 - n)))
    if not p.dms:
        out.append(Violation(None, "decision_makers", "need at least 1 decision maker", 1.0))

    ids = [dm.id for dm in p.dms]
    for dup in sorted({i for i in ids if ids.count(i) > 1}):
        out.append(Violation(dup, "id", "decision maker ids must be unique", float(ids.count(dup) - 1)))

    if p.dms:
        total = float(sum(dm.weight for dm in p.dms))
        if abs(total - 1.0) > DM_WEIGHT_TOL:
            out.append(Violation(None, "dm_weights", "decision maker weights must sum to 1", abs(total - 1.0)))

    for dm in p.dms:
        if not (0.0 < dm.weight <= 1.0):
            out.append(Violation(dm.id, "weight", "decision maker weight must lie in (0, 1]", float(dm.weight)))

        pref = dm.preference
        if isinstance(pref, UtilityVector):
            if pref.size != n:
                out.append(Violation(dm.id, "preference", f"utility vector has {pref.size} entries for {n} criteria",
                                     float(abs(pref.size - n))))
            else:
                _check_triples(out, dm.id, "U", pref.data, 0.0, 1.0)
        elif isinstance(pref, (FuzzyPreferenceRelation, MultiplicativePreferenceRelation)):
            shape = pref.data.shape[:2]
            if shape != (n, n):
                out.append(Violation(dm.id, "preference",
                                     f"{pref.format} relation is {shape[0]}x{shape[1]}, expected {n}x{n}",
                                     float(abs(shape[0] - n) + abs(shape[1] - n))))
            elif isinstance(pref, FuzzyPreferenceRelation):
                _check_triples(out, dm.id, "P", pref.data, 0.0, 1.0)
                _check_additive(out, dm.id, pref)
            else:
                _check_triples(out, dm.id, "B", pref.data, None, None, positive=True)
                _check_multiplicative(out, dm.id, pref)
        else:
            out.append(Violation(dm.id, "preference", f"unknown preference type {type(pref).__name__}", float("nan")))

        sat_shape = dm.satisfaction.shape
        if sat_shape != (m, n):
            out.append(Violation(dm.id, "satisfaction",
                                 f"satisfaction matrix is {sat_shape[0]}x{sat_shape[1]}, expected {m}x{n}",
                                 float(abs(sat_shape[0] - m) + abs(sat_shape[1] - n))))
        else:
            _check_triples(out, dm.id, "S", dm.satisfaction.data, 0.0, 1.0)

    return ValidationReport(out)
