"""Problem and report files (JSON, format version "1")."""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np

from .problem import (
    PREFERENCE_TYPES,
    DecisionMakerProfile,
    DecisionProblem,
    SatisfactionMatrix,
    ValidationReport,
    validate_problem,
    ProblemValidationError,
)
from .ranking import RankingResult
from .relations import CriteriaPartition, RelationshipReport, RelationTable
from .tfn import TFN
from .weights import DeviationRecord, SolverConfig, WeightSolution

FORMAT_VERSION = "1"


class ProblemParseError(ValueError):
    def __init__(self, message: str, location: str = "") -> None:
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


def _expect(cond: bool, msg: str, loc: str) -> None:
    if not cond:
        raise ProblemParseError(msg, loc)


def _triples(value: Any, depth: int, loc: str) -> list:
    """Check a nested list of numeric [l, m, u] triples ``depth`` levels deep."""
    if depth == 0:
        _expect(isinstance(value, list) and len(value) == 3, "expected an [l, m, u] triple", loc)
        for k, x in enumerate(value):
            _expect(isinstance(x, (int, float)) and not isinstance(x, bool), "expected a number", f"{loc}[{k}]")
        return [float(x) for x in value]
    _expect(isinstance(value, list) and value, "expected a nonempty list", loc)
    rows = [_triples(v, depth - 1, f"{loc}[{k}]") for k, v in enumerate(value)]
    if depth >= 2:
        widths = {len(r) for r in rows}
        _expect(len(widths) == 1, "rows have different lengths", loc)
    return rows


def _labels(doc: dict, key: str) -> list[str]:
    _expect(key in doc, "missing section", key)
    vals = doc[key]
    _expect(isinstance(vals, list), "expected a list of labels", key)
    for k, v in enumerate(vals):
        _expect(isinstance(v, str), "labels must be strings", f"{key}[{k}]")
    return list(vals)


def problem_from_dict(doc: Any) -> DecisionProblem:
    _expect(isinstance(doc, dict), "top level must be an object", "$")
    version = str(doc.get("format_version", FORMAT_VERSION))
    _expect(version == FORMAT_VERSION, f"unsupported format version {version!r}", "format_version")
    alternatives = _labels(doc, "alternatives")
    criteria = _labels(doc, "criteria")
    _expect("decision_makers" in doc, "missing section", "decision_makers")
    raw_dms = doc["decision_makers"]
    _expect(isinstance(raw_dms, list), "expected a list", "decision_makers")

    dms = []
    for d, raw in enumerate(raw_dms):
        loc = f"decision_makers[{d}]"
        _expect(isinstance(raw, dict), "expected an object", loc)
        for key in ("id", "weight", "preference", "satisfaction"):
            _expect(key in raw, f"missing field {key!r}", loc)
        _expect(isinstance(raw["weight"], (int, float)), "expected a number", f"{loc}.weight")
        pref = raw["preference"]
        ploc = f"{loc}.preference"
        _expect(isinstance(pref, dict) and "format" in pref, "expected an object with a 'format' tag", ploc)
        fmt = pref["format"]
        _expect(fmt in PREFERENCE_TYPES, f"unknown format {fmt!r}; expected one of {sorted(PREFERENCE_TYPES)}",
                f"{ploc}.format")
        if fmt == "utility":
            _expect("values" in pref, "missing field 'values'", ploc)
            data = _triples(pref["values"], 1, f"{ploc}.values")
        else:
            _expect("matrix" in pref, "missing field 'matrix'", ploc)
            data = _triples(pref["matrix"], 2, f"{ploc}.matrix")
        sat = _triples(raw["satisfaction"], 2, f"{loc}.satisfaction")
        dms.append(DecisionMakerProfile(
            id=str(raw["id"]),
            weight=float(raw["weight"]),
            preference=PREFERENCE_TYPES[fmt](data),
            satisfaction=SatisfactionMatrix(sat),
        ))
    return DecisionProblem(tuple(alternatives), tuple(criteria), tuple(dms))


def problem_to_dict(p: DecisionProblem) -> dict:
    dms = []
    for dm in p.dms:
        key = "values" if dm.format == "utility" else "matrix"
        dms.append({
            "id": dm.id,
            "weight": dm.weight,
            "preference": {"format": dm.format, key: dm.preference.to_list()},
            "satisfaction": dm.satisfaction.to_list(),
        })
    return {
        "format_version": FORMAT_VERSION,
        "alternatives": list(p.alternatives),
        "criteria": list(p.criteria),
        "decision_makers": dms,
    }


def load_document(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemParseError(str(exc), str(path)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from exc


def parse_problem(path: str | Path) -> tuple[DecisionProblem, ValidationReport]:
    """Read and validate a problem file.

    Returns the problem together with its validation report (warnings
    only); raises ``ProblemParseError`` on malformed input and
    ``ProblemValidationError`` on hard validation failures.
    """
    problem = problem_from_dict(load_document(path))
    report = validate_problem(problem)
    if not report.ok:
        raise ProblemValidationError(report)
    return problem, report


def write_json(doc: Any, path: str | Path | None = None) -> str:
    text = json.dumps(doc, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def write_problem(p: DecisionProblem, path: str | Path) -> None:
    write_json(problem_to_dict(p), path)


# ---------------------------------------------------------------- reports


def _tfn(t: TFN) -> list[float]:
    return [t.lower, t.mode, t.upper]


def _deviation(dev: DeviationRecord, p: DecisionProblem) -> dict:
    return {
        "dm": dev.dm,
        "kind": dev.kind,
        "indices": [i + 1 for i in dev.indices],
        "criteria": [p.criteria[i] for i in dev.indices],
        "value": dev.value,
    }


def weights_section(sol: WeightSolution, p: DecisionProblem) -> dict:
    rounds = []
    for r, rnd in enumerate(sol.rounds, start=1):
        rounds.append({
            "round": r,
            "weights": rnd.weights.tolist(),
            "objective": rnd.objective,
            "deviations": [_deviation(d, p) for d in rnd.deviations],
            "preferences": {dm.id: problem_to_dict(rnd.problem)["decision_makers"][k]["preference"]
                            for k, dm in enumerate(rnd.problem.dms)},
        })
    return {
        "source": "elicited",
        "vector": sol.weights.tolist(),
        "by_criterion": dict(zip(p.criteria, sol.weights.tolist())),
        "objective": sol.objective,
        "converged": sol.converged,
        "deviations": [_deviation(d, p) for d in sol.deviations],
        "rounds": rounds,
    }


def injected_weights_section(weights, p: DecisionProblem) -> dict:
    w = [float(x) for x in weights]
    return {"source": "injected", "vector": w, "by_criterion": dict(zip(p.criteria, w)), "converged": True}


def relations_section(rel: RelationshipReport, p: DecisionProblem) -> dict:
    out = {}
    for dm in p.dms:
        table = rel.tables[dm.id]
        pairs = [{
            "criteria": [p.criteria[k], p.criteria[l]],
            "indices": [k + 1, l + 1],
            "cp": d.cp,
            "cf": d.cf,
            "degenerate": d.degenerate,
        } for (k, l), d in sorted(table.degrees.items())]
        part = rel.partitions[dm.id]
        out[dm.id] = {
            "pairs": pairs,
            "partition": [[p.criteria[c] for c in s] for s in part.subsets],
            "partition_indices": [[c + 1 for c in s] for s in part.subsets],
            "trace": [{"criterion": p.criteria[s.criterion], "affinity": s.affinity,
                       "subset": s.subset + 1, "opened": s.opened} for s in part.trace],
        }
    return out


def relations_from_section(section: dict, p: DecisionProblem) -> dict[str, CriteriaPartition]:
    parts = {}
    for dm in p.dms:
        subsets = [tuple(c - 1 for c in s) for s in section[dm.id]["partition_indices"]]
        parts[dm.id] = CriteriaPartition(subsets)
    return parts


def ranking_section(res: RankingResult, p: DecisionProblem) -> dict:
    alts = p.alternatives
    return {
        "dominant_subsets": {d: [p.criteria[c] for c in s] for d, s in res.dominant_subsets.items()},
        "final_degrees": {d: {alts[a]: _tfn(t) for a, t in enumerate(row)} for d, row in res.per_dm_final.items()},
        "integrated": {alts[a]: _tfn(t) for a, t in enumerate(res.integrated)},
        "scores": {alts[a]: s for a, s in enumerate(res.scores)},
        "order": [alts[a] for a in res.order],
        "ties": [[alts[a] for a in g] for g in res.ties],
    }


def new_report(p: DecisionProblem, config: dict) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": config,
        "alternatives": list(p.alternatives),
        "criteria": list(p.criteria),
        "decision_makers": [{"id": dm.id, "weight": dm.weight, "format": dm.format} for dm in p.dms],
    }


def solver_config_dict(cfg: SolverConfig) -> dict:
    return {"seed": cfg.seed, "starts": cfg.starts, "max_iterations": cfg.max_iterations,
            "zero_tol": cfg.zero_tol, "max_rounds": cfg.max_rounds}


def render_tables(report: dict) -> str:
    """Human-readable 3-decimal tables for whatever sections the report holds."""
    lines: list[str] = []
    crit = report["criteria"]
    if "weights" in report:
        w = report["weights"]
        lines.append(f"Criteria weights ({w['source']}):")
        lines.append("  " + "  ".join(f"{c}={v:.3f}" for c, v in zip(crit, w["vector"])))
        if "rounds" in w:
            lines.append(f"  rounds: {len(w['rounds'])}, converged: {w['converged']}, objective: {w['objective']:.4f}")
            if w["rounds"]:
                first = w["rounds"][0]["deviations"]
                if first:
                    lines.append("  round 1 deviations:")
                    for d in first:
                        idx = ",".join(str(i) for i in d["indices"])
                        lines.append(f"    {d['dm']:>6} {d['kind']:<22} ({idx}) {d['value']:.3f}")
        lines.append("")
    if "relations" in report:
        rel = report["relations"]
        ids = list(rel)
        lines.append("Cooperative / conflicting degrees:")
        lines.append("  pair      " + "".join(f"{i:>14}" for i in ids))
        for k, pair in enumerate(rel[ids[0]]["pairs"]):
            label = f"({pair['criteria'][0]},{pair['criteria'][1]})"
            cells = "".join(f"  {rel[i]['pairs'][k]['cp']:.3f}/{rel[i]['pairs'][k]['cf']:.3f}" for i in ids)
            lines.append(f"  {label:<10}{cells}")
        lines.append("Criteria partitions:")
        for i in ids:
            parts = " | ".join("{" + ", ".join(s) + "}" for s in rel[i]["partition"])
            lines.append(f"  {i:>6}: {parts}")
        lines.append("")
    if "ranking" in report:
        rk = report["ranking"]
        alts = report["alternatives"]
        ids = list(rk["final_degrees"])
        lines.append("Final degrees of satisfaction:")
        for a in alts:
            cells = "  ".join("({:.3f},{:.3f},{:.3f})".format(*rk["final_degrees"][i][a]) for i in ids)
            lines.append(f"  {a:<6}{cells}")
        lines.append("Integrated degrees and scores:")
        for a in alts:
            l, m, u = rk["integrated"][a]
            lines.append(f"  {a:<6}({l:.3f}, {m:.3f}, {u:.3f})  score {rk['scores'][a]:.3f}")
        lines.append("Order: " + " > ".join(rk["order"]))
        if rk["ties"]:
            lines.append("Near ties: " + "; ".join(" ~ ".join(g) for g in rk["ties"]))
    return "\n".join(lines).rstrip() + "\n"


def order_from_report(report: dict) -> list[str]:
    """Re-derive the best-first order from a report's integrated degrees."""
    from .ranking import rank_alternatives

    alts = report["alternatives"]
    integrated = [TFN.of(report["ranking"]["integrated"][a]) for a in alts]
    _, order, _ = rank_alternatives(integrated)
    return [alts[a] for a in order]


def weights_from_report(report: dict) -> np.ndarray:
    return np.array(report["weights"]["vector"], dtype=float)
