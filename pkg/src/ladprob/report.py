"""Collect probabilities into a report and render it as text, JSON or CSV."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .exactmath import ExactProb, to_decimal
from .instances import (
    GroupedInstance,
    find_minimal_solutions,
    load_instance,
    min_pattern_cover,
    resolve_subset,
    size_profile,
)
from .model_m1 import M1Case, SizeProfile, m1_probability, pattern_probability, round_size
from .model_m2 import IntersectionQuery, prob_intersection_at_most, prob_intersection_eq

__all__ = [
    "QUESTION_TAGS",
    "ReportEntry",
    "Curve",
    "AnalysisReport",
    "render_report",
    "report_from_json",
    "profile_entries",
    "analyze_instance",
    "describe_profile",
]

QUESTION_TAGS = ("reduction", "structure", "bound", "reliability", "covering", "intersection")
FORMATS = ("text", "json", "csv")
CSV_HEADER = ["kind", "tag", "label", "condition", "x", "value", "numerator", "denominator"]


@dataclass
class ReportEntry:
    tag: str
    label: str
    condition: str
    prob: ExactProb

    def __post_init__(self):
        if self.tag not in QUESTION_TAGS:
            raise ValueError(f"unknown question tag {self.tag!r}")
        self.prob = ExactProb(self.prob)


@dataclass
class Curve:
    name: str
    tag: str
    condition: str
    points: list[tuple[int, ExactProb]] = field(default_factory=list)


@dataclass
class AnalysisReport:
    instance: str
    profiles: dict[str, dict] = field(default_factory=dict)
    entries: list[ReportEntry] = field(default_factory=list)
    curves: list[Curve] = field(default_factory=list)
    facts: dict[str, object] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def add(self, tag: str, label: str, condition: str, prob: Fraction) -> ReportEntry:
        entry = ReportEntry(tag, label, condition, prob)
        self.entries.append(entry)
        return entry

    def entry(self, label: str) -> ReportEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)


def describe_profile(p: SizeProfile) -> str:
    parts = [f"n={p.n}"]
    for name in ("n1", "n2", "k", "k1", "k2"):
        value = getattr(p, name)
        if value is not None:
            parts.append(f"{name}={value}")
    parts.append(f"|Y|={p.spec.y_attrs}")
    parts.append(f"|Z|={p.spec.z_attrs}")
    return ", ".join(parts)


def _profile_dict(p: SizeProfile) -> dict:
    return {
        "n": p.n,
        "n1": p.n1,
        "n2": p.n2,
        "k": p.k,
        "k1": p.k1,
        "k2": p.k2,
        "y_attrs": p.spec.y_attrs,
        "z_attrs": p.spec.z_attrs,
    }


def profile_entries(report: AnalysisReport, p: SizeProfile, intersections=(0, 1, 2), bound=4):
    """Add the five disjoint-projection questions and the intersection sizes for a profile."""
    cond = f"n1={p.n1}, n2={p.n2}, |Y|={p.spec.y_attrs}, |Z|={p.spec.z_attrs}"
    report.add("bound", "Pr(n1,n2 / n)", f"n={p.n}, |Y|={p.spec.y_attrs}, |Z|={p.spec.z_attrs}",
               m1_probability(M1Case.B, p))
    if p.k is not None:
        report.add("reduction", f"Pr(k={p.k} / n1,n2)", cond, m1_probability(M1Case.E, p))
    if p.k1 is not None and p.k2 is not None and p.k is not None and p.k1 + p.k2 != p.k:
        report.warnings.append("group projections intersect; the k1, k2 question is skipped")
    elif p.k1 is not None and p.k2 is not None:
        report.add("structure", f"Pr(k1={p.k1},k2={p.k2} / n1,n2)", cond, m1_probability(M1Case.F, p))
    k_max = min(p.n, p.spec.d_y)
    report.add("reliability", f"Pr(k={k_max} / n1,n2)", cond,
               m1_probability(M1Case.E, SizeProfile(p.n, p.spec, p.n1, p.n2, k=k_max)))
    if p.k1 is not None:
        report.add("covering", f"Pr(k1={p.k1} / n1,n2)", cond,
                   pattern_probability(p.n1, p.n2, p.spec, r=p.k1))
    for u in intersections:
        if u <= min(p.n1, p.n2, p.spec.d_y):
            q = IntersectionQuery(p.n1, p.n2, p.spec, u=u)
            report.add("intersection", f"Pr(r={u} / n1,n2)", cond, prob_intersection_eq(q))
    if bound is not None:
        q = IntersectionQuery(p.n1, p.n2, p.spec, t=min(bound, p.spec.d_y))
        report.add("intersection", f"Pr(r<={bound} / n1,n2)", cond, prob_intersection_at_most(q))
    report.profiles.setdefault("used", _profile_dict(p))
    return report


def analyze_instance(
    source,
    subset=None,
    *,
    max_levels: int | None = None,
    max_nodes: int | None = None,
    rounding: str = "nearest",
    positive_group: str | None = None,
) -> AnalysisReport:
    """Profile an instance on a candidate attribute set and report every question.

    Without a candidate set, all minimum solutions are searched first; the
    report then lists one profile per solution plus their average, whose
    projection sizes are rounded before any probability is computed.
    """
    inst = source if isinstance(source, GroupedInstance) else load_instance(
        source, positive_group=positive_group
    )
    name = getattr(source, "name", None) or (source if isinstance(source, str) else "instance")
    report = AnalysisReport(str(name))
    report.warnings.extend(inst.warnings)
    if subset is not None:
        subsets = [resolve_subset(inst, subset)]
    else:
        search = find_minimal_solutions(inst, max_levels=max_levels, max_nodes=max_nodes)
        if not search.solutions:
            report.warnings.append("no solution found within the search budget")
            return report
        if not search.optimal:
            report.warnings.append("search budget exhausted; solutions may not be minimum")
        subsets = search.solutions
        report.facts["solutions"] = len(subsets)

    profiles = [size_profile(inst, s) for s in subsets]
    for s, p in zip(subsets, profiles):
        label = ",".join(inst.attributes[j] for j in s)
        report.profiles[label] = _profile_dict(p)
    if len(profiles) == 1:
        used = profiles[0]
    else:
        avg_k = Fraction(sum(p.k for p in profiles), len(profiles))
        avg_k1 = Fraction(sum(p.k1 for p in profiles), len(profiles))
        report.profiles["average"] = {"k": str(avg_k), "k1": str(avg_k1)}
        k, k1 = round_size(avg_k, rounding), round_size(avg_k1, rounding)
        base = profiles[0]
        used = SizeProfile(base.n, base.spec, base.n1, base.n2, k, k1, k - k1)
    report.profiles["used"] = _profile_dict(used)
    cover = min_pattern_cover(inst, subsets[0])
    report.facts["pattern_cover"] = cover.size
    report.facts["pattern_cover_exact"] = cover.exact
    if cover.uncoverable:
        report.warnings.append(
            "uncoverable positive observations: " + ", ".join(inst.ids[i] for i in cover.uncoverable)
        )
    return profile_entries(report, used)


# ---------------------------------------------------------------------------
# Rendering


def _text(report: AnalysisReport, digits: int) -> str:
    lines = [f"# {report.instance}"]
    used = report.profiles.get("used")
    if used:
        lines.append("# profile: " + ", ".join(f"{k}={v}" for k, v in used.items() if v is not None))
    for key, value in report.facts.items():
        lines.append(f"# {key}: {value}")
    width = max((len(e.label) for e in report.entries), default=0)
    for e in report.entries:
        lines.append(f"{e.tag:<12} {e.label:<{width}}  [{e.condition}]  {to_decimal(e.prob, digits)}")
    for c in report.curves:
        lines.append(f"{c.tag:<12} {c.name}  [{c.condition}]")
        for x, p in c.points:
            lines.append(f"  {x:>6}  {to_decimal(p, digits)}")
    for w in report.warnings:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"


def _prob_json(p: Fraction, digits: int) -> dict:
    return {"value": to_decimal(p, digits), "numerator": str(p.numerator), "denominator": str(p.denominator)}


def _json(report: AnalysisReport, digits: int) -> str:
    doc = {
        "instance": report.instance,
        "profiles": report.profiles,
        "entries": [
            {"tag": e.tag, "label": e.label, "condition": e.condition, **_prob_json(e.prob, digits)}
            for e in report.entries
        ],
        "curves": [
            {
                "name": c.name,
                "tag": c.tag,
                "condition": c.condition,
                "points": [{"x": x, **_prob_json(p, digits)} for x, p in c.points],
            }
            for c in report.curves
        ],
        "facts": report.facts,
        "warnings": report.warnings,
    }
    return json.dumps(doc, indent=2) + "\n"


def _csv(report: AnalysisReport, digits: int) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for e in report.entries:
        w.writerow(["entry", e.tag, e.label, e.condition, "", to_decimal(e.prob, digits),
                    e.prob.numerator, e.prob.denominator])
    for c in report.curves:
        for x, p in c.points:
            w.writerow(["curve", c.tag, c.name, c.condition, x, to_decimal(p, digits),
                        p.numerator, p.denominator])
    return out.getvalue()


def render_report(report: AnalysisReport, fmt: str = "text", digits: int = 4) -> str:
    if fmt == "text":
        return _text(report, digits)
    if fmt == "json":
        return _json(report, digits)
    if fmt == "csv":
        return _csv(report, digits)
    raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")


def _prob_from(d: dict) -> ExactProb:
    return ExactProb(int(d["numerator"]), int(d["denominator"]))


def report_from_json(text: str) -> AnalysisReport:
    """Rebuild a report from :func:`render_report` JSON output."""
    doc = json.loads(text)
    report = AnalysisReport(doc["instance"], doc["profiles"], facts=doc["facts"], warnings=doc["warnings"])
    for e in doc["entries"]:
        report.add(e["tag"], e["label"], e["condition"], _prob_from(e))
    for c in doc["curves"]:
        report.curves.append(
            Curve(c["name"], c["tag"], c["condition"], [(p["x"], _prob_from(p)) for p in c["points"]])
        )
    return report
