"""Reproduction checks against published reference values.

Each test records one PASS/FAIL line; the lines are repeated in the pytest
terminal summary.  Printed references allow one unit in the last printed
digit or 5% relative error, whichever is looser.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction

import pytest

from ladprob import catalog
from ladprob.asymptotics import convergence_bridge, egf_rho_groups, egf_rho_groups_closed
from ladprob.exactmath import (
    DomainSpec,
    alpha,
    big_binomial,
    parse_rendered,
    rendered_ulp,
    to_decimal,
)
from ladprob.instances import (
    find_minimal_solutions,
    enumerate_patterns,
    min_pattern_cover,
    project,
    resolve_subset,
    running_example,
)
from ladprob.model_m1 import (
    M1Case,
    SizeProfile,
    beta,
    delta_coeff,
    gamma_coeff,
    lambda_coeff,
    m1_probability,
    pattern_probability,
    rho_groups,
    rho_total,
    robustness_probability,
    scan_attribute_count,
)
from ladprob.model_m2 import (
    IntersectionQuery,
    bracket_closed_form,
    bracket_sum,
    intersection_numerator,
    prob_intersection_at_most,
    prob_intersection_eq,
    rho_groups_m2,
)
from ladprob.oracle import Model, enumerate_exhaustive, monte_carlo_estimate


def matches(value: Fraction, printed: str) -> bool:
    """Compare an exact value with a printed reference.

    ``"1 - e"`` references are compared on the complement, so the relative
    tolerance applies to e.  A bare ``"0"`` or ``"1"`` must hold to 5%.
    """
    printed = printed.strip()
    value = Fraction(value)
    if printed == "0":
        return value == 0
    if printed == "1":
        return abs(1 - value) <= Fraction(5, 100)
    if printed.startswith("1 - "):
        ref = Fraction(printed[4:])
        got = 1 - value
    else:
        ref = parse_rendered(printed)
        got = value
    slack = max(rendered_ulp(printed), ref * Fraction(5, 100))
    return abs(got - ref) <= slack


def matches_any(value: Fraction, *variants: str) -> str | None:
    for v in variants:
        if matches(value, v):
            return v
    return None


def verdict(report_line, number: int, ok: bool, detail: str) -> None:
    report_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")


def test_matches_helper():
    assert matches(Fraction(6766, 10**31), "6.765e-28")
    assert not matches(Fraction(72, 10**29), "6.765e-28")
    assert matches(1 - Fraction(33, 10**8), "1 - 1e-6")
    assert not matches(1 - Fraction(22, 10**9), "1 - 1e-8")
    assert matches(Fraction(1, 2), "0.50")
    assert not matches(Fraction(1, 10**30), "0")


# ---------------------------------------------------------------------------

PATTERN_R1 = {
    "rch8": ("1 - 4.3e-7", "1 - 1e-6"),
    "ra_rep1": ("4.295e-134",),
    "ra_rep2": ("2.316e-119",),
    "ralsto": ("6.765e-28",),
    "ra100_phv": ("1 - 2.6e-8",),
    "ra100_phy": ("6.666e-6",),
    "ra_phv": ("1 - 4.5e-9",),
    "ra_phy": ("2.881e-5", "2.882e-5"),
}


def test_criterion_01_single_pattern(report_line):
    start = time.perf_counter()
    misses, notes = [], []
    for name, refs in PATTERN_R1.items():
        r = catalog.get(name)
        p = pattern_probability(r.n1, r.n2, r.spec, r=1)
        hit = matches_any(p, *refs)
        if hit is None:
            misses.append(f"{name}={to_decimal(p)} vs {refs[0]}")
        elif hit != refs[0]:
            notes.append(f"{name} matched variant {hit}")
    elapsed = time.perf_counter() - start
    ok = not misses and elapsed < 30
    detail = f"8 profiles in {elapsed:.2f}s" + (f"; {'; '.join(notes)}" if notes else "")
    verdict(report_line, 1, ok, detail + (f"; misses: {misses}" if misses else ""))
    assert not misses
    assert elapsed < 30


def test_criterion_02_multiple_patterns(report_line):
    refs = {("ra100_phy", 2): "0.557", ("ra100_phy", 3): "0.443",
            ("ra_phy", 2): "0.818", ("ra_phy", 3): "0.182"}
    misses = []
    for (name, r), ref in refs.items():
        inst = catalog.get(name)
        p = pattern_probability(inst.n1, inst.n2, inst.spec, r=r)
        if not matches(p, ref):
            misses.append(f"{name} r={r}: {to_decimal(p, 3)} vs {ref}")
    verdict(report_line, 2, not misses, "4 values" + (f"; misses: {misses}" if misses else ""))
    assert not misses


RA_REP1_PK = dict(zip(range(90, 113), [
    "1.873e-26", "8.866e-25", "3.878e-23", "1.565e-21", "5.811e-20", "1.982e-18",
    "6.189e-17", "1.765e-15", "4.577e-14", "1.076e-12", "2.279e-11", "4.329e-10",
    "7.325e-9", "1.095e-7", "1.432e-6", "1.619e-5", "0.000156", "0.00125",
    "0.00814", "0.0412", "0.153", "0.367", "0.429",
]))


def test_criterion_03_projection_size_table(report_line):
    spec = DomainSpec(12, 143)
    start = time.perf_counter()
    misses = []
    for k, ref in RA_REP1_PK.items():
        p = m1_probability(M1Case.E, SizeProfile(112, spec, 38, 74, k=k))
        if not matches(p, ref):
            misses.append(f"k={k}: {to_decimal(p)} vs {ref}")
    elapsed = time.perf_counter() - start
    ok = not misses and elapsed < 60
    verdict(report_line, 3, ok, f"23 values in {elapsed:.2f}s" + (f"; misses: {misses}" if misses else ""))
    assert not misses
    assert elapsed < 60


ROBUSTNESS = {
    "rch8": ("1 - 1.7e-7", "1 - 1e-8"),
    "ra_rep1": ("0", "0"),
    "ra_rep2": ("0", "0"),
    "ralsto": ("0.0209", "0.440"),
    "ra100_phv": ("1 - 1e-12", "1 - 5e-18"),
    "ra100_phy": ("1 - 7e-6", "1 - 3e-8"),
    "ra_phv": ("1 - 1e-12", "1 - 3e-19"),
    "ra_phy": ("1 - 3e-6", "1 - 9e-9"),
}


def test_criterion_04_robustness(report_line):
    misses = []
    for name, (ungrouped_ref, grouped_ref) in ROBUSTNESS.items():
        prof = catalog.get(name).profile()
        ungrouped = robustness_probability(prof, grouped=False)
        grouped = robustness_probability(prof, grouped=True)
        if not matches(ungrouped, ungrouped_ref):
            misses.append(f"{name} ungrouped {to_decimal(ungrouped, 3)} vs {ungrouped_ref}")
        if not matches(grouped, grouped_ref):
            misses.append(f"{name} grouped {to_decimal(grouped, 3)} vs {grouped_ref}")
    verdict(report_line, 4, not misses, "16 values" + (f"; misses: {misses}" if misses else ""))
    assert not misses


def test_criterion_05_ratio_scan(report_line):
    refs = ["1.025e-11", "1.27e-5", "2.06e-5", "2.15e-8"]
    rch8 = scan_attribute_count(5, 127, 37, y_range=(2, 5))
    misses = [
        f"|Y|={y}: {to_decimal(p)} vs {ref}"
        for (y, p), ref in zip(rch8.points, refs)
        if not matches(p, ref)
    ]
    if rch8.argmax != 4:
        misses.append(f"rch8 argmax {rch8.argmax}")
    rep1 = scan_attribute_count(38, 74, 155)
    if rep1.argmax != 3:
        misses.append(f"ra_rep1 argmax {rep1.argmax}")
    detail = f"rch8 argmax {rch8.argmax}, ra_rep1 argmax {rep1.argmax} over 155 splits"
    verdict(report_line, 5, not misses, detail + (f"; misses: {misses}" if misses else ""))
    assert not misses


M2_TABLE = {
    "rch8": ("1.05e-11", "0.000244", "0.0256", "0.795"),
    "ra_rep1": ("0.50", "0.350", "0.117", "0.999"),
    "ra_rep2": ("0.26", "0.36", "0.24", "0.991"),
    "ralsto": ("2.5e-13", "2.68e-11", "1.24e-9", "6.2e-7"),
    "ra100_phv": ("9.2e-23", "9.1e-13", "2.86e-6", "1"),
    "ra100_phy": ("6.2e-27", "6.67e-21", "6.53e-16", "3.93e-8"),
    "ra_phv": ("4.1e-24", "2.27e-13", "1.43e-6", "1"),
    "ra_phy": ("5.6e-28", "1.04e-21", "2.31e-16", "3.52e-8"),
}


def _m2_row(n1, n2, spec):
    row = [prob_intersection_eq(IntersectionQuery(n1, n2, spec, u=u)) for u in (0, 1, 2)]
    row.append(prob_intersection_at_most(IntersectionQuery(n1, n2, spec, t=min(4, spec.d_y))))
    return row


def test_criterion_06_intersection_table(report_line):
    misses, slowest, notes = [], 0.0, []
    for name, refs in M2_TABLE.items():
        inst = catalog.get(name)
        specs = [inst.spec]
        if name == "ralsto":
            specs.append(DomainSpec(inst.y_attrs, inst.z_attrs + 1))
        hits = []
        for spec in specs:
            start = time.perf_counter()
            row = _m2_row(inst.n1, inst.n2, spec)
            slowest = max(slowest, time.perf_counter() - start)
            bad = [f"{to_decimal(p, 3)} vs {ref}" for p, ref in zip(row, refs) if not matches(p, ref)]
            hits.append((spec, bad))
        good = [spec for spec, bad in hits if not bad]
        if not good:
            misses.append(f"{name}: {hits[0][1]}")
        elif name == "ralsto":
            notes.append("ralsto matches with |Z| in " + str([s.z_attrs for s in good]))
    ok = not misses and slowest < 10
    detail = f"32 values, slowest instance {slowest:.2f}s" + (f"; {'; '.join(notes)}" if notes else "")
    verdict(report_line, 6, ok, detail + (f"; misses: {misses}" if misses else ""))
    assert not misses
    assert slowest < 10


def _oracle_mismatches(spec: DomainSpec, n: int) -> list[str]:
    out = []
    m1 = enumerate_exhaustive(spec, n=n, model=Model.M1)
    m2 = enumerate_exhaustive(spec, n=n, model=Model.M2)
    tag = f"|Y|={spec.y_attrs},|Z|={spec.z_attrs},n={n}"
    if m1.total != rho_total(n, spec):
        out.append(f"rho_total {tag}")
    d_y = spec.d_y
    by_k = m1.marginal("k")
    for k in range(0, d_y + 1):
        if n >= 1 and by_k.get((k,), 0) != beta(k, n, spec):
            out.append(f"beta k={k} {tag}")
    by_k1k2 = m1.marginal("k1", "k2")
    for k1 in range(0, d_y + 1):
        for k2 in range(0, d_y - k1 + 1):
            if by_k1k2.get((k1, k2), 0) != lambda_coeff(k1, k2, n, spec):
                out.append(f"lambda {k1},{k2} {tag}")
    m1_n1 = m1.marginal("n1")
    m1_n1k = m1.marginal("n1", "k")
    m1_full = m1.marginal("n1", "k1", "k2")
    m2_n1 = m2.marginal("n1")
    m2_n1u = m2.marginal("n1", "u")
    for n1 in range(1, n):
        n2 = n - n1
        if m1_n1.get((n1,), 0) != rho_groups(n1, n2, spec):
            out.append(f"rho_groups {n1}+{n2} {tag}")
        if m2_n1.get((n1,), 0) != rho_groups_m2(n1, n2, spec):
            out.append(f"rho_groups_m2 {n1}+{n2} {tag}")
        for k in range(2, d_y + 1):
            if m1_n1k.get((n1, k), 0) != gamma_coeff(k, n1, n2, spec):
                out.append(f"gamma k={k} {n1}+{n2} {tag}")
        for k1 in range(1, d_y + 1):
            for k2 in range(1, d_y - k1 + 1):
                if m1_full.get((n1, k1, k2), 0) != delta_coeff(k1, k2, n1, n2, spec):
                    out.append(f"delta {k1},{k2} {n1}+{n2} {tag}")
        for u in range(0, min(n1, n2, d_y) + 1):
            if m2_n1u.get((n1, u), 0) != intersection_numerator(n1, n2, u, spec):
                out.append(f"intersection u={u} {n1}+{n2} {tag}")
    return out


def test_criterion_07_oracle_equivalence(report_line):
    misses, cases = [], 0
    for y in range(3):
        for z in range(3):
            spec = DomainSpec(y, z)
            for n in range(1, 7):
                misses.extend(_oracle_mismatches(spec, n))
                cases += 1
    verdict(report_line, 7, not misses, f"{cases} (|Y|,|Z|,n) cases" + (f"; misses: {misses[:5]}" if misses else ""))
    assert not misses


def _identity_failures() -> list[str]:
    out = []
    for y, z in [(0, 0), (1, 1), (2, 1), (1, 3), (3, 2), (2, 4), (4, 1)]:
        spec = DomainSpec(y, z)
        d_y = spec.d_y
        for n in range(1, 9):
            if sum(big_binomial(d_y, k) * alpha(k, n, spec) for k in range(d_y + 1)) != big_binomial(spec.d_x, n):
                out.append(f"alpha sum {y},{z},{n}")
            if sum(beta(k, n, spec) for k in range(d_y + 1)) != rho_total(n, spec):
                out.append(f"beta sum {y},{z},{n}")
            for k1 in range(1, d_y):
                for k2 in range(1, d_y - k1 + 1):
                    split = sum(delta_coeff(k1, k2, a, n - a, spec) for a in range(1, n))
                    if split != lambda_coeff(k1, k2, n, spec):
                        out.append(f"delta->lambda {y},{z},{n},{k1},{k2}")
            for n1 in range(1, n):
                n2 = n - n1
                rho = rho_groups(n1, n2, spec)
                if sum(gamma_coeff(k, n1, n2, spec) for k in range(2, d_y + 1)) != rho:
                    out.append(f"gamma sum {y},{z},{n1},{n2}")
                for k in range(2, d_y + 1):
                    parts = sum(delta_coeff(k1, k - k1, n1, n2, spec) for k1 in range(1, k))
                    if parts != gamma_coeff(k, n1, n2, spec):
                        out.append(f"delta->gamma {y},{z},{n1},{n2},{k}")
                if n <= spec.d_x:
                    probs = [
                        prob_intersection_eq(IntersectionQuery(n1, n2, spec, u=u))
                        for u in range(min(n1, n2, d_y) + 1)
                    ]
                    if sum(probs) != 1:
                        out.append(f"m2 sum {y},{z},{n1},{n2}")
                    if probs[0] * rho_groups_m2(n1, n2, spec) != rho:
                        out.append(f"m2 vs m1 {y},{z},{n1},{n2}")
    for d_y in range(1, 65):
        for v in range(0, d_y, max(1, d_y // 8)):
            for t in range(v, d_y, max(1, d_y // 8)):
                if bracket_sum(d_y, v, t) != bracket_closed_form(d_y, v, t):
                    out.append(f"bracket {d_y},{v},{t}")
    return out


def test_criterion_08_identities(report_line):
    failures = _identity_failures()
    verdict(report_line, 8, not failures, "exact identities" + (f"; failures: {failures[:5]}" if failures else ""))
    assert not failures


def test_criterion_09_running_example(report_line):
    inst = running_example()
    problems = []
    search = find_minimal_solutions(inst)
    names = [set(s) for s in search.names(inst)]
    if search.size != 2 or {"f", "g"} not in names:
        problems.append(f"solutions {names}")
    ab = resolve_subset(inst, ["a", "b"])
    target = [p for p in enumerate_patterns(inst, ab) if p.describe(inst) == "~a & b"]
    if not target or set(target[0].cover_ids(inst)) != {"1", "3"}:
        problems.append("~a & b cover")
    cover = min_pattern_cover(inst, resolve_subset(inst, ["f", "g"]))
    if cover.size != 2:
        problems.append(f"cover size {cover.size}")
    summary = project(inst, ["f", "g"])
    if (summary.k, summary.k1, summary.k2) != (4, 2, 2):
        problems.append(f"projection {summary}")
    verdict(report_line, 9, not problems, "solution {f,g}, ~a&b covers {1,3}, cover size 2, k=4 k1=k2=2"
            + (f"; problems: {problems}" if problems else ""))
    assert not problems


MC_PROFILES = [
    (Model.M2, DomainSpec(3, 4), 5, 20, 11),
    (Model.M2, DomainSpec(2, 5), 12, 9, 22),
    (Model.M2, DomainSpec(4, 3), 30, 40, 33),
    (Model.M1, DomainSpec(2, 3), 4, 6, 44),
    (Model.M1, DomainSpec(3, 2), 3, 5, 55),
]
MC_TRIALS = 40_000


def _analytic_marginals(model: Model, spec: DomainSpec, n1: int, n2: int) -> dict[str, dict[int, Fraction]]:
    d_y = spec.d_y
    rho = rho_groups(n1, n2, spec)
    if model is Model.M2:
        from ladprob.model_m1 import projection_size_probability

        return {
            "k1": {r: projection_size_probability(r, n1, spec) for r in range(1, min(n1, d_y) + 1)},
            "k2": {r: projection_size_probability(r, n2, spec) for r in range(1, min(n2, d_y) + 1)},
            "u": {u: prob_intersection_eq(IntersectionQuery(n1, n2, spec, u=u)) for u in range(min(n1, n2, d_y) + 1)},
        }
    return {
        "k1": {r: pattern_probability(n1, n2, spec, r) for r in range(1, min(n1, d_y - 1) + 1)},
        "k2": {r: pattern_probability(n2, n1, spec, r) for r in range(1, min(n2, d_y - 1) + 1)},
        "k": {k: Fraction(gamma_coeff(k, n1, n2, spec), rho) for k in range(2, d_y + 1)},
    }


def test_criterion_10_monte_carlo(report_line):
    tracked = within = 0
    worst = 0.0
    for model, spec, n1, n2, seed in MC_PROFILES:
        prof = SizeProfile.from_groups(n1, n2, spec)
        mc = monte_carlo_estimate(prof, model, MC_TRIALS, seed)
        for name, dist in _analytic_marginals(model, spec, n1, n2).items():
            for value, p in dist.items():
                p = float(p)
                freq = mc.estimate(name, value).frequency
                se = math.sqrt(p * (1 - p) / mc.trials)
                z = abs(freq - p) / se if se else (0.0 if freq == p else math.inf)
                worst = max(worst, z)
                tracked += 1
                within += z <= 4
    share = within / tracked
    verdict(report_line, 10, share >= 0.99,
            f"{within}/{tracked} statistics within 4 SE over 5 profiles, worst z={worst:.2f}")
    assert share >= 0.99


def test_criterion_11_asymptotics(report_line):
    problems = []
    rng = random.Random(2024)
    for _ in range(20):
        n1, n2 = rng.randint(1, 40), rng.randint(1, 40)
        for d in (2, 3, 4):
            if egf_rho_groups_closed(d, n1, n2) != egf_rho_groups(d, n1, n2):
                problems.append(f"closed form d={d} ({n1},{n2})")
    zs = [8, 16, 32, 64]
    worst_final = Fraction(0)
    for y_attrs in (0, 1, 2):
        for n in range(1, 11):
            gaps = [g for _, g in convergence_bridge(y_attrs, n, zs)]
            if any(b > a for a, b in zip(gaps, gaps[1:])):
                problems.append(f"non-monotone gap d={1 << y_attrs} n={n}")
            worst_final = max(worst_final, gaps[-1])
    if worst_final >= Fraction(1, 100):
        problems.append(f"gap at |Z|=64 is {float(worst_final):.3g}")
    verdict(report_line, 11, not problems,
            f"closed forms at 20 random splits; largest gap at |Z|=64 is {float(worst_final):.2e}"
            + (f"; problems: {problems}" if problems else ""))
    assert not problems
