"""Command-line entry point.

Exit status is 0 on success, 1 for usage errors and 2 when a computation
fails (impossible condition, cap exceeded, unsatisfiable instance, ...).
Failures print a single ``error <CODE>: <message>`` line on stderr.
"""

from __future__ import annotations

import sys

import click

from . import kernels
from .asymptotics import egf_rho, egf_rho_groups, egf_rho_groups_closed
from .catalog import REFERENCE
from .errors import LadProbError
from .exactmath import DomainSpec, alpha, big_binomial
from .instances import (
    enumerate_patterns,
    find_minimal_solutions,
    load_instance,
    min_pattern_cover,
    project_instance,
    resolve_subset,
    write_instance,
)
from .model_m1 import (
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
from .model_m2 import IntersectionQuery, coefficient_A, prob_intersection_at_most, prob_intersection_eq
from .oracle import Model, enumerate_exhaustive, monte_carlo_estimate
from .report import (
    AnalysisReport,
    Curve,
    analyze_instance,
    describe_profile,
    profile_entries,
    render_report,
)

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2


def _opts(ctx: click.Context) -> tuple[str, int]:
    obj = ctx.find_root().obj or {}
    return obj.get("format", "text"), obj.get("digits", 4)


def _emit(ctx: click.Context, report: AnalysisReport) -> None:
    fmt, digits = _opts(ctx)
    click.echo(render_report(report, fmt, digits), nl=False)


def _emit_int(ctx: click.Context, name: str, value: int) -> None:
    fmt, _ = _opts(ctx)
    if fmt == "json":
        click.echo(f'{{"{name}": "{value}"}}')
    elif fmt == "csv":
        click.echo(f"name,value\n{name},{value}")
    else:
        click.echo(value)


def _spec(y: int, z: int) -> DomainSpec:
    if y < 0 or z < 0:
        raise click.BadParameter("attribute counts must be >= 0")
    return DomainSpec(y, z)


def _cond(n1, n2, spec):
    return f"n1={n1}, n2={n2}, |Y|={spec.y_attrs}, |Z|={spec.z_attrs}"


y_opt = click.option("--y", "y", type=int, required=True, help="Number of attributes in Y.")
z_opt = click.option("--z", "z", type=int, required=True, help="Number of attributes in Z.")
n1_opt = click.option("--n1", type=int, required=True, help="Size of group 1.")
n2_opt = click.option("--n2", type=int, required=True, help="Size of group 2.")


@click.group()
@click.option("--format", "fmt", type=click.Choice(["text", "json", "csv"]), default="text")
@click.option("--digits", type=click.IntRange(1, 50), default=4, help="Significant digits shown.")
@click.pass_context
def cli(ctx, fmt, digits):
    """Exact probabilities of structural events in two-group Boolean instances."""
    ctx.obj = {"format": fmt, "digits": digits}


# -- coeff -------------------------------------------------------------------


@cli.group()
def coeff():
    """Raw instance counts (exact integers)."""


@coeff.command("binom")
@click.option("--m", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.pass_context
def coeff_binom(ctx, m, n):
    _emit_int(ctx, "binom", big_binomial(m, n))


@coeff.command("alpha")
@click.option("--k", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.option("--z", "z", type=int, required=True)
@click.pass_context
def coeff_alpha(ctx, k, n, z):
    """Ways n observations realise k fixed y-values."""
    _emit_int(ctx, "alpha", alpha(k, n, _spec(0, z)))


@coeff.command("rho")
@click.option("--n", type=int, default=None)
@click.option("--n1", type=int, default=None)
@click.option("--n2", type=int, default=None)
@y_opt
@z_opt
@click.pass_context
def coeff_rho(ctx, n, n1, n2, y, z):
    """Total count (give --n) or count with known group sizes (--n1, --n2)."""
    spec = _spec(y, z)
    if n is not None:
        _emit_int(ctx, "rho", rho_total(n, spec))
    elif n1 is not None and n2 is not None:
        _emit_int(ctx, "rho", rho_groups(n1, n2, spec))
    else:
        raise click.UsageError("give --n, or both --n1 and --n2")


@coeff.command("beta")
@click.option("--k", type=int, required=True)
@click.option("--n", type=int, required=True)
@y_opt
@z_opt
@click.pass_context
def coeff_beta(ctx, k, n, y, z):
    _emit_int(ctx, "beta", beta(k, n, _spec(y, z)))


@coeff.command("lambda")
@click.option("--k1", type=int, required=True)
@click.option("--k2", type=int, required=True)
@click.option("--n", type=int, required=True)
@y_opt
@z_opt
@click.pass_context
def coeff_lambda(ctx, k1, k2, n, y, z):
    _emit_int(ctx, "lambda", lambda_coeff(k1, k2, n, _spec(y, z)))


@coeff.command("gamma")
@click.option("--k", type=int, required=True)
@n1_opt
@n2_opt
@y_opt
@z_opt
@click.pass_context
def coeff_gamma(ctx, k, n1, n2, y, z):
    _emit_int(ctx, "gamma", gamma_coeff(k, n1, n2, _spec(y, z)))


@coeff.command("delta")
@click.option("--k1", type=int, required=True)
@click.option("--k2", type=int, required=True)
@n1_opt
@n2_opt
@y_opt
@z_opt
@click.pass_context
def coeff_delta(ctx, k1, k2, n1, n2, y, z):
    _emit_int(ctx, "delta", delta_coeff(k1, k2, n1, n2, _spec(y, z)))


@coeff.command("A")
@click.option("--v", type=int, required=True)
@n1_opt
@n2_opt
@y_opt
@z_opt
@click.pass_context
def coeff_a(ctx, v, n1, n2, y, z):
    """Auxiliary count behind the intersection-size probabilities."""
    _emit_int(ctx, "A", coefficient_A(n1, n2, v, _spec(y, z)))


# -- m1 ----------------------------------------------------------------------

_CASE_TAGS = {"B": "bound", "C": "reduction", "D": "structure", "E": "reduction", "F": "structure"}


@cli.group()
def m1():
    """Probabilities when group projections are disjoint."""


@m1.command("prob")
@click.option("--case", type=click.Choice([c.value for c in M1Case]), required=True)
@click.option("--n", type=int, default=None)
@click.option("--n1", type=int, default=None)
@click.option("--n2", type=int, default=None)
@click.option("--k", type=int, default=None)
@click.option("--k1", type=int, default=None)
@click.option("--k2", type=int, default=None)
@y_opt
@z_opt
@click.pass_context
def m1_prob(ctx, case, n, n1, n2, k, k1, k2, y, z):
    """Conditional probability for one of the cases A-F."""
    if n is None:
        if n1 is None or n2 is None:
            raise click.UsageError("give --n or both --n1 and --n2")
        n = n1 + n2
    profile = SizeProfile(n, _spec(y, z), n1, n2, k, k1, k2)
    p = m1_probability(case, profile)
    report = AnalysisReport("m1")
    report.add(_CASE_TAGS.get(case, "reduction"), f"case {case}", describe_profile(profile), p)
    _emit(ctx, report)


@m1.command("pattern-prob")
@n1_opt
@n2_opt
@y_opt
@z_opt
@click.option("--r", type=int, default=1, show_default=True, help="Size of the group-1 projection.")
@click.pass_context
def m1_pattern(ctx, n1, n2, y, z, r):
    """Probability that group 1 projects onto exactly r values."""
    spec = _spec(y, z)
    report = AnalysisReport("m1")
    report.add("covering", f"Pr(k1={r} / n1,n2)", _cond(n1, n2, spec), pattern_probability(n1, n2, spec, r))
    _emit(ctx, report)


@m1.command("robust")
@click.option("--n", type=int, default=None)
@click.option("--n1", type=int, default=None)
@click.option("--n2", type=int, default=None)
@y_opt
@z_opt
@click.option("--grouped/--ungrouped", default=False)
@click.pass_context
def m1_robust(ctx, n, n1, n2, y, z, grouped):
    """Probability that every y-value occurs."""
    spec = _spec(y, z)
    if n is None:
        if n1 is None or n2 is None:
            raise click.UsageError("give --n or both --n1 and --n2")
        n = n1 + n2
    profile = SizeProfile(n, spec, n1, n2)
    p = robustness_probability(profile, grouped=grouped)
    cond = _cond(n1, n2, spec) if grouped else f"n={n}, |Y|={y}, |Z|={z}"
    report = AnalysisReport("m1")
    report.add("reliability", f"Pr(k={spec.d_y} / {'n1,n2' if grouped else 'n'})", cond, p)
    _emit(ctx, report)


@m1.command("report")
@click.argument("name", required=False)
@click.option("--n1", type=int, default=None)
@click.option("--n2", type=int, default=None)
@click.option("--y", "y", type=int, default=None)
@click.option("--z", "z", type=int, default=None)
@click.option("--k", type=int, default=None)
@click.option("--k1", type=int, default=None)
@click.pass_context
def m1_report(ctx, name, n1, n2, y, z, k, k1):
    """Every question for a profile, or for a named reference instance."""
    if name is not None:
        if name not in REFERENCE:
            raise click.BadParameter(f"unknown instance; known: {', '.join(REFERENCE)}")
        profile = REFERENCE[name].profile()
    else:
        if None in (n1, n2, y, z):
            raise click.UsageError("give NAME or all of --n1 --n2 --y --z")
        k2 = k - k1 if k is not None and k1 is not None else None
        profile = SizeProfile(n1 + n2, _spec(y, z), n1, n2, k, k1, k2)
    _emit(ctx, profile_entries(AnalysisReport(name or "profile"), profile))


# -- m2 ----------------------------------------------------------------------


@cli.group()
def m2():
    """Probabilities when group projections may intersect."""


@m2.command("inter")
@n1_opt
@n2_opt
@y_opt
@z_opt
@click.option("--eq", "u", type=int, default=None, help="Exact intersection size.")
@click.option("--le", "t", type=int, default=None, help="Upper bound on the intersection size.")
@click.pass_context
def m2_inter(ctx, n1, n2, y, z, u, t):
    """Probability of a given (or bounded) intersection size."""
    if (u is None) == (t is None):
        raise click.UsageError("give exactly one of --eq and --le")
    spec = _spec(y, z)
    q = IntersectionQuery(n1, n2, spec, u=u, t=t)
    report = AnalysisReport("m2")
    if u is not None:
        report.add("intersection", f"Pr(r={u} / n1,n2)", _cond(n1, n2, spec), prob_intersection_eq(q))
    else:
        report.add("intersection", f"Pr(r<={t} / n1,n2)", _cond(n1, n2, spec), prob_intersection_at_most(q))
    _emit(ctx, report)


# -- scan --------------------------------------------------------------------


@cli.command()
@n1_opt
@n2_opt
@click.option("--total", type=int, required=True, help="Total number of attributes.")
@click.option("--from", "lo", type=int, default=1, show_default=True)
@click.option("--to", "hi", type=int, default=None, help="Largest |Y| (default: --total).")
@click.pass_context
def scan(ctx, n1, n2, total, lo, hi):
    """Ratio rho(n1, n2) / rho(n) for each split of the attributes."""
    result = scan_attribute_count(n1, n2, total, (lo, total if hi is None else hi))
    report = AnalysisReport("scan")
    report.curves.append(Curve("rho(n1,n2)/rho(n) vs |Y|", "bound", f"n1={n1}, n2={n2}, |X|={total}", result.points))
    report.facts["argmax"] = result.argmax
    report.facts["unimodal"] = result.unimodal
    if not result.unimodal:
        report.warnings.append("the ratio curve is not unimodal")
    _emit(ctx, report)


# -- instance ----------------------------------------------------------------


def _subset_arg(value):
    return None if value is None else [s.strip() for s in value.split(",") if s.strip()]


positive_opt = click.option(
    "--positive-group", default=None, help="Label used as group 1; all others form group 2."
)


@cli.group()
def instance():
    """Work with instance files (CSV or TSV with a 'group' column)."""


@instance.command("analyze")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--attrs", default=None, help="Comma-separated candidate attributes.")
@click.option("--max-levels", type=int, default=None, help="Largest solution size searched.")
@click.option("--max-nodes", type=int, default=None, help="Search node budget.")
@positive_opt
@click.pass_context
def instance_analyze(ctx, path, attrs, max_levels, max_nodes, positive_group):
    """Profile the instance and report every question."""
    report = analyze_instance(
        path,
        _subset_arg(attrs),
        max_levels=max_levels,
        max_nodes=max_nodes,
        positive_group=positive_group,
    )
    _emit(ctx, report)


@instance.command("solve")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-levels", type=int, default=None)
@click.option("--max-nodes", type=int, default=None)
@positive_opt
def instance_solve(path, max_levels, max_nodes, positive_group):
    """List all minimum attribute subsets that separate the groups."""
    inst = load_instance(path, positive_group=positive_group)
    res = find_minimal_solutions(inst, max_levels=max_levels, max_nodes=max_nodes)
    click.echo(f"# size={res.size} optimal={res.optimal} solutions={len(res.solutions)}")
    for names in res.names(inst):
        click.echo(",".join(names))


@instance.command("patterns")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--attrs", required=True, help="Comma-separated attributes.")
@click.option("--prime", is_flag=True, help="Only prime patterns.")
@click.option("--cover", is_flag=True, help="Print a minimum cover instead of all patterns.")
@positive_opt
def instance_patterns(path, attrs, prime, cover, positive_group):
    """Patterns over the given attributes, with the observations they cover."""
    inst = load_instance(path, positive_group=positive_group)
    subset = resolve_subset(inst, _subset_arg(attrs))
    if cover:
        res = min_pattern_cover(inst, subset)
        click.echo(f"# size={res.size} exact={res.exact} complete={res.complete}")
        patterns = res.patterns
        for i in res.uncoverable:
            click.echo(f"# uncoverable: {inst.ids[i]}")
    else:
        patterns = enumerate_patterns(inst, subset, prime_only=prime)
    for p in patterns:
        click.echo(f"{p.describe(inst)}\t{','.join(p.cover_ids(inst))}")


@instance.command("project")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--attrs", required=True, help="Comma-separated attributes to keep.")
@positive_opt
def instance_project(path, attrs, positive_group):
    """Write the instance restricted to some attributes, in the input format."""
    inst = load_instance(path, positive_group=positive_group)
    write_instance(project_instance(inst, _subset_arg(attrs)), sys.stdout)


# -- oracle ------------------------------------------------------------------


@cli.group()
def oracle():
    """Brute-force counterparts of the closed forms."""


@oracle.command("exhaustive")
@y_opt
@z_opt
@click.option("--n", type=int, default=None)
@click.option("--n1", type=int, default=None)
@click.option("--n2", type=int, default=None)
@click.option("--model", type=click.Choice(["M1", "M2"]), default="M1")
@click.option("--stat", default=None, help="Comma-separated statistics to tally (k, k1, k2, n1, u).")
def oracle_exhaustive(y, z, n, n1, n2, model, stat):
    """Enumerate every instance of a tiny domain."""
    tally = enumerate_exhaustive(_spec(y, z), n=n, n1=n1, n2=n2, model=model)
    names = tuple(stat.split(",")) if stat else tally.fields
    click.echo(f"# model={model} total={tally.total} backend={kernels.BACKEND}")
    click.echo(",".join(names) + ",count")
    for key, count in sorted(tally.marginal(*names).items()):
        click.echo(",".join(map(str, key)) + f",{count}")


@oracle.command("mc")
@n1_opt
@n2_opt
@y_opt
@z_opt
@click.option("--model", type=click.Choice(["M1", "M2"]), default="M2")
@click.option("--trials", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--stat", type=click.Choice(["k", "k1", "k2", "u"]), default="u")
def oracle_mc(n1, n2, y, z, model, trials, seed, stat):
    """Monte Carlo frequencies with binomial standard errors."""
    profile = SizeProfile(n1 + n2, _spec(y, z), n1, n2)
    res = monte_carlo_estimate(profile, Model(model), trials, seed)
    click.echo(
        f"# model={model} trials={res.trials} attempts={res.attempts} seed={seed} "
        f"prng={res.prng} backend={res.backend}"
    )
    click.echo(f"{stat},count,frequency,std_error")
    for value in sorted(res.marginal(stat)):
        e = res.estimate(stat, value)
        click.echo(f"{value},{e.count},{e.frequency:.6g},{e.std_error:.3g}")


# -- asympt ------------------------------------------------------------------


@cli.group()
def asympt():
    """Exponential-generating-function approximations for small d."""


@asympt.command("egf")
@click.option("--d", type=int, required=True)
@click.option("--n", type=int, required=True)
def asympt_egf(d, n):
    r = egf_rho(d, n)
    click.echo(f"exact={r.exact_egf_value} leading={r.leading_term} gap={float(r.relative_gap):.6g}")


@asympt.command("groups")
@click.option("--d", type=int, required=True)
@n1_opt
@n2_opt
@click.option("--closed", is_flag=True, help="Use the closed form (d = 2, 3, 4 only).")
def asympt_groups(d, n1, n2, closed):
    value = egf_rho_groups_closed(d, n1, n2) if closed else egf_rho_groups(d, n1, n2)
    click.echo(value)


# ---------------------------------------------------------------------------


def run_cli(argv: list[str] | None = None) -> int:
    """Run the CLI and return the exit status instead of exiting."""
    try:
        cli.main(args=argv, prog_name="ladprob", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("error E_ABORT: aborted", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        click.echo(f"error E_USAGE: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except LadProbError as exc:
        click.echo(f"error {exc.code}: {exc}", err=True)
        return EXIT_USAGE if exc.bad_input else EXIT_COMPUTE
    except (ValueError, KeyError) as exc:
        click.echo(f"error E_USAGE: {exc}", err=True)
        return EXIT_USAGE
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
