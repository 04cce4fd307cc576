# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import functools
import json
from collections.abc import Callable
from dataclasses import asdict, dataclass
from enum import StrEnum, auto
from io import StringIO
from pathlib import Path
from sys import exit as sys_exit
from typing import Annotated, ParamSpec, TypeVar

from rich import print  # noqa: A004
from rich.markup import escape
from rich.table import Table
from typer import Argument, Context, Option, Typer, echo

from .algebra import standard_modules
from .ar import hom_through_proj
from .catalog import (
    ExampleResult,
    LoadedAlgebra,
    catalog_algebra,
    find_example,
    load_algebra_text,
    load_examples,
    run_example,
)
from .config import Caps, configure_logging
from .determine import gamma_module, is_right_determined, minimal_determiner
from .errors import AuskitError, CapExceededError, InputError, ParseError, VerificationError
from .factor import (
    Check,
    FactorizationLattice,
    describe_module,
    determiner_checks,
    enumerate_classes,
    epi_classes,
    image_recovery_checks,
    kernel_count_checks,
    length_one_checks,
    strata_checks,
)
from .kronecker import (
    KroneckerCatalog,
    enumerate_strongly_regular,
    kronecker_algebra,
    sigma_check,
    verify_table,
)
from .lattice import classify_shape, export_dot, export_json, strata_counts
from .rep import Rep

app = Typer(no_args_is_help=True)
kronecker_app = Typer(no_args_is_help=True, help="Kronecker algebra families and their table")
examples_app = Typer(no_args_is_help=True, help="The built-in example catalog")
app.add_typer(kronecker_app, name="kronecker")
app.add_typer(examples_app, name="examples")


class OutputFormat(StrEnum):
    text = auto()
    dot = auto()
    json = auto()


@dataclass
class State:
    caps: Caps
    algebra: str | None
    format: OutputFormat


def error(msg: str, e: Exception, hint: str | None = None) -> None:
    detail = escape(str(e.args[0]))
    print(f"[red b]{msg} [/red b]{f'[b]{hint}[/b] ' if hint else ''}[i bright_black]{detail}")


P = ParamSpec("P")
T = TypeVar("T")


def handle_errors(f: Callable[P, T]) -> Callable[P, T]:
    @functools.wraps(f)
    def wrapper(*args: P.args, **kwargs: P.kwargs) -> T:
        try:
            return f(*args, **kwargs)
        except ParseError as e:
            error("Could not parse the input!", e)
            sys_exit(e.exit_code)
        except CapExceededError as e:
            error("Enumeration cap exceeded!", e, "Raise it with --max-dim or AUSKIT_CAPS.")
            sys_exit(e.exit_code)
        except VerificationError as e:
            error("Verification failed!", e)
            if e.witness is not None:
                print(f"[bright_black]witness: {escape(repr(e.witness))}")
            sys_exit(e.exit_code)
        except AuskitError as e:
            error("Bad input!", e)
            sys_exit(e.exit_code)
        except OSError as e:
            error("Could not read the input!", e, str(e.filename) if e.filename else None)
            sys_exit(InputError.exit_code)

    return wrapper


def emit(buffer: StringIO, output: Path | None) -> None:
    if output is not None:
        output.write_text(buffer.getvalue(), "utf-8", newline="")
    else:
        echo(buffer.getvalue(), nl=False)


def state(ctx: Context) -> State:
    if not isinstance(ctx.obj, State):
        ctx.obj = State(Caps.from_env(), None, OutputFormat.text)
    return ctx.obj


def load_algebra(ctx: Context, override: str | None) -> LoadedAlgebra:
    """A file path, or the name of a file in the built-in catalog."""
    s = state(ctx)
    name = override or s.algebra
    if name is None:
        msg = "No algebra given"
        raise InputError(msg)
    path = Path(name)
    if path.is_file():
        return load_algebra_text(path.read_text("utf-8"), s.caps)
    return catalog_algebra(name)


def _names(loaded: LoadedAlgebra) -> dict[str, Rep]:
    return {**standard_modules(loaded.algebra), **loaded.names}


def check_table(checks: list[Check], title: str) -> Table:
    table = Table(title=title)
    for column in ("Check", "Subject", "Result", "Detail"):
        table.add_column(column)
    for c in checks:
        table.add_row(
            escape(c.name),
            escape(c.subject),
            "[green]pass" if c.passed else "[red]FAIL",
            escape(c.detail),
        )
    return table


AlgebraOption = Annotated[
    str | None,
    Option("--algebra", "-a", help="Algebra file, or the name of a built-in one"),
]
COption = Annotated[str, Option("--C", "-C", help="Module expression for C")]
YOption = Annotated[str, Option("--Y", "-Y", help="Module expression for Y")]
OutputOption = Annotated[Path | None, Option("--output", "-o", help="Output to a file")]


@app.callback()
def main(
    ctx: Context,
    algebra: AlgebraOption = None,
    seed: Annotated[int | None, Option("--seed", help="Seed for sampled checks")] = None,
    max_dim: Annotated[
        int | None, Option("--max-dim", help="Largest Hom dimension to enumerate")
    ] = None,
    max_ext_mult: Annotated[
        int | None, Option("--max-ext-mult", help="Largest Ext multiplicity of candidates")
    ] = None,
    output_format: Annotated[
        OutputFormat, Option("--format", "-f", help="Report format")
    ] = OutputFormat.text,
    verbose: Annotated[
        int, Option("--verbose", "-v", count=True, help="Log more; repeat for debug output")
    ] = 0,
) -> None:
    """Right factorization lattices of module maps over finite quiver algebras."""
    configure_logging(verbose)
    try:
        caps = Caps.from_env().with_overrides(
            seed=seed, max_dim=max_dim, max_ext_mult=max_ext_mult
        )
    except ParseError as e:
        error("Could not parse AUSKIT_CAPS!", e)
        sys_exit(e.exit_code)
    ctx.obj = State(caps, algebra, output_format)


@app.command("check-algebra")
@handle_errors
def command_check_algebra(
    ctx: Context, algebra: AlgebraOption = None, output: OutputOption = None
) -> None:
    """Parse an algebra, check it is finite dimensional and list its projectives."""
    loaded = load_algebra(ctx, algebra)
    a = loaded.algebra
    buffer = StringIO()
    if state(ctx).format is not OutputFormat.text:
        buffer.write(a.text())
        emit(buffer, output)
        return
    table = Table(title=f"Algebra over [b]F_{a.p}[/b] of dimension [b]{a.dim}")
    for column in ("Vertex", "dim P", "dim Q", "P dimension vector"):
        table.add_column(column)
    modules = standard_modules(a)
    for x in a.vertices:
        px, qx = modules[f"P({x})"], modules[f"Q({x})"]
        table.add_row(x, str(px.dim), str(qx.dim), str(px.dims))
    print(table, file=buffer)
    if loaded.names:
        names = Table(title="Named modules")
        names.add_column("Name")
        names.add_column("Dimension vector")
        for name, rep in loaded.names.items():
            names.add_row(name, str(rep.dims))
        print(names, file=buffer)
    emit(buffer, output)


@app.command("hom")
@handle_errors
def command_hom(
    ctx: Context, c: COption, y: YOption, algebra: AlgebraOption = None, output: OutputOption = None
) -> None:
    """Hom(C, Y) as a module over End(C)."""
    loaded = load_algebra(ctx, algebra)
    cm, ym = loaded.expressions.module(c), loaded.expressions.module(y)
    gm = gamma_module(cm, ym, _names(loaded))
    through = gm.length(hom_through_proj(cm, ym))
    buffer = StringIO()
    if state(ctx).format is OutputFormat.json:
        data = {
            "hom_dim": gm.dim,
            "gamma_dim": gm.end.dim,
            "length": gm.length(),
            "composition": dict(zip(gm.label_names(), gm.total, strict=True)),
            "through_projective_length": through,
        }
        buffer.write(json.dumps(data, indent=2) + "\n")
        emit(buffer, output)
        return
    print(f"dim Hom(C, Y) = [b]{gm.dim}[/b], dim End(C) = [b]{gm.end.dim}", file=buffer)
    print(
        f"End(C)-length [b]{gm.length()}[/b], through projectives [b]{through}", file=buffer
    )
    table = Table(title="Composition factors")
    table.add_column("Simple")
    table.add_column("Multiplicity")
    for label, n in zip(gm.label_names(), gm.total, strict=True):
        if n:
            table.add_row(label, str(n))
    print(table, file=buffer)
    emit(buffer, output)


def _classes(ctx: Context, algebra: str | None, c: str, y: str) -> FactorizationLattice:
    loaded = load_algebra(ctx, algebra)
    cm, ym = loaded.expressions.module(c), loaded.expressions.module(y)
    return enumerate_classes(cm, ym, state(ctx).caps, _names(loaded))


@app.command("lattice")
@handle_errors
def command_lattice(
    ctx: Context,
    c: COption,
    y: YOption,
    algebra: AlgebraOption = None,
    dot: Annotated[Path | None, Option("--dot", help="Write the Hasse diagram as DOT")] = None,
    json_file: Annotated[Path | None, Option("--json", help="Write the lattice as JSON")] = None,
    output: OutputOption = None,
) -> None:
    """Enumerate the right equivalence classes of C-determined maps into Y."""
    fl = _classes(ctx, algebra, c, y)
    lattice = fl.lattice
    if dot is not None:
        dot.write_text(export_dot(lattice, fl.labeler), "utf-8", newline="")
    if json_file is not None:
        json_file.write_text(export_json(lattice, fl.flags()), "utf-8", newline="")
    buffer = StringIO()
    match state(ctx).format:
        case OutputFormat.dot:
            buffer.write(export_dot(lattice, fl.labeler))
        case OutputFormat.json:
            buffer.write(export_json(lattice, fl.flags()) + "\n")
        case OutputFormat.text:
            shape = classify_shape(lattice)
            print(
                f"[b]{len(lattice)}[/b] classes, height [b]{lattice.height}[/b], "
                f"shape [b]{shape}",
                file=buffer,
            )
            table = Table(title="Classes")
            for column in ("Node", "Source", "C-length", "Epi", "Mono"):
                table.add_column(column)
            for k in sorted(fl.classes, key=lambda k: lattice.nodes[k.node].height):
                table.add_row(
                    str(k.node),
                    escape(k.source_description),
                    str(k.c_length),
                    "[green]yes" if k.is_epi else "[red]no",
                    "[green]yes" if k.is_mono else "[red]no",
                )
            print(table, file=buffer)
            strata = Table(title="Strata")
            strata.add_column("Quotient dimension vector")
            strata.add_column("Classes")
            for dims, n in sorted(strata_counts(lattice).items()):
                strata.add_row(str(dims), str(n))
            print(strata, file=buffer)
    emit(buffer, output)


@app.command("verify")
@handle_errors
def command_verify(
    ctx: Context,
    c: COption,
    y: YOption,
    algebra: AlgebraOption = None,
    probe_definitional: Annotated[
        bool,
        Option("--probe-definitional", help="Also test determination against random probes"),
    ] = False,
    output: OutputOption = None,
) -> None:
    """Run every certificate on the classes of C-determined maps into Y."""
    caps = state(ctx).caps
    fl = _classes(ctx, algebra, c, y)
    epis = epi_classes(fl)
    checks = [
        *fl.report.checks,
        Check("epi classes", "coideal closed under meets", True, f"{len(epis)} classes"),
        *length_one_checks(fl),
        *kernel_count_checks(fl),
        *image_recovery_checks(fl, caps),
        *strata_checks(fl),
        *determiner_checks(fl, caps, probe_definitional),
    ]
    buffer = StringIO()
    if state(ctx).format is OutputFormat.json:
        buffer.write(json.dumps([asdict(check) for check in checks], indent=2) + "\n")
    else:
        print(check_table(checks, f"Certificates for {len(fl)} classes"), file=buffer)
    emit(buffer, output)
    failed = [check for check in checks if not check.passed]
    if failed:
        msg = f"{len(failed)} of {len(checks)} checks failed"
        raise VerificationError(msg, failed[0])


@app.command("determiner")
@handle_errors
def command_determiner(
    ctx: Context,
    f: Annotated[str, Option("--f", help="Morphism expression")],
    c: Annotated[
        str | None, Option("--C", "-C", help="Module expression to test determination by")
    ] = None,
    algebra: AlgebraOption = None,
) -> None:
    """The minimal right determiner C(f) of a map, with where each summand comes from."""
    loaded = load_algebra(ctx, algebra)
    morphism = loaded.expressions.morphism(f)
    names = _names(loaded)
    table = Table(title="Minimal right determiner")
    table.add_column("Summand")
    table.add_column("Provenance")
    determiner = minimal_determiner(morphism)
    for s in determiner.summands:
        table.add_row(escape(describe_module(s.rep, names)), str(s.provenance))
    print(table)
    if not determiner.summands:
        print("[i]C(f) is zero")
    if c is not None:
        determined = is_right_determined(morphism, loaded.expressions.module(c))
        print(f"Right determined by C: {'[green]yes' if determined else '[red]no'}")


def _kronecker(ctx: Context, algebra: str | None, p: int) -> KroneckerCatalog:
    if algebra or state(ctx).algebra:
        return KroneckerCatalog(load_algebra(ctx, algebra).algebra)
    return KroneckerCatalog(kronecker_algebra(p))


PrimeOption = Annotated[int, Option("--p", help="Field size when no algebra is given")]


@kronecker_app.command("table")
@handle_errors
def command_kronecker_table(
    ctx: Context,
    max_index: Annotated[int, Option("--max", help="Largest index and regular length")] = 2,
    p: PrimeOption = 2,
    algebra: AlgebraOption = None,
    output: OutputOption = None,
) -> None:
    """Check the shapes of Hom(C, Y) for all pairs of Kronecker families."""
    catalog = _kronecker(ctx, algebra, p)
    rows = verify_table(catalog, max_index, state(ctx).caps)
    table = Table(title=f"Kronecker table over F_{catalog.p}")
    for column in ("Row", "C", "Y", "dim Hom", "Shape", "Expected", "Result"):
        table.add_column(column)
    for r in rows:
        table.add_row(
            str(r.row),
            escape(r.c),
            escape(r.y),
            f"{r.hom_dim}/{r.expected_hom_dim}",
            str(r.shape),
            str(r.expected),
            "[green]pass" if r.passed else "[red]FAIL",
        )
    buffer = StringIO()
    print(table, file=buffer)
    emit(buffer, output)
    failed = [r for r in rows if not r.passed]
    if failed:
        msg = f"{len(failed)} of {len(rows)} table entries disagree"
        raise VerificationError(msg, failed[0])


@kronecker_app.command("sigma")
@handle_errors
def command_kronecker_sigma(
    ctx: Context,
    i: Annotated[int, Option("--i", help="Index of the preprojective C")],
    j: Annotated[int, Option("--j", help="Index of the preinjective Y")],
    p: PrimeOption = 2,
    algebra: AlgebraOption = None,
) -> None:
    """Match the length-one classes P_i -> Q_j with strongly regular modules."""
    catalog = _kronecker(ctx, algebra, p)
    report = sigma_check(
        catalog, catalog.pre_projective(i), catalog.pre_injective(j), state(ctx).caps
    )
    table = Table(title=f"Strongly regular modules of length {report.length}")
    table.add_column("Module")
    for part in report.expected:
        table.add_row(escape(str(part)))
    print(table)
    verdict = "[green]yes" if report.bijective else "[red]no"
    print(f"{len(report.sources)} sources, bijective: {verdict}")
    if not report.bijective:
        msg = f"sigma is not a bijection for P_{i} -> Q_{j}"
        raise VerificationError(msg, report.sources)


@kronecker_app.command("strongreg")
@handle_errors
def command_kronecker_strongreg(
    ctx: Context,
    length: Annotated[int, Option("--len", help="Dimension of the modules")],
    p: PrimeOption = 2,
    algebra: AlgebraOption = None,
) -> None:
    """List the strongly regular modules of a given dimension."""
    catalog = _kronecker(ctx, algebra, p)
    found = enumerate_strongly_regular(catalog, length)
    table = Table(title=f"Strongly regular modules of length {length} over F_{catalog.p}")
    table.add_column("Module")
    table.add_column("Dimension vector")
    for part in found:
        table.add_row(escape(str(part)), str(part.rep.dims))
    print(table)


def _example_table(results: list[ExampleResult]) -> Table:
    table = Table(title="Examples")
    for column in ("Example", "Fact", "Observed", "Expected", "Provenance", "Result"):
        table.add_column(column)
    for result in results:
        for f in result.facts:
            table.add_row(
                result.spec.name,
                f.key,
                escape(str(f.observed)),
                escape(str(f.expected.value)),
                str(f.expected.provenance),
                "[green]pass" if f.passed else "[red]FAIL",
            )
        if result.classes is not None:
            ok = result.classes.report.passed
            table.add_row(
                result.spec.name,
                "certificates",
                f"{len(result.classes)} classes",
                "",
                "",
                "[green]pass" if ok else "[red]FAIL",
            )
    return table


@examples_app.command("list")
def command_examples_list() -> None:
    table = Table(title="Built-in examples")
    for column in ("Name", "Algebra", "C", "Y", "Description"):
        table.add_column(column)
    for spec in load_examples():
        cells = (spec.name, spec.algebra, spec.c, spec.y, spec.description)
        table.add_row(*(escape(v) for v in cells))
    print(table)


@examples_app.command("run")
@handle_errors
def command_examples_run(
    ctx: Context,
    names: Annotated[
        list[str] | None, Argument(help="Examples to run; all of them when omitted")
    ] = None,
    output: OutputOption = None,
) -> None:
    """Run examples and compare them with their expected facts."""
    caps = state(ctx).caps
    specs = [find_example(n) for n in names] if names else list(load_examples())
    results = [run_example(spec, caps) for spec in specs]
    buffer = StringIO()
    print(_example_table(results), file=buffer)
    emit(buffer, output)
    failed = [r.spec.name for r in results if not r.passed]
    if failed:
        msg = f"Facts disagree for {', '.join(failed)}"
        raise VerificationError(msg)
