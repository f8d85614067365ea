#!/usr/bin/env python3
"""
Gram Matrix Square Root CLI

Command-line interface for assembling Gram matrices, computing their square
roots and inverse square roots, running convergence studies, printing
expansion coefficients and normalizing operators.
"""

import logging
import sys
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import click
import numpy as np
import pandas as pd
import scipy.sparse as sp
from scipy.linalg import svdvals

from src.analytics import ConvergenceStudy
from src.expansions import (
    ExpansionSpec,
    Kind,
    Method,
    Mode,
    cpe_coefficients,
    cpe_tabulated,
    matfun,
    normalize_operator,
    pae_coefficients,
    resolve_order,
    tse_coefficients,
)
from src.mesh import (
    assemble_pyramid_gram,
    assemble_rwg_gram,
    barycentric_refine,
    galerkin_transform,
    load_combination,
    load_mesh,
)
from src.sparse import estimate_condition
from src.utils.config import DEFAULT_SEED, DEFAULT_TOL_NORM, RunConfig
from src.utils.exceptions import GramSqrtError
from src.utils.io import atomic_output, read_matrix, read_sparse_sym, write_csv, write_dense, write_sparse_sym

logger = logging.getLogger(__name__)

METHODS = [m.value for m in Method]
KINDS = [k.value for k in Kind]
MODES = [m.value for m in Mode]

# Exit status for file system failures; library errors carry their own.
EXIT_IO_ERROR = 7
EXIT_INVALID_INPUT = 2


@contextmanager
def _reporting_errors(action: str):
    """Turn library failures into a ❌ line and the documented exit code."""
    try:
        yield
    except GramSqrtError as exc:
        click.echo(f"❌ Error {action}: {exc}", err=True)
        sys.exit(exc.exit_code)
    except OSError as exc:
        click.echo(f"❌ Error {action}: {exc}", err=True)
        sys.exit(EXIT_IO_ERROR)
    except ValueError as exc:
        click.echo(f"❌ Error {action}: {exc}", err=True)
        sys.exit(EXIT_INVALID_INPUT)


def _validated(config: RunConfig) -> RunConfig:
    try:
        return config.validate()
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


def _split(values: str, choices) -> tuple:
    items = tuple(item.strip().lower() for item in values.split(",") if item.strip())
    unknown = [item for item in items if item not in choices]
    if unknown:
        raise click.BadParameter(f"unknown value(s) {', '.join(unknown)}; choose from {', '.join(choices)}")
    return items


def numerics_options(command):
    """--tol-norm and --seed, shared by every command that estimates norms."""
    command = click.option(
        "--seed", default=DEFAULT_SEED, show_default=True, help="Seed of the power-method start vectors"
    )(command)
    command = click.option(
        "--tol-norm", default=DEFAULT_TOL_NORM, show_default=True, help="Power-method relative tolerance"
    )(command)
    return command


def expansion_options(command):
    """Options selecting one expansion."""
    for option in reversed(
        [
            click.option("--method", "-m", type=click.Choice(METHODS), required=True, help="Expansion method"),
            click.option("--order", "-n", type=int, help="Expansion order"),
            click.option("--delta", type=float, help="Target relative error (Chebyshev methods choose the order)"),
            click.option("--n0", type=float, help="Fixed CPE1 interval [n0, 1] (computed when omitted)"),
            click.option("--n0-class", type=float, help="Tabulated n0 class for CPE2"),
            click.option("--strict-n0", is_flag=True, help="CPE2: check the scaled spectrum against the class"),
            click.option("--mode", type=click.Choice(MODES), default="dense", show_default=True),
        ]
    ):
        command = option(command)
    return command


@click.group()
@click.option("--verbose", "-v", count=True, help="Log progress (-v) or iteration detail (-vv)")
def main(verbose):
    """Square roots of sparse SPD Gram matrices by series expansions"""
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s: %(message)s")


@main.command()
@click.argument("mesh_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--basis", "-b", type=click.Choice(["rwg", "pyramid"]), required=True, help="Basis functions")
@click.option("--refine", is_flag=True, help="Assemble on the barycentric refinement")
@click.option("--combination", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Matrix Market combination matrix R; writes R^T G R")
@click.option("--report-condition", is_flag=True, help="Estimate and print the condition number")
@click.option("--output", "-o", type=click.Path(dir_okay=False, path_type=Path), required=True)
@numerics_options
def gram(mesh_path, basis, refine, combination, report_condition, output, tol_norm, seed):
    """Assemble the Gram matrix of a mesh"""
    _validated(RunConfig(subcommand="gram", inputs=(mesh_path,), output=output, tol_norm=tol_norm, seed=seed))
    click.echo(f"🚀 Assembling {basis} Gram matrix of {mesh_path}...")

    with _reporting_errors("assembling Gram matrix"):
        mesh = load_mesh(mesh_path)
        if refine:
            mesh = barycentric_refine(mesh)
        G = assemble_rwg_gram(mesh) if basis == "rwg" else assemble_pyramid_gram(mesh)
        if combination is not None:
            G = galerkin_transform(G, load_combination(combination))

        click.echo(f"\n📊 Mesh: {mesh.n_vertices} vertices, {mesh.n_triangles} triangles, area {mesh.total_area:.6g}")
        click.echo(f"Gram: {G.dim}x{G.dim}, {G.nnz} stored entries")
        if report_condition:
            click.echo(f"Condition number: {estimate_condition(G, tol=tol_norm, seed=seed):.6g}")

        with atomic_output(output) as temporary:
            write_sparse_sym(G, temporary, comment=f" {basis} Gram of {mesh_path.name}")
    click.echo(f"\n💾 Gram matrix saved to: {output}")


def _resolve_spec(G_list, kind, method, order, delta, n0, n0_class, strict_n0, mode, tol_norm, seed) -> ExpansionSpec:
    if delta is not None:
        order = max(
            resolve_order(G, method, kind, delta, n0=n0, n0_class=n0_class, tol_norm=tol_norm, seed=seed)
            for G in G_list
        )
        click.echo(f"Order {order} selected for delta = {delta:g}")
    return ExpansionSpec(
        method=method,
        kind=kind,
        order=order,
        n0=n0 if method == "cpe1" else None,
        n0_class=n0_class if method == "cpe2" else None,
        mode=mode,
        strict_n0=strict_n0,
    )


def _matrix_function(kind, matrix_path, method, order, delta, n0, n0_class, strict_n0, mode, output, tol_norm, seed):
    _validated(
        RunConfig(
            subcommand=kind,
            inputs=(matrix_path,),
            output=output,
            method=method,
            order=order,
            n0=n0,
            n0_class=n0_class,
            delta=delta,
            tol_norm=tol_norm,
            seed=seed,
            strict_n0=strict_n0,
        )
    )
    click.echo(f"🚀 Computing {kind} of {matrix_path} with {method}...")

    with _reporting_errors(f"computing {kind}"):
        G = read_sparse_sym(matrix_path)
        spec = _resolve_spec([G], kind, method, order, delta, n0, n0_class, strict_n0, mode, tol_norm, seed)
        result = matfun(G, spec, tol_norm=tol_norm, seed=seed)

        click.echo(f"\n📊 {kind} of a {G.dim}x{G.dim} matrix, {method} order {spec.order} ({mode})")
        with atomic_output(output) as temporary:
            write_dense(result, temporary, comment=f" {kind} via {method} order {spec.order}")
    click.echo(f"\n💾 Result saved to: {output}")


@main.command()
@click.argument("matrix_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@expansion_options
@click.option("--output", "-o", type=click.Path(dir_okay=False, path_type=Path), required=True)
@numerics_options
def sqrt(matrix_path, method, order, delta, n0, n0_class, strict_n0, mode, output, tol_norm, seed):
    """Square root of an SPD Matrix Market matrix"""
    _matrix_function("sqrt", matrix_path, method, order, delta, n0, n0_class, strict_n0, mode, output, tol_norm, seed)


@main.command()
@click.argument("matrix_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@expansion_options
@click.option("--output", "-o", type=click.Path(dir_okay=False, path_type=Path), required=True)
@numerics_options
def invsqrt(matrix_path, method, order, delta, n0, n0_class, strict_n0, mode, output, tol_norm, seed):
    """Inverse square root of an SPD Matrix Market matrix"""
    _matrix_function(
        "invsqrt", matrix_path, method, order, delta, n0, n0_class, strict_n0, mode, output, tol_norm, seed
    )


@main.command()
@click.argument("matrix_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--methods", default="tse,cpe1,pae", show_default=True, help="Comma-separated methods")
@click.option("--kinds", default="sqrt,invsqrt", show_default=True, help="Comma-separated kinds")
@click.option("--max-order", default=9, show_default=True, help="Last expansion order")
@click.option("--min-order", default=1, show_default=True, help="First expansion order")
@click.option("--n0", type=float, help="Fixed CPE1 interval [n0, 1] (computed when omitted)")
@click.option("--n0-class", type=float, help="Tabulated n0 class for CPE2")
@click.option("--mode", type=click.Choice(MODES), default="dense", show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False, path_type=Path), required=True)
@numerics_options
def convergence(matrix_path, methods, kinds, max_order, min_order, n0, n0_class, mode, output, tol_norm, seed):
    """Relative error against the eigendecomposition oracle per order"""
    methods = _split(methods, METHODS)
    kinds = _split(kinds, KINDS)
    _validated(
        RunConfig(
            subcommand="convergence",
            inputs=(matrix_path,),
            output=output,
            methods=methods,
            n0=n0,
            n0_class=n0_class,
            tol_norm=tol_norm,
            seed=seed,
        )
    )
    click.echo(f"🚀 Running convergence study on {matrix_path} ({', '.join(methods)})...")

    with _reporting_errors("running convergence study"):
        G = read_sparse_sym(matrix_path)
        study = ConvergenceStudy(
            methods=methods,
            kinds=kinds,
            max_order=max_order,
            min_order=min_order,
            n0=n0,
            n0_class=n0_class,
            mode=mode,
            tol_norm=tol_norm,
            seed=seed,
        )
        results = study.run(G)

        click.echo(f"\n📊 Convergence Summary (condition number {results.condition_number:.4g}):")
        for row in results.summary().itertuples(index=False):
            click.echo(
                f"{row.method:>5} {row.kind:<8} order {row.first_order}->{row.last_order}: "
                f"{row.first_delta:.3e} -> {row.last_delta:.3e}"
            )
        with atomic_output(output) as temporary:
            write_csv(results.to_frame(), temporary)
    click.echo(f"\n💾 Results saved to: {output}")


def _exact_column(coefficients) -> list:
    if coefficients.exact is None:
        return [""] * len(coefficients)
    return [str(Fraction(value)) for value in coefficients.exact]


@main.command()
@click.option("--method", "-m", type=click.Choice(METHODS), required=True, help="Expansion method")
@click.option("--kind", "-k", type=click.Choice(KINDS), default="sqrt", show_default=True)
@click.option("--order", "-n", type=int, help="Expansion order (CPE2: defaults to all 20 coefficients)")
@click.option("--n0", type=float, help="Interval [n0, 1] for CPE1")
@click.option("--n0-class", type=float, help="Tabulated n0 class for CPE2")
@click.option("--output", "-o", type=click.Path(dir_okay=False, path_type=Path), required=True)
def coeffs(method, kind, order, n0, n0_class, output):
    """Expansion coefficients at full precision"""
    _validated(
        RunConfig(subcommand="coeffs", output=output, method=method, kind=kind, order=order, n0=n0, n0_class=n0_class)
    )
    click.echo(f"🚀 Generating {method} {kind} coefficients...")

    with _reporting_errors("generating coefficients"):
        if method == "tse":
            coefficients = tse_coefficients(kind, order)
        elif method == "pae":
            coefficients = pae_coefficients(order, kind)
        elif method == "cpe1":
            coefficients = cpe_coefficients(kind, n0, order)
        else:
            coefficients = cpe_tabulated(kind, n0_class)
            if order is not None:
                coefficients = coefficients.truncated(order)

        frame = pd.DataFrame(
            {"n": np.arange(len(coefficients)), "value": coefficients.values, "exact": _exact_column(coefficients)}
        )
        if method == "cpe2":
            computed = cpe_coefficients(kind, coefficients.n0, coefficients.order).values
            frame["computed"] = computed
            frame["relative_difference"] = np.abs(computed - coefficients.values) / np.abs(coefficients.values)
            largest = frame["relative_difference"].max()
            click.echo(f"\n📊 Largest tabulated/computed relative difference: {largest:.3e}")

        with atomic_output(output) as temporary:
            write_csv(frame, temporary)
    click.echo(f"\n💾 {len(coefficients)} coefficients saved to: {output}")


@main.command()
@click.argument("t_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("g_left_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("g_right_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=False)
@expansion_options
@click.option("--singular-values", type=click.Path(dir_okay=False, path_type=Path),
              help="Also write the singular values of the result as CSV")
@click.option("--output", "-o", type=click.Path(dir_okay=False, path_type=Path), required=True)
@numerics_options
def normalize(
    t_path, g_left_path, g_right_path, method, order, delta, n0, n0_class, strict_n0, mode,
    singular_values, output, tol_norm, seed,
):
    """Normalize T to G_left^(-1/2) T G_right^(-1/2) (G_right defaults to G_left)"""
    inputs = tuple(p for p in (t_path, g_left_path, g_right_path) if p is not None)
    _validated(
        RunConfig(
            subcommand="normalize",
            inputs=inputs,
            output=output,
            method=method,
            order=order,
            n0=n0,
            n0_class=n0_class,
            delta=delta,
            tol_norm=tol_norm,
            seed=seed,
            strict_n0=strict_n0,
        )
    )
    click.echo(f"🚀 Normalizing {t_path} with {method}...")

    with _reporting_errors("normalizing operator"):
        T = read_matrix(t_path)
        T = T.toarray() if sp.issparse(T) else T
        G_left = read_sparse_sym(g_left_path)
        G_right = G_left if g_right_path is None else read_sparse_sym(g_right_path)

        spec = _resolve_spec(
            [G_left, G_right], "invsqrt", method, order, delta, n0, n0_class, strict_n0, mode, tol_norm, seed
        )
        normalized = normalize_operator(T, G_left, G_right, spec, tol_norm=tol_norm, seed=seed)
        rows, cols = normalized.shape
        click.echo(f"\n📊 Normalized {rows}x{cols} operator, {method} order {spec.order}")

        with atomic_output(output) as temporary:
            write_dense(normalized, temporary, comment=f" normalized via {method} order {spec.order}")
            if singular_values is not None:
                values = svdvals(normalized)
                click.echo(f"Singular values in [{values.min():.6g}, {values.max():.6g}]")
                frame = pd.DataFrame({"index": np.arange(values.size), "singular_value": values})
                with atomic_output(singular_values) as values_temporary:
                    write_csv(frame, values_temporary)
    click.echo(f"\n💾 Normalized operator saved to: {output}")
    if singular_values is not None:
        click.echo(f"💾 Singular values saved to: {singular_values}")


if __name__ == "__main__":
    main()
