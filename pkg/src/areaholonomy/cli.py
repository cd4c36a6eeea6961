"""Command-line interface: solve, verify, classify, word, plot-data.

Exit codes: 0 success, 1 I/O error, 2 non-convergence, 3 verification
failure, 64 usage error.  All outputs embed the seed; JSON files are
written atomically with sorted keys and floats rounded to 17 significant
digits, so identical configurations produce byte-identical files.
"""

from __future__ import annotations

import json
import math
import os
import sys
import tempfile

import click

EXIT_IO = 1
EXIT_NOT_CONVERGED = 2
EXIT_VERIFY_FAILED = 3
EXIT_USAGE = 64


def _canonical(obj):
    """Round floats to 17 significant digits for deterministic serialization."""
    if isinstance(obj, float):
        return float(f"{obj:.17g}")
    if isinstance(obj, dict):
        return {k: _canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    return obj


def _write_json(path: str, obj) -> None:
    """Write to a temp file in the target directory, then atomically rename."""
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        with os.fdopen(fd, "w") as handle:
            json.dump(_canonical(obj), handle, sort_keys=True, indent=1)
            handle.write("\n")
        os.replace(tmp, path)
    except OSError as ex:
        raise click.ClickException(f"cannot write {path}: {ex}")


def _read_json(path: str):
    try:
        with open(path) as handle:
            return json.load(handle)
    except OSError as ex:
        raise click.ClickException(f"cannot read {path}: {ex}")
    except json.JSONDecodeError as ex:
        raise click.ClickException(f"{path} is not valid JSON: {ex}")


def _parse_mesh(spec: str):
    import areaholonomy as ah

    kind, _, size = spec.partition(":")
    try:
        size_int = int(size)
    except ValueError:
        raise click.UsageError(f"mesh spec {spec!r} is not torus:N or sphere:S")
    if kind == "torus":
        return ah.build_torus_mesh(size_int)
    if kind == "sphere":
        return ah.build_sphere_mesh(size_int)
    raise click.UsageError(f"unknown mesh kind {kind!r} (use torus:N or sphere:S)")


def _flux_rep(mesh, n: int, flux: int):
    import numpy as np

    import areaholonomy as ah

    weights = [flux] + [0] * (n - 1)
    if mesh.genus == 0:
        return ah.sphere_rep(weights)
    lam = ah.SkewHermitian(2j * np.pi * np.diag(np.array(weights, dtype=np.float64)))
    eye = ah.Unitary(np.eye(n))
    return ah.YangMillsRep(1, n, [eye], [eye], lam)


@click.group()
def cli():
    """Yang-Mills critical points on surfaces via area-dependent holonomy."""


@cli.command()
@click.option("--mesh", "mesh_spec", required=True, help="torus:N or sphere:S")
@click.option("--n", default=1, show_default=True, help="structure group dimension")
@click.option("--flux", default=0, show_default=True, help="topological sector weight")
@click.option("--seed", default=0, show_default=True, help="initialization seed")
@click.option("--tol", default=1e-9, show_default=True, help="gradient-norm threshold")
@click.option("--max-iter", default=20000, show_default=True)
@click.option("--step", default=None, type=float, help="initial line-search step (default: area/4)")
@click.option("--eps", default=0.3, show_default=True, help="random start perturbation scale")
@click.option("--out", default="field.json", show_default=True, help="field snapshot path")
@click.option("--report", "report_path", default="report.json", show_default=True)
@click.option("--trace", is_flag=True, help="record the full step history")
def solve(mesh_spec, n, flux, seed, tol, max_iter, step, eps, out, report_path, trace):
    """Flow a randomly perturbed sector representative to a critical point."""
    import numpy as np

    import areaholonomy as ah

    if n < 1 or tol <= 0 or eps < 0:
        raise click.UsageError("need n >= 1, tol > 0, eps >= 0")
    mesh = _parse_mesh(mesh_spec)
    rng = np.random.default_rng(seed)
    start = ah.build_ym_field_from_rep(mesh, _flux_rep(mesh, n, flux))
    if eps > 0:
        start = ah.perturb_field(start, rng, eps)
    policy = ah.StepPolicy(initial_step=step)
    config = {
        "command": "solve",
        "mesh": mesh_spec,
        "n": n,
        "flux": flux,
        "seed": seed,
        "tol": tol,
        "max_iter": max_iter,
        "eps": eps,
    }
    converged = True
    try:
        field, flow_report = ah.gradient_flow(
            start, policy, tol=tol, max_iter=max_iter, record_history=trace, seed=seed
        )
    except ah.NotConvergedError as ex:
        converged = False
        field, flow_report = ex.field, ex.report
    field_json = ah.field_to_json(field)
    field_json["seed"] = seed
    _write_json(out, field_json)
    _write_json(
        report_path,
        {"config": config, "converged": converged, **flow_report.to_json()},
    )
    click.echo(
        f"{'converged' if converged else 'NOT converged'}: action={flow_report.final_action:.12g} "
        f"gradient_norm={flow_report.final_gradient_norm:.3g} "
        f"iterations={flow_report.iterations}"
    )
    if not converged:
        sys.exit(EXIT_NOT_CONVERGED)


@cli.command()
@click.option("--field", "field_path", required=True, type=click.Path(), help="field snapshot")
@click.option("--pairs", "pairs_path", default=None, type=click.Path(), help="loop-pair JSON file")
@click.option("--random", "random_pairs", default=None, type=int, help="draw this many random homotopic pairs")
@click.option("--lambda-from-face", default=0, show_default=True, help="face whose curvature supplies the generator")
@click.option("--perturb", default=0.0, show_default=True, help="perturb the field before verifying")
@click.option("--seed", default=0, show_default=True)
@click.option("--tol", default=1e-6, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="emit the residual table as JSON")
@click.option("--out", default=None, type=click.Path(), help="also write the table to this path")
def verify(field_path, pairs_path, random_pairs, lambda_from_face, perturb, seed, tol, as_json, out):
    """Check that holonomy depends only on homotopy class and enclosed area."""
    import numpy as np

    import areaholonomy as ah

    if (pairs_path is None) == (random_pairs is None):
        raise click.UsageError("choose exactly one of --pairs FILE or --random K")
    if tol <= 0:
        raise click.UsageError("tol must be positive")
    field = ah.field_from_json(
        _read_json(field_path), base_dir=os.path.dirname(os.path.abspath(field_path))
    )
    rng = np.random.default_rng(seed)
    if perturb > 0:
        field = ah.perturb_field(field, rng, perturb)
    if pairs_path is not None:
        raw = _read_json(pairs_path)
        pairs = [
            (ah.loop_from_json(a), ah.loop_from_json(b)) for a, b in raw["pairs"]
        ]
    else:
        pairs = [
            ah.random_homotopic_pair(field.mesh, rng, n_steps=12)
            for _ in range(random_pairs)
        ]
    lam = ah.face_curvature(field, lambda_from_face)
    rows = []
    flagged = 0
    for idx, (l1, l2) in enumerate(pairs):
        try:
            delta = ah.enclosed_area(field.mesh, ah.loop_concat(l1, ah.loop_reverse(l2)))
            residual = ah.verify_area_property(field, l1, l2, lam)
            rows.append({"pair": idx, "delta_area": delta, "residual": residual})
        except ah.NotNullHomotopicError as ex:
            flagged += 1
            rows.append({"pair": idx, "error": f"not null-homotopic: windings {ex.windings}"})
    residuals = [r["residual"] for r in rows if "residual" in r]
    max_residual = max(residuals) if residuals else math.inf
    table = {
        "seed": seed,
        "tol": tol,
        "rows": rows,
        "max_residual": max_residual,
        "flagged": flagged,
    }
    if out:
        _write_json(out, table)
    if as_json:
        click.echo(json.dumps(_canonical(table), sort_keys=True))
    else:
        for r in rows:
            if "residual" in r:
                click.echo(f"pair {r['pair']:3d}: delta_area={r['delta_area']:+.6f} residual={r['residual']:.3e}")
            else:
                click.echo(f"pair {r['pair']:3d}: {r['error']}")
        click.echo(f"max residual: {max_residual:.3e} (tol {tol:g})")
    if flagged or max_residual >= tol:
        sys.exit(EXIT_VERIFY_FAILED)


@cli.command()
@click.option("--n", required=True, type=int, help="structure group dimension")
@click.option("--kmax", required=True, type=int, help="weight bound")
@click.option("--json", "as_json", is_flag=True)
def classify(n, kmax, as_json):
    """Enumerate the isolated genus-0 classes as weight vectors."""
    import areaholonomy as ah

    if n < 1 or kmax < 0:
        raise click.UsageError("need n >= 1 and kmax >= 0")
    classes = ah.enumerate_sphere_classes(n, kmax)
    entries = []
    for wv in classes:
        action = ah.ym_action_value(ah.sphere_rep(wv))
        entries.append(
            {
                "weights": list(wv.k),
                "action": action,
                "flat": all(k == 0 for k in wv.k),
                "geodesic": "diag(" + ", ".join(f"exp(2*pi*i*{k}*t)" for k in wv.k) + ")",
            }
        )
    if as_json:
        click.echo(json.dumps(_canonical({"n": n, "kmax": kmax, "classes": entries}), sort_keys=True))
        return
    click.echo(f"{len(entries)} Yang-Mills classes on the sphere (n={n}, kmax={kmax}):")
    for e in entries:
        flat = "  [flat]" if e["flat"] else ""
        click.echo(f"  k={tuple(e['weights'])!s:<16} action={e['action']:.6f}{flat}  {e['geodesic']}")


@cli.command()
@click.option("--genus", required=True, type=int)
@click.option("--t", "t_values", multiple=True, type=float, help="area coordinate per word (default 0)")
@click.option("--check-relator", is_flag=True, help="verify the relator reduces to (empty, 1)")
@click.argument("words", nargs=-1)
def word(genus, t_values, check_relator, words):
    """Normalize words in the extended surface group and multiply them."""
    import areaholonomy as ah

    if genus < 0:
        raise click.UsageError("genus must be nonnegative")

    def render(el):
        if el.genus == 0:
            return f"t={el.t:g} (mod 1)"
        word_str = str(el.word) or "(empty)"
        return f"{word_str}, t={el.t:g}"

    if check_relator:
        rel = ah.GammaRElement(genus, ah.relator_letters(genus), 0.0)
        ok = rel.word.letters == () and abs(rel.t - 1.0) < 1e-12
        click.echo(f"relator normalizes to ({str(rel.word) or 'empty'}, t={rel.t:g}): {'ok' if ok else 'FAILED'}")
        if not ok:
            raise click.ClickException("relator did not normalize to (empty, 1)")
    elements = []
    for i, text in enumerate(words):
        t = t_values[i] if i < len(t_values) else 0.0
        try:
            el = ah.GammaRElement(genus, text, t)
        except ValueError as ex:
            raise click.UsageError(str(ex))
        elements.append(el)
        click.echo(f"input {i}: {render(el)}")
    if elements:
        product = elements[0]
        for el in elements[1:]:
            product = ah.gamma_mul(product, el)
        click.echo(f"product: {render(product)}")


@cli.command("plot-data")
@click.option("--input", "input_path", required=True, type=click.Path())
@click.option("--out", default=None, type=click.Path(), help="CSV path (default: stdout)")
def plot_data(input_path, out):
    """Convert a flow report or shrinking-loop table to CSV."""
    obj = _read_json(input_path)
    lines = []
    if "step_history" in obj or "final_action" in obj:
        lines.append("iteration,action,gradient_norm")
        for row in obj.get("step_history") or []:
            it, action, gnorm = row
            lines.append(f"{int(it)},{action:.17g},{gnorm:.17g}")
    elif "rows" in obj and all("area" in r or isinstance(r, list) for r in obj["rows"]):
        lines.append("area,residual")
        for row in obj["rows"]:
            area, residual = (row["area"], row["residual"]) if isinstance(row, dict) else row
            lines.append(f"{area:.17g},{residual:.17g}")
    else:
        raise click.ClickException(f"{input_path} is neither a flow report nor a shrinking-loop table")
    text = "\n".join(lines) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        try:
            directory = os.path.dirname(os.path.abspath(out))
            fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
            with os.fdopen(fd, "w") as handle:
                handle.write(text)
            os.replace(tmp, out)
        except OSError as ex:
            raise click.ClickException(f"cannot write {out}: {ex}")


def main():
    try:
        cli(standalone_mode=False)
    except click.UsageError as ex:
        ex.show()
        sys.exit(EXIT_USAGE)
    except click.ClickException as ex:
        ex.show()
        sys.exit(EXIT_IO)
    except click.exceptions.Abort:
        sys.exit(130)
    except ValueError as ex:
        # invalid input data (bad mesh/field/word files, domain violations)
        click.echo(f"error: {ex}", err=True)
        sys.exit(EXIT_USAGE)
    except ArithmeticError as ex:
        # BranchCut: the configuration puts a plaquette on the log branch
        # cut (flux too large for the mesh); refine the mesh or lower it
        click.echo(f"error: {ex}", err=True)
        sys.exit(EXIT_USAGE)


if __name__ == "__main__":
    main()
