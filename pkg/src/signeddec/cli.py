"""Command-line interface.

Exit codes: 0 success (and "qualifying" for check), 1 not qualifying
(check only), 2 usage or input errors. Designed so scripts can gate on
`signeddec check mesh.node`.
"""

import argparse
import csv
import json
import sys
from contextlib import nullcontext
from pathlib import Path

from .delaunay import classify_complex
from .errors import SignedDecError
from .fixtures import FIXTURE_NAMES, generate_fixture
from .hodge import hodge_star, validate_hodge
from .meshfile import load_complex, write_mesh
from .poisson import FIGURE1_COLUMNS, figure1_experiment, sigma_vectors
from .signed_dual import signed_dual_volume

SCHEMA_VERSION = 1


def _fmt(value):
    return f"{value:.17g}"


def _open_out(path):
    if path is None:
        return nullcontext(sys.stdout)
    return open(path, "w", newline="")


def _report_dict(mesh, report):
    counts = {str(p): mesh.num_simplices(p) for p in range(mesh.n + 1)}
    return {
        "schema_version": SCHEMA_VERSION,
        "dimension": mesh.n,
        "ambient_dimension": mesh.N,
        "num_simplices": counts,
        **report.as_dict(),
    }


def _cmd_check(args):
    mesh = load_complex(args.mesh)
    report = classify_complex(mesh)
    pair_counts = {}
    for _, _, status in report.pair_statuses:
        pair_counts[status] = pair_counts.get(status, 0) + 1
    side_counts = {}
    for _, _, status in report.boundary_statuses:
        side_counts[status] = side_counts.get(status, 0) + 1
    sizes = ", ".join(
        f"{mesh.num_simplices(p)} of dim {p}" for p in range(mesh.n + 1)
    )
    print(f"mesh: n={mesh.n}, N={mesh.N}; {sizes}")
    print(
        "pairwise Delaunay: "
        + (", ".join(f"{v} {k}" for k, v in sorted(pair_counts.items())) or "no internal facets")
    )
    print(
        "boundary one-sided: "
        + (", ".join(f"{v} {k}" for k, v in sorted(side_counts.items())) or "no boundary")
    )
    print(f"nonpositive dual volumes: {len(report.nonpositive_duals)}")
    for dim, index, value in report.nonpositive_duals[:10]:
        print(f"  dim {dim} simplex {index}: {_fmt(value)}")
    print(f"verdict: {report.verdict}")
    return 0 if report.is_qualifying else 1


def _cmd_report(args):
    mesh = load_complex(args.mesh)
    report = classify_complex(mesh)
    with _open_out(args.output) as handle:
        json.dump(_report_dict(mesh, report), handle, indent=2)
        handle.write("\n")
    return 0


def _cmd_duals(args):
    mesh = load_complex(args.mesh)
    if not 0 <= args.dim <= mesh.n:
        raise SignedDecError(f"--dim must be between 0 and {mesh.n}")
    with _open_out(args.output) as handle:
        writer = csv.writer(handle)
        writer.writerow(
            [
                "dim", "simplex_index", "vertices", "signed_volume",
                "unsigned_volume", "num_pieces", "num_negative_pieces",
            ]
        )
        for i in range(mesh.num_simplices(args.dim)):
            cell = signed_dual_volume(mesh, args.dim, i)
            writer.writerow(
                [
                    args.dim,
                    i,
                    " ".join(str(v) for v in mesh.simplex_vertices(args.dim, i)),
                    _fmt(cell.signed_volume),
                    _fmt(cell.unsigned_volume),
                    len(cell.pieces),
                    cell.num_negative_pieces,
                ]
            )
    return 0


def _cmd_hodge(args):
    mesh = load_complex(args.mesh)
    if not 0 <= args.dim <= mesh.n:
        raise SignedDecError(f"--dim must be between 0 and {mesh.n}")
    mode = args.mode or "signed"
    if args.unsigned:
        if args.mode == "signed":
            raise SignedDecError("--unsigned conflicts with --mode signed")
        mode = "unsigned"
    star = hodge_star(mesh, args.dim, mode=mode)
    with _open_out(args.output) as handle:
        writer = csv.writer(handle)
        writer.writerow(["index", "entry"])
        for i, entry in enumerate(star.entries):
            writer.writerow([i, _fmt(entry)])
    flagged = validate_hodge(star)
    if flagged:
        print(
            f"warning: {len(flagged)} nonpositive entries at indices "
            f"{flagged[:10]}{'...' if len(flagged) > 10 else ''}",
            file=sys.stderr,
        )
    return 0


def _cmd_poisson(args):
    try:
        config = json.loads(Path(args.config).read_text())
    except OSError as exc:
        raise SignedDecError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SignedDecError(f"bad JSON in {args.config}: {exc}") from exc
    if not isinstance(config, dict):
        raise SignedDecError("poisson config must be a JSON object")

    known = {"divisions", "seed", "width", "height", "influx", "output_dir", "columns"}
    unknown = set(config) - known
    if unknown:
        raise SignedDecError(f"unknown config keys: {sorted(unknown)}")
    columns = config.get("columns")
    if columns is None:
        columns = [{"family": f, "hodge_mode": m} for f, m in FIGURE1_COLUMNS]
    out_dir = Path(config.get("output_dir", "poisson_out"))
    out_dir.mkdir(parents=True, exist_ok=True)

    params = {
        key: config[key]
        for key in ("divisions", "seed", "width", "height", "influx")
        if key in config
    }
    summary = {"schema_version": SCHEMA_VERSION, "columns": []}
    meshes = {}
    for spec in columns:
        family = spec.get("family", "good")
        result = figure1_experiment(
            family=family,
            hodge_mode=spec.get("hodge_mode", "signed"),
            mesh=meshes.get(family),
            **params,
        )
        meshes[family] = result.mesh
        tag = f"{result.family}_{result.hodge_mode}"
        mesh = result.mesh
        with open(out_dir / f"{tag}_u.csv", "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["vertex_index", "x", "y", "u"])
            for i, (point, value) in enumerate(zip(mesh.points, result.solution.u)):
                writer.writerow([i, _fmt(point[0]), _fmt(point[1]), _fmt(value)])
        with open(out_dir / f"{tag}_sigma.csv", "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["edge_index", "tail", "head", "sigma"])
            for i in range(mesh.num_simplices(1)):
                tail, head = mesh.simplex_vertices(1, i)
                writer.writerow([i, tail, head, _fmt(result.solution.sigma[i])])
        vectors = sigma_vectors(mesh, result.solution.sigma)
        with open(out_dir / f"{tag}_flux_vectors.csv", "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["triangle_index", "vec_x", "vec_y"])
            for t, vec in enumerate(vectors):
                writer.writerow([t, _fmt(vec[0]), _fmt(vec[1])])
        summary["columns"].append(
            {
                "family": result.family,
                "hodge_mode": result.hodge_mode,
                "u_error": result.u_error,
                "sigma_error": result.sigma_error,
                "residual_norm": result.solution.residual_norm,
                "verdict": result.report.verdict,
                "nonpositive_star1": result.star1_nonpositive,
                "elapsed_seconds": result.elapsed_seconds,
                "files": [f"{tag}_u.csv", f"{tag}_sigma.csv", f"{tag}_flux_vectors.csv"],
            }
        )
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    json.dump(summary, sys.stdout, indent=2)
    print()
    return 0


def _cmd_fixture(args):
    params = {}
    for key in (
        "divisions", "seed", "jitter", "width", "height", "fold_angle",
        "min_violations", "ring", "half_length", "offset", "wobble", "mode",
    ):
        value = getattr(args, key)
        if value is not None:
            params[key] = value
    mesh = generate_fixture(args.name, **params)
    written = write_mesh(args.output, mesh.points, mesh.simplices[mesh.n])
    for path in written:
        print(path)
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="signeddec",
        description="Signed circumcentric dual volumes and diagonal Hodge stars",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="classify a mesh; exit 0 only if qualifying")
    p.add_argument("mesh")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("report", help="print the JSON classification report")
    p.add_argument("mesh")
    p.add_argument("--json", action="store_true", help="accepted for clarity; output is always JSON")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("duals", help="CSV of signed dual volumes at one dimension")
    p.add_argument("mesh")
    p.add_argument("-p", "--dim", type=int, required=True)
    p.add_argument(
        "--unsigned",
        action="store_true",
        help="accepted for compatibility; the CSV always carries both "
        "signed and unsigned columns",
    )
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_duals)

    p = sub.add_parser("hodge", help="CSV of diagonal Hodge star entries")
    p.add_argument("mesh")
    p.add_argument("-p", "--dim", type=int, required=True)
    p.add_argument("--mode", choices=("signed", "unsigned"), default=None)
    p.add_argument(
        "--unsigned", action="store_true", help="same as --mode unsigned"
    )
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_hodge)

    p = sub.add_parser("poisson", help="run the four-column flux patch-test experiment")
    p.add_argument("config", help="JSON config file")
    p.set_defaults(func=_cmd_poisson)

    p = sub.add_parser("fixture", help="generate a named fixture mesh")
    p.add_argument("name", choices=FIXTURE_NAMES)
    p.add_argument("-o", "--output", required=True, help="output base path")
    p.add_argument("--divisions", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jitter", type=float, default=None)
    p.add_argument("--width", type=float, default=None)
    p.add_argument("--height", type=float, default=None)
    p.add_argument("--fold-angle", dest="fold_angle", type=float, default=None)
    p.add_argument("--min-violations", dest="min_violations", type=int, default=None)
    p.add_argument("--ring", type=int, default=None)
    p.add_argument("--half-length", dest="half_length", type=float, default=None)
    p.add_argument("--offset", type=float, default=None)
    p.add_argument("--wobble", type=float, default=None)
    p.add_argument("--mode", choices=("crossing", "missing"), default=None)
    p.set_defaults(func=_cmd_fixture)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SignedDecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
