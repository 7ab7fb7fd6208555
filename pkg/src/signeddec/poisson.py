"""Mixed-form Poisson solves on planar triangle meshes.

Unknowns are a vertex potential u and an edge flux cochain sigma = -d0 u.
With diagonal Hodge stars the flux balance at each vertex's dual cell reads
d0^T star1 sigma = b - star0 f, where f is the source density (per area)
and b integrates the prescribed outward boundary flux density g over each
boundary vertex's share of the boundary (half of each incident boundary
edge). Eliminating sigma gives the reduced system
    d0^T star1 d0 u = star0 f - b,
a pure-flux (Neumann) problem, solvable only when total source matches
total outflux and determined up to a constant fixed by a gauge.
"""

import time
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from .complexes import boundary_operator
from .delaunay import classify_complex
from .errors import ProblemDefinitionError, SolveError
from .hodge import hodge_star, validate_hodge
from .signed_dual import step_sign

__all__ = [
    "MixedPoissonProblem",
    "LinearSystem",
    "MixedPoissonSolution",
    "ExperimentResult",
    "assemble_mixed_poisson",
    "solve_mixed_poisson",
    "boundary_outward_normals",
    "sigma_vectors",
    "figure1_experiment",
    "figure1_columns",
    "FIGURE1_COLUMNS",
]


@dataclass
class MixedPoissonProblem:
    """Problem data: mesh, source density f, outward boundary flux density
    g, and the gauge fixing the additive constant in u.

    ``source``: scalar, per-vertex array, or callable on points.
    ``boundary_flux``: scalar, dict {boundary facet index: g}, array over
    boundary facets (in boundary_faces() order), or callable on the facet
    midpoint. ``gauge``: "zero_mean" or ("pin", vertex_index).
    """

    mesh: object
    source: object = 0.0
    boundary_flux: object = 0.0
    gauge: object = "zero_mean"


@dataclass
class LinearSystem:
    """Assembled gauged linear system plus what solve needs to undo the
    gauge bookkeeping."""

    matrix: sparse.spmatrix
    rhs: np.ndarray
    form: str
    gauge: object
    hodge_mode: str
    mesh: object
    flux_operator: sparse.spmatrix


@dataclass
class MixedPoissonSolution:
    u: np.ndarray
    sigma: np.ndarray
    residual_norm: float
    form: str
    hodge_mode: str


def _source_values(mesh, source):
    count = mesh.num_simplices(0)
    if callable(source):
        values = np.asarray(source(mesh.points), dtype=float)
    elif np.isscalar(source):
        values = np.full(count, float(source))
    else:
        values = np.asarray(source, dtype=float)
    if values.shape != (count,):
        raise ProblemDefinitionError(
            f"source must give one value per vertex ({count}), got shape {values.shape}"
        )
    return values


def _flux_values(mesh, flux, boundary):
    count = len(boundary)
    if callable(flux):
        values = np.array(
            [
                float(flux(mesh.simplex_points(mesh.n - 1, facet).mean(axis=0)))
                for facet, _ in boundary
            ]
        )
    elif np.isscalar(flux):
        values = np.full(count, float(flux))
    elif isinstance(flux, dict):
        values = np.array([float(flux.get(facet, 0.0)) for facet, _ in boundary])
    else:
        values = np.asarray(flux, dtype=float)
    if values.shape != (count,):
        raise ProblemDefinitionError(
            f"boundary flux must give one value per boundary facet ({count}), "
            f"got shape {values.shape}"
        )
    return values


def _check_gauge(gauge, num_vertices):
    if gauge == "zero_mean":
        return gauge
    if (
        isinstance(gauge, tuple)
        and len(gauge) == 2
        and gauge[0] == "pin"
        and 0 <= int(gauge[1]) < num_vertices
    ):
        return ("pin", int(gauge[1]))
    raise ProblemDefinitionError(f"unrecognized gauge {gauge!r}")


def assemble_mixed_poisson(problem, hodge_mode="signed", form="reduced", compat_tol=1e-8):
    """Assemble the gauged linear system for a mixed Poisson problem.

    ``form`` "reduced" eliminates sigma (vertex unknowns only); "saddle"
    keeps both cochains in a symmetric block system. Verifies the
    compatibility condition (total source equals total outflux under the
    requested star's quadrature) and raises ProblemDefinitionError if it
    fails beyond compat_tol.
    """
    mesh = problem.mesh
    if mesh.n != 2 or mesh.N != 2:
        raise ProblemDefinitionError(
            f"mixed Poisson needs a planar triangle mesh (n=N=2), got n={mesh.n}, N={mesh.N}"
        )
    if form not in ("reduced", "saddle"):
        raise ProblemDefinitionError(f"form must be 'reduced' or 'saddle', got {form!r}")
    gauge = _check_gauge(problem.gauge, mesh.num_simplices(0))

    star0 = hodge_star(mesh, 0, mode=hodge_mode)
    star1 = hodge_star(mesh, 1, mode=hodge_mode)
    flux_op = boundary_operator(mesh, 1).T.tocsr()  # d0: edges x vertices

    boundary = mesh.boundary_faces()
    flux = _flux_values(mesh, problem.boundary_flux, boundary)
    num_vertices = mesh.num_simplices(0)
    num_edges = mesh.num_simplices(1)
    # Prescribed flux integrated over the boundary portions of the dual
    # cells: per boundary edge, the two half-edge faces [vertex, midpoint]
    # weighted by the chain sign of facet -> coface. One-sided facets give
    # the midpoint-exact +|e|/2 split; a facet that is not one-sided
    # carries a nonpositive trace and the load degrades accordingly.
    b = np.zeros(num_vertices)
    outflux = 0.0
    gross_flux = 0.0
    for (facet, top), g in zip(boundary, flux):
        length = mesh.volume_of(mesh.n - 1, facet)
        side = step_sign(mesh, mesh.n - 1, facet, top)
        outflux += g * length
        gross_flux += abs(g) * length
        for v in mesh.simplex_vertices(mesh.n - 1, facet):
            b[v] += g * side * length / 2.0

    source = _source_values(mesh, problem.source)
    weighted_source = star0.entries * source
    # Solvability is a property of the data, checked with plain arc-length
    # quadrature; the assembled load b may differ from it on meshes whose
    # boundary traces are not all positive.
    budget = float(weighted_source.sum() - outflux)
    scale = float(np.abs(weighted_source).sum() + gross_flux)
    if abs(budget) > compat_tol * max(scale, 1e-300):
        raise ProblemDefinitionError(
            "incompatible data for a pure-flux problem: total source "
            f"{weighted_source.sum():.6e} vs total outflux {outflux:.6e}"
        )

    star1_mat = star1.as_matrix()
    if form == "reduced":
        stiffness = (flux_op.T @ star1_mat @ flux_op).tocsr()
        rhs = weighted_source - b
        if gauge == "zero_mean":
            ones = np.ones((num_vertices, 1))
            matrix = sparse.bmat([[stiffness, ones], [ones.T, None]], format="csr")
            rhs = np.concatenate([rhs, [0.0]])
        else:
            keep = np.arange(num_vertices) != gauge[1]
            matrix = stiffness[keep][:, keep]
            rhs = rhs[keep]
    else:
        coupling = (star1_mat @ flux_op).tocsr()
        rhs = np.concatenate([np.zeros(num_edges), b - weighted_source])
        if gauge == "zero_mean":
            ones = np.ones((num_vertices, 1))
            matrix = sparse.bmat(
                [
                    [star1_mat, coupling, None],
                    [coupling.T, None, ones],
                    [None, ones.T, None],
                ],
                format="csr",
            )
            rhs = np.concatenate([rhs, [0.0]])
        else:
            full = sparse.bmat([[star1_mat, coupling], [coupling.T, None]], format="csr")
            keep = np.ones(num_edges + num_vertices, dtype=bool)
            keep[num_edges + gauge[1]] = False
            matrix = full[keep][:, keep]
            rhs = rhs[keep]

    return LinearSystem(
        matrix=matrix.tocsr(), rhs=rhs, form=form, gauge=gauge,
        hodge_mode=hodge_mode, mesh=mesh, flux_operator=flux_op,
    )


def solve_mixed_poisson(system):
    """Direct sparse solve; reconstructs u and sigma and enforces the
    gauge exactly. Raises SolveError on non-finite results."""
    mesh = system.mesh
    num_vertices = mesh.num_simplices(0)
    num_edges = mesh.num_simplices(1)
    raw = spsolve(system.matrix.tocsc(), system.rhs)
    if not np.isfinite(raw).all():
        raise SolveError(
            f"{system.form}/{system.hodge_mode} solve produced non-finite values "
            "(singular star weights?)"
        )
    residual = float(
        np.linalg.norm(system.matrix @ raw - system.rhs)
        / max(np.linalg.norm(system.rhs), 1e-300)
    )

    if system.form == "reduced":
        if system.gauge == "zero_mean":
            u = raw[:num_vertices].copy()
        else:
            u = np.zeros(num_vertices)
            keep = np.arange(num_vertices) != system.gauge[1]
            u[keep] = raw
        sigma = -(system.flux_operator @ u)
    else:
        sigma = raw[:num_edges].copy()
        if system.gauge == "zero_mean":
            u = raw[num_edges : num_edges + num_vertices].copy()
        else:
            u = np.zeros(num_vertices)
            keep = np.arange(num_vertices) != system.gauge[1]
            u[keep] = raw[num_edges:]

    if system.gauge == "zero_mean":
        u -= u.mean()
    else:
        u -= u[system.gauge[1]]
    return MixedPoissonSolution(
        u=u, sigma=sigma, residual_norm=residual,
        form=system.form, hodge_mode=system.hodge_mode,
    )


def boundary_outward_normals(mesh):
    """Outward unit normal per boundary facet (2D), in boundary_faces()
    order: perpendicular to the edge, pointing away from its triangle."""
    normals = []
    for facet, top in mesh.boundary_faces():
        a, b = mesh.simplex_points(mesh.n - 1, facet)
        apex = mesh.points[mesh.apex_vertex(mesh.n - 1, facet, top)]
        direction = b - a
        normal = np.array([direction[1], -direction[0]])
        normal /= np.linalg.norm(normal)
        if normal @ (apex - a) > 0:
            normal = -normal
        normals.append(normal)
    return np.array(normals)


def sigma_vectors(mesh, sigma):
    """Per-triangle constant vector field reproducing the edge cochain:
    least-squares fit of s with s . (head - tail) = sigma_e over the three
    edges of each triangle."""
    out = np.empty((mesh.num_simplices(2), 2))
    for t in range(mesh.num_simplices(2)):
        cell = mesh.simplex_vertices(2, t)
        rows = []
        vals = []
        for a, b in ((0, 1), (0, 2), (1, 2)):
            tail, head = cell[a], cell[b]
            rows.append(mesh.points[head] - mesh.points[tail])
            vals.append(sigma[mesh.simplex_index(1, (tail, head))])
        out[t] = np.linalg.lstsq(np.array(rows), np.array(vals), rcond=None)[0]
    return out


@dataclass
class ExperimentResult:
    """One column of the flux patch-test experiment."""

    family: str
    hodge_mode: str
    mesh: object
    solution: MixedPoissonSolution
    u_error: float
    sigma_error: float
    report: object
    star0_nonpositive: list
    star1_nonpositive: list
    elapsed_seconds: float
    config: dict = field(default_factory=dict)


FIGURE1_COLUMNS = (
    ("good", "signed"),
    ("good", "unsigned"),
    ("bad_boundary", "signed"),
    ("non_delaunay", "signed"),
)

_FAMILY_FIXTURES = {
    "good": "obtuse_delaunay_square",
    "bad_boundary": "bad_boundary_square",
    "non_delaunay": "non_delaunay_square",
}


def figure1_experiment(
    family="good",
    hodge_mode="signed",
    divisions=16,
    seed=0,
    width=1.0,
    height=1.0,
    influx=1.0,
    mesh=None,
    gauge="zero_mean",
):
    """Flux patch test on one mesh family with one star mode.

    Constant influx on the left side, equal outflux on the right, zero
    source: the exact potential is affine, u = -influx * x + const, with
    constant horizontal flux. Reports the relative max-norm deviation of u
    from that affine solution and of the reconstructed per-triangle flux
    vectors from (influx, 0), plus the mesh classification and any
    nonpositive star entries.
    """
    from .fixtures import generate_fixture

    if family not in _FAMILY_FIXTURES:
        raise ProblemDefinitionError(
            f"family must be one of {sorted(_FAMILY_FIXTURES)}, got {family!r}"
        )
    start = time.perf_counter()
    if mesh is None:
        mesh = generate_fixture(
            _FAMILY_FIXTURES[family],
            divisions=divisions, seed=seed, width=width, height=height,
        )

    def flux(midpoint):
        if abs(midpoint[0]) < 1e-9 * max(width, 1.0):
            return -influx
        if abs(midpoint[0] - width) < 1e-9 * max(width, 1.0):
            return influx
        return 0.0

    problem = MixedPoissonProblem(
        mesh=mesh, source=0.0, boundary_flux=flux, gauge=gauge
    )
    system = assemble_mixed_poisson(problem, hodge_mode=hodge_mode, form="reduced")
    solution = solve_mixed_poisson(system)

    # Error metric: relative max deviation of u from its best-fit field
    # a*x + c, normalized by the exact range |influx| * width.
    design = np.column_stack([mesh.points[:, 0], np.ones(len(mesh.points))])
    fit, *_ = np.linalg.lstsq(design, solution.u, rcond=None)
    deviation = solution.u - design @ fit
    u_error = float(np.abs(deviation).max() / (abs(influx) * width))
    vectors = sigma_vectors(mesh, solution.sigma)
    sigma_error = float(
        np.linalg.norm(vectors - np.array([influx, 0.0]), axis=1).max() / abs(influx)
    )

    report = classify_complex(mesh)
    result = ExperimentResult(
        family=family,
        hodge_mode=hodge_mode,
        mesh=mesh,
        solution=solution,
        u_error=u_error,
        sigma_error=sigma_error,
        report=report,
        star0_nonpositive=validate_hodge(hodge_star(mesh, 0, mode="signed")),
        star1_nonpositive=validate_hodge(hodge_star(mesh, 1, mode="signed")),
        elapsed_seconds=time.perf_counter() - start,
        config={
            "divisions": divisions, "seed": seed, "width": width,
            "height": height, "influx": influx,
        },
    )
    return result


def figure1_columns(divisions=16, seed=0, **kwargs):
    """All four canonical experiment columns: signed and unsigned stars on
    the good mesh, signed star on the bad-boundary and non-Delaunay
    meshes. Each mesh family is generated once; the two good-mesh columns
    literally share one mesh."""
    from .fixtures import generate_fixture

    meshes = {}
    results = []
    for family, mode in FIGURE1_COLUMNS:
        if family not in meshes:
            meshes[family] = generate_fixture(
                _FAMILY_FIXTURES[family],
                divisions=divisions, seed=seed,
                width=kwargs.get("width", 1.0), height=kwargs.get("height", 1.0),
            )
        results.append(
            figure1_experiment(
                family=family, hodge_mode=mode, divisions=divisions, seed=seed,
                mesh=meshes[family], **kwargs,
            )
        )
    return results
