"""Mesh file I/O: Triangle/TetGen .node/.ele pairs and OFF surfaces.

.node/.ele carry planar triangle meshes (2D nodes, 3 vertices per cell) or
tetrahedral meshes (3D nodes, 4 per cell); OFF carries triangle surfaces
embedded in 3D. Vertex numbering in .node/.ele may start at 0 or 1; the
base is detected from the first data row and normalized to 0 on read.
Writes are 1-based with 17 significant digits, so coordinates round-trip
exactly.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .complexes import build_complex
from .errors import MeshFormatError

__all__ = ["MeshFile", "read_mesh", "write_mesh", "load_complex"]

FORMAT_NODE_ELE = "node_ele"
FORMAT_OFF = "off"


@dataclass(frozen=True)
class MeshFile:
    """Parsed mesh: points (P, N) and top cells (T, n+1), 0-based."""

    format: str
    points: np.ndarray
    cells: np.ndarray


def _data_lines(path):
    """Yield (line_number, tokens) for non-comment, non-blank lines."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MeshFormatError(f"cannot read {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if body:
            yield lineno, body.split()


def _parse_ints(tokens, count, path, lineno, what):
    if len(tokens) < count:
        raise MeshFormatError(f"{path}:{lineno}: expected {count} fields for {what}")
    try:
        return [int(t) for t in tokens[:count]]
    except ValueError as exc:
        raise MeshFormatError(f"{path}:{lineno}: bad integer in {what}") from exc


def _read_node(path):
    lines = _data_lines(path)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise MeshFormatError(f"{path}: empty node file") from None
    header = _parse_ints(tokens, 2, path, lineno, "node header")
    count, dim = header
    if dim not in (2, 3):
        raise MeshFormatError(f"{path}:{lineno}: node dimension must be 2 or 3, got {dim}")
    if count < 1:
        raise MeshFormatError(f"{path}:{lineno}: node count must be positive")

    points = np.full((count, dim), np.nan)
    base = None
    filled = 0
    for lineno, tokens in lines:
        if filled == count:
            raise MeshFormatError(f"{path}:{lineno}: more node rows than declared ({count})")
        (idx,) = _parse_ints(tokens, 1, path, lineno, "node index")
        if base is None:
            if idx not in (0, 1):
                raise MeshFormatError(
                    f"{path}:{lineno}: first node index must be 0 or 1, got {idx}"
                )
            base = idx
        row = idx - base
        if not 0 <= row < count:
            raise MeshFormatError(f"{path}:{lineno}: node index {idx} out of range")
        if not np.isnan(points[row]).all():
            raise MeshFormatError(f"{path}:{lineno}: duplicate node index {idx}")
        if len(tokens) < 1 + dim:
            raise MeshFormatError(f"{path}:{lineno}: expected {dim} coordinates")
        try:
            points[row] = [float(t) for t in tokens[1 : 1 + dim]]
        except ValueError as exc:
            raise MeshFormatError(f"{path}:{lineno}: bad coordinate") from exc
        filled += 1
    if filled != count:
        raise MeshFormatError(f"{path}: declared {count} nodes, found {filled}")
    if not np.isfinite(points).all():
        raise MeshFormatError(f"{path}: non-finite coordinates")
    return points, base


def _read_ele(path, num_points, node_base, dim):
    lines = _data_lines(path)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise MeshFormatError(f"{path}: empty element file") from None
    count, per_cell = _parse_ints(tokens, 2, path, lineno, "element header")[:2]
    if per_cell != dim + 1:
        raise MeshFormatError(
            f"{path}:{lineno}: expected {dim + 1} vertices per cell for "
            f"{dim}-d nodes, got {per_cell}"
        )
    if count < 1:
        raise MeshFormatError(f"{path}:{lineno}: element count must be positive")

    cells = np.empty((count, per_cell), dtype=np.intp)
    filled = 0
    for lineno, tokens in lines:
        if filled == count:
            raise MeshFormatError(f"{path}:{lineno}: more element rows than declared ({count})")
        values = _parse_ints(tokens, 1 + per_cell, path, lineno, "element row")
        refs = [v - node_base for v in values[1:]]
        for ref in refs:
            if not 0 <= ref < num_points:
                raise MeshFormatError(
                    f"{path}:{lineno}: vertex reference {ref + node_base} out of range"
                )
        cells[filled] = refs
        filled += 1
    if filled != count:
        raise MeshFormatError(f"{path}: declared {count} elements, found {filled}")
    return cells


def _read_off(path):
    lines = _data_lines(path)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise MeshFormatError(f"{path}: empty OFF file") from None
    if tokens[0].upper() == "OFF":
        tokens = tokens[1:]
        if not tokens:
            try:
                lineno, tokens = next(lines)
            except StopIteration:
                raise MeshFormatError(f"{path}: missing OFF counts") from None
    num_vertices, num_faces = _parse_ints(tokens, 2, path, lineno, "OFF counts")[:2]
    if num_vertices < 1 or num_faces < 1:
        raise MeshFormatError(f"{path}:{lineno}: OFF needs positive vertex/face counts")

    points = np.empty((num_vertices, 3))
    for row in range(num_vertices):
        try:
            lineno, tokens = next(lines)
        except StopIteration:
            raise MeshFormatError(f"{path}: truncated vertex list") from None
        if len(tokens) < 3:
            raise MeshFormatError(f"{path}:{lineno}: expected 3 coordinates")
        try:
            points[row] = [float(t) for t in tokens[:3]]
        except ValueError as exc:
            raise MeshFormatError(f"{path}:{lineno}: bad coordinate") from exc

    cells = np.empty((num_faces, 3), dtype=np.intp)
    for row in range(num_faces):
        try:
            lineno, tokens = next(lines)
        except StopIteration:
            raise MeshFormatError(f"{path}: truncated face list") from None
        values = _parse_ints(tokens, len(tokens), path, lineno, "face row")
        if values[0] != 3:
            raise MeshFormatError(
                f"{path}:{lineno}: only triangle faces supported, got {values[0]} vertices"
            )
        if len(values) < 4:
            raise MeshFormatError(f"{path}:{lineno}: truncated face row")
        refs = values[1:4]
        for ref in refs:
            if not 0 <= ref < num_vertices:
                raise MeshFormatError(f"{path}:{lineno}: vertex reference {ref} out of range")
        cells[row] = refs
    if not np.isfinite(points).all():
        raise MeshFormatError(f"{path}: non-finite coordinates")
    return points, cells


def read_mesh(path, fmt=None):
    """Read a mesh from a .node/.ele pair (pass either path) or an OFF
    file; ``fmt`` ("node_ele"/"off") overrides extension detection."""
    path = Path(path)
    if fmt is None:
        suffix = path.suffix.lower()
        if suffix in (".node", ".ele"):
            fmt = FORMAT_NODE_ELE
        elif suffix == ".off":
            fmt = FORMAT_OFF
        else:
            raise MeshFormatError(
                f"cannot infer format from {path.name!r}; pass fmt='node_ele' or 'off'"
            )
    if fmt == FORMAT_OFF:
        points, cells = _read_off(path)
        return MeshFile(format=FORMAT_OFF, points=points, cells=cells)
    if fmt == FORMAT_NODE_ELE:
        base_path = path.with_suffix("")
        node_path = base_path.with_suffix(".node")
        ele_path = base_path.with_suffix(".ele")
        points, base = _read_node(node_path)
        cells = _read_ele(ele_path, len(points), base, points.shape[1])
        return MeshFile(format=FORMAT_NODE_ELE, points=points, cells=cells)
    raise MeshFormatError(f"unknown format {fmt!r}")


def write_mesh(path, points, cells, fmt=None):
    """Write a mesh; returns the list of paths written.

    Planar triangles and tets go to a .node/.ele pair (1-based); triangle
    surfaces in 3D go to a single OFF file. ``path`` is the base name; the
    proper extensions are applied.
    """
    points = np.asarray(points, dtype=float)
    cells = np.asarray(cells, dtype=np.intp)
    if points.ndim != 2 or cells.ndim != 2:
        raise MeshFormatError("points and cells must be 2-d arrays")
    ambient = points.shape[1]
    per_cell = cells.shape[1]
    if fmt is None:
        if ambient == 3 and per_cell == 3:
            fmt = FORMAT_OFF
        elif per_cell == ambient + 1 and ambient in (2, 3):
            fmt = FORMAT_NODE_ELE
        else:
            raise MeshFormatError(
                f"no format for {ambient}-d points with {per_cell}-vertex cells"
            )

    base = Path(path)
    if base.suffix.lower() in (".node", ".ele", ".off"):
        base = base.with_suffix("")
    if fmt == FORMAT_OFF:
        if ambient != 3 or per_cell != 3:
            raise MeshFormatError("OFF needs 3-d points and triangle cells")
        target = base.with_suffix(".off")
        lines = ["OFF", f"{len(points)} {len(cells)} 0"]
        lines.extend(" ".join(f"{x:.17g}" for x in row) for row in points)
        lines.extend("3 " + " ".join(str(v) for v in row) for row in cells)
        target.write_text("\n".join(lines) + "\n")
        return [target]
    if fmt == FORMAT_NODE_ELE:
        if per_cell != ambient + 1 or ambient not in (2, 3):
            raise MeshFormatError(
                f".node/.ele needs n+1 vertices per cell in 2-d or 3-d, got "
                f"{per_cell} vertices with {ambient}-d points"
            )
        node_path = base.with_suffix(".node")
        ele_path = base.with_suffix(".ele")
        node_lines = [f"{len(points)} {ambient} 0 0"]
        node_lines.extend(
            f"{i + 1} " + " ".join(f"{x:.17g}" for x in row)
            for i, row in enumerate(points)
        )
        node_path.write_text("\n".join(node_lines) + "\n")
        ele_lines = [f"{len(cells)} {per_cell} 0"]
        ele_lines.extend(
            f"{i + 1} " + " ".join(str(v + 1) for v in row)
            for i, row in enumerate(cells)
        )
        ele_path.write_text("\n".join(ele_lines) + "\n")
        return [node_path, ele_path]
    raise MeshFormatError(f"unknown format {fmt!r}")


def load_complex(path, fmt=None):
    """Read a mesh file and build the simplicial complex."""
    mesh_file = read_mesh(path, fmt=fmt)
    return build_complex(mesh_file.points, mesh_file.cells)
