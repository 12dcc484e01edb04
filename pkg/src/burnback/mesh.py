"""Triangular meshes for 2D burnback runs.

Containers, generators, text I/O, validation, and the precomputed
geometry (corner angles, edge weights, node heights) consumed by the
front solver.

Text format, line oriented, '#' starts a comment:

    ntri nnode nsym
    px py dx dy            one line per symmetry line (point, unit direction)
    x y marker [symline]   one line per node; symline only for marker 3
    i0 i1 i2               one line per triangle, 0-based node ids, CCW

Floats are written with 17 significant digits so save/load round-trips
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np
from scipy.spatial import cKDTree

__all__ = [
    "Marker",
    "SymmetryLine",
    "Mesh",
    "MeshError",
    "GeomCache",
    "combine_markers",
    "validate_mesh",
    "load_mesh",
    "save_mesh",
    "gen_rect",
    "gen_coons",
    "merge_meshes",
    "boundary_loops",
    "geom_cache",
]


class MeshError(ValueError):
    """Malformed mesh document or violated mesh invariant."""


class Marker(IntEnum):
    INTERIOR = 0
    IGNITION = 1  # burning surface, arrival time pinned to zero
    FREE = 2      # outflow boundary (casing side)
    SYMMETRY = 3  # mirror line, gradient projected onto the line


# Where two sides meet at a corner the stronger condition wins:
# IGNITION > SYMMETRY > FREE > INTERIOR.
_MARKER_RANK = np.array([0, 3, 1, 2])  # indexed by marker value


def combine_markers(a: int, b: int) -> int:
    """Resolve the marker of a node claimed by two boundary sides."""
    return int(a) if _MARKER_RANK[int(a)] >= _MARKER_RANK[int(b)] else int(b)


@dataclass(frozen=True)
class SymmetryLine:
    """Mirror line given by a point and a unit direction."""

    point: tuple[float, float]
    direction: tuple[float, float]

    def __post_init__(self):
        p = (float(self.point[0]), float(self.point[1]))
        d = np.array([self.direction[0], self.direction[1]], dtype=float)
        n = float(np.sqrt(d[0] * d[0] + d[1] * d[1]))
        if not np.isfinite(n) or n == 0.0:
            raise MeshError("symmetry line needs a nonzero direction")
        d = d / n
        object.__setattr__(self, "point", p)
        object.__setattr__(self, "direction", (float(d[0]), float(d[1])))


@dataclass
class Mesh:
    """Triangulated cross-section with per-node boundary markers.

    nodes          (nn, 2) float64 coordinates
    triangles      (nt, 3) int64 node ids, counter-clockwise
    node_markers   (nn,) int64 values from Marker
    symmetry_lines list of SymmetryLine
    node_symline   (nn,) int64 index into symmetry_lines, -1 where unused
    """

    nodes: np.ndarray
    triangles: np.ndarray
    node_markers: np.ndarray
    symmetry_lines: list = field(default_factory=list)
    node_symline: np.ndarray | None = None

    def __post_init__(self):
        self.nodes = np.ascontiguousarray(np.asarray(self.nodes, dtype=np.float64))
        self.triangles = np.ascontiguousarray(np.asarray(self.triangles, dtype=np.int64))
        self.node_markers = np.asarray(self.node_markers, dtype=np.int64)
        if self.node_symline is None:
            self.node_symline = np.full(len(self.nodes), -1, dtype=np.int64)
        else:
            self.node_symline = np.asarray(self.node_symline, dtype=np.int64)

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]


def _signed_areas(nodes: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    p0 = nodes[triangles[:, 0]]
    e1 = nodes[triangles[:, 1]] - p0
    e2 = nodes[triangles[:, 2]] - p0
    return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])


def _bbox_diag(nodes: np.ndarray) -> float:
    if len(nodes) == 0:
        return 0.0
    span = nodes.max(axis=0) - nodes.min(axis=0)
    return float(np.sqrt(span[0] ** 2 + span[1] ** 2))


def _directed_edges(triangles: np.ndarray) -> np.ndarray:
    """All 3*nt directed edges (corner k to corner k+1)."""
    return np.concatenate(
        [triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]], axis=0
    )


def validate_mesh(mesh: Mesh) -> None:
    """Check every mesh invariant; raise MeshError naming the offender."""
    nodes, tris = mesh.nodes, mesh.triangles
    if nodes.ndim != 2 or nodes.shape[1] != 2:
        raise MeshError("nodes must be an (n, 2) array")
    if tris.ndim != 2 or tris.shape[1] != 3:
        raise MeshError("triangles must be an (n, 3) array")
    if not np.all(np.isfinite(nodes)):
        raise MeshError("non-finite node coordinate")
    nn = len(nodes)
    if tris.size and (tris.min() < 0 or tris.max() >= nn):
        bad = int(np.argmax((tris < 0) | (tris >= nn)).item() // 3)
        raise MeshError(f"triangle {bad} references a node outside 0..{nn - 1}")
    if len(tris) == 0:
        raise MeshError("mesh has no triangles")

    areas = _signed_areas(nodes, tris)
    if np.any(areas <= 0.0):
        bad = np.flatnonzero(areas <= 0.0)
        raise MeshError(
            "non-positive triangle area (clockwise or degenerate): "
            f"triangles {bad[:10].tolist()}"
        )

    used = np.zeros(nn, dtype=bool)
    used[tris.ravel()] = True
    if not used.all():
        raise MeshError(f"nodes not referenced by any triangle: {np.flatnonzero(~used)[:10].tolist()}")

    mk = mesh.node_markers
    if mk.shape != (nn,):
        raise MeshError("node_markers length does not match nodes")
    if np.any((mk < 0) | (mk > 3)):
        raise MeshError(f"invalid marker value at node {int(np.argmax((mk < 0) | (mk > 3)))}")

    sl = mesh.node_symline
    nsym = len(mesh.symmetry_lines)
    is_sym = mk == Marker.SYMMETRY
    if np.any(is_sym & ((sl < 0) | (sl >= nsym))):
        bad = int(np.argmax(is_sym & ((sl < 0) | (sl >= nsym))))
        raise MeshError(f"SYMMETRY node {bad} has no valid symmetry line reference")
    if np.any(~is_sym & (sl != -1)):
        bad = int(np.argmax(~is_sym & (sl != -1)))
        raise MeshError(f"node {bad} carries a symmetry line reference but is not SYMMETRY")

    # Symmetry nodes must sit on their line to within 1e-9 of the mesh size.
    tol = 1e-9 * max(_bbox_diag(nodes), 1e-300)
    for k, line in enumerate(mesh.symmetry_lines):
        pick = is_sym & (sl == k)
        if not pick.any():
            continue
        p = np.asarray(line.point)
        d = np.asarray(line.direction)
        r = nodes[pick] - p
        off = np.abs(r[:, 0] * d[1] - r[:, 1] * d[0])
        if off.max() > tol:
            bad = int(np.flatnonzero(pick)[int(np.argmax(off))])
            raise MeshError(f"SYMMETRY node {bad} lies off symmetry line {k} by {off.max():.3e}")

    # Orientation-consistent and edge-manifold: every directed edge at most
    # once, every undirected edge on 1 or 2 triangles.
    de = _directed_edges(tris)
    keys = de[:, 0].astype(np.int64) * nn + de[:, 1]
    if len(np.unique(keys)) != len(keys):
        raise MeshError("duplicated directed edge (inconsistent orientation or doubled triangle)")
    und = np.sort(de, axis=1)
    ukeys = und[:, 0].astype(np.int64) * nn + und[:, 1]
    _, counts = np.unique(ukeys, return_counts=True)
    if counts.max() > 2:
        raise MeshError("edge shared by more than 2 triangles (non-manifold)")


# ---------------------------------------------------------------------------
# text I/O


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def save_mesh(mesh: Mesh) -> str:
    """Serialize to the canonical text format at full precision."""
    out = [f"{mesh.n_triangles} {mesh.n_nodes} {len(mesh.symmetry_lines)}"]
    for line in mesh.symmetry_lines:
        out.append(
            f"{_fmt(line.point[0])} {_fmt(line.point[1])} "
            f"{_fmt(line.direction[0])} {_fmt(line.direction[1])}"
        )
    for i in range(mesh.n_nodes):
        x, y = mesh.nodes[i]
        m = int(mesh.node_markers[i])
        rec = f"{_fmt(x)} {_fmt(y)} {m}"
        if m == Marker.SYMMETRY:
            rec += f" {int(mesh.node_symline[i])}"
        out.append(rec)
    for t in mesh.triangles:
        out.append(f"{t[0]} {t[1]} {t[2]}")
    return "\n".join(out) + "\n"


def load_mesh(text: str) -> Mesh:
    """Parse and validate a mesh document; errors carry line numbers."""
    records = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            records.append((ln, body.split()))

    if not records:
        raise MeshError("empty mesh document")

    def take():
        if not records:
            raise MeshError("unexpected end of mesh document")
        return records.pop(0)

    ln, head = take()
    if len(head) != 3:
        raise MeshError(f"line {ln}: header must be 'ntri nnode nsym'")
    try:
        ntri, nnode, nsym = (int(tok) for tok in head)
    except ValueError:
        raise MeshError(f"line {ln}: header must hold three integers") from None

    lines = []
    for _ in range(nsym):
        ln, rec = take()
        if len(rec) != 4:
            raise MeshError(f"line {ln}: symmetry line needs 'px py dx dy'")
        try:
            px, py, dx, dy = (float(tok) for tok in rec)
        except ValueError:
            raise MeshError(f"line {ln}: bad number in symmetry line") from None
        lines.append(SymmetryLine((px, py), (dx, dy)))

    nodes = np.empty((nnode, 2), dtype=np.float64)
    markers = np.empty(nnode, dtype=np.int64)
    symline = np.full(nnode, -1, dtype=np.int64)
    for i in range(nnode):
        ln, rec = take()
        if len(rec) not in (3, 4):
            raise MeshError(f"line {ln}: node record needs 'x y marker [symline]'")
        try:
            nodes[i, 0] = float(rec[0])
            nodes[i, 1] = float(rec[1])
            markers[i] = int(rec[2])
        except ValueError:
            raise MeshError(f"line {ln}: bad number in node record") from None
        if len(rec) == 4:
            if markers[i] != Marker.SYMMETRY:
                raise MeshError(f"line {ln}: symline given for a non-SYMMETRY node")
            try:
                symline[i] = int(rec[3])
            except ValueError:
                raise MeshError(f"line {ln}: bad symline index") from None
        elif markers[i] == Marker.SYMMETRY:
            raise MeshError(f"line {ln}: SYMMETRY node missing its symline index")

    tris = np.empty((ntri, 3), dtype=np.int64)
    for i in range(ntri):
        ln, rec = take()
        if len(rec) != 3:
            raise MeshError(f"line {ln}: triangle record needs 'i0 i1 i2'")
        try:
            tris[i] = [int(tok) for tok in rec]
        except ValueError:
            raise MeshError(f"line {ln}: bad node id in triangle record") from None

    if records:
        ln, _ = records[0]
        raise MeshError(f"line {ln}: trailing records beyond declared counts")

    mesh = Mesh(nodes, tris, markers, lines, symline)
    validate_mesh(mesh)
    return mesh


# ---------------------------------------------------------------------------
# generators


def _grid_triangles(nx: int, ny: int) -> np.ndarray:
    """Split each cell of an (nx x ny) grid along the same diagonal."""
    iu, iv = np.meshgrid(np.arange(nx), np.arange(ny))
    n00 = (iv * (nx + 1) + iu).ravel()
    n10 = n00 + 1
    n01 = n00 + (nx + 1)
    n11 = n01 + 1
    tri_a = np.stack([n00, n10, n11], axis=1)
    tri_b = np.stack([n00, n11, n01], axis=1)
    return np.concatenate([tri_a[:, None, :], tri_b[:, None, :]], axis=1).reshape(-1, 3)


def _apply_side_markers(markers, symline, side_masks, rule, side_lines):
    """Paint side markers with corner priority, then bind symmetry lines."""
    line_list = []
    for name, mask in side_masks:
        m = int(rule[name])
        cur = markers[mask]
        take = _MARKER_RANK[m] > _MARKER_RANK[cur]
        cur[take] = m
        markers[mask] = cur
    for name, mask in side_masks:
        if int(rule[name]) != Marker.SYMMETRY:
            continue
        line = side_lines[name]()
        line_list.append(line)
        idx = len(line_list) - 1
        bind = mask & (markers == Marker.SYMMETRY) & (symline == -1)
        symline[bind] = idx
    return line_list


def gen_rect(nx: int, ny: int, width: float, height: float, markers=None) -> Mesh:
    """Structured rectangle mesh, each cell split into two triangles.

    markers maps side names left/right/bottom/top to Marker values;
    unnamed sides default to FREE.
    """
    if nx < 1 or ny < 1:
        raise MeshError("gen_rect needs nx, ny >= 1")
    if width <= 0 or height <= 0:
        raise MeshError("gen_rect needs positive width and height")
    rule = {"left": Marker.FREE, "right": Marker.FREE, "bottom": Marker.FREE, "top": Marker.FREE}
    if markers:
        for key in markers:
            if key not in rule:
                raise MeshError(f"unknown side name {key!r}")
        rule.update(markers)

    xs = np.linspace(0.0, width, nx + 1)
    ys = np.linspace(0.0, height, ny + 1)
    X, Y = np.meshgrid(xs, ys)
    nodes = np.column_stack([X.ravel(), Y.ravel()])
    tris = _grid_triangles(nx, ny)

    ix = np.tile(np.arange(nx + 1), ny + 1)
    iy = np.repeat(np.arange(ny + 1), nx + 1)
    side_masks = [
        ("left", ix == 0),
        ("right", ix == nx),
        ("bottom", iy == 0),
        ("top", iy == ny),
    ]
    side_lines = {
        "left": lambda: SymmetryLine((0.0, 0.0), (0.0, 1.0)),
        "right": lambda: SymmetryLine((width, 0.0), (0.0, 1.0)),
        "bottom": lambda: SymmetryLine((0.0, 0.0), (1.0, 0.0)),
        "top": lambda: SymmetryLine((0.0, height), (1.0, 0.0)),
    }
    node_markers = np.zeros(len(nodes), dtype=np.int64)
    node_symline = np.full(len(nodes), -1, dtype=np.int64)
    lines = _apply_side_markers(node_markers, node_symline, side_masks, rule, side_lines)

    mesh = Mesh(nodes, tris, node_markers, lines, node_symline)
    validate_mesh(mesh)
    return mesh


def _resample_polyline(poly: np.ndarray, n: int) -> np.ndarray:
    """n+1 points spaced uniformly in arc length along an open polyline."""
    poly = np.asarray(poly, dtype=np.float64)
    if poly.ndim != 2 or poly.shape[1] != 2 or len(poly) < 2:
        raise MeshError("boundary polyline needs at least 2 points")
    seg = np.diff(poly, axis=0)
    slen = np.sqrt(seg[:, 0] ** 2 + seg[:, 1] ** 2)
    cum = np.concatenate([[0.0], np.cumsum(slen)])
    if cum[-1] <= 0.0:
        raise MeshError("degenerate boundary polyline (zero length)")
    t = np.linspace(0.0, cum[-1], n + 1)
    return np.column_stack([np.interp(t, cum, poly[:, 0]), np.interp(t, cum, poly[:, 1])])


def gen_coons(inner, outer, n_transverse: int, n_longitudinal: int, markers=None) -> Mesh:
    """Transfinite patch between two open polylines.

    The two side boundaries are the straight chords joining matching
    polyline endpoints, so the interpolant reduces to a ruled surface
    between the arc-length-resampled inner and outer curves.  markers maps
    inner/outer/side0/side1 to Marker values (defaults: inner IGNITION,
    outer FREE, sides SYMMETRY).  side0 joins inner[0] to outer[0].
    """
    if n_transverse < 1 or n_longitudinal < 1:
        raise MeshError("gen_coons needs n_transverse, n_longitudinal >= 1")
    rule = {
        "inner": Marker.IGNITION,
        "outer": Marker.FREE,
        "side0": Marker.SYMMETRY,
        "side1": Marker.SYMMETRY,
    }
    if markers:
        for key in markers:
            if key not in rule:
                raise MeshError(f"unknown boundary name {key!r}")
        rule.update(markers)
    if int(rule["inner"]) == Marker.SYMMETRY or int(rule["outer"]) == Marker.SYMMETRY:
        raise MeshError("SYMMETRY is only supported on the straight side chords")

    nu, nv = n_longitudinal, n_transverse
    ci = _resample_polyline(inner, nu)
    co = _resample_polyline(outer, nu)
    v = np.linspace(0.0, 1.0, nv + 1)
    nodes = (1.0 - v)[:, None, None] * ci[None, :, :] + v[:, None, None] * co[None, :, :]
    nodes = nodes.reshape(-1, 2)
    tris = _grid_triangles(nu, nv)

    areas = _signed_areas(nodes, tris)
    if np.all(areas < 0.0):
        tris = tris[:, [0, 2, 1]]  # inner/outer orientation flips the loft
        areas = -areas
    if np.any(areas <= 0.0):
        cells = np.unique(np.flatnonzero(areas <= 0.0) // 2)
        where = [(int(c % nu), int(c // nu)) for c in cells[:10]]
        raise MeshError(f"degenerate Coons patch: non-positive cells (iu, iv) {where}")

    iu = np.tile(np.arange(nu + 1), nv + 1)
    iv = np.repeat(np.arange(nv + 1), nu + 1)
    side_masks = [
        ("inner", iv == 0),
        ("outer", iv == nv),
        ("side0", iu == 0),
        ("side1", iu == nu),
    ]

    def chord_line(a, b):
        def make():
            d = (b[0] - a[0], b[1] - a[1])
            return SymmetryLine((float(a[0]), float(a[1])), d)

        return make

    side_lines = {
        "side0": chord_line(ci[0], co[0]),
        "side1": chord_line(ci[-1], co[-1]),
        "inner": lambda: None,
        "outer": lambda: None,
    }
    node_markers = np.zeros(len(nodes), dtype=np.int64)
    node_symline = np.full(len(nodes), -1, dtype=np.int64)
    lines = _apply_side_markers(node_markers, node_symline, side_masks, rule, side_lines)

    mesh = Mesh(nodes, tris, node_markers, lines, node_symline)
    validate_mesh(mesh)
    return mesh


# ---------------------------------------------------------------------------
# welding


def _canonical_line(line: SymmetryLine):
    d = np.asarray(line.direction)
    if d[0] < 0 or (d[0] == 0 and d[1] < 0):
        d = -d
    p = np.asarray(line.point)
    anchor = p - (p @ d) * d  # foot of the origin on the line
    return anchor, d


def merge_meshes(meshes, tol: float | None = None) -> Mesh:
    """Weld coincident nodes of several meshes into one mesh.

    Coincident means within tol (default 1e-9 of the joint bounding box
    diagonal).  Markers of welded nodes combine with the usual corner
    priority; identical symmetry lines are deduplicated.
    """
    meshes = list(meshes)
    if not meshes:
        raise MeshError("merge_meshes needs at least one mesh")

    nodes = np.concatenate([m.nodes for m in meshes], axis=0)
    node_off = np.cumsum([0] + [m.n_nodes for m in meshes])
    line_off = np.cumsum([0] + [len(m.symmetry_lines) for m in meshes])
    tris = np.concatenate(
        [m.triangles + node_off[i] for i, m in enumerate(meshes)], axis=0
    )
    markers = np.concatenate([m.node_markers for m in meshes])
    symline = np.concatenate(
        [np.where(m.node_symline >= 0, m.node_symline + line_off[i], -1) for i, m in enumerate(meshes)]
    )
    all_lines = [ln for m in meshes for ln in m.symmetry_lines]

    if tol is None:
        tol = 1e-9 * max(_bbox_diag(nodes), 1e-300)

    # Union-find over close pairs.
    parent = np.arange(len(nodes))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    pairs = cKDTree(nodes).query_pairs(tol, output_type="ndarray")
    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    root = np.array([find(i) for i in range(len(nodes))])
    uniq, new_id = np.unique(root, return_inverse=True)

    new_nodes = nodes[uniq]
    new_tris = new_id[tris]

    rank = _MARKER_RANK[markers]
    best_rank = np.zeros(len(uniq), dtype=np.int64)
    np.maximum.at(best_rank, new_id, rank)
    rank_to_marker = np.empty(4, dtype=np.int64)
    rank_to_marker[_MARKER_RANK] = np.arange(4)
    new_markers = rank_to_marker[best_rank]

    # Deduplicate symmetry lines that describe the same geometric line.
    canon = [_canonical_line(ln) for ln in all_lines]
    line_map = np.full(len(all_lines), -1, dtype=np.int64)
    kept: list[SymmetryLine] = []
    kept_canon = []
    for i, (anchor, d) in enumerate(canon):
        hit = -1
        for j, (a2, d2) in enumerate(kept_canon):
            if abs(d[0] * d2[1] - d[1] * d2[0]) < 1e-12 and np.hypot(*(anchor - a2)) <= max(tol, 1e-12):
                hit = j
                break
        if hit < 0:
            kept.append(all_lines[i])
            kept_canon.append((anchor, d))
            hit = len(kept) - 1
        line_map[i] = hit

    new_symline = np.full(len(uniq), -1, dtype=np.int64)
    is_sym_src = (markers == Marker.SYMMETRY) & (symline >= 0)
    for src in np.flatnonzero(is_sym_src):
        g = new_id[src]
        if new_markers[g] == Marker.SYMMETRY and new_symline[g] == -1:
            new_symline[g] = line_map[symline[src]]

    merged = Mesh(new_nodes, new_tris, new_markers, kept, new_symline)
    validate_mesh(merged)
    return merged


def boundary_loops(mesh: Mesh) -> list:
    """Closed boundary loops as node-id arrays, interior kept on the left."""
    de = _directed_edges(mesh.triangles)
    und = np.sort(de, axis=1)
    keys = und[:, 0].astype(np.int64) * mesh.n_nodes + und[:, 1]
    _, inv, counts = np.unique(keys, return_inverse=True, return_counts=True)
    on_boundary = counts[inv] == 1
    nxt = {int(a): int(b) for a, b in de[on_boundary]}

    loops = []
    seen = set()
    for start in sorted(nxt):
        if start in seen:
            continue
        loop = [start]
        seen.add(start)
        cur = nxt[start]
        while cur != start:
            loop.append(cur)
            seen.add(cur)
            cur = nxt[cur]
        loops.append(np.array(loop, dtype=np.int64))
    return loops


# ---------------------------------------------------------------------------
# cached geometry


@dataclass
class GeomCache:
    """Per-triangle and per-node geometry reused on every solver step.

    corner_angle[t, k] is the interior angle at corner k; grad_coeff[t, k]
    is the gradient of the linear hat function of corner k, so the field
    gradient on triangle t is sum_k s[tri[t, k]] * grad_coeff[t, k].
    Edge weights beta hold tan(angle/2) sums of the adjacent corner
    angles, one value per edge endpoint.
    """

    tri_area: np.ndarray
    corner_angle: np.ndarray
    grad_coeff: np.ndarray
    node_angle_sum: np.ndarray
    node_min_height: np.ndarray
    edge_nodes: np.ndarray
    edge_len: np.ndarray
    edge_inv_len: np.ndarray
    edge_unit: np.ndarray
    edge_beta_a: np.ndarray
    edge_beta_b: np.ndarray
    edge_tri: np.ndarray
    node_beta_bias: np.ndarray
    node_tri_ptr: np.ndarray
    node_tri_idx: np.ndarray
    corner_node_flat: np.ndarray
    corner_angle_flat: np.ndarray
    is_ignition: np.ndarray
    is_free: np.ndarray
    is_symmetry: np.ndarray
    sym_dir: np.ndarray
    bbox_diag: float


def geom_cache(mesh: Mesh) -> GeomCache:
    nodes, tris = mesh.nodes, mesh.triangles
    nn, nt = mesh.n_nodes, mesh.n_triangles

    p = nodes[tris]  # (nt, 3, 2)
    area = _signed_areas(nodes, tris)

    # grad of the hat function at corner k: perpendicular of the opposite
    # edge over twice the area (valid for CCW triangles).
    opp = p[:, [2, 0, 1], :] - p[:, [1, 2, 0], :]  # edge opposite corner k
    grad_coeff = np.empty((nt, 3, 2))
    grad_coeff[:, :, 0] = -opp[:, :, 1]
    grad_coeff[:, :, 1] = opp[:, :, 0]
    grad_coeff /= (2.0 * area)[:, None, None]

    # interior angles from the two edges leaving each corner
    e_next = p[:, [1, 2, 0], :] - p
    e_prev = p[:, [2, 0, 1], :] - p
    cross = e_next[:, :, 0] * e_prev[:, :, 1] - e_next[:, :, 1] * e_prev[:, :, 0]
    dot = np.einsum("tkc,tkc->tk", e_next, e_prev)
    corner_angle = np.arctan2(np.abs(cross), dot)

    flat = tris.ravel()
    angle_flat = corner_angle.ravel()
    node_angle_sum = np.bincount(flat, weights=angle_flat, minlength=nn)

    edge_len3 = np.sqrt(opp[:, :, 0] ** 2 + opp[:, :, 1] ** 2)
    tri_min_h = 2.0 * area / edge_len3.max(axis=1)
    node_min_height = np.full(nn, np.inf)
    np.minimum.at(node_min_height, flat, np.repeat(tri_min_h, 3))

    # undirected edges with per-endpoint fan weights tan(angle/2)
    pa = tris[:, [1, 2, 0]].ravel()  # endpoints of the edge opposite corner k
    pb = tris[:, [2, 0, 1]].ravel()
    ta = np.tan(0.5 * corner_angle[:, [1, 2, 0]].ravel())
    tb = np.tan(0.5 * corner_angle[:, [2, 0, 1]].ravel())
    swap = pa > pb
    pa2 = np.where(swap, pb, pa)
    pb2 = np.where(swap, pa, pb)
    ta2 = np.where(swap, tb, ta)
    tb2 = np.where(swap, ta, tb)
    ekeys = pa2.astype(np.int64) * nn + pb2
    ukeys, einv = np.unique(ekeys, return_inverse=True)
    ne = len(ukeys)
    edge_nodes = np.column_stack([ukeys // nn, ukeys % nn]).astype(np.int64)
    edge_beta_a = np.bincount(einv, weights=ta2, minlength=ne)
    edge_beta_b = np.bincount(einv, weights=tb2, minlength=ne)
    evec = nodes[edge_nodes[:, 1]] - nodes[edge_nodes[:, 0]]
    edge_len = np.sqrt(evec[:, 0] ** 2 + evec[:, 1] ** 2)
    edge_inv_len = 1.0 / edge_len
    edge_unit = evec * edge_inv_len[:, None]

    # flanking triangles of each edge; boundary edges repeat the only one,
    # so the pairwise mean degenerates to that triangle's value
    eorder = np.argsort(einv, kind="stable")
    ecounts = np.bincount(einv, minlength=ne)
    eptr = np.concatenate([[0], np.cumsum(ecounts)])
    tri_of = eorder // 3
    edge_tri = np.column_stack([tri_of[eptr[:-1]], tri_of[eptr[1:] - 1]])

    # fan response to a linear field, sum of beta * edge direction; zero
    # for full interior fans (the tan(angle/2) weights have linear
    # precision), nonzero on one-sided boundary fans
    node_beta_bias = np.zeros((nn, 2))
    node_beta_bias[:, 0] = np.bincount(
        edge_nodes[:, 0], weights=edge_beta_a * edge_unit[:, 0], minlength=nn
    ) - np.bincount(edge_nodes[:, 1], weights=edge_beta_b * edge_unit[:, 0], minlength=nn)
    node_beta_bias[:, 1] = np.bincount(
        edge_nodes[:, 0], weights=edge_beta_a * edge_unit[:, 1], minlength=nn
    ) - np.bincount(edge_nodes[:, 1], weights=edge_beta_b * edge_unit[:, 1], minlength=nn)

    order = np.argsort(flat, kind="stable")
    node_tri_idx = order // 3
    counts = np.bincount(flat, minlength=nn)
    node_tri_ptr = np.concatenate([[0], np.cumsum(counts)])

    mk = mesh.node_markers
    is_ignition = mk == Marker.IGNITION
    is_free = mk == Marker.FREE
    is_symmetry = mk == Marker.SYMMETRY
    sym_dir = np.zeros((nn, 2))
    for k, line in enumerate(mesh.symmetry_lines):
        pick = is_symmetry & (mesh.node_symline == k)
        sym_dir[pick] = line.direction

    return GeomCache(
        tri_area=area,
        corner_angle=corner_angle,
        grad_coeff=grad_coeff,
        node_angle_sum=node_angle_sum,
        node_min_height=node_min_height,
        edge_nodes=edge_nodes,
        edge_len=edge_len,
        edge_inv_len=edge_inv_len,
        edge_unit=edge_unit,
        edge_beta_a=edge_beta_a,
        edge_beta_b=edge_beta_b,
        edge_tri=edge_tri,
        node_beta_bias=node_beta_bias,
        node_tri_ptr=node_tri_ptr,
        node_tri_idx=node_tri_idx,
        corner_node_flat=flat,
        corner_angle_flat=angle_flat,
        is_ignition=is_ignition,
        is_free=is_free,
        is_symmetry=is_symmetry,
        sym_dir=sym_dir,
        bbox_diag=_bbox_diag(nodes),
    )
