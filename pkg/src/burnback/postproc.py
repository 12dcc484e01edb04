"""Engineering outputs from an arrival-time field.

Isochrones are extracted by marching triangles on the linear
interpolant, port areas by exact clipping of each triangle against the
level line, and perimeters as plain segment-length sums, so that
d(port_area)/dtau and perimeter agree to the same interpolant and the
burn curves need no smoothing.  CSV and SVG emitters keep fixed headers
and structure for downstream tooling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .contour import Arc, Contour, Line
from .eikonal import ArrivalField
from .mesh import Mesh

__all__ = [
    "BurnCurves",
    "ErrorField",
    "isocontour",
    "isocontour_segments",
    "perimeter",
    "port_area",
    "burn_curves",
    "error_field",
    "emit_csv",
    "emit_svg",
]

# nodes sitting exactly on a level are nudged above it by this fraction
# of the field range, so every triangle has an even crossing count
_TIE_NUDGE = 1e-12


@dataclass(frozen=True)
class BurnCurves:
    """Burn history on a pseudotime grid.

    A_eq is the rate-weighted equivalent perimeter P_1 + f*P_2 (equal
    to P_b for a monopropellant); A_b = P_b * grain_length when a
    grain length is supplied.
    """

    tau: np.ndarray
    P_b: np.ndarray
    A_p: np.ndarray
    A_eq: np.ndarray
    A_b: np.ndarray | None = None

    def __post_init__(self):
        if np.any(np.diff(self.tau) <= 0.0):
            raise ValueError("tau grid must be strictly increasing")
        if np.any(self.P_b < 0.0):
            raise ValueError("negative perimeter")
        scale = float(np.abs(self.A_p).max()) if len(self.A_p) else 0.0
        if np.any(np.diff(self.A_p) < -1e-12 * max(scale, 1.0)):
            raise ValueError("port area must be non-decreasing")


@dataclass(frozen=True)
class ErrorField:
    """Per-node error normalized by the maximum oracle depth."""

    values: np.ndarray
    max_abs: float
    mean_abs: float


def _nudged(s: np.ndarray, tau: float) -> np.ndarray:
    v = np.asarray(s, dtype=np.float64) - float(tau)
    rng = float(s.max() - s.min()) or 1.0
    v[v == 0.0] = _TIE_NUDGE * rng
    return v


def isocontour_segments(mesh: Mesh, s: np.ndarray, tau: float):
    """Level-line segments with their host triangles.

    Returns (points, seg_edges, seg_tri): crossing coordinates indexed
    by unique-edge id, the (n, 2) edge-id pairs of each segment, and
    the segment's host triangle.  Crossings are computed once per mesh
    edge, so segments in adjacent triangles share endpoints exactly.
    """
    v = _nudged(s, tau)
    tri = mesh.triangles
    nt = len(tri)
    pairs = np.sort(
        np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]]), axis=1
    )
    edges, einv = np.unique(pairs, axis=0, return_inverse=True)
    tri_edge = einv.reshape(3, nt).T

    va, vb = v[edges[:, 0]], v[edges[:, 1]]
    crossing = va * vb < 0.0
    t = np.where(crossing, va / np.where(crossing, va - vb, 1.0), 0.0)
    pa, pb = mesh.nodes[edges[:, 0]], mesh.nodes[edges[:, 1]]
    points = pa + t[:, None] * (pb - pa)

    cmask = crossing[tri_edge]
    count = cmask.sum(axis=1)
    if np.any((count != 0) & (count != 2)):
        raise RuntimeError("odd crossing count; tie nudge failed")
    hosts = np.nonzero(count == 2)[0]
    # order True columns first; the first two are the crossed edges
    order = np.argsort(~cmask[hosts], axis=1, kind="stable")
    seg_edges = np.column_stack(
        [tri_edge[hosts, order[:, 0]], tri_edge[hosts, order[:, 1]]]
    )
    return points, seg_edges, hosts


def isocontour(mesh: Mesh, s: np.ndarray, tau: float) -> list[np.ndarray]:
    """Chained isochrone polylines at level tau (possibly empty)."""
    points, seg_edges, _ = isocontour_segments(mesh, s, tau)
    nseg = len(seg_edges)
    if nseg == 0:
        return []

    incident: dict[int, list[int]] = {}
    for k in range(nseg):
        for e in seg_edges[k]:
            incident.setdefault(int(e), []).append(k)

    used = np.zeros(nseg, dtype=bool)

    def walk(seg: int, start_edge: int) -> list[int]:
        chain = [start_edge]
        cur_seg, cur_edge = seg, start_edge
        while True:
            used[cur_seg] = True
            a, b = (int(x) for x in seg_edges[cur_seg])
            nxt_edge = b if a == cur_edge else a
            chain.append(nxt_edge)
            candidates = [k for k in incident[nxt_edge] if not used[k]]
            if not candidates:
                return chain
            cur_seg, cur_edge = candidates[0], nxt_edge

    polylines = []
    # every crossing touches at most two segments, so chains are simple:
    # trace open ones from their degree-1 ends first, then closed loops
    for passno in range(2):
        for k in range(nseg):
            if used[k]:
                continue
            a, b = (int(x) for x in seg_edges[k])
            if passno == 0 and len(incident[a]) != 1 and len(incident[b]) != 1:
                continue
            start = a if passno == 1 or len(incident[a]) == 1 else b
            polylines.append(points[np.asarray(walk(k, start))])
    return polylines


def perimeter(mesh: Mesh, s: np.ndarray, tau: float) -> float:
    """Total isochrone length at level tau."""
    points, seg_edges, _ = isocontour_segments(mesh, s, tau)
    if len(seg_edges) == 0:
        return 0.0
    d = points[seg_edges[:, 0]] - points[seg_edges[:, 1]]
    return float(np.sqrt(d[:, 0] ** 2 + d[:, 1] ** 2).sum())


def port_area(mesh: Mesh, s: np.ndarray, tau: float) -> float:
    """Exact area of the burned region {s <= tau} under linear interpolation."""
    v = _nudged(s, tau)
    tri = mesh.triangles
    p = mesh.nodes
    e1 = p[tri[:, 1]] - p[tri[:, 0]]
    e2 = p[tri[:, 2]] - p[tri[:, 0]]
    areas = 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    vt = v[tri]
    below = vt < 0.0
    nbelow = below.sum(axis=1)
    out = np.zeros(len(tri))
    out[nbelow == 3] = areas[nbelow == 3]

    def lone(mask, flip):
        # fraction cut off around the single vertex on its own side
        rows = np.nonzero(mask)[0]
        if len(rows) == 0:
            return
        side = below[rows] if flip else ~below[rows]
        j = np.argmax(side, axis=1)
        va = vt[rows, j]
        vb = vt[rows, (j + 1) % 3]
        vc = vt[rows, (j + 2) % 3]
        frac = (va / (va - vb)) * (va / (va - vc))
        out[rows] = areas[rows] * (frac if flip else 1.0 - frac)

    lone(nbelow == 1, True)
    lone(nbelow == 2, False)
    return float(out.sum())


def burn_curves(
    mesh: Mesh,
    s: np.ndarray,
    rate_labels,
    f: float,
    tau_grid,
    grain_length: float | None = None,
) -> BurnCurves:
    """Measure P_b, A_p and the equivalent area over a pseudotime grid.

    rate_labels assigns each node to propellant 1 or 2 (all ones for a
    monopropellant); a triangle belongs to the propellant owning the
    majority of its nodes, and each isochrone segment reports to its
    host triangle's propellant.  A_eq = P_1 + f * P_2.
    """
    tau_grid = np.asarray(tau_grid, dtype=np.float64)
    labels = np.asarray(rate_labels, dtype=np.int64)
    if labels.shape != (mesh.n_nodes,):
        raise ValueError("rate_labels must give one label per node")
    if not np.all((labels == 1) | (labels == 2)):
        raise ValueError("rate_labels must be 1 or 2")
    if f < 1.0:
        raise ValueError("rate ratio f must be >= 1")
    tri_label = np.where((labels[mesh.triangles] == 1).sum(axis=1) >= 2, 1, 2)

    P_b = np.empty(len(tau_grid))
    A_p = np.empty(len(tau_grid))
    A_eq = np.empty(len(tau_grid))
    for k, tau in enumerate(tau_grid):
        points, seg_edges, hosts = isocontour_segments(mesh, s, float(tau))
        if len(seg_edges):
            d = points[seg_edges[:, 0]] - points[seg_edges[:, 1]]
            seg_len = np.sqrt(d[:, 0] ** 2 + d[:, 1] ** 2)
            own1 = tri_label[hosts] == 1
            P1 = float(seg_len[own1].sum())
            P2 = float(seg_len[~own1].sum())
        else:
            P1 = P2 = 0.0
        P_b[k] = P1 + P2
        A_eq[k] = P1 + f * P2
        A_p[k] = port_area(mesh, s, float(tau))

    A_b = P_b * grain_length if grain_length is not None else None
    return BurnCurves(tau=tau_grid, P_b=P_b, A_p=A_p, A_eq=A_eq, A_b=A_b)


def error_field(mesh: Mesh, s: np.ndarray, oracle) -> ErrorField:
    """Node error against an oracle, normalized by the peak oracle depth.

    The oracle may be a Contour (exact distance), a callable of (x, y),
    or a precomputed per-node array.
    """
    if isinstance(oracle, Contour):
        exact = oracle.distance(mesh.nodes)
    elif callable(oracle):
        exact = np.asarray(oracle(mesh.nodes[:, 0], mesh.nodes[:, 1]), dtype=np.float64)
    else:
        exact = np.asarray(oracle, dtype=np.float64)
    if exact.shape != (mesh.n_nodes,):
        raise ValueError("oracle values must match the node count")
    depth = float(np.abs(exact).max())
    if depth == 0.0:
        raise ValueError("oracle field is identically zero")
    e = (np.asarray(s, dtype=np.float64) - exact) / depth
    if not np.all(np.isfinite(e)):
        raise ValueError("non-finite error value")
    return ErrorField(values=e, max_abs=float(np.abs(e).max()), mean_abs=float(np.abs(e).mean()))


# ---------------------------------------------------------------------------
# emitters


def _g(x: float) -> str:
    return f"{x:.12g}"


def emit_csv(obj, mesh: Mesh | None = None, err: np.ndarray | None = None) -> str:
    """Fixed-header CSV text for the three artifact kinds.

    BurnCurves -> `tau,P_b,A_p,A_eq[,A_b]`; an ArrivalField ->
    residual history `step,dt,max_residual`; a per-node array together
    with mesh -> `node,x,y,s[,err]`.
    """
    if isinstance(obj, BurnCurves):
        cols = [obj.tau, obj.P_b, obj.A_p, obj.A_eq]
        head = "tau,P_b,A_p,A_eq"
        if obj.A_b is not None:
            cols.append(obj.A_b)
            head += ",A_b"
        rows = [head]
        for vals in zip(*cols):
            rows.append(",".join(_g(v) for v in vals))
        return "\n".join(rows) + "\n"
    if isinstance(obj, ArrivalField):
        rows = ["step,dt,max_residual"]
        for k, (dt, r) in enumerate(zip(obj.dt_history, obj.residual_history), start=1):
            rows.append(f"{k},{_g(dt)},{_g(r)}")
        return "\n".join(rows) + "\n"
    s = np.asarray(obj, dtype=np.float64)
    if mesh is None or s.shape != (mesh.n_nodes,):
        raise ValueError("field CSV needs a mesh and one value per node")
    rows = ["node,x,y,s" + (",err" if err is not None else "")]
    for i in range(mesh.n_nodes):
        row = f"{i},{_g(mesh.nodes[i, 0])},{_g(mesh.nodes[i, 1])},{_g(s[i])}"
        if err is not None:
            row += f",{_g(err[i])}"
        rows.append(row)
    return "\n".join(rows) + "\n"


def _svg_path_of_contour(contour: Contour) -> str:
    cmds = []
    for k, piece in enumerate(contour.pieces):
        x0, y0 = piece.start()
        if k == 0:
            cmds.append(f"M {_g(x0)} {_g(-y0)}")
        if isinstance(piece, Line):
            cmds.append(f"L {_g(piece.p1[0])} {_g(-piece.p1[1])}")
        else:
            # split so no single SVG arc spans more than a half turn
            span = piece.span()
            nsub = max(1, math.ceil(span / math.pi - 1e-12))
            sweep_flag = 0 if piece.sweep > 0 else 1
            for j in range(1, nsub + 1):
                ang = piece.a0 + piece.sweep * span * j / nsub
                x = piece.center[0] + piece.radius * math.cos(ang)
                y = piece.center[1] + piece.radius * math.sin(ang)
                r = _g(piece.radius)
                cmds.append(f"A {r} {r} 0 0 {sweep_flag} {_g(x)} {_g(-y)}")
    if contour.closed:
        cmds.append("Z")
    return " ".join(cmds)


def emit_svg(
    mesh: Mesh | None,
    s: np.ndarray | None = None,
    levels=(),
    contour: Contour | None = None,
    show_mesh: bool = True,
) -> str:
    """SVG document with one group of isochrone polylines per level.

    Coordinates are model units inside a declared viewBox; the y axis
    is flipped so the drawing matches the math orientation.  The mesh
    edges go underneath as a single path when requested; a contour, if
    given, is stroked on top.
    """
    if mesh is not None:
        lo = mesh.nodes.min(axis=0)
        hi = mesh.nodes.max(axis=0)
    elif contour is not None:
        pts = contour.sample(contour.length() / 512.0)
        lo, hi = pts.min(axis=0), pts.max(axis=0)
    else:
        raise ValueError("emit_svg needs a mesh or a contour")
    pad = 0.03 * float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-30))
    vb = (lo[0] - pad, -(hi[1] + pad), hi[0] - lo[0] + 2 * pad, hi[1] - lo[1] + 2 * pad)
    stroke = 0.15 * pad

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_g(vb[0])} {_g(vb[1])} {_g(vb[2])} {_g(vb[3])}">',
    ]
    if mesh is not None and show_mesh:
        pairs = np.sort(
            np.concatenate(
                [mesh.triangles[:, [0, 1]], mesh.triangles[:, [1, 2]], mesh.triangles[:, [2, 0]]]
            ),
            axis=1,
        )
        edges = np.unique(pairs, axis=0)
        frags = []
        for a, b in edges:
            frags.append(
                f"M {_g(mesh.nodes[a, 0])} {_g(-mesh.nodes[a, 1])} "
                f"L {_g(mesh.nodes[b, 0])} {_g(-mesh.nodes[b, 1])}"
            )
        out.append(
            f'<path d="{" ".join(frags)}" fill="none" stroke="#cccccc" stroke-width="{_g(0.5 * stroke)}"/>'
        )
    for tau in levels:
        if mesh is None or s is None:
            raise ValueError("isochrone levels need a mesh and a field")
        out.append(f'<g class="isochrone" data-tau="{_g(float(tau))}">')
        for poly in isocontour(mesh, s, float(tau)):
            pts = " ".join(f"{_g(x)},{_g(-y)}" for x, y in poly)
            out.append(
                f'<polyline points="{pts}" fill="none" stroke="#1f77b4" stroke-width="{_g(stroke)}"/>'
            )
        out.append("</g>")
    if contour is not None:
        out.append(
            f'<path d="{_svg_path_of_contour(contour)}" fill="none" stroke="#d62728" stroke-width="{_g(stroke)}"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
