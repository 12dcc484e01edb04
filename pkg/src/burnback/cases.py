"""Benchmark grain configurations with exact arrival-time oracles.

Each builder returns a Case bundling a mesh, node recession rates and,
where the geometry admits one, the closed-form arrival field used to
measure solver error: planar for the rectangle, radial for the annulus
and the circle port, distance to the port contour for the slot and the
star, and a two-region composite for the bipropellant star whose slow
region burns as circles about the chamber center.
"""

from dataclasses import dataclass

import numpy as np

from .contour import Arc, Contour, Line, close_sector, make_star
from .eikonal import SolverConfig
from .mesh import Marker, Mesh, gen_coons, gen_rect, merge_meshes
from .star import bistar_design, bistar_interface, neutral_tip_angle


@dataclass(frozen=True)
class Case:
    """A meshed grain plus everything a benchmark run needs.

    exact is None when no closed form exists (scheme smoke cases).
    depth is the normalization length for relative errors, the largest
    penetration the front achieves.  labels mark propellant 1/2 nodes
    for equivalent-area curves; rate_ratio is their speed ratio.
    config overrides solver defaults where a geometry needs them.
    """

    name: str
    mesh: Mesh
    rate: float | np.ndarray
    exact: np.ndarray | None = None
    depth: float | None = None
    labels: np.ndarray | None = None
    rate_ratio: float = 1.0
    port: Contour | None = None
    config: SolverConfig | None = None


def _arc_points(center, radius: float, a0: float, a1: float, n: int) -> np.ndarray:
    t = np.linspace(a0, a1, n + 1)
    return np.column_stack(
        [center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)]
    )


def _radius(mesh: Mesh) -> np.ndarray:
    return np.sqrt(mesh.nodes[:, 0] ** 2 + mesh.nodes[:, 1] ** 2)


def rect_case(nx: int = 60, ny: int = 30, width: float = 2.0, height: float = 1.0) -> Case:
    """Planar front: ignition on the left edge, outflow on the right."""
    mesh = gen_rect(
        nx,
        ny,
        width,
        height,
        markers={
            "left": Marker.IGNITION,
            "right": Marker.FREE,
            "bottom": Marker.SYMMETRY,
            "top": Marker.SYMMETRY,
        },
    )
    return Case("rect", mesh, 1.0, mesh.nodes[:, 0].copy(), depth=width)


def annulus_case(
    nr: int = 56, nt: int = 84, r_inner: float = 1.0, r_outer: float = 2.0
) -> Case:
    """Radial front on a quarter annulus bounded by two symmetry rays."""
    inner = _arc_points((0.0, 0.0), r_inner, 0.0, 0.5 * np.pi, 512)
    outer = _arc_points((0.0, 0.0), r_outer, 0.0, 0.5 * np.pi, 512)
    mesh = gen_coons(inner, outer, nr, nt)
    return Case("annulus", mesh, 1.0, _radius(mesh) - r_inner, depth=r_outer - r_inner)


def circle_case(
    nr: int = 28, nt: int = 42, r_inner: float = 1.0, r_outer: float = 2.0
) -> Case:
    """Full annulus welded from four rotated quarter patches.

    The seams are interior, so the grain has no symmetry boundary at
    all; perimeter and port-area growth laws can be checked against the
    whole circumference.
    """
    inner = _arc_points((0.0, 0.0), r_inner, 0.0, 0.5 * np.pi, 512)
    outer = _arc_points((0.0, 0.0), r_outer, 0.0, 0.5 * np.pi, 512)
    quarter = gen_coons(
        inner,
        outer,
        nr,
        nt,
        markers={"side0": Marker.INTERIOR, "side1": Marker.INTERIOR},
    )
    # Exact 90-degree rotations keep seam coordinates bitwise mirrored.
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    parts, nodes = [quarter], quarter.nodes
    for _ in range(3):
        nodes = nodes @ rot.T
        parts.append(
            Mesh(
                nodes,
                quarter.triangles.copy(),
                quarter.node_markers.copy(),
                [],
                np.full(quarter.n_nodes, -1, dtype=np.int64),
            )
        )
    mesh = merge_meshes(parts)
    return Case("circle", mesh, 1.0, _radius(mesh) - r_inner, depth=r_outer - r_inner)


# Slot block per level: transverse count, then longitudinal counts of the
# cap patch and the wall patch.  Sized to land near 2.5e3 and 1e4 nodes.
_SLOT_GRIDS = {"coarse": (28, 19, 66), "fine": (57, 39, 134)}


def slot_case(level: str = "coarse") -> Case:
    """Half of a rounded axial slot in a rectangular propellant block.

    The slot of half-width RF runs up the x = 0 mirror plane to height L
    and ends in a cap of the same radius; the block extends to W by H.
    Two patches meet on the chord from the cap tangent point (RF, L) to
    the top right corner so the cap-to-wall junction is a mesh vertex.
    """
    try:
        nv, n_cap, n_wall = _SLOT_GRIDS[level]
    except KeyError:
        raise ValueError(f"slot level must be one of {sorted(_SLOT_GRIDS)}") from None
    rf, length, w, h = 0.25, 2.0, 1.25, 3.25
    cap = _arc_points((0.0, length), rf, 0.5 * np.pi, 0.0, 256)
    top = np.array([[0.0, h], [w, h]])
    patch_a = gen_coons(
        cap, top, nv, n_cap, markers={"outer": Marker.FREE, "side1": Marker.INTERIOR}
    )
    wall = np.array([[rf, length], [rf, 0.0]])
    right = np.array([[w, h], [w, 0.0]])
    patch_b = gen_coons(
        wall, right, nv, n_wall, markers={"outer": Marker.FREE, "side0": Marker.INTERIOR}
    )
    mesh = merge_meshes([patch_a, patch_b])
    port = Contour(
        (Arc((0.0, length), rf, 0.5 * np.pi, 0.0, -1), Line((rf, length), (rf, 0.0)))
    )
    exact = port.distance(mesh.nodes)
    depth = np.hypot(w, h - length) - rf  # farthest corner from the cap center
    return Case(f"slot-{level}", mesh, 1.0, exact, depth=depth, port=port)


def star_case(
    n: int = 5,
    eps: float = 0.6,
    valley_depth: float = 0.5,
    casing_radius: float = 1.0,
    n_transverse: int = 80,
    n_flank: int = 70,
    n_valley: int = 50,
) -> Case:
    """Neutral star half-sector meshed flank-to-casing and valley-to-casing.

    The tip semi-angle comes from the neutrality condition, so measured
    perimeter should stay flat until the front reaches the casing.  The
    patches meet on a chord from the flank-valley junction to the middle
    of the casing span: the junction stays a mesh vertex, and the seam
    leaves the flank steeply enough that neither loft runs parallel to
    its inner curve, which would squeeze cell heights and the time step.
    """
    theta = 2.0 * neutral_tip_angle(n)
    half = make_star(n, theta, eps, valley_depth, casing_radius)
    flank, valley_arc = half.pieces
    alpha, beta = np.pi / n, (1.0 - eps) * (np.pi / n)
    seam = 0.5 * (alpha + beta)
    patch_a = gen_coons(
        flank.points(512),
        _arc_points((0.0, 0.0), casing_radius, alpha, seam, 512),
        n_transverse,
        n_flank,
        markers={"side1": Marker.INTERIOR},
    )
    patch_b = gen_coons(
        valley_arc.points(512),
        _arc_points((0.0, 0.0), casing_radius, seam, 0.0, 512),
        n_transverse,
        n_valley,
        markers={"side0": Marker.INTERIOR},
    )
    mesh = merge_meshes([patch_a, patch_b])
    port = close_sector(half, n)
    exact = port.distance(mesh.nodes)
    # Half-strength dissipation: the tip-ray ridge smears with eps and
    # the default setting leaves too much of it at this node budget.
    config = SolverConfig(dissipation_scale=0.125)
    return Case(
        "star", mesh, 1.0, exact, depth=float(exact.max()), port=port, config=config
    )


def bistar_case(
    n: int = 4,
    casing_radius: float = 1.0,
    fillet_radius: float = 0.1,
    slot_depth: float = 0.5,
    n_transverse: int = 56,
    n_wall: int = 44,
    n_cap: int = 28,
) -> Case:
    """Sliverless two-propellant slotted star, one half-sector.

    The port is a straight slot of half-width fillet_radius reaching
    depth slot_depth, capped by a fillet about its tip center.  A fast
    propellant fills the lens between the slot surface and the designed
    interface; the slow propellant outside the lens burns as circles
    about the chamber center, so the whole casing is reached at the web
    omega and no sliver remains.  Exact arrival: distance to the slot
    over f inside the lens, radial distance to the slot tip circle
    outside it.  Two patches meet on the chord from the wall-fillet
    junction to the casing at two thirds of the sector angle, keeping
    the junction a mesh vertex and both lofts steep against their inner
    curves.
    """
    design = bistar_design(n, casing_radius, fillet_radius, slot_depth)
    alpha = np.pi / n
    seam = 2.0 * alpha / 3.0
    tip = np.array([slot_depth, 0.0])
    wall0 = np.array([fillet_radius / np.tan(alpha), fillet_radius])
    wall1 = np.array([slot_depth, fillet_radius])
    patch_w = gen_coons(
        np.linspace(wall0, wall1, 513),
        _arc_points((0.0, 0.0), casing_radius, alpha, seam, 512),
        n_transverse,
        n_wall,
        markers={"side1": Marker.INTERIOR},
    )
    patch_c = gen_coons(
        _arc_points(tip, fillet_radius, 0.5 * np.pi, 0.0, 256),
        _arc_points((0.0, 0.0), casing_radius, seam, 0.0, 512),
        n_transverse,
        n_cap,
        markers={"side0": Marker.INTERIOR},
    )
    mesh = merge_meshes([patch_w, patch_c])

    port = Contour(
        (
            Line(tuple(wall0), tuple(wall1)),
            Arc(tuple(tip), fillet_radius, 0.5 * np.pi, 0.0, -1),
        )
    )
    # The interface radius at each polar angle decides the propellant.
    face = bistar_interface(design, 4096)
    r = _radius(mesh)
    gamma = np.arctan2(mesh.nodes[:, 1], mesh.nodes[:, 0])
    fast = r < np.interp(gamma, face.theta1, face.r1)
    rate = np.where(fast, design.f, 1.0)
    exact = np.where(
        fast, port.distance(mesh.nodes) / design.f, r - (fillet_radius + slot_depth)
    )
    labels = np.where(fast, 2, 1)
    return Case(
        "bistar",
        mesh,
        rate,
        exact,
        depth=design.omega,
        labels=labels,
        rate_ratio=design.f,
        port=port,
    )


def scheme_case(
    feature: str = "corner",
    tilt_deg: float = 5.0,
    fast_rate: float = 3.0,
    nx: int = 48,
    ny: int = 24,
) -> Case:
    """Rate-jump interface through a front feature, for smoke runs.

    The ignition boundary of a 2 x 1 block kinks at its midpoint: a
    corner dips away from the propellant, a cusp juts into it.  The
    material interface is a line through the kink tilted tilt_deg from
    vertical, rate 1 on its left and fast_rate on its right.  No exact
    field; these runs only need to converge and draw sane isochrones.
    """
    if feature not in ("corner", "cusp"):
        raise ValueError("feature must be 'corner' or 'cusp'")
    kink = np.array([1.0, 0.15 if feature == "cusp" else -0.15])
    inner = np.array([[0.0, 0.0], kink, [2.0, 0.0]])
    outer = np.array([[0.0, 1.0], [2.0, 1.0]])
    mesh = gen_coons(
        inner, outer, ny, nx, markers={"side0": Marker.FREE, "side1": Marker.FREE}
    )
    tilt = np.radians(tilt_deg)
    u = np.array([np.sin(tilt), np.cos(tilt)])
    rel = mesh.nodes - kink
    left = u[0] * rel[:, 1] - u[1] * rel[:, 0] > 0.0
    rate = np.where(left, 1.0, fast_rate)
    labels = np.where(left, 1, 2)
    name = f"scheme-{feature}{'+' if tilt_deg >= 0 else ''}{tilt_deg:g}"
    return Case(name, mesh, rate, None, depth=1.0, labels=labels, rate_ratio=fast_rate)


CASE_BUILDERS = {
    "rect": rect_case,
    "annulus": annulus_case,
    "circle": circle_case,
    "slot-coarse": lambda: slot_case("coarse"),
    "slot-fine": lambda: slot_case("fine"),
    "star": star_case,
    "bistar": bistar_case,
    "scheme-corner+5": lambda: scheme_case("corner", 5.0),
    "scheme-corner-15": lambda: scheme_case("corner", -15.0),
    "scheme-cusp-15": lambda: scheme_case("cusp", -15.0),
}


def build_case(name: str) -> Case:
    """Look up a canonical case by registry name."""
    try:
        builder = CASE_BUILDERS[name]
    except KeyError:
        raise ValueError(
            f"unknown case {name!r}; choose from {', '.join(sorted(CASE_BUILDERS))}"
        ) from None
    return builder()
