"""Initial combustion contours and the exact burnback oracle.

At uniform unit recession rate every surface point travels along a
straight line, so the arrival time at a query point equals the minimum
Euclidean distance to the initial contour.  Taking the minimum over
pieces trims caustics and inserts rarefaction arcs implicitly, which is
why the oracle here is a distance field and not an offset-curve
constructor; offset contours for display are level sets of this field.

Closed-form perimeter laws for the elementary front features live here
too: a regular convex front gains 2*pi of perimeter per unit burn
depth, a corner feeds an expanding arc, a cusp (propellant wedge
pointing into the port) eats perimeter, and a frontal casing collision
removes a finite front length at one instant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "ContourError",
    "Line",
    "Arc",
    "Contour",
    "FeatureKind",
    "REGULAR",
    "corner",
    "cusp",
    "make_circle",
    "make_slot",
    "make_star",
    "close_sector",
    "distance",
    "feature_rate",
    "collision_drop",
    "CylinderState",
    "cylinder_laws",
    "save_contour",
    "load_contour",
]

# endpoint continuity and closure tolerance, absolute in model units
_TOL = 1e-9
_TWO_PI = 2.0 * math.pi


class ContourError(ValueError):
    """Malformed contour or infeasible construction parameters."""


def _as_points(p) -> np.ndarray:
    pts = np.asarray(p, dtype=np.float64)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ContourError("query points must be (2,) or (n, 2)")
    return pts, single


@dataclass(frozen=True)
class Line:
    """Directed segment; material side is the left of p0 -> p1."""

    p0: tuple[float, float]
    p1: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "p0", (float(self.p0[0]), float(self.p0[1])))
        object.__setattr__(self, "p1", (float(self.p1[0]), float(self.p1[1])))
        if not all(map(math.isfinite, (*self.p0, *self.p1))):
            raise ContourError("non-finite line endpoint")
        if self.length() == 0.0:
            raise ContourError("zero-length line piece")

    def start(self) -> np.ndarray:
        return np.array(self.p0)

    def end(self) -> np.ndarray:
        return np.array(self.p1)

    def length(self) -> float:
        return math.hypot(self.p1[0] - self.p0[0], self.p1[1] - self.p0[1])

    def points(self, n: int) -> np.ndarray:
        t = np.linspace(0.0, 1.0, n + 1)[:, None]
        return (1.0 - t) * self.start() + t * self.end()

    def distance(self, points) -> np.ndarray:
        pts, single = _as_points(points)
        a, b = self.start(), self.end()
        ab = b - a
        t = np.clip(((pts - a) @ ab) / (ab @ ab), 0.0, 1.0)
        d = pts - (a + t[:, None] * ab)
        out = np.sqrt(d[:, 0] ** 2 + d[:, 1] ** 2)
        return float(out[0]) if single else out


@dataclass(frozen=True)
class Arc:
    """Circular arc from angle a0 to a1, traversed in sweep direction.

    sweep is +1 (counter-clockwise) or -1 (clockwise); the swept extent
    is ((a1 - a0) * sweep) mod 2*pi, with 0 meaning a full circle.
    """

    center: tuple[float, float]
    radius: float
    a0: float
    a1: float
    sweep: int

    def __post_init__(self):
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "a1", float(self.a1))
        object.__setattr__(self, "sweep", int(self.sweep))
        if not self.radius > 0.0:
            raise ContourError("arc radius must be positive")
        if self.sweep not in (-1, 1):
            raise ContourError("arc sweep must be +1 or -1")
        if not all(map(math.isfinite, (*self.center, self.a0, self.a1))):
            raise ContourError("non-finite arc parameter")

    def span(self) -> float:
        s = (self.sweep * (self.a1 - self.a0)) % _TWO_PI
        return _TWO_PI if s == 0.0 else s

    def _point(self, angle: float) -> np.ndarray:
        return np.array(
            [
                self.center[0] + self.radius * math.cos(angle),
                self.center[1] + self.radius * math.sin(angle),
            ]
        )

    def start(self) -> np.ndarray:
        return self._point(self.a0)

    def end(self) -> np.ndarray:
        return self._point(self.a1)

    def length(self) -> float:
        return self.radius * self.span()

    def points(self, n: int) -> np.ndarray:
        ang = self.a0 + self.sweep * np.linspace(0.0, self.span(), n + 1)
        return np.column_stack(
            [
                self.center[0] + self.radius * np.cos(ang),
                self.center[1] + self.radius * np.sin(ang),
            ]
        )

    def distance(self, points) -> np.ndarray:
        pts, single = _as_points(points)
        d = pts - np.asarray(self.center)
        rho = np.sqrt(d[:, 0] ** 2 + d[:, 1] ** 2)
        phi = np.arctan2(d[:, 1], d[:, 0])
        rel = (self.sweep * (phi - self.a0)) % _TWO_PI
        radial = np.abs(rho - self.radius)
        ends = np.minimum(
            np.hypot(pts[:, 0] - self.start()[0], pts[:, 1] - self.start()[1]),
            np.hypot(pts[:, 0] - self.end()[0], pts[:, 1] - self.end()[1]),
        )
        out = np.where(rel <= self.span(), radial, ends)
        return float(out[0]) if single else out


@dataclass(frozen=True)
class Contour:
    """Piecewise line/arc curve; material lies left of the traversal.

    Consecutive pieces must share endpoints and a closed contour must
    end where it begins, both within 1e-9 in model units.
    """

    pieces: tuple
    closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if not self.pieces:
            raise ContourError("contour needs at least one piece")
        for k, piece in enumerate(self.pieces):
            if not isinstance(piece, (Line, Arc)):
                raise ContourError(f"piece {k} is not a Line or Arc")
        for k in range(1, len(self.pieces)):
            gap = np.linalg.norm(self.pieces[k].start() - self.pieces[k - 1].end())
            if gap > _TOL:
                raise ContourError(f"pieces {k - 1} and {k} do not share an endpoint (gap {gap:.3g})")
        if self.closed:
            gap = np.linalg.norm(self.pieces[-1].end() - self.pieces[0].start())
            if gap > _TOL:
                raise ContourError(f"closed contour does not close (gap {gap:.3g})")

    def length(self) -> float:
        return sum(piece.length() for piece in self.pieces)

    def distance(self, points):
        pts, single = _as_points(points)
        best = self.pieces[0].distance(pts)
        for piece in self.pieces[1:]:
            best = np.minimum(best, piece.distance(pts))
        return float(best[0]) if single else best

    def sample(self, spacing: float) -> np.ndarray:
        """Points along the contour at most spacing apart, junctions deduplicated."""
        if spacing <= 0.0:
            raise ContourError("sample spacing must be positive")
        chunks = []
        for k, piece in enumerate(self.pieces):
            n = max(1, math.ceil(piece.length() / spacing))
            pts = piece.points(n)
            chunks.append(pts if k == 0 else pts[1:])
        out = np.vstack(chunks)
        if self.closed and len(out) > 1:
            out = out[:-1]
        return out


def distance(point, contour: Contour):
    """Minimum Euclidean distance from point(s) to the contour.

    For a contour receding at uniform unit rate this is the exact
    arrival pseudotime: the minimum over pieces performs caustic
    trimming automatically.
    """
    return contour.distance(point)


# ---------------------------------------------------------------------------
# canonical port shapes


def make_circle(radius: float) -> Contour:
    """Closed circular port of the given radius, material outside."""
    if not radius > 0.0:
        raise ContourError("circle radius must be positive")
    # clockwise traversal keeps the material (left side) outside
    return Contour((Arc((0.0, 0.0), radius, 0.0, -_TWO_PI, -1),), closed=True)


def make_slot(straight_length: float, cap_radius: float) -> Contour:
    """Open slot outline: two parallel walls joined by a semicircular cap.

    The walls run from y = 0 to y = straight_length at x = +-cap_radius
    and the cap tip sits at (0, straight_length + cap_radius).  Used
    with a symmetry line on the x axis this is the half-slot port.
    """
    if not (straight_length > 0.0 and cap_radius > 0.0):
        raise ContourError("slot needs positive straight_length and cap_radius")
    r, top = cap_radius, straight_length
    return Contour(
        (
            Line((-r, 0.0), (-r, top)),
            Arc((0.0, top), r, math.pi, 0.0, -1),
            Line((r, top), (r, 0.0)),
        )
    )


def make_star(n: int, tip_angle: float, eps: float, valley_depth: float, casing_radius: float) -> Contour:
    """Half-sector outline of an n-point star port.

    The sector spans the tip ray (angle pi/n) to the valley ray (angle
    0).  The valley arc has radius valley_depth around the origin over
    a fraction (1 - eps) of the half-sector; the straight flank leaves
    its end at angle tip_angle/2 to the tip ray and stops at the sharp
    propellant apex on that ray.  Traversal runs apex -> valley so the
    propellant stays on the left; reflect and rotate with close_sector
    for the full port contour.
    """
    if n < 3:
        raise ContourError("star needs n >= 3")
    if not 0.0 < tip_angle < math.pi:
        raise ContourError("tip_angle must be in (0, pi)")
    if not 0.0 < eps <= 1.0:
        raise ContourError("eps must be in (0, 1]")
    if not 0.0 < valley_depth < casing_radius:
        raise ContourError("need 0 < valley_depth < casing_radius")
    alpha = math.pi / n
    half = 0.5 * tip_angle
    if half <= eps * alpha:
        raise ContourError(
            "tip crosses the symmetry ray: need tip_angle/2 > eps*pi/n "
            f"(got {half:.6g} <= {eps * alpha:.6g})"
        )
    beta = (1.0 - eps) * alpha
    apex_r = valley_depth * math.sin(half - eps * alpha) / math.sin(half)
    apex = (apex_r * math.cos(alpha), apex_r * math.sin(alpha))
    valley = (valley_depth * math.cos(beta), valley_depth * math.sin(beta))
    flank = Line(apex, valley)
    if eps == 1.0:
        return Contour((flank,))
    return Contour((flank, Arc((0.0, 0.0), valley_depth, beta, 0.0, -1)))


def _mirror_x(piece):
    if isinstance(piece, Line):
        return Line((piece.p1[0], -piece.p1[1]), (piece.p0[0], -piece.p0[1]))
    return Arc((piece.center[0], -piece.center[1]), piece.radius, -piece.a1, -piece.a0, piece.sweep)


def _rotate(piece, angle: float):
    c, s = math.cos(angle), math.sin(angle)

    def rot(p):
        return (c * p[0] - s * p[1], s * p[0] + c * p[1])

    if isinstance(piece, Line):
        return Line(rot(piece.p0), rot(piece.p1))
    return Arc(rot(piece.center), piece.radius, piece.a0 + angle, piece.a1 + angle, piece.sweep)


def close_sector(half: Contour, n: int) -> Contour:
    """Full closed contour from a half-sector outline.

    Expects the outline to start on the tip ray (angle pi/n) and end on
    the valley ray (angle 0), as make_star emits.  The outline is
    mirrored across the valley ray and the doubled sector is rotated n
    times; endpoint matching is inherited from the construction.
    """
    if n < 1:
        raise ContourError("close_sector needs n >= 1")
    # mirror across y = 0 reverses traversal, so append mirrors reversed
    doubled = list(half.pieces) + [_mirror_x(p) for p in reversed(half.pieces)]
    pieces = []
    for k in range(n):
        ang = -2.0 * math.pi * k / n
        pieces.extend(_rotate(p, ang) for p in doubled)
    return Contour(tuple(pieces), closed=True)


# ---------------------------------------------------------------------------
# perimeter evolution laws


@dataclass(frozen=True)
class FeatureKind:
    """Front feature: "regular", or "corner"/"cusp" with a turn angle."""

    kind: str
    turn: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "turn", float(self.turn))
        if self.kind not in ("regular", "corner", "cusp"):
            raise ContourError(f"unknown feature kind {self.kind!r}")
        if self.kind == "regular":
            if self.turn != 0.0:
                raise ContourError("regular features carry no turn angle")
        elif not 0.0 < self.turn < math.pi:
            raise ContourError("corner and cusp turn angles must be in (0, pi)")


REGULAR = FeatureKind("regular")


def corner(turn: float) -> FeatureKind:
    return FeatureKind("corner", turn)


def cusp(turn: float) -> FeatureKind:
    return FeatureKind("cusp", turn)


def feature_rate(kind: FeatureKind) -> float:
    """Perimeter growth per unit burn depth contributed by one feature.

    A regular closed convex traversal gains 2*pi; a corner feeds an
    expanding arc of its turn angle; a cusp consumes the two flanks it
    joins, -2*tan(turn/2), diverging as the turn approaches pi.
    """
    if kind.kind == "regular":
        return _TWO_PI
    if kind.kind == "corner":
        return kind.turn
    return -2.0 * math.tan(0.5 * kind.turn)


def collision_drop(front_length: float, semi_thickness: float, y: float) -> float:
    """Perimeter change when a straight front hits a frontal wall.

    Nothing happens before the burn depth reaches the web semi
    thickness; at and beyond it the whole front length vanishes at
    once.
    """
    return 0.0 if y < semi_thickness else -front_length


class CylinderState(NamedTuple):
    P_b: float
    A_p: float


def cylinder_laws(P0: float, Ap0: float, y: float) -> CylinderState:
    """Perimeter and port area of a regular convex section at burn depth y.

    P_b = P0 + 2*pi*y independently of the section shape; A_p is its
    exact integral.  Valid until a concave radius of curvature is
    exhausted, which is the caller's lookout.
    """
    return CylinderState(P0 + _TWO_PI * y, Ap0 + P0 * y + math.pi * y * y)


# ---------------------------------------------------------------------------
# text serialization: one piece per line


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def save_contour(contour: Contour) -> str:
    """Line-oriented text form: `L x0 y0 x1 y1` or `A cx cy r a0 a1 s`."""
    rows = []
    for piece in contour.pieces:
        if isinstance(piece, Line):
            rows.append(" ".join(["L", *map(_fmt, (*piece.p0, *piece.p1))]))
        else:
            rows.append(
                " ".join(
                    ["A", *map(_fmt, (*piece.center, piece.radius, piece.a0, piece.a1)), str(piece.sweep)]
                )
            )
    return "\n".join(rows) + "\n"


def load_contour(text: str) -> Contour:
    """Parse the text form; closure is inferred from endpoint coincidence."""
    pieces = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        row = raw.split("#", 1)[0].strip()
        if not row:
            continue
        tag, *vals = row.split()
        try:
            nums = [float(v) for v in vals]
        except ValueError as exc:
            raise ContourError(f"line {ln}: {exc}") from None
        if tag == "L" and len(nums) == 4:
            pieces.append(Line((nums[0], nums[1]), (nums[2], nums[3])))
        elif tag == "A" and len(nums) == 6:
            pieces.append(Arc((nums[0], nums[1]), nums[2], nums[3], nums[4], int(nums[5])))
        else:
            raise ContourError(f"line {ln}: expected `L x0 y0 x1 y1` or `A cx cy r a0 a1 s`")
    if not pieces:
        raise ContourError("empty contour document")
    closed = len(pieces) > 0 and bool(
        np.linalg.norm(pieces[-1].end() - pieces[0].start()) <= _TOL
        and (len(pieces) > 1 or isinstance(pieces[0], Arc))
    )
    return Contour(tuple(pieces), closed=closed)
