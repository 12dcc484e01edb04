"""Closed-form grain design: neutral stars and sliverless bipropellant stars.

A star tip angle can be chosen so the perimeter lost at the tip cusps
exactly cancels the growth of the regular arcs and valley corners; the
residual of that balance and its root live here.  The bipropellant
variant splits the sector into a slow propellant around the casing and
a fast one in the valley slot, with the rate ratio f picked so both
fronts reach the casing at the same instant, leaving no sliver.  The
propellant-propellant interface then follows from intersecting the two
cylindrical fronts at equal pseudotime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .contour import close_sector, make_star

__all__ = [
    "StarDesign",
    "BiStarDesign",
    "InterfacePolyline",
    "neutral_residual",
    "neutral_tip_angle",
    "star_metrics",
    "bistar_design",
    "bistar_interface",
    "equilibrium_angle",
    "equilibrium_ratio",
]


@dataclass(frozen=True)
class StarDesign:
    """Neutral-star summary; the fractions are numerically derived."""

    n: int
    tip_semi_angle: float
    web_fraction: float | None = None
    volumetric_fraction: float | None = None

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("star design needs n >= 3")
        if not 0.0 < self.tip_semi_angle < 0.5 * math.pi:
            raise ValueError("tip semi-angle must be in (0, pi/2)")


@dataclass(frozen=True)
class BiStarDesign:
    n: int
    r_c: float
    r_f: float
    d: float
    omega: float
    f: float

    def __post_init__(self):
        if abs(self.r_c - (self.r_f + self.d + self.omega)) > 1e-12 * max(1.0, self.r_c):
            raise ValueError("radii must satisfy r_c = r_f + d + omega")


@dataclass(frozen=True)
class InterfacePolyline:
    """Sliverless interface sampled by slow-propellant burn depth y."""

    y: np.ndarray
    r1: np.ndarray
    theta1: np.ndarray
    r2: np.ndarray
    theta2: np.ndarray


def neutral_residual(n: int, theta: float) -> float:
    """Perimeter-slope residual of an n-tip star with tip angle theta.

    Sums the normal rotation collected along one half-sector of the
    front: the sector turn pi/n, the complement of the tip semi-angle,
    and the cusp loss cot(theta/2).  The full perimeter slope is
    2*n times this value, so a zero residual is a neutral star.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if not 0.0 < theta < math.pi:
        raise ValueError("theta must be in (0, pi)")
    half = 0.5 * theta
    return math.pi / n + (math.pi - theta) / 2.0 - 1.0 / math.tan(half)


def neutral_tip_angle(n: int) -> float:
    """Tip semi-angle theta/2 making an n-tip star neutral.

    The residual is monotone in theta, so the root is unique; it is
    bracketed, solved, and Newton-polished to |residual| < 1e-12.
    Stars with fewer than 4 tips are rejected: their formal root lies
    where the construction self-intersects.
    """
    if n < 4:
        raise ValueError("neutral star needs n >= 4")
    theta = brentq(lambda t: neutral_residual(n, t), 1e-6, math.pi - 1e-12, xtol=1e-14)
    for _ in range(3):
        # dR/dtheta = cot(theta/2)^2 / 2, positive away from theta = pi
        slope = 0.5 / math.tan(0.5 * theta) ** 2
        if slope == 0.0:
            break
        theta -= neutral_residual(n, theta) / slope
    if abs(neutral_residual(n, theta)) >= 1e-12:
        raise ValueError(f"neutrality root did not polish for n = {n}")
    return 0.5 * theta


def star_metrics(
    n: int,
    tip_semi_angle: float,
    eps: float,
    valley_depth: float,
    casing_radius: float,
    web_samples: int = 4096,
) -> StarDesign:
    """Derived fractions of a concrete star: web over casing diameter
    and propellant volume over chamber volume.

    The web is measured with the exact oracle (closest approach of the
    casing circle to the port contour); the port area is exact (valley
    circular sector plus the flank triangle, per half-sector).
    """
    half_sector = make_star(n, 2.0 * tip_semi_angle, eps, valley_depth, casing_radius)
    full = close_sector(half_sector, n)
    ang = np.linspace(0.0, math.pi / n, web_samples)
    ring = casing_radius * np.column_stack([np.cos(ang), np.sin(ang)])
    web = float(full.distance(ring).min())

    alpha = math.pi / n
    beta = (1.0 - eps) * alpha
    apex_r = valley_depth * math.sin(tip_semi_angle - eps * alpha) / math.sin(tip_semi_angle)
    port_area = n * (valley_depth**2 * beta + valley_depth * apex_r * math.sin(eps * alpha))
    chamber = math.pi * casing_radius**2
    return StarDesign(
        n=n,
        tip_semi_angle=tip_semi_angle,
        web_fraction=web / (2.0 * casing_radius),
        volumetric_fraction=(chamber - port_area) / chamber,
    )


def bistar_design(n: int, r_c: float, r_f: float, d: float) -> BiStarDesign:
    """Sliverless two-propellant star: web and required rate ratio.

    The slow front starts at radius r_f + d around the chamber center
    and the fast front at radius r_f around the slot center, offset by
    d.  Requiring both to reach the casing corner simultaneously fixes
    f = (sqrt(r_c^2 - 2 r_c d cos(pi/n) + d^2) - r_f) / omega.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if not (r_f > 0.0 and d > 0.0):
        raise ValueError("need positive r_f and d")
    omega = r_c - r_f - d
    if omega <= 0.0:
        raise ValueError("no web: need r_f + d < r_c")
    # f >= 1 always: f < 1 would need cos(pi/n) > 1, so no guard here
    f = (math.sqrt(r_c**2 - 2.0 * r_c * d * math.cos(math.pi / n) + d**2) - r_f) / omega
    return BiStarDesign(n=n, r_c=r_c, r_f=r_f, d=d, omega=omega, f=f)


def bistar_interface(design: BiStarDesign, n_samples: int) -> InterfacePolyline:
    """Propellant-propellant interface traced by burn depth y in [0, omega].

    Both fronts are cylinders at equal pseudotime, radius r1 = r_f+d+y
    about the chamber center and r2 = r_f + f*y about the slot center;
    their intersection gives theta1 by the cosine law and theta2 by
    closing the polar triangle.
    """
    if n_samples < 2:
        raise ValueError("need at least 2 interface samples")
    y = np.linspace(0.0, design.omega, n_samples)
    r1 = design.r_f + design.d + y
    r2 = design.r_f + design.f * y
    cos_t1 = (r1**2 + design.d**2 - r2**2) / (2.0 * r1 * design.d)
    if np.any(np.abs(cos_t1) > 1.0 + 1e-12):
        bad = float(y[np.argmax(np.abs(cos_t1))])
        raise ValueError(f"inconsistent design: fronts do not intersect at y = {bad:.6g}")
    theta1 = np.arccos(np.clip(cos_t1, -1.0, 1.0))
    theta2 = np.arctan2(r1 * np.sin(theta1), r1 * np.cos(theta1) - design.d)
    return InterfacePolyline(y=y, r1=r1, theta1=theta1, r2=r2, theta2=theta2)


def equilibrium_angle(beta: float, rate_ratio: float) -> float:
    """Interface tilt delta at which observed rates balance for half-angle beta.

    Inverse of ratio = cos(2 beta) - tan(delta) sin(2 beta); measured
    from the equal-rate bisector, so delta = -beta at ratio 1 under
    this sign convention.
    """
    if not 0.0 < beta < 0.5 * math.pi:
        raise ValueError("beta must be in (0, pi/2)")
    two_b = 2.0 * beta
    return math.atan((math.cos(two_b) - rate_ratio) / math.sin(two_b))


def equilibrium_ratio(beta: float, delta: float) -> float:
    """Forward evaluation matching equilibrium_angle's convention."""
    if not 0.0 < beta < 0.5 * math.pi:
        raise ValueError("beta must be in (0, pi/2)")
    two_b = 2.0 * beta
    return math.cos(two_b) - math.tan(delta) * math.sin(two_b)
