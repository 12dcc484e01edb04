"""Two-dimensional grain burnback analysis on triangular meshes.

The package follows the burn from geometry to engineering curves: build
or load a mesh of the propellant region (mesh), describe ports and
measure exact distances to them (contour), size neutral and sliverless
star designs (star), relax the arrival-time field of the moving front
(eikonal), and turn that field into isochrones, perimeter and area
curves, error reports, and CSV/SVG artifacts (postproc).  cases bundles
the benchmark geometries used by the test suite and the command line.
"""

from .contour import (
    Arc,
    Contour,
    ContourError,
    Line,
    close_sector,
    cylinder_laws,
    make_circle,
    make_slot,
    make_star,
)
from .eikonal import (
    ArrivalField,
    SolverConfig,
    SolverError,
    as_rate_field,
    solve,
    triangle_gradients,
)
from .mesh import (
    GeomCache,
    Marker,
    Mesh,
    MeshError,
    gen_coons,
    gen_rect,
    geom_cache,
    load_mesh,
    merge_meshes,
    save_mesh,
)
from .postproc import (
    BurnCurves,
    ErrorField,
    burn_curves,
    emit_csv,
    emit_svg,
    error_field,
    isocontour,
    perimeter,
    port_area,
)
from .star import (
    BiStarDesign,
    InterfacePolyline,
    StarDesign,
    bistar_design,
    bistar_interface,
    neutral_tip_angle,
    star_metrics,
)
from .cases import CASE_BUILDERS, Case, build_case

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "ArrivalField",
    "BiStarDesign",
    "BurnCurves",
    "CASE_BUILDERS",
    "Case",
    "Contour",
    "ContourError",
    "ErrorField",
    "GeomCache",
    "InterfacePolyline",
    "Line",
    "Marker",
    "Mesh",
    "MeshError",
    "SolverConfig",
    "SolverError",
    "StarDesign",
    "as_rate_field",
    "bistar_design",
    "bistar_interface",
    "build_case",
    "burn_curves",
    "close_sector",
    "cylinder_laws",
    "emit_csv",
    "emit_svg",
    "error_field",
    "gen_coons",
    "gen_rect",
    "geom_cache",
    "isocontour",
    "load_mesh",
    "make_circle",
    "make_slot",
    "make_star",
    "merge_meshes",
    "neutral_tip_angle",
    "perimeter",
    "port_area",
    "save_mesh",
    "solve",
    "star_metrics",
    "triangle_gradients",
]
