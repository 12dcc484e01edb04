"""Isochrone extraction, burn curves, CSV and SVG emitters."""

from __future__ import annotations

import csv
import io

import numpy as np
import pytest

from burnback.contour import make_circle
from burnback.eikonal import SolverConfig, solve
from burnback.mesh import Marker, gen_coons, gen_rect
from burnback.postproc import (
    BurnCurves,
    burn_curves,
    emit_csv,
    emit_svg,
    error_field,
    isocontour,
    isocontour_segments,
    perimeter,
    port_area,
)


@pytest.fixture()
def planar():
    mesh = gen_rect(20, 10, 2.0, 1.0, markers={"left": Marker.IGNITION})
    return mesh, mesh.nodes[:, 0].copy()


@pytest.fixture()
def radial():
    t = np.linspace(0.0, 0.5 * np.pi, 64)
    ring = np.column_stack([np.cos(t), np.sin(t)])
    mesh = gen_coons(ring, 2.0 * ring, 24, 36)
    return mesh, np.hypot(mesh.nodes[:, 0], mesh.nodes[:, 1]) - 1.0


# ------------------------------------------------------------------ contours


def test_isocontour_of_planar_field_is_vertical_line(planar):
    mesh, s = planar
    polylines = isocontour(mesh, s, 0.7)
    assert len(polylines) == 1
    line = polylines[0]
    np.testing.assert_allclose(line[:, 0], 0.7, atol=1e-12)
    assert line[:, 1].min() == pytest.approx(0.0, abs=1e-12)
    assert line[:, 1].max() == pytest.approx(1.0, abs=1e-12)


def test_perimeter_of_planar_field(planar):
    mesh, s = planar
    for tau in (0.3, 0.7, 1.5):
        assert perimeter(mesh, s, tau) == pytest.approx(1.0, rel=1e-12)


def test_port_area_of_planar_field(planar):
    mesh, s = planar
    # the level is nudged off exact node values, so allow ~1e-12 slack
    for tau in (0.3, 0.7, 1.5):
        assert port_area(mesh, s, tau) == pytest.approx(tau * 1.0, rel=1e-9)


def test_segments_stay_inside_their_host_triangles(planar):
    mesh, s = planar
    points, seg_edges, hosts = isocontour_segments(mesh, s, 0.6123)
    assert len(seg_edges) == len(hosts)
    for (i0, i1), tri in zip(seg_edges, hosts):
        corners = mesh.nodes[mesh.triangles[tri]]
        for p in (points[i0], points[i1]):
            # barycentric coordinates of p within the host triangle
            T = np.column_stack([corners[1] - corners[0], corners[2] - corners[0]])
            lam = np.linalg.solve(T, p - corners[0])
            assert lam.min() >= -1e-9 and lam.sum() <= 1.0 + 1e-9


def test_perimeter_of_radial_field_matches_circle(radial):
    mesh, s = radial
    # quarter ring between the burn front and the casing
    for tau in (0.25, 0.5, 0.75):
        assert perimeter(mesh, s, tau) == pytest.approx(0.5 * np.pi * (1.0 + tau), rel=2e-3)
        exact_area = 0.25 * np.pi * ((1.0 + tau) ** 2 - 1.0)
        assert port_area(mesh, s, tau) == pytest.approx(exact_area, rel=2e-3)


def test_isocontour_outside_range_is_empty(planar):
    mesh, s = planar
    assert isocontour(mesh, s, 5.0) == []
    assert perimeter(mesh, s, 5.0) == 0.0


# ---------------------------------------------------------------- burn curves


def test_burn_curves_two_propellant_bookkeeping(planar):
    mesh, s = planar
    labels = np.where(mesh.nodes[:, 0] <= 1.0, 1, 2)
    curves = burn_curves(mesh, s, labels, 2.0, [0.5, 1.5])
    # at tau = 0.5 the front is entirely in propellant 1, at 1.5 in 2
    assert curves.P_b[0] == pytest.approx(1.0, rel=1e-12)
    assert curves.A_eq[0] == pytest.approx(1.0, rel=1e-12)
    assert curves.P_b[1] == pytest.approx(1.0, rel=1e-12)
    assert curves.A_eq[1] == pytest.approx(2.0, rel=1e-12)
    np.testing.assert_allclose(curves.A_p, [0.5, 1.5], rtol=1e-9)


def test_burn_curves_unit_ratio_collapses_to_perimeter(planar):
    mesh, s = planar
    labels = np.where(mesh.nodes[:, 0] <= 0.8, 1, 2)
    curves = burn_curves(mesh, s, labels, 1.0, np.linspace(0.2, 1.8, 9))
    np.testing.assert_array_equal(curves.A_eq, curves.P_b)


def test_burn_curves_validation(planar):
    mesh, s = planar
    ones = np.ones(mesh.n_nodes, dtype=int)
    with pytest.raises(ValueError, match="labels"):
        burn_curves(mesh, s, ones[:-1], 1.0, [0.5])
    with pytest.raises(ValueError, match="1 or 2"):
        burn_curves(mesh, s, 3 * ones, 1.0, [0.5])
    with pytest.raises(ValueError, match="f"):
        burn_curves(mesh, s, ones, 0.5, [0.5])
    with pytest.raises(ValueError, match="increasing"):
        burn_curves(mesh, s, ones, 1.0, [1.0, 0.5])


def test_burn_curves_grain_length_column(planar):
    mesh, s = planar
    ones = np.ones(mesh.n_nodes, dtype=int)
    curves = burn_curves(mesh, s, ones, 1.0, [0.5, 1.0], grain_length=3.0)
    np.testing.assert_allclose(curves.A_b, 3.0 * curves.P_b, rtol=1e-15)


def test_burn_curves_empty_grid(planar):
    mesh, s = planar
    ones = np.ones(mesh.n_nodes, dtype=int)
    curves = burn_curves(mesh, s, ones, 1.0, [])
    assert emit_csv(curves) == "tau,P_b,A_p,A_eq\n"


# --------------------------------------------------------------- error fields


def test_error_field_zero_for_exact(planar):
    mesh, s = planar
    out = error_field(mesh, s, lambda x, y: x)
    assert out.max_abs == 0.0
    assert out.mean_abs == 0.0


def test_error_field_normalizes_by_peak_depth(planar):
    mesh, s = planar
    out = error_field(mesh, s + 0.02, lambda x, y: x)
    assert out.max_abs == pytest.approx(0.01)  # 0.02 against a depth of 2


def test_error_field_accepts_contour_oracle(radial):
    mesh, _ = radial
    ring = make_circle(1.0)
    out = error_field(mesh, ring.distance(mesh.nodes), ring)
    assert out.max_abs == 0.0


def test_error_field_rejects_zero_oracle(planar):
    mesh, s = planar
    with pytest.raises(ValueError, match="zero"):
        error_field(mesh, s, np.zeros(mesh.n_nodes))


# ------------------------------------------------------------------- emitters


def parse_csv(text: str):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array(rows[1:], dtype=np.float64)


def test_emit_csv_burn_curves_round_trip(planar):
    mesh, s = planar
    ones = np.ones(mesh.n_nodes, dtype=int)
    curves = burn_curves(mesh, s, ones, 1.0, np.linspace(0.1, 1.9, 7))
    head, data = parse_csv(emit_csv(curves))
    assert head == ["tau", "P_b", "A_p", "A_eq"]
    np.testing.assert_allclose(data[:, 0], curves.tau, rtol=1e-11)
    np.testing.assert_allclose(data[:, 1], curves.P_b, rtol=1e-11)
    np.testing.assert_allclose(data[:, 2], curves.A_p, rtol=1e-11)


def test_emit_csv_field_and_residuals(planar):
    mesh, s = planar
    head, data = parse_csv(emit_csv(s, mesh=mesh))
    assert head == ["node", "x", "y", "s"]
    assert data.shape == (mesh.n_nodes, 4)
    np.testing.assert_allclose(data[:, 3], s, rtol=1e-11)

    field = solve(mesh, 1.0, config=SolverConfig(max_steps=20))
    head, data = parse_csv(emit_csv(field))
    assert head == ["step", "dt", "max_residual"]
    assert data.shape == (20, 3)
    np.testing.assert_array_equal(data[:, 0], np.arange(1, 21))


def test_emit_csv_field_needs_mesh(planar):
    _, s = planar
    with pytest.raises(ValueError, match="mesh"):
        emit_csv(s)


def test_emit_svg_isochrone_groups(planar):
    mesh, s = planar
    svg = emit_svg(mesh, s, levels=(0.5, 1.0, 1.5))
    assert svg.count('<g class="isochrone"') == 3
    assert 'data-tau="0.5"' in svg
    assert "viewBox" in svg
    assert "<polyline" in svg


def test_emit_svg_contour_only():
    svg = emit_svg(None, contour=make_circle(1.0))
    assert "viewBox" in svg and "<path" in svg


def test_emit_svg_mesh_toggle(planar):
    mesh, s = planar
    with_mesh = emit_svg(mesh, s, levels=(0.5,))
    without = emit_svg(mesh, s, levels=(0.5,), show_mesh=False)
    assert len(without) < len(with_mesh)


def test_emit_svg_needs_something():
    with pytest.raises(ValueError):
        emit_svg(None)


def test_emit_svg_levels_need_field(planar):
    mesh, _ = planar
    with pytest.raises(ValueError, match="field"):
        emit_svg(mesh, None, levels=(0.5,))
