"""Canonical verification cases: meshes, oracles, rate fields."""

from __future__ import annotations

import numpy as np
import pytest

from burnback.cases import CASE_BUILDERS, build_case
from burnback.mesh import Marker, validate_mesh
from burnback.star import bistar_design


@pytest.mark.parametrize("name", sorted(CASE_BUILDERS))
def test_case_builds_clean(name):
    case = build_case(name)
    assert case.name == name
    validate_mesh(case.mesh)
    assert case.depth is None or case.depth > 0.0
    if case.exact is not None:
        assert case.exact.shape == (case.mesh.n_nodes,)
        assert np.all(np.isfinite(case.exact))
        # boundary resampling sags nodes ~1e-6 inside the exact curve
        assert case.exact.min() >= -1e-5
    if case.labels is not None:
        assert set(np.unique(case.labels)) <= {1, 2}
    rate = np.broadcast_to(np.asarray(case.rate, dtype=float), (case.mesh.n_nodes,))
    assert np.all(rate > 0.0)


def test_build_case_rejects_unknown_name():
    with pytest.raises(ValueError, match="slot-coarse"):
        build_case("nope")


def test_rect_case_oracle_is_planar():
    case = build_case("rect")
    np.testing.assert_array_equal(case.exact, case.mesh.nodes[:, 0])
    assert case.depth == 2.0


def test_annulus_case_oracle_is_radial():
    case = build_case("annulus")
    r = np.hypot(case.mesh.nodes[:, 0], case.mesh.nodes[:, 1])
    np.testing.assert_allclose(case.exact, r - 1.0, atol=1e-12)
    # two symmetry rays bound the quarter
    assert len(case.mesh.symmetry_lines) == 2


def test_circle_case_has_no_symmetry_boundary():
    case = build_case("circle")
    markers = case.mesh.node_markers
    assert np.sum(markers == Marker.SYMMETRY) == 0
    r = np.hypot(case.mesh.nodes[:, 0], case.mesh.nodes[:, 1])
    np.testing.assert_allclose(r[markers == Marker.IGNITION], 1.0, rtol=1e-5)
    np.testing.assert_allclose(r[markers == Marker.FREE], 2.0, rtol=1e-5)


def test_slot_case_oracle_hand_values():
    case = build_case("slot-coarse")
    assert case.port.distance((1.0, 1.0)) == pytest.approx(0.75)
    assert case.port.distance((0.0, 3.0)) == pytest.approx(0.75)  # above the cap
    assert case.depth == pytest.approx(np.hypot(1.25, 1.25) - 0.25)


def test_slot_levels_hit_their_node_budgets():
    coarse = build_case("slot-coarse")
    fine = build_case("slot-fine")
    assert 2000 <= coarse.mesh.n_nodes <= 3000
    assert 9000 <= fine.mesh.n_nodes <= 11000


def test_star_case_mesh_budget_and_overrides():
    case = build_case("star")
    assert case.mesh.n_nodes <= 10_000
    assert case.config is not None and case.config.dissipation_scale == 0.125
    # the flank-valley junction must be a mesh vertex
    beta = 0.4 * np.pi / 5.0
    v = 0.5 * np.array([np.cos(beta), np.sin(beta)])
    gaps = np.hypot(case.mesh.nodes[:, 0] - v[0], case.mesh.nodes[:, 1] - v[1])
    assert gaps.min() < 1e-9


def test_bistar_case_rate_field():
    case = build_case("bistar")
    design = bistar_design(4, 1.0, 0.1, 0.5)
    assert case.rate_ratio == pytest.approx(design.f)
    values = set(np.unique(case.rate))
    assert values == {1.0, design.f}
    # fast nodes are labeled 2 and carry the fast oracle
    fast = case.rate == design.f
    np.testing.assert_array_equal(case.labels[fast], 2)
    np.testing.assert_array_equal(case.labels[~fast], 1)
    assert case.exact.max() <= design.omega + 1e-9


def test_bistar_oracle_continuous_at_interface():
    from burnback.star import bistar_interface

    case = build_case("bistar")
    design = bistar_design(4, 1.0, 0.1, 0.5)
    face = bistar_interface(design, 1025)
    pts = np.column_stack([face.r1 * np.cos(face.theta1), face.r1 * np.sin(face.theta1)])
    slow = np.hypot(pts[:, 0], pts[:, 1]) - (design.r_f + design.d)
    fast = case.port.distance(pts) / design.f
    np.testing.assert_allclose(slow, fast, atol=1e-9)


@pytest.mark.parametrize(
    "name,fast_fraction",
    [("scheme-corner+5", 3.0), ("scheme-corner-15", 3.0), ("scheme-cusp-15", 3.0)],
)
def test_scheme_cases_split_rates(name, fast_fraction):
    case = build_case(name)
    assert set(np.unique(case.rate)) == {1.0, fast_fraction}
    assert case.rate_ratio == fast_fraction
    assert case.exact is None
    left = case.labels == 1
    np.testing.assert_array_equal(case.rate[left], 1.0)
