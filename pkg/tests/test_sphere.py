import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from octainscribe.sphere import (
    Containment,
    DegenerateTriangle,
    InvalidPolygon,
    OutOfRange,
    SpherePoint,
    SphPolygon,
    SphTriangle,
    arc_distance,
    area,
    contains,
    point_on_arc,
    polygon_area,
    polygon_contains,
    polygon_diameter,
    vertex_angle,
)

E1, E2, E3 = np.eye(3)


def normalize(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def random_units(rng, n):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_rotation(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def random_triangle(rng):
    while True:
        try:
            return SphTriangle(*random_units(rng, 3))
        except DegenerateTriangle:
            continue


# -- arc_distance -----------------------------------------------------------


def test_arc_distance_identity():
    assert arc_distance(E1, E1) == 0.0


def test_arc_distance_antipodal():
    assert arc_distance(E1, -E1) == pytest.approx(math.pi, abs=1e-15)


def test_arc_distance_orthogonal():
    assert arc_distance(E1, E2) == pytest.approx(math.pi / 2, abs=1e-15)


def test_arc_distance_small_angles_stable():
    # arccos of the dot product loses half the digits here; atan2 must not
    p = normalize([1.0, 1e-9, 0.0])
    assert arc_distance(E1, p) == pytest.approx(1e-9, rel=1e-6)


def test_arc_distance_triangle_inequality_bulk():
    rng = np.random.default_rng(0)
    for _ in range(100):
        pts = random_units(rng, 300)
        a, b, c = pts[:100], pts[100:200], pts[200:]
        for i in range(100):
            ab = arc_distance(a[i], b[i])
            bc = arc_distance(b[i], c[i])
            ac = arc_distance(a[i], c[i])
            assert ac <= ab + bc + 1e-12


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_arc_distance_symmetric(seed):
    rng = np.random.default_rng(seed)
    p, q = random_units(rng, 2)
    assert arc_distance(p, q) == pytest.approx(arc_distance(q, p), abs=1e-15)


# -- vertex_angle and area --------------------------------------------------


def test_octant_angles_and_area():
    tri = SphTriangle(E1, E2, E3)
    for i in range(3):
        assert vertex_angle(tri, i) == pytest.approx(math.pi / 2, abs=1e-14)
    assert area(tri) == pytest.approx(math.pi / 2, abs=1e-14)


def test_equilateral_pi3_vertex_angle():
    # independent oracle: spherical law of cosines at side a = pi/3 gives
    # cos A = (cos a - cos^2 a) / sin^2 a = 1/3
    expected = math.acos((math.cos(math.pi / 3) - math.cos(math.pi / 3) ** 2)
                         / math.sin(math.pi / 3) ** 2)
    assert expected == pytest.approx(math.acos(1.0 / 3.0), abs=1e-15)
    from octainscribe.angles import triangle_from_sides

    tri = triangle_from_sides(math.pi / 3, math.pi / 3, math.pi / 3)
    for i in range(3):
        assert vertex_angle(tri, i) == pytest.approx(expected, abs=1e-12)


def test_equilateral_planar_limit():
    from octainscribe.angles import triangle_from_sides

    tri = triangle_from_sides(1e-4, 1e-4, 1e-4)
    assert vertex_angle(tri, 0) == pytest.approx(math.pi / 3, abs=1e-8)


def test_area_T0_closed_form():
    from octainscribe.angles import triangle_from_sides

    tri = triangle_from_sides(math.pi / 3, math.pi / 3, math.pi / 3)
    assert area(tri) == pytest.approx(3 * math.acos(1.0 / 3.0) - math.pi, abs=1e-12)


def test_area_matches_lhuilier_oracle():
    # independent route: l'Huilier's formula from the side lengths alone
    def lhuilier(tri):
        a, b, c = tri.side_lengths()
        s = 0.5 * (a + b + c)
        prod = max(
            0.0,
            math.tan(0.5 * s)
            * math.tan(0.5 * (s - a))
            * math.tan(0.5 * (s - b))
            * math.tan(0.5 * (s - c)),
        )
        return 4.0 * math.atan(math.sqrt(prod))

    rng = np.random.default_rng(4)
    for _ in range(2000):
        tri = random_triangle(rng)
        if max(tri.side_lengths()) > 2.8:  # keep l'Huilier in its stable range
            continue
        assert area(tri) == pytest.approx(lhuilier(tri), abs=1e-9)


def test_area_near_degenerate_sliver_nonnegative():
    tri = SphTriangle(E1, normalize([1, 2e-2, 0]), normalize([1, 1e-2, 2e-5]))
    a = area(tri)
    assert 0.0 <= a <= 1e-6


def test_area_rotation_invariant_and_girard_consistent():
    rng = np.random.default_rng(1)
    for k in range(10_000):
        tri = random_triangle(rng)
        excess = sum(vertex_angle(tri, i) for i in range(3)) - math.pi
        a = area(tri)
        assert a == pytest.approx(excess, abs=1e-10)
        assert 0.0 < a < 2 * math.pi
        if k % 5 == 0:
            R = random_rotation(rng)
            rtri = SphTriangle(*(tri.matrix @ R.T))
            assert area(rtri) == pytest.approx(a, abs=1e-12)


# -- containment ------------------------------------------------------------


def test_contains_octant_cases():
    tri = SphTriangle(E1, E2, E3)
    assert contains(tri, normalize([1, 1, 1])) is Containment.INSIDE
    assert contains(tri, E1) is Containment.BOUNDARY
    assert contains(tri, -E1) is Containment.OUTSIDE


def test_contains_rotation_equivariant():
    rng = np.random.default_rng(2)
    tri = SphTriangle(E1, E2, E3)
    for _ in range(300):
        p = random_units(rng, 1)[0]
        R = random_rotation(rng)
        rtri = SphTriangle(*(tri.matrix @ R.T))
        assert contains(rtri, R @ p) is contains(tri, p)


def test_polygon_contains_quarter_lune():
    quad = SphPolygon([
        normalize([1, 0, 0]),
        normalize([1, 1, 0]),
        normalize([1, 1, 1]),
        normalize([1, 0, 1]),
    ])
    centroid = normalize(quad.matrix.sum(axis=0))
    assert polygon_contains(quad, centroid) is Containment.INSIDE
    assert polygon_contains(quad, quad.vertices[0].vec) is Containment.BOUNDARY
    assert polygon_contains(quad, -centroid) is Containment.OUTSIDE


def test_polygon_rejects_nonconvex():
    pts = [E1, normalize([1, 1, 0]), normalize([1, 0.1, 0.05]), normalize([1, 0, 1])]
    with pytest.raises(InvalidPolygon):
        SphPolygon(pts)


def test_polygon_area_and_diameter():
    tri_poly = SphPolygon([E1, E2, E3])
    assert polygon_area(tri_poly) == pytest.approx(math.pi / 2, abs=1e-12)
    assert polygon_diameter(tri_poly) == pytest.approx(math.pi / 2, abs=1e-12)


# -- point_on_arc -----------------------------------------------------------


def test_point_on_arc_endpoints_and_bisector():
    assert np.allclose(point_on_arc(E1, E2, 0.0).vec, E1, atol=1e-15)
    assert np.allclose(point_on_arc(E1, E2, math.pi / 2).vec, E2, atol=1e-15)
    mid = point_on_arc(E1, E2, math.pi / 4)
    assert np.allclose(mid.vec, normalize([1, 1, 0]), atol=1e-15)


def test_point_on_arc_distance_exact():
    rng = np.random.default_rng(3)
    for _ in range(200):
        a, b = random_units(rng, 2)
        full = arc_distance(a, b)
        if full > math.pi - 1e-6 or full < 1e-6:
            continue
        d = rng.random() * full
        p = point_on_arc(a, b, d)
        assert arc_distance(a, p) == pytest.approx(d, abs=1e-12)
        # geodesic: coplanar with the endpoints
        assert abs(np.linalg.det(np.array([a, p.vec, b]))) <= 1e-12


def test_point_on_arc_out_of_range():
    with pytest.raises(OutOfRange):
        point_on_arc(E1, E2, math.pi / 2 + 1e-3)
    with pytest.raises(OutOfRange):
        point_on_arc(E1, -E1, 0.1)


# -- constructors and invariants --------------------------------------------


def test_sphere_point_normalizes():
    p = SpherePoint(np.array([3.0, 4.0, 0.0]))
    assert np.linalg.norm(p.vec) == pytest.approx(1.0, abs=1e-12)


def test_triangle_rejects_degenerate():
    with pytest.raises(DegenerateTriangle):
        SphTriangle(E1, E1, E2)
    with pytest.raises(DegenerateTriangle):
        SphTriangle(E1, -E1, E2)
    with pytest.raises(DegenerateTriangle):
        SphTriangle(E1, E2, normalize([1, 1, 0]))  # coplanar with center


def test_triangle_orientation_fixed():
    t1 = SphTriangle(E1, E2, E3)
    t2 = SphTriangle(E1, E3, E2)  # negative orientation, constructor swaps
    assert np.linalg.det(t1.matrix) > 0
    assert np.linalg.det(t2.matrix) > 0


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_triangle_sides_below_pi(seed):
    rng = np.random.default_rng(seed)
    tri = random_triangle(rng)
    assert all(0 < s < math.pi for s in tri.side_lengths())
