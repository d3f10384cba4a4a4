"""Solid-angle classification and the witness constructions behind it.

A solid angle (convex polyhedral cone) is *special* when its boundary
admits an inscribed regular octahedron.  For trihedral angles this is
decided exactly by a finite placement test of the angle's spherical
triangle inside the regular spherical triangle of side pi/3; threshold
shortcuts handle the all-sides-small and one-side-large regimes.  For
angles with four or more edges only a necessary condition is available:
whether the angle's spherical polygon can be rotated into that same
regular triangle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import permutations
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .pose import OctahedronPose
from .rotations import matrix_to_quat, quat_to_matrix, super_fibonacci_rotations
from .sphere import (
    DEFAULT_TOL,
    GeometryError,
    SphPolygon,
    SphTriangle,
    _as_unit,
    _polygon_orientation,
    _tangent_towards,
    _walk,
    arc_distance,
    hemisphere_axis,
    polygon_area,
    polygon_diameter,
    vertex_angle,
)

__all__ = [
    "T0_SIDE",
    "T0_VERTEX_ANGLE",
    "T0_AREA",
    "T0_TRIANGLE",
    "SolidAngle",
    "NotTrihedral",
    "InvalidSolidAngle",
    "NotNonSpecial",
    "PathVerificationFailed",
    "ConstructionFailed",
    "ClassTag",
    "AngleClass",
    "PlacementCertificate",
    "FitTag",
    "T0FitResult",
    "GeneralKind",
    "GeneralClassification",
    "spherical_triangle_of",
    "normalize_ordering",
    "triangle_from_sides",
    "angle_from_sides",
    "placement_test",
    "classify_trihedral",
    "construct_inscribed_octahedron",
    "fits_in_T0",
    "classify_general",
    "deformation_path",
]


class NotTrihedral(GeometryError):
    """Operation requires a solid angle with exactly three edges."""


class InvalidSolidAngle(GeometryError):
    """Edge set does not describe a salient, full-dimensional convex cone
    with every edge extreme."""


class NotNonSpecial(GeometryError):
    """Deformation paths are only defined for non-special triangles."""


class PathVerificationFailed(RuntimeError):
    """An intermediate triangle of a deformation path classified as
    special; this indicates an implementation bug, not a boundary case."""


class ConstructionFailed(RuntimeError):
    """The witness octahedron could not be realized at usable precision."""


# ---------------------------------------------------------------------------
# The regular spherical triangle of side pi/3 (canonical placement).

T0_SIDE = math.pi / 3.0
T0_VERTEX_ANGLE = math.acos(1.0 / 3.0)
T0_AREA = 3.0 * T0_VERTEX_ANGLE - math.pi

_HALF = T0_VERTEX_ANGLE / 2.0
_T1 = np.array([0.0, 0.0, 1.0])
_T2 = np.array(
    [math.sin(T0_SIDE) * math.cos(_HALF), -math.sin(T0_SIDE) * math.sin(_HALF), math.cos(T0_SIDE)]
)
_T3 = np.array(
    [math.sin(T0_SIDE) * math.cos(_HALF), math.sin(T0_SIDE) * math.sin(_HALF), math.cos(T0_SIDE)]
)

T0_TRIANGLE = SphTriangle(_T1, _T2, _T3)


def _rotate_about_axis(axis: np.ndarray, v: np.ndarray, angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return c * v + s * np.cross(axis, v) + (1.0 - c) * float(np.dot(axis, v)) * axis


def angle_from_sides(opposite: float, b: float, c: float) -> float:
    """Spherical law of cosines: the vertex angle opposite a given side."""
    sb, sc = math.sin(b), math.sin(c)
    if sb < 1e-12 or sc < 1e-12:
        raise GeometryError("adjacent sides too short to define a vertex angle")
    x = (math.cos(opposite) - math.cos(b) * math.cos(c)) / (sb * sc)
    return math.acos(min(1.0, max(-1.0, x)))


def triangle_from_sides(s12: float, s13: float, s23: float) -> SphTriangle:
    """Canonical spherical triangle with prescribed side lengths.

    Vertex 1 sits at the north pole, vertex 2 on the zero meridian; the
    result is positively oriented with the labels in place.
    """
    sides = (s12, s13, s23)
    if any(s <= 0 or s >= math.pi for s in sides):
        raise GeometryError(f"sides must lie in (0, pi): {sides}")
    if s23 >= s12 + s13 or s23 <= abs(s12 - s13) or s12 + s13 + s23 >= 2 * math.pi:
        raise GeometryError(f"sides violate the spherical triangle inequality: {sides}")
    theta = angle_from_sides(s23, s12, s13)
    v1 = np.array([0.0, 0.0, 1.0])
    v2 = np.array([math.sin(s12), 0.0, math.cos(s12)])
    v3 = np.array(
        [math.sin(s13) * math.cos(theta), math.sin(s13) * math.sin(theta), math.cos(s13)]
    )
    return SphTriangle(v1, v2, v3)


# ---------------------------------------------------------------------------
# Solid angles.


class SolidAngle:
    """Apex plus the extreme rays of a salient, full-dimensional convex
    cone, stored in counterclockwise order around an interior axis.

    Construction reorders the given edges into the canonical traversal
    (keeping the first edge first) and rejects edge sets that are not in
    strictly convex position.
    """

    __slots__ = ("apex", "edges", "axis", "_polygon")

    def __init__(self, apex, edges, tol: float = DEFAULT_TOL):
        apex = np.asarray(apex, dtype=float).reshape(3)
        E = np.array([_as_unit(e) for e in edges])
        n = len(E)
        if n < 3:
            raise InvalidSolidAngle("a solid angle needs at least 3 edges")
        if np.linalg.matrix_rank(E, tol=1e-9) < 3:
            raise InvalidSolidAngle("edges do not span 3 dimensions")
        axis = _salient_axis(E, tol)
        order = _ccw_order(E, axis)
        E = E[order]
        if _polygon_orientation(E, tol) < 0:
            E = np.vstack([E[:1], E[1:][::-1]])
        try:
            poly = SphPolygon(E, tol=tol)
        except GeometryError as exc:
            raise InvalidSolidAngle(f"edges are not in strictly convex position: {exc}") from exc
        if arc_distance(poly.vertices[1].vec, E[1]) > 1e-12:
            raise InvalidSolidAngle("edge ordering could not be canonicalized")
        self.apex = apex
        self.edges = E
        self.edges.flags.writeable = False
        self.axis = _as_unit(E.sum(axis=0))
        self._polygon = poly

    @classmethod
    def from_triangle(cls, tri: SphTriangle, apex=(0.0, 0.0, 0.0)) -> "SolidAngle":
        return cls(apex, tri.matrix)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def polygon(self) -> SphPolygon:
        return self._polygon

    def facet_angles(self) -> np.ndarray:
        """Planar opening angle of each flat facet (facet i spans edges
        i and i+1), equal to the side lengths of the spherical polygon."""
        E = self.edges
        n = len(E)
        return np.array([arc_distance(E[i], E[(i + 1) % n]) for i in range(n)])

    def facet_normal(self, i: int) -> np.ndarray:
        """Outward unit normal of facet i (apex-local halfspace n.x <= 0)."""
        E = self.edges
        n = _as_unit(np.cross(E[i], E[(i + 1) % len(E)]))
        if float(np.dot(n, self.axis)) > 0:
            n = -n
        return n

    def facet_frames(self) -> list:
        """Per facet: (edge_i, edge_j, outward normal, inverse frame) where
        the inverse frame maps apex-local points to (alpha, beta, gamma)
        coordinates with x = alpha e_i + beta e_j + gamma n."""
        out = []
        E = self.edges
        n = len(E)
        for i in range(n):
            ei, ej = E[i], E[(i + 1) % n]
            nrm = self.facet_normal(i)
            frame = np.column_stack([ei, ej, nrm])
            out.append((ei, ej, nrm, np.linalg.inv(frame)))
        return out

    def __repr__(self):
        return f"SolidAngle(apex={self.apex.tolist()}, n_edges={self.n_edges})"


def _salient_axis(E: np.ndarray, tol: float) -> np.ndarray:
    axis = hemisphere_axis(E, tol)
    if axis is None:
        raise InvalidSolidAngle("cone is not salient (edges span a closed halfspace)")
    return axis


def _ccw_order(E: np.ndarray, axis: np.ndarray) -> np.ndarray:
    ref = np.eye(3)[int(np.argmin(np.abs(axis)))]
    x = _as_unit(np.cross(axis, ref))
    y = np.cross(axis, x)
    az = np.arctan2(E @ y, E @ x)
    az = np.mod(az - az[0], 2 * math.pi)
    return np.argsort(az, kind="stable")


def spherical_triangle_of(angle: SolidAngle) -> SphTriangle:
    """The spherical triangle of a trihedral angle: its edge directions as
    sphere points.  Facet angles equal the triangle's side lengths."""
    if angle.n_edges != 3:
        raise NotTrihedral(f"expected 3 edges, got {angle.n_edges}")
    E = angle.edges
    return SphTriangle(E[0], E[1], E[2])


def normalize_ordering(tri: SphTriangle) -> SphTriangle:
    """Relabel (and reflect if needed) so that |v1 v2| >= |v1 v3| >= |v2 v3|.

    Returns the input object unchanged when it is already ordered.
    """
    V = tri.matrix
    s12, s13, s23 = tri.side_lengths()
    if s12 >= s13 >= s23:
        return tri
    side = {frozenset((0, 1)): s12, frozenset((0, 2)): s13, frozenset((1, 2)): s23}
    for perm in permutations(range(3)):
        c = side[frozenset((perm[0], perm[1]))]
        b = side[frozenset((perm[0], perm[2]))]
        a = side[frozenset((perm[1], perm[2]))]
        if c >= b >= a:
            w1, w2, w3 = V[perm[0]], V[perm[1]], V[perm[2]]
            if float(np.linalg.det(np.array([w1, w2, w3]))) < 0:
                nrm = _as_unit(np.cross(w1, w2))
                w3 = w3 - 2.0 * float(np.dot(nrm, w3)) * nrm
            return SphTriangle(w1, w2, w3)
    raise GeometryError("unreachable: some ordering always exists")


# ---------------------------------------------------------------------------
# The placement test.


class ClassTag(Enum):
    SPECIAL = "SPECIAL"
    NON_SPECIAL = "NON_SPECIAL"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True, eq=False)
class PlacementCertificate:
    """Witness of a proper placement: vertex 1 of the (possibly mirrored)
    triangle at t1, vertex 2 on the arc t1 t2, vertex 3 strictly inside
    the triangle t1 v2 t3, with the three containment margins recorded."""

    labeling: tuple
    mirrored: bool
    placed_triangle: SphTriangle
    margins: np.ndarray

    def __post_init__(self):
        P = self.placed_triangle.matrix
        if arc_distance(P[0], _T1) > 1e-10:
            raise GeometryError("certificate: placed v1 does not coincide with t1")
        off = abs(math.asin(min(1.0, max(-1.0, float(np.dot(_as_unit(np.cross(_T1, _T2)), P[1]))))))
        if off > 1e-10 or arc_distance(P[1], _T1) > T0_SIDE + 1e-10:
            raise GeometryError("certificate: placed v2 does not lie on the arc t1 t2")


@dataclass(frozen=True, eq=False)
class AngleClass:
    tag: ClassTag
    margin: float
    certificate: Optional[PlacementCertificate] = None

    def __post_init__(self):
        if self.tag is ClassTag.SPECIAL and self.certificate is None:
            raise GeometryError("SPECIAL classification requires a certificate")


def _margins_in_placed_triangle(p2: np.ndarray, p3: np.ndarray) -> np.ndarray:
    """Signed containment margins of p3 in the triangle (t1, p2, t3)."""
    out = np.empty(3)
    for k, (a, b) in enumerate(((_T1, p2), (p2, _T3), (_T3, _T1))):
        nrm = _as_unit(np.cross(a, b))
        out[k] = math.asin(min(1.0, max(-1.0, float(np.dot(nrm, p3)))))
    return out


def _evaluate_labeling(V: np.ndarray, perm: tuple):
    """Try to place the triangle with labels (v1, v2, v3) = V[perm].

    Returns (margin, placed_vertices, margins3, mirrored); both mirror
    positions of v3 are evaluated and the better one kept.
    """
    v1, v2, v3 = V[perm[0]], V[perm[1]], V[perm[2]]
    c = arc_distance(v1, v2)
    b = arc_distance(v1, v3)
    a = arc_distance(v2, v3)
    m_len = T0_SIDE - c
    p2 = _walk(_T1, _T2, c)
    theta = angle_from_sides(a, b, c)
    tangent = _tangent_towards(_T1, _T2)
    best = None
    for sgn in (1.0, -1.0):
        t_rot = _rotate_about_axis(_T1, tangent, sgn * theta)
        p3 = math.cos(b) * _T1 + math.sin(b) * t_rot
        margins3 = _margins_in_placed_triangle(p2, p3)
        m = min(m_len, float(margins3.min()))
        if best is None or m > best[0]:
            best = (m, p3, margins3)
    mirrored = float(np.linalg.det(np.array([v1, v2, v3]))) < 0
    return best[0], (_T1.copy(), p2, best[1]), best[2], mirrored


def placement_test(tri: SphTriangle, tol: float = DEFAULT_TOL) -> AngleClass:
    """Decide whether the triangle places properly inside the regular
    spherical triangle of side pi/3: v1 at a corner, v2 on an adjacent
    side, v3 inside the triangle cut off by v2 and the opposite corner.

    All 6 labelings and both mirror images are tried; the reported margin
    is the best over all of them (positive = proper placement with room,
    negative = best placement still violated by that much).
    """
    V = tri.matrix
    best_margin = -math.inf
    best_data = None
    for perm in permutations(range(3)):
        m, placed, margins3, mirrored = _evaluate_labeling(V, perm)
        if m > best_margin:
            best_margin = m
            best_data = (perm, placed, margins3, mirrored)
    if best_margin > tol:
        perm, placed, margins3, mirrored = best_data
        cert = PlacementCertificate(
            labeling=tuple(perm),
            mirrored=mirrored,
            placed_triangle=SphTriangle(*placed),
            margins=margins3,
        )
        return AngleClass(ClassTag.SPECIAL, best_margin, cert)
    if best_margin < -tol:
        return AngleClass(ClassTag.NON_SPECIAL, best_margin, None)
    return AngleClass(ClassTag.INDETERMINATE, best_margin, None)


def _normalized_perm(tri: SphTriangle) -> tuple:
    """Permutation (i, j, k) of the triangle's labels with
    |v_i v_j| >= |v_i v_k| >= |v_j v_k|."""
    s12, s13, s23 = tri.side_lengths()
    side = {frozenset((0, 1)): s12, frozenset((0, 2)): s13, frozenset((1, 2)): s23}
    for perm in permutations(range(3)):
        c = side[frozenset((perm[0], perm[1]))]
        b = side[frozenset((perm[0], perm[2]))]
        a = side[frozenset((perm[1], perm[2]))]
        if c >= b >= a:
            return perm
    raise GeometryError("unreachable: some ordering always exists")


def classify_trihedral(angle: SolidAngle, tol: float = DEFAULT_TOL) -> AngleClass:
    """Classify a trihedral angle, with threshold fast paths:
    every facet angle below pi/6 is special, any facet angle above pi/3
    is not; everything else goes through the placement test.

    Certificate labelings index the angle's own edges, so a SPECIAL
    result feeds the witness construction directly.
    """
    tri = spherical_triangle_of(angle)
    sides = tri.side_lengths()
    if max(sides) > T0_SIDE + tol:
        return AngleClass(ClassTag.NON_SPECIAL, T0_SIDE - max(sides), None)
    if max(sides) < math.pi / 6.0 - tol:
        perm = _normalized_perm(tri)
        m, placed, margins3, mirrored = _evaluate_labeling(tri.matrix, perm)
        if m > tol:
            cert = PlacementCertificate(
                labeling=perm,
                mirrored=mirrored,
                placed_triangle=SphTriangle(*placed),
                margins=margins3,
            )
            return AngleClass(ClassTag.SPECIAL, m, cert)
        # Cannot happen for all-small triangles; fall through defensively.
    return placement_test(tri, tol)


# ---------------------------------------------------------------------------
# Witness construction (the face / edge / vertex pattern).

# Model octahedron labeling: a = e2, b = e1, c = e3 and primes opposite.
# The directions of (a - b), (b' - c'), (c - a') form a regular spherical
# triangle of side pi/3; the rotation taking that triangle onto the
# canonical one fixes the octahedron orientation of every placement.
_MODEL_A = np.array([0.0, 1.0, 0.0])
_MODEL_B = np.array([1.0, 0.0, 0.0])
_MODEL_C = np.array([0.0, 0.0, 1.0])
_D_FRAME = np.column_stack(
    [
        _as_unit(_MODEL_A - _MODEL_B),
        _as_unit(-_MODEL_B - (-_MODEL_C)),
        _as_unit(_MODEL_C - (-_MODEL_A)),
    ]
)
_T_FRAME = np.column_stack([_T1, _T2, _T3])
_S_MODEL = _T_FRAME @ np.linalg.inv(_D_FRAME)
assert np.allclose(_S_MODEL @ _S_MODEL.T, np.eye(3), atol=1e-12)
assert np.linalg.det(_S_MODEL) > 0

# (model vertex, facet index) pairs: facet 0 = span(v1, v2) carries the
# face a'b'c', facet 1 = span(v1, v3) the edge ab, facet 2 = span(v2, v3)
# the vertex c.
_CONSTRUCT_ASSIGNMENT = (
    (-_MODEL_A, 0),
    (-_MODEL_B, 0),
    (-_MODEL_C, 0),
    (_MODEL_A, 1),
    (_MODEL_B, 1),
    (_MODEL_C, 2),
)


def construct_inscribed_octahedron(
    angle: SolidAngle, cert: PlacementCertificate, tol: float = 1e-9
) -> OctahedronPose:
    """Realize the certificate as an actual octahedron with all six
    vertices on the angle's facets: one face on the facet shared by the
    placed v1 and v2, one edge on the facet of v1 and v3, one vertex on
    the facet of v2 and v3.

    The pose is normalized so the farthest vertex sits at distance 1 from
    the apex (any positive rescaling about the apex is also a solution).
    """
    if angle.n_edges != 3:
        raise NotTrihedral("witness construction requires a trihedral angle")
    if cert is None:
        raise ConstructionFailed("no placement certificate available")
    if float(np.min(cert.margins)) <= 0:
        raise ConstructionFailed("certificate margins are not strictly positive")
    W = angle.edges[list(cert.labeling)]
    P = cert.placed_triangle.matrix
    # Orthogonal (possibly improper) congruence with Q W_k = P_k.
    H = P.T @ W
    U, _, Vt = np.linalg.svd(H)
    Q = U @ Vt
    R_lab = Q.T @ _S_MODEL

    facets = ((W[0], W[1]), (W[0], W[2]), (W[1], W[2]))
    opposite = (W[2], W[1], W[0])
    normals = []
    for (ea, eb), opp in zip(facets, opposite):
        nrm = _as_unit(np.cross(ea, eb))
        if float(np.dot(nrm, opp)) > 0:
            nrm = -nrm
        normals.append(nrm)

    A = np.array([normals[f] for _, f in _CONSTRUCT_ASSIGNMENT])
    rhs = np.array([-float(np.dot(normals[f], R_lab @ u)) for u, f in _CONSTRUCT_ASSIGNMENT])
    center_local, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    plane_residual = float(np.abs(A @ center_local - rhs).max())

    verts_local = np.array([center_local + R_lab @ u for u, _ in _CONSTRUCT_ASSIGNMENT])
    radius = float(np.linalg.norm(verts_local, axis=1).max())
    if radius < 1e-12:
        raise ConstructionFailed("construction collapsed to the apex")
    t = 1.0 / radius
    scale = t
    if plane_residual * t > tol * scale:
        raise ConstructionFailed(
            f"plane residual {plane_residual * t:.3e} exceeds {tol * scale:.3e}"
        )

    # Sector membership of every vertex on its assigned facet.
    for (u, f), x in zip(_CONSTRUCT_ASSIGNMENT, verts_local * t):
        ea, eb = facets[f]
        frame = np.column_stack([ea, eb, normals[f]])
        alpha, beta, gamma = np.linalg.solve(frame, x)
        lim = tol * max(1.0, float(np.linalg.norm(x)))
        if alpha < -lim or beta < -lim or abs(gamma) > lim:
            raise ConstructionFailed(
                f"vertex left its facet sector (alpha={alpha:.3e}, beta={beta:.3e}, gamma={gamma:.3e})"
            )

    R = R_lab if np.linalg.det(R_lab) > 0 else R_lab @ np.diag([-1.0, 1.0, 1.0])
    return OctahedronPose(angle.apex + t * center_local, matrix_to_quat(R), scale)


# ---------------------------------------------------------------------------
# T0 containment for general angles.


class FitTag(Enum):
    FITS = "FITS"
    NO_FIT = "NO_FIT"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True, eq=False)
class T0FitResult:
    tag: FitTag
    margin: float
    rotation: Optional[np.ndarray]


_T0_NORMALS = np.array(
    [
        _as_unit(np.cross(_T1, _T2)),
        _as_unit(np.cross(_T2, _T3)),
        _as_unit(np.cross(_T3, _T1)),
    ]
)


def _t0_margin_for_matrices(mats: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Min over vertices and sides of the signed in-T0 distance, for a
    batch of rotation matrices (k x 3 x 3)."""
    rotated = np.einsum("kij,nj->kni", mats, V)
    dots = np.clip(np.einsum("si,kni->kns", _T0_NORMALS, rotated), -1.0, 1.0)
    return np.arcsin(dots).min(axis=(1, 2))


def _quats_to_matrices(Q: np.ndarray) -> np.ndarray:
    w, x, y, z = Q[:, 0], Q[:, 1], Q[:, 2], Q[:, 3]
    m = np.empty((len(Q), 3, 3))
    m[:, 0, 0] = 1 - 2 * (y * y + z * z)
    m[:, 0, 1] = 2 * (x * y - w * z)
    m[:, 0, 2] = 2 * (x * z + w * y)
    m[:, 1, 0] = 2 * (x * y + w * z)
    m[:, 1, 1] = 1 - 2 * (x * x + z * z)
    m[:, 1, 2] = 2 * (y * z - w * x)
    m[:, 2, 0] = 2 * (x * z - w * y)
    m[:, 2, 1] = 2 * (y * z + w * x)
    m[:, 2, 2] = 1 - 2 * (x * x + y * y)
    return m


def fits_in_T0(
    poly: SphPolygon,
    tol: float = DEFAULT_TOL,
    grid_size: int = 10_000,
    refine_top: int = 12,
) -> T0FitResult:
    """Decide whether some rotation takes the convex polygon inside the
    regular spherical triangle of side pi/3 (containment of a convex set
    reduces to containment of its vertices).

    Sound with tolerance; complete only up to the resolution of the
    deterministic rotation grid plus local refinement, so a NO_FIT for
    margins within the grid resolution is reported as INDETERMINATE.
    """
    total_area = polygon_area(poly)
    if total_area > T0_AREA + 1e-12:
        return T0FitResult(FitTag.NO_FIT, -(total_area - T0_AREA), None)
    diam = polygon_diameter(poly)
    if diam > T0_SIDE + tol:
        return T0FitResult(FitTag.NO_FIT, -0.5 * (diam - T0_SIDE), None)

    V = poly.matrix
    quats = super_fibonacci_rotations(grid_size)
    margins = _t0_margin_for_matrices(_quats_to_matrices(quats), V)
    order = np.argsort(-margins, kind="stable")[: max(1, refine_top)]

    best_margin = -math.inf
    best_quat = None
    for idx in order:
        q0 = quats[idx]

        def neg_margin(w, q0=q0):
            m = quat_to_matrix(q0) @ quat_to_matrix(np.concatenate([[1.0], 0.5 * w]))
            return -float(_t0_margin_for_matrices(m[None], V)[0])

        res = minimize(
            neg_margin,
            np.zeros(3),
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 400},
        )
        m = -float(res.fun)
        if m > best_margin:
            best_margin = m
            w = res.x
            best_quat = matrix_to_quat(
                quat_to_matrix(q0) @ quat_to_matrix(np.concatenate([[1.0], 0.5 * w]))
            )
        if best_margin > tol:
            break

    if best_margin > tol:
        return T0FitResult(FitTag.FITS, best_margin, best_quat)
    if best_margin < -tol:
        return T0FitResult(FitTag.NO_FIT, best_margin, best_quat)
    return T0FitResult(FitTag.INDETERMINATE, best_margin, best_quat)


# ---------------------------------------------------------------------------
# General classification.


class GeneralKind(Enum):
    TRIHEDRAL = "TRIHEDRAL"
    IN_A0 = "IN_A0"
    NOT_IN_A0 = "NOT_IN_A0"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True, eq=False)
class GeneralClassification:
    kind: GeneralKind
    trihedral: Optional[AngleClass] = None
    fit: Optional[T0FitResult] = None
    note: str = ""


_NOT_IN_A0_NOTE = (
    "polygon fits inside the regular pi/3 triangle; this is only a necessary "
    "condition for an inscribed octahedron, not a sufficient one"
)


def classify_general(angle: SolidAngle, tol: float = DEFAULT_TOL) -> GeneralClassification:
    """Route trihedral angles to the exact classifier; for more edges,
    report whether the angle's polygon can be rotated into the regular
    pi/3 triangle (the cannot-be-placed angles are the benign ones for
    polytope-level existence)."""
    if angle.n_edges == 3:
        return GeneralClassification(GeneralKind.TRIHEDRAL, trihedral=classify_trihedral(angle, tol))
    fit = fits_in_T0(angle.polygon, tol)
    if fit.tag is FitTag.NO_FIT:
        return GeneralClassification(GeneralKind.IN_A0, fit=fit)
    if fit.tag is FitTag.FITS:
        return GeneralClassification(GeneralKind.NOT_IN_A0, fit=fit, note=_NOT_IN_A0_NOTE)
    return GeneralClassification(GeneralKind.INDETERMINATE, fit=fit)


# ---------------------------------------------------------------------------
# Deformation paths through the non-special set.


def deformation_path(tri: SphTriangle, steps: int = 60, tol: float = DEFAULT_TOL) -> list:
    """Discrete path of non-special triangles from `tri` to a triangle
    with a side safely above pi/3.

    Follows the two-phase recipe: first grow |v1 v3| to |v1 v2| at a
    fixed vertex angle, then grow both equal sides together.  Every
    emitted triangle is re-verified non-special.
    """
    if steps < 2:
        raise ValueError("a deformation path needs at least 2 steps")
    start = placement_test(tri, tol)
    if start.tag is not ClassTag.NON_SPECIAL:
        raise NotNonSpecial(f"input triangle classifies {start.tag.value}")
    ordered = normalize_ordering(tri)
    c, b, _a = ordered.side_lengths()
    if c > T0_SIDE + tol:
        return [tri]
    theta = vertex_angle(ordered, 0)
    target = T0_SIDE + 0.02
    len1 = c - b
    len2 = target - c
    total = len1 + len2
    path = [tri]
    for f in np.linspace(0.0, 1.0, steps)[1:]:
        g = f * total
        if g <= len1:
            l2, l3 = c, b + g
        else:
            l2 = l3 = c + (g - len1)
        s23 = math.acos(
            min(
                1.0,
                max(
                    -1.0,
                    math.cos(l2) * math.cos(l3)
                    + math.sin(l2) * math.sin(l3) * math.cos(theta),
                ),
            )
        )
        step_tri = triangle_from_sides(l2, l3, s23)
        verdict = placement_test(step_tri, tol)
        if verdict.tag is not ClassTag.NON_SPECIAL:
            raise PathVerificationFailed(
                f"intermediate triangle at f={f:.4f} classified {verdict.tag.value} "
                f"(margin {verdict.margin:.3e})"
            )
        path.append(step_tri)
    return path
