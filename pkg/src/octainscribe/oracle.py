"""Brute-force reference implementations used only for cross-validation.

Nothing here shares solver or projection code with the production path:
the direct search enumerates vertex-to-facet assignments and scans
rotation space with its own linear algebra, membership goes through a
cyclic Dykstra projection, and solid-angle areas come from Monte-Carlo
sampling.  Slower and simpler on purpose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np
from scipy.optimize import least_squares

from .angles import SolidAngle
from .polytope import ConvexPolytope
from .pose import UNIT_VERTICES, OctahedronPose, pose_distance
from .rotations import OCTA_GROUP, matrix_to_quat, quat_to_matrix, super_fibonacci_rotations

__all__ = [
    "DirectSearchConfig",
    "DirectSearchResult",
    "direct_angle_search",
    "inscribed_in_cone_check",
    "membership_oracle",
    "mc_solid_angle_area",
]


# ---------------------------------------------------------------------------
# Direct search for octahedra inscribed in a trihedral angle's boundary.


@dataclass(frozen=True)
class DirectSearchConfig:
    n_rotations: int = 400          # rotation samples per assignment
    refine_top: int = 4             # local refinements per assignment
    max_nfev: int = 150             # budget of each local refinement
    plane_tol: float = 1e-9         # vertex-to-plane acceptance (relative)
    sector_tol: float = 1e-9        # sector membership slack (relative)
    dedup_tol: float = 1e-6
    stop_at_first: bool = False     # stop after one verified pose


@dataclass(frozen=True, eq=False)
class DirectSearchResult:
    poses: list
    metadata: dict

    def __bool__(self):
        return bool(self.poses)


def _label_permutations():
    """The 24 permutations of the 6 vertex labels induced by the
    octahedron's rotation group."""
    perms = []
    for g in OCTA_GROUP:
        images = UNIT_VERTICES @ g.T
        perm = []
        for img in images:
            matches = np.where(np.abs(UNIT_VERTICES - img).sum(axis=1) < 1e-9)[0]
            perm.append(int(matches[0]))
        perms.append(tuple(perm))
    return perms


_LABEL_PERMS = _label_permutations()


def _assignments():
    """Vertex-to-facet assignments with per-facet counts (3,2,1) in any
    facet order, or (2,2,2), modulo the octahedron's rotation group."""
    raw = []
    labels = range(6)
    for counts in sorted(set(permutations((3, 2, 1)))) + [(2, 2, 2)]:
        for grp0 in combinations(labels, counts[0]):
            rest = [l for l in labels if l not in grp0]
            for grp1 in combinations(rest, counts[1]):
                grp2 = tuple(l for l in rest if l not in grp1)
                sigma = [0] * 6
                for l in grp1:
                    sigma[l] = 1
                for l in grp2:
                    sigma[l] = 2
                raw.append(tuple(sigma))
    seen = set()
    unique = []
    for sigma in raw:
        canon = min(tuple(sigma[p[i]] for i in range(6)) for p in _LABEL_PERMS)
        if canon not in seen:
            seen.add(canon)
            unique.append(canon)
    return unique


_ASSIGNMENTS = _assignments()


def _sector_frames(angle: SolidAngle):
    E = angle.edges
    n = len(E)
    frames = []
    for i in range(n):
        ea, eb = E[i], E[(i + 1) % n]
        nrm = np.cross(ea, eb)
        nrm = nrm / np.linalg.norm(nrm)
        if float(np.dot(nrm, angle.axis)) > 0:
            nrm = -nrm
        frames.append((np.linalg.inv(np.column_stack([ea, eb, nrm])), nrm))
    return frames


def direct_angle_search(
    angle: SolidAngle, cfg: DirectSearchConfig = DirectSearchConfig()
) -> DirectSearchResult:
    """Search for regular octahedra inscribed in the boundary of a
    trihedral angle by brute force over the two combinatorial patterns:
    counts (3, 2, 1) across the facets in any order, or (2, 2, 2).

    For every assignment the scale is fixed to 1 (inscribed octahedra of
    a cone come in homothety families) and the apex-relative center that
    best satisfies the six plane conditions is a linear least-squares
    solve per rotation; rotation space is scanned on a deterministic grid
    and the best candidates polished by a local simplex search, then
    verified against plane and sector-membership tolerances.  An empty
    result is resolution-limited evidence of absence, quantified in the
    metadata, not a proof.
    """
    if angle.n_edges != 3:
        raise ValueError("direct search handles trihedral angles only")
    frames = _sector_frames(angle)
    normals = np.array([f[1] for f in frames])
    quats = super_fibonacci_rotations(cfg.n_rotations)
    mats = np.array([quat_to_matrix(q) for q in quats])
    RU = np.einsum("kab,jb->kja", mats, UNIT_VERTICES)

    found = []
    tested = 0
    for sigma in _ASSIGNMENTS:
        tested += 1
        A = normals[list(sigma)]
        pinv = np.linalg.pinv(A)
        proj = np.eye(6) - A @ pinv

        NsRU = np.einsum("ja,kja->kj", A, RU)
        rho = np.einsum("ij,kj->ki", proj, -NsRU)
        plane_sq = (rho**2).sum(axis=1)

        centers = np.einsum("ij,kj->ki", pinv, -NsRU)
        X = centers[:, None, :] + RU
        hinge_sq = np.zeros(len(mats))
        for j, f in enumerate(sigma):
            ab = np.einsum("ab,kb->ka", frames[f][0], X[:, j, :])[:, :2]
            hinge_sq += (np.minimum(ab, 0.0) ** 2).sum(axis=1)
        objective = plane_sq + hinge_sq

        order = np.argsort(objective, kind="stable")[: cfg.refine_top]
        for idx in order:
            pose = _refine_assignment(angle, sigma, quats[idx], frames, A, pinv, proj, cfg)
            if pose is None:
                continue
            if any(pose_distance(pose, p) < cfg.dedup_tol for p in found):
                continue
            found.append(pose)
            if cfg.stop_at_first:
                return DirectSearchResult(found, _metadata(cfg, tested, early=True))
    return DirectSearchResult(found, _metadata(cfg, tested, early=False))


def _metadata(cfg: DirectSearchConfig, tested: int, early: bool) -> dict:
    return {
        "assignments_tested": tested,
        "assignments_total": len(_ASSIGNMENTS),
        "n_rotations": cfg.n_rotations,
        "refine_top": cfg.refine_top,
        "plane_tol": cfg.plane_tol,
        "sector_tol": cfg.sector_tol,
        "stopped_at_first": early,
        "note": "empty result is resolution-limited, not a nonexistence proof",
    }


def _solve_center(sigma, R, frames, A, pinv, proj):
    ru = UNIT_VERTICES @ R.T
    b = -np.einsum("ja,ja->j", A, ru)
    plane = proj @ b
    c = pinv @ b
    X = c[None, :] + ru
    hinges = np.empty(12)
    for j, f in enumerate(sigma):
        hinges[2 * j : 2 * j + 2] = np.minimum((frames[f][0] @ X[j])[:2], 0.0)
    return plane, hinges, c, X


def _refine_assignment(angle, sigma, q0, frames, A, pinv, proj, cfg):
    R0 = quat_to_matrix(q0)

    def residuals(w):
        R = quat_to_matrix(np.concatenate([[1.0], 0.5 * w])) @ R0
        plane, hinges, _, _ = _solve_center(sigma, R, frames, A, pinv, proj)
        return np.concatenate([plane, hinges])

    sol = least_squares(
        residuals,
        np.zeros(3),
        method="lm",
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
        max_nfev=cfg.max_nfev,
    )
    R = quat_to_matrix(np.concatenate([[1.0], 0.5 * sol.x])) @ R0
    _, _, c, X = _solve_center(sigma, R, frames, A, pinv, proj)

    span = float(np.linalg.norm(X, axis=1).max())
    if span < 1e-9:
        return None
    plane_lim = cfg.plane_tol * span
    sector_lim = cfg.sector_tol * span
    for j, f in enumerate(sigma):
        alpha, beta, gamma = frames[f][0] @ X[j]
        if abs(gamma) > plane_lim or alpha < -sector_lim or beta < -sector_lim:
            return None
    t = 1.0 / span
    return OctahedronPose(angle.apex + t * c, matrix_to_quat(R), t)


def inscribed_in_cone_check(angle: SolidAngle, pose: OctahedronPose, tol: float = 1e-8) -> bool:
    """Every octahedron vertex lies on some facet sector of the cone
    (within tol relative to its distance from the apex).  Vertices on a
    cone edge count for both adjacent facets."""
    frames = _sector_frames(angle)
    for x in pose.vertices() - angle.apex:
        lim = tol * max(1.0, float(np.linalg.norm(x)))
        on_any = False
        for inv, _ in frames:
            alpha, beta, gamma = inv @ x
            if abs(gamma) <= lim and alpha >= -lim and beta >= -lim:
                on_any = True
                break
        if not on_any:
            return False
    return True


# ---------------------------------------------------------------------------
# Definitional membership test for the smoothed body.


def membership_oracle(
    p: ConvexPolytope,
    epsilon: float,
    x,
    samples: int = 0,
    max_cycles: int = 400,
    seed: int = 0,
) -> bool:
    """x is in the smoothed body iff some center c within epsilon of x has
    its whole epsilon-ball inside P.  The best candidate center is the
    projection of x onto the inner parallel body, computed here by cyclic
    Dykstra iteration over the raw shifted halfspaces (no pruning, no
    face-lattice code shared with the production projection).

    `samples` optionally re-checks the ball condition at random boundary
    points of the candidate ball; for a convex polytope the halfspace
    check is already exact, so 0 skips it.
    """
    return bool(
        membership_oracle_batch(
            p, epsilon, np.asarray(x, dtype=float).reshape(1, 3), samples, max_cycles, seed
        )[0]
    )


def membership_oracle_batch(
    p: ConvexPolytope,
    epsilon: float,
    X,
    samples: int = 0,
    max_cycles: int = 400,
    seed: int = 0,
) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    N = p.normals
    D = p.offsets - epsilon
    scale = max(p.diameter, 1.0)
    Y = X.copy()
    corrections = np.zeros((len(N), len(X), 3))
    for _ in range(max_cycles):
        prev = Y.copy()
        for i in range(len(N)):
            Z = Y + corrections[i]
            viol = Z @ N[i] - D[i]
            step = np.maximum(viol, 0.0)
            Ynew = Z - step[:, None] * N[i]
            corrections[i] = Z - Ynew
            Y = Ynew
        if np.abs(Y - prev).max() < 1e-13 * scale:
            break
    feasible = (Y @ N.T - D[None, :]).max(axis=1) <= 1e-9 * scale
    dist = np.linalg.norm(X - Y, axis=1)
    inside = feasible & (dist <= epsilon)
    if samples > 0:
        rng = np.random.default_rng(seed)
        dirs = rng.normal(size=(samples, 3))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        for k in np.where(inside)[0]:
            pts = Y[k] + epsilon * dirs
            if (pts @ p.normals.T - p.offsets[None, :]).max() > 1e-9 * scale:
                inside[k] = False
    return inside


# ---------------------------------------------------------------------------
# Monte-Carlo solid angle area.


def mc_solid_angle_area(angle: SolidAngle, samples: int = 1_000_000, seed: int = 0):
    """Uniform-direction Monte Carlo estimate of the cone's solid angle.
    Returns (area, standard_error) in steradians."""
    rng = np.random.default_rng(seed)
    dirs = rng.normal(size=(samples, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    E = angle.edges
    n = len(E)
    inside = np.ones(samples, dtype=bool)
    for i in range(n):
        nrm = np.cross(E[i], E[(i + 1) % n])
        nrm = nrm / np.linalg.norm(nrm)
        if float(np.dot(nrm, angle.axis)) > 0:
            nrm = -nrm
        inside &= dirs @ nrm <= 0.0
    frac = inside.mean()
    area = 4.0 * math.pi * frac
    stderr = 4.0 * math.pi * math.sqrt(max(frac * (1.0 - frac), 1e-300) / samples)
    return area, stderr
