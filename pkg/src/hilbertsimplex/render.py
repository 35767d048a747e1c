"""Raster renderers for the 2-simplex: distance fields and Voronoi cells.

The triangle of 3-coordinate simplex points is drawn in planar
coordinates (vertices of an equilateral triangle with unit side); a
resolution x resolution pixel grid covers its bounding box and pixels
outside the triangle are flagged.  Scalar distance fields go out as
binary PGM (P5) with a list of evenly spaced contour levels; Voronoi
labelings go out as binary PPM (P6) with a fixed 16-color palette.
"""

from __future__ import annotations

import math

import numpy as np

from .validation import POSITIVE_FLOOR, check_simplex_point

TRIANGLE_HEIGHT = math.sqrt(3.0) / 2.0

FIELD_DISTANCES = ("hilbert", "funk", "rfunk", "aitchison")
VORONOI_DISTANCES = ("hilbert", "aitchison", "varlog")

# 16 visually distinct RGB colors (white is reserved for the outside).
PALETTE16 = (
    (230, 25, 75), (60, 180, 75), (255, 225, 25), (0, 130, 200),
    (245, 130, 48), (145, 30, 180), (70, 240, 240), (240, 50, 230),
    (210, 245, 60), (250, 190, 212), (0, 128, 128), (220, 190, 255),
    (170, 110, 40), (255, 250, 200), (128, 0, 0), (170, 255, 195),
)

__all__ = [
    "TRIANGLE_HEIGHT",
    "FIELD_DISTANCES",
    "VORONOI_DISTANCES",
    "PALETTE16",
    "planar_from_barycentric",
    "barycentric_grid",
    "distance_field",
    "voronoi_labels",
    "write_pgm",
    "write_ppm",
    "trace_ball_contour",
    "count_polygon_edges",
]


def planar_from_barycentric(P) -> np.ndarray:
    """Map 3-coordinate simplex points to the plane.

    Vertices go to (0, 0), (1, 0) and (1/2, sqrt(3)/2).
    """
    P = np.asarray(P, dtype=float)
    x = P[..., 1] + 0.5 * P[..., 2]
    y = TRIANGLE_HEIGHT * P[..., 2]
    return np.stack([x, y], axis=-1)


def _barycentric_from_planar(xy: np.ndarray) -> np.ndarray:
    x = xy[..., 0]
    y = xy[..., 1]
    p2 = y / TRIANGLE_HEIGHT
    p1 = x - 0.5 * p2
    p0 = 1.0 - p1 - p2
    return np.stack([p0, p1, p2], axis=-1)


def barycentric_grid(resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Pixel-center barycentric coordinates and the inside-triangle mask.

    Row 0 is the top of the image (largest planar y).  Returns
    ``(coords, inside)`` with shapes (res, res, 3) and (res, res).
    """
    if resolution < 16:
        raise ValueError(f"resolution must be >= 16, got {resolution}")
    cols = (np.arange(resolution) + 0.5) / resolution
    rows_y = TRIANGLE_HEIGHT * (resolution - np.arange(resolution) - 0.5) / resolution
    xy = np.stack(np.broadcast_arrays(cols[None, :], rows_y[:, None]), axis=-1)
    coords = _barycentric_from_planar(xy)
    inside = (coords >= POSITIVE_FLOOR).all(axis=-1)
    return coords, inside


def _check_interior_point(p, name: str) -> np.ndarray:
    p = check_simplex_point(p, name)
    if p.size != 3:
        raise ValueError(f"{name} must have exactly 3 coordinates, got {p.size}")
    return p


def _field_values(distance: str, points: np.ndarray, center: np.ndarray) -> np.ndarray:
    """Vectorized distance of each row of ``points`` to/from ``center``."""
    L = np.log(points) - np.log(center)[None, :]
    if distance == "hilbert":
        return L.max(axis=1) - L.min(axis=1)
    if distance == "funk":  # point -> center
        return L.max(axis=1)
    if distance == "rfunk":  # center -> point
        return (-L).max(axis=1)
    if distance == "aitchison":
        C = L - L.mean(axis=1, keepdims=True)
        return np.sqrt(np.sum(C * C, axis=1))
    raise ValueError(f"unknown field distance {distance!r}; expected one of {FIELD_DISTANCES}")


def distance_field(
    distance: str, center, resolution: int, n_levels: int = 8
) -> tuple[np.ndarray, list[float]]:
    """Rasterize the distance to (or from) a center point over the triangle.

    Returns ``(field, levels)``: the field holds NaN outside the
    triangle, and ``levels`` are ``n_levels`` evenly spaced contour
    values strictly between 0 and the field maximum (a constant radius
    increment).
    """
    if distance not in FIELD_DISTANCES:
        raise ValueError(f"unknown field distance {distance!r}; expected one of {FIELD_DISTANCES}")
    center = _check_interior_point(center, "center")
    coords, inside = barycentric_grid(resolution)
    field = np.full((resolution, resolution), np.nan)
    field[inside] = _field_values(distance, coords[inside], center)
    vmax = float(np.nanmax(field))
    step = vmax / (n_levels + 1)
    levels = [step * k for k in range(1, n_levels + 1)]
    return field, levels


def _site_distance_fields(distance: str, points: np.ndarray, sites: np.ndarray) -> np.ndarray:
    """Stack of per-site distance values, shape (n_sites, n_points)."""
    logs = np.log(points)
    site_logs = np.log(sites)
    if distance == "hilbert":
        # log ratios against each site directly
        D = logs[None, :, :] - site_logs[:, None, :]
        return D.max(axis=2) - D.min(axis=2)
    if distance == "varlog":
        # the same metric evaluated in the zero-sum representation
        v = logs - logs.mean(axis=1, keepdims=True)
        sv = site_logs - site_logs.mean(axis=1, keepdims=True)
        D = v[None, :, :] - sv[:, None, :]
        return D.max(axis=2) - D.min(axis=2)
    if distance == "aitchison":
        v = logs - logs.mean(axis=1, keepdims=True)
        sv = site_logs - site_logs.mean(axis=1, keepdims=True)
        D = v[None, :, :] - sv[:, None, :]
        return np.sqrt(np.sum(D * D, axis=2))
    raise ValueError(f"unknown voronoi distance {distance!r}; expected one of {VORONOI_DISTANCES}")


def voronoi_labels(sites, distance: str, resolution: int) -> np.ndarray:
    """Label every interior pixel with its nearest site.

    Ties go to the lowest site index; pixels outside the triangle get
    label -1.  Duplicate sites are rejected.
    """
    if distance not in VORONOI_DISTANCES:
        raise ValueError(f"unknown voronoi distance {distance!r}; expected one of {VORONOI_DISTANCES}")
    site_list = [_check_interior_point(s, f"site {k}") for k, s in enumerate(sites)]
    if len(site_list) < 2:
        raise ValueError("need at least 2 sites")
    S = np.stack(site_list)
    for a in range(len(site_list)):
        for b in range(a + 1, len(site_list)):
            if np.array_equal(S[a], S[b]):
                raise ValueError(f"duplicate sites {a} and {b}")
    coords, inside = barycentric_grid(resolution)
    fields = _site_distance_fields(distance, coords[inside], S)
    labels = np.full((resolution, resolution), -1, dtype=int)
    labels[inside] = fields.argmin(axis=0)
    return labels


def write_pgm(field: np.ndarray, path) -> None:
    """Write a scalar field as binary PGM (P5).

    Interior values are scaled linearly to 0..254; NaN (outside) pixels
    get 255.
    """
    field = np.asarray(field, dtype=float)
    if field.ndim != 2:
        raise ValueError(f"field must be 2-D, got shape {field.shape}")
    inside = np.isfinite(field)
    vmax = float(field[inside].max()) if inside.any() else 1.0
    scale = 254.0 / vmax if vmax > 0 else 0.0
    gray = np.full(field.shape, 255, dtype=np.uint8)
    gray[inside] = np.clip(np.rint(field[inside] * scale), 0, 254).astype(np.uint8)
    h, w = field.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(gray.tobytes())


def write_ppm(labels: np.ndarray, path) -> None:
    """Write a label raster as binary PPM (P6) with the fixed palette.

    Label -1 (outside) renders white; site labels cycle through
    ``PALETTE16``.
    """
    labels = np.asarray(labels, dtype=int)
    if labels.ndim != 2:
        raise ValueError(f"labels must be 2-D, got shape {labels.shape}")
    rgb = np.full(labels.shape + (3,), 255, dtype=np.uint8)
    inside = labels >= 0
    palette = np.asarray(PALETTE16, dtype=np.uint8)
    rgb[inside] = palette[labels[inside] % len(PALETTE16)]
    h, w = labels.shape
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(rgb.tobytes())


def trace_ball_contour(
    distance: str, center, level: float, n_angles: int = 1024
) -> np.ndarray:
    """Sample the level curve of a distance ball by radial bisection.

    Casts ``n_angles`` rays from the center in planar coordinates and
    bisects the (monotone) distance along each ray for the point at
    ``level``.  Returns the polygon vertices, shape (n_angles, 2).
    """
    if level <= 0:
        raise ValueError(f"level must be > 0, got {level}")
    center = _check_interior_point(center, "center")
    c_xy = planar_from_barycentric(center)

    def dist_at(xy: np.ndarray) -> float:
        p = _barycentric_from_planar(xy)
        return float(_field_values(distance, p[None, :], center)[0])

    points = np.empty((n_angles, 2))
    inset = 1e-9  # keep the ray end strictly inside the triangle
    for k in range(n_angles):
        theta = 2.0 * math.pi * k / n_angles
        direction = np.array([math.cos(theta), math.sin(theta)])
        # barycentric coordinates are affine along the ray
        p0 = center
        g = _barycentric_from_planar(c_xy + direction) - p0
        shrinking = g < 0
        s_max = float(np.min((p0[shrinking] - inset) / -g[shrinking]))
        if dist_at(c_xy + s_max * direction) < level:
            raise ValueError(f"level {level} unreachable along angle {theta:.3f}")
        lo, hi = 0.0, s_max
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            if dist_at(c_xy + mid * direction) < level:
                lo = mid
            else:
                hi = mid
        points[k] = c_xy + 0.5 * (lo + hi) * direction
    return points


def count_polygon_edges(points: np.ndarray, angle_tol: float = 0.05, min_run: int = 5) -> int:
    """Count the straight edges of a densely sampled closed polygon.

    Consecutive segments whose directions differ by less than
    ``angle_tol`` radians belong to one edge; only runs of at least
    ``min_run`` segments count, so isolated corner-cutting segments are
    ignored.  For a convex polygon this equals the vertex count.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[0] < 3:
        raise ValueError("need at least 3 polygon points")
    seg = np.roll(points, -1, axis=0) - points
    angles = np.arctan2(seg[:, 1], seg[:, 0])
    turn = np.diff(np.concatenate([angles, angles[:1]]))
    turn = (turn + math.pi) % (2.0 * math.pi) - math.pi
    is_corner = np.abs(turn) > angle_tol
    corner_idx = np.flatnonzero(is_corner)
    if corner_idx.size == 0:
        return 1
    # runs between consecutive corners (cyclic); count the long ones
    edges = 0
    m = len(points)
    for a, b in zip(corner_idx, np.roll(corner_idx, -1)):
        run = (b - a) % m
        if run == 0:
            run = m
        if run >= min_run:
            edges += 1
    return edges
