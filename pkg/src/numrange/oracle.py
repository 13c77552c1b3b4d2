"""Brute-force ground truth for the numerical range.

Seeded sampling of the quadratic-form map gives an inner approximation
of W(A); its convex hull against the outer support polygon bounds the
discretization error of everything else.  The sampler is counter-based
(splitmix64), so any chunking of the draw reproduces the sequential
stream bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore as mc, rangegeo as rg
from .errors import PreconditionError

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _splitmix64(counters: np.ndarray) -> np.ndarray:
    """splitmix64 output for an array of uint64 counters."""
    z = (counters + np.uint64(1)) * _GOLDEN
    z ^= z >> np.uint64(30)
    z *= _MIX1
    z ^= z >> np.uint64(27)
    z *= _MIX2
    z ^= z >> np.uint64(31)
    return z


def _uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Uniform doubles in (0, 1) at counter positions start..start+count."""
    counters = np.uint64(seed) + np.arange(start, start + count, dtype=np.uint64)
    bits = _splitmix64(counters)
    return ((bits >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def _gaussians(seed: int, start: int, count: int) -> np.ndarray:
    """Standard normals on the counter stream (Box-Muller, both outputs).

    Normals 2k and 2k+1 are derived from the uniform pair at counters
    (2k, 2k+1), so any pair-consistent chunking reproduces the sequential
    stream exactly.
    """
    first = start - (start % 2)
    last = start + count
    pairs = (last - first + 1) // 2
    u = _uniforms(seed, first, 2 * pairs)
    r = np.sqrt(-2.0 * np.log(u[0::2]))
    ang = (2.0 * np.pi) * u[1::2]
    z = np.empty(2 * pairs)
    z[0::2] = r * np.cos(ang)
    z[1::2] = r * np.sin(ang)
    return z[start - first : start - first + count]


def structured_vectors(d: int) -> np.ndarray:
    """Standard basis vectors plus pairwise superpositions with 8 phases.

    These hit eigenvector-exposed points of normal matrices exactly, so
    vertex checks can be exact instead of statistical.
    """
    vecs = [np.eye(d, dtype=complex)[k] for k in range(d)]
    phases = np.exp(2j * np.pi * np.arange(8) / 8.0)
    for i in range(d):
        for j in range(i + 1, d):
            for ph in phases:
                v = np.zeros(d, dtype=complex)
                v[i] = 1.0
                v[j] = ph
                vecs.append(v / np.sqrt(2.0))
    return np.array(vecs)


@dataclass(frozen=True)
class SampleCloud:
    """Sampled values of the quadratic-form map, with their provenance."""

    points: np.ndarray  # complex
    seed: int
    count: int


def sample_range(A, n: int, seed: int = 0) -> SampleCloud:
    """n values x*Ax: structured vectors first, then seeded Gaussians.

    Deterministic given (n, seed); the Gaussian tail is drawn from a
    counter-based stream so chunked evaluation matches sequential.
    """
    A = mc.as_matrix(A)
    if n < 1:
        raise PreconditionError("sample_range requires n >= 1")
    d = A.shape[0]
    xs = structured_vectors(d)
    if n <= len(xs):
        xs = xs[:n]
    else:
        m = n - len(xs)
        g = _gaussians(seed, 0, 2 * m * d)
        z = (g[0::2] + 1j * g[1::2]).reshape(m, d)
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        xs = np.vstack([xs, z])
    pts = np.sum(xs.conj() * (xs @ A.T), axis=1)
    return SampleCloud(points=pts, seed=seed, count=n)


def _prefilter(pts: np.ndarray) -> np.ndarray:
    """Akl-Toussaint reduction: drop points strictly inside the polygon of
    8-direction extremes.  Exact: discarded points cannot be hull vertices."""
    if len(pts) <= 64:
        return pts
    angles = np.arange(8) * np.pi / 4.0
    dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    idx = np.unique(np.argmax(pts @ dirs.T, axis=0))
    if len(idx) < 3:
        return pts
    corners = rg.convex_hull(pts[idx])
    if len(corners) < 3:
        return pts
    scale = max(np.abs(pts).max(), 1e-300)
    margin = 1e-12 * scale
    inside = np.ones(len(pts), dtype=bool)
    for k in range(len(corners)):
        a = corners[k]
        b = corners[(k + 1) % len(corners)]
        cross = (b[0] - a[0]) * (pts[:, 1] - a[1]) - (b[1] - a[1]) * (pts[:, 0] - a[0])
        inside &= cross > margin
    return pts[~inside]


def hull(points) -> rg.ConvexPolygon:
    """Convex hull of a sample cloud (monotone chain), counterclockwise."""
    if isinstance(points, SampleCloud):
        zs = points.points
    else:
        zs = np.asarray(points, dtype=complex).reshape(-1)
    if zs.size < 1:
        raise PreconditionError("hull requires at least one point")
    pts = np.column_stack([zs.real, zs.imag])
    return rg.ConvexPolygon(rg.convex_hull(_prefilter(pts)))


def oracle_gap(A, n: int, N: int, seed: int = 0) -> float:
    """Hausdorff gap between the sampled inner hull and the support polygon."""
    if n < 64 or N < 64:
        raise PreconditionError("oracle_gap requires n, N >= 64")
    inner = hull(sample_range(A, n, seed))
    outer = rg.boundary_polygon(A, N)
    return rg.hausdorff(inner, outer)
