"""Exposed faces of the numerical range and pre-images of its extreme points.

An exposed face with outward normal ``e^{i theta}`` is recovered from the
top eigenvalue cluster of the rotated part ``A(theta)``: the compression
of ``A'(theta)`` onto that cluster is a Hermitian operator whose extreme
eigenvalues are the one-sided derivatives of the support curve, and whose
extreme eigenspaces are exactly the pre-images of the two face endpoints.
This module computes faces, eigenvalue-curve derivatives, flat boundary
portions (nondegenerate faces), and classifies boundary points as exposed
or non-exposed, simply or multiply generated.

Planar points are represented as complex numbers; the plane inner product
is ``<a, b> = Re(a * conj(b))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore as mc
from .errors import PreconditionError

# Relative width of an eigenvalue cluster (single source of truth for the
# whole package: multiplicities, pre-image dimensions, crossing detection).
CLUSTER_RTOL = 1e-8
# Faces longer than this (relative) count as flat boundary portions.
FLAT_LENGTH_RTOL = 1e-7
# Distance at which a point counts as a member of a face.
FACE_MEMBER_RTOL = 1e-9
# A normal arc no longer than this is treated as a single supporting line.
ARC_SINGLE_ANGLE = 1e-6
# Matching tolerance for identifying a point with a face endpoint.
POINT_MATCH_RTOL = 1e-8
# Crossing refinement target for the top eigenvalue gap.
GAP_REFINE_RTOL = 1e-12

_BISECT_STEPS = 48


def cluster_tolerance(A) -> float:
    """Absolute eigenvalue-grouping tolerance for the matrix A."""
    return CLUSTER_RTOL * (1.0 + mc.fro(A))


def as_point(p) -> complex:
    """Coerce a planar point given as complex or an (x, y) pair."""
    if isinstance(p, complex | float | int | np.complexfloating | np.floating | np.integer):
        return complex(p)
    arr = np.asarray(p, dtype=float).reshape(-1)
    if arr.shape[0] != 2:
        raise PreconditionError("planar point must be complex or a pair (x, y)")
    return complex(arr[0], arr[1])


def _inner(a: complex, b: complex) -> float:
    return (a * np.conj(b)).real


def max_eigenspace(A, theta: float) -> np.ndarray:
    """Orthonormal basis of the top eigenvalue cluster of A(theta)."""
    A = mc.as_matrix(A)
    dec = mc.eig_hermitian(mc.rotate(A, theta))
    w = dec.eigenvalues
    keep = w >= w[-1] - cluster_tolerance(A)
    return dec.eigenvectors[:, keep]


@dataclass(frozen=True)
class FaceDescriptor:
    """Exposed face with outward normal ``e^{i theta}``.

    ``p_plus``/``p_minus`` are the face endpoints, ``deriv_plus`` and
    ``deriv_minus`` the one-sided support-curve derivatives (extreme
    eigenvalues of the compressed derivative part), and the basis blocks
    span the pre-images: the top cluster and the endpoint eigenspaces.
    """

    theta: float
    support: float
    p_plus: complex
    p_minus: complex
    deriv_plus: float
    deriv_minus: float
    basis_m: np.ndarray
    basis_plus: np.ndarray
    basis_minus: np.ndarray

    @property
    def length(self) -> float:
        return abs(self.p_plus - self.p_minus)

    def distance(self, p) -> float:
        """Euclidean distance from a planar point to the face segment."""
        p = as_point(p)
        u = np.exp(1j * self.theta)
        radial = self.support - _inner(p, u)
        eta = _inner(p, 1j * u)
        lo, hi = self.deriv_minus, self.deriv_plus
        off = max(lo - eta, 0.0, eta - hi)
        return float(np.hypot(radial, off))


def face(A, theta: float) -> FaceDescriptor:
    """Compute the exposed face of W(A) with outward normal ``e^{i theta}``."""
    A = mc.as_matrix(A)
    ctol = cluster_tolerance(A)
    dec = mc.eig_hermitian(mc.rotate(A, theta))
    w, V = dec.eigenvalues, dec.eigenvectors
    support = float(w[-1])
    Qm = V[:, w >= support - ctol]

    C = mc.compress(mc.rotate_prime(A, theta), Qm)
    C = (C + C.conj().T) / 2.0
    cdec = mc.eig_hermitian(C)
    mu, W = cdec.eigenvalues, cdec.eigenvectors
    lo, hi = float(mu[0]), float(mu[-1])
    basis_plus = Qm @ W[:, mu >= hi - ctol]
    basis_minus = Qm @ W[:, mu <= lo + ctol]

    u = np.exp(1j * theta)
    return FaceDescriptor(
        theta=float(theta),
        support=support,
        p_plus=complex(u * (support + 1j * hi)),
        p_minus=complex(u * (support + 1j * lo)),
        deriv_plus=hi,
        deriv_minus=lo,
        basis_m=Qm,
        basis_plus=basis_plus,
        basis_minus=basis_minus,
    )


def _clusters(w: np.ndarray, ctol: float) -> list[slice]:
    """Consecutive index ranges of eigenvalues closer than ctol."""
    out, start = [], 0
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] - w[k - 1] > ctol:
            out.append(slice(start, k))
            start = k
    return out


def eigencurve_derivatives(A, theta: float) -> list[tuple[float, float, int]]:
    """Eigenvalue curves of A(theta) with one-sided derivatives at theta.

    Returns one ``(value, derivative, multiplicity)`` triple per curve,
    ascending.  Simple eigenvalues get the quadratic form of A'(theta) on
    their eigenvector; a cluster gets the eigenvalues of the compression
    of A'(theta) onto its eigenspace, matched in ascending order.
    """
    A = mc.as_matrix(A)
    dec = mc.eig_hermitian(mc.rotate(A, theta))
    w, V = dec.eigenvalues, dec.eigenvectors
    Ap = mc.rotate_prime(A, theta)
    out: list[tuple[float, float, int]] = []
    for cl in _clusters(w, cluster_tolerance(A)):
        size = cl.stop - cl.start
        if size == 1:
            v = V[:, cl.start]
            out.append((float(w[cl.start]), float((v.conj() @ Ap @ v).real), 1))
        else:
            Q = V[:, cl]
            C = mc.compress(Ap, Q)
            slopes = mc.eig_hermitian((C + C.conj().T) / 2.0).eigenvalues
            for j in range(size):
                out.append((float(w[cl.start + j]), float(slopes[j]), size))
    return out


# ---------------------------------------------------------------------------
# grid scans
# ---------------------------------------------------------------------------


class _Scan:
    """Batched spectral data of A(theta) over a uniform angle grid."""

    def __init__(self, A: np.ndarray, grid: int):
        self.A = A
        self.d = A.shape[0]
        self.thetas = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
        stack = mc.rotate_stack(A, self.thetas)
        w, V = np.linalg.eigh(stack)
        self.eigvals = w  # (grid, d) ascending
        self.eigvecs = V
        self.ctol = cluster_tolerance(A)
        prime = mc.rotate_prime_stack(A, self.thetas)
        top = V[:, :, -1]
        self.top_slope = np.real(np.einsum("ni,nij,nj->n", top.conj(), prime, top))
        if self.d > 1:
            self.gap = w[:, -1] - w[:, -2]
        else:
            self.gap = np.full(grid, np.inf)

    @property
    def support(self) -> np.ndarray:
        return self.eigvals[:, -1]

    def touch_points(self) -> tuple[np.ndarray, np.ndarray]:
        """Face endpoints over the grid: (points p-, points p+), complex.

        Angles with a simple top eigenvalue contribute the single touch
        point ``e^{i theta}(support + i * slope)``; clustered angles fall
        back to the full face computation.
        """
        u = np.exp(1j * self.thetas)
        pts = u * (self.support + 1j * self.top_slope)
        lo = pts.copy()
        hi = pts.copy()
        for j in np.nonzero(self.gap <= self.ctol)[0]:
            fd = face(self.A, self.thetas[j])
            lo[j], hi[j] = fd.p_minus, fd.p_plus
        return lo, hi


def _support_at(A, theta: float) -> float:
    return float(np.linalg.eigvalsh(mc.rotate(A, theta))[-1])


def _gap_at(A, theta: float) -> float:
    w = np.linalg.eigvalsh(mc.rotate(A, theta))
    return float(w[-1] - w[-2])


def _golden_min(f, lo: float, hi: float, iters: int = 90) -> float:
    """Golden-section minimizer returning the best abscissa."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
        if b - a < 1e-13:
            break
    return (a + b) / 2.0


def _circular_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Maximal runs of True in a circular boolean array, as (start, stop)."""
    n = mask.size
    if mask.all():
        return [(0, n)]
    if not mask.any():
        return []
    ext = np.concatenate([mask, mask])
    runs = []
    j = 0
    while j < n:
        if ext[j] and not ext[j - 1 if j > 0 else n - 1]:
            k = j
            while ext[k]:
                k += 1
            runs.append((j, k))
            j = k
        else:
            j += 1
    return runs


@dataclass(frozen=True)
class FlatPortion:
    """Maximal segment in the boundary, with its outward normal angle.

    ``endpoints`` are ordered counterclockwise along the boundary, i.e.
    (p_minus, p_plus) of the face at the normal angle.
    """

    theta: float
    endpoints: tuple[complex, complex]
    length: float


def _flat_candidates(A: np.ndarray, scan: _Scan) -> list[float]:
    """Refined angles where the top eigenvalue of A(theta) is degenerate.

    Two regimes per candidate run of the gap scan: a transversal crossing
    (the gap dips to zero at one interior angle, located by golden-section
    minimization) and a degenerate band (the gap is already zero across
    grid points, e.g. repeated diagonal entries; the faces of interest sit
    at the two transition edges, located by bisection).
    """
    grid = scan.thetas.size
    step = 2.0 * np.pi / grid
    scale = mc.fro(A)
    # eigenvalue curves of A(theta) are Lipschitz with constant <= ||A||_F
    thresh = 2.0 * step * scale + 10.0 * scan.ctol
    mask = scan.gap <= thresh
    gap_tol = GAP_REFINE_RTOL * (1.0 + scale)
    found: list[float] = []
    for start, stop in _circular_runs(mask):
        idx = np.arange(start, stop) % grid
        band = scan.gap[idx] <= gap_tol
        lo = scan.thetas[start % grid] - step
        hi = lo + (stop - start + 1) * step
        if band.sum() >= 2 and stop - start < grid:
            band_idx = idx[band]
            found.append(float(scan.thetas[band_idx[len(band_idx) // 2]]))
            left_out, left_in = lo, scan.thetas[band_idx[0]]
            for _ in range(_BISECT_STEPS):
                mid = (left_out + left_in) / 2.0
                if _gap_at(A, mid) <= gap_tol:
                    left_in = mid
                else:
                    left_out = mid
            found.append(left_in % (2.0 * np.pi))
            right_in = scan.thetas[band_idx[0]] + (band_idx.size - 1) * step
            right_out = hi
            for _ in range(_BISECT_STEPS):
                mid = (right_in + right_out) / 2.0
                if _gap_at(A, mid) <= gap_tol:
                    right_in = mid
                else:
                    right_out = mid
            found.append(right_in % (2.0 * np.pi))
        elif stop - start >= grid:
            # degenerate at every angle: the range is a point or the matrix
            # is a scalar shift of a degenerate family; one probe suffices
            found.append(0.0)
        else:
            # refine every local minimum of the sampled gap inside the run:
            # nearly parallel eigenvalue curves can keep a whole arc below
            # the scan threshold, and a single wide bracket would not be
            # unimodal
            g = scan.gap[idx]
            left = np.concatenate([[scan.gap[(start - 1) % grid]], g[:-1]])
            right = np.concatenate([g[1:], [scan.gap[stop % grid]]])
            local_min = np.nonzero((g <= left) & (g <= right))[0]
            for m in local_min[:64]:
                t0 = scan.thetas[start % grid] + m * step
                t = _golden_min(lambda th: _gap_at(A, th), t0 - step, t0 + step)
                if _gap_at(A, t) <= gap_tol:
                    found.append(t % (2.0 * np.pi))
    found.sort()
    out: list[float] = []
    for t in found:
        if all(min(abs(t - s), 2.0 * np.pi - abs(t - s)) > 1e-9 for s in out):
            out.append(t)
    return out


def flat_portions(A, grid: int = 512) -> list[FlatPortion]:
    """All flat boundary portions of W(A), located by a gap scan.

    The grid is scanned for angles where the two largest eigenvalues of
    A(theta) nearly cross; each candidate is refined by golden-section
    minimization of the gap, and kept when the face there is a genuine
    segment.  A degenerate one-dimensional W(A) reports itself under
    both of its normals.
    """
    A = mc.as_matrix(A)
    if grid < 64:
        raise PreconditionError("flat_portions requires grid >= 64")
    if A.shape[0] == 1:
        return []
    scan = _Scan(A, grid)
    length_tol = FLAT_LENGTH_RTOL * (1.0 + mc.fro(A))
    portions = []
    for t in _flat_candidates(A, scan):
        fd = face(A, t)
        if fd.length > length_tol:
            portions.append(FlatPortion(theta=t, endpoints=(fd.p_minus, fd.p_plus), length=fd.length))
    portions.sort(key=lambda fp: fp.theta)
    dedup: list[FlatPortion] = []
    for fp in portions:
        if not dedup or min(abs(fp.theta - dedup[-1].theta), 2 * np.pi - abs(fp.theta - dedup[-1].theta)) > 1e-8:
            dedup.append(fp)
    if len(dedup) > 1:
        gap_angle = dedup[0].theta + 2 * np.pi - dedup[-1].theta
        if gap_angle <= 1e-8:
            dedup.pop()
    return dedup


@dataclass(frozen=True)
class ExtremePointReport:
    """A boundary point with its pre-image and exposure classification.

    ``normal_arc`` is the closed interval of supporting angles (radians,
    possibly wrapping past 2 pi); ``kind`` is "exposed" or "non-exposed";
    ``multiply_generated`` records whether the pre-image has dimension
    at least two.
    """

    point: complex
    kind: str
    preimage: np.ndarray
    multiply_generated: bool
    normal_arc: tuple[float, float]


def _strict_gap_tol(A) -> float:
    """Machine-level degeneracy threshold for face membership probes.

    The reported faces and pre-images group eigenvalues at the package
    cluster tolerance, but deciding whether a *probe angle* carries a
    genuine segment must not: near a transversal crossing the top gap is
    quadratic in the angle, and the 1e-8 grouping would smear the normal
    arc of the crossing point by ~1e-4 rad, turning round boundary
    points into fake corners.
    """
    return 1e-14 * (1.0 + mc.fro(A))


def _segment_at(A: np.ndarray, theta: float, ctol: float) -> tuple[float, float, float]:
    """(support, mu_min, mu_max) of the face at theta, grouping with ctol."""
    dec = mc.eig_hermitian(mc.rotate(A, theta))
    w, V = dec.eigenvalues, dec.eigenvectors
    Qm = V[:, w >= w[-1] - ctol]
    if Qm.shape[1] == 1:
        v = Qm[:, 0]
        mu = float((v.conj() @ mc.rotate_prime(A, theta) @ v).real)
        return float(w[-1]), mu, mu
    C = mc.compress(mc.rotate_prime(A, theta), Qm)
    muv = mc.eig_hermitian((C + C.conj().T) / 2.0).eigenvalues
    return float(w[-1]), float(muv[0]), float(muv[-1])


def _segment_distance(p: complex, theta: float, support: float, mu_lo: float, mu_hi: float) -> float:
    u = np.exp(1j * theta)
    radial = support - _inner(p, u)
    eta = _inner(p, 1j * u)
    off = max(mu_lo - eta, 0.0, eta - mu_hi)
    return float(np.hypot(radial, off))


def _face_distance_batch(A: np.ndarray, pts: np.ndarray, thetas: np.ndarray, strict_tol: float) -> np.ndarray:
    """Distances from pts[i] to the face of W(A) at thetas[i].

    Faces are singletons unless the top eigenvalue is degenerate to
    machine precision (see :func:`_strict_gap_tol`).
    """
    stack = mc.rotate_stack(A, thetas)
    w, V = np.linalg.eigh(stack)
    prime = mc.rotate_prime_stack(A, thetas)
    top = V[:, :, -1]
    slope = np.real(np.einsum("ni,nij,nj->n", top.conj(), prime, top))
    u = np.exp(1j * thetas)
    out = np.empty(len(thetas))
    if w.shape[1] > 1:
        clustered = (w[:, -1] - w[:, -2]) <= strict_tol
    else:
        clustered = np.zeros(len(thetas), dtype=bool)
    q = u * (w[:, -1] + 1j * slope)
    out[~clustered] = np.abs(pts[~clustered] - q[~clustered])
    for j in np.nonzero(clustered)[0]:
        sup, lo, hi = _segment_at(A, thetas[j], strict_tol)
        out[j] = _segment_distance(pts[j], thetas[j], sup, lo, hi)
    return out


def _refine_arc_edges(A, pts, inner, outer, member_tol, strict_tol):
    """Batched bisection for the edge of each point's supporting arc.

    ``inner[i]`` is an angle where pts[i] lies on the face, ``outer[i]``
    one where it does not; returns the membership boundary.
    """
    inner = np.array(inner, dtype=float)
    outer = np.array(outer, dtype=float)
    pts = np.asarray(pts, dtype=complex)
    for _ in range(_BISECT_STEPS):
        mid = (inner + outer) / 2.0
        dist = _face_distance_batch(A, pts, mid, strict_tol)
        member = dist <= member_tol
        inner[member] = mid[member]
        outer[~member] = mid[~member]
    return inner


def extreme_points(A, grid: int = 512) -> list[ExtremePointReport]:
    """Classify all face endpoints of W(A) sampled on an angle grid.

    Covers every endpoint seen on the grid plus the refined endpoints of
    every flat portion.  Each deduplicated point gets its supporting-angle
    arc (refined by bisection), an exposed/non-exposed verdict, and its
    pre-image basis.
    """
    A = mc.as_matrix(A)
    if grid < 64:
        raise PreconditionError("extreme_points requires grid >= 64")
    scale = 1.0 + mc.fro(A)
    dedup_tol = 1e-10 * scale
    member_tol = FACE_MEMBER_RTOL * scale
    match_tol = POINT_MATCH_RTOL * scale

    if A.shape[0] == 1:
        p = complex(A[0, 0])
        return [
            ExtremePointReport(
                point=p,
                kind="exposed",
                preimage=np.ones((1, 1), dtype=complex),
                multiply_generated=False,
                normal_arc=(0.0, 2.0 * np.pi),
            )
        ]

    scan = _Scan(A, grid)
    lo_pts, hi_pts = scan.touch_points()
    portions = flat_portions(A, grid)

    # (angle, point) candidates, sorted by angle then point for stable dedup
    cand: list[tuple[float, complex]] = []
    for j, t in enumerate(scan.thetas):
        cand.append((float(t), complex(lo_pts[j])))
        if abs(hi_pts[j] - lo_pts[j]) > dedup_tol:
            cand.append((float(t), complex(hi_pts[j])))
    for fp in portions:
        cand.append((fp.theta, fp.endpoints[0]))
        cand.append((fp.theta, fp.endpoints[1]))
    cand.sort(key=lambda c: (c[0], c[1].real, c[1].imag))

    uniq_pts: list[complex] = []
    uniq_theta: list[float] = []
    arr = np.array([c[1] for c in cand])
    taken = np.zeros(len(cand), dtype=bool)
    for i in range(len(cand)):
        if taken[i]:
            continue
        same = np.abs(arr - arr[i]) <= dedup_tol
        taken |= same
        uniq_pts.append(cand[i][1])
        uniq_theta.append(cand[i][0])

    pts = np.array(uniq_pts)
    th0 = np.array(uniq_theta)
    n = len(pts)

    # membership matrix of every (point, grid angle) pair, to find arc runs
    step = 2.0 * np.pi / grid
    strict_tol = _strict_gap_tol(A)
    u_grid = np.exp(1j * scan.thetas)
    q_grid = u_grid * (scan.support + 1j * scan.top_slope)
    D = np.abs(pts[:, None] - q_grid[None, :])
    for j in np.nonzero(scan.gap <= strict_tol)[0]:
        sup, lo, hi = _segment_at(A, scan.thetas[j], strict_tol)
        uj = u_grid[j]
        radial = sup - (pts * np.conj(uj)).real
        eta = (pts * np.conj(1j * uj)).real
        off = np.maximum(np.maximum(lo - eta, 0.0), eta - hi)
        D[:, j] = np.hypot(radial, off)
    member = D <= member_tol

    left_inner = th0.copy()
    left_outer = th0.copy()
    right_inner = th0.copy()
    right_outer = th0.copy()
    for i in range(n):
        j0 = int(round((th0[i] % (2 * np.pi)) / step)) % grid
        row = member[i]
        if not row[j0]:
            # seed angle came from a refined portion angle off the grid
            left_inner[i] = th0[i]
            left_outer[i] = th0[i] - step
            right_inner[i] = th0[i]
            right_outer[i] = th0[i] + step
        elif row.all():
            left_inner[i] = 0.0
            left_outer[i] = 0.0
            right_inner[i] = 2.0 * np.pi
            right_outer[i] = 2.0 * np.pi
        else:
            jl = j0
            while row[(jl - 1) % grid]:
                jl -= 1
            jr = j0
            while row[(jr + 1) % grid]:
                jr += 1
            left_inner[i] = jl * step
            left_outer[i] = (jl - 1) * step
            right_inner[i] = jr * step
            right_outer[i] = (jr + 1) * step

    need = left_outer != left_inner
    lo_edge = left_inner.copy()
    if need.any():
        lo_edge[need] = _refine_arc_edges(
            A, pts[need], left_inner[need], left_outer[need], member_tol, strict_tol
        )
    need = right_outer != right_inner
    hi_edge = right_inner.copy()
    if need.any():
        hi_edge[need] = _refine_arc_edges(
            A, pts[need], right_inner[need], right_outer[need], member_tol, strict_tol
        )

    flat_ends = np.array(
        [e for fp in portions for e in fp.endpoints], dtype=complex
    ) if portions else np.empty(0, dtype=complex)

    reports = []
    for i in range(n):
        arc = (float(lo_edge[i]), float(hi_edge[i]))
        arc_len = arc[1] - arc[0]
        is_flat_end = bool(flat_ends.size) and bool(
            np.min(np.abs(flat_ends - pts[i])) <= 10 * match_tol
        )
        if arc_len <= ARC_SINGLE_ANGLE:
            kind = "non-exposed" if is_flat_end else "exposed"
            theta_rep = (arc[0] + arc[1]) / 2.0
        else:
            kind = "exposed"
            theta_rep = (arc[0] + arc[1]) / 2.0
        fd = face(A, theta_rep)
        if fd.length <= match_tol:
            basis = fd.basis_m
        elif abs(pts[i] - fd.p_plus) <= abs(pts[i] - fd.p_minus):
            basis = fd.basis_plus
        else:
            basis = fd.basis_minus
        reports.append(
            ExtremePointReport(
                point=complex(pts[i]),
                kind=kind,
                preimage=basis,
                multiply_generated=basis.shape[1] >= 2,
                normal_arc=arc,
            )
        )
    reports.sort(key=lambda r: (np.angle(r.point - pts.mean()) if n > 1 else 0.0))
    return reports


def _support_slope_at(A, theta: float) -> float:
    """Derivative of the support curve at theta (top eigenvector slope)."""
    w, V = np.linalg.eigh(mc.rotate(A, theta))
    x = V[:, -1]
    return float((x.conj() @ mc.rotate_prime(A, theta) @ x).real)


def supporting_angle(A, p, grid: int = 512) -> tuple[float, float]:
    """Angle maximizing g(theta) = <p, e^{i theta}> - support(theta), and g there.

    For p on the boundary the maximum is ~0 at a supporting angle; for an
    interior point it is strictly negative (minus the depth), and for an
    exterior point strictly positive (the distance).  A grid scan finds
    the maximizing cell; bisection on the sign change of g' then pins the
    angle to machine precision (golden-section alone would stall at the
    sqrt(eps) resolution of the flat quadratic top).  On plateaus (fat
    normal cones) any maximizing angle is returned.
    """
    A = mc.as_matrix(A)
    p = as_point(p)
    scan_thetas = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    sup = np.linalg.eigvalsh(mc.rotate_stack(A, scan_thetas))[:, -1]
    g = p.real * np.cos(scan_thetas) + p.imag * np.sin(scan_thetas) - sup
    j = int(np.argmax(g))
    step = 2.0 * np.pi / grid

    def g_at(th):
        return p.real * np.cos(th) + p.imag * np.sin(th) - _support_at(A, th)

    def g_slope(th):
        u = np.exp(1j * th)
        return _inner(p, 1j * u) - _support_slope_at(A, th)

    lo, hi = scan_thetas[j] - step, scan_thetas[j] + step
    slo, shi = g_slope(lo), g_slope(hi)
    plateau_tol = 1e-11 * (1.0 + mc.fro(A)) * (1.0 + abs(p))
    if slo >= 0.0 >= shi:
        for _ in range(80):
            mid = (lo + hi) / 2.0
            if g_slope(mid) >= 0.0:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-15:
                break
        t = (lo + hi) / 2.0
    elif abs(slo) <= plateau_tol and abs(shi) <= plateau_tol:
        t = scan_thetas[j]
    else:
        t = _golden_min(lambda th: -g_at(th), lo - step, hi + step)
    return t % (2.0 * np.pi), g_at(t)


def preimage(A, p, grid: int = 512) -> np.ndarray:
    """Orthonormal basis of the pre-image of an extreme point p of W(A).

    Raises :class:`PreconditionError` when p is not an extreme point:
    interior points, exterior points, and relative-interior points of
    flat boundary portions are all rejected with a diagnostic.
    """
    A = mc.as_matrix(A)
    p = as_point(p)
    scale = 1.0 + mc.fro(A)
    tol = POINT_MATCH_RTOL * scale
    theta, gval = supporting_angle(A, p, grid)
    if gval < -tol:
        raise PreconditionError(
            f"point {p} is not an extreme point of W(A): interior point "
            f"(depth {-gval:.3e})"
        )
    if gval > tol:
        raise PreconditionError(
            f"point {p} is not an extreme point of W(A): lies outside the range "
            f"(distance {gval:.3e})"
        )
    fd = face(A, theta)
    if fd.length <= tol:
        return fd.basis_m
    if abs(p - fd.p_plus) <= tol:
        return fd.basis_plus
    if abs(p - fd.p_minus) <= tol:
        return fd.basis_minus
    if fd.distance(p) <= tol:
        raise PreconditionError(
            f"point {p} is not an extreme point of W(A): relative interior "
            "of a flat boundary portion"
        )
    raise PreconditionError(f"point {p} is not an extreme point of W(A)")
