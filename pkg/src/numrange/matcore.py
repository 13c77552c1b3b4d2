"""Core complex-matrix operations.

Everything downstream is built from the pieces in this module: the
Hermitian real/imaginary decomposition A = Re(A) + i*Im(A), the rotated
Hermitian family A(theta) = Re(e^{-i theta} A) and its derivative
A'(theta) = Im(e^{-i theta} A), the quadratic-form map x -> x*Ax, a
deterministic cyclic-Jacobi eigensolver for Hermitian matrices,
subspace compressions Q*BQ, and a 3x3 complex Schur triangularization.

All matrices are dense ``numpy`` arrays of ``complex128``.  Tolerances
are relative to the Frobenius norm unless noted otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError

# Hermitian symmetry defect allowed on inputs, relative to ||H||_F.
HERMITIAN_RTOL = 1e-13
# Orthonormality defect allowed on basis blocks.
ORTHONORMAL_TOL = 1e-12
# Unit-norm defect allowed on vectors fed to f_eval.
UNIT_NORM_TOL = 1e-10
# Cyclic Jacobi: off-diagonal target relative to ||H||_F, and sweep cap.
JACOBI_OFF_RTOL = 1e-14
JACOBI_MAX_SWEEPS = 60
# schur3: allowed sub-diagonal residual relative to ||A||_F.
SCHUR_SUBDIAG_RTOL = 1e-10


def as_matrix(A) -> np.ndarray:
    """Coerce to a square finite complex128 matrix."""
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise PreconditionError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M.view(np.float64))):
        raise PreconditionError("matrix entries must be finite")
    return M


def fro(A) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(np.asarray(A)))


def re_part(A) -> np.ndarray:
    """Hermitian real part (A + A*)/2."""
    A = as_matrix(A)
    return (A + A.conj().T) / 2.0


def im_part(A) -> np.ndarray:
    """Hermitian imaginary part (A - A*)/(2i)."""
    A = as_matrix(A)
    return (A - A.conj().T) / 2.0j


def rotate(A, theta: float) -> np.ndarray:
    """Rotated Hermitian part cos(theta)*Re(A) + sin(theta)*Im(A)."""
    A = as_matrix(A)
    return np.cos(theta) * re_part(A) + np.sin(theta) * im_part(A)


def rotate_prime(A, theta: float) -> np.ndarray:
    """Derivative of ``rotate`` in theta: -sin(theta)*Re(A) + cos(theta)*Im(A)."""
    A = as_matrix(A)
    return -np.sin(theta) * re_part(A) + np.cos(theta) * im_part(A)


def rotate_stack(A, thetas) -> np.ndarray:
    """Stack of rotated parts, shape (len(thetas), d, d).

    Vectorized companion of :func:`rotate` for angle grids.
    """
    A = as_matrix(A)
    t = np.atleast_1d(np.asarray(thetas, dtype=float))
    R, S = re_part(A), im_part(A)
    return np.cos(t)[:, None, None] * R + np.sin(t)[:, None, None] * S


def rotate_prime_stack(A, thetas) -> np.ndarray:
    """Stack of derivative parts, shape (len(thetas), d, d)."""
    A = as_matrix(A)
    t = np.atleast_1d(np.asarray(thetas, dtype=float))
    R, S = re_part(A), im_part(A)
    return -np.sin(t)[:, None, None] * R + np.cos(t)[:, None, None] * S


def check_hermitian(H, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Validate Hermitian symmetry, then symmetrize exactly."""
    H = as_matrix(H)
    scale = max(fro(H), 1.0)
    if fro(H - H.conj().T) > rtol * scale * 2.0:
        raise PreconditionError("matrix is not Hermitian within tolerance")
    return (H + H.conj().T) / 2.0


def f_eval(A, x) -> complex:
    """Quadratic form x*Ax on a unit vector (a point of the numerical range)."""
    A = as_matrix(A)
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    if x.shape[0] != A.shape[0]:
        raise PreconditionError("vector length does not match matrix dimension")
    nrm = np.linalg.norm(x)
    if abs(nrm - 1.0) > UNIT_NORM_TOL:
        raise PreconditionError(f"x must be a unit vector (|x| = {nrm!r})")
    return complex(x.conj() @ A @ x)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # unitary, column k pairs with eigenvalue k


def _fix_phases(V: np.ndarray) -> np.ndarray:
    """Make the largest-modulus component of each column real positive."""
    V = V.copy()
    idx = np.argmax(np.abs(V), axis=0)
    for k in range(V.shape[1]):
        piv = V[idx[k], k]
        a = abs(piv)
        if a > 0.0:
            V[:, k] *= piv.conjugate() / a
    return V


def eig_hermitian(H) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Deterministic: fixed sweep order, stable sort of eigenvalues, and
    eigenvector phases fixed by making the largest-modulus component of
    each column real positive.
    """
    H = check_hermitian(H)
    d = H.shape[0]
    V = np.eye(d, dtype=np.complex128)
    if d == 1:
        return SpectralDecomposition(np.array([H[0, 0].real]), V)
    target = JACOBI_OFF_RTOL * max(fro(H), 1e-300)

    M = H.copy()
    for _ in range(JACOBI_MAX_SWEEPS):
        off = fro(M - np.diag(np.diag(M)))
        if off <= target:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = M[p, q]
                m = abs(apq)
                if m <= 1e-300:
                    continue
                phase = apq / m
                tau = (M[q, q].real - M[p, p].real) / (2.0 * m)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # 2x2 unitary [[c*phase, s*phase], [-s, c]] zeroes M[p, q].
                J = np.array([[c * phase, s * phase], [-s, c]], dtype=np.complex128)
                M[:, [p, q]] = M[:, [p, q]] @ J
                M[[p, q], :] = J.conj().T @ M[[p, q], :]
                M[p, q] = 0.0
                M[q, p] = 0.0
                M[p, p] = M[p, p].real
                M[q, q] = M[q, q].real
                V[:, [p, q]] = V[:, [p, q]] @ J

    w = np.diag(M).real.copy()
    order = np.argsort(w, kind="stable")
    return SpectralDecomposition(w[order], _fix_phases(V[:, order]))


def compress(B, Q) -> np.ndarray:
    """Compression Q*BQ of B onto the column span of the orthonormal block Q."""
    B = as_matrix(B)
    Q = np.asarray(Q, dtype=np.complex128)
    if Q.ndim == 1:
        Q = Q[:, None]
    if Q.shape[0] != B.shape[0] or Q.shape[1] > Q.shape[0]:
        raise PreconditionError(f"basis block has invalid shape {Q.shape}")
    gram = Q.conj().T @ Q
    if np.max(np.abs(gram - np.eye(Q.shape[1]))) > ORTHONORMAL_TOL * 10:
        raise PreconditionError("basis columns are not orthonormal")
    return Q.conj().T @ B @ Q


# ---------------------------------------------------------------------------
# 3x3 Schur triangularization
# ---------------------------------------------------------------------------


def cubic_roots(c2: complex, c1: complex, c0: complex) -> np.ndarray:
    """Roots of z^3 + c2 z^2 + c1 z + c0 (complex coefficients).

    Cardano on the depressed cubic, with a dedicated near-multiple-root
    branch: when the discriminant is tiny the simple root is located by
    Newton and the remaining pair is taken from the deflated quadratic,
    which keeps double roots accurate to machine precision instead of
    the sqrt(eps) typical of iterative fallbacks.
    """
    c2, c1, c0 = complex(c2), complex(c1), complex(c0)
    shift = c2 / 3.0
    p = c1 - c2 * c2 / 3.0
    q = 2.0 * c2**3 / 27.0 - c2 * c1 / 3.0 + c0
    s = max(np.sqrt(abs(p)), abs(q) ** (1.0 / 3.0))
    # scale of the original coefficients: p and q of a (near-)triple root
    # are pure rounding noise relative to it, not to the depressed scale
    s0 = max(abs(c2), abs(c1) ** 0.5, abs(c0) ** (1.0 / 3.0), s)
    if s == 0.0:
        return np.full(3, -shift, dtype=np.complex128)

    disc = -4.0 * p**3 - 27.0 * q * q

    def depressed(t):
        return (t * t + p) * t + q

    if abs(disc) < 1e-12 * s**6 or s <= 1e-5 * s0:
        if abs(p) <= 1e-12 * s0 * s0 and abs(q) <= 1e-12 * s0**3:
            roots = np.full(3, 0.0, dtype=np.complex128)
        else:
            t1 = 3.0 * q / p
            for _ in range(8):
                f = depressed(t1)
                fp = 3.0 * t1 * t1 + p
                if abs(fp) < 1e-14 * s * s:
                    break
                step = f / fp
                t1 -= step
                if abs(step) < 1e-17 * s:
                    break
            # deflate: t^2 + t1 t + (p + t1^2)
            b, c = t1, p + t1 * t1
            dq = b * b - 4.0 * c
            if abs(dq) <= 1e-13 * (abs(b) ** 2 + 4.0 * abs(c)):
                dq = 0.0  # collapse the spurious splitting of a double root
            sq = np.sqrt(dq + 0j)
            ra, rb = (-b + sq) / 2.0, (-b - sq) / 2.0
            big = ra if abs(ra) >= abs(rb) else rb
            small = c / big if abs(big) > 0 else -b / 2.0
            roots = np.array([t1, big, small], dtype=np.complex128)
    else:
        half = -q / 2.0
        r = np.sqrt(half * half + p**3 / 27.0 + 0j)
        u3 = half + r if abs(half + r) >= abs(half - r) else half - r
        u = u3 ** (1.0 / 3.0)
        v = -p / (3.0 * u)
        w = np.exp(2j * np.pi / 3.0)
        roots = np.array([u + v, u * w + v / w, u / w + v * w], dtype=np.complex128)

    z = roots - shift

    def full(t):
        return ((t + c2) * t + c1) * t + c0

    for k in range(3):
        for _ in range(2):
            fp = (3.0 * z[k] + 2.0 * c2) * z[k] + c1
            if abs(fp) < 1e-8 * s0 * s0:
                break  # multiple root: a Newton step would be noise/noise
            z[k] -= full(z[k]) / fp
    return z


def char_poly_coeffs3(A: np.ndarray) -> tuple[complex, complex, complex]:
    """Coefficients (c2, c1, c0) of det(z I - A) = z^3 + c2 z^2 + c1 z + c0."""
    tr = np.trace(A)
    minors = (
        A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1]
        + A[0, 0] * A[2, 2] - A[0, 2] * A[2, 0]
        + A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    )
    det = (
        A[0, 0] * (A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1])
        - A[0, 1] * (A[1, 0] * A[2, 2] - A[1, 2] * A[2, 0])
        + A[0, 2] * (A[1, 0] * A[2, 1] - A[1, 1] * A[2, 0])
    )
    return -complex(tr), complex(minors), -complex(det)


def eigvals3(A) -> np.ndarray:
    """Eigenvalues of a 3x3 matrix via the characteristic cubic."""
    A = as_matrix(A)
    if A.shape[0] != 3:
        raise PreconditionError("eigvals3 requires a 3x3 matrix")
    c2, c1, c0 = char_poly_coeffs3(A)
    z = cubic_roots(c2, c1, c0)
    order = np.lexsort((z.imag, z.real))
    return z[order]


def _null3(M: np.ndarray) -> np.ndarray:
    """Unit vector v with M v ~ 0 for a (near-)singular 3x3 matrix."""
    rows = [M[i, :] for i in range(3)]
    best, best_norm = None, -1.0
    for i in range(3):
        for j in range(i + 1, 3):
            c = np.cross(rows[i], rows[j])
            n = np.linalg.norm(c)
            if n > best_norm:
                best, best_norm = c, n
    scale = max(fro(M), 1e-300)
    if best_norm > 1e-13 * scale * scale:
        return best / best_norm
    # rank <= 1: any vector annihilated by the dominant row
    norms = [np.linalg.norm(r) for r in rows]
    i = int(np.argmax(norms))
    if norms[i] <= 1e-300:
        return np.array([1.0, 0.0, 0.0], dtype=np.complex128)
    k = int(np.argmin(np.abs(rows[i])))
    c = np.cross(rows[i], np.eye(3)[k])
    return c / np.linalg.norm(c)


def _householder_to_e1(v: np.ndarray) -> np.ndarray:
    """Hermitian unitary H with H v proportional to e_1 (v a unit vector)."""
    d = v.shape[0]
    a = v[0]
    phase = a / abs(a) if abs(a) > 0 else 1.0
    w = v.astype(np.complex128).copy()
    w[0] += phase
    H = np.eye(d, dtype=np.complex128) - 2.0 * np.outer(w, w.conj()) / (w.conj() @ w)
    return H


def schur3(A) -> tuple[np.ndarray, np.ndarray]:
    """Unitary U and upper triangular T with U*AU = T, for 3x3 A.

    Eigenvalues come from :func:`cubic_roots`; two Householder
    deflations triangularize.  Defective matrices triangularize too.
    Already-triangular input returns (I, A) unchanged.
    """
    A = as_matrix(A)
    if A.shape[0] != 3:
        raise PreconditionError("schur3 requires a 3x3 matrix")
    scale = max(fro(A), 1e-300)
    lower = np.array([A[1, 0], A[2, 0], A[2, 1]])
    if np.linalg.norm(lower) <= 1e-14 * scale:
        return np.eye(3, dtype=np.complex128), A.copy()

    lam = eigvals3(A)
    v = _null3(A - lam[0] * np.eye(3))
    H1 = _householder_to_e1(v)
    A1 = H1 @ A @ H1

    B = A1[1:, 1:]
    # eigenvalues of the 2x2 block by a stable quadratic formula
    tr, det = B[0, 0] + B[1, 1], B[0, 0] * B[1, 1] - B[0, 1] * B[1, 0]
    sq = np.sqrt(tr * tr - 4.0 * det + 0j)
    mu = (tr + sq) / 2.0 if abs(tr + sq) >= abs(tr - sq) else (tr - sq) / 2.0
    N = B - mu * np.eye(2)
    cand = [np.array([N[0, 1], -N[0, 0]]), np.array([N[1, 1], -N[1, 0]])]
    w = max(cand, key=np.linalg.norm)
    nw = np.linalg.norm(w)
    w = w / nw if nw > 1e-300 else np.array([1.0, 0.0], dtype=np.complex128)
    H2 = np.eye(3, dtype=np.complex128)
    H2[1:, 1:] = _householder_to_e1(w)

    U = H1 @ H2
    T = U.conj().T @ A @ U
    sub = np.array([T[1, 0], T[2, 0], T[2, 1]])
    if np.linalg.norm(sub) > SCHUR_SUBDIAG_RTOL * scale:
        raise RuntimeError("schur3 failed to triangularize within tolerance")
    T = np.triu(T)
    return U, T
