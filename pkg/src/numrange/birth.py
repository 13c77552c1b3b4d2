"""Birth of a flat boundary portion at a multiply generated extreme point.

Given an extreme point whose pre-image has dimension at least two, an
explicit one-parameter family of matrices is constructed whose numerical
ranges carry genuine flat boundary portions shrinking onto the point.
The construction refuses simply generated extreme points: no flat
portion can be born there, which is exactly the necessity half of the
characterization this family witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import extremal, matcore as mc
from .errors import PreconditionError

# Scalar-compression verification tolerance for the recovered height.
ALPHA_RECHECK_RTOL = 1e-9


def default_H(Q) -> np.ndarray:
    """Rank-one Hermitian matrix q1 q1* on the first basis column.

    Its restriction to span(Q) has eigenvalues {1, 0, ...}: never a
    scalar, with the simplest possible spectrum for endpoint formulas.
    """
    Q = np.asarray(Q, dtype=complex)
    if Q.ndim != 2 or Q.shape[1] < 2:
        raise PreconditionError("default_H requires a basis with at least 2 columns")
    q1 = Q[:, 0]
    return np.outer(q1, q1.conj())


@dataclass(frozen=True)
class BirthFamily:
    """Family member(eps) = e^{i theta}(A(theta) + eps P + i (A'(theta) + eps H)).

    P projects onto the pre-image eigenspace of alpha; H tilts the face
    so that member(eps) carries a flat portion of length eps*(mu+ - mu-)
    through the lifted endpoint formulas.  member(0) reconstructs the
    base matrix exactly.
    """

    base: np.ndarray
    alpha: complex
    theta: float
    sigma: str  # '+', '-', or 'm' when the face is a singleton
    support: float
    lam: float
    mu_plus: float
    mu_minus: float
    P: np.ndarray
    H: np.ndarray
    basis: np.ndarray = field(repr=False)

    def member(self, eps: float) -> np.ndarray:
        if eps < 0:
            raise PreconditionError("member requires eps >= 0")
        At = mc.rotate(self.base, self.theta)
        Ap = mc.rotate_prime(self.base, self.theta)
        u = np.exp(1j * self.theta)
        return u * (At + eps * self.P + 1j * (Ap + eps * self.H))

    def expected_endpoints(self, eps: float) -> tuple[complex, complex]:
        """Endpoints of the face of member(eps) at theta, in closed form."""
        u = np.exp(1j * self.theta)
        hi = u * (self.support + eps + 1j * (self.lam + eps * self.mu_plus))
        lo = u * (self.support + eps + 1j * (self.lam + eps * self.mu_minus))
        return lo, hi


def birth_family(A, alpha, H=None, grid: int = 512) -> BirthFamily:
    """Construct the flat-portion birth family at a multiply generated point.

    Raises :class:`PreconditionError` when alpha is not an extreme point
    of W(A), or is extreme but simply generated (pre-image dimension 1):
    no flat boundary portion can be born at such a point.
    """
    A = mc.as_matrix(A)
    alpha = extremal.as_point(alpha)
    scale = 1.0 + mc.fro(A)
    tol = extremal.POINT_MATCH_RTOL * scale

    theta, gval = extremal.supporting_angle(A, alpha, grid)
    if abs(gval) > tol:
        raise PreconditionError(
            f"point {alpha} is not an extreme point of W(A) "
            f"(support gap {gval:.3e})"
        )

    def match(th):
        fd = extremal.face(A, th)
        if fd.length <= tol:
            return fd, "m", fd.basis_m
        if abs(alpha - fd.p_plus) <= tol:
            return fd, "+", fd.basis_plus
        if abs(alpha - fd.p_minus) <= tol:
            return fd, "-", fd.basis_minus
        return fd, None, None

    fd, sigma, basis = match(theta)
    if sigma is None:
        raise PreconditionError(
            f"point {alpha} is not an extreme point of W(A): relative interior "
            "of a flat boundary portion"
        )
    if basis.shape[1] < 2:
        raise PreconditionError(
            f"point {alpha} is simply generated (pre-image dimension 1): "
            "no flat boundary portion can be born at a simply generated "
            "extreme point"
        )

    # The supporting angle of a tangentially supported point is only
    # determined to sqrt(eps) by support values; the scalarity defect of
    # the derivative compressed onto the top cluster is linear in the
    # angle error, so its minimizer pins the angle to machine precision.
    if sigma == "m":

        def scalar_defect(th):
            Q = extremal.max_eigenspace(A, th)
            k = Q.shape[1]
            if k < 2:
                return 1e300
            C = mc.compress(mc.rotate_prime(A, th), Q)
            return float(np.linalg.norm(C - (np.trace(C).real / k) * np.eye(k)))

        refined = extremal._golden_min(scalar_defect, theta - 1e-4, theta + 1e-4)
        if scalar_defect(refined) <= scalar_defect(theta):
            new_fd, new_sigma, new_basis = match(refined)
            if new_sigma == "m" and new_basis.shape[1] >= 2:
                theta, fd, sigma, basis = refined, new_fd, new_sigma, new_basis

    C = mc.compress(mc.rotate_prime(A, theta), basis)
    k = basis.shape[1]
    lam = float(np.trace(C).real) / k
    if np.linalg.norm(C - lam * np.eye(k)) > 1e-7 * scale:
        raise PreconditionError(
            f"pre-image compression at {alpha} is not scalar; the point is "
            "not a common value of the face map"
        )
    recon = np.exp(1j * theta) * (fd.support + 1j * lam)
    if abs(recon - alpha) > ALPHA_RECHECK_RTOL * scale * 10:
        raise PreconditionError(
            f"height extraction failed: e^(i theta)(support + i lam) = {recon} "
            f"does not match alpha = {alpha}"
        )

    if H is None:
        H = default_H(basis)
    else:
        H = mc.check_hermitian(H)
        if H.shape != A.shape:
            raise PreconditionError("H must match the dimension of A")
    K = mc.compress(H, basis)
    mu = mc.eig_hermitian((K + K.conj().T) / 2.0).eigenvalues
    mu_minus, mu_plus = float(mu[0]), float(mu[-1])
    if mu_plus - mu_minus <= 1e-12 * (1.0 + np.linalg.norm(H)):
        raise PreconditionError(
            "H restricted to the pre-image is a scalar; choose H with a "
            "non-scalar restriction"
        )

    P = basis @ basis.conj().T
    return BirthFamily(
        base=A,
        alpha=alpha,
        theta=theta,
        sigma=sigma,
        support=fd.support,
        lam=lam,
        mu_plus=mu_plus,
        mu_minus=mu_minus,
        P=P,
        H=H,
        basis=basis,
    )


@dataclass(frozen=True)
class BirthRow:
    """One row of the verification table for a birth family."""

    eps: float
    flat_length: float
    hausdorff_to_alpha: float
    endpoint_error: float


def verify_birth(family: BirthFamily, eps_list, N: int = 1024) -> list[BirthRow]:
    """Check the flat portions of member(eps) against the closed forms.

    For each eps the face of member(eps) at the supporting angle is
    computed from scratch; the row records its length, its Hausdorff
    distance to {alpha}, and the worst deviation of its endpoints from
    the predicted ones.
    """
    eps_arr = [float(e) for e in eps_list]
    if any(e <= 0 for e in eps_arr):
        raise PreconditionError("verify_birth requires positive eps values")
    if eps_arr != sorted(eps_arr, reverse=True):
        raise PreconditionError("verify_birth requires descending eps values")
    rows = []
    for eps in eps_arr:
        B = family.member(eps)
        fd = extremal.face(B, family.theta)
        lo, hi = family.expected_endpoints(eps)
        endpoint_error = max(abs(fd.p_minus - lo), abs(fd.p_plus - hi))
        d_h = max(abs(fd.p_minus - family.alpha), abs(fd.p_plus - family.alpha))
        rows.append(
            BirthRow(
                eps=eps,
                flat_length=fd.length,
                hausdorff_to_alpha=d_h,
                endpoint_error=endpoint_error,
            )
        )
    return rows
