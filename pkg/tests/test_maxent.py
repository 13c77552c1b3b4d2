import numpy as np
import pytest

from numrange import matcore as mc, maxent as me
from numrange.errors import PreconditionError

from conftest import (
    CIRCLE_POINT,
    DISK,
    DISK_EIG_BOUNDARY,
    TRIANGLE,
    random_matrix,
)

LOG2 = np.log(2.0)


def brute_force_feasible_entropy(rng, A, alpha, n=4000):
    """Best entropy among randomly generated nearly-feasible states."""
    d = A.shape[0]
    best = -1.0
    for _ in range(n):
        G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        rho = G @ G.conj().T
        rho /= np.trace(rho).real
        if abs(np.trace(A @ rho) - alpha) < 2e-2:
            best = max(best, me.entropy(rho))
    return best


def test_entropy_examples():
    assert me.entropy(np.eye(4) / 4) == pytest.approx(np.log(4))
    assert me.entropy(np.diag([1.0, 0.0, 0.0])) == pytest.approx(0.0, abs=1e-12)
    assert me.entropy(np.diag([0.75, 0.25])) == pytest.approx(
        -(0.75 * np.log(0.75) + 0.25 * np.log(0.25))
    )
    with pytest.raises(PreconditionError):
        me.entropy(np.diag([0.9, 0.2]))
    with pytest.raises(PreconditionError):
        me.entropy(np.diag([1.5, -0.5]))


def test_maxent_interior_disk_center():
    res = me.maxent_interior(DISK, 0.0 + 0.0j)
    assert np.allclose(res.rho, np.eye(2) / 2, atol=1e-10)
    assert res.entropy == pytest.approx(LOG2, abs=1e-10)
    assert res.residual <= 1e-8


def test_maxent_interior_classical_bit():
    res = me.maxent_interior(np.diag([0.0, 1.0]), 0.75 + 0j)
    assert np.allclose(np.diag(res.rho).real, [0.25, 0.75], atol=1e-9)
    assert res.entropy == pytest.approx(0.5623351446188083, abs=1e-9)
    assert res.dual_point is not None


def test_maxent_interior_strictly_mixed(rng):
    res = me.maxent_interior(DISK_EIG_BOUNDARY, 0.0 + 0.0j)
    assert res.entropy >= LOG2 - 1e-9
    assert res.residual <= 1e-8
    # no sampled feasible state beats the solver
    best = brute_force_feasible_entropy(rng, DISK_EIG_BOUNDARY, 0.0 + 0.0j)
    assert res.entropy >= best - 5e-2


def test_maxent_interior_rejects_boundary():
    with pytest.raises(PreconditionError):
        me.maxent_interior(DISK, 1.0 + 0j)
    with pytest.raises(PreconditionError):
        me.maxent_interior(DISK, 1.5 + 0j)


def _project_to_constraint(A, sigma0, alpha, rho_star):
    """Brute-force projection onto the constraint set: kill the linear
    drift along the traceless observable directions, then mix toward the
    feasible optimum until positive semidefinite again."""
    d = A.shape[0]
    R, S = mc.re_part(A), mc.im_part(A)
    dirs = [O - np.trace(O).real / d * np.eye(d) for O in (R, S)]
    drift = complex(np.trace(A @ sigma0) - alpha)
    M = np.array([[np.trace(Oi @ Dj).real for Dj in dirs] for Oi in (R, S)])
    try:
        c = np.linalg.solve(M, [drift.real, drift.imag])
    except np.linalg.LinAlgError:
        return None
    sigma = sigma0 - c[0] * dirs[0] - c[1] * dirs[1]
    lo = float(np.linalg.eigvalsh(sigma)[0])
    if lo < 0:
        # rho_star satisfies the same constraints, so mixing preserves them
        t = -lo / (-lo + max(float(np.linalg.eigvalsh(rho_star)[0]), 1e-6))
        t = min(1.0, t * 1.01)
        sigma = (1 - t) * sigma + t * rho_star
        if np.linalg.eigvalsh(sigma)[0] < -1e-12:
            return None
    if abs(np.trace(A @ sigma) - alpha) > 1e-9:
        return None
    return sigma


def test_maxent_optimality_against_perturbations(rng):
    solved = 0
    while solved < 500:
        d = int(rng.integers(2, 5))
        A = random_matrix(rng, d)
        center = complex(np.trace(A)) / d  # mean of f on the basis: inside W
        if me.relative_depth(A, center) < 1e-4:
            continue
        res = me.maxent_interior(A, center)
        assert res.residual <= 1e-8
        solved += 1
        if solved % 10 != 0:
            continue  # the 50-state comparison on every tenth instance
        alpha = complex(np.trace(A @ res.rho))
        for _ in range(50):
            G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            sigma0 = G @ G.conj().T
            sigma0 /= np.trace(sigma0).real
            sigma = _project_to_constraint(A, 0.7 * res.rho + 0.3 * sigma0, alpha, res.rho)
            if sigma is None:
                continue
            assert me.entropy(sigma) <= res.entropy + 1e-8


def test_dual_gradient_matches_finite_differences(rng):
    for _ in range(30):
        d = int(rng.integers(2, 6))
        A = random_matrix(rng, d)
        R, S = mc.re_part(A), mc.im_part(A)
        center = complex(np.trace(A)) / d
        if me.relative_depth(A, center) < 1e-4:
            continue
        res = me.maxent_interior(A, center)
        u, v = res.dual_point
        target = np.array([center.real, center.imag])

        def dual(uv):
            K = uv[0] * R + uv[1] * S
            w = np.linalg.eigvalsh(K)
            m = w[-1]
            return m + np.log(np.sum(np.exp(w - m))) - uv @ target

        for point in (np.array([u, v]), np.zeros(2), np.array([u, v]) / 2 + 0.1):
            K = point[0] * R + point[1] * S
            rho, _ = me._gibbs(K)
            grad = np.array(
                [np.trace(rho @ R).real - target[0], np.trace(rho @ S).real - target[1]]
            )
            h = 1e-5
            for i in range(2):
                e = np.zeros(2)
                e[i] = h
                fd = (dual(point + e) - dual(point - e)) / (2 * h)
                assert abs(fd - grad[i]) < 1e-6


def test_maxent_boundary_fixture_multiply_generated():
    res = me.maxent_boundary(DISK_EIG_BOUNDARY, 1.0 + 0j)
    assert res.entropy == pytest.approx(LOG2, abs=1e-10)
    assert res.residual <= 1e-7
    q1 = np.array([1, 1, 0]) / np.sqrt(2)
    want = (np.outer(q1, q1) + np.diag([0, 0, 1.0])) / 2
    assert np.allclose(res.rho, want, atol=1e-7)
    assert res.dual_point is None


def test_maxent_boundary_pure_state():
    res = me.maxent_boundary(DISK, 0.0 + 1.0j)
    assert res.entropy == pytest.approx(0.0, abs=1e-10)
    v = np.array([1.0, 1.0j]) / np.sqrt(2)
    assert np.allclose(res.rho, np.outer(v, v.conj()), atol=1e-7)


def test_maxent_boundary_normal_vertex():
    res = me.maxent_boundary(TRIANGLE, 1.0 + 0j)
    assert np.allclose(res.rho, np.diag([0, 1.0, 0]), atol=1e-8)
    with pytest.raises(PreconditionError):
        me.maxent_boundary(TRIANGLE, 2.0 + 0j)


def test_maxent_boundary_flat_interior_point():
    # middle of the upper tangent segment of the circle-plus-point range
    mid = 1.25 + 1j * np.sqrt(3) / 4
    res = me.maxent_boundary(CIRCLE_POINT, mid)
    assert res.residual <= 1e-7
    assert res.entropy > 0.0


def test_interior_to_boundary_consistency():
    # radial interior solutions approach the boundary compression value
    target = 1.0 + 0j
    bval = me.maxent_boundary(DISK_EIG_BOUNDARY, target)
    for dist in [1e-3, 1e-4, 1e-5]:
        res = me.maxent_interior(DISK_EIG_BOUNDARY, (1.0 - dist) + 0j)
        assert mc.fro(res.rho - bval.rho) <= max(50 * dist ** 0.5, 1e-4) or mc.fro(
            res.rho - bval.rho
        ) <= 1e-4


def test_interior_continuity(rng):
    A = random_matrix(rng, 3)
    c = complex(np.trace(A)) / 3
    base = me.maxent_interior(A, c)
    for delta in (1e-3, 1e-3j, -1e-3 + 1e-3j):
        res = me.maxent_interior(A, c + delta)
        assert mc.fro(res.rho - base.rho) <= 50 * abs(delta)


def test_round_boundary_points():
    pts = me.round_boundary_points(DISK, 128)
    assert len(pts) == 128
    assert all(abs(abs(p) - 1) < 1e-9 for p in pts)
    assert me.round_boundary_points(TRIANGLE, 128) == []
    pts = me.round_boundary_points(CIRCLE_POINT, 256)
    tangents = [0.5 + 1j * np.sqrt(3) / 2, 0.5 - 1j * np.sqrt(3) / 2]
    for p in pts:
        assert abs(abs(p) - 1) < 1e-6  # on the circle arc
        assert min(abs(p - t) for t in tangents) > 1e-8  # tangent points excluded


def test_discontinuity_probe_fixture():
    rep = me.discontinuity_probe(DISK_EIG_BOUNDARY, 1.0 + 0j)
    assert rep.value_entropy == pytest.approx(LOG2, abs=1e-6)
    assert rep.boundary_limit <= 1e-3
    assert rep.discontinuous
    assert np.all(rep.boundary_entropies <= 1e-6)


def test_discontinuity_probe_rejections():
    with pytest.raises(PreconditionError, match="simply generated"):
        me.discontinuity_probe(DISK, 1.0 + 0j)
    with pytest.raises(PreconditionError):
        me.discontinuity_probe(TRIANGLE, 1.0 + 0j)
    with pytest.raises(PreconditionError):
        me.discontinuity_probe(TRIANGLE, 0.5 + 0.1j)
    with pytest.raises(PreconditionError):
        me.discontinuity_probe(DISK_EIG_BOUNDARY, 0.0 + 1.0j)  # simply generated
