"""The maximum-entropy inference map and its jump.

For alpha in the numerical range, the inference state is the maximizer
of the von Neumann entropy among density matrices with tr(A rho) =
alpha.  Inside the range it is a smooth Gibbs family; on the boundary it
lives on the pre-image of the supporting face.  At a multiply generated
round boundary point the two regimes disagree in the limit: the
boundary values nearby are pure (entropy 0), while the value at the
point itself is maximally mixed on its two-dimensional pre-image
(entropy log 2).  The probe exhibits the jump.
"""

import numpy as np

import numrange as nr

A = np.array([[0, 2, 0], [0, 0, 0], [0, 0, 1]], dtype=complex)
alpha = 1.0 + 0.0j

print("matrix (unit disk range, eigenvalue 1 on the boundary):")
print(A)

res = nr.maxent_interior(A, 0.0 + 0.0j)
print(f"\ninference at the center: entropy {res.entropy:.6f} (log 3 = {np.log(3):.6f})")
print(f"  dual point {np.round(res.dual_point, 8)}, constraint residual {res.residual:.1e}")

res = nr.maxent_boundary(A, alpha)
print(f"\ninference at alpha = {alpha}: entropy {res.entropy:.10f} (log 2 = {np.log(2):.10f})")
print("  state = equal mixture over the 2-dimensional pre-image:")
print(np.round(res.rho, 6))

nearby = nr.maxent_boundary(A, np.exp(0.3j))
print(f"\ninference at a nearby boundary point e^0.3i: entropy {nearby.entropy:.2e} (pure)")

print("\nround boundary points (unique supporting line, no flat portion):")
pts = nr.round_boundary_points(A, 128)
print(f"  {len(pts)} sampled; includes alpha?", any(abs(p - alpha) < 1e-6 for p in pts))

rep = nr.discontinuity_probe(A, alpha)
print("\ndiscontinuity probe:")
print("  radial entropies  ->", np.round(rep.radial_entropies, 6))
print("  boundary entropies->", np.round(rep.boundary_entropies[:6], 10))
print(f"  value at alpha = {rep.value_entropy:.6f}")
print(f"  radial limit   = {rep.radial_limit:.6f}")
print(f"  boundary limit = {rep.boundary_limit:.2e}")
print(f"  discontinuous:   {rep.discontinuous}  (jump of log 2 = {np.log(2):.6f})")

# for a normal matrix the map is continuous and the probe refuses
try:
    nr.discontinuity_probe(np.diag([0.0, 1.0, 1.0j]), 1.0 + 0j)
except nr.PreconditionError as exc:
    print("\nnormal matrix:", exc)
