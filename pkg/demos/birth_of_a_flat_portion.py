"""Watching a flat boundary portion being born.

The unit disk realized by [[0,2,0],[0,0,0],[0,0,1]] carries the
eigenvalue 1 on its boundary, and the point 1 has a two-dimensional
pre-image: two independent unit vectors map onto it.  Exactly at such
multiply generated extreme points a flat boundary portion can be born:
there is an explicit family A_eps -> A whose ranges have genuine
segments on the boundary shrinking onto the point, with closed-form
endpoints.  At simply generated points the construction is impossible,
and the constructor refuses.
"""

import numpy as np

import numrange as nr

A = np.array([[0, 2, 0], [0, 0, 0], [0, 0, 1]], dtype=complex)
alpha = 1.0 + 0.0j

print("base matrix (numerical range = unit disk, eigenvalue on the boundary):")
print(A)

basis = nr.preimage(A, alpha)
print(f"\npre-image dimension at {alpha}: {basis.shape[1]}")
for x in basis.T:
    print("  f(x) =", nr.f_eval(A, x))

fam = nr.birth_family(A, alpha)
print(
    f"\nbirth family: supporting angle {fam.theta:.2e}, height {fam.lam:.2e}, "
    f"tilt eigenvalues mu = ({fam.mu_plus:.1f}, {fam.mu_minus:.1f})"
)

print("\n eps      flat length    d_H to alpha   endpoint error")
for row in nr.verify_birth(fam, [1e-1, 1e-2, 1e-3]):
    print(
        f" {row.eps:<8g} {row.flat_length:<14.10f} {row.hausdorff_to_alpha:<14.10f} "
        f"{row.endpoint_error:.2e}"
    )
print("flat length = eps exactly, d_H = eps * sqrt(2): the linear law")

# the ranges of the family converge to the range of A
eps = [0.2, 0.1, 0.05, 0.025]
dists = nr.range_converges([fam.member(e) for e in eps], A, 1024)
print("\nHausdorff distances W(A_eps) -> W(A):")
for e, dval in zip(eps, dists):
    print(f"  eps={e:<6g} d_H = {dval:.6f}")

# necessity: at simply generated points the construction must fail
DISK = np.array([[0, 2], [0, 0]], dtype=complex)
try:
    nr.birth_family(DISK, 1 + 0j)
except nr.PreconditionError as exc:
    print("\nplain disk at (1,0):", exc)
