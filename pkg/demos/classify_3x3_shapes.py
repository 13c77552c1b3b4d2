"""The four shape classes of 3x3 numerical ranges, and their closures.

Every 3x3 matrix is exactly one of: R3 (unitarily reducible — the range
is a point, segment, triangle, ellipse, or an ellipse plus an outside
point), E3 (irreducible elliptical), F3 (irreducible with a flat
boundary portion), or O3 (irreducible ovular — the generic case).  The
family [[0,2,0],[0,0,0],[0,0,a]] walks the closure boundary: its range
is the unit disk with the eigenvalue a inside (a < 1), on the boundary
(a = 1), or outside as a vertex (a > 1).
"""

import numpy as np

import numrange as nr


def cp(a):
    return np.array([[0, 2, 0], [0, 0, 0], [0, 0, a]], dtype=complex)


print("classification of the disk-plus-eigenvalue family:")
print(" a      class  shape                        E3 closure  F3 closure")
for a in [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 2.0]:
    cls = nr.classify(cp(a))
    e3 = nr.in_closure_E3(cp(a))
    f3 = nr.in_closure_F3(cp(a))
    print(f" {a:<6g} {cls.class_tag:<6} {cls.shape:<28} {str(e3):<11} {f3}")
print("both closures meet exactly at a = 1: the eigenvalue on the boundary")

print("\nother fixtures:")
for label, M in [
    ("irreducible disk family", nr.m_alpha_beta(0.5, 1.0)),
    ("nilpotent Jordan block", np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)),
    ("normal with triangle range", np.diag([0.0, 1.0, 1.0j])),
    ("generic Gaussian", (np.random.default_rng(5).standard_normal((3, 3))
                          + 1j * np.random.default_rng(6).standard_normal((3, 3)))),
]:
    cls = nr.classify(M)
    extra = ""
    if cls.elliptic is not None:
        e = cls.elliptic.ellipse()
        extra = f" (ellipse: center {e.center:.3f}, semi-minor {e.semi_minor:.4f})"
    print(f"  {label:<28} -> {cls.class_tag} / {cls.shape}{extra}")

# canonical forms modulo unitary similarity + affine reparametrization
print("\ncanonical forms of reducible matrices:")
for label, M in [
    ("diag[1, 3, 5]", np.diag([1.0, 3.0, 5.0]).astype(complex)),
    ("disk + eigenvalue 2", cp(2.0)),
    ("triangle", np.diag([0.0, 1.0, 1.0j])),
]:
    cf = nr.canonical_reducible_form(M)
    par = {"diag_0_lambda_1": f"lambda={cf.lam}", "offdiag_a": f"a={cf.a}"}.get(cf.form, "")
    print(f"  {label:<22} -> {cf.form} {par}")
    check = np.linalg.norm(cf.apply(M) - cf.canonical)
    print(f"     witness transformations reproduce the form to {check:.2e}")

# witness sequences converging to the closure boundary
A = cp(1.0)
print("\nwitnesses at the closure boundary a = 1:")
for eps in (1e-1, 1e-2, 1e-3):
    Be = nr.e3_witness(A, eps)
    Bf = nr.f3_witness(A, eps)
    print(
        f"  eps={eps:<6g} |E3 witness - canonical| = {np.linalg.norm(Be - A):.5f}   "
        f"|F3 witness - canonical| = {np.linalg.norm(Bf - A):.5f}"
    )
print("both shrink linearly in eps, and each re-classifies to its class")
