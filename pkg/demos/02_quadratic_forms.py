"""
Quadratic forms under Gamma0(p) and the Fricke involution.

Lists classes for a few discriminants, compares them with a brute-force
orbit computation, and looks at the forms [p, b, c] that dominate traces.
"""

from __future__ import annotations

from hauptraces.forms import (
    QuadForm,
    discriminant_ok,
    fricke_action,
    gamma0_classes,
    gamma0_classes_bruteforce,
    gamma0star_classes,
    is_equiv_principal,
    lemma_conditions,
    principal_forms,
    sl2_reduce,
)

p, d = 3, 23
ok, betas = discriminant_ok(d, p)
print(f"d={d}, p={p}: valid={ok}, beta values mod 2p = {betas}")
for beta in betas:
    classes = gamma0_classes(d, p, beta)
    brute = gamma0_classes_bruteforce(d, p, beta)
    print(f"  beta={beta}: {len(classes)} classes (brute force finds {len(brute)})")
    for C in classes:
        print("   ", C.representative, "stabilizer", C.stabilizer_order)

print("Gamma0*(3) classes:", [str(C.representative) for C in gamma0star_classes(d, p)])
print("principal forms:", [str(Q) for Q in principal_forms(d, p)])

Q = QuadForm(6, 5, 2)
print(f"{Q} reduces to {sl2_reduce(Q)}, Fricke image {fricke_action(Q, p)}")
# Q represents 3 but is not equivalent to any [3, b, c]
print("conditions (represents 3, has a=3 member, equivalent to principal):", lemma_conditions(Q, p))
print("is_equiv_principal:", is_equiv_principal(Q, d, p))
