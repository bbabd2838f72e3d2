"""A walk through Q(sqrt -211): from the class group to the verdicts.

Run with ``python3 demos/tour_imaginary_quadratic.py``.  Takes a few seconds.
"""

from ifl.classgroup import general_class_group, quad_class_group, sylow_p
from ifl.criteria import analyze
from ifl.cubic import enumerate_cubic_fields
from ifl.iwasawa import lambda_invariant
from ifl.units import e_of_F, fundamental_unit

D = -211

# The 3-part of the class group of k = Q(sqrt D) is cyclic of order 3, so
# there is exactly one unramified cyclic cubic extension of k.  Its fixed
# field F is a non-Galois cubic of discriminant D.
A_k = sylow_p(quad_class_group(D), 3)
print(f"A(k) for D = {D}: {A_k.invariants}")

fields = enumerate_cubic_fields(D)
F = fields[0]
print(f"cubic fields of discriminant {D}: {[str(f.poly) for f in fields]}")

# lambda of the cyclotomic Z_3-extension of k, read off the Stickelberger series.
res = lambda_invariant(D, detail=True)
print(f"lambda(k) = {res.lam}  (readings at (n, N, lambda): {res.steps})")

# F has unit rank one.  e(F) measures how close its unit is to 1 at the
# degree-one prime above 3.
eps = fundamental_unit(F)
print(f"fundamental unit of F: {[str(c) for c in eps.element.power_basis()]}  regulator {eps.regulator:.6f}")
print(f"|A(F)| = {general_class_group(F).order},  e(F) = {e_of_F(F)}")

# Everything at once, with the theorem checkers applied.
rep = analyze(D, 3, 0, cache=None)
print(rep.to_csv())
