"""S-ramified abelian 3-extensions of Q(sqrt 2).

For a set S of inert primes q = 2 mod 3, the group X_S is built from the
residue rings (Z[sqrt 2]/q)^* modulo the image of the units.  Two primes
with trivial single-prime groups are enough to rule out a free pro-3
Galois group once |S| >= 3.
"""

from ifl.kernel.poly import IntPolynomial
from ifl.nf.field import NumberField
from ifl.restricted import check_thm16, x_q_trivial, xs_finite_level
from ifl.units import unit_order_mod_q

K = NumberField(IntPolynomial.from_high([1, 0, -2]))
eps = K.from_power_basis([1, 1])

for q in (5, 11, 29):
    # 1 + sqrt 2 reaches the 3-part of F_{q^2}^* exactly when 3 divides its order
    print(f"q = {q}: order of 1 + sqrt 2 is {unit_order_mod_q(K, eps, q)}, X_q trivial: {x_q_trivial(K, q)}")

print(f"X_S for S = {{5, 11, 29}}: {xs_finite_level(K, [5, 11, 29]).invariants}")
print(check_thm16(K, [5, 29, 11]).table())

# 53 = -1 mod 9, so its square is 1 mod 9 and the checker says which condition failed.
print(check_thm16(K, [5, 11, 53]).failing)
