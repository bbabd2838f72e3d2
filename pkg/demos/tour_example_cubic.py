"""The cubic field x^3 - x^2 - 39x - 109 and its class group.

Its discriminant is -39736 (the input -9934 is normalised to it), and
its 3-class group is cyclic of order 9, while the classes of the primes
above 3 only span a subgroup of order 3.
"""

from ifl.classgroup import d_subgroup_order, general_class_group, ideal_class_order, sylow_p
from ifl.cubic import layer_field, normalize_discriminant
from ifl.kernel.poly import parse_polynomial
from ifl.nf.field import NumberField
from ifl.nf.primes import prime_decomposition

D, note = normalize_discriminant(-9934)
print(f"-9934 -> {D}: {note}")

F = NumberField(parse_polynomial("x^3 - x^2 - 39*x - 109"))
print(f"field discriminant {F.disc}")

G = general_class_group(F)
print(f"Cl(F) = {G.invariants} ({G.certification}); Sylow-3 order {sylow_p(G, 3).order}")

for P, e, f in prime_decomposition(F, 3):
    print(f"  prime above 3 with e = {e}, f = {f}: class order {ideal_class_order(P, G)}")
print(f"|D(F)| = {d_subgroup_order(layer_field(F, 0), G)}")
