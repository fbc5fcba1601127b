"""
Exhaustive search over non-contextual value assignments.

Giving every spin component a fixed +-1 value makes A*B*C equal D for all 64
assignments, so none reproduces A = B = C = +1 together with D = -1.  For
two particles, S = RR' and T = QQ' are the same product of four values, so
v(S) v(T) = +1 under every one of the 16 assignments.
"""

from singlet_ghz.hvcore import (
    Assignment, contextual_product, enumerate_assignments, ghz_consistency_count, s_value,
    st_product_check, t_value,
)
from singlet_ghz.qcore import Q, Q_PRIME, R, R_PRIME

print("GHZ:", ghz_consistency_count())
print("ST :", st_product_check())

for a in enumerate_assignments(2)[:4]:
    print(dict(a.values), "v(S) =", s_value(a), "v(T) =", t_value(a))

# dropping non-contextuality: T's parts read from a different assignment
v = Assignment.constant(2)
v_prime = v.flipped((0, "x"))
print("contextual S*T with v != v':", contextual_product([v, v, v_prime, v_prime], [R, R_PRIME, Q, Q_PRIME]))
