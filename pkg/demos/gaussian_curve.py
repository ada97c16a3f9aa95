"""Walk through the BSD check for y^2 = x^3 - x, first over Q and then over Q(i).

Run with:  python3 demos/gaussian_curve.py
"""

import mpmath

from cmbsd import hecke_character, parse_curve, verify_bsd_Q, verify_bsd_equivariant_K
from cmbsd.cm import psi_at_prime
from cmbsd.curve import count_points

E = parse_curve("0,0,0,-1,0")
chi = hecke_character(E)
print(f"CM field discriminant {chi.field.disc}, conductor of E: {chi.curve_conductor}")

# Frobenius at a split prime is psi(p), and #E(F_p) = N(1 - psi(p))
for p in (5, 13, 17, 29):
    pi = psi_at_prime(chi, p)
    print(f"  p={p:3d}  psi={pi}  #E(F_p)={count_points(E, p)}  N(1-psi)={(chi.field.one - pi).norm()}")

rep = verify_bsd_Q(E, prec=128)
print("\nOver Q:")
print(f"  L(E,1)      = {mpmath.nstr(mpmath.re(rep.lvalue.value), 25)}")
print(f"  Omega(E)    = {mpmath.nstr(rep.period, 25)}")
print(f"  torsion     = {rep.torsion.order}, Tamagawa = {[d.tamagawa for d in rep.locals]}")
print(f"  sha_pred    = {mpmath.nstr(rep.sha_pred, 20)} -> {rep.verdict}, sha = {rep.sha_rounded}")

repK = verify_bsd_equivariant_K(parse_curve("0,0,0,-1,0@K:-4"), prec=128)
eq = repK.equivariant
print("\nOver Q(i):")
print(f"  L(psi-bar,1)/Omega recognised as {eq['lhs_elem']}")
print(f"  sha ideal {eq['sha_ideal'].to_json()}, generated by {eq['generator']}")
print(f"  verdict {repK.verdict}")
