"""Gross's formula for Sha of A(p) from supplied t-values, p = 7 and p = 23.

For h = 1 the value is exactly 1 whatever t is.  For p = 23 the product
over class group characters agrees with the group determinant, and
rescaling every t(C) by the same factor leaves the result unchanged.

Run with:  python3 demos/gross_formula.py
"""

import mpmath

from cmbsd import gross_curve_model, gross_sha
from cmbsd.bsd import gross_input

mpmath.mp.prec = 128

g = gross_curve_model(7)
print(f"p=7: j={g.j} m={g.m} n={g.n}  A(7): {g.curve.to_string()}")
print("  Sha from t=(3.5,):", gross_sha(gross_input(7, [mpmath.mpf("3.5")])).value)

t = [mpmath.mpf(x) for x in ("1.25", "0.75", "0.75")]
a = gross_sha(gross_input(23, t))
b = gross_sha(gross_input(23, t), use_determinant=True)
c = gross_sha(gross_input(23, [5 * x for x in t]))
print(f"p=23, t={[str(x) for x in t]}")
print(f"  character product {mpmath.nstr(a.value, 25)}")
print(f"  group determinant {mpmath.nstr(b.value, 25)}")
print(f"  t scaled by 5     {mpmath.nstr(c.value, 25)}")
print("  these t-values are illustrative, not the true values for A(23)")
