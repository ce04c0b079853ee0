"""
Linearize the one-variable map f(x) = 6x + x^3 over Q_5 and look at the run.

Run with ``python3 demos/cubic_walkthrough.py``.
"""
from ncsiegel import fixtures
from ncsiegel.endo import EndoTuple, compose
from ncsiegel.siegel import formal_linearize, linearize

D = 8
f, r, params = fixtures.cubic_setup(D)
print("f =", f[0])
print("radius 5^-%s, c = %s, mu = %s" % (r.s, params.c, params.mu))

res = linearize(f, r, params)
sched = res.schedule
print("\nB =", sched.B, " rescale exponent =", sched.rescale)
print("product lower bound u =", round(sched.product_lower, 6))
for step in sched.steps:
    print("  step %d  r=5^-%.4f  eta=%.3g  log delta %.3f -> %.3f"
          % (step.n, step.r.s, step.eta, step.delta.s, step.delta_next.s))
print("termination:", sched.termination)

# Psi^-1 o f o Psi should be exactly the linear part
lam = res.lambdas
target = EndoTuple.diagonal(lam, D, 5)
print("\nconjugate is diagonal:", compose(res.PsiInv, compose(f, res.Psi)) == target)
print("Psi =", res.Psi[0])

# the normalized conjugacy is unique, so the formal recursion must agree
print("matches formal recursion:", res.Psi == formal_linearize(f))
