"""
The Taylor-type bound ||f(x+eps) - f(x) - A eps|| <= ||f|| ||eps|| / r is sharp.

With f = (x1, 0) and eps = (x1^2, 0) the gap is x1^2 and equality holds.
Random samples sit on or below the bound.
"""
import random
from fractions import Fraction

from ncsiegel import fixtures, sampling
from ncsiegel.endo import EndoTuple, taylor_bound, taylor_gap
from ncsiegel.scalars import exact
from ncsiegel.series import Radius

ELL = 5
f, eps = fixtures.taylor_witness()
for s in (Fraction(1, 2), 1, 2):
    r = Radius(ELL, s)
    gap, bound = taylor_gap(f, [1, 1], eps, r), taylor_bound(f, eps, r)
    print("r=5^-%-4s gap=%s  bound=%s  equal=%s" % (s, gap, bound, gap.s == bound.s))

rng = random.Random(7)
r = Radius(ELL, 1)
slack = []
for _ in range(100):
    g = sampling.random_endo(rng, 2, 6, ELL, 1, 4, 0.4, -1, 3)
    e = sampling.random_normalized(rng, 2, 6, ELL, r.s, 4) - EndoTuple.identity(2, 6, ELL)
    A = [exact(sampling.random_unit(rng, ELL)) for _ in range(2)]
    gap, bound = taylor_gap(g, A, e, r), taylor_bound(g, e, r)
    if not gap.is_zero:
        slack.append(float(gap.s - bound.s))
print("\nrandom samples: min slack %.2f, tight in %d of %d"
      % (min(slack), sum(x == 0 for x in slack), len(slack)))
