"""
How small do |lambda^N - lambda| get for lambda = 1 + 5?

The valuation of lambda^(N-1) - 1 grows like v(N-1) + 1, so the worst
divisors up to degree N shrink roughly like 1/N.  Fitting (c, mu) on
a grid recovers mu = 1 once N_max is large enough.
"""
from fractions import Fraction

import numpy as np

from ncsiegel.divisors import check_siegel, fit_siegel, max_valuation_by_degree
from ncsiegel.params import SiegelParams

ELL = 5

scatter = max_valuation_by_degree([6], ELL, 200)
N = np.array(sorted(scatter))
v = np.array([scatter[n] for n in N], dtype=float)
print("degrees with a new record valuation:")
best = -1
records = []
for n, val in zip(N, v):
    if val > best:
        print("  N=%4d  v=%d" % (n, val))
        records.append((n, val))
        best = val

# at the records, log_5 N tracks the valuation with slope 1
rN, rv = np.array(records).T
print("slope of record v against log_5(N):", round(np.polyfit(np.log(rN - 1) / np.log(ELL), rv, 1)[0], 3))

for nmax in (200, 1000, 10000):
    fit = fit_siegel([6], nmax, ELL)
    print("N_max=%5d  fitted c=%s  mu=%s" % (nmax, fit.params.c, fit.params.mu))

cert = check_siegel([6], SiegelParams(Fraction(1, 10), 1), 10000, ELL)
print("\ncertificate for c=1/10, mu=1:", cert.verdict, "checked", cert.checked)
for w in cert.witnesses[:3]:
    print("  tightest:", w.exponents, "valuation", w.valuation, "margin", round(w.margin, 3))
