"""
Error control of the Monte Carlo estimator
==========================================

The reported bound should contain the true value in at least a fraction
1 - risk of runs.  Here we repeat the estimate with many seeds and count.
"""

import numpy as np

from covermi import Cover, bruteforce_nmi, estimate_nmi, theta_far

a = Cover.from_modules({"p": "abc", "q": "def"})
b = Cover.from_modules({"x": "abcd", "y": "cdef"})
truth = bruteforce_nmi(a, b).mi.nmi_max

risk, runs = 0.05, 200
errors, bounds, sizes = [], [], []
for seed in range(runs):
    est = estimate_nmi(a, b, risk=risk, tolerance=0.02, seed=seed)
    errors.append(abs(est.nmi - truth))
    bounds.append(est.error_bound)
    sizes.append(est.n_events)

errors, bounds = np.array(errors), np.array(bounds)
print(f"true NMI {truth:.5f}, events per run {int(np.median(sizes))}")
print(f"median error {np.median(errors):.5f}, median bound {np.median(bounds):.5f}")
print(f"runs outside their bound: {(errors > bounds).sum()} of {runs} (allowed about {risk:.0%})")

# The bound comes from the most extreme probability each observed count can
# still plausibly have.  With no successes in 100 trials and a 5% budget:
low, high = theta_far(0, 100, 0.05)
print(f"theta range for 0/100: [{low:.5f}, {high:.5f}]")
