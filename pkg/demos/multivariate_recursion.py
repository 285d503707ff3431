"""Multivariate t moments by recursion, and what the literal recursion misses.

The corrected recursion integrates the conditional normal moments over the
gamma mixing variable term by term. The literal recursion instead plugs the
mean of the mixing variable into every occurrence, which is only exact up to
total degree two. At fourth order the two differ by the factor
(nu - 2) / (nu - 4), which the table below makes visible.
"""

import math

import numpy as np

from tmoments.oracle import mc_moment_nd
from tmoments.tnd import TParamsND, raw_moment_nd, raw_moment_nd_literal, std_raw_moment_nd

print("corrected vs literal, n = 1, mu = 0, sigma = 1")
print(f"{'nu':>5} {'k':>2} {'corrected':>20} {'literal':>20} "
      f"{'ratio':>10} {'(nu-2)/(nu-4)':>14}")
for nu in (5.0, 7.0, 10.0, 30.0):
    p = TParamsND([0.0], [[1.0]], nu)
    for k in (2, 4):
        a = raw_moment_nd((k,), p).value
        b = raw_moment_nd_literal((k,), p).value
        ratio = a / b
        expect = (nu - 2.0) / (nu - 4.0) if k == 4 else 1.0
        print(f"{nu:5.1f} {k:2d} {a:20.12e} {b:20.12e} {ratio:10.6f} {expect:14.6f}")

print()
print("dense covariance, n = 2, nu = 12: recursion vs Monte Carlo")
p = TParamsND([0.3, -0.5], [[1.5, 0.4], [0.4, 0.8]], 12.0)
for k in [(1, 0), (2, 0), (1, 1), (2, 1), (2, 2)]:
    res = raw_moment_nd(k, p)
    mc = mc_moment_nd(k, p, n_samples=400_000, seed=7)
    z = (res.value - mc.value) / mc.std_error
    print(f"  k={k}: closed {res.value:18.12e}  mc {mc.value:18.12e}  "
          f"({z:+.2f} standard errors)")

print()
print("standardized moments, mu = 0, scale = I, nu = 9")
nu = 9.0
p = TParamsND(np.zeros(2), np.eye(2), nu)
for k in [(2, 0), (2, 2), (4, 0)]:
    total = sum(k)
    closed = std_raw_moment_nd(k, nu).value
    rec = raw_moment_nd(k, p).value
    # product form: nu^(K/2) Gamma((nu-K)/2)/Gamma(nu/2) * prod k_i!/(2^k_i (k_i/2)!)
    prod = math.prod(math.factorial(ki) / (2 ** ki * math.factorial(ki // 2)) for ki in k)
    direct = nu ** (total / 2) * math.gamma((nu - total) / 2) / math.gamma(nu / 2) * prod
    print(f"  k={k}: table {closed:.15g}  recursion {rec:.15g}  product {direct:.15g}")
