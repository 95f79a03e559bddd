#!/usr/bin/env python3
"""Symbolic check of the traveling-wave reduction in docs/traveling_wave.md.

Run: python3 tools/check_reduction.py   (needs sympy)
"""
import sympy as sp

xi = sp.symbols("xi", real=True)
M, A, B, v0, v, gam, q, E = sp.symbols("M A B v0 v gamma q E", positive=True)
a, b, d = sp.symbols("a b d", real=True)

# field equation on u = u0 psi(alpha (x - v t)); p0, p1, p2 stand for psi, psi', psi''
p0, p1, p2 = sp.symbols("p0 p1 p2", real=True)
u0 = sp.sqrt(A / B)
alpha = sp.sqrt(A / (M * (v0**2 - v**2)))
u = u0 * p0
u_t = -u0 * alpha * v * p1
u_tt = u0 * alpha**2 * v**2 * p2
u_xx = u0 * alpha**2 * p2
pde = M * u_tt - M * v0**2 * u_xx - A * u + B * u**3 - q * E + gam * u_t

rho = gam * v * alpha / A
sigma = q * E * sp.sqrt(B) / A ** sp.Rational(3, 2)
target = p2 + rho * p1 - p0**3 + p0 + sigma
assert sp.simplify(pde / (-A * u0) - target) == 0, "reduction"

# closed-form front with a + b + d = 0 and (psi - a)(psi - d)(psi - b) = psi^3 - psi - sig
sig = sp.Symbol("sig")
prof = a + (b - a) / (1 + sp.exp((b - a) * xi / sp.sqrt(2)))
r = sp.Symbol("r")
res = (sp.diff(prof, xi, 2) + r * sp.diff(prof, xi) - (prof - a) * (prof - d) * (prof - b)).subs(d, -a - b)
sol = sp.solve(sp.simplify(res.subs(xi, sp.Rational(37, 100))), r)
assert len(sol) == 1
rho_front = ((a + b - 2 * d) / sp.sqrt(2)).subs(d, -a - b)
assert sp.simplify(sol[0] - rho_front) == 0, "friction"
assert sp.simplify(res.subs(r, rho_front)) == 0, "profile"

# velocity from rho(v) = -3 d / sqrt 2
vel = sp.solve(sp.Eq((gam * v * alpha / A) ** 2, 9 * d**2 / 2), v)
expected = v0 / sp.sqrt(1 + 2 * gam**2 / (9 * d**2 * M * A))
assert all(sp.simplify(c**2 - expected**2) == 0 for c in vel), "velocity"
print("reduction, profile, friction and velocity check out")
