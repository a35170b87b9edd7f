"""Independent test oracles: elimination-based common-zero detection and helpers.

These stay deliberately separate from the implementation paths they check.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import sympy

from nevlab.polycore import QI, HomogeneousPolynomial, to_sympy


def random_exact_form(num_vars, degree, seed, coeff_range=9, density=1.0):
    """Random homogeneous form with small integer coefficients."""
    from nevlab.polycore import monomials_of_degree

    rng = random.Random(seed)
    terms = {}
    for mono in monomials_of_degree(num_vars, degree):
        if rng.random() > density:
            continue
        c = rng.randint(-coeff_range, coeff_range)
        if c:
            terms[mono] = QI(c)
    if not terms:
        mono = tuple([degree] + [0] * (num_vars - 1))
        terms[mono] = QI(1)
    return HomogeneousPolynomial(num_vars, terms)


def random_point(num_vars, seed, scale=1.0):
    rng = random.Random(seed)
    return [
        complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))
        for _ in range(num_vars)
    ]


def random_rational_point(num_vars, seed, denominator=16):
    rng = random.Random(seed)
    return [
        QI(Fraction(rng.randint(-32, 32), denominator),
           Fraction(rng.randint(-32, 32), denominator))
        for _ in range(num_vars)
    ]


def elimination_has_common_zero(ps, seed=3, tol=1e-7):
    """Common-projective-zero decision for three ternary forms.

    Exact pairwise-resultant pruning along a seeded generic coordinate change;
    the surviving candidate (z0:z1) lines are checked numerically for a shared
    z2 root.  Independent of the Macaulay construction.
    """
    assert len(ps) == 3 and all(p.num_vars == 3 for p in ps)
    rng = random.Random(seed)
    z = sympy.symbols("z0:3")
    w = sympy.symbols("w0:3")
    while True:
        a = sympy.Matrix(3, 3, lambda i, j: sympy.Rational(rng.randint(-5, 5)))
        if a.det() != 0:
            break
    subs = {z[i]: sum(a[i, j] * w[j] for j in range(3)) for i in range(3)}
    qs = [sympy.expand(to_sympy(p).subs(subs)) for p in ps]

    r01 = sympy.resultant(sympy.Poly(qs[0], w[2]), sympy.Poly(qs[1], w[2]))
    r02 = sympy.resultant(sympy.Poly(qs[0], w[2]), sympy.Poly(qs[2], w[2]))
    r01 = sympy.expand(r01)
    r02 = sympy.expand(r02)
    point_001 = [complex(q.subs({w[0]: 0, w[1]: 0, w[2]: 1})) for q in qs]
    if max(abs(v) for v in point_001) < tol:
        return True
    if r01 == 0 or r02 == 0:
        # a pair shares a component through every line; fall back to sampling
        g = sympy.gcd(r01, r02) if (r01 != 0 or r02 != 0) else sympy.Integer(0)
    else:
        g = sympy.gcd(r01, r02)
    if g.is_number:
        return False
    # candidate lines (w0:w1): numeric roots of g(1, t) plus the w0 = 0 line
    gp = sympy.Poly(g, w[0], w[1])
    coeffs_t = sympy.Poly(g.subs({w[0]: 1}), w[1]).all_coeffs()
    candidates = [(1.0, complex(t)) for t in np.roots([complex(c) for c in coeffs_t])]
    if sympy.expand(g.subs({w[0]: 0, w[1]: 1})) == 0 or gp.degree(w[0]) < gp.total_degree():
        candidates.append((0.0, 1.0))
    for w0v, w1v in candidates:
        pol = sympy.Poly(qs[0].subs({w[0]: w0v, w[1]: w1v}), w[2])
        cs = [complex(c) for c in pol.all_coeffs()]
        if max(abs(c) for c in cs) < tol:
            roots = [0.0]
        else:
            roots = np.roots(cs)
        for root in np.atleast_1d(roots):
            pt = {w[0]: w0v, w[1]: w1v, w[2]: complex(root)}
            scale = max(1.0, abs(w0v), abs(w1v), abs(complex(root))) ** max(
                p.degree for p in ps
            )
            vals = [abs(complex(q.subs(pt))) for q in qs]
            if max(vals) < tol * scale * 100:
                return True
    return False
